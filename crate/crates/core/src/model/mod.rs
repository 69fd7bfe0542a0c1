//! Feature models: a named feature set plus a CNF clause set over the
//! feature variables and any auxiliary (Tseitin) variables.
//!
//! Variables are 0-based internally. Feature `i` is DIMACS variable `i + 1`,
//! auxiliary variables follow the features.

pub mod compile;
pub mod dimacs;
pub mod io;
pub mod uvl;

use std::collections::HashMap;
use std::fmt;

pub use compile::{compile_to_cnf, compile_with, ConstraintEncoding};
pub use dimacs::{parse_dimacs, write_dimacs, DimacsError};
pub use io::{convert, load_model, read_model, tree_from_model, ModelFormat};
pub use uvl::{parse_feature_tree, print_feature_tree, Formula, GroupKind, TreeNode, FeatureTree, UvlError};

/// A signed variable reference.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lit(u32);

impl Lit {
    #[inline]
    pub fn new(var: usize, positive: bool) -> Lit {
        Lit(((var as u32) << 1) | (!positive as u32))
    }

    #[inline]
    pub fn pos(var: usize) -> Lit {
        Lit::new(var, true)
    }

    #[inline]
    pub fn neg(var: usize) -> Lit {
        Lit::new(var, false)
    }

    #[inline]
    pub fn var(self) -> usize {
        (self.0 >> 1) as usize
    }

    #[inline]
    pub fn is_positive(self) -> bool {
        self.0 & 1 == 0
    }

    /// Dense index usable for per-literal tables (`2 * var + sign`).
    #[inline]
    pub fn code(self) -> usize {
        self.0 as usize
    }

    pub fn from_dimacs(value: i64) -> Lit {
        debug_assert!(value != 0);
        Lit::new(value.unsigned_abs() as usize - 1, value > 0)
    }

    pub fn to_dimacs(self) -> i64 {
        let v = self.var() as i64 + 1;
        if self.is_positive() {
            v
        } else {
            -v
        }
    }
}

impl std::ops::Not for Lit {
    type Output = Lit;
    #[inline]
    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

impl fmt::Debug for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

pub type Clause = Vec<Lit>;

/// A variability model: features with a name ↔ variable bijection and a CNF
/// formula over them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureModel {
    features: Vec<String>,
    var_of: HashMap<String, usize>,
    clauses: Vec<Clause>,
    aux_vars: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("feature name must not be empty")]
    EmptyName,
    #[error("duplicate feature name `{0}`")]
    DuplicateFeature(String),
    #[error("clause {0} is empty")]
    EmptyClause(usize),
    #[error("clause {clause} references variable {var}, but only {max} variables exist")]
    OutOfRange { clause: usize, var: usize, max: usize },
}

impl FeatureModel {
    /// Builds a model, normalizing each clause (duplicate literals removed,
    /// tautologies dropped).
    pub fn new(
        features: Vec<String>,
        clauses: Vec<Clause>,
        aux_vars: usize,
    ) -> Result<FeatureModel, ModelError> {
        let mut var_of = HashMap::with_capacity(features.len());
        for (i, name) in features.iter().enumerate() {
            if name.is_empty() {
                return Err(ModelError::EmptyName);
            }
            if var_of.insert(name.clone(), i).is_some() {
                return Err(ModelError::DuplicateFeature(name.clone()));
            }
        }
        let num_vars = features.len() + aux_vars;
        let mut normalized = Vec::with_capacity(clauses.len());
        for (ci, clause) in clauses.into_iter().enumerate() {
            if clause.is_empty() {
                return Err(ModelError::EmptyClause(ci));
            }
            if let Some(l) = clause.iter().find(|l| l.var() >= num_vars) {
                return Err(ModelError::OutOfRange {
                    clause: ci,
                    var: l.var() + 1,
                    max: num_vars,
                });
            }
            if let Some(c) = normalize_clause(clause) {
                normalized.push(c);
            }
        }
        Ok(FeatureModel {
            features,
            var_of,
            clauses: normalized,
            aux_vars,
        })
    }

    pub fn features(&self) -> &[String] {
        &self.features
    }

    pub fn num_features(&self) -> usize {
        self.features.len()
    }

    pub fn aux_var_count(&self) -> usize {
        self.aux_vars
    }

    /// Feature plus auxiliary variables.
    pub fn num_vars(&self) -> usize {
        self.features.len() + self.aux_vars
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    /// 0-based variable of a feature.
    pub fn var_of(&self, name: &str) -> Option<usize> {
        self.var_of.get(name).copied()
    }

    pub fn name_of(&self, var: usize) -> Option<&str> {
        self.features.get(var).map(String::as_str)
    }

    /// Resolves a feature name, erroring on unknown names.
    pub fn feature(&self, name: &str) -> crate::Result<usize> {
        self.var_of(name)
            .ok_or_else(|| crate::Error::UnknownFeature(name.to_string()))
    }

    /// Literal for a named feature.
    pub fn lit(&self, name: &str, selected: bool) -> crate::Result<Lit> {
        Ok(Lit::new(self.feature(name)?, selected))
    }

    pub fn all_features(&self) -> Vec<usize> {
        (0..self.features.len()).collect()
    }

    /// Whether a total assignment over all variables satisfies every clause.
    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|c| {
            c.iter()
                .any(|l| assignment.get(l.var()).copied() == Some(l.is_positive()))
        })
    }

    /// Renders a literal with its feature name (`Name` / `!Name`), or in
    /// DIMACS form for auxiliary variables.
    pub fn display_lit(&self, lit: Lit) -> String {
        match self.name_of(lit.var()) {
            Some(n) if lit.is_positive() => n.to_string(),
            Some(n) => format!("!{n}"),
            None => format!("{:?}", lit),
        }
    }
}

fn normalize_clause(mut clause: Clause) -> Option<Clause> {
    let mut seen: Vec<Lit> = Vec::with_capacity(clause.len());
    for l in clause.drain(..) {
        if seen.contains(&!l) {
            return None;
        }
        if !seen.contains(&l) {
            seen.push(l);
        }
    }
    Some(seen)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lit_encoding() {
        let l = Lit::new(4, false);
        assert_eq!(l.var(), 4);
        assert!(!l.is_positive());
        assert_eq!(l.to_dimacs(), -5);
        assert_eq!(Lit::from_dimacs(-5), l);
        assert_eq!(!l, Lit::pos(4));
        assert!(Lit::pos(4) < Lit::neg(4));
    }

    #[test]
    fn model_rejects_bad_input() {
        let names = vec!["A".to_string(), "A".to_string()];
        assert_eq!(
            FeatureModel::new(names, vec![], 0),
            Err(ModelError::DuplicateFeature("A".into()))
        );
        let err = FeatureModel::new(vec!["A".into()], vec![vec![Lit::pos(3)]], 0).unwrap_err();
        assert!(matches!(err, ModelError::OutOfRange { var: 4, .. }));
        let err = FeatureModel::new(vec!["A".into()], vec![vec![]], 0).unwrap_err();
        assert_eq!(err, ModelError::EmptyClause(0));
    }

    #[test]
    fn tautologies_and_duplicates_are_normalized() {
        let m = FeatureModel::new(
            vec!["A".into(), "B".into()],
            vec![
                vec![Lit::pos(0), Lit::neg(0)],
                vec![Lit::pos(1), Lit::pos(1), Lit::neg(0)],
            ],
            0,
        )
        .unwrap();
        assert_eq!(m.clauses(), &[vec![Lit::pos(1), Lit::neg(0)]]);
    }
}
