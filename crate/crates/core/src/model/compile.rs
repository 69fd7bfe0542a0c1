//! Feature-tree semantics to CNF.

use super::uvl::{FeatureTree, Formula, GroupKind, TreeNode};
use super::{Clause, FeatureModel, Lit};
use std::collections::HashMap;

/// How cross-tree constraints are turned into clauses.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum ConstraintEncoding {
    /// Equivalence-preserving distribution of OR over AND. May blow up on
    /// large constraints.
    #[default]
    Distributive,
    /// One auxiliary variable per AND/OR gate. Auxiliary variables are never
    /// features and are never part of an interaction.
    Tseitin,
}

pub fn compile_to_cnf(tree: &FeatureTree) -> FeatureModel {
    compile_with(tree, ConstraintEncoding::Distributive)
}

pub fn compile_with(tree: &FeatureTree, encoding: ConstraintEncoding) -> FeatureModel {
    let names: Vec<String> = tree.features().into_iter().map(str::to_string).collect();
    let var_of: HashMap<&str, usize> = names
        .iter()
        .enumerate()
        .map(|(i, n)| (n.as_str(), i))
        .collect();

    let mut clauses: Vec<Clause> = vec![vec![Lit::pos(0)]];
    tree_clauses(&tree.root, &var_of, &mut clauses);

    let mut next_aux = names.len();
    for constraint in &tree.constraints {
        let nnf = Nnf::from_formula(constraint, true, &var_of);
        match encoding {
            ConstraintEncoding::Distributive => clauses.extend(nnf.distribute()),
            ConstraintEncoding::Tseitin => {
                let root = nnf.tseitin(&mut next_aux, &mut clauses);
                clauses.push(vec![root]);
            }
        }
    }

    let aux = next_aux - names.len();
    FeatureModel::new(names, clauses, aux).expect("tree compilation yields a well-formed model")
}

fn tree_clauses(node: &TreeNode, var_of: &HashMap<&str, usize>, out: &mut Vec<Clause>) {
    let parent = var_of[node.name.as_str()];
    let children: Vec<usize> = node
        .children
        .iter()
        .map(|(c, _)| var_of[c.name.as_str()])
        .collect();
    for (&child, (_, mandatory)) in children.iter().zip(&node.children) {
        out.push(vec![Lit::neg(child), Lit::pos(parent)]);
        if *mandatory && node.kind == GroupKind::And {
            out.push(vec![Lit::neg(parent), Lit::pos(child)]);
        }
    }
    if matches!(node.kind, GroupKind::Or | GroupKind::Alternative) && !children.is_empty() {
        let mut group = vec![Lit::neg(parent)];
        group.extend(children.iter().map(|&c| Lit::pos(c)));
        out.push(group);
        if node.kind == GroupKind::Alternative {
            for (i, &a) in children.iter().enumerate() {
                for &b in &children[i + 1..] {
                    out.push(vec![Lit::neg(a), Lit::neg(b)]);
                }
            }
        }
    }
    for (child, _) in &node.children {
        tree_clauses(child, var_of, out);
    }
}

/// Negation normal form with n-ary connectives.
enum Nnf {
    Lit(Lit),
    And(Vec<Nnf>),
    Or(Vec<Nnf>),
}

impl Nnf {
    fn from_formula(f: &Formula, positive: bool, var_of: &HashMap<&str, usize>) -> Nnf {
        let go = |g: &Formula, p: bool| Nnf::from_formula(g, p, var_of);
        match f {
            Formula::Var(n) => Nnf::Lit(Lit::new(var_of[n.as_str()], positive)),
            Formula::Not(g) => go(g, !positive),
            Formula::And(a, b) if positive => Nnf::And(vec![go(a, true), go(b, true)]),
            Formula::And(a, b) => Nnf::Or(vec![go(a, false), go(b, false)]),
            Formula::Or(a, b) if positive => Nnf::Or(vec![go(a, true), go(b, true)]),
            Formula::Or(a, b) => Nnf::And(vec![go(a, false), go(b, false)]),
            Formula::Implies(a, b) if positive => Nnf::Or(vec![go(a, false), go(b, true)]),
            Formula::Implies(a, b) => Nnf::And(vec![go(a, true), go(b, false)]),
            Formula::Iff(a, b) if positive => Nnf::And(vec![
                Nnf::Or(vec![go(a, false), go(b, true)]),
                Nnf::Or(vec![go(a, true), go(b, false)]),
            ]),
            Formula::Iff(a, b) => Nnf::And(vec![
                Nnf::Or(vec![go(a, true), go(b, true)]),
                Nnf::Or(vec![go(a, false), go(b, false)]),
            ]),
        }
    }

    fn distribute(&self) -> Vec<Clause> {
        match self {
            Nnf::Lit(l) => vec![vec![*l]],
            Nnf::And(parts) => parts.iter().flat_map(Nnf::distribute).collect(),
            Nnf::Or(parts) => {
                let mut acc: Vec<Clause> = vec![Vec::new()];
                for part in parts {
                    let rhs = part.distribute();
                    let mut next = Vec::with_capacity(acc.len() * rhs.len());
                    for a in &acc {
                        for b in &rhs {
                            let mut c = a.clone();
                            for l in b {
                                if !c.contains(l) {
                                    c.push(*l);
                                }
                            }
                            if !c.iter().any(|l| c.contains(&!*l)) {
                                next.push(c);
                            }
                        }
                    }
                    acc = next;
                }
                acc
            }
        }
    }

    /// Returns the literal standing for this subformula.
    fn tseitin(&self, next_aux: &mut usize, out: &mut Vec<Clause>) -> Lit {
        match self {
            Nnf::Lit(l) => *l,
            Nnf::And(parts) | Nnf::Or(parts) => {
                let inputs: Vec<Lit> = parts.iter().map(|p| p.tseitin(next_aux, out)).collect();
                let gate = Lit::pos(*next_aux);
                *next_aux += 1;
                if matches!(self, Nnf::And(_)) {
                    for &x in &inputs {
                        out.push(vec![!gate, x]);
                    }
                    let mut back = vec![gate];
                    back.extend(inputs.iter().map(|&x| !x));
                    out.push(back);
                } else {
                    let mut fwd = vec![!gate];
                    fwd.extend(inputs.iter().copied());
                    out.push(fwd);
                    for &x in &inputs {
                        out.push(vec![gate, !x]);
                    }
                }
                gate
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::uvl::parse_feature_tree;

    #[test]
    fn single_feature_is_one_unit_clause() {
        let m = compile_to_cnf(&parse_feature_tree("features\n  Root").unwrap());
        assert_eq!(m.clauses(), &[vec![Lit::pos(0)]]);
        assert_eq!(m.num_features(), 1);
        assert_eq!(m.aux_var_count(), 0);
    }

    #[test]
    fn distributive_constraint() {
        let src = "features\n  R\n    optional\n      A\n      B\n      C\nconstraints\n  A => B & C\n";
        let m = compile_to_cnf(&parse_feature_tree(src).unwrap());
        let tail: Vec<_> = m.clauses()[m.clauses().len() - 2..].to_vec();
        assert_eq!(tail, vec![vec![Lit::neg(1), Lit::pos(2)], vec![Lit::neg(1), Lit::pos(3)]]);
    }

    #[test]
    fn tseitin_adds_aux_after_features() {
        let src = "features\n  R\n    optional\n      A\n      B\n      C\nconstraints\n  A => B & C\n";
        let m = compile_with(&parse_feature_tree(src).unwrap(), ConstraintEncoding::Tseitin);
        assert_eq!(m.num_features(), 4);
        assert_eq!(m.aux_var_count(), 2);
        assert!(m.clauses().iter().flatten().all(|l| l.var() < 6));
        assert_eq!(m.clauses().last().unwrap(), &vec![Lit::pos(5)]);
    }

    #[test]
    fn tautological_constraint_vanishes() {
        let src = "features\n  R\n    optional\n      A\nconstraints\n  A | !A\n";
        let m = compile_to_cnf(&parse_feature_tree(src).unwrap());
        assert_eq!(m.clauses().len(), 2);
    }
}
