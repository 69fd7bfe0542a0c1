//! Satisfiability queries over feature models, configurations, and the
//! analyses built on them (core/dead features, completion, enumeration).

mod solver;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{FeatureModel, Lit};
use crate::{Error, Result};

pub use solver::CdclSolver;

/// A solver that answers queries under assumptions. Implementations keep
/// state between calls (learned clauses) and must be deterministic.
pub trait SatEngine {
    fn num_vars(&self) -> usize;

    /// Whether some total assignment extending `assumptions` satisfies the
    /// formula. On success the assignment is available through [`model`].
    ///
    /// [`model`]: SatEngine::model
    fn solve(&mut self, assumptions: &[Lit]) -> bool;

    /// The satisfying assignment from the last successful [`solve`](SatEngine::solve),
    /// indexed by variable.
    fn model(&self) -> &[bool];

    /// Literals fixed by unit propagation from `assumptions` (including the
    /// assumptions). `None` if propagation alone hits a conflict.
    fn implied(&mut self, assumptions: &[Lit]) -> Option<Vec<Lit>>;

    /// Value tried first when the engine decides `var`.
    fn set_phase(&mut self, var: usize, positive: bool);

    fn solve_calls(&self) -> u64;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Decision {
    Selected,
    Deselected,
    Undecided,
}

impl Decision {
    pub fn from_bool(selected: bool) -> Decision {
        if selected {
            Decision::Selected
        } else {
            Decision::Deselected
        }
    }

    pub fn as_bool(self) -> Option<bool> {
        match self {
            Decision::Selected => Some(true),
            Decision::Deselected => Some(false),
            Decision::Undecided => None,
        }
    }
}

/// Three-valued assignment over the features of a model.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PartialConfiguration {
    values: Vec<Decision>,
}

impl PartialConfiguration {
    pub fn undecided(num_features: usize) -> PartialConfiguration {
        PartialConfiguration {
            values: vec![Decision::Undecided; num_features],
        }
    }

    /// Builds a partial configuration from feature literals. Later literals
    /// override earlier ones on the same feature.
    pub fn from_lits(num_features: usize, lits: &[Lit]) -> PartialConfiguration {
        let mut p = PartialConfiguration::undecided(num_features);
        for &l in lits {
            p.set(l.var(), Decision::from_bool(l.is_positive()));
        }
        p
    }

    /// Convenience for `(name, selected)` pairs.
    pub fn from_names(model: &FeatureModel, entries: &[(&str, bool)]) -> Result<PartialConfiguration> {
        let mut p = PartialConfiguration::undecided(model.num_features());
        for &(name, selected) in entries {
            p.set(model.feature(name)?, Decision::from_bool(selected));
        }
        Ok(p)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, feature: usize) -> Decision {
        self.values[feature]
    }

    pub fn set(&mut self, feature: usize, decision: Decision) {
        self.values[feature] = decision;
    }

    pub fn values(&self) -> &[Decision] {
        &self.values
    }

    pub fn decided_lits(&self) -> Vec<Lit> {
        self.values
            .iter()
            .enumerate()
            .filter_map(|(v, d)| d.as_bool().map(|b| Lit::new(v, b)))
            .collect()
    }

    pub fn is_complete(&self) -> bool {
        self.values.iter().all(|d| *d != Decision::Undecided)
    }

    /// Whether `lit` is decided with the same sign.
    #[inline]
    pub fn contains(&self, lit: Lit) -> bool {
        self.values[lit.var()].as_bool() == Some(lit.is_positive())
    }

    /// Whether `lit` is decided with the opposite sign.
    #[inline]
    pub fn contradicts(&self, lit: Lit) -> bool {
        self.values[lit.var()].as_bool() == Some(!lit.is_positive())
    }
}

/// A complete, valid configuration.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration {
    selected: Vec<bool>,
}

impl Configuration {
    /// Checks validity against the model (auxiliary variables are solved for).
    pub fn new(model: &FeatureModel, selected: Vec<bool>) -> Result<Configuration> {
        if selected.len() != model.num_features() {
            return Err(Error::UnsatisfiablePartial);
        }
        let lits: Vec<Lit> = selected
            .iter()
            .enumerate()
            .map(|(v, &b)| Lit::new(v, b))
            .collect();
        let mut engine = CdclSolver::new(model);
        if engine.solve(&lits) {
            Ok(Configuration { selected })
        } else {
            Err(Error::UnsatisfiablePartial)
        }
    }

    /// Projects a satisfying assignment onto the features.
    pub(crate) fn from_assignment(num_features: usize, assignment: &[bool]) -> Configuration {
        Configuration {
            selected: assignment[..num_features].to_vec(),
        }
    }

    pub fn len(&self) -> usize {
        self.selected.len()
    }

    pub fn is_empty(&self) -> bool {
        self.selected.is_empty()
    }

    #[inline]
    pub fn is_selected(&self, feature: usize) -> bool {
        self.selected[feature]
    }

    #[inline]
    pub fn contains(&self, lit: Lit) -> bool {
        self.selected[lit.var()] == lit.is_positive()
    }

    pub fn selection(&self) -> &[bool] {
        &self.selected
    }

    pub fn lits(&self) -> Vec<Lit> {
        self.selected
            .iter()
            .enumerate()
            .map(|(v, &b)| Lit::new(v, b))
            .collect()
    }

    pub fn to_partial(&self) -> PartialConfiguration {
        PartialConfiguration {
            values: self.selected.iter().map(|&b| Decision::from_bool(b)).collect(),
        }
    }

    pub fn selected_names<'m>(&self, model: &'m FeatureModel) -> Vec<&'m str> {
        self.selected
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(v, _)| model.features()[v].as_str())
            .collect()
    }
}

/// How undecided features are filled in when completing a configuration.
/// Features are decided in ascending variable order with propagation after
/// each decision.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum CompletionPolicy {
    #[default]
    PreferDeselect,
    PreferSelect,
    /// Per-feature preferred value drawn from a seeded generator.
    Random { seed: u64 },
}

impl CompletionPolicy {
    /// Configures the decision phases of `engine`.
    pub fn apply(self, engine: &mut impl SatEngine, num_features: usize) {
        let mut rng = match self {
            CompletionPolicy::Random { seed } => Some(ChaCha8Rng::seed_from_u64(seed)),
            _ => None,
        };
        for v in 0..engine.num_vars() {
            let phase = if v >= num_features {
                false
            } else {
                match (self, rng.as_mut()) {
                    (CompletionPolicy::PreferSelect, _) => true,
                    (_, Some(r)) => r.gen_bool(0.5),
                    _ => false,
                }
            };
            engine.set_phase(v, phase);
        }
    }
}

pub fn is_satisfiable(model: &FeatureModel, assumptions: &PartialConfiguration) -> bool {
    CdclSolver::new(model).solve(&assumptions.decided_lits())
}

/// Rejects void models.
pub fn ensure_satisfiable(model: &FeatureModel) -> Result<()> {
    if CdclSolver::new(model).solve(&[]) {
        Ok(())
    } else {
        Err(Error::VoidModel)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CoreDead {
    /// Features selected in every valid configuration, ascending.
    pub core: Vec<usize>,
    /// Features selected in no valid configuration, ascending.
    pub dead: Vec<usize>,
}

impl CoreDead {
    /// Whether a literal can never hold in a valid configuration.
    pub fn excludes(&self, lit: Lit) -> bool {
        if lit.is_positive() {
            self.dead.binary_search(&lit.var()).is_ok()
        } else {
            self.core.binary_search(&lit.var()).is_ok()
        }
    }
}

pub fn core_dead_features(model: &FeatureModel) -> Result<CoreDead> {
    core_dead_with(&mut CdclSolver::new(model), model.num_features())
}

/// At most `2 * num_features` queries; features seen both ways in an earlier
/// solution need no query.
pub fn core_dead_with(engine: &mut impl SatEngine, num_features: usize) -> Result<CoreDead> {
    if !engine.solve(&[]) {
        return Err(Error::VoidModel);
    }
    let mut seen_true = vec![false; num_features];
    let mut seen_false = vec![false; num_features];
    let record = |m: &[bool], t: &mut [bool], f: &mut [bool]| {
        for v in 0..num_features {
            if m[v] {
                t[v] = true;
            } else {
                f[v] = true;
            }
        }
    };
    record(engine.model(), &mut seen_true, &mut seen_false);
    let mut result = CoreDead::default();
    for v in 0..num_features {
        if !seen_false[v] {
            if engine.solve(&[Lit::neg(v)]) {
                record(engine.model(), &mut seen_true, &mut seen_false);
            } else {
                result.core.push(v);
            }
        }
        if !seen_true[v] {
            if engine.solve(&[Lit::pos(v)]) {
                record(engine.model(), &mut seen_true, &mut seen_false);
            } else {
                result.dead.push(v);
            }
        }
    }
    Ok(result)
}

pub fn complete_configuration(
    model: &FeatureModel,
    partial: &PartialConfiguration,
) -> Result<Configuration> {
    complete_with_policy(model, partial, CompletionPolicy::default())
}

pub fn complete_with_policy(
    model: &FeatureModel,
    partial: &PartialConfiguration,
    policy: CompletionPolicy,
) -> Result<Configuration> {
    let mut engine = CdclSolver::new(model);
    policy.apply(&mut engine, model.num_features());
    complete_with_engine(&mut engine, model.num_features(), partial)
}

/// Completes `partial` using the engine's configured phases.
pub fn complete_with_engine(
    engine: &mut impl SatEngine,
    num_features: usize,
    partial: &PartialConfiguration,
) -> Result<Configuration> {
    if engine.solve(&partial.decided_lits()) {
        Ok(Configuration::from_assignment(num_features, engine.model()))
    } else {
        Err(Error::UnsatisfiablePartial)
    }
}

/// All valid configurations projected onto the features, in lexicographic
/// order over ascending variables with deselected before selected.
pub fn enumerate_all_configurations(model: &FeatureModel, cap: usize) -> Result<Vec<Configuration>> {
    fn descend(
        engine: &mut CdclSolver,
        n: usize,
        prefix: &mut Vec<Lit>,
        cap: usize,
        out: &mut Vec<Configuration>,
    ) -> Result<()> {
        if !engine.solve(prefix) {
            return Ok(());
        }
        if prefix.len() == n {
            if out.len() == cap {
                return Err(Error::CapExceeded { cap });
            }
            out.push(Configuration {
                selected: prefix.iter().map(|l| l.is_positive()).collect(),
            });
            return Ok(());
        }
        let v = prefix.len();
        for value in [false, true] {
            prefix.push(Lit::new(v, value));
            descend(engine, n, prefix, cap, out)?;
            prefix.pop();
        }
        Ok(())
    }

    let mut engine = CdclSolver::new(model);
    let mut out = Vec::new();
    descend(&mut engine, model.num_features(), &mut Vec::new(), cap, &mut out)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_features(clauses: Vec<Vec<Lit>>) -> FeatureModel {
        FeatureModel::new(vec!["R".into(), "X".into()], clauses, 0).unwrap()
    }

    #[test]
    fn dead_feature_from_negative_unit() {
        let m = two_features(vec![vec![Lit::pos(0)], vec![Lit::neg(1)]]);
        let cd = core_dead_features(&m).unwrap();
        assert_eq!(cd.core, vec![0]);
        assert_eq!(cd.dead, vec![1]);
    }

    #[test]
    fn void_model_errors() {
        let m = two_features(vec![vec![Lit::pos(1)], vec![Lit::neg(1)]]);
        assert!(matches!(core_dead_features(&m), Err(Error::VoidModel)));
        assert!(enumerate_all_configurations(&m, 10).unwrap().is_empty());
        assert!(matches!(ensure_satisfiable(&m), Err(Error::VoidModel)));
    }

    #[test]
    fn root_with_optional_child_has_two_configurations() {
        let m = two_features(vec![vec![Lit::pos(0)], vec![Lit::neg(1), Lit::pos(0)]]);
        let all = enumerate_all_configurations(&m, 10).unwrap();
        assert_eq!(all.len(), 2);
        assert!(matches!(
            enumerate_all_configurations(&m, 1),
            Err(Error::CapExceeded { cap: 1 })
        ));
    }

    #[test]
    fn completion_policies() {
        let m = two_features(vec![vec![Lit::pos(0)], vec![Lit::neg(1), Lit::pos(0)]]);
        let empty = PartialConfiguration::undecided(2);
        let c = complete_configuration(&m, &empty).unwrap();
        assert_eq!(c.selection(), &[true, false]);
        let c = complete_with_policy(&m, &empty, CompletionPolicy::PreferSelect).unwrap();
        assert_eq!(c.selection(), &[true, true]);
        let a = complete_with_policy(&m, &empty, CompletionPolicy::Random { seed: 3 }).unwrap();
        let b = complete_with_policy(&m, &empty, CompletionPolicy::Random { seed: 3 }).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn configuration_validation() {
        let m = two_features(vec![vec![Lit::pos(0)]]);
        assert!(Configuration::new(&m, vec![true, false]).is_ok());
        assert!(Configuration::new(&m, vec![false, false]).is_err());
    }
}
