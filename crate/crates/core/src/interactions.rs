//! t-wise interaction tuples: enumeration of the valid ones for a feature
//! scope, and coverage of samples.

use std::collections::{BTreeSet, HashSet};
use std::fmt::{self, Write as _};

use crate::model::{FeatureModel, Lit};
use crate::sat::{core_dead_with, CdclSolver, Configuration, CoreDead, PartialConfiguration, SatEngine};
use crate::{Error, Result};

/// Anything that decides feature literals.
pub trait Assignment {
    fn contains(&self, lit: Lit) -> bool;
}

impl Assignment for Configuration {
    #[inline]
    fn contains(&self, lit: Lit) -> bool {
        Configuration::contains(self, lit)
    }
}

impl Assignment for PartialConfiguration {
    #[inline]
    fn contains(&self, lit: Lit) -> bool {
        PartialConfiguration::contains(self, lit)
    }
}

/// `t` literals over pairwise distinct features, sorted by feature.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InteractionTuple {
    lits: Vec<Lit>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("feature {0} appears twice in an interaction")]
pub struct RepeatedFeature(pub usize);

impl InteractionTuple {
    pub fn new(mut lits: Vec<Lit>) -> std::result::Result<InteractionTuple, RepeatedFeature> {
        lits.sort_by_key(|l| l.var());
        if let Some(w) = lits.windows(2).find(|w| w[0].var() == w[1].var()) {
            return Err(RepeatedFeature(w[0].var()));
        }
        Ok(InteractionTuple { lits })
    }

    /// Builds a tuple from `(name, selected)` pairs.
    pub fn from_names(model: &FeatureModel, entries: &[(&str, bool)]) -> Result<InteractionTuple> {
        let lits = entries
            .iter()
            .map(|&(n, s)| model.lit(n, s))
            .collect::<Result<Vec<_>>>()?;
        InteractionTuple::new(lits).map_err(|e| Error::GroupSpec(e.to_string()))
    }

    pub fn lits(&self) -> &[Lit] {
        &self.lits
    }

    pub fn t(&self) -> usize {
        self.lits.len()
    }

    #[inline]
    pub fn covered_by(&self, config: &impl Assignment) -> bool {
        self.lits.iter().all(|&l| config.contains(l))
    }

    pub fn display(&self, model: &FeatureModel) -> String {
        let parts: Vec<String> = self.lits.iter().map(|&l| model.display_lit(l)).collect();
        format!("({})", parts.join(", "))
    }
}

/// Valid tuples of one strength over one scope, in enumeration order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TupleSet {
    t: usize,
    scope: Vec<usize>,
    tuples: Vec<InteractionTuple>,
}

impl TupleSet {
    pub fn empty(t: usize, scope: Vec<usize>) -> TupleSet {
        TupleSet {
            t,
            scope,
            tuples: Vec::new(),
        }
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn scope(&self) -> &[usize] {
        &self.scope
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn tuples(&self) -> &[InteractionTuple] {
        &self.tuples
    }

    pub fn iter(&self) -> std::slice::Iter<'_, InteractionTuple> {
        self.tuples.iter()
    }

    pub fn to_set(&self) -> BTreeSet<InteractionTuple> {
        self.tuples.iter().cloned().collect()
    }

    pub fn contains(&self, tuple: &InteractionTuple) -> bool {
        self.tuples.contains(tuple)
    }
}

impl<'a> IntoIterator for &'a TupleSet {
    type Item = &'a InteractionTuple;
    type IntoIter = std::slice::Iter<'a, InteractionTuple>;
    fn into_iter(self) -> Self::IntoIter {
        self.tuples.iter()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationOptions {
    /// Reject tuples containing `!c` for a core feature `c` or `d` for a dead
    /// feature `d` without asking the solver.
    pub prefilter: bool,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        EnumerationOptions { prefilter: true }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EnumerationStats {
    pub candidates: u64,
    pub solver_calls: u64,
}

/// Resolves feature names into a sorted, duplicate-free scope.
pub fn scope_from_names<S: AsRef<str>>(model: &FeatureModel, names: &[S]) -> Result<Vec<usize>> {
    let mut scope = names
        .iter()
        .map(|n| model.feature(n.as_ref()))
        .collect::<Result<Vec<_>>>()?;
    scope.sort_unstable();
    scope.dedup();
    Ok(scope)
}

pub fn enumerate_valid_interactions(model: &FeatureModel, scope: &[usize], t: usize) -> Result<TupleSet> {
    let mut engine = CdclSolver::new(model);
    enumerate_with(&mut engine, model, scope, t, EnumerationOptions::default()).map(|(s, _)| s)
}

/// Enumerates all valid `t`-tuples over `scope`. Candidates are visited by
/// ascending feature combination, then by sign pattern with positive before
/// negative.
pub fn enumerate_with(
    engine: &mut impl SatEngine,
    model: &FeatureModel,
    scope: &[usize],
    t: usize,
    options: EnumerationOptions,
) -> Result<(TupleSet, EnumerationStats)> {
    let n = model.num_features();
    if let Some(&bad) = scope.iter().find(|&&v| v >= n) {
        return Err(Error::UnknownFeature(format!("#{}", bad + 1)));
    }
    let mut scope = scope.to_vec();
    scope.sort_unstable();
    scope.dedup();
    let mut stats = EnumerationStats::default();
    if t == 0 {
        return Ok((TupleSet::empty(0, scope), stats));
    }
    if t > scope.len() {
        log::warn!(
            "t = {t} exceeds the scope size {}; no interactions to enumerate",
            scope.len()
        );
        return Ok((TupleSet::empty(t, scope), stats));
    }

    let calls_before = engine.solve_calls();
    let filter = if options.prefilter {
        Some(core_dead_with(engine, n)?)
    } else {
        if !engine.solve(&[]) {
            return Err(Error::VoidModel);
        }
        None
    };
    let mut enumerator = Enumerator {
        engine,
        n,
        filter,
        pool: Vec::new(),
        candidates: 0,
    };
    let tuples = enumerator.run(&scope, t);
    stats.candidates = enumerator.candidates;
    stats.solver_calls = enumerator.engine.solve_calls() - calls_before;
    Ok((TupleSet { t, scope, tuples }, stats))
}

struct Enumerator<'a, E> {
    engine: &'a mut E,
    n: usize,
    filter: Option<CoreDead>,
    /// Feature projections of solutions found so far.
    pool: Vec<Vec<bool>>,
    candidates: u64,
}

impl<E: SatEngine> Enumerator<'_, E> {
    fn run(&mut self, scope: &[usize], t: usize) -> Vec<InteractionTuple> {
        // Every valid t-tuple has only valid (t-1)-subtuples.
        let lower: Option<HashSet<Vec<Lit>>> = if t >= 3 {
            Some(
                self.run(scope, t - 1)
                    .into_iter()
                    .map(|tp| tp.lits)
                    .collect(),
            )
        } else {
            None
        };

        let mut out = Vec::new();
        let mut lits = vec![Lit::pos(0); t];
        let mut sub = Vec::with_capacity(t);
        for combo in Combinations::new(scope.len(), t) {
            for mask in 0u32..(1 << t) {
                for (i, &c) in combo.iter().enumerate() {
                    let negative = mask >> (t - 1 - i) & 1 == 1;
                    lits[i] = Lit::new(scope[c], !negative);
                }
                self.candidates += 1;
                if let Some(cd) = &self.filter {
                    if lits.iter().any(|&l| cd.excludes(l)) {
                        continue;
                    }
                }
                if let Some(lower) = &lower {
                    let pruned = (0..t).any(|skip| {
                        sub.clear();
                        sub.extend(lits.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, l)| *l));
                        !lower.contains(&sub)
                    });
                    if pruned {
                        continue;
                    }
                }
                let witnessed = self
                    .pool
                    .iter()
                    .rev()
                    .any(|w| lits.iter().all(|l| w[l.var()] == l.is_positive()));
                if witnessed || self.check(&lits) {
                    out.push(InteractionTuple { lits: lits.clone() });
                }
            }
        }
        out
    }

    fn check(&mut self, lits: &[Lit]) -> bool {
        if self.engine.solve(lits) {
            self.pool.push(self.engine.model()[..self.n].to_vec());
            true
        } else {
            false
        }
    }
}

/// k-combinations of `0..n` in lexicographic order.
struct Combinations {
    n: usize,
    current: Vec<usize>,
    done: bool,
}

impl Combinations {
    fn new(n: usize, k: usize) -> Combinations {
        Combinations {
            n,
            current: (0..k).collect(),
            done: k > n,
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let item = self.current.clone();
        let k = self.current.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.current[i] < self.n - k + i {
                self.current[i] += 1;
                for j in i + 1..k {
                    self.current[j] = self.current[j - 1] + 1;
                }
                break;
            }
        }
        Some(item)
    }
}

pub fn tuple_covered(config: &Configuration, tuple: &InteractionTuple) -> bool {
    tuple.covered_by(config)
}

/// Tuples of `set` covered by no configuration of `sample`.
pub fn uncovered_tuples<C: Assignment>(set: &TupleSet, sample: &[C]) -> TupleSet {
    TupleSet {
        t: set.t,
        scope: set.scope.clone(),
        tuples: set
            .tuples
            .iter()
            .filter(|tp| !sample.iter().any(|c| tp.covered_by(c)))
            .cloned()
            .collect(),
    }
}

/// Covered over valid tuple counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Coverage {
    pub valid: usize,
    pub covered: usize,
}

impl Coverage {
    /// `covered / valid`, or exactly 1 when there is nothing to cover.
    pub fn ratio(&self) -> f64 {
        if self.valid == 0 {
            1.0
        } else {
            self.covered as f64 / self.valid as f64
        }
    }

    pub fn is_full(&self) -> bool {
        self.covered == self.valid
    }
}

impl fmt::Display for Coverage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "valid={} covered={} ratio={:.6}",
            self.valid,
            self.covered,
            self.ratio()
        )
    }
}

pub fn coverage_of<C: Assignment>(set: &TupleSet, sample: &[C]) -> Coverage {
    Coverage {
        valid: set.len(),
        covered: set
            .tuples
            .iter()
            .filter(|tp| sample.iter().any(|c| tp.covered_by(c)))
            .count(),
    }
}

pub fn coverage_ratio<C: Assignment>(
    model: &FeatureModel,
    sample: &[C],
    t: usize,
    scope: &[usize],
) -> Result<Coverage> {
    let set = enumerate_valid_interactions(model, scope, t)?;
    Ok(coverage_of(&set, sample))
}

/// One row of a coverage report.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverageRow {
    pub scope: String,
    pub t: usize,
    pub coverage: Coverage,
}

pub const COVERAGE_CSV_HEADER: &str = "scope,t,valid_tuples,covered_tuples,ratio";

pub fn coverage_csv(rows: &[CoverageRow]) -> String {
    let mut out = String::from(COVERAGE_CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{:.6}",
            r.scope,
            r.t,
            r.coverage.valid,
            r.coverage.covered,
            r.coverage.ratio()
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combinations_are_lexicographic() {
        let all: Vec<_> = Combinations::new(4, 2).collect();
        assert_eq!(all, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
        assert_eq!(Combinations::new(3, 0).count(), 1);
        assert_eq!(Combinations::new(2, 3).count(), 0);
    }

    #[test]
    fn tuple_rejects_repeated_feature() {
        assert_eq!(InteractionTuple::new(vec![Lit::pos(1), Lit::neg(1)]), Err(RepeatedFeature(1)));
        let tp = InteractionTuple::new(vec![Lit::neg(3), Lit::pos(1)]).unwrap();
        assert_eq!(tp.lits(), &[Lit::pos(1), Lit::neg(3)]);
    }

    #[test]
    fn vacuous_coverage_is_one() {
        let set = TupleSet::empty(2, vec![0, 1]);
        let c = coverage_of::<Configuration>(&set, &[]);
        assert_eq!(c.ratio(), 1.0);
        assert!(uncovered_tuples::<Configuration>(&set, &[]).is_empty());
    }

    #[test]
    fn csv_format() {
        let rows = [CoverageRow { scope: "all".into(), t: 2, coverage: Coverage { valid: 4, covered: 3 } }];
        assert_eq!(coverage_csv(&rows), "scope,t,valid_tuples,covered_tuples,ratio\nall,2,4,3,0.750000\n");
    }
}
