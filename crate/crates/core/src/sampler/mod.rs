//! Greedy covering of valid interactions and the multi-group driver.
//!
//! [`covering_strategy`] covers every valid `t`-tuple of one feature group:
//! each uncovered tuple is merged into the first configuration of the sample
//! that stays satisfiable with it, otherwise it starts a new partial
//! configuration; finally all partial configurations are completed.
//! [`multiwise_sample`] runs that procedure once per group, each at its own
//! strength, threading the accumulated sample from one group to the next.

pub mod file;

use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::interactions::{enumerate_with, EnumerationOptions, InteractionTuple};
use crate::model::{FeatureModel, Lit};
use crate::sat::{
    complete_with_engine, ensure_satisfiable, CdclSolver, CompletionPolicy, Configuration, Decision,
    PartialConfiguration, SatEngine,
};
use crate::{Error, Result};

pub const DEFAULT_MAX_T: usize = 6;
pub const DEFAULT_GROUP_NAME: &str = "default";

/// A feature subset covered at its own strength.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureGroup {
    pub name: String,
    pub t: usize,
    /// Sorted feature variables.
    pub members: Vec<usize>,
}

impl FeatureGroup {
    pub fn new(name: impl Into<String>, t: usize, mut members: Vec<usize>) -> FeatureGroup {
        members.sort_unstable();
        members.dedup();
        FeatureGroup {
            name: name.into(),
            t,
            members,
        }
    }

    pub fn from_names<S: AsRef<str>>(
        model: &FeatureModel,
        name: impl Into<String>,
        t: usize,
        features: &[S],
    ) -> Result<FeatureGroup> {
        let members = crate::interactions::scope_from_names(model, features)?;
        Ok(FeatureGroup::new(name, t, members))
    }
}

/// Explicit groups plus the strength of the implicit default group, which
/// holds every feature not listed in any explicit group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupSpec {
    pub groups: Vec<FeatureGroup>,
    pub default_t: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupSpecDoc {
    groups: Vec<GroupDoc>,
    default_t: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupDoc {
    name: String,
    t: usize,
    features: Vec<String>,
}

impl GroupSpec {
    /// One group containing every feature.
    pub fn uniform(model: &FeatureModel, t: usize) -> GroupSpec {
        GroupSpec {
            groups: vec![FeatureGroup::new("all", t, model.all_features())],
            default_t: 0,
        }
    }

    /// Parses the JSON group-spec document
    /// `{"groups":[{"name":..,"t":..,"features":[..]}],"default_t":..}`.
    pub fn from_json(model: &FeatureModel, text: &str) -> Result<GroupSpec> {
        let doc: GroupSpecDoc =
            serde_json::from_str(text).map_err(|e| Error::GroupSpec(e.to_string()))?;
        let groups = doc
            .groups
            .iter()
            .map(|g| FeatureGroup::from_names(model, g.name.clone(), g.t, &g.features))
            .collect::<Result<Vec<_>>>()?;
        Ok(GroupSpec {
            groups,
            default_t: doc.default_t,
        })
    }

    pub fn to_json(&self, model: &FeatureModel) -> String {
        let doc = GroupSpecDoc {
            groups: self
                .groups
                .iter()
                .map(|g| GroupDoc {
                    name: g.name.clone(),
                    t: g.t,
                    features: g.members.iter().map(|&v| model.features()[v].clone()).collect(),
                })
                .collect(),
            default_t: self.default_t,
        };
        serde_json::to_string_pretty(&doc).expect("group spec serializes")
    }

    /// Explicit groups in specification order followed by the materialized
    /// default group (omitted when empty).
    pub fn resolve(&self, model: &FeatureModel, max_t: usize) -> Result<Vec<FeatureGroup>> {
        let n = model.num_features();
        let mut listed = vec![false; n];
        let mut out = Vec::with_capacity(self.groups.len() + 1);
        for g in &self.groups {
            if let Some(&bad) = g.members.iter().find(|&&v| v >= n) {
                return Err(Error::UnknownFeature(format!("#{}", bad + 1)));
            }
            if g.t > max_t {
                return Err(Error::StrengthTooLarge { t: g.t, max: max_t });
            }
            for &v in &g.members {
                listed[v] = true;
            }
            out.push(FeatureGroup::new(g.name.clone(), g.t, g.members.clone()));
        }
        if self.default_t > max_t {
            return Err(Error::StrengthTooLarge {
                t: self.default_t,
                max: max_t,
            });
        }
        let rest: Vec<usize> = (0..n).filter(|&v| !listed[v]).collect();
        if !rest.is_empty() {
            out.push(FeatureGroup::new(DEFAULT_GROUP_NAME, self.default_t, rest));
        }
        Ok(out)
    }
}

/// Order in which explicit groups are processed. The default group always
/// comes last.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum GroupOrder {
    #[default]
    Spec,
    AscendingT,
    DescendingT,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum TupleOrder {
    #[default]
    Lexicographic,
    /// Seeded shuffle of the enumeration order.
    Shuffled,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SamplerOptions {
    pub order: GroupOrder,
    /// Keep configurations partial across groups and complete them once at
    /// the end instead of after every group.
    pub defer_completion: bool,
    pub completion: CompletionPolicy,
    pub tuple_order: TupleOrder,
    pub seed: u64,
    pub max_t: usize,
    pub prefilter: bool,
}

impl Default for SamplerOptions {
    fn default() -> Self {
        SamplerOptions {
            order: GroupOrder::Spec,
            defer_completion: false,
            completion: CompletionPolicy::PreferDeselect,
            tuple_order: TupleOrder::Lexicographic,
            seed: 0,
            max_t: DEFAULT_MAX_T,
            prefilter: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupStats {
    pub name: String,
    pub t: usize,
    pub members: usize,
    pub tuples: usize,
    pub duration: Duration,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SampleStats {
    pub groups: Vec<GroupStats>,
    pub total: Duration,
}

impl SampleStats {
    pub fn tuples(&self) -> usize {
        self.groups.iter().map(|g| g.tuples).sum()
    }
}

/// Ordered, duplicate-free list of (possibly partial) configurations.
#[derive(Debug, Clone, Default)]
pub struct Sample {
    configs: Vec<PartialConfiguration>,
    pub stats: SampleStats,
}

impl PartialEq for Sample {
    fn eq(&self, other: &Sample) -> bool {
        self.configs == other.configs
    }
}

impl Eq for Sample {}

impl Sample {
    pub fn new() -> Sample {
        Sample::default()
    }

    /// Keeps the first occurrence of duplicated configurations.
    pub fn from_partials(configs: Vec<PartialConfiguration>) -> Sample {
        let mut s = Sample::new();
        for c in configs {
            s.push(c);
        }
        s
    }

    pub fn from_configurations(configs: Vec<Configuration>) -> Sample {
        Sample::from_partials(configs.iter().map(Configuration::to_partial).collect())
    }

    /// Appends unless an identical configuration is present.
    pub fn push(&mut self, config: PartialConfiguration) -> bool {
        if self.configs.contains(&config) {
            false
        } else {
            self.configs.push(config);
            true
        }
    }

    pub fn configurations(&self) -> &[PartialConfiguration] {
        &self.configs
    }

    pub fn len(&self) -> usize {
        self.configs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.configs.is_empty()
    }

    pub fn is_complete(&self) -> bool {
        self.configs.iter().all(PartialConfiguration::is_complete)
    }

    /// The configurations as [`Configuration`]s, if all are complete.
    /// Validity is not re-checked.
    pub fn complete_configurations(&self) -> Option<Vec<Configuration>> {
        self.configs
            .iter()
            .map(|p| {
                p.values()
                    .iter()
                    .map(|d| d.as_bool())
                    .collect::<Option<Vec<bool>>>()
                    .map(|sel| Configuration::from_assignment(sel.len(), &sel))
            })
            .collect()
    }

    /// Whether every configuration is complete and satisfies the model.
    pub fn is_valid_for(&self, model: &FeatureModel) -> bool {
        let mut engine = CdclSolver::new(model);
        self.configs.iter().all(|c| {
            c.len() == model.num_features() && c.is_complete() && engine.solve(&c.decided_lits())
        })
    }
}

/// SplitMix64-style mixing for derived seeds.
pub fn derive_seed(root: u64, index: u64) -> u64 {
    let mut z = root ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Covers all valid `t`-wise interactions of `members`, extending
/// `seed_sample`.
pub fn covering_strategy(
    model: &FeatureModel,
    members: &[usize],
    t: usize,
    seed_sample: Sample,
    options: &SamplerOptions,
) -> Result<Sample> {
    if t > options.max_t {
        return Err(Error::StrengthTooLarge { t, max: options.max_t });
    }
    let group = FeatureGroup::new("group", t, members.to_vec());
    let start = Instant::now();
    let (mut sample, stats) = cover_group(
        model,
        &group,
        seed_sample,
        options,
        0,
        !options.defer_completion,
    )?;
    sample.stats.groups.push(stats);
    sample.stats.total += start.elapsed();
    Ok(sample)
}

/// Samples so that every group of `spec` reaches full coverage at its own
/// strength.
pub fn multiwise_sample(
    model: &FeatureModel,
    spec: &GroupSpec,
    options: &SamplerOptions,
) -> Result<Sample> {
    multiwise_sample_observed(model, spec, options, |_, _| {})
}

/// Like [`multiwise_sample`], calling `observe` with each group and the
/// accumulated sample after the group has been covered.
pub fn multiwise_sample_observed(
    model: &FeatureModel,
    spec: &GroupSpec,
    options: &SamplerOptions,
    mut observe: impl FnMut(&FeatureGroup, &Sample),
) -> Result<Sample> {
    let start = Instant::now();
    ensure_satisfiable(model)?;
    let groups = spec.resolve(model, options.max_t)?;
    let explicit = spec.groups.len();

    let mut order: Vec<usize> = (0..explicit).collect();
    match options.order {
        GroupOrder::Spec => {}
        GroupOrder::AscendingT => order.sort_by_key(|&i| groups[i].t),
        GroupOrder::DescendingT => order.sort_by_key(|&i| std::cmp::Reverse(groups[i].t)),
    }
    order.extend(explicit..groups.len());

    let mut sample = Sample::new();
    for &i in &order {
        let group = &groups[i];
        let (next, stats) = cover_group(
            model,
            group,
            sample,
            options,
            i as u64,
            !options.defer_completion,
        )?;
        sample = next;
        sample.stats.groups.push(stats);
        observe(group, &sample);
    }
    if options.defer_completion {
        let mut completer = completion_engine(model, options, groups.len() as u64);
        sample = complete_all(&mut completer, model.num_features(), sample)?;
    }
    sample.stats.total = start.elapsed();
    Ok(sample)
}

fn completion_engine(model: &FeatureModel, options: &SamplerOptions, index: u64) -> CdclSolver {
    let mut engine = CdclSolver::new(model);
    let policy = match options.completion {
        CompletionPolicy::Random { seed } => CompletionPolicy::Random {
            seed: derive_seed(seed, index),
        },
        p => p,
    };
    policy.apply(&mut engine, model.num_features());
    engine
}

fn complete_all(engine: &mut CdclSolver, n: usize, sample: Sample) -> Result<Sample> {
    let Sample { configs, stats } = sample;
    let mut out = Sample {
        configs: Vec::with_capacity(configs.len()),
        stats,
    };
    for c in configs {
        let done = if c.is_complete() {
            c
        } else {
            complete_with_engine(engine, n, &c)?.to_partial()
        };
        out.push(done);
    }
    Ok(out)
}

/// A configuration being built, with a satisfying assignment of its
/// decided literals once one is known.
struct Working {
    config: PartialConfiguration,
    witness: Option<Vec<bool>>,
}

impl Working {
    fn witness_agrees(&self, lits: &[Lit]) -> bool {
        self.witness
            .as_ref()
            .is_some_and(|w| lits.iter().all(|l| w[l.var()] == l.is_positive()))
    }

    /// Adds `lits` and every feature literal they imply by propagation.
    fn absorb(&mut self, engine: &mut impl SatEngine, lits: &[Lit], n: usize) {
        for &l in lits {
            self.config.set(l.var(), Decision::from_bool(l.is_positive()));
        }
        if let Some(implied) = engine.implied(&self.config.decided_lits()) {
            for l in implied.into_iter().filter(|l| l.var() < n) {
                self.config.set(l.var(), Decision::from_bool(l.is_positive()));
            }
        }
    }
}

fn cover_group(
    model: &FeatureModel,
    group: &FeatureGroup,
    seed_sample: Sample,
    options: &SamplerOptions,
    index: u64,
    complete: bool,
) -> Result<(Sample, GroupStats)> {
    let start = Instant::now();
    let n = model.num_features();
    let mut engine = CdclSolver::new(model);
    let (set, _) = enumerate_with(
        &mut engine,
        model,
        &group.members,
        group.t,
        EnumerationOptions {
            prefilter: options.prefilter,
        },
    )?;

    let mut tuples: Vec<&InteractionTuple> = set.iter().collect();
    if options.tuple_order == TupleOrder::Shuffled {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(options.seed, index));
        tuples.shuffle(&mut rng);
    }

    let Sample { configs, stats } = seed_sample;
    let mut work: Vec<Working> = configs
        .into_iter()
        .map(|config| Working {
            config,
            witness: None,
        })
        .collect();

    let mut scratch: Vec<Lit> = Vec::new();
    for tuple in tuples {
        let lits = tuple.lits();
        if work.iter().any(|w| tuple.covered_by(&w.config)) {
            continue;
        }
        let mut placed = false;
        for w in work.iter_mut() {
            if lits.iter().any(|&l| w.config.contradicts(l)) {
                continue;
            }
            let fits = w.witness_agrees(lits) || {
                scratch.clear();
                scratch.extend(w.config.decided_lits());
                scratch.extend(lits.iter().filter(|&&l| !w.config.contains(l)));
                if engine.solve(&scratch) {
                    w.witness = Some(engine.model().to_vec());
                    true
                } else {
                    false
                }
            };
            if fits {
                w.absorb(&mut engine, lits, n);
                placed = true;
                break;
            }
        }
        if !placed {
            let mut w = Working {
                config: PartialConfiguration::undecided(n),
                witness: None,
            };
            w.absorb(&mut engine, lits, n);
            work.push(w);
        }
    }

    let mut sample = Sample {
        configs: Vec::with_capacity(work.len()),
        stats,
    };
    for w in work {
        sample.push(w.config);
    }
    if complete {
        let mut completer = completion_engine(model, options, index);
        sample = complete_all(&mut completer, n, sample)?;
    }
    let stats = GroupStats {
        name: group.name.clone(),
        t: group.t,
        members: group.members.len(),
        tuples: set.len(),
        duration: start.elapsed(),
    };
    Ok((sample, stats))
}
