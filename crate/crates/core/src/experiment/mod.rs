//! Repeated sampling runs over the seven experiment setups, with CSV output.

pub mod synthetic;

use std::fmt::{self, Write as _};
use std::str::FromStr;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::interactions::{coverage_of, enumerate_valid_interactions, TupleSet};
use crate::model::FeatureModel;
use crate::sampler::{derive_seed, multiwise_sample, FeatureGroup, GroupSpec, SamplerOptions};
use crate::sat::ensure_satisfiable;

pub use synthetic::{synthetic_tree, SyntheticConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SetupKind {
    /// One group holding every feature.
    Baseline { t: usize },
    /// Features split at random between a pair-wise and a three-wise group.
    Split { pct_t2: u32, pct_t3: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ExperimentSetup {
    pub id: u8,
    pub kind: SetupKind,
}

impl ExperimentSetup {
    pub const fn new(id: u8) -> Option<ExperimentSetup> {
        let kind = match id {
            1 => SetupKind::Baseline { t: 2 },
            2 => SetupKind::Split { pct_t2: 100, pct_t3: 0 },
            3 => SetupKind::Split { pct_t2: 75, pct_t3: 25 },
            4 => SetupKind::Split { pct_t2: 50, pct_t3: 50 },
            5 => SetupKind::Split { pct_t2: 25, pct_t3: 75 },
            6 => SetupKind::Split { pct_t2: 0, pct_t3: 100 },
            7 => SetupKind::Baseline { t: 3 },
            _ => return None,
        };
        Some(ExperimentSetup { id, kind })
    }

    pub fn all() -> Vec<ExperimentSetup> {
        (1..=7).filter_map(ExperimentSetup::new).collect()
    }

    pub fn name(&self) -> String {
        format!("Exp{}", self.id)
    }
}

impl fmt::Display for ExperimentSetup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Exp{}", self.id)
    }
}

impl FromStr for ExperimentSetup {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let digits = s
            .strip_prefix("Exp")
            .or_else(|| s.strip_prefix("exp"))
            .unwrap_or(s);
        digits
            .parse::<u8>()
            .ok()
            .and_then(ExperimentSetup::new)
            .ok_or_else(|| format!("unknown setup `{s}` (expected Exp1..Exp7)"))
    }
}

/// Parses a comma-separated list such as `Exp1,Exp4`.
pub fn parse_setups(list: &str) -> std::result::Result<Vec<ExperimentSetup>, String> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::parse)
        .collect()
}

/// Builds the group specification for one run of `setup`.
pub fn build_setup(setup: ExperimentSetup, model: &FeatureModel, seed: u64) -> GroupSpec {
    let n = model.num_features();
    let groups = match setup.kind {
        SetupKind::Baseline { t } => vec![FeatureGroup::new("all", t, model.all_features())],
        SetupKind::Split { pct_t2, .. } => {
            let mut perm = model.all_features();
            perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
            let k = (n * pct_t2 as usize + 50) / 100;
            let t3 = perm.split_off(k.min(n));
            vec![FeatureGroup::new("TG_t2", 2, perm), FeatureGroup::new("TG_t3", 3, t3)]
        }
    };
    GroupSpec { groups, default_t: 0 }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub experiment: String,
    pub model: String,
    pub repetition: usize,
    pub seed: u64,
    pub sample_size: usize,
    pub time_ms: f64,
    pub cov_t2: f64,
    pub cov_t3: f64,
    /// Number of valid tuples the sampler had to cover. Not part of the CSV.
    pub tuples: usize,
}

#[derive(Debug, Clone)]
pub struct HarnessOptions {
    pub repetitions: usize,
    pub root_seed: u64,
    /// Worker threads; `1` runs sequentially, `0` uses rayon's default.
    pub jobs: usize,
    /// When false, `time_ms` is recorded as zero so output is byte-stable.
    pub timing: bool,
    pub sampler: SamplerOptions,
}

impl Default for HarnessOptions {
    fn default() -> Self {
        HarnessOptions {
            repetitions: 10,
            root_seed: 1,
            jobs: 1,
            timing: true,
            sampler: SamplerOptions::default(),
        }
    }
}

/// Seed of repetition `rep` (1-based) of `setup`.
pub fn run_seed(root: u64, setup: ExperimentSetup, rep: usize) -> u64 {
    derive_seed(derive_seed(root, setup.id as u64), rep as u64)
}

/// Runs every setup `repetitions` times. Records come back in setup then
/// repetition order whatever the number of workers.
pub fn run_experiments(
    model: &FeatureModel,
    model_name: &str,
    setups: &[ExperimentSetup],
    options: &HarnessOptions,
) -> Result<Vec<RunRecord>> {
    ensure_satisfiable(model)?;
    let all = model.all_features();
    let valid_t2 = enumerate_valid_interactions(model, &all, 2)?;
    let valid_t3 = enumerate_valid_interactions(model, &all, 3)?;

    let tasks: Vec<(ExperimentSetup, usize)> = setups
        .iter()
        .flat_map(|&s| (1..=options.repetitions).map(move |r| (s, r)))
        .collect();
    let run = |&(setup, rep): &(ExperimentSetup, usize)| {
        run_one(model, model_name, setup, rep, options, &valid_t2, &valid_t3).map_err(|e| {
            Error::Run {
                context: format!("{setup} repetition {rep}"),
                source: Box::new(e),
            }
        })
    };

    if options.jobs == 1 {
        return tasks.iter().map(run).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(options.jobs)
        .build()
        .map_err(|e| Error::Io(std::io::Error::other(e)))?;
    pool.install(|| tasks.par_iter().map(run).collect())
}

fn run_one(
    model: &FeatureModel,
    model_name: &str,
    setup: ExperimentSetup,
    rep: usize,
    options: &HarnessOptions,
    valid_t2: &TupleSet,
    valid_t3: &TupleSet,
) -> Result<RunRecord> {
    let seed = run_seed(options.root_seed, setup, rep);
    let spec = build_setup(setup, model, seed);
    let sampler = SamplerOptions {
        seed,
        ..options.sampler.clone()
    };
    let start = Instant::now();
    let sample = multiwise_sample(model, &spec, &sampler)?;
    let elapsed = start.elapsed();
    let configs = sample.configurations();
    Ok(RunRecord {
        experiment: setup.name(),
        model: model_name.to_string(),
        repetition: rep,
        seed,
        sample_size: sample.len(),
        time_ms: if options.timing {
            elapsed.as_secs_f64() * 1000.0
        } else {
            0.0
        },
        cov_t2: coverage_of(valid_t2, configs).ratio(),
        cov_t3: coverage_of(valid_t3, configs).ratio(),
        tuples: sample.stats.tuples(),
    })
}

pub const RESULTS_CSV_HEADER: &str = "experiment,model,repetition,seed,sample_size,time_ms,cov_t2,cov_t3";
pub const SUMMARY_CSV_HEADER: &str = "experiment,model,metric,median,q1,q3,min,max";

pub fn results_csv(records: &[RunRecord]) -> String {
    let mut out = format!("{RESULTS_CSV_HEADER}\n");
    for r in records {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{:.3},{:.6},{:.6}",
            r.experiment, r.model, r.repetition, r.seed, r.sample_size, r.time_ms, r.cov_t2, r.cov_t3
        );
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    SampleSize,
    TimeMs,
    CovT2,
    CovT3,
}

impl Metric {
    pub const ALL: [Metric; 4] = [Metric::SampleSize, Metric::TimeMs, Metric::CovT2, Metric::CovT3];

    pub fn name(self) -> &'static str {
        match self {
            Metric::SampleSize => "sample_size",
            Metric::TimeMs => "time_ms",
            Metric::CovT2 => "cov_t2",
            Metric::CovT3 => "cov_t3",
        }
    }

    pub fn of(self, r: &RunRecord) -> f64 {
        match self {
            Metric::SampleSize => r.sample_size as f64,
            Metric::TimeMs => r.time_ms,
            Metric::CovT2 => r.cov_t2,
            Metric::CovT3 => r.cov_t3,
        }
    }

    fn format(self, v: f64) -> String {
        match self {
            Metric::SampleSize => format!("{v}"),
            Metric::TimeMs => format!("{v:.3}"),
            Metric::CovT2 | Metric::CovT3 => format!("{v:.6}"),
        }
    }
}

/// Order statistics; quartiles and median take the lower element when the
/// position falls between two.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stats {
    pub median: f64,
    pub q1: f64,
    pub q3: f64,
    pub min: f64,
    pub max: f64,
}

impl Stats {
    pub fn of(values: &[f64]) -> Option<Stats> {
        if values.is_empty() {
            return None;
        }
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        let at = |quarters: usize| v[(v.len() - 1) * quarters / 4];
        Some(Stats {
            median: at(2),
            q1: at(1),
            q3: at(3),
            min: v[0],
            max: v[v.len() - 1],
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub experiment: String,
    pub model: String,
    pub metric: Metric,
    pub stats: Stats,
}

/// Per (experiment, model) statistics of every metric, in order of first
/// appearance.
pub fn summarize(records: &[RunRecord]) -> Result<Vec<SummaryRow>> {
    if records.is_empty() {
        return Err(Error::NoRecords);
    }
    let mut keys: Vec<(&str, &str)> = Vec::new();
    for r in records {
        let key = (r.experiment.as_str(), r.model.as_str());
        if !keys.contains(&key) {
            keys.push(key);
        }
    }
    let mut rows = Vec::new();
    for (experiment, model) in keys {
        let group: Vec<&RunRecord> = records
            .iter()
            .filter(|r| r.experiment == experiment && r.model == model)
            .collect();
        for metric in Metric::ALL {
            let values: Vec<f64> = group.iter().map(|r| metric.of(r)).collect();
            rows.push(SummaryRow {
                experiment: experiment.to_string(),
                model: model.to_string(),
                metric,
                stats: Stats::of(&values).expect("group is non-empty"),
            });
        }
    }
    Ok(rows)
}

pub fn summary_csv(rows: &[SummaryRow]) -> String {
    let mut out = format!("{SUMMARY_CSV_HEADER}\n");
    for row in rows {
        let f = |v| row.metric.format(v);
        let s = row.stats;
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            row.experiment,
            row.model,
            row.metric.name(),
            f(s.median),
            f(s.q1),
            f(s.q3),
            f(s.min),
            f(s.max)
        );
    }
    out
}
