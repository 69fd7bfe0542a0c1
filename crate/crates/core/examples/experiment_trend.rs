//! Runs all seven setups on a seeded synthetic model and prints median
//! sample sizes and enumerated tuple counts per setup.
//!
//! cargo run --release --example experiment_trend [features] [constraints] [seed]

use multiwise::experiment::{
    run_experiments, summarize, synthetic_tree, ExperimentSetup, HarnessOptions, Metric, Stats, SyntheticConfig,
};
use multiwise::model::compile_to_cnf;

fn main() -> multiwise::Result<()> {
    let args: Vec<u64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let config = SyntheticConfig {
        features: args.first().copied().unwrap_or(50) as usize,
        constraints: args.get(1).copied().unwrap_or(15) as usize,
        seed: args.get(2).copied().unwrap_or(1),
        ..SyntheticConfig::default()
    };
    let tree = synthetic_tree(&config);
    let model = compile_to_cnf(&tree);
    println!(
        "features={} cross-tree={} clauses={}",
        model.num_features(),
        tree.constraints.len(),
        model.clauses().len()
    );

    let options = HarnessOptions { jobs: 0, ..HarnessOptions::default() };
    let records = run_experiments(&model, "synthetic", &ExperimentSetup::all(), &options)?;
    let summary = summarize(&records)?;
    for setup in ExperimentSetup::all() {
        let name = setup.name();
        let stat = |metric: Metric| {
            summary
                .iter()
                .find(|r| r.experiment == name && r.metric == metric)
                .map(|r| r.stats.median)
                .unwrap_or(f64::NAN)
        };
        let tuples: Vec<f64> = records.iter().filter(|r| r.experiment == name).map(|r| r.tuples as f64).collect();
        println!(
            "{name}: size={} tuples={} time_ms={:.1} cov_t2={:.4} cov_t3={:.4}",
            stat(Metric::SampleSize),
            Stats::of(&tuples).map(|s| s.median).unwrap_or(0.0),
            stat(Metric::TimeMs),
            stat(Metric::CovT2),
            stat(Metric::CovT3),
        );
    }
    Ok(())
}
