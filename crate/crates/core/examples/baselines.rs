//! Uniform t-wise sampling of every feature, for t = 1..=3.
//!
//! cargo run --example baselines [model-file]

use multiwise::interactions::coverage_ratio;
use multiwise::model::{compile_to_cnf, load_model, parse_feature_tree};
use multiwise::sampler::{covering_strategy, Sample, SamplerOptions};

fn main() -> multiwise::Result<()> {
    let model = match std::env::args().nth(1) {
        Some(path) => load_model(path)?,
        None => compile_to_cnf(&parse_feature_tree(include_str!("../data/car.uvl"))?),
    };
    let all = model.all_features();
    for t in 1..=3 {
        let sample = covering_strategy(&model, &all, t, Sample::new(), &SamplerOptions::default())?;
        let cov = coverage_ratio(&model, sample.configurations(), t, &all)?;
        println!(
            "t={t}: {} configurations, {} tuples, {:?}, {cov}",
            sample.len(),
            sample.stats.tuples(),
            sample.stats.total
        );
    }
    Ok(())
}
