//! Sample the car model with three interaction groups of different
//! strengths and show the sample after each group.
//!
//! cargo run --example worked_example

use multiwise::interactions::coverage_ratio;
use multiwise::model::{compile_to_cnf, parse_feature_tree};
use multiwise::sampler::{multiwise_sample_observed, GroupSpec, SamplerOptions};

fn main() -> multiwise::Result<()> {
    let model = compile_to_cnf(&parse_feature_tree(include_str!("../data/car.uvl"))?);
    let spec = GroupSpec::from_json(&model, include_str!("../data/table1.json"))?;

    for defer in [false, true] {
        println!("defer_completion = {defer}");
        let options = SamplerOptions { defer_completion: defer, ..SamplerOptions::default() };
        let sample = multiwise_sample_observed(&model, &spec, &options, |group, sample| {
            println!("  after {} (t={}): {} configurations", group.name, group.t, sample.len());
        })?;
        for (i, c) in sample.configurations().iter().enumerate() {
            let on: Vec<&str> = (0..c.len())
                .filter(|&v| c.get(v).as_bool() == Some(true))
                .map(|v| model.features()[v].as_str())
                .collect();
            println!("  C{}: {}", i + 1, on.join(", "));
        }
        for g in spec.resolve(&model, options.max_t)? {
            let cov = coverage_ratio(&model, sample.configurations(), g.t, &g.members)?;
            println!("  {} t={}: {cov}", g.name, g.t);
        }
    }
    Ok(())
}
