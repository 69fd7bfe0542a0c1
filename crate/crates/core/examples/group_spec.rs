//! Build a group specification in code, save it as JSON and compare group
//! processing orders.
//!
//! cargo run --example group_spec

use multiwise::model::{compile_to_cnf, parse_feature_tree};
use multiwise::sampler::{multiwise_sample, FeatureGroup, GroupOrder, GroupSpec, SamplerOptions};

fn main() -> multiwise::Result<()> {
    let model = compile_to_cnf(&parse_feature_tree(include_str!("../data/car.uvl"))?);
    let spec = GroupSpec {
        groups: vec![
            FeatureGroup::from_names(&model, "radio", 3, &["Radio", "Ports", "USB", "CD"])?,
            FeatureGroup::from_names(&model, "drive", 2, &["Gearbox", "Manual", "Automatic", "Navigation"])?,
        ],
        // every remaining feature selected and deselected at least once
        default_t: 1,
    };
    println!("{}", spec.to_json(&model));

    for order in [GroupOrder::Spec, GroupOrder::AscendingT, GroupOrder::DescendingT] {
        let sample = multiwise_sample(&model, &spec, &SamplerOptions { order, ..SamplerOptions::default() })?;
        println!("{order:?}: {} configurations", sample.len());
        for g in &sample.stats.groups {
            println!("  {} t={} members={} tuples={}", g.name, g.t, g.members, g.tuples);
        }
    }
    Ok(())
}
