//! Enumerate the valid interaction tuples of feature groups.
//!
//! cargo run --example tuples

use multiwise::interactions::{enumerate_valid_interactions, scope_from_names};
use multiwise::model::{compile_to_cnf, parse_feature_tree};

fn main() -> multiwise::Result<()> {
    let model = compile_to_cnf(&parse_feature_tree(include_str!("../data/car.uvl"))?);
    let groups: [(&str, usize, &[&str]); 3] = [
        ("TG_1", 1, &["Car", "Radio", "Gearbox"]),
        ("TG_2", 2, &["Carbody", "Manual", "Automatic"]),
        ("TGD", 0, &["USB", "CD", "Ports", "Navigation", "Bluetooth"]),
    ];
    for (name, t, members) in groups {
        let scope = scope_from_names(&model, members)?;
        let set = enumerate_valid_interactions(&model, &scope, t)?;
        let shown: Vec<String> = set.iter().map(|tp| tp.display(&model)).collect();
        println!("{name} (t={t}): {} valid: {}", set.len(), shown.join(" "));
    }

    // a strength of 3 over the whole model
    let all = enumerate_valid_interactions(&model, &model.all_features(), 3)?;
    println!("all features, t=3: {} valid tuples", all.len());
    Ok(())
}
