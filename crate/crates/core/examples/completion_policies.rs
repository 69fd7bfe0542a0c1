//! Complete the same partial configuration under each completion policy.
//!
//! cargo run --example completion_policies

use multiwise::model::{compile_to_cnf, parse_feature_tree};
use multiwise::sat::{complete_with_policy, CompletionPolicy, PartialConfiguration};

fn main() -> multiwise::Result<()> {
    let model = compile_to_cnf(&parse_feature_tree(include_str!("../data/car.uvl"))?);
    let partial = PartialConfiguration::from_names(&model, &[("USB", true), ("Manual", true)])?;
    for policy in [
        CompletionPolicy::PreferDeselect,
        CompletionPolicy::PreferSelect,
        CompletionPolicy::Random { seed: 1 },
        CompletionPolicy::Random { seed: 2 },
    ] {
        let c = complete_with_policy(&model, &partial, policy)?;
        println!("{policy:?}: {}", c.selected_names(&model).join(", "));
    }
    Ok(())
}
