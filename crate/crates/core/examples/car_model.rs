//! Parse the car feature model, compile it to CNF and analyse it.
//!
//! cargo run --example car_model

use multiwise::model::{compile_to_cnf, parse_feature_tree, write_dimacs};
use multiwise::sat::{core_dead_features, enumerate_all_configurations};

const CAR: &str = include_str!("../data/car.uvl");

fn main() -> multiwise::Result<()> {
    let tree = parse_feature_tree(CAR)?;
    let model = compile_to_cnf(&tree);
    println!("{} features, {} clauses", model.num_features(), model.clauses().len());
    for clause in model.clauses() {
        let lits: Vec<String> = clause.iter().map(|&l| model.display_lit(l)).collect();
        println!("  ({})", lits.join(" | "));
    }

    let cd = core_dead_features(&model)?;
    let names = |vs: &[usize]| vs.iter().map(|&v| model.features()[v].as_str()).collect::<Vec<_>>();
    println!("core: {:?}", names(&cd.core));
    println!("dead: {:?}", names(&cd.dead));

    let all = enumerate_all_configurations(&model, 1000)?;
    println!("{} valid configurations, e.g. {:?}", all.len(), all[0].selected_names(&model));

    print!("\n{}", write_dimacs(&model));
    Ok(())
}
