//! Run the seven experiment setups on a model and print both CSV reports.
//!
//! cargo run --release --example experiment_csv [model-file] [repetitions]

use multiwise::experiment::{results_csv, run_experiments, summarize, summary_csv, ExperimentSetup, HarnessOptions};
use multiwise::model::{compile_to_cnf, load_model, parse_feature_tree};

fn main() -> multiwise::Result<()> {
    let mut args = std::env::args().skip(1);
    let (model, name) = match args.next() {
        Some(path) => (load_model(&path)?, path),
        None => (compile_to_cnf(&parse_feature_tree(include_str!("../data/car.uvl"))?), "car".to_string()),
    };
    let repetitions = args.next().and_then(|r| r.parse().ok()).unwrap_or(10);
    let options = HarnessOptions { repetitions, jobs: 0, ..HarnessOptions::default() };
    let records = run_experiments(&model, &name, &ExperimentSetup::all(), &options)?;
    print!("{}", results_csv(&records));
    println!();
    print!("{}", summary_csv(&summarize(&records)?));
    Ok(())
}
