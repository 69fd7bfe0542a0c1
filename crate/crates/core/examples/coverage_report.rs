//! Coverage of a hand-written sample at several strengths, as CSV.
//!
//! cargo run --example coverage_report

use multiwise::interactions::{coverage_csv, coverage_of, enumerate_valid_interactions, uncovered_tuples, CoverageRow};
use multiwise::model::{compile_to_cnf, parse_feature_tree};
use multiwise::sampler::file::parse_sample_file;

const SAMPLE: &str = "\
# model=car seed=0
Car;Carbody;Gearbox;Manual
Car;Carbody;Radio;Ports;USB;Navigation;Gearbox;Automatic
Car;Carbody;Radio;Ports;CD;Bluetooth;Gearbox;Manual
";

fn main() -> multiwise::Result<()> {
    let model = compile_to_cnf(&parse_feature_tree(include_str!("../data/car.uvl"))?);
    // unlisted features stay undecided; the configurations are read as partial
    let sample = parse_sample_file(SAMPLE)?.into_sample(&model)?;
    let all = model.all_features();
    let mut rows = Vec::new();
    for t in 1..=3 {
        let set = enumerate_valid_interactions(&model, &all, t)?;
        rows.push(CoverageRow { scope: "all".into(), t, coverage: coverage_of(&set, sample.configurations()) });
        if t == 2 {
            let missing = uncovered_tuples(&set, sample.configurations());
            let shown: Vec<String> = missing.iter().take(5).map(|tp| tp.display(&model)).collect();
            eprintln!("first uncovered pairs: {}", shown.join(" "));
        }
    }
    print!("{}", coverage_csv(&rows));
    Ok(())
}
