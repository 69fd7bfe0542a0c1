//! Write a sample to the line-based sample format and read it back.
//!
//! cargo run --example sample_file

use multiwise::model::{compile_to_cnf, parse_feature_tree};
use multiwise::sampler::file::{parse_sample_file, write_sample_file};
use multiwise::sampler::{multiwise_sample, GroupSpec, SamplerOptions};

fn main() -> multiwise::Result<()> {
    let model = compile_to_cnf(&parse_feature_tree(include_str!("../data/car.uvl"))?);
    let options = SamplerOptions { seed: 5, ..SamplerOptions::default() };
    let sample = multiwise_sample(&model, &GroupSpec::uniform(&model, 2), &options)?;
    let text = write_sample_file(&model, &sample, "car", options.seed);
    print!("{text}");

    let parsed = parse_sample_file(&text)?;
    println!("header: model={:?} seed={:?}", parsed.model, parsed.seed);
    let back = parsed.into_sample(&model)?;
    assert_eq!(back, sample);
    println!("{} configurations read back", back.len());
    Ok(())
}
