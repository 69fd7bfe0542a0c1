//! Write a model as DIMACS, read it back and recover a flat UVL tree.
//!
//! cargo run --example dimacs_round_trip

use multiwise::model::{convert, parse_dimacs, write_dimacs, ModelFormat};

fn main() -> multiwise::Result<()> {
    let uvl = include_str!("../data/car.uvl");
    let dimacs = convert(uvl, ModelFormat::Uvl, ModelFormat::Dimacs)?;
    let again = write_dimacs(&parse_dimacs(&dimacs)?);
    assert_eq!(dimacs, again);
    print!("{dimacs}");

    // back to UVL: root plus optional children, clauses as constraints
    println!("\n{}", convert(&dimacs, ModelFormat::Dimacs, ModelFormat::Uvl)?);
    Ok(())
}
