//! Reduces a file of cable words and prints one coefficient per cable.
//!
//! ```text
//! cargo run --example reduce_words -- data/eight_cables.words
//! ```

use std::error::Error;

use cabledeg::word::{parse_word_file, reduce, signed_sum, validate_simple, CableSystemWord};

pub const DEFAULT_WORDS: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data/eight_cables.words");

pub fn run_example() -> Result<Vec<i64>, Box<dyn Error>> {
    let path = std::env::args().nth(1).unwrap_or_else(|| DEFAULT_WORDS.to_string());
    reduce_file(&path)
}

pub fn reduce_file(path: &str) -> Result<Vec<i64>, Box<dyn Error>> {
    let words = parse_word_file(&std::fs::read_to_string(path)?)?;
    let mut coefficients = Vec::new();
    for w in &words {
        let term = reduce(w);
        // the scan and the plain sign sum must agree
        assert_eq!(term.coefficient, signed_sum(w));
        println!("{:>4}  {:<40} -> {}", w.cable_id(), w.to_string(), term);
        coefficients.push(term.coefficient);
    }
    let report = validate_simple(&CableSystemWord::new(words)?);
    for c in report.cables.iter().filter(|c| !c.is_simple()) {
        println!("cable {} is not simple: {:?}", c.cable_id, c.violations);
    }
    println!("coefficients: {coefficients:?}");
    Ok(coefficients)
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example().map(|_| ())
}
