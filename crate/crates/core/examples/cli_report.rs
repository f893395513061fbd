//! Drives the command layer from code: builds a run configuration, runs it
//! and prints the structured report that `cabledeg vdeg` would write.

use std::error::Error;

use cabledeg::cli::{render, run, Command, Format, Report, RunConfig};

pub fn run_example() -> Result<Report, Box<dyn Error>> {
    let mut config = RunConfig::new(Command::Vdeg {
        mesh: "@nested:3".into(),
    });
    config.resolution = 48;
    let report = run(&config)?;
    print!("{}", render(&report, Format::Structured));
    Ok(report)
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example().map(|_| ())
}
