//! Delay against energy budget for OMA and NOMA, written as CSV.
//!
//!     cargo run --release --example energy_sweep > sweep.csv

use std::io;

use noma_mec::experiments::{energy_sweep, write_sweep_csv, SweepSpec};

fn main() -> noma_mec::Result<()> {
    let spec = SweepSpec::default();
    let rows = energy_sweep(&spec)?;
    let losses = rows.iter().filter(|r| r.noma_loses()).count();
    eprintln!("{} budgets, NOMA slower than OMA at {losses}", rows.len());
    write_sweep_csv(&rows, io::stdout().lock())
}
