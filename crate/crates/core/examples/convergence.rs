//! Convergence traces of both hybrid solvers for several budgets.
//!
//!     cargo run --example convergence

use noma_mec::experiments::convergence_trace;
use noma_mec::{SolverConfig, System, SystemParams};

fn main() -> noma_mec::Result<()> {
    let sys = System::new(SystemParams::reference())?;
    let cfg = SolverConfig::default();
    println!(
        "{:>8} {:>11} {:>7} {:>12}",
        "E", "dinkelbach", "newton", "delay"
    );
    for e in [100.0, 200.0, 500.0, 1000.0, 1900.0] {
        let cmp = convergence_trace(&sys, e, &cfg)?;
        println!(
            "{e:>8} {:>11} {:>7} {:>12.8}",
            cmp.dinkelbach.iterations, cmp.newton.iterations, cmp.newton.allocation.delay
        );
    }
    Ok(())
}
