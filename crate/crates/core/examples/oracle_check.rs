//! Cross-check the dispatcher against the brute-force grid at a few budgets.
//!
//!     cargo run --release --example oracle_check

use noma_mec::{grid_min_delay, solve, GridSpec, SolverConfig, System, SystemParams};

fn main() -> noma_mec::Result<()> {
    let sys = System::new(SystemParams::reference())?;
    let spec = GridSpec::default();
    for e in [40.0, 80.0, 150.0, 500.0, 1500.0] {
        let solver = solve(&sys, e, &SolverConfig::default())?;
        let grid = grid_min_delay(&sys, e, &spec)?;
        let delay = solver.delay.expect("feasible budget");
        println!(
            "E = {e:>6} {:<9} solver {delay:.6} grid {:.6} (P1 {:.3}, P2 {:.3}) gap {:.1e}",
            solver.regime.as_str(),
            grid.delay,
            grid.p_n1,
            grid.p_n2,
            (grid.delay - delay) / delay
        );
    }
    Ok(())
}
