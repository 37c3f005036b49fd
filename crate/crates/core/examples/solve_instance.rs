//! Solve one instance with the dispatcher and report every mode.
//!
//!     cargo run --example solve_instance -- 500

use noma_mec::{solve, Mode, SolverConfig, System, SystemParams};

fn main() -> noma_mec::Result<()> {
    let energy: f64 = std::env::args()
        .nth(1)
        .map(|s| s.parse().expect("energy must be a number"))
        .unwrap_or(500.0);
    let sys = System::new(SystemParams::reference())?;
    let sol = solve(&sys, energy, &SolverConfig::default())?;

    println!("E = {energy} ({})", sol.regime);
    for mode in Mode::ALL {
        let report = sol.mode(mode).expect("every mode is reported");
        match report.delay {
            Some(d) => println!("  {:<12} delay {d:.6}", mode.as_str()),
            None => println!(
                "  {:<12} infeasible: {}",
                mode.as_str(),
                report.reason.as_deref().unwrap_or("-")
            ),
        }
    }
    if let Some(best) = sol.best {
        println!(
            "best: {} with P1 = {:.4}, P2 = {:.4}, T_n = {:.4}, energy {:.4}",
            best.mode.as_str(),
            best.p_n1,
            best.p_n2,
            best.t_n,
            best.energy_used
        );
    }
    if let (Some(mu), Some(iters)) = (sol.mu_star, sol.iterations) {
        println!("mu* = {mu:.10} after {iters} iterations");
    }
    Ok(())
}
