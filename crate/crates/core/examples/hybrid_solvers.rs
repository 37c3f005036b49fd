//! Dinkelbach and Newton iterations side by side, then a Newton run
//! started from a multiple of the lower bracket instead.
//!
//!     cargo run --example hybrid_solvers

use noma_mec::auxiliary::eval_f;
use noma_mec::{solve_hnoma_dinkelbach, solve_hnoma_newton, SolverConfig, System, SystemParams};

fn main() -> noma_mec::Result<()> {
    let sys = System::new(SystemParams::reference())?;
    let energy = 500.0;
    let cfg = SolverConfig::default();

    let d = solve_hnoma_dinkelbach(&sys, energy, &cfg)?;
    let n = solve_hnoma_newton(&sys, energy, &cfg)?;
    println!("mu_lb = {:.6}", sys.mu_lb(energy));
    println!(" t  {:>22}  {:>22}", "dinkelbach mu", "newton mu");
    for t in 0..d.trace.len().max(n.trace.len()) {
        let cell = |run: &noma_mec::HnomaRun| {
            run.trace
                .records
                .get(t)
                .map_or(String::new(), |r| format!("{:.16}", r.mu))
        };
        println!("{t:>2}  {:>22}  {:>22}", cell(&d), cell(&n));
    }
    println!(
        "delays {:.12} / {:.12}, F(mu*) = {:e} / {:e}",
        d.allocation.delay, n.allocation.delay, d.f_star, n.f_star
    );

    let from_bracket = SolverConfig {
        newton_mu0_factor: Some(20.0),
        ..cfg
    };
    let mu0 = 20.0 * sys.mu_lb(energy);
    println!("F({mu0:.4}) = {:.4}", eval_f(&sys, energy, mu0)?.f);
    let r = solve_hnoma_newton(&sys, energy, &from_bracket)?;
    println!(
        "newton from 20 mu_lb: {} iterations, mu* = {:.12}",
        r.iterations, r.mu_star
    );
    Ok(())
}
