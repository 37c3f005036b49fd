//! Uplink delay minimization for a two-user NOMA mobile-edge-computing
//! system.
//!
//! User m offloads `N` nats within its deadline `D_m` at its OMA power.
//! User n offloads the same amount under an energy budget `E`, choosing
//! between OMA (dedicated slot only), pure NOMA (shares user m's slot
//! only) and hybrid NOMA (both). The crate provides:
//!
//! * [`model`]: parameters, the thresholds `E1`/`E2` and regime
//!   classification;
//! * [`auxiliary`]: the parameterized auxiliary function, its derivatives
//!   and the closed-form power allocation;
//! * [`solvers`]: OMA, pure-NOMA and the Dinkelbach/Newton hybrid solvers,
//!   plus a dispatcher;
//! * [`oracle`]: a brute-force grid search for cross-checking;
//! * [`experiments`]: energy sweeps and convergence traces written as CSV
//!   with a JSON run manifest.
//!
//! ```
//! use noma_mec::{solve, SolverConfig, System, SystemParams, Mode};
//!
//! let sys = System::new(SystemParams::new(15.0, 5.0, 1.0, 1.0)?)?;
//! let sol = solve(&sys, 500.0, &SolverConfig::default())?;
//! assert_eq!(sol.best_mode, Some(Mode::HybridNoma));
//! assert!(sol.delay.unwrap() < sol.mode_delay(Mode::Oma).unwrap());
//! # Ok::<(), noma_mec::Error>(())
//! ```

pub mod auxiliary;
pub mod error;
pub mod experiments;
pub mod manifest;
pub mod model;
pub mod oracle;
pub mod solvers;
pub mod spacing;

pub use auxiliary::{allocate, eval_f, eval_f_second, MuPoint, PowerPair};
pub use error::{Error, Result};
pub use experiments::{convergence_trace, energy_sweep, SweepRow, SweepSpec};
pub use manifest::RunManifest;
pub use model::{
    classify_regime, derive_constants, Allocation, DerivedConstants, EnergyRegime, Instance, Mode,
    System, SystemParams,
};
pub use oracle::{grid_min_delay, GridPoint, GridSpec};
pub use solvers::{
    solve, solve_hnoma_dinkelbach, solve_hnoma_newton, solve_oma, solve_pure_noma, HnomaMethod,
    HnomaRun, Solution, SolverConfig, SolverTrace,
};
pub use spacing::Spacing;
