//! Mode solvers and the dispatcher that picks the fastest feasible mode.

mod hnoma;
mod oma;
mod pure_noma;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use hnoma::{
    dinkelbach_step, newton_step, solve_hnoma, solve_hnoma_dinkelbach, solve_hnoma_newton, HnomaRun,
};
pub use oma::{oma_energy, solve_oma};
pub use pure_noma::solve_pure_noma;

use crate::error::{Error, Result};
use crate::model::{Allocation, EnergyRegime, Mode, System};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum HnomaMethod {
    Dinkelbach,
    #[default]
    Newton,
}

impl HnomaMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            HnomaMethod::Dinkelbach => "dinkelbach",
            HnomaMethod::Newton => "newton",
        }
    }
}

impl fmt::Display for HnomaMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    /// Iteration stops once `F(mu_t) >= -delta`.
    pub delta: f64,
    pub max_iters: usize,
    /// Start Newton at `factor * mu_lb(E)` instead of at the first
    /// Dinkelbach step from `mu = inf`.
    pub newton_mu0_factor: Option<f64>,
    /// H-NOMA solver used by [`solve`].
    pub method: HnomaMethod,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            delta: 1e-10,
            max_iters: 200,
            newton_mu0_factor: None,
            method: HnomaMethod::Newton,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.delta.is_finite() && self.delta > 0.0) {
            return Err(Error::param(
                "delta",
                format!("must be positive, got {}", self.delta),
            ));
        }
        if self.max_iters == 0 {
            return Err(Error::param("max_iters", "must be at least 1"));
        }
        if let Some(factor) = self.newton_mu0_factor {
            if !(factor.is_finite() && factor > 1.0) {
                return Err(Error::param(
                    "newton_mu0_factor",
                    format!("must exceed 1, got {factor}"),
                ));
            }
        }
        Ok(())
    }
}

/// One iterate of an H-NOMA solver. `t = 0` is the `mu = inf` start
/// (zero dedicated slot) unless Newton was started from a finite factor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IterRecord {
    pub t: usize,
    pub mu: f64,
    pub f: f64,
    pub p_n1: f64,
    pub p_n2: f64,
    /// `D_m + 1 / mu`.
    pub delay: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SolverTrace {
    pub records: Vec<IterRecord>,
}

impl SolverTrace {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn last(&self) -> Option<&IterRecord> {
        self.records.last()
    }

    pub fn mus(&self) -> impl Iterator<Item = f64> + '_ {
        self.records.iter().map(|r| r.mu)
    }

    pub fn is_strictly_decreasing(&self) -> bool {
        self.records.windows(2).all(|w| w[1].mu < w[0].mu)
    }

    /// Every iterate except the last (which passed the stopping test) has
    /// `F < 0`.
    pub fn pre_convergence_negative(&self) -> bool {
        match self.records.split_last() {
            Some((_, rest)) => rest.iter().all(|r| r.f < 0.0),
            None => true,
        }
    }
}

/// Outcome of one mode at a given budget, as reported in a [`Solution`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeReport {
    pub mode: Mode,
    pub feasible: bool,
    pub p_n1: Option<f64>,
    pub p_n2: Option<f64>,
    pub t_n: Option<f64>,
    pub delay: Option<f64>,
    pub energy_used: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub reason: Option<String>,
}

impl ModeReport {
    fn feasible(a: &Allocation) -> Self {
        ModeReport {
            mode: a.mode,
            feasible: true,
            p_n1: Some(a.p_n1),
            p_n2: Some(a.p_n2),
            t_n: Some(a.t_n),
            delay: Some(a.delay),
            energy_used: Some(a.energy_used),
            reason: None,
        }
    }

    fn infeasible(mode: Mode, reason: impl Into<String>) -> Self {
        ModeReport {
            mode,
            feasible: false,
            p_n1: None,
            p_n2: None,
            t_n: None,
            delay: None,
            energy_used: None,
            reason: Some(reason.into()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Solution {
    pub energy: f64,
    pub regime: EnergyRegime,
    pub best_mode: Option<Mode>,
    pub delay: Option<f64>,
    pub best: Option<Allocation>,
    /// One entry per mode, in [`Mode::ALL`] order.
    pub per_mode: Vec<ModeReport>,
    pub mu_star: Option<f64>,
    pub method: Option<HnomaMethod>,
    pub iterations: Option<usize>,
    pub trace: SolverTrace,
}

impl Solution {
    pub fn is_feasible(&self) -> bool {
        self.best.is_some()
    }

    pub fn mode(&self, mode: Mode) -> Option<&ModeReport> {
        self.per_mode.iter().find(|r| r.mode == mode)
    }

    pub fn mode_delay(&self, mode: Mode) -> Option<f64> {
        self.mode(mode).and_then(|r| r.delay)
    }
}

/// H-NOMA wins ties with OMA inside this relative band.
const TIE_BAND: f64 = 1e-12;

/// Classifies `energy`, runs every mode solver, and returns the
/// minimum-delay allocation. An infeasible budget is reported in the
/// returned [`Solution`], not as an error.
pub fn solve(sys: &System, energy: f64, cfg: &SolverConfig) -> Result<Solution> {
    cfg.validate()?;
    if !(energy.is_finite() && energy >= 0.0) {
        return Err(Error::param(
            "energy",
            format!("must be nonnegative, got {energy}"),
        ));
    }
    let regime = sys.classify(energy);

    let oma = solve_oma(sys, energy);
    let pure = solve_pure_noma(sys, energy);
    let hybrid = match regime {
        EnergyRegime::Hybrid => Some(solve_hnoma(sys, energy, cfg)?),
        _ => None,
    };

    let mut per_mode = Vec::with_capacity(3);
    let mut candidates: Vec<Allocation> = Vec::with_capacity(3);
    for (mode, outcome) in [(Mode::Oma, oma), (Mode::PureNoma, pure)] {
        match outcome {
            Ok(a) => {
                per_mode.push(ModeReport::feasible(&a));
                candidates.push(a);
            }
            Err(Error::Infeasible { reason, .. }) => {
                per_mode.push(ModeReport::infeasible(mode, reason))
            }
            Err(e) => return Err(e),
        }
    }
    match &hybrid {
        Some(run) => {
            per_mode.push(ModeReport::feasible(&run.allocation));
            candidates.push(run.allocation);
        }
        None => {
            let reason = if regime == EnergyRegime::PureNoma {
                "E >= E2: the shared slot alone carries the task"
            } else {
                "E <= E1: no positive root of the auxiliary function"
            };
            per_mode.push(ModeReport::infeasible(Mode::HybridNoma, reason));
        }
    }

    let best = candidates.into_iter().reduce(|best, c| {
        let hybrid_tie =
            c.mode == Mode::HybridNoma && (c.delay - best.delay).abs() <= TIE_BAND * best.delay;
        if c.delay < best.delay || hybrid_tie {
            c
        } else {
            best
        }
    });

    Ok(Solution {
        energy,
        regime,
        best_mode: best.map(|b| b.mode),
        delay: best.map(|b| b.delay),
        best,
        per_mode,
        mu_star: hybrid.as_ref().map(|r| r.mu_star),
        method: hybrid.as_ref().map(|r| r.method),
        iterations: hybrid.as_ref().map(|r| r.iterations),
        trace: hybrid.map(|r| r.trace).unwrap_or_default(),
    })
}
