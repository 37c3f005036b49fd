//! Hybrid-NOMA solvers: find the root `mu*` of the auxiliary function, the
//! reciprocal of the optimal dedicated slot.
//!
//! Both methods start at `mu = inf` and approach `mu*` from the right, where
//! `F < 0` and `F` is strictly decreasing. Every iterate stays right of the
//! root, so neither needs bracketing or damping.

use serde::Serialize;

use super::{HnomaMethod, IterRecord, SolverConfig, SolverTrace};
use crate::auxiliary::{allocate, eval_f, MuPoint, PowerPair};
use crate::error::{Error, Result};
use crate::model::{Allocation, EnergyRegime, System};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HnomaRun {
    pub method: HnomaMethod,
    /// Closed-form allocation at `mu_star` with `t_n = 1 / mu_star`.
    pub allocation: Allocation,
    pub mu_star: f64,
    /// `F(mu_star)`, within `[-delta, delta]`.
    pub f_star: f64,
    /// Number of `mu` updates performed.
    pub iterations: usize,
    pub trace: SolverTrace,
}

fn require_hybrid(sys: &System, energy: f64, operation: &'static str) -> Result<()> {
    let found = sys.classify(energy);
    if found != EnergyRegime::Hybrid {
        return Err(Error::Regime {
            operation,
            expected: "E1 < E < E2",
            found,
            energy,
        });
    }
    Ok(())
}

fn ratio_update(sys: &System, powers: &PowerPair) -> f64 {
    let a = sys.dedicated_rate(powers.p_n2);
    let b = sys.n_nats() - sys.shared_slot_nats(powers.p_n1);
    a / b
}

/// Dinkelbach update `mu_{t+1} = A(mu_t) / B(mu_t)`. Accepts `mu = inf`.
pub fn dinkelbach_step(sys: &System, energy: f64, mu: f64) -> Result<f64> {
    let powers = allocate(sys, energy, mu)?;
    Ok(ratio_update(sys, &powers))
}

/// Newton update `mu_{t+1} = mu_t - F(mu_t) / F'(mu_t)`.
pub fn newton_step(sys: &System, energy: f64, mu: f64) -> Result<f64> {
    let pt = eval_f(sys, energy, mu)?;
    Ok(pt.mu - pt.f / pt.f_prime)
}

fn record(sys: &System, t: usize, pt: &MuPoint) -> IterRecord {
    IterRecord {
        t,
        mu: pt.mu,
        f: pt.f,
        p_n1: pt.powers.p_n1,
        p_n2: pt.powers.p_n2,
        delay: sys.d_m() + 1.0 / pt.mu,
    }
}

fn start_record(sys: &System, powers: PowerPair) -> IterRecord {
    IterRecord {
        t: 0,
        mu: f64::INFINITY,
        f: f64::NEG_INFINITY,
        p_n1: powers.p_n1,
        p_n2: powers.p_n2,
        delay: sys.d_m(),
    }
}

fn finish(
    sys: &System,
    method: HnomaMethod,
    pt: &MuPoint,
    iterations: usize,
    trace: SolverTrace,
) -> HnomaRun {
    let t_n = 1.0 / pt.mu;
    HnomaRun {
        method,
        allocation: Allocation::hybrid(sys.d_m(), pt.powers.p_n1, pt.powers.p_n2, t_n),
        mu_star: pt.mu,
        f_star: pt.f,
        iterations,
        trace,
    }
}

fn convergence_failure(
    method: HnomaMethod,
    cfg: &SolverConfig,
    last_f: f64,
    trace: SolverTrace,
) -> Error {
    Error::Convergence {
        method,
        max_iters: cfg.max_iters,
        last_f,
        trace: Box::new(trace),
    }
}

/// Modified Dinkelbach iteration: powers from the previous `mu` via the
/// closed form, then `mu` from the ratio of rate to remaining nats.
pub fn solve_hnoma_dinkelbach(sys: &System, energy: f64, cfg: &SolverConfig) -> Result<HnomaRun> {
    cfg.validate()?;
    require_hybrid(sys, energy, "dinkelbach")?;
    let mut powers = allocate(sys, energy, f64::INFINITY)?;
    let mut trace = SolverTrace {
        records: vec![start_record(sys, powers)],
    };
    let mut last_f = f64::NEG_INFINITY;
    for t in 1..=cfg.max_iters {
        let mu = ratio_update(sys, &powers);
        let pt = eval_f(sys, energy, mu)?;
        trace.records.push(record(sys, t, &pt));
        if pt.f >= -cfg.delta {
            return Ok(finish(sys, HnomaMethod::Dinkelbach, &pt, t, trace));
        }
        powers = pt.powers;
        last_f = pt.f;
    }
    Err(convergence_failure(
        HnomaMethod::Dinkelbach,
        cfg,
        last_f,
        trace,
    ))
}

/// Newton iteration on `F`. By default the first iterate is the Dinkelbach
/// step from `mu = inf` (so iteration counts line up with
/// [`solve_hnoma_dinkelbach`]); with `newton_mu0_factor` set it starts at
/// `factor * mu_lb(E)` and fails if that point is not right of the root.
pub fn solve_hnoma_newton(sys: &System, energy: f64, cfg: &SolverConfig) -> Result<HnomaRun> {
    cfg.validate()?;
    require_hybrid(sys, energy, "newton")?;
    let (mut pt, mut t, mut trace) = match cfg.newton_mu0_factor {
        None => {
            let limit = allocate(sys, energy, f64::INFINITY)?;
            let pt = eval_f(sys, energy, ratio_update(sys, &limit))?;
            let records = vec![start_record(sys, limit), record(sys, 1, &pt)];
            (pt, 1, SolverTrace { records })
        }
        Some(factor) => {
            let pt = eval_f(sys, energy, factor * sys.mu_lb(energy))?;
            if pt.f >= 0.0 {
                return Err(Error::NewtonStart {
                    mu0: pt.mu,
                    f: pt.f,
                });
            }
            let records = vec![record(sys, 0, &pt)];
            (pt, 0, SolverTrace { records })
        }
    };
    while pt.f < -cfg.delta {
        if t == cfg.max_iters {
            return Err(convergence_failure(HnomaMethod::Newton, cfg, pt.f, trace));
        }
        t += 1;
        pt = eval_f(sys, energy, pt.mu - pt.f / pt.f_prime)?;
        trace.records.push(record(sys, t, &pt));
    }
    Ok(finish(sys, HnomaMethod::Newton, &pt, t, trace))
}

pub fn solve_hnoma(sys: &System, energy: f64, cfg: &SolverConfig) -> Result<HnomaRun> {
    match cfg.method {
        HnomaMethod::Dinkelbach => solve_hnoma_dinkelbach(sys, energy, cfg),
        HnomaMethod::Newton => solve_hnoma_newton(sys, energy, cfg),
    }
}
