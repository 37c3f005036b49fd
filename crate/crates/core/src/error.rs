use std::io;

use thiserror::Error;

use crate::model::{EnergyRegime, Mode};
use crate::solvers::{HnomaMethod, SolverTrace};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParam { field: &'static str, reason: String },

    /// `e^{N/D_m}` is not representable.
    #[error("range error: exp(N/D_m) with N/D_m = {ratio} overflows f64")]
    Range { ratio: f64 },

    #[error("allocation leaves NOMA phase: mu = {mu} must exceed mu_lb = {mu_lb}")]
    Domain { mu: f64, mu_lb: f64 },

    #[error("{operation} requires {expected}, but E = {energy} is in regime {found}")]
    Regime {
        operation: &'static str,
        expected: &'static str,
        found: EnergyRegime,
        energy: f64,
    },

    #[error("{mode} is infeasible at E = {energy}: {reason}")]
    Infeasible {
        mode: Mode,
        energy: f64,
        reason: String,
    },

    #[error("{method} did not converge within {max_iters} iterations (last F = {last_f})")]
    Convergence {
        method: HnomaMethod,
        max_iters: usize,
        last_f: f64,
        trace: Box<SolverTrace>,
    },

    #[error("newton start mu0 = {mu0} is left of the root (F(mu0) = {f} >= 0)")]
    NewtonStart { mu0: f64, f: f64 },

    #[error("grid oracle found no feasible point at E = {energy}")]
    EmptyGrid { energy: f64 },

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn param(field: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParam {
            field,
            reason: reason.into(),
        }
    }
}
