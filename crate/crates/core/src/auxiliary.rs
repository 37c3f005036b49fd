//! The parameterized auxiliary function used by both H-NOMA solvers.
//!
//! For a fixed `mu`, the auxiliary problem maximizes
//! `A - mu * B` with `A = ln(1 + |h_n|^2 P_{n,2})` (dedicated-slot rate) and
//! `B = N - D_m ln(1 + e^{-N/D_m} P_{n,1} |h_n|^2)` (nats left for the
//! dedicated slot), subject to `D_m P_{n,1} + P_{n,2} / mu <= E`. The
//! maximizer has a closed form ([`allocate`]) and the optimal dedicated
//! slot is `1 / mu*` where `mu*` is the unique root of `F` above
//! [`System::mu_lb`].
//!
//! Writing `K = |h_n|^2 E + D_m (e^{N/D_m} - 1)` and
//! `M = e^{N/D_m} D_m + |h_n|^2 E` (so `M - D_m = K`):
//!
//! * `F'(mu)  = K / (M mu + 1) - B(mu)`
//! * `F''(mu) = -K^2 / ((M mu + 1)^2 (D_m mu + 1))`

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::System;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerPair {
    pub p_n1: f64,
    pub p_n2: f64,
}

/// `F` and its pieces evaluated at one `mu`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MuPoint {
    pub mu: f64,
    pub f: f64,
    pub f_prime: f64,
    /// Dedicated-slot rate at the closed-form allocation.
    pub a: f64,
    /// Nats remaining after the shared slot.
    pub b: f64,
    pub powers: PowerPair,
}

fn check_mu(sys: &System, energy: f64, mu: f64) -> Result<()> {
    if !(energy.is_finite() && energy > 0.0) {
        return Err(Error::param(
            "energy",
            format!("must be positive, got {energy}"),
        ));
    }
    let mu_lb = sys.mu_lb(energy);
    if mu.is_nan() || mu <= mu_lb {
        return Err(Error::Domain { mu, mu_lb });
    }
    Ok(())
}

/// Closed-form maximizer of the auxiliary problem at `mu`.
///
/// `mu = f64::INFINITY` is accepted and yields the limit allocation
/// `P_{n,1} = E / D_m`, `P_{n,2} = (E + D_m (e^{N/D_m} - 1) |h_n|^{-2}) / D_m`
/// used to start both iterations. The budget binds:
/// `D_m P_{n,1} + P_{n,2} / mu = E`.
pub fn allocate(sys: &System, energy: f64, mu: f64) -> Result<PowerPair> {
    check_mu(sys, energy, mu)?;
    let d_m = sys.d_m();
    let c = sys.growth_over_gain();
    let slot = 1.0 / mu;
    let denom = d_m + slot;
    Ok(PowerPair {
        p_n1: (energy - slot * c) / denom,
        p_n2: (energy + d_m * c) / denom,
    })
}

/// `K / (M mu + 1)`, i.e. `A'(mu) - mu B'(mu)`. Always positive.
pub fn rate_slope(sys: &System, energy: f64, mu: f64) -> f64 {
    let (k, m) = slope_terms(sys, energy);
    k / (m * mu + 1.0)
}

fn slope_terms(sys: &System, energy: f64) -> (f64, f64) {
    let g = sys.h_n_sq();
    let x = sys.exp_ratio();
    let d_m = sys.d_m();
    (g * energy + d_m * (x - 1.0), x * d_m + g * energy)
}

pub fn eval_f(sys: &System, energy: f64, mu: f64) -> Result<MuPoint> {
    if !mu.is_finite() {
        return Err(Error::param("mu", "F is only evaluated at finite mu"));
    }
    let powers = allocate(sys, energy, mu)?;
    let a = sys.dedicated_rate(powers.p_n2);
    let b = sys.n_nats() - sys.shared_slot_nats(powers.p_n1);
    Ok(MuPoint {
        mu,
        f: a - mu * b,
        f_prime: rate_slope(sys, energy, mu) - b,
        a,
        b,
        powers,
    })
}

pub fn eval_f_second(sys: &System, energy: f64, mu: f64) -> Result<f64> {
    if !mu.is_finite() {
        return Err(Error::param("mu", "F'' is only evaluated at finite mu"));
    }
    check_mu(sys, energy, mu)?;
    let (k, m) = slope_terms(sys, energy);
    let outer = m * mu + 1.0;
    Ok(-(k * k) / (outer * outer * (mu * sys.d_m() + 1.0)))
}

/// Limit of `F(mu)` as `mu` decreases to [`System::mu_lb`]:
/// `N / D_m - N (e^{N/D_m} - 1) |h_n|^{-2} / E`. Positive iff `E > E1`.
pub fn f_at_lower_limit(sys: &System, energy: f64) -> f64 {
    let n = sys.n_nats();
    n / sys.d_m() - n * sys.growth_over_gain() / energy
}
