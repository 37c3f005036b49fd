//! Brute-force grid search over `(P_{n,1}, P_{n,2})`, kept independent of
//! the closed-form machinery so it can validate the solvers.
//!
//! The objective is `D_m + T_n` with `T_n` taken straight from its
//! definition and user m's interference term `P_m |h_m|^2 + 1` rebuilt
//! from `P_m`. Points violating `D_m P_{n,1} + T_n P_{n,2} <= E` or with
//! `T_n < 0` are dropped. The `P_{n,1} = 0` column is the OMA mode.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{EnergyRegime, System};
use crate::spacing::Spacing;

/// Lowest `P_{n,2}` of a log-spaced axis, relative to its maximum.
const LOG_AXIS_FLOOR: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GridSpec {
    /// Points on `[0, E / D_m]`, both ends included.
    pub p1_points: usize,
    /// Points on `(0, p2_max]`.
    pub p2_points: usize,
    /// `p2_max` as a multiple of `(E + D_m (e^{N/D_m} - 1) |h_n|^{-2}) / D_m`.
    pub p2_max_multiplier: f64,
    pub p2_spacing: Spacing,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            p1_points: 2001,
            p2_points: 2001,
            p2_max_multiplier: 2.0,
            p2_spacing: Spacing::Linear,
        }
    }
}

impl GridSpec {
    pub fn square(points: usize) -> Self {
        GridSpec {
            p1_points: points,
            p2_points: points,
            ..GridSpec::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.p1_points < 2 {
            return Err(Error::param("p1_points", "need at least 2 points"));
        }
        if self.p2_points < 2 {
            return Err(Error::param("p2_points", "need at least 2 points"));
        }
        if !(self.p2_max_multiplier >= 1.0 && self.p2_max_multiplier.is_finite()) {
            return Err(Error::param(
                "p2_max_multiplier",
                format!("must be at least 1, got {}", self.p2_max_multiplier),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub delay: f64,
    pub p_n1: f64,
    pub p_n2: f64,
    pub t_n: f64,
    pub energy_used: f64,
}

fn p2_axis(p2_max: f64, spec: &GridSpec) -> Vec<f64> {
    let n = spec.p2_points;
    match spec.p2_spacing {
        Spacing::Linear => (1..=n).map(|j| p2_max * (j as f64 / n as f64)).collect(),
        Spacing::Log => Spacing::Log.points(p2_max * LOG_AXIS_FLOOR, p2_max, n),
    }
}

fn cmp_candidates(a: &(f64, usize, usize), b: &(f64, usize, usize)) -> Ordering {
    a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2))
}

/// Minimum delay over the grid. Ties resolve to the smallest `(p1, p2)`.
pub fn grid_min_delay(sys: &System, energy: f64, spec: &GridSpec) -> Result<GridPoint> {
    spec.validate()?;
    let found = sys.classify(energy);
    if !matches!(found, EnergyRegime::OmaOnly | EnergyRegime::Hybrid) {
        return Err(Error::Regime {
            operation: "grid oracle",
            expected: "N/|h_n|^2 <= E < E2",
            found,
            energy,
        });
    }
    let params = sys.params();
    let d_m = params.d_m;
    let g = params.h_n_sq;
    let interference = sys.derived().p_m * params.h_m_sq + 1.0;

    let p1_axis = Spacing::Linear.points(0.0, energy / d_m, spec.p1_points);
    let p2_max = spec.p2_max_multiplier * (energy + d_m * (interference - 1.0) / g) / d_m;
    let p2_axis = p2_axis(p2_max, spec);
    let rates: Vec<f64> = p2_axis.iter().map(|&p2| (1.0 + g * p2).ln()).collect();

    let best = p1_axis
        .par_iter()
        .enumerate()
        .filter_map(|(i, &p1)| {
            let remaining = params.n_nats - d_m * (1.0 + p1 * g / interference).ln();
            let shared_energy = d_m * p1;
            let mut row_best: Option<(f64, usize, usize)> = None;
            for (j, (&p2, &rate)) in p2_axis.iter().zip(&rates).enumerate() {
                let t_n = remaining / rate;
                if t_n < 0.0 || shared_energy + t_n * p2 > energy {
                    continue;
                }
                let delay = d_m + t_n;
                if row_best.is_none_or(|(d, _, _)| delay < d) {
                    row_best = Some((delay, i, j));
                }
            }
            row_best
        })
        .min_by(cmp_candidates);

    let (delay, i, j) = best.ok_or(Error::EmptyGrid { energy })?;
    let (p_n1, p_n2) = (p1_axis[i], p2_axis[j]);
    let t_n = delay - d_m;
    Ok(GridPoint {
        delay,
        p_n1,
        p_n2,
        t_n,
        energy_used: d_m * p_n1 + t_n * p_n2,
    })
}
