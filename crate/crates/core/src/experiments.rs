//! Energy sweeps (delay vs. budget for NOMA and OMA) and side-by-side
//! convergence traces of the two H-NOMA solvers.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{EnergyRegime, Mode, System, SystemParams};
use crate::solvers::{
    solve, solve_hnoma_dinkelbach, solve_hnoma_newton, HnomaMethod, HnomaRun, SolverConfig,
};
use crate::spacing::Spacing;

pub const SWEEP_COLUMNS: [&str; 11] = [
    "E",
    "regime",
    "delay_oma",
    "delay_noma",
    "best_mode",
    "mu_star",
    "iters_dinkelbach",
    "iters_newton",
    "p_n1",
    "p_n2",
    "t_n",
];

pub const TRACE_COLUMNS: [&str; 5] = ["method", "t", "mu", "f", "delay"];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyGrid {
    pub e_min: f64,
    pub e_max: f64,
    pub n_points: usize,
    #[serde(default)]
    pub spacing: Spacing,
}

impl Default for EnergyGrid {
    fn default() -> Self {
        EnergyGrid {
            e_min: 20.0,
            e_max: 2500.0,
            n_points: 200,
            spacing: Spacing::Linear,
        }
    }
}

impl EnergyGrid {
    pub fn validate(&self) -> Result<()> {
        if !(self.e_min.is_finite() && self.e_min > 0.0) {
            return Err(Error::param(
                "e_min",
                format!("must be positive, got {}", self.e_min),
            ));
        }
        if !(self.e_max.is_finite() && self.e_max > self.e_min) {
            return Err(Error::param(
                "e_max",
                format!("must exceed e_min, got {}", self.e_max),
            ));
        }
        if self.n_points < 2 {
            return Err(Error::param("n_points", "need at least 2 points"));
        }
        Ok(())
    }

    pub fn energies(&self) -> Vec<f64> {
        self.spacing.points(self.e_min, self.e_max, self.n_points)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
pub struct SweepSpec {
    pub energies: EnergyGrid,
    pub params: SystemParams,
    pub cfg: SolverConfig,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        self.energies.validate()?;
        self.params.validate()?;
        self.cfg.validate()
    }
}

/// One budget of an energy sweep. NOMA means pure NOMA when `E >= E2` and
/// hybrid NOMA otherwise; absent values mark infeasible modes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub energy: f64,
    pub regime: EnergyRegime,
    pub delay_oma: Option<f64>,
    pub delay_noma: Option<f64>,
    pub best_mode: Option<Mode>,
    pub mu_star: Option<f64>,
    pub iters_dinkelbach: Option<usize>,
    pub iters_newton: Option<usize>,
    pub p_n1: Option<f64>,
    pub p_n2: Option<f64>,
    pub t_n: Option<f64>,
}

impl SweepRow {
    pub fn best_delay(&self) -> Option<f64> {
        match (self.delay_oma, self.delay_noma) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }

    /// NOMA slower than OMA at a budget where both are feasible.
    pub fn noma_loses(&self) -> bool {
        matches!((self.delay_noma, self.delay_oma), (Some(n), Some(o)) if n > o)
    }
}

fn sweep_row(sys: &System, energy: f64, cfg: &SolverConfig) -> Result<SweepRow> {
    let sol = solve(sys, energy, cfg)?;
    let (mut iters_dinkelbach, mut iters_newton) = (None, None);
    if sol.regime == EnergyRegime::Hybrid {
        let other = match cfg.method {
            HnomaMethod::Newton => solve_hnoma_dinkelbach(sys, energy, cfg)?,
            HnomaMethod::Dinkelbach => solve_hnoma_newton(sys, energy, cfg)?,
        };
        match cfg.method {
            HnomaMethod::Newton => {
                iters_newton = sol.iterations;
                iters_dinkelbach = Some(other.iterations);
            }
            HnomaMethod::Dinkelbach => {
                iters_dinkelbach = sol.iterations;
                iters_newton = Some(other.iterations);
            }
        }
    }
    let delay_noma = sol
        .mode_delay(Mode::PureNoma)
        .or_else(|| sol.mode_delay(Mode::HybridNoma));
    Ok(SweepRow {
        energy,
        regime: sol.regime,
        delay_oma: sol.mode_delay(Mode::Oma),
        delay_noma,
        best_mode: sol.best_mode,
        mu_star: sol.mu_star,
        iters_dinkelbach,
        iters_newton,
        p_n1: sol.best.map(|b| b.p_n1),
        p_n2: sol.best.map(|b| b.p_n2),
        t_n: sol.best.map(|b| b.t_n),
    })
}

/// Rows come back ordered by energy; points are solved in parallel.
pub fn energy_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let sys = System::new(spec.params)?;
    spec.energies
        .energies()
        .into_par_iter()
        .map(|e| sweep_row(&sys, e, &spec.cfg))
        .collect()
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SWEEP_COLUMNS)?;
    for r in rows {
        w.write_record([
            r.energy.to_string(),
            r.regime.to_string(),
            opt(r.delay_oma),
            opt(r.delay_noma),
            opt(r.best_mode),
            opt(r.mu_star),
            opt(r.iters_dinkelbach),
            opt(r.iters_newton),
            opt(r.p_n1),
            opt(r.p_n2),
            opt(r.t_n),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn sweep_csv_string(rows: &[SweepRow]) -> Result<String> {
    let mut buf = Vec::new();
    write_sweep_csv(rows, &mut buf)?;
    Ok(String::from_utf8(buf).expect("csv output is utf-8"))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceComparison {
    pub energy: f64,
    pub dinkelbach: HnomaRun,
    pub newton: HnomaRun,
    /// `|delay_newton - delay_dinkelbach| / delay_newton`.
    pub delay_gap: f64,
}

/// Runs both H-NOMA solvers on the same budget. With the default config
/// both start from `mu = inf` and share their first iterate.
pub fn convergence_trace(
    sys: &System,
    energy: f64,
    cfg: &SolverConfig,
) -> Result<ConvergenceComparison> {
    let dinkelbach = solve_hnoma_dinkelbach(sys, energy, cfg)?;
    let newton = solve_hnoma_newton(sys, energy, cfg)?;
    let (dd, nd) = (dinkelbach.allocation.delay, newton.allocation.delay);
    Ok(ConvergenceComparison {
        energy,
        delay_gap: (nd - dd).abs() / nd,
        dinkelbach,
        newton,
    })
}

pub fn write_trace_csv<W: Write>(cmp: &ConvergenceComparison, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TRACE_COLUMNS)?;
    for run in [&cmp.dinkelbach, &cmp.newton] {
        for r in &run.trace.records {
            w.write_record([
                run.method.to_string(),
                r.t.to_string(),
                r.mu.to_string(),
                r.f.to_string(),
                r.delay.to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn trace_csv_string(cmp: &ConvergenceComparison) -> Result<String> {
    let mut buf = Vec::new();
    write_trace_csv(cmp, &mut buf)?;
    Ok(String::from_utf8(buf).expect("csv output is utf-8"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_spec(n: usize) -> SweepSpec {
        SweepSpec {
            energies: EnergyGrid {
                n_points: n,
                ..EnergyGrid::default()
            },
            ..SweepSpec::default()
        }
    }

    #[test]
    fn two_point_sweep() {
        let rows = energy_sweep(&small_spec(2)).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].energy, 20.0);
        assert_eq!(rows[0].regime, EnergyRegime::OmaOnly);
        assert_eq!(rows[0].delay_noma, None);
        assert_eq!(rows[1].regime, EnergyRegime::PureNoma);
        assert_eq!(rows[1].delay_noma, Some(5.0));
        let csv = sweep_csv_string(&rows).unwrap();
        assert_eq!(csv.lines().count(), 3);
        assert_eq!(csv.lines().next().unwrap(), SWEEP_COLUMNS.join(","));
    }

    #[test]
    fn hybrid_rows_carry_both_iteration_counts() {
        let spec = SweepSpec {
            energies: EnergyGrid {
                e_min: 200.0,
                e_max: 1800.0,
                n_points: 5,
                spacing: Spacing::Linear,
            },
            ..SweepSpec::default()
        };
        for r in energy_sweep(&spec).unwrap() {
            assert_eq!(r.regime, EnergyRegime::Hybrid);
            assert!(r.iters_newton.unwrap() <= r.iters_dinkelbach.unwrap());
            assert!(r.delay_noma.unwrap() <= r.delay_oma.unwrap());
            assert_eq!(r.best_mode, Some(Mode::HybridNoma));
            assert!((r.t_n.unwrap() * r.mu_star.unwrap() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn sweep_is_deterministic() {
        let spec = small_spec(40);
        let a = sweep_csv_string(&energy_sweep(&spec).unwrap()).unwrap();
        let b = sweep_csv_string(&energy_sweep(&spec).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn trace_csv_layout() {
        let sys = System::new(SystemParams::reference()).unwrap();
        let cmp = convergence_trace(&sys, 500.0, &SolverConfig::default()).unwrap();
        assert!(cmp.delay_gap < 1e-8);
        let csv = trace_csv_string(&cmp).unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "method,t,mu,f,delay");
        assert_eq!(lines.next().unwrap(), "dinkelbach,0,inf,-inf,5");
        let expected = cmp.dinkelbach.trace.len() + cmp.newton.trace.len() + 1;
        assert_eq!(csv.lines().count(), expected);
    }

    #[test]
    fn trace_rejects_non_hybrid_budget() {
        let sys = System::new(SystemParams::reference()).unwrap();
        assert!(convergence_trace(&sys, 2000.0, &SolverConfig::default()).is_err());
    }

    #[test]
    fn grid_validation() {
        let bad = EnergyGrid {
            e_min: 10.0,
            e_max: 5.0,
            ..EnergyGrid::default()
        };
        assert!(bad.validate().is_err());
        let bad = EnergyGrid {
            n_points: 1,
            ..EnergyGrid::default()
        };
        assert!(bad.validate().is_err());
    }
}
