//! System parameters, derived thresholds and the energy-regime partition.
//!
//! User `m` transmits in OMA fashion during its slot of `D_m` seconds with
//! power `P_m` fixed by `D_m ln(1 + P_m |h_m|^2) = N`. User `n` may share
//! that slot (decoded first, so user `m` keeps its OMA rate) and, if it
//! cannot finish inside `D_m`, gets a dedicated slot of `T_n` seconds.
//!
//! Everything downstream uses the single value `e^{N/D_m}` stored in
//! [`DerivedConstants::exp_ratio`].

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Inputs of one two-user offloading instance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    /// Task size `N` in nats (both users).
    pub n_nats: f64,
    /// User m's deadline `D_m` in seconds.
    pub d_m: f64,
    /// Channel power gain `|h_m|^2`.
    pub h_m_sq: f64,
    /// Channel power gain `|h_n|^2`.
    pub h_n_sq: f64,
}

impl SystemParams {
    pub fn new(n_nats: f64, d_m: f64, h_m_sq: f64, h_n_sq: f64) -> Result<Self> {
        let params = SystemParams {
            n_nats,
            d_m,
            h_m_sq,
            h_n_sq,
        };
        params.validate()?;
        Ok(params)
    }

    /// `N = 15`, `D_m = 5`, unit gains.
    pub fn reference() -> Self {
        SystemParams {
            n_nats: 15.0,
            d_m: 5.0,
            h_m_sq: 1.0,
            h_n_sq: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (field, value) in [
            ("n_nats", self.n_nats),
            ("d_m", self.d_m),
            ("h_m_sq", self.h_m_sq),
            ("h_n_sq", self.h_n_sq),
        ] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::param(
                    field,
                    format!("must be a finite positive number, got {value}"),
                ));
            }
        }
        Ok(())
    }
}

impl Default for SystemParams {
    fn default() -> Self {
        SystemParams::reference()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedConstants {
    /// `e^{N/D_m}`, equal to `P_m |h_m|^2 + 1`.
    pub exp_ratio: f64,
    /// User m's OMA power.
    pub p_m: f64,
    /// Lower edge of the hybrid regime.
    pub e1: f64,
    /// Lower edge of the pure-NOMA regime.
    pub e2: f64,
    /// Minimum energy for which OMA can deliver the task, `N |h_n|^{-2}`.
    pub e_oma_min: f64,
}

impl DerivedConstants {
    pub fn derive(params: &SystemParams) -> Result<Self> {
        params.validate()?;
        let ratio = params.n_nats / params.d_m;
        let exp_ratio = ratio.exp();
        let e2 = params.d_m * (exp_ratio - 1.0) * exp_ratio / params.h_n_sq;
        if !exp_ratio.is_finite() || !e2.is_finite() {
            return Err(Error::Range { ratio });
        }
        let growth = exp_ratio - 1.0;
        Ok(DerivedConstants {
            exp_ratio,
            p_m: growth / params.h_m_sq,
            e1: params.d_m * growth / params.h_n_sq,
            e2,
            e_oma_min: params.n_nats / params.h_n_sq,
        })
    }
}

/// Which offloading modes an energy budget admits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnergyRegime {
    /// `E < N |h_n|^{-2}`.
    Infeasible,
    /// `N |h_n|^{-2} <= E <= E1`.
    OmaOnly,
    /// `E1 < E < E2`.
    Hybrid,
    /// `E >= E2`.
    PureNoma,
}

impl EnergyRegime {
    pub fn as_str(self) -> &'static str {
        match self {
            EnergyRegime::Infeasible => "infeasible",
            EnergyRegime::OmaOnly => "oma_only",
            EnergyRegime::Hybrid => "hybrid",
            EnergyRegime::PureNoma => "pure_noma",
        }
    }
}

impl fmt::Display for EnergyRegime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Oma,
    PureNoma,
    HybridNoma,
}

impl Mode {
    pub const ALL: [Mode; 3] = [Mode::Oma, Mode::PureNoma, Mode::HybridNoma];

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Oma => "oma",
            Mode::PureNoma => "pure_noma",
            Mode::HybridNoma => "hybrid_noma",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// An operating point for user n.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Allocation {
    pub mode: Mode,
    /// Power during the shared slot of length `D_m`.
    pub p_n1: f64,
    /// Power during the dedicated slot.
    pub p_n2: f64,
    /// Dedicated-slot length.
    pub t_n: f64,
    pub energy_used: f64,
    /// `D_m + t_n`.
    pub delay: f64,
}

impl Allocation {
    fn build(mode: Mode, d_m: f64, p_n1: f64, p_n2: f64, t_n: f64) -> Self {
        Allocation {
            mode,
            p_n1,
            p_n2,
            t_n,
            energy_used: d_m * p_n1 + t_n * p_n2,
            delay: d_m + t_n,
        }
    }

    pub fn pure_noma(d_m: f64, p_n1: f64) -> Self {
        Self::build(Mode::PureNoma, d_m, p_n1, 0.0, 0.0)
    }

    pub fn oma(d_m: f64, p_n2: f64, t_n: f64) -> Self {
        Self::build(Mode::Oma, d_m, 0.0, p_n2, t_n)
    }

    pub fn hybrid(d_m: f64, p_n1: f64, p_n2: f64, t_n: f64) -> Self {
        Self::build(Mode::HybridNoma, d_m, p_n1, p_n2, t_n)
    }
}

/// Parameters together with their derived constants; the handle every
/// solver works on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct System {
    params: SystemParams,
    derived: DerivedConstants,
}

impl System {
    pub fn new(params: SystemParams) -> Result<Self> {
        let derived = DerivedConstants::derive(&params)?;
        Ok(System { params, derived })
    }

    pub fn params(&self) -> &SystemParams {
        &self.params
    }

    pub fn derived(&self) -> &DerivedConstants {
        &self.derived
    }

    pub fn n_nats(&self) -> f64 {
        self.params.n_nats
    }

    pub fn d_m(&self) -> f64 {
        self.params.d_m
    }

    pub fn h_n_sq(&self) -> f64 {
        self.params.h_n_sq
    }

    pub fn exp_ratio(&self) -> f64 {
        self.derived.exp_ratio
    }

    pub fn e1(&self) -> f64 {
        self.derived.e1
    }

    pub fn e2(&self) -> f64 {
        self.derived.e2
    }

    pub fn e_oma_min(&self) -> f64 {
        self.derived.e_oma_min
    }

    /// `(e^{N/D_m} - 1) |h_n|^{-2}`, the dedicated-slot power at which the
    /// shared-slot power of the closed-form allocation reaches zero.
    pub(crate) fn growth_over_gain(&self) -> f64 {
        (self.derived.exp_ratio - 1.0) / self.params.h_n_sq
    }

    /// Smallest admissible `mu` for budget `energy`: below it the
    /// closed-form allocation would need a negative shared-slot power.
    pub fn mu_lb(&self, energy: f64) -> f64 {
        self.growth_over_gain() / energy
    }

    /// Nats user n delivers during the shared slot at power `p_n1`.
    pub fn shared_slot_nats(&self, p_n1: f64) -> f64 {
        self.params.d_m * (p_n1 * self.params.h_n_sq / self.derived.exp_ratio).ln_1p()
    }

    /// Dedicated-slot rate (nats/s) at power `p_n2`.
    pub fn dedicated_rate(&self, p_n2: f64) -> f64 {
        (self.params.h_n_sq * p_n2).ln_1p()
    }

    /// Length of the dedicated slot needed to finish the task given both
    /// powers.
    pub fn dedicated_slot(&self, p_n1: f64, p_n2: f64) -> f64 {
        (self.params.n_nats - self.shared_slot_nats(p_n1)) / self.dedicated_rate(p_n2)
    }

    pub fn classify(&self, energy: f64) -> EnergyRegime {
        if energy.is_nan() || energy < self.derived.e_oma_min {
            EnergyRegime::Infeasible
        } else if energy <= self.derived.e1 {
            EnergyRegime::OmaOnly
        } else if energy < self.derived.e2 {
            EnergyRegime::Hybrid
        } else {
            EnergyRegime::PureNoma
        }
    }
}

pub fn derive_constants(params: &SystemParams) -> Result<DerivedConstants> {
    DerivedConstants::derive(params)
}

pub fn classify_regime(params: &SystemParams, energy: f64) -> Result<EnergyRegime> {
    Ok(System::new(*params)?.classify(energy))
}

/// On-disk instance: the four system parameters plus an energy budget.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Instance {
    pub n_nats: f64,
    pub d_m: f64,
    pub h_m_sq: f64,
    pub h_n_sq: f64,
    pub energy: f64,
}

impl Instance {
    pub fn params(&self) -> SystemParams {
        SystemParams {
            n_nats: self.n_nats,
            d_m: self.d_m,
            h_m_sq: self.h_m_sq,
            h_n_sq: self.h_n_sq,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.params().validate()?;
        if !(self.energy.is_finite() && self.energy >= 0.0) {
            return Err(Error::param(
                "energy",
                format!("must be a finite nonnegative number, got {}", self.energy),
            ));
        }
        Ok(())
    }
}
