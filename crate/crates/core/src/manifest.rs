use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::experiments::EnergyGrid;
use crate::model::SystemParams;
use crate::oracle::GridSpec;
use crate::solvers::SolverConfig;

pub const TOOL_VERSION: &str = concat!("noma-mec ", env!("CARGO_PKG_VERSION"));

/// Everything needed to reproduce one run's output files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool_version: String,
    /// `solve`, `sweep`, `trace` or `compare`.
    pub command: String,
    pub params: SystemParams,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub energy: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<EnergyGrid>,
    pub solver: SolverConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
    /// File names written next to the manifest.
    #[serde(default)]
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new(command: &str, params: SystemParams, solver: SolverConfig) -> Self {
        RunManifest {
            tool_version: TOOL_VERSION.to_string(),
            command: command.to_string(),
            params,
            energy: None,
            sweep: None,
            solver,
            grid: None,
            outputs: Vec::new(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json()?)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spacing::Spacing;

    #[test]
    fn json_round_trip_is_lossless() {
        let mut m = RunManifest::new(
            "sweep",
            SystemParams::new(15.0, 5.0, 0.1 + 0.2, 1.0 / 3.0).unwrap(),
            SolverConfig {
                newton_mu0_factor: Some(7.123456789012345),
                ..SolverConfig::default()
            },
        );
        m.sweep = Some(EnergyGrid {
            e_min: 20.0,
            e_max: 2500.0,
            n_points: 200,
            spacing: Spacing::Log,
        });
        m.outputs = vec!["sweep.csv".into()];
        let back = RunManifest::from_json(&m.to_json().unwrap()).unwrap();
        assert_eq!(back, m);
    }
}
