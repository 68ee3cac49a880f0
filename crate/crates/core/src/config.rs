//! Run configuration: a TOML file with one table per subcommand.
//!
//! ```toml
//! [model]
//! alpha = 0.8
//! r = 0.001
//!
//! [[sweep.axes]]
//! name = "r"
//! values = [0.001, 0.03, 0.1]
//!
//! [mc]
//! seed = 7
//! ```
//!
//! Every table and key is optional; missing keys take their defaults.
//! Unknown keys are rejected.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::markov::space::PopulationState;
use crate::markov::StationaryOptions;
use crate::montecarlo::SimConfig;
use crate::params::{ModelParams, Strategy, StrategySet};
use crate::sweeps::{linear_grid, Axis, SweepOutput, SweepSpec};

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub model: ModelParams,
    pub solver: SolverSection,
    pub sweep: SweepSection,
    pub premium: PremiumSection,
    pub mc: McSection,
    pub output: OutputSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverSection {
    pub tolerance: f64,
    pub allow_absorbing: bool,
    pub max_iterations: usize,
}

impl Default for SolverSection {
    fn default() -> Self {
        let d = StationaryOptions::default();
        SolverSection {
            tolerance: d.tolerance,
            allow_absorbing: d.allow_absorbing,
            max_iterations: d.max_iterations,
        }
    }
}

impl SolverSection {
    pub fn options(&self) -> StationaryOptions {
        StationaryOptions {
            tolerance: self.tolerance,
            allow_absorbing: self.allow_absorbing,
            max_iterations: self.max_iterations,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepSection {
    pub axes: Vec<Axis>,
    pub outputs: Vec<SweepOutput>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<StrategySet>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PremiumSection {
    pub c_start: f64,
    pub c_stop: f64,
    pub c_step: f64,
    /// Explicit grid; takes precedence over start/stop/step.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c_values: Option<Vec<f64>>,
}

impl Default for PremiumSection {
    fn default() -> Self {
        PremiumSection {
            c_start: 0.16,
            c_stop: 0.198,
            c_step: 0.002,
            c_values: None,
        }
    }
}

impl PremiumSection {
    pub fn grid(&self) -> Result<Vec<f64>> {
        if let Some(v) = &self.c_values {
            return Ok(v.clone());
        }
        if self.c_step.is_nan() || self.c_step <= 0.0 || self.c_stop < self.c_start {
            return Err(Error::Config(
                "premium grid needs c_step > 0 and c_stop >= c_start".to_string(),
            ));
        }
        Ok(linear_grid(self.c_start, self.c_stop, self.c_step))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct McSection {
    pub steps: u64,
    pub burnin: u64,
    pub thinning: u64,
    pub seed: u64,
    /// Initial (i_S, i_I); defaults to a central state of the active edge or simplex.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub initial: Option<[usize; 2]>,
}

impl Default for McSection {
    fn default() -> Self {
        McSection {
            steps: 2_100_000,
            burnin: 100_000,
            thinning: 1,
            seed: 1,
            initial: None,
        }
    }
}

impl McSection {
    pub fn sim_config(&self, params: &ModelParams) -> SimConfig {
        let initial = match self.initial {
            Some([s, i]) => PopulationState::new(s, i),
            None => central_state(params),
        };
        SimConfig {
            steps: self.steps,
            burnin: self.burnin,
            thinning: self.thinning,
            seed: self.seed,
            initial,
        }
    }
}

/// A state near the middle of the reachable states.
pub fn central_state(params: &ModelParams) -> PopulationState {
    let z = params.z;
    let set = params.strategies;
    if set.is_full() {
        PopulationState::new(z / 3, z / 3)
    } else if !set.contains(Strategy::I) {
        PopulationState::new(z / 2, 0)
    } else if !set.contains(Strategy::A) {
        PopulationState::new(z / 2, z - z / 2)
    } else {
        PopulationState::new(0, z / 2)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    pub dir: PathBuf,
}

impl Default for OutputSection {
    fn default() -> Self {
        OutputSection {
            dir: PathBuf::from("out"),
        }
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn sweep_spec(&self) -> SweepSpec {
        SweepSpec {
            base: self.model.clone(),
            axes: self.sweep.axes.clone(),
            outputs: self.sweep.outputs.clone(),
            mode: self.sweep.mode,
            solver: self.solver.options(),
        }
    }
}
