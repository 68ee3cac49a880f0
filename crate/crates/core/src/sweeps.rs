//! Parameter-grid experiments and premium optimization.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::markov::{
    gradient_field, insurer_profit, solve, Adoption, GradientField, Regime, StationaryOptions,
};
use crate::params::{ModelParams, Strategy, StrategySet, PARAM_NAMES};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub name: String,
    pub values: Vec<f64>,
}

/// Optional per-point outputs beyond adoption rates and profit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepOutput {
    Stationary,
    Gradient,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub base: ModelParams,
    /// One or two axes; the first is the outer loop.
    pub axes: Vec<Axis>,
    pub outputs: Vec<SweepOutput>,
    /// Overrides `base.strategies` when set.
    pub mode: Option<StrategySet>,
    pub solver: StationaryOptions,
}

impl SweepSpec {
    pub fn new(base: ModelParams, axes: Vec<Axis>) -> Self {
        SweepSpec {
            base,
            axes,
            outputs: Vec::new(),
            mode: None,
            solver: Default::default(),
        }
    }

    pub fn check(&self) -> Result<()> {
        if self.axes.is_empty() || self.axes.len() > 2 {
            return Err(Error::Config(format!(
                "a sweep needs one or two axes, got {}",
                self.axes.len()
            )));
        }
        for axis in &self.axes {
            if !PARAM_NAMES.contains(&axis.name.as_str()) {
                return Err(Error::Config(format!("unknown sweep axis {:?}", axis.name)));
            }
            if axis.values.is_empty() {
                return Err(Error::Config(format!(
                    "sweep axis {:?} has no values",
                    axis.name
                )));
            }
        }
        if self.axes.len() == 2 && self.axes[0].name == self.axes[1].name {
            return Err(Error::Config("sweep axes must differ".to_string()));
        }
        Ok(())
    }

    /// Grid points in output order, as (name, value) lists.
    pub fn points(&self) -> Vec<Vec<(String, f64)>> {
        let mut pts: Vec<Vec<(String, f64)>> = vec![Vec::new()];
        for axis in &self.axes {
            pts = pts
                .into_iter()
                .flat_map(|prefix| {
                    axis.values.iter().map(move |&v| {
                        let mut p = prefix.clone();
                        p.push((axis.name.clone(), v));
                        p
                    })
                })
                .collect();
        }
        pts
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointResult {
    pub adoption: Adoption,
    pub profit: f64,
    pub argmax: Regime,
    pub residual: f64,
    pub stationary: Option<Vec<f64>>,
    pub gradient: Option<GradientField>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub axis_values: Vec<(String, f64)>,
    pub params: ModelParams,
    /// Validation or solver failure message for this point.
    pub outcome: std::result::Result<PointResult, String>,
}

/// Solves one parameter set.
pub fn run_point(
    params: &ModelParams,
    opts: StationaryOptions,
    outputs: &[SweepOutput],
) -> Result<PointResult> {
    let (model, res) = solve(params, opts)?;
    let profit = if params.strategies.contains(Strategy::I) {
        insurer_profit(res.adoption.i, params)
    } else {
        0.0
    };
    let gradient = outputs
        .contains(&SweepOutput::Gradient)
        .then(|| gradient_field(&model));
    Ok(PointResult {
        adoption: res.adoption,
        profit,
        argmax: res.adoption.argmax(),
        residual: res.residual,
        stationary: outputs
            .contains(&SweepOutput::Stationary)
            .then_some(res.probs),
        gradient,
    })
}

/// Runs every grid point independently; point failures are kept per row.
pub fn sweep_grid(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.check()?;
    let rows = spec
        .points()
        .into_par_iter()
        .map(|axis_values| {
            let mut params = spec.base.clone();
            if let Some(mode) = spec.mode {
                params.strategies = mode;
            }
            let outcome = axis_values
                .iter()
                .try_for_each(|(name, v)| params.set(name, *v))
                .and_then(|_| run_point(&params, spec.solver, &spec.outputs))
                .map_err(|e| e.to_string());
            SweepRow {
                axis_values,
                params,
                outcome,
            }
        })
        .collect();
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PremiumPoint {
    pub c: f64,
    pub adoption: Adoption,
    pub profit: f64,
    pub argmax: Regime,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PremiumCurve {
    pub points: Vec<PremiumPoint>,
    /// Index into `points` of the profit maximizer (smallest c on ties).
    pub best: usize,
    /// Grid premiums that failed validation, with the reason.
    pub skipped: Vec<(f64, String)>,
}

impl PremiumCurve {
    pub fn c_star(&self) -> f64 {
        self.points[self.best].c
    }

    pub fn max_profit(&self) -> f64 {
        self.points[self.best].profit
    }

    /// True when the maximizer is neither the first nor the last grid point.
    pub fn is_interior(&self) -> bool {
        self.best > 0 && self.best + 1 < self.points.len()
    }
}

/// Evenly spaced grid `start, start + step, ..` up to `stop` inclusive.
pub fn linear_grid(start: f64, stop: f64, step: f64) -> Vec<f64> {
    assert!(step > 0.0, "grid step must be positive");
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    (0..count).map(|k| start + k as f64 * step).collect()
}

/// Insurer profit over a premium grid and its maximizer.
pub fn optimal_premium(
    params: &ModelParams,
    c_grid: &[f64],
    opts: StationaryOptions,
) -> Result<PremiumCurve> {
    if !params.strategies.contains(Strategy::I) {
        return Err(Error::Config(
            "premium optimization needs strategy I".to_string(),
        ));
    }
    let solved: Vec<(f64, Result<PointResult>)> = c_grid
        .par_iter()
        .map(|&c| {
            let p = ModelParams {
                c,
                ..params.clone()
            };
            (c, run_point(&p, opts, &[]))
        })
        .collect();
    let mut points = Vec::new();
    let mut skipped = Vec::new();
    for (c, res) in solved {
        match res {
            Ok(r) => points.push(PremiumPoint {
                c,
                adoption: r.adoption,
                profit: r.profit,
                argmax: r.argmax,
                residual: r.residual,
            }),
            Err(e @ Error::Validation(_)) => skipped.push((c, e.to_string())),
            Err(e) => return Err(e),
        }
    }
    if points.is_empty() {
        return Err(Error::Config("no feasible premium in the grid".to_string()));
    }
    let mut best = 0;
    for (k, pt) in points.iter().enumerate() {
        if pt.profit > points[best].profit {
            best = k;
        }
    }
    Ok(PremiumCurve {
        points,
        best,
        skipped,
    })
}

/// Copy of `params` restricted to two strategies.
pub fn restrict_strategies(params: &ModelParams, subset: &[Strategy]) -> Result<ModelParams> {
    if subset.len() != 2 {
        return Err(Error::Config(format!(
            "restricted mode needs exactly two strategies, got {}",
            subset.len()
        )));
    }
    Ok(ModelParams {
        strategies: StrategySet::new(subset)?,
        ..params.clone()
    })
}
