//! Stationary distribution of the kernel.
//!
//! The primary route is the Grassmann-Taksar-Heyman state reduction run on
//! a band matrix: states are eliminated from the last index down, and every
//! fill-in stays inside the kernel's bandwidth, so the cost is
//! `O(n b^2)` (about 3.4M flops at Z = 50). The reduction is subtraction-free
//! and needs no pivoting. Power iteration is kept as a fallback and as an
//! independent cross-check.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::markov::analysis::{adoption_rates, Adoption};
use crate::markov::kernel::TransitionModel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverMethod {
    Gth,
    PowerIteration,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StationaryOptions {
    /// Power iteration stops once the L-inf update falls below this.
    pub tolerance: f64,
    /// Accept `mu = 0`; the result is then the long-run distribution reached
    /// from the uniform start.
    pub allow_absorbing: bool,
    pub max_iterations: usize,
}

impl Default for StationaryOptions {
    fn default() -> Self {
        StationaryOptions {
            tolerance: 1e-12,
            allow_absorbing: false,
            max_iterations: 2_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StationaryResult {
    pub probs: Vec<f64>,
    pub adoption: Adoption,
    /// `||x T - x||_inf`.
    pub residual: f64,
    pub method: SolverMethod,
}

pub fn stationary(model: &TransitionModel, opts: StationaryOptions) -> Result<StationaryResult> {
    let (probs, method) = if model.params().mu == 0.0 {
        if !opts.allow_absorbing {
            return Err(Error::Reducible);
        }
        let n = model.len();
        let start = vec![1.0 / n as f64; n];
        let (x, _) = power_iteration(model, start, opts.tolerance, opts.max_iterations)?;
        (x, SolverMethod::PowerIteration)
    } else {
        match solve_gth(model) {
            Ok(x) => (x, SolverMethod::Gth),
            Err(_) => {
                let n = model.len();
                let start = vec![1.0 / n as f64; n];
                let (x, _) = power_iteration(model, start, opts.tolerance, opts.max_iterations)?;
                (x, SolverMethod::PowerIteration)
            }
        }
    };
    let residual = residual(model, &probs);
    let adoption = adoption_rates(&probs, model.space());
    Ok(StationaryResult {
        probs,
        adoption,
        residual,
        method,
    })
}

/// `||x T - x||_inf`.
pub fn residual(model: &TransitionModel, x: &[f64]) -> f64 {
    model
        .left_multiply(x)
        .iter()
        .zip(x)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
}

/// Dense band storage: row `i` keeps columns `i - b ..= i + b`.
struct Band {
    b: usize,
    width: usize,
    data: Vec<f64>,
}

impl Band {
    fn new(n: usize, b: usize) -> Self {
        let width = 2 * b + 1;
        Band {
            b,
            width,
            data: vec![0.0; n * width],
        }
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> usize {
        i * self.width + (j + self.b - i)
    }
}

/// Exact stationary vector by banded GTH state reduction.
pub fn solve_gth(model: &TransitionModel) -> Result<Vec<f64>> {
    let n = model.len();
    if n == 1 {
        return Ok(vec![1.0]);
    }
    let b = model.bandwidth();
    let mut band = Band::new(n, b);
    for i in 0..n {
        let (cols, vals) = model.row(i);
        for (&j, &v) in cols.iter().zip(vals) {
            let at = band.at(i, j);
            band.data[at] = v;
        }
    }

    for k in (1..n).rev() {
        let lo = k.saturating_sub(b);
        let s: f64 = (lo..k).map(|j| band.data[band.at(k, j)]).sum();
        if !s.is_finite() || s <= 0.0 {
            return Err(Error::Solver(format!(
                "state reduction hit zero outflow at index {k}; chain is reducible"
            )));
        }
        for i in lo..k {
            let at = band.at(i, k);
            band.data[at] /= s;
        }
        for i in lo..k {
            let pik = band.data[band.at(i, k)];
            if pik == 0.0 {
                continue;
            }
            let row_k = band.at(k, lo);
            let row_i = band.at(i, lo);
            for off in 0..(k - lo) {
                band.data[row_i + off] += pik * band.data[row_k + off];
            }
        }
    }

    let mut x = vec![0.0; n];
    x[0] = 1.0;
    for j in 1..n {
        let lo = j.saturating_sub(b);
        x[j] = (lo..j).map(|i| x[i] * band.data[band.at(i, j)]).sum();
    }
    let total: f64 = x.iter().sum();
    if !total.is_finite() || total <= 0.0 {
        return Err(Error::Solver(
            "state reduction produced a degenerate vector".to_string(),
        ));
    }
    x.iter_mut().for_each(|v| *v /= total);
    Ok(x)
}

/// Iterates `x <- x T` until the L-inf update drops below `tol`.
/// Returns the vector and the number of iterations used.
pub fn power_iteration(
    model: &TransitionModel,
    start: Vec<f64>,
    tol: f64,
    max_iterations: usize,
) -> Result<(Vec<f64>, usize)> {
    let mut x = start;
    for it in 1..=max_iterations {
        let mut y = model.left_multiply(&x);
        let total: f64 = y.iter().sum();
        y.iter_mut().for_each(|v| *v /= total);
        let delta = y
            .iter()
            .zip(&x)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        x = y;
        if delta < tol {
            return Ok((x, it));
        }
    }
    Err(Error::Solver(format!(
        "power iteration did not reach tolerance {tol} in {max_iterations} iterations"
    )))
}
