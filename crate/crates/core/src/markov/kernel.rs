use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fitness::FitnessTable;
use crate::markov::space::{PopulationState, StateSpace};
use crate::params::{ModelParams, Strategy};

/// Probability that an X-player adopts the strategy of a Y-player it meets,
/// `1 / (1 + exp(beta (f_X - f_Y)))`.
pub fn fermi(fx: f64, fy: f64, beta: f64) -> f64 {
    let x = beta * (fx - fy);
    if x.is_nan() {
        // beta = 0 with infinite fitness gap
        return 0.5;
    }
    if x >= 0.0 {
        let e = (-x).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + x.exp())
    }
}

/// One-step probability that an X-player becomes a Y-player at `state`:
/// imitation of a randomly met Y-player plus uniform mutation.
pub fn transition_prob(
    state: PopulationState,
    from: Strategy,
    to: Strategy,
    params: &ModelParams,
    fitness: &FitnessTable,
) -> f64 {
    assert_ne!(from, to, "transition_prob: from == to");
    let set = params.strategies;
    if !set.contains(from) || !set.contains(to) {
        return 0.0;
    }
    let z = params.z;
    let ix = state.count(from, z);
    if ix == 0 {
        return 0.0;
    }
    let iy = state.count(to, z);
    let zf = z as f64;
    let imitation = if iy == 0 || params.mu == 1.0 {
        0.0
    } else {
        let f = fitness.at(state);
        let fx = f.of(from).expect("fitness of a present strategy");
        let fy = f.of(to).expect("fitness of a present strategy");
        (ix as f64 / zf) * (iy as f64 / (zf - 1.0)) * fermi(fx, fy, params.beta)
    };
    let mutation = ix as f64 / ((params.d() - 1) as f64 * zf);
    (1.0 - params.mu) * imitation + params.mu * mutation
}

/// Sparse row-stochastic kernel over a [`StateSpace`], stored row-compressed.
#[derive(Debug, Clone)]
pub struct TransitionModel {
    params: ModelParams,
    fitness: FitnessTable,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

/// Assembles the kernel: six neighbour moves plus the self-loop, which is
/// one minus the outflow.
pub fn build_kernel(params: &ModelParams, fitness: FitnessTable) -> Result<TransitionModel> {
    let space = fitness.space();
    let active: Vec<Strategy> = params.strategies.iter().collect();
    let rows = space
        .states()
        .par_iter()
        .enumerate()
        .map(|(k, &st)| {
            let mut row: Vec<(usize, f64)> = Vec::with_capacity(7);
            let mut out = 0.0;
            for &from in &active {
                for &to in &active {
                    if from == to {
                        continue;
                    }
                    let t = transition_prob(st, from, to, params, &fitness);
                    if t > 0.0 {
                        row.push((space.index_of(st.moved(from, to))?, t));
                        out += t;
                    }
                }
            }
            let mut stay = 1.0 - out;
            if stay < 0.0 {
                if stay < -1e-14 {
                    return Err(Error::Solver(format!(
                        "negative self-loop mass {stay} at state {st:?}"
                    )));
                }
                stay = 0.0;
            }
            row.push((k, stay));
            row.sort_by_key(|&(c, _)| c);
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut row_ptr = Vec::with_capacity(rows.len() + 1);
    let mut cols = Vec::new();
    let mut vals = Vec::new();
    row_ptr.push(0);
    for row in rows {
        for (c, v) in row {
            cols.push(c);
            vals.push(v);
        }
        row_ptr.push(cols.len());
    }
    Ok(TransitionModel {
        params: params.clone(),
        fitness,
        row_ptr,
        cols,
        vals,
    })
}

impl TransitionModel {
    /// Payoffs, fitness and kernel for a validated parameter set.
    pub fn build(params: &ModelParams) -> Result<Self> {
        let params = params.clone().validate()?;
        let fitness = FitnessTable::build(&params)?;
        build_kernel(&params, fitness)
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn fitness(&self) -> &FitnessTable {
        &self.fitness
    }

    pub fn space(&self) -> &StateSpace {
        self.fitness.space()
    }

    pub fn len(&self) -> usize {
        self.row_ptr.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    /// Column indices and values of row `k`, sorted by column.
    pub fn row(&self, k: usize) -> (&[usize], &[f64]) {
        let (a, b) = (self.row_ptr[k], self.row_ptr[k + 1]);
        (&self.cols[a..b], &self.vals[a..b])
    }

    pub fn entry(&self, from: usize, to: usize) -> f64 {
        let (cols, vals) = self.row(from);
        cols.binary_search(&to).map(|p| vals[p]).unwrap_or(0.0)
    }

    /// Row vector times kernel, `x T`.
    pub fn left_multiply(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.len());
        let mut y = vec![0.0; x.len()];
        for (k, &xk) in x.iter().enumerate() {
            if xk == 0.0 {
                continue;
            }
            let (cols, vals) = self.row(k);
            for (&c, &v) in cols.iter().zip(vals) {
                y[c] += xk * v;
            }
        }
        y
    }

    /// Largest `|i - j|` over stored entries.
    pub fn bandwidth(&self) -> usize {
        (0..self.len())
            .flat_map(|k| self.row(k).0.iter().map(move |&c| c.abs_diff(k)))
            .max()
            .unwrap_or(0)
    }

    pub fn transition(&self, state: PopulationState, from: Strategy, to: Strategy) -> f64 {
        transition_prob(state, from, to, &self.params, &self.fitness)
    }
}
