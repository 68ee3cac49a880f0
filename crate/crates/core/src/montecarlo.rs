//! Agent-level forward simulation of the imitation/mutation process.
//!
//! Each step updates at most one individual: with probability `mu` a random
//! individual mutates to one of the other active strategies, otherwise two
//! distinct individuals are drawn and the first copies the second with the
//! Fermi probability. The RNG is ChaCha8 seeded from a `u64`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fitness::FitnessTable;
use crate::markov::analysis::{adoption_rates, Adoption};
use crate::markov::kernel::fermi;
use crate::markov::space::{PopulationState, StateSpace};
use crate::params::{ModelParams, Strategy};

pub const RNG_NAME: &str = "ChaCha8Rng::seed_from_u64";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    /// Total elementary updates, burn-in included.
    pub steps: u64,
    pub burnin: u64,
    pub thinning: u64,
    pub seed: u64,
    pub initial: PopulationState,
}

impl SimConfig {
    pub fn validate(&self, params: &ModelParams) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.steps <= self.burnin {
            return bad(format!(
                "steps ({}) must exceed burnin ({})",
                self.steps, self.burnin
            ));
        }
        if self.thinning == 0 {
            return bad("thinning must be at least 1".to_string());
        }
        let space = StateSpace::new(params.z, params.strategies);
        if !space.contains(self.initial) {
            return bad(format!(
                "initial state {:?} is not a valid state for Z={} with strategies {}",
                self.initial, params.z, params.strategies
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    pub space: StateSpace,
    /// Visit frequency per state, aligned with `space.states()`.
    pub freqs: Vec<f64>,
    pub adoption: Adoption,
    pub samples: u64,
    pub final_state: PopulationState,
}

/// One elementary update of the population.
pub fn step<R: Rng + ?Sized>(
    state: PopulationState,
    params: &ModelParams,
    fitness: &FitnessTable,
    rng: &mut R,
) -> PopulationState {
    let z = params.z;
    let of = |k: usize| -> Strategy {
        if k < state.s {
            Strategy::S
        } else if k < state.s + state.i {
            Strategy::I
        } else {
            Strategy::A
        }
    };
    if rng.random::<f64>() < params.mu {
        let from = of(rng.random_range(0..z));
        let others: Vec<Strategy> = params.strategies.iter().filter(|&s| s != from).collect();
        let to = others[rng.random_range(0..others.len())];
        return state.moved(from, to);
    }
    let first = rng.random_range(0..z);
    let mut second = rng.random_range(0..z - 1);
    if second >= first {
        second += 1;
    }
    let (x, y) = (of(first), of(second));
    if x == y {
        return state;
    }
    let f = fitness.at(state);
    let fx = f.of(x).expect("fitness of a present strategy");
    let fy = f.of(y).expect("fitness of a present strategy");
    if rng.random::<f64>() < fermi(fx, fy, params.beta) {
        state.moved(x, y)
    } else {
        state
    }
}

pub fn simulate(params: &ModelParams, config: &SimConfig) -> Result<SimResult> {
    let params = params.clone().validate()?;
    config.validate(&params)?;
    let fitness = FitnessTable::build(&params)?;
    let space = fitness.space().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut counts = vec![0u64; space.len()];
    let mut state = config.initial;
    let mut samples = 0u64;
    for t in 0..config.steps {
        state = step(state, &params, &fitness, &mut rng);
        if t >= config.burnin && (t - config.burnin).is_multiple_of(config.thinning) {
            counts[space.index_of(state)?] += 1;
            samples += 1;
        }
    }
    let freqs: Vec<f64> = counts.iter().map(|&c| c as f64 / samples as f64).collect();
    let adoption = adoption_rates(&freqs, &space);
    Ok(SimResult {
        space,
        freqs,
        adoption,
        samples,
        final_state: state,
    })
}

/// Total-variation distance between two distributions on the same states.
pub fn total_variation(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    0.5 * a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>()
}
