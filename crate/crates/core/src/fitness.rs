//! State-dependent fitness from hypergeometric sampling of co-players.
//!
//! A focal individual plays in a group of `N`: itself plus `N - 1`
//! co-players drawn without replacement from the other `Z - 1` members of
//! the population.

use rayon::prelude::*;

use crate::combin::{hypergeometric_pmf, ln_choose};
use crate::error::Result;
use crate::markov::space::{PopulationState, StateSpace};
use crate::params::{ModelParams, Strategy};
use crate::payoff::PayoffTables;

/// Probability that the `N - 1` co-players of a focal `focal`-player
/// contain exactly `k` S-players and `l` I-players.
pub fn group_weight(
    state: PopulationState,
    focal: Strategy,
    k: usize,
    l: usize,
    z: usize,
    n: usize,
) -> f64 {
    assert!(state.is_valid(z), "group_weight: invalid state");
    assert!(
        state.count(focal, z) >= 1,
        "group_weight: no focal individual"
    );
    let draws = n - 1;
    if k + l > draws {
        return 0.0;
    }
    let mut others = [state.s, state.i, state.a(z)];
    others[focal.index()] -= 1;
    let ln =
        ln_choose(others[0], k) + ln_choose(others[1], l) + ln_choose(others[2], draws - k - l)
            - ln_choose(z - 1, draws);
    ln.exp()
}

/// Fitness of each strategy at one state. Undefined entries (no player of
/// that strategy) are `None`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fitness {
    pub s: Option<f64>,
    pub i: Option<f64>,
    pub a: f64,
}

impl Fitness {
    pub fn of(&self, strategy: Strategy) -> Option<f64> {
        match strategy {
            Strategy::S => self.s,
            Strategy::I => self.i,
            Strategy::A => Some(self.a),
        }
    }
}

/// Fitness at `state`.
///
/// The focal strategy's fitness only depends on how many co-players share
/// its strategy, so the double sum over (k, l) collapses to a univariate
/// hypergeometric sum over k (or l).
pub fn fitness_at(state: PopulationState, params: &ModelParams, tables: &PayoffTables) -> Fitness {
    let z = params.z;
    let draws = params.n - 1;
    let s = (state.s >= 1 && params.strategies.contains(Strategy::S)).then(|| {
        (0..=draws.min(state.s - 1))
            .map(|k| hypergeometric_pmf(z - 1, state.s - 1, draws, k) * tables.pool(k + 1))
            .sum()
    });
    let i = (state.i >= 1 && params.strategies.contains(Strategy::I)).then(|| {
        (0..=draws.min(state.i - 1))
            .map(|l| hypergeometric_pmf(z - 1, state.i - 1, draws, l) * tables.index(l + 1))
            .sum()
    });
    Fitness {
        s,
        i,
        a: tables.loner(),
    }
}

/// Fitness at every state of a state space.
#[derive(Debug, Clone)]
pub struct FitnessTable {
    space: StateSpace,
    entries: Vec<Fitness>,
}

impl FitnessTable {
    pub fn new(params: &ModelParams, tables: &PayoffTables) -> Self {
        let space = StateSpace::new(params.z, params.strategies);
        let entries = space
            .states()
            .par_iter()
            .map(|&st| fitness_at(st, params, tables))
            .collect();
        FitnessTable { space, entries }
    }

    /// Builds the payoff tables and then the fitness table.
    pub fn build(params: &ModelParams) -> Result<Self> {
        let tables = PayoffTables::new(params)?;
        Ok(FitnessTable::new(params, &tables))
    }

    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    pub fn at_index(&self, index: usize) -> &Fitness {
        &self.entries[index]
    }

    pub fn at(&self, state: PopulationState) -> &Fitness {
        let k = self
            .space
            .index_of(state)
            .expect("state outside the fitness table");
        &self.entries[k]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn homogeneous_urn() {
        let st = PopulationState::new(50, 0);
        assert!((group_weight(st, Strategy::S, 39, 0, 50, 40) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn small_urn_by_enumeration() {
        // Z=4, N=2, focal S at (2, 1): the other three are {S, I, A}
        let st = PopulationState::new(2, 1);
        for (k, l) in [(1, 0), (0, 1), (0, 0)] {
            assert!((group_weight(st, Strategy::S, k, l, 4, 2) - 1.0 / 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn weights_normalize() {
        let (z, n) = (50, 40);
        for st in StateSpace::new(z, Default::default()).states() {
            for focal in Strategy::ALL {
                if st.count(focal, z) == 0 {
                    continue;
                }
                let total: f64 = (0..n)
                    .flat_map(|k| (0..n - k).map(move |l| (k, l)))
                    .map(|(k, l)| group_weight(*st, focal, k, l, z, n))
                    .sum();
                assert!((total - 1.0).abs() < 1e-12, "{st:?} {focal}: {total}");
            }
        }
    }

    #[test]
    fn corners() {
        let p = ModelParams::default();
        let t = PayoffTables::new(&p).unwrap();
        let f = fitness_at(PopulationState::new(p.z, 0), &p, &t);
        assert!((f.s.unwrap() - t.pool(p.n)).abs() < 1e-12);
        assert_eq!(f.i, None);
        let f = fitness_at(PopulationState::new(0, p.z), &p, &t);
        assert!((f.i.unwrap() - t.index(p.n)).abs() < 1e-12);
        assert_eq!(f.s, None);
        assert_eq!(f.a, t.loner());
    }

    #[test]
    fn zero_contribution_pool_is_self_insurance() {
        let p = ModelParams {
            delta1: 0.0,
            ..ModelParams::default()
        };
        let table = FitnessTable::build(&p).unwrap();
        for (k, st) in table.space().states().iter().enumerate() {
            if let Some(fs) = table.at_index(k).s {
                assert!((fs - table.at(*st).a).abs() < 1e-12);
            }
        }
    }
}
