use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{Strategy, StrategySet};

/// Strategy counts `(i_S, i_I)`; the number of A-players is `Z - i_S - i_I`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PopulationState {
    pub s: usize,
    pub i: usize,
}

impl PopulationState {
    pub fn new(s: usize, i: usize) -> Self {
        PopulationState { s, i }
    }

    pub fn a(&self, z: usize) -> usize {
        z - self.s - self.i
    }

    pub fn count(&self, strategy: Strategy, z: usize) -> usize {
        match strategy {
            Strategy::S => self.s,
            Strategy::I => self.i,
            Strategy::A => self.a(z),
        }
    }

    pub fn is_valid(&self, z: usize) -> bool {
        self.s + self.i <= z
    }

    /// The state after one individual switches from `from` to `to`.
    pub fn moved(&self, from: Strategy, to: Strategy) -> PopulationState {
        let mut counts = [self.s as isize, self.i as isize];
        if from != Strategy::A {
            counts[from.index()] -= 1;
        }
        if to != Strategy::A {
            counts[to.index()] += 1;
        }
        PopulationState {
            s: counts[0] as usize,
            i: counts[1] as usize,
        }
    }
}

/// Number of states on the full simplex, `(Z+1)(Z+2)/2`.
pub fn simplex_size(z: usize) -> usize {
    (z + 1) * (z + 2) / 2
}

/// Linear index of a state on the full simplex, ordered by `i_S` then `i_I`.
pub fn state_index(s: usize, i: usize, z: usize) -> Result<usize> {
    if s + i > z {
        return Err(Error::InvalidState { i_s: s, i_i: i, z });
    }
    // rows iS' < iS hold (Z - iS' + 1) states each
    Ok(s * (z + 1) - s * s.saturating_sub(1) / 2 + i)
}

/// Inverse of [`state_index`].
pub fn state_from_index(index: usize, z: usize) -> Result<PopulationState> {
    let mut rest = index;
    for s in 0..=z {
        let row = z - s + 1;
        if rest < row {
            return Ok(PopulationState { s, i: rest });
        }
        rest -= row;
    }
    Err(Error::InvalidState {
        i_s: index,
        i_i: 0,
        z,
    })
}

/// The reachable population states for a given strategy set.
///
/// With all three strategies active this is the full simplex. With two,
/// the absent strategy's count is pinned at zero and the states form one
/// edge of `Z + 1` points, ordered by the count of the first active strategy.
#[derive(Debug, Clone, PartialEq)]
pub struct StateSpace {
    z: usize,
    strategies: StrategySet,
    states: Vec<PopulationState>,
}

impl StateSpace {
    pub fn new(z: usize, strategies: StrategySet) -> Self {
        let states = if strategies.is_full() {
            (0..=z)
                .flat_map(|s| (0..=z - s).map(move |i| PopulationState { s, i }))
                .collect()
        } else {
            (0..=z).map(|k| edge_state(strategies, k, z)).collect()
        };
        StateSpace {
            z,
            strategies,
            states,
        }
    }

    pub fn z(&self) -> usize {
        self.z
    }

    pub fn strategies(&self) -> StrategySet {
        self.strategies
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[PopulationState] {
        &self.states
    }

    pub fn state(&self, index: usize) -> PopulationState {
        self.states[index]
    }

    pub fn contains(&self, st: PopulationState) -> bool {
        self.index_of(st).is_ok()
    }

    pub fn index_of(&self, st: PopulationState) -> Result<usize> {
        let invalid = || Error::InvalidState {
            i_s: st.s,
            i_i: st.i,
            z: self.z,
        };
        if !st.is_valid(self.z) {
            return Err(invalid());
        }
        if self.strategies.is_full() {
            return state_index(st.s, st.i, self.z);
        }
        let mut active = self.strategies.iter();
        let first = active.next().expect("two active strategies");
        let k = st.count(first, self.z);
        if edge_state(self.strategies, k, self.z) == st {
            Ok(k)
        } else {
            Err(invalid())
        }
    }

    /// Largest index distance between states one move apart.
    pub fn bandwidth(&self) -> usize {
        if self.strategies.is_full() {
            self.z + 1
        } else {
            1
        }
    }
}

fn edge_state(strategies: StrategySet, k: usize, z: usize) -> PopulationState {
    let s = strategies.contains(Strategy::S);
    let i = strategies.contains(Strategy::I);
    match (s, i) {
        // {S, A}
        (true, false) => PopulationState { s: k, i: 0 },
        // {S, I}
        (true, true) => PopulationState { s: k, i: z - k },
        // {I, A}
        _ => PopulationState { s: 0, i: k },
    }
}
