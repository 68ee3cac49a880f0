use serde::{Deserialize, Serialize};
use std::fmt;

use crate::markov::kernel::TransitionModel;
use crate::markov::space::StateSpace;
use crate::params::{ModelParams, Strategy};

/// Long-run adoption frequencies of S, I and A.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Adoption {
    pub s: f64,
    pub i: f64,
    pub a: f64,
}

/// Most adopted strategy, or a tie.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    S,
    I,
    A,
    #[serde(rename = "tie")]
    Tie,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::S => "S",
            Regime::I => "I",
            Regime::A => "A",
            Regime::Tie => "tie",
        })
    }
}

/// Adoption rates closer than this are reported as a tie.
pub const TIE_TOLERANCE: f64 = 1e-10;

impl Adoption {
    pub fn get(&self, s: Strategy) -> f64 {
        match s {
            Strategy::S => self.s,
            Strategy::I => self.i,
            Strategy::A => self.a,
        }
    }

    pub fn argmax(&self) -> Regime {
        let mut ranked = [
            (self.s, Regime::S),
            (self.i, Regime::I),
            (self.a, Regime::A),
        ];
        ranked.sort_by(|x, y| y.0.total_cmp(&x.0));
        if ranked[0].0 - ranked[1].0 <= TIE_TOLERANCE {
            Regime::Tie
        } else {
            ranked[0].1
        }
    }
}

/// Expected strategy counts divided by `Z` under `probs`.
pub fn adoption_rates(probs: &[f64], space: &StateSpace) -> Adoption {
    let z = space.z();
    let mut acc = [0.0; 3];
    for (p, st) in probs.iter().zip(space.states()) {
        acc[0] += p * st.s as f64;
        acc[1] += p * st.i as f64;
        acc[2] += p * st.a(z) as f64;
    }
    let zf = z as f64;
    Adoption {
        s: acc[0] / zf,
        i: acc[1] / zf,
        a: acc[2] / zf,
    }
}

/// Insurer's expected profit `p_I Z (c - alpha w q)`.
pub fn insurer_profit(p_i: f64, params: &ModelParams) -> f64 {
    p_i * params.z as f64 * (params.c - params.alpha * params.w * params.q)
}

/// Net one-step flow towards I (`g_i`) and towards S (`g_s`) at every state.
#[derive(Debug, Clone, PartialEq)]
pub struct GradientField {
    pub space: StateSpace,
    pub vectors: Vec<GradientVector>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GradientVector {
    pub g_i: f64,
    pub g_s: f64,
}

pub fn gradient_field(model: &TransitionModel) -> GradientField {
    use Strategy::{A, I, S};
    let space = model.space().clone();
    let vectors = space
        .states()
        .iter()
        .map(|&st| {
            let t = |x, y| model.transition(st, x, y);
            let (si, ai, is, ia, as_, sa) = (t(S, I), t(A, I), t(I, S), t(I, A), t(A, S), t(S, A));
            GradientVector {
                g_i: si + ai - is - ia,
                g_s: is + as_ - si - sa,
            }
        })
        .collect();
    GradientField { space, vectors }
}
