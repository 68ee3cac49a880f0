//! Model parameters and their validity constraints.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, ValidationError};

/// One of the three behaviours an individual can adopt.
///
/// The declaration order (S, I, A) is the canonical order used everywhere a
/// per-strategy quantity is serialized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Strategy {
    /// Informal risk-sharing pool.
    S,
    /// Index insurance.
    I,
    /// No insurance.
    A,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [Strategy::S, Strategy::I, Strategy::A];

    pub fn index(self) -> usize {
        match self {
            Strategy::S => 0,
            Strategy::I => 1,
            Strategy::A => 2,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Strategy::S => "S",
            Strategy::I => "I",
            Strategy::A => "A",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "S" | "s" => Ok(Strategy::S),
            "I" | "i" => Ok(Strategy::I),
            "A" | "a" => Ok(Strategy::A),
            other => Err(Error::Config(format!("unknown strategy {other:?}"))),
        }
    }
}

/// The active strategies, two or three of {S, I, A}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Strategy>", into = "Vec<Strategy>")]
pub struct StrategySet([bool; 3]);

impl StrategySet {
    pub const FULL: StrategySet = StrategySet([true; 3]);

    pub fn new(strategies: &[Strategy]) -> Result<Self> {
        let mut mask = [false; 3];
        for s in strategies {
            if mask[s.index()] {
                return Err(Error::Config(format!("strategy {s} listed twice")));
            }
            mask[s.index()] = true;
        }
        let set = StrategySet(mask);
        if set.len() < 2 {
            return Err(Error::Config(
                "at least two strategies must be active".to_string(),
            ));
        }
        Ok(set)
    }

    pub fn contains(&self, s: Strategy) -> bool {
        self.0[s.index()]
    }

    /// Number of active strategies, `d`.
    pub fn len(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_full(&self) -> bool {
        self.len() == 3
    }

    /// Active strategies in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = Strategy> + '_ {
        Strategy::ALL.into_iter().filter(|s| self.contains(*s))
    }
}

impl Default for StrategySet {
    fn default() -> Self {
        StrategySet::FULL
    }
}

impl TryFrom<Vec<Strategy>> for StrategySet {
    type Error = Error;

    fn try_from(v: Vec<Strategy>) -> Result<Self> {
        StrategySet::new(&v)
    }
}

impl From<StrategySet> for Vec<Strategy> {
    fn from(s: StrategySet) -> Self {
        s.iter().collect()
    }
}

impl fmt::Display for StrategySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in self.iter() {
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// Every scalar of the model. Defaults are the reference parameter set
/// (w=1, p=q=0.2, r=0.03, alpha=0.8, gamma=0.8, delta1=0.1, delta2=0.05,
/// c=0.17, beta=10, mu=0.02, Z=50, N=40).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ModelParams {
    /// Initial wealth.
    pub w: f64,
    /// Disaster probability.
    pub p: f64,
    /// Index payout trigger probability.
    pub q: f64,
    /// Basis risk: probability of a disaster without a payout.
    pub r: f64,
    /// Fraction of wealth lost in a disaster.
    pub alpha: f64,
    /// Relative risk aversion.
    pub gamma: f64,
    /// Contribution fraction to the informal pool.
    pub delta1: f64,
    /// Contribution fraction to the pool among index-insurance buyers.
    pub delta2: f64,
    /// Insurance premium.
    pub c: f64,
    /// Selection intensity.
    pub beta: f64,
    /// Mutation probability.
    pub mu: f64,
    /// Population size.
    #[serde(rename = "Z")]
    pub z: usize,
    /// Group size.
    #[serde(rename = "N")]
    pub n: usize,
    pub strategies: StrategySet,
}

impl Default for ModelParams {
    fn default() -> Self {
        ModelParams {
            w: 1.0,
            p: 0.2,
            q: 0.2,
            r: 0.03,
            alpha: 0.8,
            gamma: 0.8,
            delta1: 0.1,
            delta2: 0.05,
            c: 0.17,
            beta: 10.0,
            mu: 0.02,
            z: 50,
            n: 40,
            strategies: StrategySet::FULL,
        }
    }
}

/// Names accepted by [`ModelParams::set`] and [`ModelParams::get`].
pub const PARAM_NAMES: [&str; 13] = [
    "w", "p", "q", "r", "alpha", "gamma", "delta1", "delta2", "c", "beta", "mu", "Z", "N",
];

impl ModelParams {
    /// Number of active strategies.
    pub fn d(&self) -> usize {
        self.strategies.len()
    }

    pub fn get(&self, name: &str) -> Result<f64> {
        Ok(match name {
            "w" => self.w,
            "p" => self.p,
            "q" => self.q,
            "r" => self.r,
            "alpha" => self.alpha,
            "gamma" => self.gamma,
            "delta1" => self.delta1,
            "delta2" => self.delta2,
            "c" => self.c,
            "beta" => self.beta,
            "mu" => self.mu,
            "Z" | "z" => self.z as f64,
            "N" | "n" => self.n as f64,
            _ => return Err(unknown_param(name)),
        })
    }

    /// Sets a scalar by name. Integer parameters reject fractional values.
    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        let slot = match name {
            "w" => &mut self.w,
            "p" => &mut self.p,
            "q" => &mut self.q,
            "r" => &mut self.r,
            "alpha" => &mut self.alpha,
            "gamma" => &mut self.gamma,
            "delta1" => &mut self.delta1,
            "delta2" => &mut self.delta2,
            "c" => &mut self.c,
            "beta" => &mut self.beta,
            "mu" => &mut self.mu,
            "Z" | "z" => {
                self.z = as_count(name, value)?;
                return Ok(());
            }
            "N" | "n" => {
                self.n = as_count(name, value)?;
                return Ok(());
            }
            _ => return Err(unknown_param(name)),
        };
        *slot = value;
        Ok(())
    }

    /// Applies a `name=value` override. `strategies=SI` selects a subset.
    pub fn apply_override(&mut self, assignment: &str) -> Result<()> {
        let (name, value) = assignment
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("override {assignment:?} is not name=value")))?;
        let (name, value) = (name.trim(), value.trim());
        if name == "strategies" {
            let list = value
                .chars()
                .filter(|c| c.is_ascii_alphabetic())
                .map(|c| c.to_string().parse())
                .collect::<Result<Vec<Strategy>>>()?;
            self.strategies = StrategySet::new(&list)?;
            return Ok(());
        }
        let v: f64 = value
            .parse()
            .map_err(|_| Error::Config(format!("override {name}: {value:?} is not a number")))?;
        self.set(name, v)
    }

    /// Returns the parameters unchanged iff every model invariant holds.
    pub fn validate(self) -> Result<Self> {
        let v = self.violations();
        if v.is_empty() {
            Ok(self)
        } else {
            Err(Error::Validation(ValidationError { violations: v }))
        }
    }

    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut check = |ok: bool, msg: &str| {
            if !ok {
                out.push(msg.to_string());
            }
        };
        let reals = [
            self.w,
            self.p,
            self.q,
            self.r,
            self.alpha,
            self.gamma,
            self.delta1,
            self.delta2,
            self.c,
            self.beta,
            self.mu,
        ];
        if reals.iter().any(|x| !x.is_finite()) {
            check(false, "all real parameters must be finite");
            return out;
        }
        let uses_s = self.strategies.contains(Strategy::S);
        let uses_i = self.strategies.contains(Strategy::I);
        let w = self.w;

        check(w > 0.0, "w must be positive");
        check((0.0..=1.0).contains(&self.p), "p must lie in [0, 1]");
        check((0.0..=1.0).contains(&self.q), "q must lie in [0, 1]");
        check(self.r >= 0.0, "r must be non-negative");
        check(self.r >= self.p - self.q, "r below p - q (q + r - p < 0)");
        check(self.r <= self.p, "r exceeds min(p, 1-q): r > p");
        check(self.r <= 1.0 - self.q, "r exceeds min(p, 1-q): r > 1 - q");
        check(
            self.alpha > 0.0 && self.alpha < 1.0,
            "alpha must lie in (0, 1)",
        );
        check(self.gamma >= 0.0, "gamma must be non-negative");
        check(
            (0.0..1.0).contains(&self.delta1),
            "delta1 must lie in [0, 1)",
        );
        check(
            (0.0..1.0).contains(&self.delta2),
            "delta2 must lie in [0, 1)",
        );
        check(self.beta >= 0.0, "beta must be non-negative");
        check((0.0..=1.0).contains(&self.mu), "mu must lie in [0, 1]");
        check(self.z >= 2, "Z must be at least 2");
        check(self.n >= 2, "N must be at least 2");
        check(self.n <= self.z, "N exceeds Z");

        if uses_s {
            check(
                w - self.delta1 * w > 0.0,
                "pool member wealth w - delta1*w must be positive",
            );
        }
        check(
            (1.0 - self.alpha) * w > 0.0,
            "post-disaster wealth (1-alpha)*w must be positive",
        );
        if uses_i {
            check(
                w - self.c - self.delta2 * w > 0.0,
                "insured wealth w - c - delta2*w must be positive",
            );
            check(
                (1.0 - self.alpha) * w - self.c > 0.0,
                "premium exceeds (1-alpha)*w: uncompensated insured wealth not positive",
            );
        }
        out
    }
}

fn unknown_param(name: &str) -> Error {
    Error::Config(format!(
        "unknown parameter {name:?} (expected one of {})",
        PARAM_NAMES.join(", ")
    ))
}

fn as_count(name: &str, value: f64) -> Result<usize> {
    if value.fract() != 0.0 || value < 0.0 || !value.is_finite() {
        return Err(Error::Config(format!(
            "{name} must be a non-negative integer, got {value}"
        )));
    }
    Ok(value as usize)
}
