//! Evolutionary dynamics of an informal risk-sharing pool (S), index
//! insurance (I) and no insurance (A) in a finite, well-mixed population.
//!
//! The pipeline is: [`payoff`] tables per group composition, [`fitness`] per
//! population state, the [`markov`] kernel and its stationary distribution,
//! then [`sweeps`] over parameter grids. [`montecarlo`] simulates the same
//! process agent by agent and serves as an independent check on the exact
//! solver.

pub mod cli;
mod combin;
pub mod config;
pub mod error;
pub mod fitness;
pub mod markov;
pub mod montecarlo;
mod output;
pub mod params;
pub mod payoff;
pub mod sweeps;

pub use error::{Error, Result, ValidationError};
pub use params::{ModelParams, Strategy, StrategySet};
