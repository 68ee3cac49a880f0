//! The finite-population chain over strategy configurations.

pub mod analysis;
pub mod kernel;
pub mod space;
pub mod stationary;

pub use analysis::{
    adoption_rates, gradient_field, insurer_profit, Adoption, GradientField, GradientVector, Regime,
};
pub use kernel::{build_kernel, fermi, transition_prob, TransitionModel};
pub use space::{simplex_size, state_from_index, state_index, PopulationState, StateSpace};
pub use stationary::{
    power_iteration, residual, solve_gth, stationary, SolverMethod, StationaryOptions,
    StationaryResult,
};

use crate::error::Result;
use crate::params::ModelParams;

/// Builds the kernel for `params` and solves for its stationary distribution.
pub fn solve(
    params: &ModelParams,
    opts: StationaryOptions,
) -> Result<(TransitionModel, StationaryResult)> {
    let model = TransitionModel::build(params)?;
    let result = stationary(&model, opts)?;
    Ok((model, result))
}
