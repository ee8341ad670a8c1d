//! Exact convolution powers, Monte Carlo paths, Gaussian-bound fitting, and
//! speed / entropy / escape estimators.

mod cv;
mod distribution;
mod lamp;
mod metric;
mod monte_carlo;

pub use cv::{escape_probability, fit_cv_constant, return_profile, CVMargin, CVReport};
pub use distribution::{powers, step_measure, SparseDistribution, PRUNE_EPS};
pub use lamp::{check_lamp_identity, example_lamp_generators, LampReport};
pub use metric::DistanceOracle;
pub use monte_carlo::{
    empirical_tv, entropy_estimate, mc_sample, path_rng, sample_endpoint, speed_estimate, EntropyEstimate,
    SpeedEstimate,
};

use thiserror::Error;

use crate::groups::GroupError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvolutionError {
    #[error("support overflow at t={t}: {size} atoms exceed the limit {limit}; use a smaller t or pruning")]
    SupportOverflow { t: usize, size: usize, limit: usize },
    #[error("no distance known for {0}")]
    UnknownDistance(String),
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}
