//! Dirichlet forms of centered chains: the form and its symmetrization, the
//! cycle formula for the antisymmetric part, cycle Poincaré constants, sector
//! ratios and Green kernel comparisons.

mod forms;
mod green;
mod poincare;
mod sector;

pub use forms::{
    antisymmetric_form_cycles, dirichlet_form, exponential_weight_ratio, symmetrized_form, CenteredChain, TestFunction,
};
pub use green::{green_absorbing, green_comparison, green_partial, GreenMode, GreenReport, GreenSolver};
pub use poincare::poincare_constant;
pub use sector::{sector_ratio, SectorConfig, SectorEstimate};

use crate::markov_graph::GraphError;

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum FormError {
    #[error("test function support touches the window boundary at {0}")]
    SupportOnBoundary(String),
    #[error("test function support leaves the window at {0}")]
    SupportOutsideWindow(String),
    #[error("cycle length must be at least 1, got {0}")]
    InvalidLength(usize),
    #[error("decomposition does not center the chain (max residual {0:e})")]
    NotCentered(f64),
    #[error("no killing reachable from {0}: I - Q is singular")]
    NoKilling(String),
    #[error("linear system is singular")]
    Singular,
    #[error("invalid parameter: {0}")]
    Invalid(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}
