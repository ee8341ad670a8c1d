//! Centered Markov chains and random walks on groups.
//!
//! - [`markov_graph`]: kernels on finite windows, cycle decompositions, graph metrics.
//! - [`dirichlet`]: Dirichlet forms, Poincaré constants, sector ratios, Green kernels.
//! - [`groups`]: canonical-form groups, centering conditions, Cayley windows.
//! - [`evolution`]: exact convolution powers, Monte Carlo, Gaussian-bound fitting, speed and entropy.

pub mod dirichlet;
pub mod evolution;
pub mod fixtures;
pub mod groups;
pub mod markov_graph;
pub mod weight;

pub use weight::{Rational, Weight};
