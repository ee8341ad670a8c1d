//! Weighted oriented graphs as Markov kernels on finite windows, their cycle
//! decompositions and the two graph metrics.

mod centering;
mod cycles;
mod flow;
pub mod io;
mod kernel;
mod metric;

pub use centering::{
    invariance_check, reversible_decomposition, time_reversal, verify_centering, CenteringReport, InvarianceReport,
};
pub use cycles::{Cycle, CycleDecomposition};
pub use flow::{circulation_to_cycles, kernel_flow, FlowDecomposition};
pub use kernel::{Kernel, KernelBuilder, Measure, ROW_SUM_TOL};
pub use metric::{directed_detour, graph_distance};

/// Structural and numerical failures of graph operations.
///
/// Vertex labels are carried as their `Debug` rendering so the error type
/// stays independent of the vertex type.
#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum GraphError {
    #[error("negative weight on edge {src} -> {dst}")]
    NegativeWeight { src: String, dst: String },
    #[error("row of {vertex} sums to {sum}")]
    RowSum { vertex: String, sum: f64 },
    #[error("invalid cycle: {0}")]
    InvalidCycle(String),
    #[error("cycle weight #{index} is not positive ({weight})")]
    NonPositiveCycleWeight { index: usize, weight: String },
    #[error("cycle edge {src} -> {dst} leaves the kernel window")]
    CycleOutsideWindow { src: String, dst: String },
    #[error("tolerance must be positive, got {0}")]
    InvalidTolerance(f64),
    #[error("detailed balance fails on {src} -> {dst} (gap {gap:e})")]
    NotReversible { src: String, dst: String, gap: f64 },
    #[error("measure is not invariant at {vertex} (residual {residual:e})")]
    NotInvariant { vertex: String, residual: f64 },
    #[error("measure is not positive at {vertex}")]
    NonPositiveMeasure { vertex: String },
    #[error("flow is not a circulation at {vertex} (divergence {divergence:e})")]
    NotCirculation { vertex: String, divergence: f64 },
    #[error("no cycle covers the reversed edge {src} -> {dst}")]
    MissingCoveringCycle { src: String, dst: String },
    #[error("{dst} is not within distance {radius} of {src}")]
    Unreachable { src: String, dst: String, radius: usize },
    #[error("vertex {0} is not in the window")]
    UnknownVertex(String),
    #[error("bad graph file: {0}")]
    Format(String),
}
