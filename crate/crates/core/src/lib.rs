//! Exact signed decompositions of rational simplicial cones into
//! unimodular cones, with primal, dual and hybrid strategies and a
//! brute-force lattice-point oracle.
//!
//! Matrices store cone generators as columns. All arithmetic is exact.

pub mod cone;
pub mod decompose;
mod error;
pub mod format;
pub mod lattice;
pub mod linalg;
pub mod oracle;

pub use cone::{HalfOpenCone, Sign, SignedCone};
pub use decompose::{
    decompose, decompose_parallel, decompose_parallel_streaming, decompose_streaming, Stats, Strategy, StrategyConfig,
};
pub use error::{Error, Result};
pub use lattice::{CoefficientVector, Direction, Norm};
pub use linalg::{GammaBundle, IntMatrix};
