//! Matrix-weighted graphs: spectral operators, expansion inequalities, the
//! sheaf factorization of the Laplacian, and expanders built from tight fusion
//! frames.
//!
//! A matrix-weighted graph assigns a `k × k` positive semidefinite matrix to
//! every edge of an undirected graph. Its adjacency and Laplacian matrices are
//! `kn × kn` block matrices acting on functions `V → ℝ^k`. This crate is
//! `no_std` (with `alloc`); file formats, the CLI and parallel search live in
//! the companion `mwg` crate.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod cheeger;
pub mod coloring;
pub mod enumerate;
pub mod error;
pub mod expander;
pub mod expansion;
pub mod frame;
pub mod graph;
pub mod linalg;
pub mod report;
pub mod search;
pub mod sheaf;
pub mod spectral;
pub mod subset;
pub mod truss;

pub use error::{Error, Result};
pub use graph::{BaseGraph, Edge, MatrixWeightedGraph, Regularity, ScalarWeightedGraph};
pub use linalg::{Matrix, Spectrum, SymMatrix, Tolerances};
pub use report::BoundReport;
pub use subset::VertexSet;
