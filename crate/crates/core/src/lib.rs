//! Spectral clustering with certified eigenvector–indicator distances.
//!
//! The crate builds Hermitian representations of undirected graphs and
//! digraphs, computes bottom eigenvectors, clusters them with weighted
//! k-means, and bounds how far those eigenvectors are from the span of
//! cluster indicator vectors. Every bound is reported next to the exact
//! distance it certifies.

pub mod analysis;
pub mod bounds;
pub mod clustering;
pub mod error;
pub mod experiment;
pub mod generators;
pub mod graph;
pub mod indicators;
pub mod io;
pub mod spectral;

pub use error::{Error, Result};
pub use faer::c64;
pub use graph::{Edge, Graph, Partition};
pub use spectral::{EigenSystem, Representation, RepresentationKind};
