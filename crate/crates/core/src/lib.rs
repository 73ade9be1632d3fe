//! Vertex and hyperedge p-Laplacians on oriented hypergraphs.
//!
//! An oriented hypergraph assigns each hyperedge a set of input and a set of
//! output vertices. This crate evaluates the p-Laplacian operators on both
//! sides, computes and certifies their eigenpairs, counts nodal domains, and
//! checks the spectral bounds that relate eigenvalues to cuts, colorings and
//! bipartite sub-hypergraphs.

pub mod cli;
pub mod eigen;
pub mod error;
pub mod fixtures;
pub mod hypergraph;
pub mod io;
pub mod linalg;
pub mod lp;
pub mod nodal;
pub mod numeric;
pub mod operators;
pub mod par;
pub mod partition;

pub use error::{Error, Result};
pub use hypergraph::{Hyperedge, IncidenceMatrix, OrientedHypergraph, Subset};
pub use operators::{PExponent, RayleighForm, Side};
pub use par::Exec;
