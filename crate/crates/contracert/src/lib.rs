//! Weighted-Euclidean contraction certificates for symmetric-weight
//! recurrent neural networks, brute-force log-optimality verification over
//! diagonal-scaling matrix polytopes, and a contracting-network solver for
//! box-constrained quadratic programs.

pub mod error;
pub mod mat;

pub mod certify;
pub mod dynamics;
pub mod io;
pub mod linalg;
pub mod polytope;
pub mod qp;
pub mod weights;

pub use error::{Error, Result};
