//! Dense real-matrix and polynomial primitives.

mod matrix;
mod poly;

pub use matrix::{determinant, rank, solve_min_norm, RealMatrix, DEFAULT_RANK_TOL};
pub use poly::{poly_roots, sort_complex, Polynomial};
