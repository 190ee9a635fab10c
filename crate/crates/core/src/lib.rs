//! Observability, controllability and transfer functions of second-order
//! linear time-invariant systems `x'' = A0 x + A1 x' + B u`, `y = C x`,
//! analyzed directly in second-order form.
//!
//! The same matrices serve the discrete recursion
//! `x[t+2] = A0 x[t] + A1 x[t+1] + B u[t]`.

pub mod analysis;
pub mod cli;
pub mod error;
pub mod matcore;
pub mod recurrences;
pub mod sysmodel;
pub mod trajectory;
pub mod transfer;

pub use error::{Error, Result};
pub use matcore::{Polynomial, RealMatrix, DEFAULT_RANK_TOL};
pub use sysmodel::{dual_system, load_system, SecondOrderSystem, StateSnapshot, TimeKind};
/// Complex scalar type used by the transfer-function API.
pub use num_complex;
