//! Exact algebra for the backflow-determinant ansatz.
//!
//! The crate builds tail-symmetric orbitals, expands the backflow determinant,
//! counts the dimensions of parameter and target spaces, and probes the
//! generic rank of the ansatz map (and of its secant joins) over a prime field.

pub mod error;
pub mod polyalg;

pub use error::{Error, Result};
pub mod combinat;
pub mod highprec;
pub mod ansatz;
pub mod dimension;
pub mod rankprobe;
pub mod cli;
