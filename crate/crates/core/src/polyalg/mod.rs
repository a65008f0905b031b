//! Exact sparse polynomials in the particle coordinates `x[i][a]`.
//!
//! Coefficients live in `Q` (constructions) or a large prime field (rank
//! probing). Particle permutations act by relabelling, and the signed
//! averaging projector produces totally antisymmetric polynomials.

mod exponent;
mod perm;
mod polynomial;
mod scalar;

pub use exponent::{Exponent, COORDS};
pub use perm::ParticlePermutation;
pub use polynomial::{
    ArithOp, Degree, Grading, Polynomial, PolynomialJson, SymmetryKind, TermJson,
};
pub use scalar::{is_prime, Field, Scalar, DEFAULT_PRIME, MIN_PRIME};

pub(crate) use scalar::{inv_mod, mul_mod, sub_mod};
