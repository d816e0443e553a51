//! Exact solver for boundary value problems of singular linear
//! discrete-time systems F·Y(k+1) = G·Y(k) with two-point boundary
//! condition A·Y(k0) + B·Y(kN) = D.
//!
//! Everything is computed over exact Gaussian-rational arithmetic; there is
//! no floating point on any solution path. The pipeline is:
//!
//! 1. [`pencil`]: Kronecker invariant structure of the pencil sF - G
//!    (finite and infinite elementary divisors, minimal indices) together
//!    with exact strict-equivalence transforms, and the finite regular part
//!    (Qp, W) that carries all bounded dynamics.
//! 2. [`bvp`]: classification of the boundary value problem (no solution /
//!    unique / infinite family) and exact trajectories.
//! 3. [`optimal`]: least-squares, Tikhonov-regularized, pseudoinverse, and
//!    minimum-norm surrogate solutions when the problem is inconsistent or
//!    under-determined.
//! 4. [`oracle`]: an independent brute-force check that unrolls the
//!    recurrence into one block linear system and classifies it directly.
//! 5. [`leontief`]: construction of the system pair from dynamic
//!    input-output model data.

#![forbid(unsafe_code)]

pub mod bvp;
pub mod error;
#[cfg(test)]
mod fixtures;
pub mod leontief;
pub mod linalg;
pub mod matrix;
pub mod optimal;
pub mod oracle;
pub mod pencil;
pub mod poly;
pub mod scalar;
pub mod smith;

pub use error::Error;
pub use matrix::Matrix;
pub use scalar::{Rational, Scalar};
