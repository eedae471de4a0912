//! Solvers for doubly nonnegative programs (DNNs) and certified dual bounds.
//!
//! A DNN is a semidefinite program whose matrix variable is additionally
//! constrained to be entrywise nonnegative.  This crate provides:
//!
//! * dense symmetric linear algebra primitives ([`linalg`]),
//! * the problem model with a DIMACS graph front end and the theta-plus
//!   stable-set relaxation builder ([`problem`]),
//! * four ADMM variants, two of them working on a low-rank factorization
//!   of the dual matrix ([`solver`]),
//! * two post-processing procedures turning approximate dual solutions
//!   into rigorous dual bounds ([`bounds`]),
//! * a brute-force stability-number oracle and performance-profile
//!   computation for benchmarking ([`bench`]).
//!
//! The crate is `no_std`-compatible (requires `alloc`); the default `std`
//! feature enables wall-clock time limits in the solvers.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod bench;
pub mod bounds;
pub mod error;
pub mod linalg;
pub mod problem;
pub mod solver;

pub use error::Error;
pub use linalg::{EigenDecomposition, Factor, SymMatrix};
pub use problem::{DnnProblem, Graph};
pub use solver::{Method, Residuals, SolveReport, SolverConfig, SolverState, Status};

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;

pub(crate) mod math {
    //! Float helpers that work without `std`.

    #[cfg(feature = "std")]
    #[inline]
    pub fn sqrt(x: f64) -> f64 {
        x.sqrt()
    }

    #[cfg(not(feature = "std"))]
    #[inline]
    pub fn sqrt(x: f64) -> f64 {
        libm::sqrt(x)
    }

    #[cfg(feature = "std")]
    #[inline]
    pub fn abs(x: f64) -> f64 {
        x.abs()
    }

    #[cfg(not(feature = "std"))]
    #[inline]
    pub fn abs(x: f64) -> f64 {
        libm::fabs(x)
    }

    #[cfg(feature = "std")]
    #[inline]
    pub fn hypot(x: f64, y: f64) -> f64 {
        x.hypot(y)
    }

    #[cfg(not(feature = "std"))]
    #[inline]
    pub fn hypot(x: f64, y: f64) -> f64 {
        libm::hypot(x, y)
    }

    #[cfg(feature = "std")]
    #[inline]
    pub fn cbrt(x: f64) -> f64 {
        x.cbrt()
    }

    #[cfg(not(feature = "std"))]
    #[inline]
    pub fn cbrt(x: f64) -> f64 {
        libm::cbrt(x)
    }

    #[cfg(feature = "std")]
    #[inline]
    pub fn acos(x: f64) -> f64 {
        x.acos()
    }

    #[cfg(not(feature = "std"))]
    #[inline]
    pub fn acos(x: f64) -> f64 {
        libm::acos(x)
    }

    #[cfg(feature = "std")]
    #[inline]
    pub fn cos(x: f64) -> f64 {
        x.cos()
    }

    #[cfg(not(feature = "std"))]
    #[inline]
    pub fn cos(x: f64) -> f64 {
        libm::cos(x)
    }
}
