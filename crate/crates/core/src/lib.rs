//! Finite-dimensional operator algebra for quantum statistics.
//!
//! The crate covers the dynamical side (thermal states, unitary evolution,
//! dephasing, Bohr periods, energy-resolved action phases) and the
//! statistical side (Born rule, Dirac quasiprobabilities, weak values,
//! complex conditional probabilities, POVM statistics and the Ozawa error
//! functional) of Hilbert-space quantum mechanics.
//!
//! Everything is dense and immutable: operations are pure functions over
//! [`Operator`], [`StateVector`] and friends, so values can be shared across
//! threads freely. Numerical thresholds live in a single [`Tolerances`]
//! record that is passed explicitly wherever a decision depends on one.
//!
//! The crate is `no_std` compatible (it needs `alloc`); disable the default
//! `std` feature to build without the standard library.

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

mod config;
mod error;
mod float;

pub mod dynamics;
pub mod hilbert;
pub mod measurement;
pub mod statistics;
pub mod systems;
pub mod units;

pub use config::Tolerances;
pub use error::{Error, Result};
pub use hilbert::{
    commutator, eigendecompose, expectation, overlap, projector, validate_operator, Basis,
    DensityOperator, OperatorKind, Operator, Spectrum, StateVector, ValidityReport,
};

pub use num_complex::Complex64;

/// Shorthand for building a complex number.
#[inline]
pub const fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}
