//! Entanglement witnesses from first and second moments of collective spin
//! observables.
//!
//! The crate is organised bottom-up:
//!
//! - [`spin_core`]: Dicke-basis operators, a symmetric tridiagonal ground-state
//!   solver and pure-state moments.
//! - [`sm_curves`]: the minimal-variance curves `F_S[x]`, built from
//!   variational ground states.
//! - [`witnesses`]: spin-squeezing, mode-inseparability, entanglement-depth,
//!   steering and local-squeezing criteria.
//! - [`split_model`]: moment propagation for particles distributed into
//!   addressable modes, plus an occupation sampler.
//! - [`cli`]: the command-line front end.

pub mod cli;
mod error;
pub mod sm_curves;
pub mod spin_core;
pub mod split_model;
pub mod witnesses;

pub use error::{Error, Result};

/// Linear ratio to decibels, `10·log10(value)`.
pub fn to_db(value: f64) -> f64 {
    10.0 * value.log10()
}
