//! Atom–surface dispersion shifts near a planar Drude–Lorentz dielectric at
//! finite temperature: nonresonant Casimir–Polder shifts and the resonant
//! second-order coupling of an atomic transition to a pair of surface
//! polaritons.

// `!(x > 0.0)` is used on purpose throughout: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod atoms;
pub mod constants;
pub mod error;
pub mod greens;
pub mod material;
pub mod numeric;
pub mod parallel;
pub mod potentials;
pub mod run;
pub mod units;

pub use error::{Error, Result};

/// Version stamped into every file and report this crate writes.
pub const SCHEMA_VERSION: u32 = 1;
