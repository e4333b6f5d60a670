//! Static perfect-fluid stellar models.
//!
//! The crate integrates the Tolman–Oppenheimer–Volkoff system, carries a
//! catalog of closed-form solutions, evaluates the static perfect fluid
//! field equations as pointwise residuals, computes Hawking and Brown–York
//! quasi-local masses on level sets of the lapse, audits energy conditions
//! and builds conformally flat models from a radial conformal factor.
//!
//! Units are geometrized (G = c = 1). The field-equation residuals use the
//! geometric density and pressure; see [`units`] for the bridge to the
//! physical `8πμ`, `8πρ`, `Λ` convention.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod catalog;
pub mod conformal;
pub mod energy;
pub mod error;
pub mod geometry;
pub mod numerics;
pub mod ode;
pub mod quasilocal;
pub mod tov;
pub mod units;

pub use error::{Error, Result};
