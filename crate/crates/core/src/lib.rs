//! Radial supersonic Euler flow with entropy: initial-data validation,
//! a characteristic solver, the Riccati gradient system, a finite-volume
//! cross-check and the verifier that ties them together.

// `!(x > y)` is used on purpose so that NaN fails the test.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod characteristics;
pub mod error;
pub mod fv;
pub mod gas;
pub mod initial;
pub mod io;
pub mod lab;
pub mod numerics;
pub mod riccati;
pub mod verify;

pub use error::{Error, Result};
pub use gas::{GasModel, State};
