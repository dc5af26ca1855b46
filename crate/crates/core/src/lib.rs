//! Log-gas densities of Schatten-class unit balls, samplers for them, and
//! numerical checks of the moment identities they satisfy.

// `!(x > 0.0)` style guards are used on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod density;
pub mod gamma;
pub mod matrix;
pub mod moments;
pub mod quaternion;
pub mod samplers;
pub mod types;
pub mod verify;

pub use error::{Error, Result};
pub use quaternion::Quaternion;
pub use types::{ensemble_of, Ensemble, EnsembleParams, Exponent, Field, SchattenSpec, Subspace};
