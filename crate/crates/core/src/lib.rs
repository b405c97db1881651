//! Frenet apparatus, Bertrand pairs and spherical indicatrices of space
//! curves, computed with truncated Taylor series.

// Guards are written `!(x > eps)` so that NaN fails them too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bertrand;
pub mod cli;
pub mod classify;
pub mod indicatrix;
pub mod io;
pub mod curve;
pub mod error;
pub mod expr;
pub mod jet;
pub mod vec3;

pub use error::{Error, Result};
