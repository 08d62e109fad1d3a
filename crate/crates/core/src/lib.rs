// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod eigenid;
pub mod error;
pub mod random;
pub mod signsearch;
pub mod specfun;
pub mod sphere;
pub mod torus;

pub use error::{Error, Result};
