//! Numerical engine for quasi-local energy of 2-surfaces in static
//! spherically symmetric spacetimes.

#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod chart;
pub mod cky;
pub mod cli;
pub mod config;
pub mod embed;
pub mod error;
pub mod identities;
pub mod jet;
pub mod qlm;
pub mod quadrature;
pub mod spacetime;
pub mod surface;

pub use error::{QlmError, Result};
