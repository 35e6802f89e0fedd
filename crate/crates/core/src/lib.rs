//! Exact quadratic forms over Q and real quadratic fields, Lorentzian
//! reflection configurations, congruence levels for hyperplane families and
//! Coxeter reflection representations.

#![allow(clippy::needless_range_loop)]

pub mod arith;
pub mod cli;
pub mod constructions;
pub mod coxeter;
pub mod error;
pub mod forms;
pub mod lattice;
pub mod lorentz;
pub mod matrix;
pub mod separability;

pub use error::{Error, Result};
