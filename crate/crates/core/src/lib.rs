//! Rational equivalence of 0-cycles on surfaces in P^3.

pub mod chow;
pub mod cli;
pub mod config;
pub mod contact;
pub mod cycles;
pub mod error;
pub mod expression;
pub mod geometry;
pub mod homotopy;
pub mod linalg;
pub mod poly;
pub mod quadratic;
pub mod sample;
pub mod scalar;

pub use error::{Error, Result};
