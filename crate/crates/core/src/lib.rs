//! Exact construction, proof and numeric certification of binomial-sum
//! series for π of the form `π = sum_n S(n) / (C(mn, pn) a^n)`.

pub mod cli;
pub mod detlab;
pub mod discover;
pub mod error;
pub mod evalnum;
pub mod exactnum;
pub mod polyring;
pub mod prover;

pub use error::{Error, Result};
