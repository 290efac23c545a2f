//! Gaussian-state simulation of continuous-variable GHZ-type entanglement and
//! multi-party assisted teleportation.
//!
//! Conventions: `ħ = 1/2`, so each vacuum quadrature has variance `1/4`;
//! quadratures are interleaved `(x_1, p_1, ..., x_n, p_n)`; modes are zero-based
//! in the library and one-based on the command line.

pub mod error;
pub mod exec;
pub mod gaussian;
pub mod heisenberg;
pub mod network;
pub mod rng;
pub mod teleport;

#[doc(hidden)]
pub mod cli;

pub use error::{Error, Result};

/// `10·log10(e²)`: squeezing in dB is `r · DB_PER_NEPER`.
pub const DB_PER_NEPER: f64 = 8.685_889_638_065_037;

pub fn db_to_r(db: f64) -> f64 {
    db / DB_PER_NEPER
}

pub fn r_to_db(r: f64) -> f64 {
    r * DB_PER_NEPER
}
