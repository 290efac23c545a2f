//! Phase-space representation of Gaussian states.
//!
//! Units have ħ = 1/2, so each vacuum quadrature has variance 1/4. Quadratures
//! are interleaved per mode: `(x_1, p_1, ..., x_n, p_n)`.

mod fidelity;
mod measure;
mod state;
mod symplectic;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use fidelity::coherent_fidelity;
pub use measure::{measure_homodyne, Forced, Homodyne, OutcomeSource, Sampled, DEGENERACY_EPS};
pub use state::{GaussianState, StateRecord};
pub use symplectic::{
    beamsplitter_block, feed_forward_block, omega, squeezer_block, SymplecticMap,
};

pub const VACUUM_VARIANCE: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Quadrature {
    X,
    P,
}

impl Quadrature {
    pub(crate) fn offset(self) -> usize {
        match self {
            Quadrature::X => 0,
            Quadrature::P => 1,
        }
    }
}

/// Which quadrature a squeezer reduces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SqueezeAxis {
    /// `var(p) = e^{-2r}/4`, `var(x) = e^{+2r}/4`.
    Momentum,
    /// `var(x) = e^{-2r}/4`, `var(p) = e^{+2r}/4`.
    Position,
}

pub(crate) fn check_mode(index: usize, n_modes: usize) -> Result<()> {
    if index < n_modes {
        Ok(())
    } else {
        Err(Error::ModeOutOfRange { index, n_modes })
    }
}
