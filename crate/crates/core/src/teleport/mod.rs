//! Teleportation network: Bell detection at the sender, momentum detections at
//! the assisting stations, classical feed-forward to the receiver.

mod closed;
mod curve;
pub mod formulas;
mod optimize;
mod protocol;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use closed::{closed_form_fidelity, optimal_gain, GainLandscape, TeleportForms};
pub use curve::{
    fidelity_curve, threshold_scan, Classification, CurveRow, ScanGrid, Stationary, StationaryKind,
    ThresholdReport,
};
pub use optimize::{golden_section_max, optimize_gains_numeric, GainSearch, OptimizedGains};
pub use protocol::{run_protocol, run_trials, ClassicalRecord, TeleportOutcome};

/// Receiver gains. `g` scales the sender's Bell results, `gn` the assisting
/// momenta; `per_station` overrides `gn` with one gain per assisting mode in
/// ascending mode order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GainSchedule {
    pub g: f64,
    pub gn: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub per_station: Option<Vec<f64>>,
}

impl GainSchedule {
    pub fn new(g: f64, gn: f64) -> Self {
        Self {
            g,
            gn,
            per_station: None,
        }
    }

    /// Unit Bell gain with the closed-form optimal assisting gain; `gn = 0` when
    /// there are no assisting stations.
    pub fn optimal(config: &crate::network::NetworkConfig) -> Result<Self> {
        let gn = if config.n() < 3 {
            0.0
        } else {
            optimal_gain(config.n(), config.scenario(), config.r())?
        };
        Ok(Self::new(1.0, gn))
    }

    pub fn per_station(g: f64, gains: Vec<f64>) -> Self {
        let gn = if gains.is_empty() {
            0.0
        } else {
            gains.iter().sum::<f64>() / gains.len() as f64
        };
        Self {
            g,
            gn,
            per_station: Some(gains),
        }
    }

    /// Gains for the `n_assisting` assisting modes, validated.
    pub fn assisting_gains(&self, n_assisting: usize) -> Result<Vec<f64>> {
        let gains = match &self.per_station {
            Some(v) if v.len() != n_assisting => {
                return Err(Error::GainCount {
                    expected: n_assisting,
                    actual: v.len(),
                })
            }
            Some(v) => v.clone(),
            None => vec![self.gn; n_assisting],
        };
        if !self.g.is_finite() || !self.gn.is_finite() || gains.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("gain"));
        }
        Ok(gains)
    }
}

/// Modes other than sender and receiver, ascending.
pub(crate) fn assisting_modes(n: usize, sender: usize, receiver: usize) -> Vec<usize> {
    (0..n).filter(|&j| j != sender && j != receiver).collect()
}

pub(crate) fn check_parties(n: usize, sender: usize, receiver: usize) -> Result<()> {
    for idx in [sender, receiver] {
        if idx >= n {
            return Err(Error::ModeOutOfRange {
                index: idx,
                n_modes: n,
            });
        }
    }
    if sender == receiver {
        return Err(Error::SameMode(sender));
    }
    Ok(())
}
