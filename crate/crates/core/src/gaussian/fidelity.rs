use nalgebra::{Matrix2, Vector2};

use crate::error::{Error, Result};

use super::{GaussianState, VACUUM_VARIANCE};

/// Overlap `⟨α|ρ|α⟩` of a single-mode Gaussian state with the coherent state
/// `α = x_in + i p_in`.
///
/// Computed as `π Q(α)`: the Q function is a Gaussian with covariance
/// `cov + I/4`, so `F = exp(-dᵀ Σ_Q⁻¹ d / 2) / (2 √det Σ_Q)` with `d = α - mean`.
pub fn coherent_fidelity(state: &GaussianState, x_in: f64, p_in: f64) -> Result<f64> {
    if state.n_modes() != 1 {
        return Err(Error::WrongModeCount {
            expected: 1,
            actual: state.n_modes(),
        });
    }
    if !(x_in.is_finite() && p_in.is_finite()) {
        return Err(Error::NonFinite("coherent amplitude"));
    }
    let c = state.cov();
    let q_cov = Matrix2::new(
        c[(0, 0)] + VACUUM_VARIANCE,
        c[(0, 1)],
        c[(1, 0)],
        c[(1, 1)] + VACUUM_VARIANCE,
    );
    let det = q_cov.determinant();
    let d = Vector2::new(x_in - state.mean()[0], p_in - state.mean()[1]);
    // Σ_Q⁻¹ = adj(Σ_Q)/det for 2x2
    let quad = (q_cov[(1, 1)] * d[0] * d[0] - 2.0 * q_cov[(0, 1)] * d[0] * d[1]
        + q_cov[(0, 0)] * d[1] * d[1])
        / det;
    Ok((-0.5 * quad).exp() / (2.0 * det.sqrt()))
}
