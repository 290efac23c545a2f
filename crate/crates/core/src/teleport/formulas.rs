//! Closed-form expressions for the unit-gain (`g = 1`) teleportation network.
//! Written out directly from the analytic results, with no reference to the
//! state or form machinery, so they serve as an independent check on both.

use crate::error::{Error, Result};

/// Fidelity limit for coherent-state teleportation without shared entanglement.
pub const CLASSICAL_BOUND: f64 = 0.5;

fn check(n: usize, min: usize, r: f64) -> Result<()> {
    if n < min {
        return Err(Error::TooFewParties { min, actual: n });
    }
    if !(r.is_finite() && r >= 0.0) {
        return Err(Error::InvalidSqueezing(r));
    }
    Ok(())
}

/// Three parties, equal squeezing, optimal assisting gain:
/// `{[1 + e^{-2r}][1 + 3/(2e^{2r} + e^{-2r})]}^{-1/2}`.
pub fn tritter_fidelity(r: f64) -> Result<f64> {
    check(3, 3, r)?;
    let (up, down) = ((2.0 * r).exp(), (-2.0 * r).exp());
    Ok(((1.0 + down) * (1.0 + 3.0 / (2.0 * up + down))).powf(-0.5))
}

/// `N` parties, equal squeezing, optimal assisting gain:
/// `(1 + e^{-2r})^{-1/2} (1 + N/[2e^{2r} + (N-2)e^{-2r}])^{-1/2}`.
pub fn all_equal_fidelity(n: usize, r: f64) -> Result<f64> {
    check(n, 2, r)?;
    let nf = n as f64;
    let (up, down) = ((2.0 * r).exp(), (-2.0 * r).exp());
    Ok(((1.0 + down) * (1.0 + nf / (2.0 * up + (nf - 2.0) * down))).powf(-0.5))
}

/// `N` parties, only mode 1 squeezed, optimal assisting gain:
/// `[2 + 2N/(N - 2 + 2e^{2r_1})]^{-1/2}`.
pub fn one_squeezed_fidelity(n: usize, r1: f64) -> Result<f64> {
    check(n, 2, r1)?;
    let nf = n as f64;
    Ok((2.0 + 2.0 * nf / (nf - 2.0 + 2.0 * (2.0 * r1).exp())).powf(-0.5))
}

/// `(e^{4r} - 1)/(e^{4r} + (N-2)/2)`, in a form that stays finite for large `r`.
pub fn all_equal_gain(n: usize, r: f64) -> Result<f64> {
    check(n, 3, r)?;
    let d = (-4.0 * r).exp();
    Ok((1.0 - d) / (1.0 + (n as f64 - 2.0) / 2.0 * d))
}

/// `(e^{2r_1} - 1)/(e^{2r_1} + (N-2)/2)`.
pub fn one_squeezed_gain(n: usize, r1: f64) -> Result<f64> {
    check(n, 3, r1)?;
    let d = (-2.0 * r1).exp();
    Ok((1.0 - d) / (1.0 + (n as f64 - 2.0) / 2.0 * d))
}

/// `⟨(p̂_k + p̂_l + g Σ_j p̂_j)²⟩` for equal squeezing `r`:
/// `[2 + (N-2)g]² e^{-2r}/(4N) + (g-1)²(N-2) e^{2r}/(2N)`.
pub fn momentum_correlation(n: usize, r: f64, gain: f64) -> Result<f64> {
    check(n, 2, r)?;
    let nf = n as f64;
    Ok(
        (2.0 + (nf - 2.0) * gain).powi(2) * (-2.0 * r).exp() / (4.0 * nf)
            + (gain - 1.0).powi(2) * (nf - 2.0) * (2.0 * r).exp() / (2.0 * nf),
    )
}

/// As [`momentum_correlation`] with only mode 1 squeezed (`r_1`).
pub fn momentum_correlation_one_squeezed(n: usize, r1: f64, gain: f64) -> Result<f64> {
    check(n, 2, r1)?;
    let nf = n as f64;
    Ok(
        (2.0 + (nf - 2.0) * gain).powi(2) * (-2.0 * r1).exp() / (4.0 * nf)
            + (gain - 1.0).powi(2) * (nf - 2.0) / (2.0 * nf),
    )
}
