use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};

use super::{GaussianState, Quadrature};

/// Measured-quadrature variances below this are treated as zero and the
/// conditioning update falls back to the pseudo-inverse.
pub const DEGENERACY_EPS: f64 = 1e-14;

/// Supplies homodyne outcomes, either sampled or scripted.
pub trait OutcomeSource {
    /// Returns the next outcome for a quadrature with the given marginal
    /// mean and variance.
    fn outcome(&mut self, mean: f64, variance: f64) -> Result<f64>;
}

/// Draws outcomes from the Gaussian marginal using the wrapped generator.
#[derive(Debug)]
pub struct Sampled<R>(pub R);

impl<R: Rng> OutcomeSource for Sampled<R> {
    fn outcome(&mut self, mean: f64, variance: f64) -> Result<f64> {
        let z: f64 = StandardNormal.sample(&mut self.0);
        Ok(mean + variance.max(0.0).sqrt() * z)
    }
}

/// Replays a fixed list of outcomes in order.
#[derive(Debug, Clone)]
pub struct Forced {
    values: Vec<f64>,
    next: usize,
}

impl Forced {
    pub fn new(values: impl Into<Vec<f64>>) -> Self {
        Self {
            values: values.into(),
            next: 0,
        }
    }
}

impl OutcomeSource for Forced {
    fn outcome(&mut self, _mean: f64, _variance: f64) -> Result<f64> {
        let v = *self
            .values
            .get(self.next)
            .ok_or(Error::OutcomesExhausted(self.next))?;
        if !v.is_finite() {
            return Err(Error::NonFinite("forced outcome"));
        }
        self.next += 1;
        Ok(v)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Homodyne {
    pub outcome: f64,
    /// State of the unmeasured modes, original relative order kept.
    pub conditional: GaussianState,
    /// Set when the measured variance was below [`DEGENERACY_EPS`].
    pub degenerate: bool,
}

/// Ideal homodyne detection of one quadrature of `mode`.
///
/// The outcome comes from `source`; the remaining modes are updated by Gaussian
/// conditioning (Schur complement) on that quadrature and the measured mode is
/// removed. The conditional covariance does not depend on the outcome.
pub fn measure_homodyne(
    state: &GaussianState,
    mode: usize,
    quadrature: Quadrature,
    source: &mut impl OutcomeSource,
) -> Result<Homodyne> {
    let n = state.n_modes();
    let q = state.quadrature_index(mode, quadrature)?;
    if n == 1 {
        return Err(Error::InvalidArgument(
            "cannot measure the only mode of a state".into(),
        ));
    }
    let mean = state.mean();
    let cov = state.cov();
    let var = cov[(q, q)];
    let outcome = source.outcome(mean[q], var)?;

    let keep: Vec<usize> = (0..2 * n).filter(|i| i / 2 != mode).collect();
    let dim = keep.len();
    let cross = DVector::from_iterator(dim, keep.iter().map(|&i| cov[(i, q)]));
    let degenerate = var < DEGENERACY_EPS;
    let inv = if degenerate { 0.0 } else { 1.0 / var };

    let mut cond_mean = DVector::from_iterator(dim, keep.iter().map(|&i| mean[i]));
    cond_mean.axpy(inv * (outcome - mean[q]), &cross, 1.0);
    let mut cond_cov = DMatrix::from_fn(dim, dim, |r, c| cov[(keep[r], keep[c])]);
    cond_cov -= &cross * cross.transpose() * inv;
    cond_cov = (&cond_cov + cond_cov.transpose()) * 0.5;

    Ok(Homodyne {
        outcome,
        conditional: GaussianState::from_parts(cond_mean, cond_cov)?,
        degenerate,
    })
}
