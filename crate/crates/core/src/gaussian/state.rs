use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::symplectic::{
    beamsplitter_block, block_indices, feed_forward_block, omega, squeezer_block, SymplecticMap,
};
use super::{check_mode, Quadrature, SqueezeAxis, VACUUM_VARIANCE};

const SYMMETRY_TOL: f64 = 1e-12;
const UNCERTAINTY_TOL: f64 = 1e-10;

/// First and second moments of an `n`-mode Gaussian state.
///
/// Quadratures are interleaved `(x_1, p_1, ..., x_n, p_n)` in units where the
/// vacuum variance of each quadrature is 1/4.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    mean: DVector<f64>,
    cov: DMatrix<f64>,
}

impl GaussianState {
    pub fn vacuum(n_modes: usize) -> Result<Self> {
        if n_modes == 0 {
            return Err(Error::NoModes);
        }
        let dim = 2 * n_modes;
        Ok(Self {
            mean: DVector::zeros(dim),
            cov: DMatrix::from_diagonal_element(dim, dim, VACUUM_VARIANCE),
        })
    }

    /// Single-mode coherent state `|α⟩` with `α = x + i p`.
    pub fn coherent(x: f64, p: f64) -> Result<Self> {
        Self::vacuum(1)?.displace(0, x, p)
    }

    /// Checks shape, finiteness and symmetry. Physicality is checked separately by
    /// [`GaussianState::check_physical`] since it needs an eigendecomposition.
    pub fn from_parts(mean: DVector<f64>, cov: DMatrix<f64>) -> Result<Self> {
        let dim = mean.len();
        if dim == 0 {
            return Err(Error::NoModes);
        }
        if !dim.is_multiple_of(2) || cov.nrows() != dim || cov.ncols() != dim {
            return Err(Error::Dimension(format!(
                "mean {dim}, cov {}x{}",
                cov.nrows(),
                cov.ncols()
            )));
        }
        if mean.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("mean"));
        }
        if cov.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("covariance"));
        }
        let asym = (&cov - cov.transpose()).amax();
        if asym > SYMMETRY_TOL * cov.amax().max(1.0) {
            return Err(Error::Asymmetric(asym));
        }
        Ok(Self { mean, cov })
    }

    pub fn n_modes(&self) -> usize {
        self.mean.len() / 2
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn cov(&self) -> &DMatrix<f64> {
        &self.cov
    }

    pub fn quadrature_index(&self, mode: usize, quadrature: Quadrature) -> Result<usize> {
        check_mode(mode, self.n_modes())?;
        Ok(2 * mode + quadrature.offset())
    }

    pub fn variance(&self, mode: usize, quadrature: Quadrature) -> Result<f64> {
        let i = self.quadrature_index(mode, quadrature)?;
        Ok(self.cov[(i, i)])
    }

    /// Variance of the linear combination `Σ w_i v_i` of all quadratures.
    pub fn combination_variance(&self, weights: &[f64]) -> Result<f64> {
        if weights.len() != self.mean.len() {
            return Err(Error::Dimension(format!(
                "{} weights for {} quadratures",
                weights.len(),
                self.mean.len()
            )));
        }
        let w = DVector::from_column_slice(weights);
        Ok(w.dot(&(&self.cov * &w)))
    }

    /// Applies a map on all modes: `mean -> S mean + d`, `cov -> S cov Sᵀ`.
    pub fn transform(&self, map: &SymplecticMap) -> Result<Self> {
        if map.n_modes() != self.n_modes() {
            return Err(Error::WrongModeCount {
                expected: self.n_modes(),
                actual: map.n_modes(),
            });
        }
        let s = map.matrix();
        let mut cov = s * &self.cov * s.transpose();
        // round-off asymmetry would otherwise accumulate along long pipelines
        cov = (&cov + cov.transpose()) * 0.5;
        Ok(Self {
            mean: s * &self.mean + map.shift(),
            cov,
        })
    }

    /// Applies a symplectic `block` to the listed modes only; `O(n)` per mode
    /// touched instead of a full `2n x 2n` conjugation.
    pub fn apply_block(&self, modes: &[usize], block: &DMatrix<f64>) -> Result<Self> {
        let idx = block_indices(modes, self.n_modes(), block)?;
        let dim = self.mean.len();
        let mut cov = self.cov.clone();
        let rows = block * DMatrix::from_fn(idx.len(), dim, |r, c| cov[(idx[r], c)]);
        for (r, &i) in idx.iter().enumerate() {
            cov.row_mut(i).copy_from(&rows.row(r));
        }
        let cols = DMatrix::from_fn(dim, idx.len(), |r, c| cov[(r, idx[c])]) * block.transpose();
        for (c, &i) in idx.iter().enumerate() {
            cov.column_mut(i).copy_from(&cols.column(c));
        }
        // keep exact symmetry on the touched rows/columns
        for &i in &idx {
            for j in 0..dim {
                let v = 0.5 * (cov[(i, j)] + cov[(j, i)]);
                cov[(i, j)] = v;
                cov[(j, i)] = v;
            }
        }
        let mut mean = self.mean.clone();
        let sub = block * DVector::from_iterator(idx.len(), idx.iter().map(|&i| mean[i]));
        for (r, &i) in idx.iter().enumerate() {
            mean[i] = sub[r];
        }
        Ok(Self { mean, cov })
    }

    pub fn squeeze(&self, mode: usize, r: f64, axis: SqueezeAxis) -> Result<Self> {
        self.apply_block(&[mode], &squeezer_block(r, axis)?)
    }

    pub fn beamsplitter(&self, i: usize, j: usize, theta: f64) -> Result<Self> {
        self.apply_block(&[i, j], &beamsplitter_block(theta)?)
    }

    /// See [`SymplecticMap::feed_forward`].
    pub fn feed_forward(
        &self,
        source: usize,
        target: usize,
        quadrature: Quadrature,
        gain: f64,
    ) -> Result<Self> {
        self.apply_block(&[source, target], &feed_forward_block(quadrature, gain)?)
    }

    pub fn displace(&self, mode: usize, dx: f64, dp: f64) -> Result<Self> {
        check_mode(mode, self.n_modes())?;
        if !(dx.is_finite() && dp.is_finite()) {
            return Err(Error::NonFinite("displacement"));
        }
        let mut out = self.clone();
        out.mean[2 * mode] += dx;
        out.mean[2 * mode + 1] += dp;
        Ok(out)
    }

    /// Product state `self ⊗ other`, with `other`'s modes appended.
    pub fn tensor(&self, other: &GaussianState) -> Self {
        let (a, b) = (self.mean.len(), other.mean.len());
        let mut mean = DVector::zeros(a + b);
        mean.rows_mut(0, a).copy_from(&self.mean);
        mean.rows_mut(a, b).copy_from(&other.mean);
        let mut cov = DMatrix::zeros(a + b, a + b);
        cov.view_mut((0, 0), (a, a)).copy_from(&self.cov);
        cov.view_mut((a, a), (b, b)).copy_from(&other.cov);
        Self { mean, cov }
    }

    /// Marginal state of the listed modes, in the listed order.
    pub fn reduce(&self, modes: &[usize]) -> Result<Self> {
        if modes.is_empty() {
            return Err(Error::NoModes);
        }
        let mut idx = Vec::with_capacity(2 * modes.len());
        for &m in modes {
            check_mode(m, self.n_modes())?;
            idx.push(2 * m);
            idx.push(2 * m + 1);
        }
        let mean = DVector::from_iterator(idx.len(), idx.iter().map(|&i| self.mean[i]));
        let cov = DMatrix::from_fn(idx.len(), idx.len(), |r, c| self.cov[(idx[r], idx[c])]);
        Ok(Self { mean, cov })
    }

    /// Relabels modes: mode `m` of the result is mode `order[m]` of `self`.
    pub fn permute(&self, order: &[usize]) -> Result<Self> {
        if order.len() != self.n_modes() {
            return Err(Error::WrongModeCount {
                expected: self.n_modes(),
                actual: order.len(),
            });
        }
        let mut seen = vec![false; order.len()];
        for &m in order {
            check_mode(m, self.n_modes())?;
            if std::mem::replace(&mut seen[m], true) {
                return Err(Error::InvalidArgument(format!("mode {m} repeated")));
            }
        }
        self.reduce(order)
    }

    /// `det(cov) * 4^{2n}`; equals 1 for pure states.
    pub fn purity_determinant(&self) -> f64 {
        let n = self.n_modes() as i32;
        self.cov.determinant() * 4f64.powi(2 * n)
    }

    /// Symplectic eigenvalues in ascending order (`n` values, each ≥ 1/4 for a
    /// physical state).
    pub fn symplectic_eigenvalues(&self) -> Vec<f64> {
        let eig = SymmetricEigen::new(self.cov.clone());
        let sqrt_vals = eig.eigenvalues.map(|v| v.max(0.0).sqrt());
        let root =
            &eig.eigenvectors * DMatrix::from_diagonal(&sqrt_vals) * eig.eigenvectors.transpose();
        let a = &root * omega(self.n_modes()) * &root;
        // eigenvalues of AᵀA are ν_k² with multiplicity two
        let mut sq: Vec<f64> = SymmetricEigen::new(a.transpose() * &a)
            .eigenvalues
            .iter()
            .map(|v| v.max(0.0).sqrt())
            .collect();
        sq.sort_by(f64::total_cmp);
        sq.chunks(2).map(|pair| 0.5 * (pair[0] + pair[1])).collect()
    }

    /// Symmetry plus the uncertainty principle (smallest symplectic eigenvalue
    /// ≥ 1/4 − 1e-10, scaled by the covariance magnitude for strongly squeezed states).
    pub fn check_physical(&self) -> Result<()> {
        let scale = self.cov.amax().max(1.0);
        let asym = (&self.cov - self.cov.transpose()).amax();
        if asym > SYMMETRY_TOL * scale {
            return Err(Error::Asymmetric(asym));
        }
        let nu_min = self
            .symplectic_eigenvalues()
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        if nu_min < VACUUM_VARIANCE - UNCERTAINTY_TOL * scale {
            return Err(Error::Unphysical(nu_min));
        }
        Ok(())
    }
}

/// Serializable snapshot used by the CLI.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateRecord {
    pub n_modes: usize,
    pub mean: Vec<f64>,
    pub cov: Vec<Vec<f64>>,
}

impl From<&GaussianState> for StateRecord {
    fn from(s: &GaussianState) -> Self {
        Self {
            n_modes: s.n_modes(),
            mean: s.mean.iter().copied().collect(),
            cov: s
                .cov
                .row_iter()
                .map(|row| row.iter().copied().collect())
                .collect(),
        }
    }
}

impl TryFrom<&StateRecord> for GaussianState {
    type Error = Error;

    fn try_from(rec: &StateRecord) -> Result<Self> {
        let dim = rec.mean.len();
        if rec.n_modes * 2 != dim || rec.cov.len() != dim || rec.cov.iter().any(|r| r.len() != dim)
        {
            return Err(Error::Dimension("state record".into()));
        }
        let cov = DMatrix::from_fn(dim, dim, |r, c| rec.cov[r][c]);
        GaussianState::from_parts(DVector::from_vec(rec.mean.clone()), cov)
    }
}
