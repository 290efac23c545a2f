use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

use super::{check_mode, Quadrature, SqueezeAxis};

/// Affine phase-space map `v -> matrix * v + shift` on `n_modes` modes,
/// quadratures ordered `(x_1, p_1, ..., x_n, p_n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticMap {
    n_modes: usize,
    matrix: DMatrix<f64>,
    shift: DVector<f64>,
}

/// Standard symplectic form for the interleaved ordering: one `[[0, 1], [-1, 0]]`
/// block per mode.
pub fn omega(n_modes: usize) -> DMatrix<f64> {
    let mut w = DMatrix::zeros(2 * n_modes, 2 * n_modes);
    for m in 0..n_modes {
        w[(2 * m, 2 * m + 1)] = 1.0;
        w[(2 * m + 1, 2 * m)] = -1.0;
    }
    w
}

impl SymplecticMap {
    pub fn identity(n_modes: usize) -> Result<Self> {
        if n_modes == 0 {
            return Err(Error::NoModes);
        }
        Ok(Self {
            n_modes,
            matrix: DMatrix::identity(2 * n_modes, 2 * n_modes),
            shift: DVector::zeros(2 * n_modes),
        })
    }

    /// Builds a map from raw parts, checking dimensions and the symplectic condition.
    pub fn from_parts(matrix: DMatrix<f64>, shift: DVector<f64>) -> Result<Self> {
        let dim = matrix.nrows();
        if dim == 0 || !dim.is_multiple_of(2) || matrix.ncols() != dim || shift.len() != dim {
            return Err(Error::Dimension(format!(
                "matrix {}x{}, shift {}",
                matrix.nrows(),
                matrix.ncols(),
                shift.len()
            )));
        }
        if matrix.iter().chain(shift.iter()).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("symplectic map"));
        }
        let map = Self {
            n_modes: dim / 2,
            matrix,
            shift,
        };
        let err = map.symplectic_error();
        if err > 1e-10 {
            return Err(Error::InvalidArgument(format!(
                "matrix is not symplectic (deviation {err:e})"
            )));
        }
        Ok(map)
    }

    /// Map acting as `block` on the listed modes and as the identity elsewhere.
    /// `block` is `2k x 2k` in the interleaved ordering of `modes`.
    pub fn embed(n_modes: usize, modes: &[usize], block: &DMatrix<f64>) -> Result<Self> {
        let mut map = Self::identity(n_modes)?;
        map.left_apply(modes, block)?;
        Ok(map)
    }

    /// Phase-free beamsplitter on modes `i`, `j`:
    /// `a_i -> a_i cos θ + a_j sin θ`, `a_j -> a_i sin θ - a_j cos θ`,
    /// applied identically to both quadratures.
    pub fn beamsplitter(n_modes: usize, i: usize, j: usize, theta: f64) -> Result<Self> {
        Self::embed(n_modes, &[i, j], &beamsplitter_block(theta)?)
    }

    /// Single-mode squeezer. Momentum-squeezed scales `x` by `e^{+r}` and `p` by
    /// `e^{-r}`; position-squeezed is the reverse.
    pub fn squeezer(n_modes: usize, mode: usize, r: f64, axis: SqueezeAxis) -> Result<Self> {
        Self::embed(n_modes, &[mode], &squeezer_block(r, axis)?)
    }

    pub fn displacement(n_modes: usize, mode: usize, dx: f64, dp: f64) -> Result<Self> {
        check_mode(mode, n_modes)?;
        if !(dx.is_finite() && dp.is_finite()) {
            return Err(Error::NonFinite("displacement"));
        }
        let mut map = Self::identity(n_modes)?;
        map.shift[2 * mode] = dx;
        map.shift[2 * mode + 1] = dp;
        Ok(map)
    }

    /// Quadrature feed-forward: adds `gain * q_source` to quadrature `q` of `target`,
    /// with the conjugate back-action on `source` that keeps the map symplectic.
    ///
    /// When `source` is afterwards measured in `q` and discarded, the target's
    /// reduced state equals the outcome-averaged state of a classical displacement
    /// by `gain` times the measured value.
    pub fn feed_forward(
        n_modes: usize,
        source: usize,
        target: usize,
        quadrature: Quadrature,
        gain: f64,
    ) -> Result<Self> {
        Self::embed(
            n_modes,
            &[source, target],
            &feed_forward_block(quadrature, gain)?,
        )
    }

    /// Left-multiplies by `block` acting on `modes`: `self` followed by that block.
    pub fn left_apply(&mut self, modes: &[usize], block: &DMatrix<f64>) -> Result<()> {
        let idx = block_indices(modes, self.n_modes, block)?;
        let rows = DMatrix::from_fn(idx.len(), 2 * self.n_modes, |r, c| self.matrix[(idx[r], c)]);
        let rows = block * rows;
        let shift = block * DVector::from_iterator(idx.len(), idx.iter().map(|&i| self.shift[i]));
        for (r, &i) in idx.iter().enumerate() {
            self.matrix.row_mut(i).copy_from(&rows.row(r));
            self.shift[i] = shift[r];
        }
        Ok(())
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn shift(&self) -> &DVector<f64> {
        &self.shift
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &SymplecticMap) -> Result<Self> {
        if self.n_modes != next.n_modes {
            return Err(Error::WrongModeCount {
                expected: self.n_modes,
                actual: next.n_modes,
            });
        }
        Ok(Self {
            n_modes: self.n_modes,
            matrix: &next.matrix * &self.matrix,
            shift: &next.matrix * &self.shift + &next.shift,
        })
    }

    /// Max-norm of `S Ω Sᵀ - Ω`.
    pub fn symplectic_error(&self) -> f64 {
        let w = omega(self.n_modes);
        (&self.matrix * &w * self.matrix.transpose() - w).amax()
    }

    /// Max-norm of `S Sᵀ - I`; zero for passive (linear-optics) maps.
    pub fn orthogonality_error(&self) -> f64 {
        let dim = 2 * self.n_modes;
        (&self.matrix * self.matrix.transpose() - DMatrix::identity(dim, dim)).amax()
    }
}

/// Row/column indices of `modes`, validated against `block`'s size.
pub(crate) fn block_indices(
    modes: &[usize],
    n_modes: usize,
    block: &DMatrix<f64>,
) -> Result<Vec<usize>> {
    let mut idx = Vec::with_capacity(2 * modes.len());
    for (pos, &m) in modes.iter().enumerate() {
        check_mode(m, n_modes)?;
        if modes[..pos].contains(&m) {
            return Err(Error::SameMode(m));
        }
        idx.push(2 * m);
        idx.push(2 * m + 1);
    }
    if block.nrows() != idx.len() || block.ncols() != idx.len() {
        return Err(Error::Dimension(format!(
            "{}x{} block for {} modes",
            block.nrows(),
            block.ncols(),
            modes.len()
        )));
    }
    Ok(idx)
}

/// 4x4 beamsplitter block on `(x_i, p_i, x_j, p_j)`.
pub fn beamsplitter_block(theta: f64) -> Result<DMatrix<f64>> {
    if !theta.is_finite() {
        return Err(Error::NonFinite("beamsplitter angle"));
    }
    let (s, c) = theta.sin_cos();
    Ok(DMatrix::from_row_slice(
        4,
        4,
        &[
            c, 0.0, s, 0.0, //
            0.0, c, 0.0, s, //
            s, 0.0, -c, 0.0, //
            0.0, s, 0.0, -c,
        ],
    ))
}

pub fn squeezer_block(r: f64, axis: SqueezeAxis) -> Result<DMatrix<f64>> {
    if !(r.is_finite() && r >= 0.0) {
        return Err(Error::InvalidSqueezing(r));
    }
    let (sx, sp) = match axis {
        SqueezeAxis::Momentum => (r.exp(), (-r).exp()),
        SqueezeAxis::Position => ((-r).exp(), r.exp()),
    };
    Ok(DMatrix::from_diagonal(&DVector::from_vec(vec![sx, sp])))
}

/// 4x4 feed-forward block on `(x_source, p_source, x_target, p_target)`.
pub fn feed_forward_block(quadrature: Quadrature, gain: f64) -> Result<DMatrix<f64>> {
    if !gain.is_finite() {
        return Err(Error::NonFinite("feed-forward gain"));
    }
    let mut b = DMatrix::identity(4, 4);
    match quadrature {
        // x_t += g x_s, p_s -= g p_t
        Quadrature::X => {
            b[(2, 0)] = gain;
            b[(1, 3)] = -gain;
        }
        // p_t += g p_s, x_s -= g x_t
        Quadrature::P => {
            b[(3, 1)] = gain;
            b[(0, 2)] = -gain;
        }
    }
    Ok(b)
}
