//! Closed-form Heisenberg-picture oracle.
//!
//! Every output quadrature of a linear-optics network fed with squeezed vacua is
//! a [`LinearForm`] over the initial vacuum quadratures, with `e^{±r}` weights
//! kept symbolic in the squeezing parameters. Variances and fidelities then
//! follow without ever forming a covariance matrix, which makes this module an
//! independent check on [`crate::gaussian`].

mod form;
mod radical;

use crate::error::{Error, Result};
use crate::gaussian::{Quadrature, SqueezeAxis, VACUUM_VARIANCE};
use crate::network::{splitter_sequence, MixingAngle};

pub use form::{Coeff, LinearForm, Source, TermKey, APPROX_TOL};
pub use radical::{Radical, Rational};

fn exponents(axis: Option<SqueezeAxis>) -> (i8, i8) {
    match axis {
        Some(SqueezeAxis::Momentum) => (1, -1),
        Some(SqueezeAxis::Position) => (-1, 1),
        None => (0, 0),
    }
}

/// Forms `(x_1, p_1, ..., x_n, p_n)` of squeezed vacua before any mixing.
/// A momentum-squeezed mode `m` has `x_m = e^{+r_m} x_m⁽⁰⁾`, `p_m = e^{-r_m} p_m⁽⁰⁾`.
pub fn initial_forms(axes: &[Option<SqueezeAxis>]) -> Result<Vec<LinearForm>> {
    if axes.is_empty() {
        return Err(Error::NoModes);
    }
    let mut forms = Vec::with_capacity(2 * axes.len());
    for (m, &axis) in axes.iter().enumerate() {
        let (ex, ep) = exponents(axis);
        for (quadrature, exponent) in [(Quadrature::X, ex), (Quadrature::P, ep)] {
            forms.push(LinearForm::single(
                TermKey {
                    source: Source::Vacuum(m),
                    quadrature,
                    exponent,
                },
                Coeff::one(),
            ));
        }
    }
    Ok(forms)
}

/// Beamsplitter on forms: `q_i -> c q_i + s q_j`, `q_j -> s q_i - c q_j` for both
/// quadratures. Coefficients stay exact for `arccos(1/√m)` angles.
pub fn apply_beamsplitter_forms(
    forms: &mut [LinearForm],
    i: usize,
    j: usize,
    angle: MixingAngle,
) -> Result<()> {
    let n_modes = forms.len() / 2;
    for idx in [i, j] {
        if idx >= n_modes {
            return Err(Error::ModeOutOfRange {
                index: idx,
                n_modes,
            });
        }
    }
    if i == j {
        return Err(Error::SameMode(i));
    }
    let (c, s) = angle.exact_cos_sin();
    for q in 0..2 {
        let (a, b) = (&forms[2 * i + q], &forms[2 * j + q]);
        let new_a = a.scaled(&c).plus(&b.scaled(&s));
        let new_b = a.scaled(&s).minus(&b.scaled(&c));
        forms[2 * i + q] = new_a;
        forms[2 * j + q] = new_b;
    }
    Ok(())
}

/// Output forms of the N-splitter cascade applied to the given squeezed vacua.
pub fn nsplitter_forms(axes: &[Option<SqueezeAxis>]) -> Result<Vec<LinearForm>> {
    let n = axes.len();
    if n < 2 {
        return Err(Error::TooFewParties { min: 2, actual: n });
    }
    let mut forms = initial_forms(axes)?;
    for (i, j, angle) in splitter_sequence(n)? {
        apply_beamsplitter_forms(&mut forms, i, j, angle)?;
    }
    Ok(forms)
}

/// `Σ coeff² e^{2 s r}/4` for one form.
pub fn variance_of(form: &LinearForm, r_values: &[f64]) -> Result<f64> {
    form.variance(r_values)
}

/// Teleported quadratures `(x̂_tel, p̂_tel)` for sender `k`, receiver `l`.
///
/// The network is the N-splitter on `axes`; the input couples to mode `k`
/// giving `x̂_u = (x̂_in - x̂_k)/√2`, `p̂_v = (p̂_in + p̂_k)/√2`, and the receiver
/// applies `x̂_l + g√2 x̂_u`, `p̂_l + g√2 p̂_v + Σ_j g_j p̂_j` with one gain per
/// assisting mode (ascending mode order, `k` and `l` skipped).
pub fn teleported_output_forms(
    axes: &[Option<SqueezeAxis>],
    sender: usize,
    receiver: usize,
    g: f64,
    assisting_gains: &[f64],
) -> Result<(LinearForm, LinearForm)> {
    let n = axes.len();
    check_parties(n, sender, receiver)?;
    teleported_forms_from(
        &nsplitter_forms(axes)?,
        sender,
        receiver,
        g,
        assisting_gains,
    )
}

fn check_parties(n: usize, sender: usize, receiver: usize) -> Result<()> {
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

/// As [`teleported_output_forms`], reusing already expanded network forms
/// `(x_1, p_1, ..., x_N, p_N)`.
pub fn teleported_forms_from(
    forms: &[LinearForm],
    sender: usize,
    receiver: usize,
    g: f64,
    assisting_gains: &[f64],
) -> Result<(LinearForm, LinearForm)> {
    let n = forms.len() / 2;
    check_parties(n, sender, receiver)?;
    let assisting: Vec<usize> = (0..n).filter(|&j| j != sender && j != receiver).collect();
    if assisting_gains.len() != assisting.len() {
        return Err(Error::GainCount {
            expected: assisting.len(),
            actual: assisting_gains.len(),
        });
    }
    if !g.is_finite() || assisting_gains.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("gain"));
    }
    let (x_u, p_v) = bell_forms(forms, sender);
    let gain = Coeff::from_f64(g).mul(&Coeff::Exact(Radical::sqrt(Rational::from_integer(2))));
    let x_tel = forms[2 * receiver].plus(&x_u.scaled(&gain));
    let mut p_tel = forms[2 * receiver + 1].plus(&p_v.scaled(&gain));
    for (&j, &gj) in assisting.iter().zip(assisting_gains) {
        p_tel = p_tel.plus(&forms[2 * j + 1].scaled(&Coeff::from_f64(gj)));
    }
    Ok((x_tel, p_tel))
}

/// `x̂_u = (x̂_in - x̂_k)/√2`, `p̂_v = (p̂_in + p̂_k)/√2`.
pub fn bell_forms(forms: &[LinearForm], sender: usize) -> (LinearForm, LinearForm) {
    let input = |quadrature| {
        LinearForm::single(
            TermKey {
                source: Source::Input,
                quadrature,
                exponent: 0,
            },
            Coeff::one(),
        )
    };
    let inv_sqrt2 = Coeff::Exact(Radical::inv_sqrt(2));
    (
        input(Quadrature::X)
            .minus(&forms[2 * sender])
            .scaled(&inv_sqrt2),
        input(Quadrature::P)
            .plus(&forms[2 * sender + 1])
            .scaled(&inv_sqrt2),
    )
}

/// Coherent-state fidelity from the teleported forms: the Q function of the
/// output has variances `σ = var + 1/4` and means set by the input coefficient,
/// so `F = exp(-(x_in - x̄)²/(2σ_x) - (p_in - p̄)²/(2σ_p)) / (2√(σ_x σ_p))`,
/// generalised to a non-zero x–p covariance.
pub fn fidelity_from_forms(
    x_tel: &LinearForm,
    p_tel: &LinearForm,
    x_in: f64,
    p_in: f64,
    r_values: &[f64],
) -> Result<f64> {
    let sx = x_tel.variance(r_values)? + VACUUM_VARIANCE;
    let sp = p_tel.variance(r_values)? + VACUUM_VARIANCE;
    let sxp = x_tel.covariance_with(p_tel, r_values)?;
    let dx = x_in - x_tel.mean(x_in, p_in);
    let dp = p_in - p_tel.mean(x_in, p_in);
    Ok(q_overlap(sx, sp, sxp, dx, dp))
}

/// `exp(-dᵀΣ⁻¹d/2) / (2√det Σ)` for the 2x2 Q-function covariance
/// `Σ = [[sx, sxp], [sxp, sp]]` and displacement error `d = (dx, dp)`.
pub fn q_overlap(sx: f64, sp: f64, sxp: f64, dx: f64, dp: f64) -> f64 {
    let det = sx * sp - sxp * sxp;
    let exponent = if sxp == 0.0 {
        dx * dx / (2.0 * sx) + dp * dp / (2.0 * sp)
    } else {
        (sp * dx * dx - 2.0 * sxp * dx * dp + sx * dp * dp) / (2.0 * det)
    };
    (-exponent).exp() / (2.0 * det.sqrt())
}
