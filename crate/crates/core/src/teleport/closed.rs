use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::gaussian::VACUUM_VARIANCE;
use crate::heisenberg::{
    bell_forms, fidelity_from_forms, nsplitter_forms, q_overlap, teleported_forms_from, Coeff,
    LinearForm, Radical, Rational,
};
use crate::network::{NetworkConfig, Scenario};

use super::{assisting_modes, check_parties, formulas, GainSchedule};

/// Closed-form optimal assisting gain `g^{(N)}` at unit Bell gain.
pub fn optimal_gain(n: usize, scenario: Scenario, r: f64) -> Result<f64> {
    if n < 3 {
        return Err(Error::GainNotApplicable(format!(
            "{n} parties (no assisting stations)"
        )));
    }
    match scenario {
        Scenario::AllEqual => formulas::all_equal_gain(n, r),
        Scenario::OneSqueezed => formulas::one_squeezed_gain(n, r),
        Scenario::Custom => Err(Error::GainNotApplicable("custom squeezing".into())),
    }
}

/// Symbolic expansion of the N-splitter outputs, reusable across squeezing
/// values and gains.
#[derive(Debug, Clone)]
pub struct TeleportForms {
    forms: Vec<LinearForm>,
}

impl TeleportForms {
    pub fn new(config: &NetworkConfig) -> Result<Self> {
        Ok(Self {
            forms: nsplitter_forms(&config.axes())?,
        })
    }

    pub fn n(&self) -> usize {
        self.forms.len() / 2
    }

    pub fn forms(&self) -> &[LinearForm] {
        &self.forms
    }

    pub fn output(
        &self,
        sender: usize,
        receiver: usize,
        gains: &GainSchedule,
    ) -> Result<(LinearForm, LinearForm)> {
        check_parties(self.n(), sender, receiver)?;
        let assisting = gains.assisting_gains(self.n() - 2)?;
        teleported_forms_from(&self.forms, sender, receiver, gains.g, &assisting)
    }

    pub fn fidelity(
        &self,
        r_values: &[f64],
        sender: usize,
        receiver: usize,
        gains: &GainSchedule,
        alpha: (f64, f64),
    ) -> Result<f64> {
        let (x, p) = self.output(sender, receiver, gains)?;
        fidelity_from_forms(&x, &p, alpha.0, alpha.1, r_values)
    }

    /// Fidelity as an explicit quadratic function of the assisting gains.
    pub fn landscape(
        &self,
        r_values: &[f64],
        sender: usize,
        receiver: usize,
        g: f64,
        alpha: (f64, f64),
    ) -> Result<GainLandscape> {
        check_parties(self.n(), sender, receiver)?;
        if !g.is_finite() {
            return Err(Error::NonFinite("gain"));
        }
        let (x_in, p_in) = alpha;
        let (x_u, p_v) = bell_forms(&self.forms, sender);
        let gain = Coeff::from_f64(g).mul(&Coeff::Exact(Radical::sqrt(Rational::from_integer(2))));
        let ax = self.forms[2 * receiver].plus(&x_u.scaled(&gain));
        let ap = self.forms[2 * receiver + 1].plus(&p_v.scaled(&gain));
        let b: Vec<&LinearForm> = assisting_modes(self.n(), sender, receiver)
            .into_iter()
            .map(|j| &self.forms[2 * j + 1])
            .collect();
        let k = b.len();
        let mut m = DMatrix::zeros(k, k);
        for i in 0..k {
            for j in i..k {
                let v = b[i].covariance_with(b[j], r_values)?;
                m[(i, j)] = v;
                m[(j, i)] = v;
            }
        }
        let collect = |f: &dyn Fn(&LinearForm) -> Result<f64>| -> Result<DVector<f64>> {
            Ok(DVector::from_vec(
                b.iter().map(|bj| f(bj)).collect::<Result<Vec<_>>>()?,
            ))
        };
        Ok(GainLandscape {
            sx: ax.variance(r_values)? + VACUUM_VARIANCE,
            dx: x_in - ax.mean(x_in, p_in),
            a: ap.variance(r_values)? + VACUUM_VARIANCE,
            dp0: p_in - ap.mean(x_in, p_in),
            e: ax.covariance_with(&ap, r_values)?,
            c: collect(&|bj| ap.covariance_with(bj, r_values))?,
            d: collect(&|bj| ax.covariance_with(bj, r_values))?,
            mb: collect(&|bj| Ok(bj.mean(x_in, p_in)))?,
            m,
        })
    }
}

/// `F(g_1, ..., g_{N-2})` at a fixed Bell gain, input and squeezing. The
/// Q-function moments are quadratic (variance) and linear (mean, x-p
/// covariance) in the assisting gains; all coefficients come from the
/// symbolic forms.
#[derive(Debug, Clone)]
pub struct GainLandscape {
    sx: f64,
    dx: f64,
    a: f64,
    dp0: f64,
    e: f64,
    c: DVector<f64>,
    d: DVector<f64>,
    mb: DVector<f64>,
    m: DMatrix<f64>,
}

impl GainLandscape {
    pub fn dimension(&self) -> usize {
        self.c.len()
    }

    pub fn fidelity(&self, gains: &[f64]) -> f64 {
        assert_eq!(gains.len(), self.dimension(), "gain vector length");
        let g = DVector::from_column_slice(gains);
        let sp = self.a + 2.0 * self.c.dot(&g) + g.dot(&(&self.m * &g));
        let sxp = self.e + self.d.dot(&g);
        let dp = self.dp0 - self.mb.dot(&g);
        q_overlap(self.sx, sp, sxp, self.dx, dp)
    }

    pub fn symmetric_fidelity(&self, gn: f64) -> f64 {
        self.fidelity(&vec![gn; self.dimension()])
    }
}

/// Fidelity of the averaged teleported state, from the symbolic forms.
pub fn closed_form_fidelity(
    config: &NetworkConfig,
    sender: usize,
    receiver: usize,
    gains: &GainSchedule,
    alpha: (f64, f64),
) -> Result<f64> {
    TeleportForms::new(config)?.fidelity(config.r_values(), sender, receiver, gains, alpha)
}
