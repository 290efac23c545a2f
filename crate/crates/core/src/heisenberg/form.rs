use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::gaussian::{Quadrature, VACUUM_VARIANCE};

use super::radical::Radical;

/// Tolerance for comparing coefficients that fell back to floating point.
pub const APPROX_TOL: f64 = 1e-12;

/// Coefficient of a vacuum quadrature: exact while only radicals are involved,
/// floating point once an arbitrary real (a gain, a generic angle) enters.
#[derive(Debug, Clone, PartialEq)]
pub enum Coeff {
    Exact(Radical),
    Approx(f64),
}

impl Coeff {
    pub fn one() -> Self {
        Coeff::Exact(Radical::one())
    }

    /// Integer-valued reals stay exact.
    pub fn from_f64(v: f64) -> Self {
        if v.fract() == 0.0 && v.abs() < (1u64 << 52) as f64 {
            Coeff::Exact(Radical::integer(v as i64))
        } else {
            Coeff::Approx(v)
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Coeff::Exact(r) => r.to_f64(),
            Coeff::Approx(v) => *v,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Coeff::Exact(r) => r.is_zero(),
            Coeff::Approx(v) => *v == 0.0,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Coeff::Exact(_))
    }

    pub fn add(&self, other: &Coeff) -> Coeff {
        match (self, other) {
            (Coeff::Exact(a), Coeff::Exact(b)) => Coeff::Exact(a + b),
            _ => Coeff::Approx(self.to_f64() + other.to_f64()),
        }
    }

    pub fn mul(&self, other: &Coeff) -> Coeff {
        match (self, other) {
            (Coeff::Exact(a), Coeff::Exact(b)) => Coeff::Exact(a * b),
            _ => Coeff::Approx(self.to_f64() * other.to_f64()),
        }
    }

    pub fn neg(&self) -> Coeff {
        match self {
            Coeff::Exact(a) => Coeff::Exact(-a),
            Coeff::Approx(v) => Coeff::Approx(-v),
        }
    }

    /// Exact equality when both sides are exact, otherwise within [`APPROX_TOL`].
    pub fn approx_eq(&self, other: &Coeff) -> bool {
        match (self, other) {
            (Coeff::Exact(a), Coeff::Exact(b)) => a == b,
            _ => (self.to_f64() - other.to_f64()).abs() <= APPROX_TOL,
        }
    }
}

impl From<Radical> for Coeff {
    fn from(r: Radical) -> Self {
        Coeff::Exact(r)
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coeff::Exact(r) => write!(f, "{r}"),
            Coeff::Approx(v) => write!(f, "{v}"),
        }
    }
}

/// Origin of a quadrature operator: an initial vacuum mode, or the coherent input
/// `x̂_in = x_in + x̂_in⁽⁰⁾`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Source {
    Vacuum(usize),
    Input,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TermKey {
    pub source: Source,
    pub quadrature: Quadrature,
    /// Multiplies the mode's squeezing parameter: the term carries `e^{exponent·r}`.
    pub exponent: i8,
}

/// Output quadrature as a linear combination of initial vacuum quadratures,
/// each weighted by `e^{±r}` of its own mode, plus a constant.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LinearForm {
    terms: BTreeMap<TermKey, Coeff>,
    constant: f64,
}

impl LinearForm {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(key: TermKey, coeff: Coeff) -> Self {
        let mut f = Self::zero();
        f.insert(key, coeff);
        f
    }

    fn insert(&mut self, key: TermKey, coeff: Coeff) {
        let sum = match self.terms.remove(&key) {
            Some(c) => c.add(&coeff),
            None => coeff,
        };
        if !sum.is_zero() {
            self.terms.insert(key, sum);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TermKey, &Coeff)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn constant(&self) -> f64 {
        self.constant
    }

    pub fn coefficient(&self, key: &TermKey) -> Option<&Coeff> {
        self.terms.get(key)
    }

    /// Coefficient of the given source quadrature, whatever its exponent.
    pub fn coefficient_of(&self, source: Source, quadrature: Quadrature) -> Option<(&Coeff, i8)> {
        self.terms
            .iter()
            .find(|(k, _)| k.source == source && k.quadrature == quadrature)
            .map(|(k, c)| (c, k.exponent))
    }

    pub fn plus(&self, other: &LinearForm) -> LinearForm {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.insert(*k, c.clone());
        }
        out.constant += other.constant;
        out
    }

    pub fn minus(&self, other: &LinearForm) -> LinearForm {
        self.plus(&other.scaled(&Coeff::one().neg()))
    }

    pub fn scaled(&self, factor: &Coeff) -> LinearForm {
        let mut out = LinearForm {
            terms: BTreeMap::new(),
            constant: self.constant * factor.to_f64(),
        };
        for (k, c) in &self.terms {
            out.insert(*k, c.mul(factor));
        }
        out
    }

    fn weight(key: &TermKey, r_values: &[f64]) -> Result<f64> {
        match (key.source, key.exponent) {
            (_, 0) => Ok(1.0),
            (Source::Input, _) => Ok(1.0),
            (Source::Vacuum(m), e) => r_values
                .get(m)
                .map(|r| (e as f64 * r).exp())
                .ok_or(Error::MissingSqueezing(m)),
        }
    }

    /// `Σ c_a c_b e^{(s_a + s_b) r}/4` over shared source quadratures; distinct
    /// initial vacuum quadratures are uncorrelated.
    pub fn covariance_with(&self, other: &LinearForm, r_values: &[f64]) -> Result<f64> {
        let mut acc = 0.0;
        for (k, c) in &self.terms {
            let wk = Self::weight(k, r_values)?;
            for (k2, c2) in other.terms.range(k_lo(k)..=k_hi(k)) {
                let w2 = Self::weight(k2, r_values)?;
                acc += c.to_f64() * wk * c2.to_f64() * w2 * VACUUM_VARIANCE;
            }
        }
        // surface missing assignments that only appear in `other`
        for k in other.terms.keys() {
            Self::weight(k, r_values)?;
        }
        Ok(acc)
    }

    pub fn variance(&self, r_values: &[f64]) -> Result<f64> {
        self.covariance_with(self, r_values)
    }

    /// Mean for the coherent input `α = x_in + i p_in`; vacuum terms have zero mean.
    pub fn mean(&self, x_in: f64, p_in: f64) -> f64 {
        self.terms
            .iter()
            .filter(|(k, _)| k.source == Source::Input)
            .map(|(k, c)| {
                c.to_f64()
                    * match k.quadrature {
                        Quadrature::X => x_in,
                        Quadrature::P => p_in,
                    }
            })
            .sum::<f64>()
            + self.constant
    }
}

fn k_lo(k: &TermKey) -> TermKey {
    TermKey {
        exponent: i8::MIN,
        ..*k
    }
}

fn k_hi(k: &TermKey) -> TermKey {
    TermKey {
        exponent: i8::MAX,
        ..*k
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let q = match k.quadrature {
                Quadrature::X => "x",
                Quadrature::P => "p",
            };
            match k.source {
                Source::Vacuum(m) => write!(f, "({c})·e^({}r{})·{q}{}°", k.exponent, m + 1, m + 1)?,
                Source::Input => write!(f, "({c})·{q}_in")?,
            }
        }
        if first || self.constant != 0.0 {
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "{}", self.constant)?;
        }
        Ok(())
    }
}
