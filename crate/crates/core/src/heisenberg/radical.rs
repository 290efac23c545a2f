//! Exact coefficients of the form `Σ q_m √m` (rational `q_m`, squarefree `m`).
//!
//! Beamsplitter angles of the form `arccos(1/√m)` only ever produce such
//! numbers, so the linear-optics networks can be expanded without rounding.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::Ratio;

pub type Rational = Ratio<i128>;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Radical {
    // radicand -> rational coefficient; no zero coefficients stored
    terms: BTreeMap<u128, Rational>,
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `n = outer² · inner` with `inner` squarefree.
fn split_square(mut n: u128) -> (u128, u128) {
    let mut outer = 1;
    let mut d = 2;
    while d * d <= n {
        while n.is_multiple_of(d * d) {
            n /= d * d;
            outer *= d;
        }
        d += 1;
    }
    (outer, n)
}

impl Radical {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::rational(Rational::from_integer(1))
    }

    pub fn rational(q: Rational) -> Self {
        Self::term(q, 1)
    }

    pub fn integer(n: i64) -> Self {
        Self::rational(Rational::from_integer(n as i128))
    }

    /// `q √m` for squarefree `m`.
    fn term(q: Rational, m: u128) -> Self {
        let mut terms = BTreeMap::new();
        if q != Rational::from_integer(0) {
            terms.insert(m, q);
        }
        Self { terms }
    }

    /// Principal square root of a non-negative rational.
    pub fn sqrt(q: Rational) -> Self {
        assert!(q >= Rational::from_integer(0), "sqrt of negative rational");
        let (num, den) = (*q.numer() as u128, *q.denom() as u128);
        if num == 0 {
            return Self::zero();
        }
        // √(a/b) = √(ab)/b
        let (outer, inner) = split_square(num * den);
        Self::term(Rational::new(outer as i128, den as i128), inner)
    }

    /// `1/√m`
    pub fn inv_sqrt(m: u64) -> Self {
        Self::sqrt(Rational::new(1, m as i128))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn to_f64(&self) -> f64 {
        self.terms
            .iter()
            .map(|(&m, q)| (*q.numer() as f64 / *q.denom() as f64) * (m as f64).sqrt())
            .sum()
    }
}

impl Add for &Radical {
    type Output = Radical;
    fn add(self, rhs: &Radical) -> Radical {
        let mut terms = self.terms.clone();
        for (&m, q) in &rhs.terms {
            let e = terms.entry(m).or_insert(Rational::from_integer(0));
            *e += q;
            if *e == Rational::from_integer(0) {
                terms.remove(&m);
            }
        }
        Radical { terms }
    }
}

impl Neg for &Radical {
    type Output = Radical;
    fn neg(self) -> Radical {
        Radical {
            terms: self.terms.iter().map(|(&m, q)| (m, -q)).collect(),
        }
    }
}

impl Sub for &Radical {
    type Output = Radical;
    fn sub(self, rhs: &Radical) -> Radical {
        self + &(-rhs)
    }
}

impl Mul for &Radical {
    type Output = Radical;
    fn mul(self, rhs: &Radical) -> Radical {
        let mut out = Radical::zero();
        for (&a, qa) in &self.terms {
            for (&b, qb) in &rhs.terms {
                // a, b squarefree: √a √b = g √((a/g)(b/g)) with g = gcd(a, b)
                let g = gcd(a, b);
                let q = qa * qb * Rational::from_integer(g as i128);
                out = &out + &Radical::term(q, (a / g) * (b / g));
            }
        }
        out
    }
}

impl fmt::Display for Radical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, q)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if *m == 1 {
                write!(f, "{q}")?;
            } else {
                write!(f, "{q}·√{m}")?;
            }
        }
        Ok(())
    }
}
