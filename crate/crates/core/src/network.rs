//! N-party entangled resource states built from squeezed vacua and a cascade of
//! beamsplitters, plus the correlation and inseparability diagnostics.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::{
    beamsplitter_block, measure_homodyne, GaussianState, OutcomeSource, Quadrature, SqueezeAxis,
    SymplecticMap,
};
use crate::heisenberg::{Coeff, Radical, Rational};

/// Beamsplitter angle. `InverseSqrt(m)` is `arccos(1/√m)`, the family used by the
/// splitter cascade; its sine and cosine are exact radicals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MixingAngle {
    InverseSqrt(u64),
    Radians(f64),
}

impl MixingAngle {
    pub const BALANCED: MixingAngle = MixingAngle::InverseSqrt(2);

    pub fn radians(self) -> f64 {
        match self {
            MixingAngle::InverseSqrt(m) => (1.0 / (m as f64).sqrt()).acos(),
            MixingAngle::Radians(t) => t,
        }
    }

    pub fn exact_cos_sin(self) -> (Coeff, Coeff) {
        match self {
            MixingAngle::InverseSqrt(m) => {
                assert!(m >= 1, "arccos(1/√0) is undefined");
                (
                    Coeff::Exact(Radical::inv_sqrt(m)),
                    Coeff::Exact(Radical::sqrt(Rational::new(m as i128 - 1, m as i128))),
                )
            }
            MixingAngle::Radians(t) => {
                let (s, c) = t.sin_cos();
                (Coeff::Approx(c), Coeff::Approx(s))
            }
        }
    }
}

/// Beamsplitters of the N-splitter in application order:
/// `B_12(arccos 1/√N)` first, then `B_23(arccos 1/√(N-1))`, ..., `B_{N-1,N}(π/4)`.
/// Modes are zero-based.
pub fn splitter_sequence(n: usize) -> Result<Vec<(usize, usize, MixingAngle)>> {
    if n < 2 {
        return Err(Error::TooFewParties { min: 2, actual: n });
    }
    Ok((0..n - 1)
        .map(|t| (t, t + 1, MixingAngle::InverseSqrt((n - t) as u64)))
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    /// Every input squeezed by the same `r`.
    AllEqual,
    /// Only mode 1 squeezed; the others are vacua.
    OneSqueezed,
    Custom,
}

/// Inputs of the N-splitter: mode 1 momentum-squeezed, modes 2..N position-squeezed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkConfig {
    squeezing: Vec<f64>,
    scenario: Scenario,
}

impl NetworkConfig {
    pub fn all_equal(n: usize, r: f64) -> Result<Self> {
        Self::build(vec![r; n], Scenario::AllEqual)
    }

    pub fn one_squeezed(n: usize, r1: f64) -> Result<Self> {
        let mut squeezing = vec![0.0; n];
        if let Some(first) = squeezing.first_mut() {
            *first = r1;
        }
        Self::build(squeezing, Scenario::OneSqueezed)
    }

    pub fn custom(squeezing: Vec<f64>) -> Result<Self> {
        Self::build(squeezing, Scenario::Custom)
    }

    pub fn with_scenario(scenario: Scenario, n: usize, r: f64) -> Result<Self> {
        match scenario {
            Scenario::AllEqual => Self::all_equal(n, r),
            Scenario::OneSqueezed => Self::one_squeezed(n, r),
            Scenario::Custom => Err(Error::InvalidArgument(
                "custom networks need explicit per-mode squeezing".into(),
            )),
        }
    }

    fn build(squeezing: Vec<f64>, scenario: Scenario) -> Result<Self> {
        if squeezing.len() < 2 {
            return Err(Error::TooFewParties {
                min: 2,
                actual: squeezing.len(),
            });
        }
        if let Some(&bad) = squeezing.iter().find(|r| !(r.is_finite() && **r >= 0.0)) {
            return Err(Error::InvalidSqueezing(bad));
        }
        Ok(Self {
            squeezing,
            scenario,
        })
    }

    pub fn n(&self) -> usize {
        self.squeezing.len()
    }

    pub fn scenario(&self) -> Scenario {
        self.scenario
    }

    pub fn r_values(&self) -> &[f64] {
        &self.squeezing
    }

    /// The scenario's squeezing parameter: `r` for all-equal, `r_1` otherwise.
    pub fn r(&self) -> f64 {
        self.squeezing[0]
    }

    pub fn axis(&self, mode: usize) -> SqueezeAxis {
        if mode == 0 {
            SqueezeAxis::Momentum
        } else {
            SqueezeAxis::Position
        }
    }

    /// Per-mode axes in the form the symbolic oracle takes.
    pub fn axes(&self) -> Vec<Option<SqueezeAxis>> {
        (0..self.n()).map(|m| Some(self.axis(m))).collect()
    }
}

/// `B_23(π/4) B_12(arccos 1/√3)`.
pub fn tritter_map() -> SymplecticMap {
    nsplitter_map(3).expect("three modes")
}

pub fn nsplitter_map(n: usize) -> Result<SymplecticMap> {
    let mut map = SymplecticMap::identity(n)?;
    for (i, j, angle) in splitter_sequence(n)? {
        map.left_apply(&[i, j], &beamsplitter_block(angle.radians())?)?;
    }
    Ok(map)
}

/// Squeezed inputs of `config` sent through the N-splitter.
pub fn build_ghz_state(config: &NetworkConfig) -> Result<GaussianState> {
    let n = config.n();
    let mut state = GaussianState::vacuum(n)?;
    for (m, &r) in config.r_values().iter().enumerate() {
        state = state.squeeze(m, r, config.axis(m))?;
    }
    for (i, j, angle) in splitter_sequence(n)? {
        state = state.beamsplitter(i, j, angle.radians())?;
    }
    Ok(state)
}

fn check_pair(state: &GaussianState, k: usize, l: usize) -> Result<()> {
    state.quadrature_index(k, Quadrature::X)?;
    state.quadrature_index(l, Quadrature::X)?;
    if k == l {
        return Err(Error::SameMode(k));
    }
    Ok(())
}

/// `⟨(x̂_k - x̂_l)²⟩` (central).
pub fn position_difference_variance(state: &GaussianState, k: usize, l: usize) -> Result<f64> {
    check_pair(state, k, l)?;
    let mut w = vec![0.0; 2 * state.n_modes()];
    w[2 * k] = 1.0;
    w[2 * l] = -1.0;
    state.combination_variance(&w)
}

/// `⟨(p̂_k + p̂_l + g Σ_{j≠k,l} p̂_j)²⟩` (central).
pub fn momentum_correlation_variance(
    state: &GaussianState,
    k: usize,
    l: usize,
    gain: f64,
) -> Result<f64> {
    check_pair(state, k, l)?;
    let w: Vec<f64> = (0..2 * state.n_modes())
        .map(|i| match (i / 2, i % 2) {
            (_, 0) => 0.0,
            (m, _) if m == k || m == l => 1.0,
            _ => gain,
        })
        .collect();
    state.combination_variance(&w)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Distilled {
    /// Two-mode state ordered `(k, l)`.
    pub pair: GaussianState,
    /// Momentum outcomes of the assisting modes, ascending mode order.
    pub outcomes: Vec<f64>,
    pub degenerate: bool,
}

/// Projects modes `k`, `l` onto a two-mode state by measuring the momentum of
/// every other mode, then displaces `p_l` by `gain · Σ p_j`.
pub fn distill_pair(
    state: &GaussianState,
    k: usize,
    l: usize,
    gain: f64,
    source: &mut impl OutcomeSource,
) -> Result<Distilled> {
    let n = state.n_modes();
    if n < 3 {
        return Err(Error::TooFewParties { min: 3, actual: n });
    }
    check_pair(state, k, l)?;
    if !gain.is_finite() {
        return Err(Error::NonFinite("gain"));
    }
    // labels[i] = original index of current mode i
    let mut labels: Vec<usize> = (0..n).collect();
    let mut current = state.clone();
    let mut outcomes = Vec::with_capacity(n - 2);
    let mut degenerate = false;
    for j in (0..n).filter(|&j| j != k && j != l) {
        let pos = labels.iter().position(|&m| m == j).expect("label present");
        let h = measure_homodyne(&current, pos, Quadrature::P, source)?;
        labels.remove(pos);
        outcomes.push(h.outcome);
        degenerate |= h.degenerate;
        current = h.conditional;
    }
    let order: Vec<usize> = [k, l]
        .iter()
        .map(|m| labels.iter().position(|x| x == m).expect("label present"))
        .collect();
    let pair = current
        .permute(&order)?
        .displace(1, 0.0, gain * outcomes.iter().sum::<f64>())?;
    Ok(Distilled {
        pair,
        outcomes,
        degenerate,
    })
}

/// `⟨(Δ(x̂_1 - x̂_2))²⟩ + ⟨(Δ(p̂_1 + p̂_2))²⟩`; a value below 1 certifies
/// inseparability of the two modes.
pub fn duan_value(state: &GaussianState) -> Result<f64> {
    if state.n_modes() != 2 {
        return Err(Error::WrongModeCount {
            expected: 2,
            actual: state.n_modes(),
        });
    }
    Ok(state.combination_variance(&[1.0, 0.0, -1.0, 0.0])?
        + state.combination_variance(&[0.0, 1.0, 0.0, 1.0])?)
}
