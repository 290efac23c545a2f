use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::network::NetworkConfig;

use super::{GainSchedule, TeleportForms};

/// Search interval for assisting gains.
pub const GAIN_BRACKET: (f64, f64) = (0.0, 1.5);
pub const BRACKET_TOL: f64 = 1e-10;
pub const MAX_SWEEPS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GainSearch {
    /// One common assisting gain.
    Single,
    /// One gain per assisting station, by coordinate ascent from the best
    /// common gain.
    PerStation,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizedGains {
    pub gains: GainSchedule,
    pub fidelity: f64,
    /// False when the sweep cap was hit or the optimum sits on the upper end
    /// of the search interval.
    pub converged: bool,
    pub evaluations: usize,
}

/// Golden-section search for the maximum of a unimodal `f` on `[lo, hi]`,
/// stopping once the bracket is narrower than `tol`. Returns `(x, f(x), evaluations)`.
pub fn golden_section_max(
    mut f: impl FnMut(f64) -> f64,
    lo: f64,
    hi: f64,
    tol: f64,
) -> (f64, f64, usize) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    let mut evals = 2;
    while b - a > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
        evals += 1;
    }
    // the endpoints are candidates too when the optimum is on the boundary
    let mut best = if fc >= fd { (c, fc) } else { (d, fd) };
    for x in [lo, hi] {
        let fx = f(x);
        evals += 1;
        if fx > best.1 {
            best = (x, fx);
        }
    }
    (best.0, best.1, evals)
}

/// Maximises the averaged-output fidelity over the assisting gains at unit Bell
/// gain (`α = 0`; the fidelity does not depend on it at `g = 1`).
pub fn optimize_gains_numeric(
    config: &NetworkConfig,
    sender: usize,
    receiver: usize,
    search: GainSearch,
) -> Result<OptimizedGains> {
    let n = config.n();
    if n < 3 {
        return Err(Error::TooFewParties { min: 3, actual: n });
    }
    let landscape = TeleportForms::new(config)?.landscape(
        config.r_values(),
        sender,
        receiver,
        1.0,
        (0.0, 0.0),
    )?;
    let (lo, hi) = GAIN_BRACKET;
    let (gn, f_sym, mut evaluations) =
        golden_section_max(|g| landscape.symmetric_fidelity(g), lo, hi, BRACKET_TOL);
    let at_edge = |g: f64| hi - g < BRACKET_TOL;
    match search {
        GainSearch::Single => Ok(OptimizedGains {
            gains: GainSchedule::new(1.0, gn),
            fidelity: f_sym,
            converged: !at_edge(gn),
            evaluations,
        }),
        GainSearch::PerStation => {
            let mut gains = vec![gn; n - 2];
            let mut best = f_sym;
            let mut converged = false;
            for _ in 0..MAX_SWEEPS {
                let mut step = 0.0f64;
                for i in 0..gains.len() {
                    let mut trial = gains.clone();
                    let (gi, fi, ev) = golden_section_max(
                        |g| {
                            trial[i] = g;
                            landscape.fidelity(&trial)
                        },
                        lo,
                        hi,
                        BRACKET_TOL,
                    );
                    evaluations += ev;
                    if fi > best {
                        step = step.max((gi - gains[i]).abs());
                        gains[i] = gi;
                        best = fi;
                    }
                }
                if step < 1e-9 {
                    converged = true;
                    break;
                }
            }
            converged &= !gains.iter().any(|&g| at_edge(g));
            Ok(OptimizedGains {
                gains: GainSchedule::per_station(1.0, gains),
                fidelity: best,
                converged,
                evaluations,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::Scenario;
    use crate::teleport::optimal_gain;

    #[test]
    fn golden_section_on_a_parabola() {
        let (x, fx, _) = golden_section_max(|x| -(x - 0.3).powi(2), 0.0, 1.5, 1e-10);
        assert!((x - 0.3).abs() < 1e-8);
        assert!(fx <= 0.0);
        let (x, _, _) = golden_section_max(|x| -x, 0.0, 1.0, 1e-10);
        assert_eq!(x, 0.0);
    }

    #[test]
    fn single_gain_recovers_closed_form() {
        for (n, r) in [(3, 0.5), (5, 1.0), (12, 0.3)] {
            let c = NetworkConfig::all_equal(n, r).unwrap();
            let o = optimize_gains_numeric(&c, 0, 1, GainSearch::Single).unwrap();
            let g = optimal_gain(n, Scenario::AllEqual, r).unwrap();
            assert!(
                (o.gains.gn - g).abs() < 1e-6,
                "n={n} r={r}: {} vs {g}",
                o.gains.gn
            );
            assert!(o.converged);
        }
        let c = NetworkConfig::all_equal(4, 0.0).unwrap();
        let o = optimize_gains_numeric(&c, 0, 1, GainSearch::Single).unwrap();
        assert!(o.gains.gn.abs() < 1e-9);
        assert!((o.fidelity - 0.5).abs() < 1e-15);
    }

    #[test]
    fn per_station_gains_stay_symmetric() {
        let c = NetworkConfig::one_squeezed(6, 1.0).unwrap();
        let sym = optimize_gains_numeric(&c, 0, 1, GainSearch::Single).unwrap();
        let o = optimize_gains_numeric(&c, 0, 1, GainSearch::PerStation).unwrap();
        let gains = o.gains.per_station.as_ref().unwrap();
        assert_eq!(gains.len(), 4);
        for g in gains {
            assert!((g - gains[0]).abs() < 1e-4);
        }
        assert!(o.fidelity - sym.fidelity <= 1e-8);
        assert!(o.converged);
    }

    #[test]
    fn needs_assisting_stations() {
        let c = NetworkConfig::all_equal(2, 1.0).unwrap();
        assert!(optimize_gains_numeric(&c, 0, 1, GainSearch::Single).is_err());
    }
}
