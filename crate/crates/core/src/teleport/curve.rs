use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::network::{NetworkConfig, Scenario};

use super::formulas::{all_equal_fidelity, CLASSICAL_BOUND};
use super::{GainSchedule, TeleportForms};

/// One point of an optimal-fidelity curve. `gain` is the assisting gain used
/// (0 when there are no assisting stations).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveRow {
    pub n: usize,
    pub squeezing_db: f64,
    pub r: f64,
    pub gain: f64,
    pub f_opt: f64,
}

/// Optimal unit-gain fidelity for every `(N, dB)` pair, sorted by `N` then dB.
/// Values come from the symbolic forms with sender 1 and receiver 2; the
/// resource is symmetric, so any ordered pair gives the same curve.
pub fn fidelity_curve(
    ns: &[usize],
    scenario: Scenario,
    db_grid: &[f64],
    exec: Execution,
) -> Result<Vec<CurveRow>> {
    if ns.is_empty() || db_grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    if let Some(bad) = db_grid.iter().find(|d| !(d.is_finite() && **d >= 0.0)) {
        return Err(Error::InvalidArgument(format!("squeezing {bad} dB")));
    }
    let mut ns = ns.to_vec();
    ns.sort_unstable();
    ns.dedup();
    let mut grid = db_grid.to_vec();
    grid.sort_by(f64::total_cmp);
    grid.dedup();

    let forms = exec::map(exec, &ns, |&n| {
        TeleportForms::new(&NetworkConfig::with_scenario(scenario, n, 0.0)?)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let points: Vec<(usize, f64)> = (0..ns.len())
        .flat_map(|i| grid.iter().map(move |&db| (i, db)))
        .collect();
    exec::map(exec, &points, |&(i, db)| {
        let r = crate::db_to_r(db);
        let config = NetworkConfig::with_scenario(scenario, ns[i], r)?;
        let gains = GainSchedule::optimal(&config)?;
        let f_opt = forms[i].fidelity(config.r_values(), 0, 1, &gains, (0.0, 0.0))?;
        Ok(CurveRow {
            n: ns[i],
            squeezing_db: db,
            r,
            gain: gains.gn,
            f_opt,
        })
    })
    .into_iter()
    .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanGrid {
    pub r_max: f64,
    pub step: f64,
}

impl Default for ScanGrid {
    fn default() -> Self {
        Self {
            r_max: 6.0,
            step: 1e-3,
        }
    }
}

impl ScanGrid {
    /// `step, 2·step, ..., r_max`.
    pub fn points(&self) -> Result<Vec<f64>> {
        if !(self.step > 0.0 && self.step.is_finite() && self.r_max.is_finite()) {
            return Err(Error::InvalidArgument(format!("scan grid {self:?}")));
        }
        let count = (self.r_max / self.step + 1e-9).floor() as usize;
        if count < 2 {
            return Err(Error::EmptyGrid);
        }
        Ok((1..=count).map(|i| i as f64 * self.step).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    /// Optimal fidelity above the classical bound for every squeezing.
    AlwaysQuantum,
    /// Drops to or below the classical bound somewhere on the grid.
    DipsClassical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StationaryKind {
    Max,
    Min,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stationary {
    pub kind: StationaryKind,
    pub r: f64,
    pub fidelity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdReport {
    pub n: usize,
    pub classification: Classification,
    pub min_fidelity: f64,
    pub r_at_min: f64,
    /// Local extrema of `F_opt(r)` in increasing `r`.
    pub stationary: Vec<Stationary>,
}

const DERIV_H: f64 = 1e-6;

/// Classifies the equal-squeezing optimal fidelity of each `N` over the grid
/// and locates its interior extrema. Extrema are bracketed by sign changes of
/// a central-difference derivative and refined by bisection.
pub fn threshold_scan(
    ns: &[usize],
    grid: ScanGrid,
    exec: Execution,
) -> Result<Vec<ThresholdReport>> {
    if ns.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let rs = grid.points()?;
    if rs[0] <= DERIV_H {
        return Err(Error::InvalidArgument("scan step must exceed 1e-6".into()));
    }
    exec::map(exec, ns, |&n| scan_one(n, &rs))
        .into_iter()
        .collect()
}

fn scan_one(n: usize, rs: &[f64]) -> Result<ThresholdReport> {
    let f = |r: f64| all_equal_fidelity(n, r);
    let deriv =
        |r: f64| -> Result<f64> { Ok((f(r + DERIV_H)? - f(r - DERIV_H)?) / (2.0 * DERIV_H)) };

    let values = rs.iter().map(|&r| f(r)).collect::<Result<Vec<_>>>()?;
    let slopes = rs.iter().map(|&r| deriv(r)).collect::<Result<Vec<_>>>()?;
    let mut stationary = Vec::new();
    for i in 0..rs.len() - 1 {
        let kind = match (slopes[i], slopes[i + 1]) {
            (a, b) if a > 0.0 && b <= 0.0 => StationaryKind::Max,
            (a, b) if a < 0.0 && b >= 0.0 => StationaryKind::Min,
            _ => continue,
        };
        let (mut lo, mut hi) = (rs[i], rs[i + 1]);
        let lo_sign = slopes[i] > 0.0;
        for _ in 0..100 {
            if hi - lo < 1e-12 {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if (deriv(mid)? > 0.0) == lo_sign {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let r = 0.5 * (lo + hi);
        stationary.push(Stationary {
            kind,
            r,
            fidelity: f(r)?,
        });
    }

    let (mut r_at_min, mut min_fidelity) = (rs[0], values[0]);
    for (&r, &v) in rs.iter().zip(&values) {
        if v < min_fidelity {
            (r_at_min, min_fidelity) = (r, v);
        }
    }
    for s in stationary.iter().filter(|s| s.kind == StationaryKind::Min) {
        if s.fidelity < min_fidelity {
            (r_at_min, min_fidelity) = (s.r, s.fidelity);
        }
    }
    let classification = if min_fidelity > CLASSICAL_BOUND {
        Classification::AlwaysQuantum
    } else {
        Classification::DipsClassical
    };
    Ok(ThresholdReport {
        n,
        classification,
        min_fidelity,
        r_at_min,
        stationary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curve_ordering_and_endpoints() {
        let rows = fidelity_curve(
            &[4, 2, 3],
            Scenario::AllEqual,
            &[3.0, 0.0],
            Execution::Parallel,
        )
        .unwrap();
        let keys: Vec<(usize, f64)> = rows.iter().map(|r| (r.n, r.squeezing_db)).collect();
        assert_eq!(
            keys,
            vec![(2, 0.0), (2, 3.0), (3, 0.0), (3, 3.0), (4, 0.0), (4, 3.0)]
        );
        for row in rows.iter().filter(|r| r.squeezing_db == 0.0) {
            assert!((row.f_opt - 0.5).abs() < 1e-15);
        }
        assert!(rows.iter().all(|r| r.f_opt > 0.5 || r.squeezing_db == 0.0));
        assert_eq!(rows[1].gain, 0.0);
    }

    #[test]
    fn curve_errors() {
        assert_eq!(
            fidelity_curve(&[], Scenario::AllEqual, &[0.0], Execution::Sequential).unwrap_err(),
            Error::EmptyGrid
        );
        assert!(fidelity_curve(&[3], Scenario::AllEqual, &[-1.0], Execution::Sequential).is_err());
        assert!(fidelity_curve(&[3], Scenario::Custom, &[1.0], Execution::Sequential).is_err());
    }

    #[test]
    fn scan_small_and_large_n() {
        let grid = ScanGrid {
            r_max: 3.0,
            step: 1e-2,
        };
        let reports = threshold_scan(&[2, 10, 27, 50], grid, Execution::Sequential).unwrap();
        assert_eq!(reports[0].classification, Classification::AlwaysQuantum);
        assert!(reports[0].stationary.is_empty());
        assert!(reports[1].stationary.is_empty());
        let kinds: Vec<_> = reports[2].stationary.iter().map(|s| s.kind).collect();
        assert_eq!(kinds, vec![StationaryKind::Max, StationaryKind::Min]);
        assert_eq!(reports[3].classification, Classification::DipsClassical);
    }

    #[test]
    fn grid_points() {
        let p = ScanGrid {
            r_max: 6.0,
            step: 1e-3,
        }
        .points()
        .unwrap();
        assert_eq!(p.len(), 6000);
        assert!((p[5999] - 6.0).abs() < 1e-12);
        assert!(ScanGrid {
            r_max: 1.0,
            step: 0.0
        }
        .points()
        .is_err());
    }
}
