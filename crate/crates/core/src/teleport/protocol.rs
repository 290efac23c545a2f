use std::f64::consts::{FRAC_PI_4, SQRT_2};

use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::gaussian::{
    coherent_fidelity, measure_homodyne, GaussianState, OutcomeSource, Quadrature, Sampled,
};
use crate::network::{build_ghz_state, NetworkConfig};
use crate::rng::trial_stream;

use super::{assisting_modes, check_parties, GainSchedule};

/// Classical results sent to the receiver.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ClassicalRecord {
    pub x_u: f64,
    pub p_v: f64,
    /// Momentum results of the assisting stations, ascending mode order.
    pub assisting: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TeleportOutcome {
    pub record: ClassicalRecord,
    pub gains: GainSchedule,
    pub alpha: (f64, f64),
    /// Receiver state averaged over all measurement records: the channel output.
    pub output: GaussianState,
    /// `⟨α|output|α⟩`.
    pub fidelity: f64,
    /// Receiver state for this particular record, after the displacement.
    pub shot_output: GaussianState,
    pub shot_fidelity: f64,
    /// A measured quadrature had (numerically) zero variance.
    pub degenerate: bool,
}

/// Network state with the input coherent state appended as mode `N` and
/// already mixed with the sender's mode: mode `k` then carries
/// `x_u = (x_in - x_k)/√2` and mode `N` carries `p_v = (p_in + p_k)/√2`.
fn bell_stage(config: &NetworkConfig, sender: usize, alpha: (f64, f64)) -> Result<GaussianState> {
    let n = config.n();
    build_ghz_state(config)?
        .tensor(&GaussianState::coherent(alpha.0, alpha.1)?)
        .beamsplitter(n, sender, FRAC_PI_4)
}

/// Runs the protocol once.
///
/// The averaged output is obtained by replacing every measurement plus
/// classical displacement with the equivalent quadrature feed-forward gate and
/// tracing out everything but the receiver; the shot output conditions on the
/// outcomes drawn from `source` (`x_u`, `p_v`, then the assisting momenta).
pub fn run_protocol(
    config: &NetworkConfig,
    sender: usize,
    receiver: usize,
    alpha: (f64, f64),
    gains: &GainSchedule,
    source: &mut impl OutcomeSource,
) -> Result<TeleportOutcome> {
    let n = config.n();
    check_parties(n, sender, receiver)?;
    if !(alpha.0.is_finite() && alpha.1.is_finite()) {
        return Err(Error::NonFinite("coherent amplitude"));
    }
    let assisting = assisting_modes(n, sender, receiver);
    let g_assist = gains.assisting_gains(assisting.len())?;
    let bell_gain = gains.g * SQRT_2;
    let mixed = bell_stage(config, sender, alpha)?;

    let mut ensemble = mixed
        .feed_forward(sender, receiver, Quadrature::X, bell_gain)?
        .feed_forward(n, receiver, Quadrature::P, bell_gain)?;
    for (&j, &gj) in assisting.iter().zip(&g_assist) {
        ensemble = ensemble.feed_forward(j, receiver, Quadrature::P, gj)?;
    }
    let output = ensemble.reduce(&[receiver])?;
    let fidelity = coherent_fidelity(&output, alpha.0, alpha.1)?;

    // labels[i] = original mode of current mode i
    let mut labels: Vec<usize> = (0..=n).collect();
    let mut current = mixed;
    let mut degenerate = false;
    let mut measure = |mode: usize, quadrature, current: &mut GaussianState| -> Result<f64> {
        let pos = labels
            .iter()
            .position(|&m| m == mode)
            .expect("mode present");
        let h = measure_homodyne(current, pos, quadrature, source)?;
        labels.remove(pos);
        degenerate |= h.degenerate;
        *current = h.conditional;
        Ok(h.outcome)
    };
    let x_u = measure(sender, Quadrature::X, &mut current)?;
    let p_v = measure(n, Quadrature::P, &mut current)?;
    let record_assisting = assisting
        .iter()
        .map(|&j| measure(j, Quadrature::P, &mut current))
        .collect::<Result<Vec<f64>>>()?;
    let dp = bell_gain * p_v
        + g_assist
            .iter()
            .zip(&record_assisting)
            .map(|(g, p)| g * p)
            .sum::<f64>();
    let shot_output = current.displace(0, bell_gain * x_u, dp)?;
    let shot_fidelity = coherent_fidelity(&shot_output, alpha.0, alpha.1)?;

    Ok(TeleportOutcome {
        record: ClassicalRecord {
            x_u,
            p_v,
            assisting: record_assisting,
        },
        gains: gains.clone(),
        alpha,
        output,
        fidelity,
        shot_output,
        shot_fidelity,
        degenerate,
    })
}

/// `trials` independent protocol runs with outcomes sampled from per-trial
/// streams of `seed`; the result does not depend on `exec`.
#[allow(clippy::too_many_arguments)]
pub fn run_trials(
    config: &NetworkConfig,
    sender: usize,
    receiver: usize,
    alpha: (f64, f64),
    gains: &GainSchedule,
    seed: u64,
    trials: u64,
    exec: Execution,
) -> Result<Vec<TeleportOutcome>> {
    let ids: Vec<u64> = (0..trials).collect();
    exec::map(exec, &ids, |&t| {
        let mut source = Sampled(trial_stream(seed, t));
        run_protocol(config, sender, receiver, alpha, gains, &mut source)
    })
    .into_iter()
    .collect()
}
