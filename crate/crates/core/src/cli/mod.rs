//! Command-line front end. `run` is the whole program minus process exit, so
//! integration tests can drive it in-process.

mod args;
mod format;

use std::io::Write;

use clap::Parser;
use serde_json::{json, Value};

use crate::exec::Execution;
use crate::gaussian::{Forced, GaussianState};
use crate::network::{
    build_ghz_state, distill_pair, duan_value, momentum_correlation_variance,
    position_difference_variance, NetworkConfig, Scenario,
};
use crate::teleport::{
    closed_form_fidelity, fidelity_curve, optimal_gain, run_trials, threshold_scan, GainSchedule,
    ScanGrid, StationaryKind,
};

pub use args::{Cli, Command, Format};
pub use format::{format_sig12, CSV_HEADER};

use args::{CurveArgs, Output, ScanArgs, Squeezing, StateArgs, TeleportArgs};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DEGENERATE: i32 = 3;
const EXIT_IO: i32 = 1;

const SCHEMA: &str = "1";

enum Failure {
    Usage(String),
    Io(std::io::Error),
}

impl From<crate::Error> for Failure {
    fn from(e: crate::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

/// Parses `argv` and runs the command; returns the process exit code.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(stderr, "{text}")
            } else {
                write!(stdout, "{text}")
            };
            return e.exit_code();
        }
    };
    let exec = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::available_default()
    };
    let result = match &cli.command {
        Command::State(a) => cmd_state(a),
        Command::Curve(a) => cmd_curve(a, exec),
        Command::Teleport(a) => cmd_teleport(a, exec, stderr),
        Command::Scan(a) => cmd_scan(a, exec),
    }
    .and_then(|(text, degenerate)| {
        emit(output_of(&cli.command), &text, stdout)?;
        Ok(degenerate)
    });
    match result {
        Ok(false) => EXIT_OK,
        Ok(true) => {
            let _ = writeln!(
                stderr,
                "warning: degenerate homodyne measurement encountered"
            );
            EXIT_DEGENERATE
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_IO
        }
    }
}

fn output_of(cmd: &Command) -> &Output {
    match cmd {
        Command::State(a) => &a.output,
        Command::Curve(a) => &a.output,
        Command::Teleport(a) => &a.output,
        Command::Scan(a) => &a.output,
    }
}

fn emit(out: &Output, text: &str, stdout: &mut dyn Write) -> Result<(), Failure> {
    match &out.out {
        Some(path) => std::fs::write(path, text).map_err(|e| {
            Failure::Io(std::io::Error::new(
                e.kind(),
                format!("{}: {e}", path.display()),
            ))
        })?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

/// `{"schema", "command", "args", "results"}` plus any extra top-level fields.
fn document(command: &str, spec: &impl serde::Serialize, results: Value, extra: Value) -> String {
    let mut doc = json!({
        "schema": SCHEMA,
        "command": command,
        "args": serde_json::to_value(spec).expect("serialisable arguments"),
        "results": results,
    });
    if let (Some(map), Value::Object(more)) = (doc.as_object_mut(), extra) {
        map.extend(more);
    }
    to_json_text(&doc)
}

fn to_json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serialisable output");
    s.push('\n');
    s
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn resolve_config(n: usize, sq: &Squeezing) -> Result<NetworkConfig, Failure> {
    let scenario: Scenario = sq.scenario.into();
    if sq.r1.is_some() && scenario == Scenario::AllEqual {
        return Err(usage("--r1 applies to --scenario one-squeezed; use --r"));
    }
    let r = match (sq.r, sq.r1, sq.db) {
        (Some(r), None, None) | (None, Some(r), None) => r,
        (None, None, Some(db)) => crate::db_to_r(db),
        (None, None, None) => return Err(usage("one of --r, --r1 or --db is required")),
        _ => return Err(usage("give squeezing once, as --r, --r1 or --db")),
    };
    Ok(NetworkConfig::with_scenario(scenario, n, r)?)
}

fn zero_based(name: &str, index: usize, n: usize) -> Result<usize, Failure> {
    if index == 0 || index > n {
        return Err(usage(format!(
            "--{name} must be between 1 and {n}, got {index}"
        )));
    }
    Ok(index - 1)
}

fn pair(k: usize, l: usize, n: usize) -> Result<(usize, usize), Failure> {
    let (k0, l0) = (zero_based("k", k, n)?, zero_based("l", l, n)?);
    if k0 == l0 {
        return Err(usage("sender and receiver must differ"));
    }
    Ok((k0, l0))
}

fn parse_list(flag: &str, s: &str) -> Result<Vec<f64>, Failure> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| usage(format!("--{flag} {s:?}: {e}")))
}

fn state_json(s: &GaussianState) -> Value {
    let rec = crate::gaussian::StateRecord::from(s);
    json!({ "mean": rec.mean, "cov": rec.cov })
}

fn cmd_state(a: &StateArgs) -> Result<(String, bool), Failure> {
    let config = resolve_config(a.n, &a.squeezing)?;
    let n = config.n();
    let (k, l) = pair(a.k, a.l, n)?;
    let gain = match a.gain {
        Some(g) => g,
        None if n >= 3 => optimal_gain(n, config.scenario(), config.r())?,
        None => 0.0,
    };
    let state = build_ghz_state(&config)?;
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            pairs.push((i + 1, j + 1, position_difference_variance(&state, i, j)?));
        }
    }
    let corr = momentum_correlation_variance(&state, k, l, gain)?;
    // outcomes only shift the mean; the Duan value uses central moments
    let (duan, degenerate) = if n >= 3 {
        let d = distill_pair(&state, k, l, gain, &mut Forced::new(vec![0.0; n - 2]))?;
        (duan_value(&d.pair)?, d.degenerate)
    } else {
        (duan_value(&state.reduce(&[k, l])?)?, false)
    };
    let text = match a.output.format.unwrap_or(Format::Json) {
        Format::Csv => {
            let mut s = String::from("k,l,var_x_diff\n");
            for (i, j, v) in &pairs {
                s += &format!("{i},{j},{}\n", format_sig12(*v));
            }
            s
        }
        Format::Json => {
            let results = json!({
                "n": n,
                "r_values": config.r_values(),
                "state": state_json(&state),
                "var_x_diff": pairs.iter().map(|(i, j, v)| json!({"k": i, "l": j, "value": v})).collect::<Vec<_>>(),
                "momentum_correlation": {"k": a.k, "l": a.l, "gain": gain, "value": corr},
                "duan": {"k": a.k, "l": a.l, "gain": gain, "distilled": n >= 3, "value": duan},
            });
            document("state", a, results, Value::Null)
        }
    };
    Ok((text, degenerate))
}

fn db_grid(a: &CurveArgs) -> Result<Vec<f64>, Failure> {
    if !(a.db_step > 0.0 && a.db_step.is_finite() && a.db_min.is_finite() && a.db_max.is_finite()) {
        return Err(usage("--db-step must be positive and the range finite"));
    }
    if a.db_max < a.db_min {
        return Err(Failure::Usage(crate::Error::EmptyGrid.to_string()));
    }
    let count = ((a.db_max - a.db_min) / a.db_step + 1e-9).floor() as usize;
    // rounded to the step's decimal resolution so 0.1-style steps print cleanly
    Ok((0..=count)
        .map(|i| {
            format_sig12(a.db_min + i as f64 * a.db_step)
                .parse()
                .expect("formatted float")
        })
        .collect())
}

fn cmd_curve(a: &CurveArgs, exec: Execution) -> Result<(String, bool), Failure> {
    let ns =
        a.ns.split(',')
            .map(|t| t.trim().parse::<usize>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| usage(format!("--ns {:?}: {e}", a.ns)))?;
    let rows = fidelity_curve(&ns, a.scenario.into(), &db_grid(a)?, exec)?;
    let text = match a.output.format.unwrap_or(Format::Csv) {
        Format::Csv => format::curve_csv(&rows),
        Format::Json => {
            let results: Vec<Value> = rows
                .iter()
                .map(|r| {
                    json!({"N": r.n, "squeezing_dB": r.squeezing_db, "r": r.r, "gain": r.gain, "F_opt": r.f_opt})
                })
                .collect();
            document("curve", a, Value::Array(results), Value::Null)
        }
    };
    Ok((text, false))
}

fn parse_gains(s: &str, config: &NetworkConfig) -> Result<GainSchedule, Failure> {
    if s.trim() == "optimal" {
        return Ok(GainSchedule::optimal(config)?);
    }
    let v = parse_list("gains", s)?;
    let stations = config.n() - 2;
    match v.len() {
        2 => Ok(GainSchedule::new(v[0], v[1])),
        len if len == stations + 1 => Ok(GainSchedule::per_station(v[0], v[1..].to_vec())),
        len => Err(usage(format!(
            "--gains needs `optimal`, `g,gN` or g plus {stations} station gains; got {len} values"
        ))),
    }
}

fn cmd_teleport(
    a: &TeleportArgs,
    exec: Execution,
    stderr: &mut dyn Write,
) -> Result<(String, bool), Failure> {
    let config = resolve_config(a.n, &a.squeezing)?;
    let (k, l) = pair(a.k, a.l, config.n())?;
    let gains = parse_gains(&a.gains, &config)?;
    let alpha = match parse_list("alpha", &a.alpha)?[..] {
        [x, p] if x.is_finite() && p.is_finite() => (x, p),
        _ => return Err(usage("--alpha must be two finite numbers `x,p`")),
    };
    if a.trials == 0 {
        return Err(usage("--trials must be at least 1"));
    }
    let seed = match a.seed {
        Some(s) => s,
        None => {
            let s = crate::rng::entropy_seed();
            writeln!(stderr, "seed: {s}")?;
            s
        }
    };
    let outcomes = run_trials(&config, k, l, alpha, &gains, seed, a.trials, exec)?;
    let closed = closed_form_fidelity(&config, k, l, &gains, alpha)?;
    let degenerate = outcomes.iter().any(|o| o.degenerate);
    let (f_min, f_max) = outcomes
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), o| {
            (lo.min(o.fidelity), hi.max(o.fidelity))
        });
    let shot_mean = outcomes.iter().map(|o| o.shot_fidelity).sum::<f64>() / outcomes.len() as f64;

    let text = match a.output.format.unwrap_or(Format::Json) {
        Format::Csv => {
            let mut s = String::from("trial,x_u,p_v");
            for j in (0..config.n()).filter(|&j| j != k && j != l) {
                s += &format!(",p_{}", j + 1);
            }
            s += ",fidelity,shot_fidelity\n";
            for (t, o) in outcomes.iter().enumerate() {
                s += &format!(
                    "{t},{},{}",
                    format_sig12(o.record.x_u),
                    format_sig12(o.record.p_v)
                );
                for p in &o.record.assisting {
                    s += &format!(",{}", format_sig12(*p));
                }
                s += &format!(
                    ",{},{}\n",
                    format_sig12(o.fidelity),
                    format_sig12(o.shot_fidelity)
                );
            }
            s
        }
        Format::Json => {
            let trials: Vec<Value> = outcomes
                .iter()
                .enumerate()
                .map(|(t, o)| {
                    json!({
                        "trial": t,
                        "record": o.record,
                        "fidelity": o.fidelity,
                        "shot_fidelity": o.shot_fidelity,
                        "output": state_json(&o.output),
                        "shot_output": state_json(&o.shot_output),
                        "degenerate": o.degenerate,
                    })
                })
                .collect();
            let spec = {
                let mut v = serde_json::to_value(a).expect("serialisable arguments");
                v["seed"] = json!(seed);
                v
            };
            document(
                "teleport",
                &spec,
                Value::Array(trials),
                json!({
                "gains": gains,
                "summary": {
                    "trials": a.trials,
                    "fidelity_min": f_min,
                    "fidelity_max": f_max,
                    "fidelity_spread": f_max - f_min,
                    "closed_form_fidelity": closed,
                    "closed_form_delta": (f_max - closed).abs().max((f_min - closed).abs()),
                    "shot_fidelity_mean": shot_mean,
                    "degenerate": degenerate,
                },
                }),
            )
        }
    };
    Ok((text, degenerate))
}

fn cmd_scan(a: &ScanArgs, exec: Execution) -> Result<(String, bool), Failure> {
    let ns: Vec<usize> = match a.n {
        Some(n) => vec![n],
        None if a.n_min <= a.n_max => (a.n_min..=a.n_max).collect(),
        None => return Err(usage("--n-min exceeds --n-max")),
    };
    let grid = ScanGrid {
        r_max: a.r_max,
        step: a.r_step,
    };
    let reports = threshold_scan(&ns, grid, exec)?;
    let text = match a.output.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut s = String::from(
                "N,classification,min_F,r_at_min,r_local_max,F_local_max,r_local_min,F_local_min\n",
            );
            for rep in &reports {
                let find = |kind| rep.stationary.iter().find(|st| st.kind == kind);
                let cell = |v: Option<f64>| v.map(format_sig12).unwrap_or_default();
                let (mx, mn) = (find(StationaryKind::Max), find(StationaryKind::Min));
                let class = serde_json::to_value(rep.classification).expect("enum");
                s += &format!(
                    "{},{},{},{},{},{},{},{}\n",
                    rep.n,
                    class.as_str().expect("string tag"),
                    format_sig12(rep.min_fidelity),
                    format_sig12(rep.r_at_min),
                    cell(mx.map(|m| m.r)),
                    cell(mx.map(|m| m.fidelity)),
                    cell(mn.map(|m| m.r)),
                    cell(mn.map(|m| m.fidelity)),
                );
            }
            s
        }
        Format::Json => document(
            "scan",
            a,
            serde_json::to_value(&reports).expect("serialisable reports"),
            Value::Null,
        ),
    };
    Ok((text, false))
}
