use std::process::{Command, Output};

use serde_json::Value;

fn cvnet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cvnet"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(args: &[&str]) -> Value {
    let out = cvnet(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn matrix(v: &Value) -> Vec<Vec<f64>> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|row| {
            row.as_array()
                .unwrap()
                .iter()
                .map(|x| x.as_f64().unwrap())
                .collect()
        })
        .collect()
}

#[test]
fn help_prints_db_conversion() {
    let out = cvnet(&["--help"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("8.685889638"));
    for sub in ["state", "curve", "teleport", "scan"] {
        assert!(text.contains(sub));
    }
}

#[test]
fn three_mode_state_covariance() {
    let r: f64 = 1.0;
    let doc = stdout_json(&[
        "state",
        "--n",
        "3",
        "--scenario",
        "all-equal",
        "--r",
        "1",
        "--format",
        "json",
    ]);
    assert_eq!(doc["schema"], "1");
    assert_eq!(doc["command"], "state");
    let cov = matrix(&doc["results"]["state"]["cov"]);

    // x coefficients on the squeezed vacuum inputs; p mirrors them with e^{±r} swapped
    let s3 = 3f64.sqrt();
    let x = [
        [r.exp() / s3, (2.0 / 3.0f64).sqrt() * (-r).exp(), 0.0],
        [
            r.exp() / s3,
            -(-r).exp() / 6f64.sqrt(),
            (-r).exp() / 2f64.sqrt(),
        ],
        [
            r.exp() / s3,
            -(-r).exp() / 6f64.sqrt(),
            -(-r).exp() / 2f64.sqrt(),
        ],
    ];
    let p = [
        [(-r).exp() / s3, (2.0 / 3.0f64).sqrt() * r.exp(), 0.0],
        [
            (-r).exp() / s3,
            -r.exp() / 6f64.sqrt(),
            r.exp() / 2f64.sqrt(),
        ],
        [
            (-r).exp() / s3,
            -r.exp() / 6f64.sqrt(),
            -r.exp() / 2f64.sqrt(),
        ],
    ];
    let dot = |a: &[f64; 3], b: &[f64; 3]| 0.25 * a.iter().zip(b).map(|(u, v)| u * v).sum::<f64>();
    for i in 0..3 {
        for j in 0..3 {
            assert!((cov[2 * i][2 * j] - dot(&x[i], &x[j])).abs() < 1e-12);
            assert!((cov[2 * i + 1][2 * j + 1] - dot(&p[i], &p[j])).abs() < 1e-12);
            assert!(cov[2 * i][2 * j + 1].abs() < 1e-12);
        }
    }
}

#[test]
fn two_mode_vacuum_state() {
    let doc = stdout_json(&["state", "--n", "2", "--r", "0", "--format", "json"]);
    let cov = matrix(&doc["results"]["state"]["cov"]);
    for (i, row) in cov.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            let expected = if i == j { 0.25 } else { 0.0 };
            assert!((v - expected).abs() < 1e-15);
        }
    }
}

#[test]
fn one_squeezed_position_differences() {
    let out = cvnet(&[
        "state",
        "--n",
        "4",
        "--scenario",
        "one-squeezed",
        "--r1",
        "1",
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("k,l,var_x_diff"));
    let rows: Vec<_> = lines.collect();
    assert_eq!(rows.len(), 6);
    for row in rows {
        let v: f64 = row.rsplit(',').next().unwrap().parse().unwrap();
        assert!((v - 0.5).abs() < 1e-11, "{row}");
    }
}

#[test]
fn teleport_trials_share_one_fidelity() {
    let r: f64 = 1.0;
    let args = [
        "teleport", "--n", "3", "--r", "1", "--k", "1", "--l", "2", "--gains", "optimal",
        "--trials", "100", "--seed", "7",
    ];
    let doc = stdout_json(&args);
    let results = doc["results"].as_array().unwrap();
    assert_eq!(results.len(), 100);
    let f0 = results[0]["fidelity"].as_f64().unwrap();
    assert!(results.iter().all(|t| t["fidelity"].as_f64() == Some(f0)));
    let three_party_reference = ((1.0 + (-2.0 * r).exp())
        * (1.0 + 3.0 / (2.0 * (2.0 * r).exp() + (-2.0 * r).exp())))
    .powf(-0.5);
    assert!((f0 - three_party_reference).abs() < 1e-10);
    assert!(doc["summary"]["closed_form_delta"].as_f64().unwrap() < 1e-10);
    assert!(doc["summary"]["fidelity_spread"].as_f64().unwrap() < 1e-12);
}

#[test]
fn teleport_without_squeezing_is_classical() {
    let doc = stdout_json(&[
        "teleport", "--n", "5", "--r", "0", "--alpha", "1.5,-0.5", "--seed", "1",
    ]);
    let f = doc["results"][0]["fidelity"].as_f64().unwrap();
    assert!((f - 0.5).abs() < 1e-12);
}

#[test]
fn same_seed_gives_identical_bytes() {
    let args = [
        "teleport", "--n", "4", "--db", "6", "--trials", "20", "--seed", "99",
    ];
    let a = cvnet(&args);
    let b = cvnet(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let c = cvnet(&[
        "teleport", "--n", "4", "--db", "6", "--trials", "20", "--seed", "100",
    ]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn generated_seed_is_reported_and_reproduces() {
    let out = cvnet(&["teleport", "--n", "3", "--r", "0.4", "--trials", "3"]);
    assert!(out.status.success());
    let stderr = String::from_utf8(out.stderr).unwrap();
    let seed = stderr
        .lines()
        .find_map(|l| l.strip_prefix("seed: "))
        .expect("seed reported");
    let again = cvnet(&[
        "teleport", "--n", "3", "--r", "0.4", "--trials", "3", "--seed", seed,
    ]);
    let strip = |v: &[u8]| {
        let mut doc: Value = serde_json::from_slice(v).unwrap();
        doc["args"]["seed"] = Value::Null;
        doc
    };
    assert_eq!(strip(&out.stdout), strip(&again.stdout));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["teleport", "--n", "3", "--r", "1", "--k", "2", "--l", "2"][..],
        &["state", "--n", "3", "--r", "1", "--db", "3"],
        &["state", "--n", "0", "--r", "1"],
        &["curve", "--db-min", "5", "--db-max", "1"],
        &[
            "teleport",
            "--n",
            "4",
            "--r",
            "1",
            "--gains",
            "1,0.2,0.3,0.4",
        ],
        &["frobnicate"],
    ] {
        let out = cvnet(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn curve_single_row() {
    let out = cvnet(&["curve", "--ns", "2", "--db-min", "0", "--db-max", "0"]);
    assert!(out.status.success());
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "N,squeezing_dB,r,gain,F_opt\n2,0,0,0,0.5\n"
    );
}

#[test]
fn curve_csv_round_trips() {
    let out = cvnet(&[
        "curve",
        "--ns",
        "3,20",
        "--scenario",
        "one-squeezed",
        "--db-max",
        "7",
        "--db-step",
        "0.7",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut rewritten = String::new();
    for (i, line) in text.lines().enumerate() {
        if i == 0 {
            rewritten.push_str(line);
        } else {
            let fields: Vec<String> = line
                .split(',')
                .map(|f| {
                    let v: f64 = f.parse().unwrap();
                    let rounded: f64 = format!("{v:.11e}").parse().unwrap();
                    format!("{rounded}")
                })
                .collect();
            rewritten.push_str(&fields.join(","));
        }
        rewritten.push('\n');
    }
    assert_eq!(rewritten, text);
}

#[test]
fn curve_json_and_out_file() {
    let dir = std::env::temp_dir().join(format!("cvnet-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("curve.json");
    let out = cvnet(&[
        "curve",
        "--ns",
        "4",
        "--db-max",
        "2",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["schema"], "1");
    assert_eq!(doc["results"].as_array().unwrap().len(), 5);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn scan_flips_between_29_and_30() {
    let out = cvnet(&[
        "scan", "--n-min", "25", "--n-max", "32", "--r-step", "0.005",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let class: Vec<(usize, String)> = text
        .lines()
        .skip(1)
        .map(|l| {
            let mut f = l.split(',');
            (
                f.next().unwrap().parse().unwrap(),
                f.next().unwrap().to_string(),
            )
        })
        .collect();
    for (n, c) in &class {
        let expected = if *n <= 29 {
            "always-quantum"
        } else {
            "dips-classical"
        };
        assert_eq!(c, expected, "N={n}");
    }
    assert_eq!(class.len(), 8);
}

#[test]
fn scan_small_n_has_no_extrema() {
    let doc = stdout_json(&["scan", "--n", "2", "--format", "json"]);
    let report = &doc["results"][0];
    assert_eq!(report["classification"], "always-quantum");
    assert!(report["stationary"].as_array().unwrap().is_empty());
    let doc = stdout_json(&["scan", "--n", "27", "--format", "json"]);
    let kinds: Vec<_> = doc["results"][0]["stationary"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["kind"].clone())
        .collect();
    assert_eq!(kinds, ["max", "min"]);
}
