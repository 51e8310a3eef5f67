use std::fs;
use std::process::Command;

use magnon_sagnac::cli::{run_with_io, CSV_HEADER};
use tempfile::tempdir;

fn run(args: &[&str]) -> (i32, String, String) {
    let argv = std::iter::once("magnon-sagnac")
        .chain(args.iter().copied())
        .map(String::from)
        .collect();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_with_io(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

/// Header and single row of a record printed in CSV form.
fn record(stdout: &str) -> Vec<(String, String)> {
    let mut lines = stdout.lines();
    let keys = lines.next().unwrap().split(',');
    let vals = lines.next().unwrap().split(',');
    keys.zip(vals)
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}

fn field(rec: &[(String, String)], key: &str) -> String {
    rec.iter().find(|(k, _)| k == key).unwrap().1.clone()
}

fn num(rec: &[(String, String)], key: &str) -> f64 {
    field(rec, key).parse().unwrap()
}

#[test]
fn isolate_at_zero_shift_is_reciprocal() {
    let (code, out, _) = run(&["isolate", "--set", "delta_f_mhz=0"]);
    assert_eq!(code, 0);
    let rec = record(&out);
    assert_eq!(num(&rec, "I_abs_db"), 0.0);
    assert_eq!(field(&rec, "direction"), "RECIPROCAL");
}

#[test]
fn headline_point_from_defaults() {
    let (code, out, _) = run(&["isolate", "--set", "delta_f_mhz=33.18"]);
    assert_eq!(code, 0);
    let rec = record(&out);
    assert!((num(&rec, "I_abs_db") - 41.63).abs() < 0.01);
    assert_eq!(field(&rec, "direction"), "FORWARD");
}

#[test]
fn analytic_and_brute_optimize_agree() {
    let (_, a, _) = run(&["optimize", "--analytic"]);
    let (_, b, _) = run(&["optimize", "--brute"]);
    let (a, b) = (record(&a), record(&b));
    assert!((num(&a, "delta_f_mhz") - 33.18).abs() < 0.005);
    assert!((num(&a, "I_abs_db") - 41.63).abs() < 0.01);
    assert!((num(&a, "delta_f_mhz") - num(&b, "delta_f_mhz")).abs() <= 1e-3);
    assert!((num(&a, "I_abs_db") - num(&b, "I_abs_db")).abs() <= 1e-6);
    assert_eq!(field(&a, "method"), "symmetric");
}

#[test]
fn optimize_respects_band() {
    let (code, out, _) = run(&["optimize", "--band", "0,20"]);
    assert_eq!(code, 0);
    let df = num(&record(&out), "delta_f_mhz");
    assert!((0.0..=20.0).contains(&df));
    assert_eq!(run(&["optimize", "--band", "20,0"]).0, 1);
}

#[test]
fn fizeau_modes() {
    let (_, out, _) = run(&[
        "fizeau",
        "--set",
        "rotation.direction=cw",
        "--first-term-only",
    ]);
    assert!((num(&record(&out), "delta_f_mhz") - 64.61).abs() < 0.05);
    let (_, out, _) = run(&["fizeau", "--set", "rotation.direction=ccw"]);
    assert!((num(&record(&out), "delta_f_mhz") + 51.26).abs() < 0.05);
}

#[test]
fn steady_residuals_are_small() {
    for side in ["left", "right"] {
        let (code, out, _) = run(&["steady", "--side", side, "--set", "delta_f_mhz=20"]);
        assert_eq!(code, 0);
        let rec = record(&out);
        for k in ["residual_1", "residual_2", "residual_3"] {
            assert!(num(&rec, k) <= 1e-10, "{side} {k}");
        }
    }
}

#[test]
fn reproduce_fig2b_is_deterministic_and_round_trips() {
    let dir = tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    assert_eq!(run(&["reproduce", "fig2b", "--out", d]).0, 0);
    let first = fs::read(dir.path().join("fig2b.csv")).unwrap();
    let svg = fs::read(dir.path().join("fig2b.svg")).unwrap();
    assert_eq!(run(&["reproduce", "fig2b", "--out", d]).0, 0);
    assert_eq!(first, fs::read(dir.path().join("fig2b.csv")).unwrap());
    assert_eq!(svg, fs::read(dir.path().join("fig2b.svg")).unwrap());
    assert!(String::from_utf8_lossy(&svg).starts_with("<svg"));

    let text = String::from_utf8(first).unwrap();
    assert!(!text.contains('\r'));
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(CSV_HEADER));
    let peak = lines
        .map(|l| l.split(',').nth(6).unwrap().parse::<f64>().unwrap())
        .fold(0.0, f64::max);
    assert!((peak - 41.63).abs() <= 0.02);

    let preset = magnon_sagnac::sweep::figure_preset("fig2b").unwrap();
    let result =
        magnon_sagnac::sweep::sweep_with(&preset.base, &preset.axes, &preset.options).unwrap();
    assert_eq!(peak, result.max_isolation().unwrap().1.i_abs_db);
}

#[test]
fn reproduce_writes_ridge_for_heatmaps() {
    let dir = tempdir().unwrap();
    let (code, out, _) = run(&["reproduce", "fig3a", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.contains("ridge max |I| = 45.890"), "{out}");
    for f in [
        "fig3a.csv",
        "fig3a.svg",
        "fig3a_points.csv",
        "fig3a_ridge.csv",
    ] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
}

#[test]
fn two_point_sweep_has_three_lines() {
    let dir = tempdir().unwrap();
    let path = dir.path().join("s.csv");
    let (code, _, _) = run(&[
        "sweep",
        "--axis",
        "delta_f:-10:10:2",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let text = fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 3);
    assert!(text.ends_with('\n'));
}

#[test]
fn infinite_isolation_sentinel() {
    let dir = tempdir().unwrap();
    let path = dir.path().join("s.csv");
    let args = [
        "sweep",
        "--set",
        "g0_mhz=[0, 41]",
        "--axis",
        "delta_f:5:10:2",
        "--out",
        path.to_str().unwrap(),
    ];
    assert_eq!(run(&args).0, 0);
    let text = fs::read_to_string(&path).unwrap();
    let row = text.lines().nth(1).unwrap();
    assert!(row.contains(",-inf,") || row.contains(",inf,"), "{row}");
    assert!(row.ends_with(",INF_ISOLATION"), "{row}");
}

#[test]
fn json_sweep_mirrors_csv_columns() {
    let dir = tempdir().unwrap();
    let path = dir.path().join("s.json");
    let args = [
        "sweep",
        "--format",
        "json",
        "--axis",
        "gamma_m:1:4:4",
        "--axis2",
        "G:0:1:2",
        "--optimal",
        "positive",
        "--out",
        path.to_str().unwrap(),
    ];
    assert_eq!(run(&args).0, 0);
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    let records = v.as_array().unwrap();
    assert_eq!(records.len(), 8);
    let keys: Vec<&str> = records[0]
        .as_object()
        .unwrap()
        .keys()
        .map(String::as_str)
        .collect();
    let mut expected: Vec<&str> = CSV_HEADER.split(',').collect();
    expected.sort();
    let mut keys_sorted = keys.clone();
    keys_sorted.sort();
    assert_eq!(keys_sorted, expected);
}

#[test]
fn override_precedence() {
    let dir = tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    fs::write(&cfg, r#"{"gamma_m_mhz": 2.0, "delta_mhz": 3.0}"#).unwrap();
    let (code, out, _) = run(&[
        "validate",
        "--print-resolved",
        "--config",
        cfg.to_str().unwrap(),
        "--set",
        "delta_mhz=5",
    ]);
    assert_eq!(code, 0);
    let json_end = out.rfind('}').unwrap();
    let v: serde_json::Value = serde_json::from_str(&out[..=json_end]).unwrap();
    assert_eq!(v["config"]["gamma_m_mhz"], 2.0);
    assert_eq!(v["config"]["delta_mhz"], 5.0);
    assert_eq!(v["config"]["kappa_mhz"], 1.1);
}

#[test]
fn validate_lists_violations() {
    let (code, out, _) = run(&["validate", "--set", "eta=1.2"]);
    assert_eq!(code, 1);
    assert!(out.lines().all(|l| l.starts_with("ETA_RANGE")), "{out}");
    let (code, out, _) = run(&["validate"]);
    assert_eq!((code, out.trim()), (0, "ok"));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["--help"]).0, 0);
    assert_eq!(run(&["frobnicate"]).0, 3);
    assert_eq!(run(&["isolate", "--no-such-flag"]).0, 3);
    assert_eq!(run(&["isolate", "--set", "eta=1.2"]).0, 1);
    assert_eq!(run(&["isolate", "--set", "unknown_key=1"]).0, 1);
    assert_eq!(run(&["reproduce", "fig9", "--out", "x"]).0, 1);
    assert_eq!(
        run(&["isolate", "--config", "/nonexistent/config.json"]).0,
        2
    );
    let (code, _, err) = run(&[
        "sweep",
        "--axis",
        "delta_f:-1:1:3",
        "--out",
        "/nonexistent/dir/s.csv",
    ]);
    assert_eq!(code, 2, "{err}");
}

#[test]
fn binary_honours_thread_env() {
    let dir = tempdir().unwrap();
    let exe = env!("CARGO_BIN_EXE_magnon-sagnac");
    let out = |threads: &str, name: &str| {
        let path = dir.path().join(name);
        let status = Command::new(exe)
            .args([
                "sweep",
                "--axis",
                "delta_f:-20:20:41",
                "--axis2",
                "kappa:0.5:2:4",
                "--out",
            ])
            .arg(&path)
            .env("MAGNON_SAGNAC_THREADS", threads)
            .output()
            .unwrap()
            .status;
        (status.code(), fs::read(&path).ok())
    };
    let (c1, a) = out("1", "a.csv");
    let (c0, b) = out("0", "b.csv");
    assert_eq!((c1, c0), (Some(0), Some(0)));
    assert_eq!(a, b);
    assert_eq!(out("many", "c.csv").0, Some(1));
}
