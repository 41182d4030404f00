use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn minvol(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_minvol"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (Value, i32) {
    let out = minvol(args);
    let code = out.status.code().expect("exit code");
    let value = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stderr)));
    (value, code)
}

fn f(v: &Value) -> f64 {
    v.as_f64().expect("number")
}

fn scratch(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}

#[test]
fn structural_sphere_passes() {
    let (v, code) = json(&[
        "verify-structural",
        "--model",
        "sphere",
        "--radius",
        "1",
        "--samples",
        "10",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["regime"], "constant-curvature");
    let results = v["results"].as_array().unwrap();
    assert_eq!(results.len(), 4);
    for r in results {
        assert_eq!(r["status"], "pass");
        let order = f(&r["convergence_order"]);
        assert!((1.7..=2.3).contains(&order));
    }
}

#[test]
fn structural_conformal_skips_dalpha2() {
    let (v, code) = json(&[
        "verify-structural",
        "--model",
        "conformal-test",
        "--samples",
        "10",
    ]);
    assert_eq!(code, 0);
    let results = v["results"].as_array().unwrap();
    let ids: Vec<&str> = results
        .iter()
        .map(|r| r["equation"].as_str().unwrap())
        .collect();
    assert_eq!(ids, ["dalpha0", "dalpha1", "dalpha2"]);
    assert_eq!(results[2]["status"], "skipped");
    assert_eq!(results[2]["reason"], "γ out of scope");
    assert!(f(&results[1]["max_residual"]) < 1e-4);
}

#[test]
fn structural_residual_ratio_is_four() {
    let residual = |h: &str| {
        let (v, _) = json(&[
            "verify-structural",
            "--model",
            "sphere",
            "--samples",
            "10",
            "--h",
            h,
        ]);
        f(&v["results"][2]["max_residual"])
    };
    let ratio = residual("2e-3") / residual("1e-3");
    assert!((ratio - 4.0).abs() < 0.4, "{ratio}");
}

#[test]
fn structural_failure_exits_one() {
    let (v, code) = json(&[
        "verify-structural",
        "--model",
        "flat",
        "--samples",
        "5",
        "--threshold",
        "1e-30",
    ]);
    assert_eq!(code, 1);
    assert_eq!(v["passed"], false);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["verify-structural", "--model", "torus"][..],
        &["calibrations", "comass", "--b", "1,x,0"],
        &["calibrations", "comass", "--b", "1,0"],
        &[
            "field",
            "volume",
            "--model",
            "half-space",
            "--field",
            "hopf",
            "--box",
            "0,1,0,1,1,2",
        ],
        &[
            "field",
            "volume",
            "--model",
            "half-space",
            "--field",
            "half-space-vertical",
        ],
        &[
            "field",
            "flux",
            "--model",
            "half-space",
            "--field",
            "half-space-vertical",
            "--box",
            "1,0,0,1,1,2",
        ],
        &["flow", "velocity-check", "--model", "flat"],
        &["verify-structural", "--samples", "0"],
        &["verify-structural", "--h", "-1"],
        &["calibrations", "classify", "--format", "csv"],
        &["frobnicate"],
    ] {
        let out = minvol(args);
        assert_eq!(
            out.status.code(),
            Some(2),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn comass_examples() {
    let (v, code) = json(&["calibrations", "comass", "--b", "1,0,1,0"]);
    assert_eq!(code, 0);
    assert!((f(&v["comass"]) - 1.0).abs() < 1e-6);
    assert!((f(&v["norm"]) - 2f64.sqrt()).abs() < 1e-12);
    let (v, _) = json(&["calibrations", "comass", "--b", "0,0,0,0"]);
    assert_eq!(f(&v["comass"]), 0.0);
    let (v, _) = json(&["calibrations", "comass", "--b", "1,0,0", "--restarts", "8"]);
    assert!((f(&v["comass"]) - 1.0).abs() < 1e-6);
    assert_eq!(v["argmax"].as_array().unwrap().len(), 3);
}

#[test]
fn cohomology_and_classification() {
    let verdict = |c: &str, phi: &str, psi: &str| {
        json(&[
            "calibrations",
            "cohomology",
            "--c",
            c,
            "--phi",
            phi,
            "--psi",
            psi,
        ])
        .0["cohomologous"]
            .as_bool()
            .unwrap()
    };
    assert!(verdict("-1", "plus", "zero"));
    assert!(!verdict("1", "plus", "zero"));
    assert!(verdict("1", "t=0.4", "zero"));
    assert!(verdict("0.5", "t=0.3", "t=-0.3"));
    assert!(!verdict("0.5", "t=0.3", "t=0.4"));
    assert!(verdict("-1", "alpha1", "zero"));
    let (v, _) = json(&["calibrations", "classify", "--b", "-1,0,1,0", "--c", "-1"]);
    assert_eq!(v["classification"]["calibration"], "same");
    assert_eq!(v["classification"]["closed"], true);
    assert_eq!(v["families"].as_array().unwrap().len(), 2);
    let (v, _) = json(&["calibrations", "classify", "--b", "1,1,-1,0"]);
    assert_eq!(v["classification"]["calibration"], Value::Null);
}

#[test]
fn field_volumes() {
    for (r, expected) in [("1", 4.0), ("2", 20.0)] {
        let (v, code) = json(&[
            "field", "volume", "--model", "sphere", "--radius", r, "--field", "hopf",
        ]);
        assert_eq!(code, 0);
        let pi2 = std::f64::consts::PI.powi(2);
        assert!((f(&v["volume"]) / (expected * pi2) - 1.0).abs() < 1e-4);
        assert_eq!(v["domain"], "full-sphere");
    }
    let (v, code) = json(&[
        "field",
        "volume",
        "--model",
        "half-space",
        "--a",
        "1",
        "--field",
        "half-space-horizontal",
        "--box",
        "0,1,0,1,1,2",
    ]);
    assert_eq!(code, 0);
    assert!((f(&v["volume"]) - 2f64.sqrt() * 0.375).abs() < 1e-10);
}

#[test]
fn field_calibrated_test() {
    let (v, code) = json(&[
        "field",
        "calibrated-test",
        "--model",
        "half-space",
        "--a",
        "1",
        "--field",
        "half-space-vertical",
        "--phi",
        "minus-alpha1",
        "--samples",
        "200",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["all_satisfied"], true);
    let (v, code) = json(&[
        "field",
        "calibrated-test",
        "--model",
        "half-space",
        "--a",
        "2",
        "--field",
        "half-space-vertical",
        "--phi",
        "minus-alpha1",
        "--samples",
        "50",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["satisfied"], 0);
    assert_eq!(v["inequality_violations"], 0);
    let (v, _) = json(&[
        "field",
        "calibrated-test",
        "--field",
        "hopf",
        "--preset",
        "k",
        "--samples",
        "50",
    ]);
    assert_eq!(v["all_satisfied"], true);
}

#[test]
fn field_defect_classify_and_flux() {
    let (v, _) = json(&[
        "field",
        "defect",
        "--model",
        "half-space",
        "--field",
        "half-space-horizontal",
        "--sign",
        "-",
        "--samples",
        "50",
    ]);
    assert!(f(&v["min"]) > 0.9);
    let (v, _) = json(&["field", "classify", "--field", "hopf", "--samples", "30"]);
    assert_eq!(
        (
            v["killing"].as_bool(),
            v["closed"].as_bool(),
            v["coclosed"].as_bool()
        ),
        (Some(true), Some(false), Some(true))
    );
    let (v, code) = json(&[
        "field",
        "flux",
        "--model",
        "half-space",
        "--field",
        "half-space-vertical",
        "--box",
        "0,1,0,1,1,2",
    ]);
    assert_eq!(code, 0);
    assert!((f(&v["flux"]) - 0.75).abs() < 1e-12);
    assert!(f(&v["relative_difference"]) < 1e-6);
    let (v, _) = json(&[
        "field",
        "flux",
        "--model",
        "half-space",
        "--field",
        "half-space-vertical",
        "--box",
        "0,2,0,1,1,2",
    ]);
    assert!((f(&v["flux"]) - 1.5).abs() < 1e-12);
}

#[test]
fn custom_field_from_file() {
    let path = scratch("vertical.field");
    std::fs::write(&path, "# t d/dt\nx1 = 0\nx2 = 0\nt = t\n").unwrap();
    let (v, code) = json(&[
        "field",
        "calibrated-test",
        "--model",
        "half-space",
        "--field",
        "custom",
        "--file",
        path.to_str().unwrap(),
        "--phi",
        "minus-alpha1",
        "--samples",
        "20",
    ]);
    assert_eq!(code, 0);
    assert!(f(&v["max_abs_difference"]) < 1e-6);
    let missing = minvol(&[
        "field",
        "defect",
        "--model",
        "half-space",
        "--field",
        "custom",
    ]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn flow_checks() {
    let (v, code) = json(&[
        "flow",
        "isometry-check",
        "--model",
        "sphere",
        "--radius",
        "1",
    ]);
    assert_eq!(code, 0);
    assert!(f(&v["max_defect"]) < 1e-10 && v["isometric"] == true);
    let (v, code) = json(&[
        "flow",
        "isometry-check",
        "--model",
        "sphere",
        "--radius",
        "2",
    ]);
    assert_eq!(code, 0);
    let (s, c) = 0.7f64.sin_cos();
    let expected = (4.0 * s * s + c * c - 1.0).max(1.0 - c * c - s * s / 4.0);
    assert!((f(&v["max_defect"]) - expected).abs() < 1e-10);
    assert_eq!(v["isometric"], false);
    let (v, code) = json(&[
        "flow",
        "velocity-check",
        "--model",
        "hyperbolic",
        "--radius",
        "1",
        "--t",
        "0.5",
    ]);
    assert_eq!(code, 0);
    assert!(f(&v["max_residual"]) < 1e-7);
}

#[test]
fn trajectory_csv() {
    let out = minvol(&[
        "flow",
        "trajectory",
        "--model",
        "sphere",
        "--steps",
        "4",
        "--format",
        "csv",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(!text.contains('\r'));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,x1,x2,x3,x4,y1,y2,y3,y4");
    assert_eq!(lines.len(), 6);
    let out = minvol(&[
        "flow",
        "trajectory",
        "--model",
        "half-space",
        "--steps",
        "2",
        "--t-end",
        "1",
        "--x",
        "0,0,1",
        "--y",
        "0,0,1",
        "--format",
        "csv",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    let last: Vec<f64> = text
        .lines()
        .last()
        .unwrap()
        .split(',')
        .map(|c| c.parse().unwrap())
        .collect();
    assert!((last[3] - 1f64.exp()).abs() < 1e-9);
}

#[test]
fn reports_are_deterministic() {
    let args = [
        "field",
        "calibrated-test",
        "--field",
        "hopf",
        "--samples",
        "40",
        "--seed",
        "7",
    ];
    assert_eq!(minvol(&args).stdout, minvol(&args).stdout);
    let other = [
        "field",
        "calibrated-test",
        "--field",
        "hopf",
        "--samples",
        "40",
        "--seed",
        "8",
        "--format",
        "csv",
    ];
    let seven = [
        "field",
        "calibrated-test",
        "--field",
        "hopf",
        "--samples",
        "40",
        "--seed",
        "7",
        "--format",
        "csv",
    ];
    assert_ne!(minvol(&other).stdout, minvol(&seven).stdout);
    let args = [
        "verify-structural",
        "--model",
        "half-space",
        "--samples",
        "5",
    ];
    assert_eq!(minvol(&args).stdout, minvol(&args).stdout);
}

#[test]
fn out_flag_writes_file() {
    let path = scratch("comass.json");
    let out = minvol(&[
        "calibrations",
        "comass",
        "--b",
        "1,0,-1",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!((f(&v["comass"]) - 1.0).abs() < 1e-6);
}

#[test]
fn csv_tables() {
    let out = minvol(&[
        "verify-structural",
        "--model",
        "flat",
        "--samples",
        "5",
        "--format",
        "csv",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "equation,status,max_residual,threshold,convergence_order"
    );
    assert_eq!(lines.count(), 4);
    let out = minvol(&[
        "field",
        "defect",
        "--model",
        "half-space",
        "--field",
        "half-space-vertical",
        "--samples",
        "3",
        "--format",
        "csv",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("x1,x2,t,defect\n"));
    assert_eq!(text.lines().count(), 4);
}
