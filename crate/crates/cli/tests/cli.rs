use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_funcseries"))
        .args(args)
        .output()
        .unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn coefficients(v: &Value) -> Vec<[f64; 2]> {
    serde_json::from_value(v["coefficients"].clone()).unwrap()
}

#[test]
fn expand_sine_case() {
    let out = run(&[
        "expand", "--f", "1/(1+z)", "--s", "sin(z)", "--z0", "0", "--order", "3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stderr.is_empty());
    let c = coefficients(&json(&out));
    let want = [1.0, -1.0, 1.0, -7.0 / 6.0];
    for (got, want) in c.iter().zip(want) {
        assert!((got[0] - want).abs() < 1e-12 && got[1] == 0.0);
    }
}

#[test]
fn expand_taylor_case() {
    let out = run(&[
        "expand", "--f", "exp(z)", "--s", "z", "--z0", "0", "--order", "4",
    ]);
    let c = coefficients(&json(&out));
    for (n, want) in [1.0, 1.0, 0.5, 1.0 / 6.0, 1.0 / 24.0]
        .into_iter()
        .enumerate()
    {
        assert!((c[n][0] - want).abs() < 1e-14);
    }
}

#[test]
fn exit_codes() {
    let zero = run(&["expand", "--f", "exp(z)", "--s", "z^2", "--z0", "0"]);
    assert_eq!(zero.status.code(), Some(3));
    assert!(zero.stdout.is_empty());
    assert!(String::from_utf8_lossy(&zero.stderr).contains("vanishing derivative"));

    let syntax = run(&["expand", "--f", "exp(z", "--s", "z"]);
    assert_eq!(syntax.status.code(), Some(2));
    let unknown = run(&["expand", "--f", "erf(z)", "--s", "z"]);
    assert_eq!(unknown.status.code(), Some(2));
    let two_vars = run(&["expand", "--f", "x+z", "--s", "z"]);
    assert_eq!(two_vars.status.code(), Some(2));

    let pole = run(&["expand", "--f", "1/z", "--s", "z", "--z0", "0"]);
    assert_eq!(pole.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&pole.stderr).contains("singularity"));

    let corrupt = run(&[
        "check",
        "--catalog",
        "rational-in-sine",
        "--corrupt-coefficient",
        "3",
    ]);
    assert_eq!(corrupt.status.code(), Some(5));
    assert_eq!(json(&corrupt)["agree"], Value::Bool(false));

    let missing = run(&["remainder", "--f", "exp(z)", "--s", "z"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn complex_expansion_point() {
    let out = run(&[
        "expand", "--f", "exp(z)", "--s", "z", "--z0", "0,1", "--order", "2",
    ]);
    let c = coefficients(&json(&out));
    let (sin1, cos1) = 1f64.sin_cos();
    assert!((c[0][0] - cos1).abs() < 1e-14 && (c[0][1] - sin1).abs() < 1e-14);
}

#[test]
fn inverse_route_matches_direct() {
    let direct = run(&[
        "expand", "--f", "exp(3*z)", "--s", "exp(z)", "--z0", "0.2", "--order", "6",
    ]);
    let inverse = run(&[
        "expand",
        "--f",
        "exp(3*z)",
        "--s",
        "exp(z)",
        "--z0",
        "0.2",
        "--order",
        "6",
        "--inverse",
        "log(s)",
    ]);
    let (a, b) = (json(&direct), json(&inverse));
    assert_eq!(b["route"], "inverse");
    for (x, y) in coefficients(&a).iter().zip(coefficients(&b)) {
        assert!((x[0] - y[0]).abs() <= 1e-10 * x[0].abs().max(1.0));
    }
    assert_eq!(a["terminated_at"], 3);
    assert_eq!(b["terminated_at"], 3);
}

#[test]
fn check_reports_termination() {
    let out = run(&[
        "check", "--f", "8^(-z)", "--s", "2^(-z)", "--z0", "0", "--order", "6",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["engine_terminated_at"], 3);
    assert_eq!(v["oracle_terminated_at"], 3);
    let all = run(&["check", "--catalog", "all"]);
    assert_eq!(all.status.code(), Some(0));
    assert_eq!(
        json(&all)["pairs"].as_array().unwrap().len(),
        funcseries::catalog::CATALOG.len()
    );
}

#[test]
fn plot_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("plot.csv");
    let out = run(&[
        "plot",
        "--f",
        "1/(1+z)",
        "--s",
        "sin(z)",
        "--order",
        "3",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let mut reader = csv::Reader::from_path(&path).unwrap();
    assert_eq!(
        reader.headers().unwrap(),
        vec!["z", "f", "S0", "S1", "S2", "S3"]
    );
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 121);
    for row in &rows {
        let z: f64 = row[0].parse().unwrap();
        let s = z.sin();
        let want = 1.0 - s + s * s - 7.0 / 6.0 * s.powi(3);
        let got: f64 = row[5].parse().unwrap();
        assert!((got - want).abs() < 1e-12, "z={z}");
        assert_eq!(&row[2], "1.0");
        if (z + 1.0).abs() < 1e-12 {
            assert_eq!(&row[1], "");
        }
    }
    let zero = run(&[
        "plot", "--f", "exp(z)", "--s", "z", "--order", "0", "--grid", "0:1:3",
    ]);
    let text = String::from_utf8(zero.stdout).unwrap();
    assert_eq!(
        text,
        "z,f,S0\n0.0,1.0,1.0\n0.5,1.6487212707001282,1.0\n1.0,2.718281828459045,1.0\n"
    );
}

#[test]
fn plot_is_deterministic() {
    let args = [
        "plot",
        "--catalog",
        "reciprocal-in-power",
        "--grid",
        "0:1:41",
        "--order",
        "4",
    ];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let expand = ["expand", "--catalog", "power-5-in-2", "--order", "8"];
    assert_eq!(run(&expand).stdout, run(&expand).stdout);
}

#[test]
fn remainder_report() {
    let out = run(&[
        "remainder",
        "--catalog",
        "rational-in-sine",
        "--at",
        "0.4",
        "--order",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["measured_within_lagrange"], true);
    assert!(v["measured"]["bound"].as_f64().unwrap() <= v["lagrange"]["bound"].as_f64().unwrap());
    assert_eq!(v["lagrange"]["samples"], 64);

    let at_z0 = json(&run(&[
        "remainder",
        "--f",
        "exp(z)",
        "--s",
        "sin(z)",
        "--at",
        "0",
        "--order",
        "2",
    ]));
    assert_eq!(at_z0["measured"]["bound"], 0.0);
    assert_eq!(at_z0["lagrange"]["bound"], 0.0);

    let wide = json(&run(&[
        "remainder",
        "--f",
        "exp(z)",
        "--s",
        "sin(z)",
        "--at",
        "2",
        "--order",
        "2",
    ]));
    assert!(wide["lagrange"].is_null());
    assert!(wide["notes"][0].as_str().unwrap().contains("monotone"));
}

#[test]
fn teixeira_report() {
    let out = run(&["teixeira", "--f", "exp(z)", "--theta", "z", "--order", "8"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let a: Vec<[f64; 2]> = serde_json::from_value(v["A"].clone()).unwrap();
    let mut factorial = 1.0;
    for (n, an) in a.iter().enumerate().skip(1) {
        factorial *= n as f64;
        assert!((an[0] - 1.0 / factorial).abs() < 1e-8);
    }
    assert_eq!(v["B"].as_array().unwrap().len(), 0);
    assert_eq!(v["contours"]["outer"]["points"], 512);

    let laurent = json(&run(&[
        "teixeira",
        "--f",
        "1/z + exp(z)",
        "--theta",
        "z",
        "--contour",
        "0:2",
        "--contour",
        "0:0.5",
        "--at",
        "1",
    ]));
    assert!((laurent["B"][0][0].as_f64().unwrap() - 1.0).abs() < 1e-7);
    assert!(laurent["evaluation"]["abs_error"].as_f64().unwrap() < 1e-6);

    let outside = run(&[
        "teixeira",
        "--f",
        "exp(z)",
        "--theta",
        "z",
        "--contour",
        "0:1",
        "--at",
        "3",
    ]);
    assert_eq!(outside.status.code(), Some(1));
    let bad_points = run(&[
        "teixeira",
        "--f",
        "exp(z)",
        "--theta",
        "z",
        "--quadrature-points",
        "100",
    ]);
    assert_eq!(bad_points.status.code(), Some(1));
}

#[test]
fn config_file_and_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(
        &cfg,
        "# sine case\nf = 1/(1+a*z)\ns = sin(z)\norder = 2\nparam = a=2\n",
    )
    .unwrap();
    let out = run(&["expand", "--config", cfg.to_str().unwrap()]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let c = coefficients(&json(&out));
    assert_eq!(c.len(), 3);
    assert!((c[1][0] + 2.0).abs() < 1e-14);
    let over = run(&[
        "expand",
        "--config",
        cfg.to_str().unwrap(),
        "--order",
        "4",
        "--param",
        "a=3",
    ]);
    let c = coefficients(&json(&over));
    assert_eq!(c.len(), 5);
    assert!((c[1][0] + 3.0).abs() < 1e-14);

    std::fs::write(&cfg, "colour = red\n").unwrap();
    assert_eq!(
        run(&["expand", "--config", cfg.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}
