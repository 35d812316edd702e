use std::fs::File;
use std::io::{self, Write};

use funcseries::catalog::CATALOG;
use funcseries::expr::{evaluate, parse_with_params};
use funcseries::oracle::oracle_coefficients;
use funcseries::remainder::{
    complex_bound, complex_bound_via_inverse, lagrange_bound, measured_error, DEFAULT_SAMPLES,
};
use funcseries::series::{detect_termination, inverse_composite_expand, Tolerances};
use funcseries::teixeira::{ContourSpec, TeixeiraExpansion};
use funcseries::{expand, Error, ExpansionRequest, Expr, SeriesExpansion};
use num_complex::Complex64;
use serde_json::{json, Map, Value};

use crate::config::{Command, RunConfig};
use crate::failure::CliError;

/// Largest engine/oracle relative deviation `check` accepts.
pub const CHECK_TOLERANCE: f64 = 1e-8;

pub fn run(command: &Command) -> Result<(), CliError> {
    let cfg = RunConfig::resolve(command)?;
    match command {
        Command::Expand(_) => cmd_expand(&cfg),
        Command::Plot(_) => cmd_plot(&cfg),
        Command::Check(_) => cmd_check(&cfg),
        Command::Remainder(_) => cmd_remainder(&cfg),
        Command::Teixeira(_) => cmd_teixeira(&cfg),
    }
}

fn output(cfg: &RunConfig) -> Result<Box<dyn Write>, CliError> {
    Ok(match &cfg.out {
        Some(path) => Box::new(File::create(path)?),
        None => Box::new(io::stdout().lock()),
    })
}

fn emit_json(cfg: &RunConfig, value: &Value) -> Result<(), CliError> {
    let mut out = output(cfg)?;
    let text = serde_json::to_string_pretty(value).map_err(|e| CliError::other(e.to_string()))?;
    writeln!(out, "{text}")?;
    out.flush()?;
    Ok(())
}

fn parse_expr(text: &str, cfg: &RunConfig) -> Result<Expr, CliError> {
    let params: Vec<(&str, &str)> = cfg
        .params
        .iter()
        .map(|(n, v)| (n.as_str(), v.as_str()))
        .collect();
    Ok(parse_with_params(text, &params)?)
}

fn expressions(cfg: &RunConfig) -> Result<(Expr, Expr), CliError> {
    let f = cfg
        .f
        .as_deref()
        .ok_or_else(|| CliError::parse("missing --f".into()))?;
    let s = cfg
        .s
        .as_deref()
        .ok_or_else(|| CliError::parse("missing --s".into()))?;
    Ok((parse_expr(f, cfg)?, parse_expr(s, cfg)?))
}

fn pair(c: Complex64) -> [f64; 2] {
    [c.re, c.im]
}

fn to_value<T: serde::Serialize>(v: &T) -> Result<Value, CliError> {
    serde_json::to_value(v).map_err(|e| CliError::other(e.to_string()))
}

fn object(value: Value) -> Map<String, Value> {
    match value {
        Value::Object(map) => map,
        _ => unreachable!("reports serialize to objects"),
    }
}

fn expansion(cfg: &RunConfig, f: Expr, s: Expr) -> Result<SeriesExpansion, CliError> {
    let req = ExpansionRequest::new(f, s, cfg.z0, cfg.order).with_tolerances(cfg.tolerances);
    Ok(expand(&req)?)
}

fn cmd_expand(cfg: &RunConfig) -> Result<(), CliError> {
    let (f, s) = expressions(cfg)?;
    let (exp, route) = match &cfg.inverse {
        Some(g) => {
            let g = parse_expr(g, cfg)?;
            let e = inverse_composite_expand(&f, &s, &g, cfg.z0, cfg.order)?;
            let coeffs = e.coefficients().to_vec();
            (
                e.with_coefficients(coeffs, cfg.tolerances.termination),
                "inverse",
            )
        }
        None => (expansion(cfg, f, s)?, "direct"),
    };
    let mut report = object(to_value(&exp)?);
    report.insert("route".into(), json!(route));
    report.insert("order".into(), json!(exp.order()));
    report.insert(
        "magnitudes".into(),
        json!(exp
            .coefficients()
            .iter()
            .map(|c| c.norm())
            .collect::<Vec<_>>()),
    );
    report.insert("terminated".into(), json!(exp.terminated_at().is_some()));
    emit_json(cfg, &Value::Object(report))
}

/// Real value of `v`, or `None` when it has a visible imaginary part.
fn real(v: Complex64) -> Option<f64> {
    (v.im.abs() <= 1e-12 * v.re.abs().max(1.0)).then_some(v.re)
}

fn cell(v: Option<f64>) -> String {
    v.map(|x| format!("{x:?}")).unwrap_or_default()
}

fn cmd_plot(cfg: &RunConfig) -> Result<(), CliError> {
    if cfg.z0.im != 0.0 {
        return Err(CliError::other("plot takes a real expansion point".into()));
    }
    let (f, s) = expressions(cfg)?;
    let exp = expansion(cfg, f.clone(), s)?;
    let mut writer = csv::Writer::from_writer(output(cfg)?);
    let mut header = vec!["z".to_string(), "f".to_string()];
    header.extend((0..=cfg.order).map(|k| format!("S{k}")));
    writer.write_record(&header)?;
    for x in cfg.grid.points() {
        let z = Complex64::new(x, 0.0);
        let mut row = vec![cell(Some(x)), cell(evaluate(&f, z).ok().and_then(real))];
        match exp.partial_sums(z) {
            Ok(sums) => row.extend(sums.into_iter().map(|v| cell(real(v)))),
            Err(_) => row.extend((0..=cfg.order).map(|_| String::new())),
        }
        writer.write_record(&row)?;
    }
    writer.flush()?;
    Ok(())
}

struct Comparison {
    report: Value,
    deviation: f64,
}

fn compare(
    f: Expr,
    s: Expr,
    z0: Complex64,
    order: usize,
    tolerances: Tolerances,
    corrupt: Option<usize>,
) -> Result<Comparison, CliError> {
    let req = ExpansionRequest::new(f.clone(), s.clone(), z0, order).with_tolerances(tolerances);
    let mut engine = expand(&req)?;
    if let Some(n) = corrupt.filter(|&n| n <= order) {
        let mut coeffs = engine.coefficients().to_vec();
        coeffs[n] = coeffs[n] * 1.001 + 1e-3;
        engine = engine.with_coefficients(coeffs, tolerances.termination);
    }
    let oracle = oracle_coefficients(&f, &s, z0, order)?;
    let engine_c = engine.coefficients();
    let floor = tolerances.termination * engine_c[0].norm().max(1.0);
    let deviations: Vec<f64> = engine_c
        .iter()
        .zip(&oracle)
        .map(|(e, o)| {
            if e.norm() < floor && o.norm() < floor {
                0.0
            } else {
                (e - o).norm() / e.norm().max(o.norm())
            }
        })
        .collect();
    let deviation = deviations.iter().copied().fold(0.0, f64::max);
    let report = json!({
        "f": funcseries::expr::format(&f),
        "s": funcseries::expr::format(&s),
        "z0": pair(z0),
        "order": order,
        "engine": engine_c.iter().copied().map(pair).collect::<Vec<_>>(),
        "oracle": oracle.iter().copied().map(pair).collect::<Vec<_>>(),
        "relative_deviations": deviations,
        "max_relative_deviation": deviation,
        "engine_terminated_at": engine.terminated_at(),
        "oracle_terminated_at": detect_termination(&oracle, tolerances.termination),
        "agree": deviation < CHECK_TOLERANCE,
    });
    Ok(Comparison { report, deviation })
}

fn cmd_check(cfg: &RunConfig) -> Result<(), CliError> {
    let (report, deviation) = if cfg.catalog.as_deref() == Some("all") {
        let mut pairs = Vec::new();
        let mut worst = 0.0f64;
        for pair in CATALOG {
            let c = compare(
                pair.f_expr(),
                pair.s_expr(),
                pair.z0(),
                cfg.order,
                cfg.tolerances,
                None,
            )?;
            worst = worst.max(c.deviation);
            let mut entry = object(c.report);
            entry.insert("name".into(), json!(pair.name));
            pairs.push(Value::Object(entry));
        }
        let report = json!({
            "pairs": pairs,
            "max_relative_deviation": worst,
            "agree": worst < CHECK_TOLERANCE,
        });
        (report, worst)
    } else {
        let (f, s) = expressions(cfg)?;
        let c = compare(
            f,
            s,
            cfg.z0,
            cfg.order,
            cfg.tolerances,
            cfg.corrupt_coefficient,
        )?;
        (c.report, c.deviation)
    };
    emit_json(cfg, &report)?;
    if deviation < CHECK_TOLERANCE {
        Ok(())
    } else {
        Err(CliError::disagreement(format!(
            "max relative deviation {deviation:e} exceeds {CHECK_TOLERANCE:e}"
        )))
    }
}

fn cmd_remainder(cfg: &RunConfig) -> Result<(), CliError> {
    let at = cfg
        .at
        .ok_or_else(|| CliError::parse("missing --at".into()))?;
    let (f, s) = expressions(cfg)?;
    let exp = expansion(cfg, f, s)?;
    let n = cfg.order;
    let measured = measured_error(&exp, at, n)?;
    let mut notes = Vec::new();
    let lagrange = if at.im == 0.0 && cfg.z0.im == 0.0 {
        match lagrange_bound(&exp, at.re, n, DEFAULT_SAMPLES) {
            Ok(b) => Some(b),
            Err(e @ (Error::NonMonotoneComposite { .. } | Error::InvalidArgument(_))) => {
                notes.push(format!("real bound unavailable: {e}"));
                None
            }
            Err(e) => return Err(e.into()),
        }
    } else {
        notes.push("real bound needs real z0 and evaluation point".to_string());
        None
    };
    let theta = complex_bound(&exp, at, n)?;
    let via_inverse = match &cfg.inverse {
        Some(g) => Some(complex_bound_via_inverse(
            &exp,
            at,
            n,
            &parse_expr(g, cfg)?,
        )?),
        None => None,
    };
    let report = json!({
        "f": funcseries::expr::format(exp.f()),
        "s": funcseries::expr::format(exp.s()),
        "z0": pair(exp.z0()),
        "order": n,
        "at": pair(at),
        "measured": to_value(&measured)?,
        "lagrange": to_value(&lagrange)?,
        "complex_theta": to_value(&theta)?,
        "complex_theta_via_inverse": to_value(&via_inverse)?,
        "measured_within_lagrange": lagrange.as_ref().map(|b| measured.bound <= b.bound),
        "notes": notes,
    });
    emit_json(cfg, &report)
}

fn cmd_teixeira(cfg: &RunConfig) -> Result<(), CliError> {
    let (f, theta) = expressions(cfg)?;
    let a = cfg.z0;
    let spec =
        |c: &crate::config::Circle| ContourSpec::new(c.center, c.radius, cfg.quadrature_points);
    let outer = match cfg.contours.first() {
        Some(c) => spec(c)?,
        None => ContourSpec::new(a, 1.0, cfg.quadrature_points)?,
    };
    let inner = cfg.contours.get(1).map(spec).transpose()?;
    let tx = TeixeiraExpansion::build(&f, &theta, a, outer, inner, cfg.order)?;
    let mut report = object(to_value(&tx)?);
    report.insert("order".into(), json!(tx.order()));
    if let Some(x) = cfg.at {
        let sum = tx.partial_sum(x, cfg.order)?;
        let exact = evaluate(&f, x)?;
        report.insert(
            "evaluation".into(),
            json!({
                "x": pair(x),
                "partial_sum": pair(sum),
                "f": pair(exact),
                "abs_error": (sum - exact).norm(),
            }),
        );
    }
    emit_json(cfg, &Value::Object(report))
}
