//! Browser bindings for the demo page in `www/`.
//!
//! Each exported function takes plain strings and numbers and returns a
//! JSON string. The `*_json` functions hold the logic and run natively in
//! tests; the `#[wasm_bindgen]` wrappers only turn errors into JS strings.

use funcseries::catalog::CATALOG;
use funcseries::expr::evaluate;
use funcseries::teixeira::{ContourSpec, TeixeiraExpansion};
use funcseries::{expand, parse, ExpansionRequest, Expr};
use num_complex::Complex64;
use serde::Serialize;
use wasm_bindgen::prelude::*;

fn expr(text: &str, what: &str) -> Result<Expr, String> {
    parse(text).map_err(|e| format!("{what}: {e}"))
}

fn to_json<T: Serialize>(value: &T) -> Result<String, String> {
    serde_json::to_string(value).map_err(|e| e.to_string())
}

/// Expansion of `f` in powers of `s - s(z0)`, serialized as the CLI does.
pub fn coefficients_json(
    f: &str,
    s: &str,
    z0_re: f64,
    z0_im: f64,
    order: usize,
) -> Result<String, String> {
    let req = ExpansionRequest::new(
        expr(f, "f")?,
        expr(s, "s")?,
        Complex64::new(z0_re, z0_im),
        order,
    );
    let e = expand(&req).map_err(|e| e.to_string())?;
    to_json(&e)
}

#[derive(Serialize)]
struct PlotData {
    z: Vec<f64>,
    f: Vec<Option<f64>>,
    /// `partial_sums[k][i]` is `S_k` at `z[i]`.
    partial_sums: Vec<Vec<Option<f64>>>,
}

fn real(v: Complex64) -> Option<f64> {
    (v.im.abs() <= 1e-12 * v.re.abs().max(1.0)).then_some(v.re)
}

/// `f` and `S_0..S_N` on `count` evenly spaced real points.
pub fn plot_json(
    f: &str,
    s: &str,
    z0: f64,
    order: usize,
    start: f64,
    stop: f64,
    count: usize,
) -> Result<String, String> {
    if count < 2 || !start.is_finite() || !stop.is_finite() || start >= stop {
        return Err("need start < stop and at least two points".into());
    }
    let f = expr(f, "f")?;
    let e = expand(&ExpansionRequest::new(
        f.clone(),
        expr(s, "s")?,
        Complex64::new(z0, 0.0),
        order,
    ))
    .map_err(|e| e.to_string())?;
    let mut data = PlotData {
        z: Vec::with_capacity(count),
        f: Vec::with_capacity(count),
        partial_sums: vec![Vec::with_capacity(count); order + 1],
    };
    for i in 0..count {
        let x = start + (stop - start) * i as f64 / (count - 1) as f64;
        let z = Complex64::new(x, 0.0);
        data.z.push(x);
        data.f.push(evaluate(&f, z).ok().and_then(real));
        let sums = e.partial_sums(z).ok();
        for (k, column) in data.partial_sums.iter_mut().enumerate() {
            column.push(sums.as_ref().and_then(|v| real(v[k])));
        }
    }
    to_json(&data)
}

#[derive(Serialize)]
struct TeixeiraReport<'a> {
    expansion: &'a TeixeiraExpansion,
    partial_sum: Option<[f64; 2]>,
    exact: Option<[f64; 2]>,
}

/// Two-sided expansion around the zero `a` of `theta`, outer circle of
/// radius `outer` and, when `inner > 0`, an inner one; both centred on `a`.
/// The sum is evaluated at the real point `x`.
#[allow(clippy::too_many_arguments)]
pub fn teixeira_json(
    f: &str,
    theta: &str,
    a: f64,
    outer: f64,
    inner: f64,
    order: usize,
    points: usize,
    x: f64,
) -> Result<String, String> {
    let centre = Complex64::new(a, 0.0);
    let outer = ContourSpec::new(centre, outer, points).map_err(|e| e.to_string())?;
    let inner = if inner > 0.0 {
        Some(ContourSpec::new(centre, inner, points).map_err(|e| e.to_string())?)
    } else {
        None
    };
    let f = expr(f, "f")?;
    let tx = TeixeiraExpansion::build(&f, &expr(theta, "theta")?, centre, outer, inner, order)
        .map_err(|e| e.to_string())?;
    let at = Complex64::new(x, 0.0);
    let pair = |v: Complex64| [v.re, v.im];
    to_json(&TeixeiraReport {
        expansion: &tx,
        partial_sum: tx.partial_sum(at, order).ok().map(pair),
        exact: evaluate(&f, at).ok().map(pair),
    })
}

#[derive(Serialize)]
struct CatalogEntry {
    name: &'static str,
    f: &'static str,
    s: &'static str,
    z0: f64,
}

pub fn catalog_json() -> String {
    let entries: Vec<CatalogEntry> = CATALOG
        .iter()
        .map(|p| CatalogEntry {
            name: p.name,
            f: p.f,
            s: p.s,
            z0: p.z0,
        })
        .collect();
    serde_json::to_string(&entries).expect("catalog serializes")
}

#[wasm_bindgen]
pub fn coefficients(
    f: &str,
    s: &str,
    z0_re: f64,
    z0_im: f64,
    order: usize,
) -> Result<String, JsValue> {
    coefficients_json(f, s, z0_re, z0_im, order).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn plot_series(
    f: &str,
    s: &str,
    z0: f64,
    order: usize,
    start: f64,
    stop: f64,
    count: usize,
) -> Result<String, JsValue> {
    plot_json(f, s, z0, order, start, stop, count).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn teixeira(
    f: &str,
    theta: &str,
    a: f64,
    outer: f64,
    inner: f64,
    order: usize,
    points: usize,
    x: f64,
) -> Result<String, JsValue> {
    teixeira_json(f, theta, a, outer, inner, order, points, x).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn catalog() -> String {
    catalog_json()
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;

    fn value(text: &str) -> Value {
        serde_json::from_str(text).unwrap()
    }

    #[test]
    fn sine_case() {
        let v = value(&coefficients_json("1/(1+z)", "sin(z)", 0.0, 0.0, 3).unwrap());
        let c3 = v["coefficients"][3][0].as_f64().unwrap();
        assert!((c3 + 7.0 / 6.0).abs() < 1e-12);
        assert!(coefficients_json("1/(1+z", "sin(z)", 0.0, 0.0, 3)
            .unwrap_err()
            .starts_with("f:"));
        assert!(coefficients_json("exp(z)", "z^2", 0.0, 0.0, 3).is_err());
    }

    #[test]
    fn plot_columns() {
        let v = value(&plot_json("1/(1+z)", "sin(z)", 0.0, 3, -1.0, 1.0, 5).unwrap());
        assert_eq!(v["z"].as_array().unwrap().len(), 5);
        assert!(v["f"][0].is_null());
        assert_eq!(v["partial_sums"].as_array().unwrap().len(), 4);
        assert_eq!(v["partial_sums"][0][2], 1.0);
        assert!(plot_json("z", "z", 0.0, 1, 1.0, 0.0, 5).is_err());
    }

    #[test]
    fn laurent_demo() {
        let v = value(&teixeira_json("1/z + exp(z)", "z", 0.0, 2.0, 0.5, 12, 512, 1.0).unwrap());
        let b1 = v["expansion"]["B"][0][0].as_f64().unwrap();
        assert!((b1 - 1.0).abs() < 1e-7);
        let sum = v["partial_sum"][0].as_f64().unwrap();
        assert!((sum - (1.0 + 1f64.exp())).abs() < 1e-6);
        let outside = value(&teixeira_json("exp(z)", "z", 0.0, 1.0, 0.0, 4, 64, 3.0).unwrap());
        assert!(outside["partial_sum"].is_null());
    }

    #[test]
    fn catalog_lists_pairs() {
        let v = value(&catalog_json());
        assert_eq!(v.as_array().unwrap().len(), CATALOG.len());
        assert_eq!(v[0]["name"], "rational-in-sine");
    }
}
