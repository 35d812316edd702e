//! Functional power series of `f` in powers of `s - s(z0)`.

use num_complex::Complex64;
use serde::Serialize;

use crate::composite::OperatorChain;
use crate::expr::{differentiate, evaluate, format, Expr};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Tail coefficients below `termination * max(1, |c_0|)` count as zero.
    pub termination: f64,
    /// `|s'(z0)|` at or below this is rejected.
    pub derivative_zero: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            termination: 1e-10,
            derivative_zero: 1e-12,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExpansionRequest {
    pub f: Expr,
    pub s: Expr,
    pub z0: Complex64,
    pub order: usize,
    pub tolerances: Tolerances,
}

impl ExpansionRequest {
    pub fn new(f: Expr, s: Expr, z0: Complex64, order: usize) -> Self {
        ExpansionRequest {
            f,
            s,
            z0,
            order,
            tolerances: Tolerances::default(),
        }
    }

    pub fn with_tolerances(mut self, tolerances: Tolerances) -> Self {
        self.tolerances = tolerances;
        self
    }
}

/// Coefficients `c_0..c_N` with `f(z) ≈ sum c_n (s(z) - s0)^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesExpansion {
    f: Expr,
    s: Expr,
    z0: Complex64,
    s0: Complex64,
    coefficients: Vec<Complex64>,
    terminated_at: Option<usize>,
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

fn at_point(what: &str, err: Error) -> Error {
    match err {
        Error::SingularEvaluation(msg) => Error::SingularAtExpansionPoint(format!("{what}: {msg}")),
        other => other,
    }
}

/// Builds the functional power series of `req.f` in terms of `req.s`.
///
/// Fails when `s'(z0)` vanishes, when `s(z0)` is not finite, or when `f` or
/// any of the iterated derivatives cannot be evaluated at `z0`.
pub fn expand(req: &ExpansionRequest) -> Result<SeriesExpansion> {
    validate_tolerances(&req.tolerances)?;
    let mut chain = match OperatorChain::new(&req.f, &req.s) {
        Err(Error::ConstantComposite) => {
            return Err(Error::CompositeDerivativeZero {
                value: 0.0,
                tolerance: req.tolerances.derivative_zero,
            })
        }
        other => other?,
    };
    let s0 = evaluate(&req.s, req.z0).map_err(|e| at_point("s(z0)", e))?;
    let ds = differentiate(&req.s, chain.variable());
    let ds0 = evaluate(&ds, req.z0).map_err(|e| at_point("s'(z0)", e))?;
    if ds0.norm() <= req.tolerances.derivative_zero {
        return Err(Error::CompositeDerivativeZero {
            value: ds0.norm(),
            tolerance: req.tolerances.derivative_zero,
        });
    }
    let mut coefficients = Vec::with_capacity(req.order + 1);
    for n in 0..=req.order {
        let entry = chain.entry(n);
        let what = if n == 0 {
            "f(z0)".to_string()
        } else {
            format!("order-{n} composite derivative at z0")
        };
        let value = evaluate(entry, req.z0).map_err(|e| at_point(&what, e))?;
        coefficients.push(value / factorial(n));
    }
    let terminated_at = detect_termination(&coefficients, req.tolerances.termination);
    Ok(SeriesExpansion {
        f: req.f.clone(),
        s: req.s.clone(),
        z0: req.z0,
        s0,
        coefficients,
        terminated_at,
    })
}

fn validate_tolerances(t: &Tolerances) -> Result<()> {
    if !(t.termination > 0.0 && t.derivative_zero > 0.0) {
        return Err(Error::InvalidArgument("tolerances must be positive".into()));
    }
    Ok(())
}

/// Smallest `m` such that every coefficient past `m` is below
/// `tol * max(1, |c_0|)`, provided at least three such tail coefficients
/// exist. Needs at least four coefficients.
pub fn detect_termination(coefficients: &[Complex64], tol: f64) -> Option<usize> {
    if coefficients.len() < 4 {
        return None;
    }
    let threshold = tol * coefficients[0].norm().max(1.0);
    let last_significant = coefficients
        .iter()
        .rposition(|c| c.norm() >= threshold)
        .unwrap_or(0);
    let tail = coefficients.len() - 1 - last_significant;
    (tail >= 3).then_some(last_significant)
}

/// Coefficients of `f` expanded in terms of its own power `f^beta`:
/// `f = f(z0) sum a_n ((f/f(z0))^beta - 1)^n` with `a_0 = 1` and
/// `a_n = (1 - beta)(1 - 2 beta)...(1 - (n-1) beta) / (n! beta^n)`.
///
/// The sequence is exactly zero from `n = 1/beta + 1` on when `1/beta` is a
/// positive integer.
pub fn power_expansion_coefficients(beta: f64, order: usize) -> Result<Vec<f64>> {
    if beta == 0.0 || !beta.is_finite() {
        return Err(Error::InvalidArgument(
            "beta must be finite and nonzero".into(),
        ));
    }
    let mut out = Vec::with_capacity(order + 1);
    out.push(1.0);
    let mut product = 1.0;
    for n in 1..=order {
        if n >= 2 {
            product *= 1.0 - (n - 1) as f64 * beta;
        }
        out.push(product / (factorial(n) * beta.powi(n as i32)));
    }
    Ok(out)
}

/// Offsets at which a user-supplied inverse is checked around `z0`.
const INVERSE_PROBE: f64 = 1e-2;
const INVERSE_TOLERANCE: f64 = 1e-8;

/// Expansion through an explicit inverse `g = s^{-1}`: the Taylor
/// coefficients of `h(s) = f(g(s))` at `s(z0)`.
///
/// `g` is checked to invert `s` at `z0` and at four nearby points.
pub fn inverse_composite_expand(
    f: &Expr,
    s: &Expr,
    g: &Expr,
    z0: Complex64,
    order: usize,
) -> Result<SeriesExpansion> {
    let z = crate::composite::shared_variable(f, s)?;
    let g_var = g
        .variable()?
        .ok_or_else(|| Error::InverseMismatch("the inverse is constant".into()))?;
    let s0 = evaluate(s, z0).map_err(|e| at_point("s(z0)", e))?;
    let probes = [
        Complex64::new(0.0, 0.0),
        Complex64::new(INVERSE_PROBE, 0.0),
        Complex64::new(-INVERSE_PROBE, 0.0),
        Complex64::new(0.0, INVERSE_PROBE),
        Complex64::new(0.0, -INVERSE_PROBE),
    ];
    for dz in probes {
        let p = z0 + dz;
        let back = evaluate(s, p)
            .and_then(|sp| evaluate(g, sp))
            .map_err(|e| Error::InverseMismatch(format!("g(s({p})) is not evaluable: {e}")))?;
        if (back - p).norm() > INVERSE_TOLERANCE * p.norm().max(1.0) {
            return Err(Error::InverseMismatch(format!("g(s({p})) = {back}")));
        }
    }
    let h = f.substitute(z, g);
    let mut derivative = h;
    let mut coefficients = Vec::with_capacity(order + 1);
    for n in 0..=order {
        if n > 0 {
            derivative = differentiate(&derivative, g_var);
        }
        let value = evaluate(&derivative, s0)
            .map_err(|e| at_point(&format!("order-{n} derivative of f(g(s))"), e))?;
        coefficients.push(value / factorial(n));
    }
    let terminated_at = detect_termination(&coefficients, Tolerances::default().termination);
    Ok(SeriesExpansion {
        f: f.clone(),
        s: s.clone(),
        z0,
        s0,
        coefficients,
        terminated_at,
    })
}

impl SeriesExpansion {
    pub fn f(&self) -> &Expr {
        &self.f
    }

    pub fn s(&self) -> &Expr {
        &self.s
    }

    pub fn z0(&self) -> Complex64 {
        self.z0
    }

    pub fn s0(&self) -> Complex64 {
        self.s0
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn order(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn terminated_at(&self) -> Option<usize> {
        self.terminated_at
    }

    /// Copy with the coefficient list replaced; termination is re-detected.
    pub fn with_coefficients(&self, coefficients: Vec<Complex64>, tol: f64) -> Self {
        SeriesExpansion {
            terminated_at: detect_termination(&coefficients, tol),
            coefficients,
            ..self.clone()
        }
    }

    /// `sum_{n <= upto} c_n (s(z) - s0)^n`.
    pub fn partial_sum(&self, z: Complex64, upto: usize) -> Result<Complex64> {
        if upto > self.order() {
            return Err(Error::InvalidArgument(format!(
                "partial sum up to {upto} requested from an order-{} expansion",
                self.order()
            )));
        }
        let u = evaluate(&self.s, z)? - self.s0;
        Ok(self.coefficients[..=upto]
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * u + c))
    }

    /// Every partial sum `S_0..S_N` at `z`.
    pub fn partial_sums(&self, z: Complex64) -> Result<Vec<Complex64>> {
        let u = evaluate(&self.s, z)? - self.s0;
        let mut power = Complex64::new(1.0, 0.0);
        let mut acc = Complex64::new(0.0, 0.0);
        Ok(self
            .coefficients
            .iter()
            .map(|&c| {
                acc += c * power;
                power *= u;
                acc
            })
            .collect())
    }
}

pub(crate) fn pair(c: Complex64) -> [f64; 2] {
    [c.re, c.im]
}

pub(crate) fn serialize_complex<S: serde::Serializer>(
    c: &Complex64,
    serializer: S,
) -> Result<S::Ok, S::Error> {
    pair(*c).serialize(serializer)
}

#[derive(Serialize)]
struct SeriesExpansionJson {
    f: String,
    s: String,
    z0: [f64; 2],
    s0: [f64; 2],
    coefficients: Vec<[f64; 2]>,
    terminated_at: Option<usize>,
}

impl Serialize for SeriesExpansion {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        SeriesExpansionJson {
            f: format(&self.f),
            s: format(&self.s),
            z0: pair(self.z0),
            s0: pair(self.s0),
            coefficients: self.coefficients.iter().copied().map(pair).collect(),
            terminated_at: self.terminated_at,
        }
        .serialize(serializer)
    }
}
