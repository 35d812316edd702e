//! Two-sided expansion of `f` in powers of `θ` on an annulus, with the
//! coefficients computed by trapezoidal quadrature on circles.
//!
//! ```text
//! f(x) = Σ_{n≥0} A_n θ(x)^n + Σ_{n≥1} B_n θ(x)^{-n}
//! A_n  =  1/(2πi n) ∮_{c1} f'(z) θ(z)^{-n} dz
//! B_n  = -1/(2πi n) ∮_{c2} f'(z) θ(z)^n dz
//! ```
//!
//! `A_0` is taken as `1/(2πi) ∮_{c1} f θ'/θ dz`, the `n = 0` term of the
//! Cauchy kernel before integrating by parts. It equals `f(a)` whenever `f`
//! is analytic inside `c1`, and stays finite when `f` has a pole at `a`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::composite::shared_variable;
use crate::expr::{differentiate, evaluate, format, Expr};
use crate::{Error, Result};

pub const DEFAULT_POINTS: usize = 512;
pub const VALIDITY_SAMPLES: usize = 64;

/// A circle traversed counter-clockwise.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ContourSpec {
    #[serde(serialize_with = "crate::series::serialize_complex")]
    pub center: Complex64,
    pub radius: f64,
    pub points: usize,
}

impl ContourSpec {
    pub fn new(center: Complex64, radius: f64, points: usize) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "contour radius must be positive, got {radius}"
            )));
        }
        if points < 16 || !points.is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "quadrature points must be a power of two >= 16, got {points}"
            )));
        }
        Ok(ContourSpec {
            center,
            radius,
            points,
        })
    }

    pub fn circle(center: Complex64, radius: f64) -> Result<Self> {
        Self::new(center, radius, DEFAULT_POINTS)
    }

    pub fn with_points(self, points: usize) -> Result<Self> {
        Self::new(self.center, self.radius, points)
    }

    fn point(&self, k: usize, count: usize) -> Complex64 {
        let phi = 2.0 * PI * k as f64 / count as f64;
        self.center + Complex64::from_polar(self.radius, phi)
    }

    pub fn nodes(&self) -> impl Iterator<Item = Complex64> + '_ {
        (0..self.points).map(move |k| self.point(k, self.points))
    }

    /// `1/(2πi) ∮ g dz`, given `g` at every node. With `z = c + r e^{iφ}`,
    /// `dz = i (z - c) dφ`, so the rule reduces to a plain average of
    /// `g(z)(z - c)`.
    fn cauchy_average(&self, values: &[Complex64]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (z, g) in self.nodes().zip(values) {
            acc += g * (z - self.center);
        }
        acc / self.points as f64
    }
}

fn eval_at_node(e: &Expr, z: Complex64, node: usize) -> Result<Complex64> {
    match evaluate(e, z) {
        Ok(v) => Ok(v),
        Err(_) => Err(Error::QuadratureSingularity { node }),
    }
}

fn finite(v: Complex64, node: usize) -> Result<Complex64> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::QuadratureSingularity { node })
    }
}

struct NodeData {
    df: Vec<Complex64>,
    theta: Vec<Complex64>,
}

fn sample(f: &Expr, theta: &Expr, contour: &ContourSpec) -> Result<NodeData> {
    let var = shared_variable(f, theta)?;
    let df_expr = differentiate(f, var);
    let mut df = Vec::with_capacity(contour.points);
    let mut th = Vec::with_capacity(contour.points);
    for (node, z) in contour.nodes().enumerate() {
        df.push(eval_at_node(&df_expr, z, node)?);
        th.push(eval_at_node(theta, z, node)?);
    }
    Ok(NodeData { df, theta: th })
}

fn check_order(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "coefficient index must be at least 1".into(),
        ));
    }
    Ok(())
}

/// `A_1..=A_n` from one pass over the nodes of `c1`.
fn a_coefficients(data: &NodeData, c1: &ContourSpec, n: usize) -> Result<Vec<Complex64>> {
    let mut out = Vec::with_capacity(n);
    let mut weights: Vec<Complex64> = data.df.clone();
    let inverse: Vec<Complex64> = data
        .theta
        .iter()
        .enumerate()
        .map(|(node, t)| {
            if t.norm() < 1e-300 {
                Err(Error::QuadratureSingularity { node })
            } else {
                finite(t.inv(), node)
            }
        })
        .collect::<Result<_>>()?;
    for k in 1..=n {
        for (node, (w, inv)) in weights.iter_mut().zip(&inverse).enumerate() {
            *w = finite(*w * inv, node)?;
        }
        out.push(c1.cauchy_average(&weights) / k as f64);
    }
    Ok(out)
}

fn b_coefficients(data: &NodeData, c2: &ContourSpec, n: usize) -> Result<Vec<Complex64>> {
    let mut out = Vec::with_capacity(n);
    let mut weights: Vec<Complex64> = data.df.clone();
    for k in 1..=n {
        for (node, (w, t)) in weights.iter_mut().zip(&data.theta).enumerate() {
            *w = finite(*w * t, node)?;
        }
        out.push(-c2.cauchy_average(&weights) / k as f64);
    }
    Ok(out)
}

#[allow(non_snake_case)]
pub fn teixeira_A(f: &Expr, theta: &Expr, c1: &ContourSpec, n: usize) -> Result<Complex64> {
    check_order(n)?;
    let data = sample(f, theta, c1)?;
    Ok(a_coefficients(&data, c1, n)?[n - 1])
}

#[allow(non_snake_case)]
pub fn teixeira_B(f: &Expr, theta: &Expr, c2: &ContourSpec, n: usize) -> Result<Complex64> {
    check_order(n)?;
    let data = sample(f, theta, c2)?;
    Ok(b_coefficients(&data, c2, n)?[n - 1])
}

fn a_zero(f: &Expr, theta: &Expr, c1: &ContourSpec) -> Result<Complex64> {
    let var = shared_variable(f, theta)?;
    let dtheta = differentiate(theta, var);
    let mut values = Vec::with_capacity(c1.points);
    for (node, z) in c1.nodes().enumerate() {
        let t = eval_at_node(theta, z, node)?;
        if t.norm() < 1e-300 {
            return Err(Error::QuadratureSingularity { node });
        }
        let v = eval_at_node(f, z, node)? * eval_at_node(&dtheta, z, node)? / t;
        values.push(finite(v, node)?);
    }
    Ok(c1.cauchy_average(&values))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Validity {
    /// Smallest `|θ|` among the sampled points of the outer circle.
    pub outer_min_abs_theta: f64,
    /// Largest `|θ|` among the sampled points of the inner circle, 0 if none.
    pub inner_max_abs_theta: f64,
}

impl Validity {
    pub fn admits(&self, abs_theta: f64) -> bool {
        abs_theta < self.outer_min_abs_theta && abs_theta > self.inner_max_abs_theta
            || abs_theta == 0.0 && self.inner_max_abs_theta == 0.0
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Contours {
    pub outer: ContourSpec,
    pub inner: Option<ContourSpec>,
}

#[derive(Clone, Debug)]
pub struct TeixeiraExpansion {
    f: Expr,
    theta: Expr,
    a: Complex64,
    a_coeffs: Vec<Complex64>,
    b_coeffs: Vec<Complex64>,
    contours: Contours,
    validity: Validity,
}

fn sampled_abs_theta(theta: &Expr, contour: &ContourSpec) -> Result<Vec<f64>> {
    (0..VALIDITY_SAMPLES)
        .map(|k| {
            let z = contour.point(k, VALIDITY_SAMPLES);
            evaluate(theta, z)
                .map(|t| t.norm())
                .map_err(|_| Error::AnnulusViolation(format!("θ is not evaluable at {z}")))
        })
        .collect()
}

impl TeixeiraExpansion {
    /// Coefficients up to `A_order` and, with an inner circle, `B_order`.
    /// `a` is the simple zero of `θ` enclosed by the outer circle; it is
    /// checked to be a zero but the zero count is trusted.
    pub fn build(
        f: &Expr,
        theta: &Expr,
        a: Complex64,
        outer: ContourSpec,
        inner: Option<ContourSpec>,
        order: usize,
    ) -> Result<Self> {
        shared_variable(f, theta)?;
        let at_zero = evaluate(theta, a)?;
        if at_zero.norm() > 1e-8 {
            return Err(Error::InvalidArgument(format!(
                "θ(a) = {at_zero} is not zero"
            )));
        }
        if (a - outer.center).norm() >= outer.radius {
            return Err(Error::AnnulusViolation(
                "the zero of θ lies outside the outer circle".into(),
            ));
        }

        let mut a_coeffs = vec![a_zero(f, theta, &outer)?];
        if order > 0 {
            a_coeffs.extend(a_coefficients(&sample(f, theta, &outer)?, &outer, order)?);
        }
        let b_coeffs = match &inner {
            Some(c2) if order > 0 => b_coefficients(&sample(f, theta, c2)?, c2, order)?,
            _ => Vec::new(),
        };

        let outer_min = sampled_abs_theta(theta, &outer)?
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        let inner_max = match &inner {
            Some(c2) => sampled_abs_theta(theta, c2)?
                .into_iter()
                .fold(0.0, f64::max),
            None => 0.0,
        };
        if inner.is_some() && inner_max >= outer_min {
            return Err(Error::AnnulusViolation(format!(
                "max |θ| on the inner circle ({inner_max}) reaches min |θ| on the outer ({outer_min})"
            )));
        }

        Ok(TeixeiraExpansion {
            f: f.clone(),
            theta: theta.clone(),
            a,
            a_coeffs,
            b_coeffs,
            contours: Contours { outer, inner },
            validity: Validity {
                outer_min_abs_theta: outer_min,
                inner_max_abs_theta: inner_max,
            },
        })
    }

    pub fn f(&self) -> &Expr {
        &self.f
    }

    pub fn theta(&self) -> &Expr {
        &self.theta
    }

    pub fn zero(&self) -> Complex64 {
        self.a
    }

    #[allow(non_snake_case)]
    pub fn A(&self) -> &[Complex64] {
        &self.a_coeffs
    }

    /// `B_1..`; empty without an inner circle.
    #[allow(non_snake_case)]
    pub fn B(&self) -> &[Complex64] {
        &self.b_coeffs
    }

    pub fn contours(&self) -> &Contours {
        &self.contours
    }

    pub fn validity(&self) -> Validity {
        self.validity
    }

    pub fn order(&self) -> usize {
        self.a_coeffs.len() - 1
    }

    pub fn partial_sum(&self, x: Complex64, order: usize) -> Result<Complex64> {
        if order > self.order() {
            return Err(Error::InvalidArgument(format!(
                "order {order} exceeds the computed order {}",
                self.order()
            )));
        }
        let t = evaluate(&self.theta, x)?;
        if !self.validity.admits(t.norm()) {
            return Err(Error::AnnulusViolation(format!(
                "|θ({x})| = {} outside ({}, {})",
                t.norm(),
                self.validity.inner_max_abs_theta,
                self.validity.outer_min_abs_theta
            )));
        }
        let mut sum = Complex64::new(0.0, 0.0);
        for c in self.a_coeffs[..=order].iter().rev() {
            sum = sum * t + c;
        }
        if !self.b_coeffs.is_empty() {
            let inv = t.inv();
            let mut tail = Complex64::new(0.0, 0.0);
            for c in self.b_coeffs[..order].iter().rev() {
                tail = (tail + c) * inv;
            }
            sum += tail;
        }
        Ok(sum)
    }
}

#[derive(Serialize)]
struct TeixeiraJson<'a> {
    f: String,
    theta: String,
    a: [f64; 2],
    #[serde(rename = "A")]
    a_coeffs: Vec<[f64; 2]>,
    #[serde(rename = "B")]
    b_coeffs: Vec<[f64; 2]>,
    contours: &'a Contours,
    validity: Validity,
}

impl Serialize for TeixeiraExpansion {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        use crate::series::pair;
        TeixeiraJson {
            f: format(&self.f),
            theta: format(&self.theta),
            a: pair(self.a),
            a_coeffs: self.a_coeffs.iter().copied().map(pair).collect(),
            b_coeffs: self.b_coeffs.iter().copied().map(pair).collect(),
            contours: &self.contours,
            validity: self.validity,
        }
        .serialize(serializer)
    }
}
