//! Truncation error of a functional power series.
//!
//! Three estimates are offered for `R_N = f(z) - S_N(z)`:
//!
//! * `measured`: the difference itself, by direct evaluation;
//! * `real-lagrange`: `|Δs|^{N+1}/(N+1)! · max |D_s^{N+1} f|`, the maximum
//!   taken over a sampled real segment `[z0, z]` on which `s` is monotone;
//! * `complex-theta`: `|Δs|^{N+1}/(N+1)! · |[D_s^{N+1} f]_{z0}|`, the
//!   supremum over the unknown factor `θ` with `|θ - 1| < 1`.
//!
//! Neither bound is rigorous: the first samples an unknown intermediate
//! point, the second is a mean-value form whose `θ` is not computable.

use num_complex::Complex64;
use serde::Serialize;

use crate::composite::OperatorChain;
use crate::expr::{differentiate, evaluate, Expr};
use crate::series::SeriesExpansion;
use crate::{Error, Result};

pub const DEFAULT_SAMPLES: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RemainderKind {
    RealLagrange,
    ComplexTheta,
    Measured,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RemainderEstimate {
    pub order: usize,
    pub bound: f64,
    pub kind: RemainderKind,
    pub samples: usize,
    #[serde(serialize_with = "crate::series::serialize_complex")]
    pub z: Complex64,
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

fn check_order(exp: &SeriesExpansion, order: usize) -> Result<()> {
    if order > exp.order() {
        return Err(Error::InvalidArgument(format!(
            "order {order} exceeds the expansion order {}",
            exp.order()
        )));
    }
    Ok(())
}

/// `|f(z) - S_N(z)|`.
pub fn measured_error(
    exp: &SeriesExpansion,
    z: Complex64,
    order: usize,
) -> Result<RemainderEstimate> {
    check_order(exp, order)?;
    let exact = evaluate(exp.f(), z)?;
    let partial = exp.partial_sum(z, order)?;
    Ok(RemainderEstimate {
        order,
        bound: (exact - partial).norm(),
        kind: RemainderKind::Measured,
        samples: 1,
        z,
    })
}

fn next_derivative(exp: &SeriesExpansion, order: usize) -> Result<(OperatorChain, Expr)> {
    let mut chain = OperatorChain::new(exp.f(), exp.s())?;
    let entry = chain.entry(order + 1).clone();
    Ok((chain, entry))
}

/// Lagrange-style bound on a real segment.
///
/// `samples` points spaced evenly on `[z0, z]` (endpoints included) stand
/// in for the unknown intermediate point. `s'` must keep one sign there.
pub fn lagrange_bound(
    exp: &SeriesExpansion,
    z: f64,
    order: usize,
    samples: usize,
) -> Result<RemainderEstimate> {
    check_order(exp, order)?;
    if exp.z0().im != 0.0 {
        return Err(Error::InvalidArgument(
            "real bound needs a real expansion point".into(),
        ));
    }
    if samples < 2 {
        return Err(Error::InvalidArgument(
            "at least two samples are needed".into(),
        ));
    }
    let z0 = exp.z0().re;
    let (chain, entry) = next_derivative(exp, order)?;
    let ds = differentiate(exp.s(), chain.variable());

    let mut direction = 0.0f64;
    let mut max_derivative = 0.0f64;
    for i in 0..samples {
        let t = z0 + (z - z0) * i as f64 / (samples - 1) as f64;
        let at = Complex64::new(t, 0.0);
        let slope = evaluate(&ds, at)?;
        if slope.im.abs() > 1e-12 * slope.re.abs().max(1e-300) {
            return Err(Error::InvalidArgument(format!(
                "s is not real-valued near z = {t}"
            )));
        }
        let sign = slope.re.signum();
        if slope.re != 0.0 {
            if direction != 0.0 && sign != direction {
                return Err(Error::NonMonotoneComposite { at: t });
            }
            direction = sign;
        }
        max_derivative = max_derivative.max(evaluate(&entry, at)?.norm());
    }
    let delta = (evaluate(exp.s(), Complex64::new(z, 0.0))? - exp.s0()).norm();
    Ok(RemainderEstimate {
        order,
        bound: delta.powi(order as i32 + 1) / factorial(order + 1) * max_derivative,
        kind: RemainderKind::RealLagrange,
        samples,
        z: Complex64::new(z, 0.0),
    })
}

fn theta_bound(
    exp: &SeriesExpansion,
    z: Complex64,
    order: usize,
    derivative_at: Complex64,
) -> Result<RemainderEstimate> {
    let (_, entry) = next_derivative(exp, order)?;
    let derivative = evaluate(&entry, derivative_at)?.norm();
    let delta = (evaluate(exp.s(), z)? - exp.s0()).norm();
    Ok(RemainderEstimate {
        order,
        bound: delta.powi(order as i32 + 1) / factorial(order + 1) * derivative,
        kind: RemainderKind::ComplexTheta,
        samples: 1,
        z,
    })
}

/// Complex mean-value bound with the `θ` factor at its supremum.
pub fn complex_bound(
    exp: &SeriesExpansion,
    z: Complex64,
    order: usize,
) -> Result<RemainderEstimate> {
    check_order(exp, order)?;
    theta_bound(exp, z, order, exp.z0())
}

/// The same bound with the derivative evaluated at `g(s(z0))` for a
/// user-supplied inverse `g` of `s`. Agrees with [`complex_bound`] whenever
/// `g(s(z0))` round-trips to `z0`, which is checked.
pub fn complex_bound_via_inverse(
    exp: &SeriesExpansion,
    z: Complex64,
    order: usize,
    g: &Expr,
) -> Result<RemainderEstimate> {
    check_order(exp, order)?;
    let back = evaluate(g, exp.s0())?;
    if (back - exp.z0()).norm() > 1e-8 * exp.z0().norm().max(1.0) {
        return Err(Error::InverseMismatch(format!("g(s(z0)) = {back}")));
    }
    theta_bound(exp, z, order, back)
}
