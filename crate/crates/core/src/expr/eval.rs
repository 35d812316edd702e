use num_complex::Complex64;

use super::{Expr, Func};
use crate::{Error, Result};

/// Denominators smaller than this in modulus are treated as poles.
pub const POLE_THRESHOLD: f64 = 1e-300;

/// Evaluates `e` with every variable set to `at`.
///
/// Logarithms, square roots and non-integer powers take the principal
/// branch. Poles and non-finite intermediate values are reported as
/// [`Error::SingularEvaluation`].
pub fn evaluate(e: &Expr, at: Complex64) -> Result<Complex64> {
    if !is_finite(at) {
        return Err(Error::SingularEvaluation(format!(
            "non-finite argument {at}"
        )));
    }
    eval(e, at)
}

fn is_finite(v: Complex64) -> bool {
    v.re.is_finite() && v.im.is_finite()
}

// signed zeros are folded to +0 so that values on a branch cut take the
// principal (upper) side
fn check(v: Complex64, what: impl FnOnce() -> String) -> Result<Complex64> {
    if is_finite(v) {
        Ok(Complex64::new(v.re + 0.0, v.im + 0.0))
    } else {
        Err(Error::SingularEvaluation(what()))
    }
}

fn reciprocal(den: Complex64) -> Result<Complex64> {
    if den.norm() < POLE_THRESHOLD {
        return Err(Error::SingularEvaluation("division by zero".into()));
    }
    check(den.inv(), || "reciprocal overflow".into())
}

fn eval(e: &Expr, at: Complex64) -> Result<Complex64> {
    let v = match e {
        Expr::Const(c) => c.to_complex(),
        Expr::Var(_) => at,
        Expr::Add(xs) => {
            let mut acc = Complex64::new(0.0, 0.0);
            for x in xs {
                acc += eval(x, at)?;
            }
            acc
        }
        Expr::Mul(xs) => {
            let mut acc = Complex64::new(1.0, 0.0);
            for x in xs {
                acc *= eval(x, at)?;
            }
            acc
        }
        Expr::Neg(x) => -eval(x, at)?,
        Expr::Div(a, b) => eval(a, at)? * reciprocal(eval(b, at)?)?,
        Expr::Pow(base, exponent) => power(eval(base, at)?, exponent, at)?,
        Expr::Func(f, x) => {
            let arg = eval(x, at)?;
            match f {
                Func::Log if arg.norm() < POLE_THRESHOLD => {
                    return Err(Error::SingularEvaluation("logarithm of zero".into()))
                }
                Func::Tan if arg.cos().norm() < POLE_THRESHOLD => {
                    return Err(Error::SingularEvaluation("tangent pole".into()))
                }
                _ => f.apply(arg),
            }
        }
    };
    check(v, || format!("non-finite value in `{e}`"))
}

fn power(base: Complex64, exponent: &Expr, at: Complex64) -> Result<Complex64> {
    if let Some(n) = exponent.as_const().and_then(|c| c.as_integer()) {
        if let Ok(n) = i32::try_from(n) {
            return if n < 0 {
                Ok(reciprocal(base)?.powi(-n))
            } else {
                Ok(base.powi(n))
            };
        }
    }
    let exp = eval(exponent, at)?;
    if base.norm() < POLE_THRESHOLD {
        if exp.re > 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        return Err(Error::SingularEvaluation(
            "zero raised to a non-positive power".into(),
        ));
    }
    Ok((exp * base.ln()).exp())
}
