//! Independent check of functional-series coefficients.
//!
//! Both `f` and `s` are turned into truncated Taylor series at `z0` by
//! recursing over the expression tree with jet arithmetic (no symbolic
//! differentiation). With `u = s(z0 + t) - s(z0)`, the identity
//! `f(z0 + t) = sum c_n u^n` is lower triangular in powers of `t` because
//! `u^n` starts at `t^n`, so the `c_n` follow by forward substitution.

use num_complex::Complex64;

use crate::expr::{Expr, Func};
use crate::{Error, Result};

/// Coefficients `a_0..a_N` of a power series in `t`, truncated at `t^N`.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries {
    coeffs: Vec<Complex64>,
}

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

impl TruncatedSeries {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        assert!(!coeffs.is_empty(), "a truncated series needs at least a_0");
        TruncatedSeries { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn constant(value: Complex64, order: usize) -> Self {
        let mut coeffs = vec![zero(); order + 1];
        coeffs[0] = value;
        TruncatedSeries { coeffs }
    }

    /// The identity `z0 + t`.
    pub fn variable(z0: Complex64, order: usize) -> Self {
        let mut s = Self::constant(z0, order);
        if order >= 1 {
            s.coeffs[1] = Complex64::new(1.0, 0.0);
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn constant_term(&self) -> Complex64 {
        self.coeffs[0]
    }

    fn same_order(&self, other: &Self) -> usize {
        self.order().min(other.order())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.same_order(other);
        TruncatedSeries {
            coeffs: (0..=n).map(|k| self.coeffs[k] + other.coeffs[k]).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(Complex64::new(-1.0, 0.0))
    }

    pub fn scale(&self, by: Complex64) -> Self {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|&c| c * by).collect(),
        }
    }

    /// Series with its constant term removed.
    pub fn without_constant(&self) -> Self {
        let mut out = self.clone();
        out.coeffs[0] = zero();
        out
    }

    /// Cauchy product, truncated.
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.same_order(other);
        let coeffs = (0..=n)
            .map(|k| (0..=k).map(|j| self.coeffs[j] * other.coeffs[k - j]).sum())
            .collect();
        TruncatedSeries { coeffs }
    }

    /// Long division `self / other`.
    pub fn div(&self, other: &Self) -> Result<Self> {
        let b0 = other.coeffs[0];
        if b0.norm() <= 1e-300 {
            return Err(Error::DivisionBySingularSeries);
        }
        let n = self.same_order(other);
        let mut q = vec![zero(); n + 1];
        for k in 0..=n {
            let acc: Complex64 = (0..k).map(|j| q[j] * other.coeffs[k - j]).sum();
            q[k] = (self.coeffs[k] - acc) / b0;
        }
        Ok(TruncatedSeries { coeffs: q })
    }

    /// `self(inner(t))` by Horner's scheme; `inner` must vanish at `t = 0`.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if inner.coeffs[0] != zero() {
            return Err(Error::CompositionOffsetNonzero(inner.coeffs[0].norm()));
        }
        let n = self.same_order(inner);
        let inner = TruncatedSeries {
            coeffs: inner.coeffs[..=n].to_vec(),
        };
        let mut acc = Self::constant(self.coeffs[n], n);
        for k in (0..n).rev() {
            acc = acc.mul(&inner);
            acc.coeffs[0] += self.coeffs[k];
        }
        Ok(acc)
    }

    pub fn powi(&self, exponent: i64) -> Result<Self> {
        let mut base = if exponent < 0 {
            Self::constant(Complex64::new(1.0, 0.0), self.order()).div(self)?
        } else {
            self.clone()
        };
        let mut e = exponent.unsigned_abs();
        let mut acc = Self::constant(Complex64::new(1.0, 0.0), self.order());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        Ok(acc)
    }

    /// Applies an elementary function: its jet at `a_0` composed with the
    /// non-constant part.
    pub fn apply(&self, func: Func) -> Result<Self> {
        let jet = function_jet(func, self.coeffs[0], self.order())?;
        jet.compose(&self.without_constant())
    }

    /// `self^p` for a constant, not necessarily integer, exponent.
    pub fn powc(&self, p: Complex64) -> Result<Self> {
        let a0 = self.coeffs[0];
        if a0.norm() <= 1e-300 {
            return Err(Error::SingularAtExpansionPoint(
                "non-integer power of a series vanishing at the point".into(),
            ));
        }
        // (a0 + t)^p = a0^p sum binom(p, k) (t/a0)^k
        let n = self.order();
        let lead = (p * a0.ln()).exp();
        let mut jet = vec![zero(); n + 1];
        let mut binom = Complex64::new(1.0, 0.0);
        for (k, c) in jet.iter_mut().enumerate() {
            *c = lead * binom / a0.powi(k as i32);
            binom = binom * (p - k as f64) / (k as f64 + 1.0);
        }
        TruncatedSeries { coeffs: jet }.compose(&self.without_constant())
    }
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

/// Taylor coefficients of `func(a0 + t)` up to `t^order`.
pub fn function_jet(func: Func, a0: Complex64, order: usize) -> Result<TruncatedSeries> {
    let n = order;
    // sin/cos/sinh/cosh of t
    let trig = |k: usize, alternating: bool, odd: bool| -> f64 {
        if (k % 2 == 1) != odd {
            return 0.0;
        }
        let sign = if alternating && (k / 2) % 2 == 1 {
            -1.0
        } else {
            1.0
        };
        sign / factorial(k)
    };
    let coeffs: Vec<Complex64> = match func {
        Func::Exp => (0..=n).map(|k| a0.exp() / factorial(k)).collect(),
        Func::Log => {
            if a0.norm() <= 1e-300 {
                return Err(Error::SingularAtExpansionPoint("logarithm at zero".into()));
            }
            (0..=n)
                .map(|k| match k {
                    0 => a0.ln(),
                    _ => {
                        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                        sign / (k as f64 * a0.powi(k as i32))
                    }
                })
                .collect()
        }
        Func::Sin => (0..=n)
            .map(|k| a0.sin() * trig(k, true, false) + a0.cos() * trig(k, true, true))
            .collect(),
        Func::Cos => (0..=n)
            .map(|k| a0.cos() * trig(k, true, false) - a0.sin() * trig(k, true, true))
            .collect(),
        Func::Sinh => (0..=n)
            .map(|k| a0.sinh() * trig(k, false, false) + a0.cosh() * trig(k, false, true))
            .collect(),
        Func::Cosh => (0..=n)
            .map(|k| a0.cosh() * trig(k, false, false) + a0.sinh() * trig(k, false, true))
            .collect(),
        Func::Tan => {
            let sin = function_jet(Func::Sin, a0, n)?;
            let cos = function_jet(Func::Cos, a0, n)?;
            return sin
                .div(&cos)
                .map_err(|_| Error::SingularAtExpansionPoint("tangent pole at the point".into()));
        }
        Func::Sqrt => {
            if a0.norm() <= 1e-300 {
                return Err(Error::SingularAtExpansionPoint(
                    "square root at zero".into(),
                ));
            }
            return TruncatedSeries::variable(a0, n).powc(Complex64::new(0.5, 0.0));
        }
    };
    if coeffs
        .iter()
        .any(|c| !c.re.is_finite() || !c.im.is_finite())
    {
        return Err(Error::SingularAtExpansionPoint(format!(
            "{} overflows",
            func.name()
        )));
    }
    Ok(TruncatedSeries { coeffs })
}

/// Taylor coefficients of `e(z0 + t)` up to `t^order`, by jet arithmetic
/// over the expression tree.
pub fn ts_from_expr(e: &Expr, z0: Complex64, order: usize) -> Result<TruncatedSeries> {
    let singular = |err: Error| match err {
        Error::DivisionBySingularSeries => {
            Error::SingularAtExpansionPoint("division by a function vanishing at the point".into())
        }
        other => other,
    };
    let ts = match e {
        Expr::Const(c) => TruncatedSeries::constant(c.to_complex(), order),
        Expr::Var(_) => TruncatedSeries::variable(z0, order),
        Expr::Add(xs) => {
            let mut acc = TruncatedSeries::constant(zero(), order);
            for x in xs {
                acc = acc.add(&ts_from_expr(x, z0, order)?);
            }
            acc
        }
        Expr::Mul(xs) => {
            let mut acc = TruncatedSeries::constant(Complex64::new(1.0, 0.0), order);
            for x in xs {
                acc = acc.mul(&ts_from_expr(x, z0, order)?);
            }
            acc
        }
        Expr::Neg(x) => ts_from_expr(x, z0, order)?.neg(),
        Expr::Div(a, b) => ts_from_expr(a, z0, order)?
            .div(&ts_from_expr(b, z0, order)?)
            .map_err(singular)?,
        Expr::Func(f, x) => ts_from_expr(x, z0, order)?.apply(*f)?,
        Expr::Pow(base, exponent) => {
            let b = ts_from_expr(base, z0, order)?;
            match exponent.as_ref() {
                Expr::Const(c) => match c.as_integer() {
                    Some(n) => b.powi(n).map_err(singular)?,
                    None => b.powc(c.to_complex())?,
                },
                _ => {
                    // b^p = exp(p log b)
                    let p = ts_from_expr(exponent, z0, order)?;
                    if let Some(constant) = base.as_const() {
                        let log_b = constant.to_complex();
                        if log_b.norm() <= 1e-300 {
                            return Err(Error::SingularAtExpansionPoint(
                                "zero base with variable exponent".into(),
                            ));
                        }
                        p.scale(log_b.ln()).apply(Func::Exp)?
                    } else {
                        p.mul(&b.apply(Func::Log)?).apply(Func::Exp)?
                    }
                }
            }
        }
    };
    if ts
        .coeffs
        .iter()
        .any(|c| !c.re.is_finite() || !c.im.is_finite())
    {
        return Err(Error::SingularAtExpansionPoint(format!(
            "non-finite Taylor data for `{e}`"
        )));
    }
    Ok(ts)
}

/// Functional-series coefficients `c_0..c_N` of `f` in powers of
/// `s - s(z0)`, by triangular coefficient matching.
pub fn oracle_coefficients(
    f: &Expr,
    s: &Expr,
    z0: Complex64,
    order: usize,
) -> Result<Vec<Complex64>> {
    crate::composite::shared_variable(f, s)?;
    let big_f = ts_from_expr(f, z0, order)?;
    let u = ts_from_expr(s, z0, order)?.without_constant();
    oracle_solve(&big_f, &u)
}

/// Solves `target = sum c_n u^n` for `c`, where `u` has zero constant term.
pub fn oracle_solve(target: &TruncatedSeries, u: &TruncatedSeries) -> Result<Vec<Complex64>> {
    let n = target.order().min(u.order());
    if u.coeffs[0] != zero() {
        return Err(Error::CompositionOffsetNonzero(u.coeffs[0].norm()));
    }
    let u1 = if n >= 1 {
        u.coeffs[1]
    } else {
        Complex64::new(1.0, 0.0)
    };
    if u1.norm() <= 1e-300 {
        return Err(Error::LeadingCoefficientZero);
    }
    // powers[k] = u^k
    let mut powers = vec![TruncatedSeries::constant(Complex64::new(1.0, 0.0), n)];
    for k in 1..=n {
        let next = powers[k - 1].mul(u);
        powers.push(next);
    }
    let mut c = vec![zero(); n + 1];
    for k in 0..=n {
        let known: Complex64 = (0..k).map(|j| c[j] * powers[j].coeffs[k]).sum();
        c[k] = (target.coeffs[k] - known) / powers[k].coeffs[k];
    }
    Ok(c)
}

/// `sum c_n u^n`, truncated at the order of `u`.
pub fn reconstruct(coefficients: &[Complex64], u: &TruncatedSeries) -> Result<TruncatedSeries> {
    TruncatedSeries::new(coefficients.to_vec()).compose(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{differentiate, evaluate, parse};
    use proptest::prelude::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn assert_close(a: &[Complex64], b: &[f64], tol: f64) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert!((x - c(*y)).norm() <= tol, "{a:?} vs {b:?}");
        }
    }

    fn ts(text: &str, z0: f64, order: usize) -> TruncatedSeries {
        ts_from_expr(&parse(text).unwrap(), c(z0), order).unwrap()
    }

    #[test]
    fn elementary_jets() {
        assert_close(
            ts("exp(z)", 0.0, 4).coeffs(),
            &[1.0, 1.0, 0.5, 1.0 / 6.0, 1.0 / 24.0],
            1e-15,
        );
        assert_close(
            ts("1/(1+z)", 0.0, 3).coeffs(),
            &[1.0, -1.0, 1.0, -1.0],
            1e-15,
        );
        assert_close(
            ts("sin(z)", 0.0, 3).coeffs(),
            &[0.0, 1.0, 0.0, -1.0 / 6.0],
            1e-15,
        );
    }

    #[test]
    fn arithmetic() {
        let a = TruncatedSeries::from_real(&[1.0, 1.0, 0.0]);
        let b = TruncatedSeries::from_real(&[1.0, -1.0, 0.0]);
        assert_close(a.mul(&b).coeffs(), &[1.0, 0.0, -1.0], 0.0);
        let one = TruncatedSeries::from_real(&[1.0, 0.0, 0.0]);
        assert_close(one.div(&a).unwrap().coeffs(), &[1.0, -1.0, 1.0], 0.0);
        let exp = function_jet(Func::Exp, c(0.0), 2).unwrap();
        let two_t = TruncatedSeries::from_real(&[0.0, 2.0, 0.0]);
        assert_close(
            exp.compose(&two_t).unwrap().coeffs(),
            &[1.0, 2.0, 2.0],
            1e-15,
        );
    }

    #[test]
    fn precondition_errors() {
        let a = TruncatedSeries::from_real(&[0.0, 1.0]);
        assert_eq!(a.clone().div(&a), Err(Error::DivisionBySingularSeries));
        let shifted = TruncatedSeries::from_real(&[0.5, 1.0]);
        assert!(matches!(
            a.compose(&shifted),
            Err(Error::CompositionOffsetNonzero(_))
        ));
        assert!(matches!(
            ts_from_expr(&parse("1/z").unwrap(), c(0.0), 3),
            Err(Error::SingularAtExpansionPoint(_))
        ));
        assert!(matches!(
            ts_from_expr(&parse("log(z)").unwrap(), c(0.0), 3),
            Err(Error::SingularAtExpansionPoint(_))
        ));
        assert_eq!(
            oracle_coefficients(&parse("exp(z)").unwrap(), &parse("z^2").unwrap(), c(0.0), 3),
            Err(Error::LeadingCoefficientZero)
        );
    }

    #[test]
    fn sine_case_coefficients() {
        let got = oracle_coefficients(
            &parse("1/(1+z)").unwrap(),
            &parse("sin(z)").unwrap(),
            c(0.0),
            3,
        )
        .unwrap();
        assert_close(&got, &[1.0, -1.0, 1.0, -7.0 / 6.0], 1e-14);
    }

    #[test]
    fn composite_in_itself() {
        for (s, z0) in [
            ("sin(z)", 0.2),
            ("2^(-z)", 0.5),
            ("1/(z-2)", 0.0),
            ("exp(z)+z", -0.3),
        ] {
            let e = parse(s).unwrap();
            let got = oracle_coefficients(&e, &e, c(z0), 5).unwrap();
            let s0 = evaluate(&e, c(z0)).unwrap();
            assert!((got[0] - s0).norm() < 1e-14);
            assert!((got[1] - c(1.0)).norm() < 1e-12, "{s}: {got:?}");
            for k in 2..=5 {
                assert!(got[k].norm() < 1e-11, "{s}: {got:?}");
            }
        }
    }

    #[test]
    fn jets_agree_with_repeated_symbolic_derivatives() {
        let z0 = c(0.35);
        for text in [
            "exp(z)",
            "log(z)",
            "sin(z)",
            "cos(z)",
            "tan(z)",
            "sinh(z)",
            "cosh(z)",
            "sqrt(z)",
            "z^(1/3)",
            "2^z",
            "z^z",
            "1/(1+z)^2",
        ] {
            let e = parse(text).unwrap();
            let jet = ts_from_expr(&e, z0, 8).unwrap();
            let mut d = e.clone();
            let mut fact = 1.0;
            for n in 0..=8 {
                if n > 0 {
                    d = differentiate(&d, 'z');
                    fact *= n as f64;
                }
                let symbolic = evaluate(&d, z0).unwrap() / fact;
                let got = jet.coeffs()[n];
                assert!(
                    (got - symbolic).norm() <= 1e-9 * symbolic.norm().max(1e-12),
                    "{text} n={n}: {got} vs {symbolic}"
                );
            }
        }
    }

    proptest! {
        #[test]
        fn triangular_solve_reconstructs_target(
            target in prop::collection::vec(-2.0f64..2.0, 7),
            tail in prop::collection::vec(-1.0f64..1.0, 5),
            lead in prop_oneof![0.5f64..2.0, -2.0f64..-0.5],
        ) {
            let target = TruncatedSeries::from_real(&target);
            let mut u = vec![0.0, lead];
            u.extend(tail);
            let u = TruncatedSeries::from_real(&u);
            let c = oracle_solve(&target, &u).unwrap();
            let back = reconstruct(&c, &u).unwrap();
            let scale = target.coeffs().iter().map(|x| x.norm()).fold(1.0, f64::max);
            for (a, b) in back.coeffs().iter().zip(target.coeffs()) {
                prop_assert!((a - b).norm() <= 1e-11 * scale);
            }
        }
    }
}
