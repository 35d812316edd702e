//! Best-effort algebraic simplification.
//!
//! The normal form produced here has no `Neg` or `Div` nodes: negation is a
//! `-1` coefficient and division a `-1` exponent. Sums and products are
//! flattened and sorted, constants folded, like terms and like bases
//! collected, and products distributed over sums (up to a size limit).
//! The result is not canonical; two equal functions may simplify to
//! different trees.

use std::collections::BTreeMap;

use num_rational::Rational64;
use num_traits::{Signed, Zero};

use super::{Constant, Expr, Func};

const MAX_PASSES: usize = 32;
/// Products whose expansion would exceed this many terms stay factored.
const DISTRIBUTE_LIMIT: usize = 64;
const MAX_FOLDED_EXPONENT: i64 = 64;

pub fn simplify(e: &Expr) -> Expr {
    let mut current = pass(e);
    for _ in 0..MAX_PASSES {
        let next = pass(&current);
        if next == current {
            break;
        }
        current = next;
    }
    current
}

fn pass(e: &Expr) -> Expr {
    match e {
        Expr::Const(_) | Expr::Var(_) => e.clone(),
        Expr::Neg(x) => mul(vec![Expr::int(-1), pass(x)]),
        Expr::Div(a, b) => mul(vec![pass(a), power(pass(b), Expr::int(-1))]),
        Expr::Add(xs) => add(xs.iter().map(pass).collect()),
        Expr::Mul(xs) => mul(xs.iter().map(pass).collect()),
        Expr::Pow(b, p) => power(pass(b), pass(p)),
        Expr::Func(f, x) => func(*f, pass(x)),
    }
}

fn integer_exponent(e: &Expr) -> Option<i64> {
    e.as_const().and_then(Constant::as_integer)
}

/// Splits a term into its numeric coefficient and the remaining factors.
fn split_coefficient(term: Expr) -> (Constant, Option<Expr>) {
    match term {
        Expr::Const(c) => (c, None),
        Expr::Mul(mut xs) if matches!(xs.first(), Some(Expr::Const(_))) => {
            let Expr::Const(c) = xs.remove(0) else {
                unreachable!()
            };
            let rest = if xs.len() == 1 {
                xs.pop().unwrap()
            } else {
                Expr::Mul(xs)
            };
            (c, Some(rest))
        }
        other => (Constant::int(1), Some(other)),
    }
}

fn with_coefficient(coef: Constant, rest: Expr) -> Expr {
    if coef.is_one() {
        return rest;
    }
    match rest {
        Expr::Mul(mut xs) => {
            xs.insert(0, Expr::Const(coef));
            Expr::Mul(xs)
        }
        other => Expr::Mul(vec![Expr::Const(coef), other]),
    }
}

fn add(terms: Vec<Expr>) -> Expr {
    let mut flat = Vec::with_capacity(terms.len());
    for t in terms {
        match t {
            Expr::Add(xs) => flat.extend(xs),
            other => flat.push(other),
        }
    }
    let mut collected: BTreeMap<Option<Expr>, Constant> = BTreeMap::new();
    for t in flat {
        let (coef, rest) = split_coefficient(t);
        collected
            .entry(rest)
            .and_modify(|c| *c = c.add(&coef))
            .or_insert(coef);
    }
    let mut out: Vec<Expr> = collected
        .into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(rest, c)| match rest {
            None => Expr::Const(c),
            Some(r) => with_coefficient(c, r),
        })
        .collect();
    match out.len() {
        0 => Expr::zero(),
        1 => out.pop().unwrap(),
        _ => Expr::Add(out),
    }
}

fn mul(factors: Vec<Expr>) -> Expr {
    let mut coef = Constant::int(1);
    let mut rest = Vec::with_capacity(factors.len());
    let mut stack = factors;
    stack.reverse();
    while let Some(f) = stack.pop() {
        match f {
            Expr::Const(c) => coef = coef.mul(&c),
            Expr::Mul(xs) => stack.extend(xs.into_iter().rev()),
            other => rest.push(other),
        }
    }
    if coef.is_zero() {
        return Expr::zero();
    }

    // like bases: x^a * x^b -> x^(a+b); exp(a) * exp(b) -> exp(a+b)
    let mut bases: BTreeMap<Expr, Vec<Expr>> = BTreeMap::new();
    let mut exp_args = Vec::new();
    for f in rest {
        match f {
            Expr::Func(Func::Exp, arg) => exp_args.push(*arg),
            Expr::Pow(b, p) => bases.entry(*b).or_default().push(*p),
            other => bases.entry(other).or_default().push(Expr::one()),
        }
    }
    let mut collected = Vec::new();
    let mut push = |e: Expr, coef: &mut Constant| match e {
        Expr::Const(c) => *coef = coef.mul(&c),
        Expr::Mul(xs) => {
            for x in xs {
                match x {
                    Expr::Const(c) => *coef = coef.mul(&c),
                    other => collected.push(other),
                }
            }
        }
        other => collected.push(other),
    };
    for (base, exponents) in bases {
        let exponent = if exponents.len() == 1 {
            exponents.into_iter().next().unwrap()
        } else {
            add(exponents)
        };
        push(power(base, exponent), &mut coef);
    }
    if !exp_args.is_empty() {
        push(func(Func::Exp, add(exp_args)), &mut coef);
    }
    if coef.is_zero() {
        return Expr::zero();
    }

    // distribute over the first sum, if the expansion stays small
    let expansion: usize = collected
        .iter()
        .map(|f| match f {
            Expr::Add(xs) => xs.len(),
            _ => 1,
        })
        .try_fold(1usize, |acc, n| acc.checked_mul(n))
        .unwrap_or(usize::MAX);
    if expansion > 1 && expansion <= DISTRIBUTE_LIMIT {
        let idx = collected
            .iter()
            .position(|f| matches!(f, Expr::Add(_)))
            .unwrap();
        let Expr::Add(terms) = collected.remove(idx) else {
            unreachable!()
        };
        return add(terms
            .into_iter()
            .map(|t| {
                let mut fs = Vec::with_capacity(collected.len() + 2);
                fs.push(Expr::Const(coef.clone()));
                fs.push(t);
                fs.extend(collected.iter().cloned());
                mul(fs)
            })
            .collect());
    }

    collected.sort();
    match (collected.len(), coef.is_one()) {
        (0, _) => Expr::Const(coef),
        (1, true) => collected.pop().unwrap(),
        (_, true) => Expr::Mul(collected),
        (_, false) => {
            collected.insert(0, Expr::Const(coef));
            Expr::Mul(collected)
        }
    }
}

fn power(base: Expr, exponent: Expr) -> Expr {
    if exponent.is_zero() {
        return Expr::one();
    }
    if exponent.is_one() {
        return base;
    }
    if base.is_one() {
        return Expr::one();
    }
    if base.is_zero() {
        if exponent.as_const().is_some_and(Constant::is_positive_real) {
            return Expr::zero();
        }
        // every pole at a constant zero prints and reparses as 1/0
        if exponent.as_const().is_some_and(Constant::is_negative) {
            return base.powi(-1);
        }
        return base.pow(exponent);
    }
    let Some(n) = integer_exponent(&exponent) else {
        return base.pow(exponent);
    };
    match base {
        Expr::Const(c) if n.abs() <= MAX_FOLDED_EXPONENT => match c.powi(n) {
            Some(v) => Expr::Const(v),
            None => Expr::Const(c).pow(exponent),
        },
        // (x^a)^n = x^(a n) for integer n
        Expr::Pow(x, a) => power(*x, mul(vec![*a, exponent])),
        // (x y)^n = x^n y^n for integer n
        Expr::Mul(xs) => mul(xs.into_iter().map(|x| power(x, exponent.clone())).collect()),
        Expr::Func(Func::Exp, a) => func(Func::Exp, mul(vec![exponent, *a])),
        Expr::Func(Func::Sqrt, x) if n % 2 == 0 => power(*x, Expr::int(n / 2)),
        other => other.pow(exponent),
    }
}

fn exact_sqrt(r: &Rational64) -> Option<Rational64> {
    fn isqrt(n: i64) -> Option<i64> {
        if n < 0 {
            return None;
        }
        let root = (n as f64).sqrt().round() as i64;
        (root.checked_mul(root) == Some(n)).then_some(root)
    }
    Some(Rational64::new(isqrt(*r.numer())?, isqrt(*r.denom())?))
}

fn func(f: Func, arg: Expr) -> Expr {
    if let Some(Constant::Rational(r)) = arg.as_const() {
        let folded = match f {
            Func::Exp | Func::Cos | Func::Cosh if r.is_zero() => Some(Expr::one()),
            Func::Sin | Func::Tan | Func::Sinh if r.is_zero() => Some(Expr::zero()),
            Func::Log if *r == Rational64::from_integer(1) => Some(Expr::zero()),
            Func::Sqrt if !r.is_negative() => {
                exact_sqrt(r).map(|v| Expr::Const(Constant::Rational(v)))
            }
            _ => None,
        };
        if let Some(v) = folded {
            return v;
        }
    }
    match (f, arg) {
        (Func::Exp, Expr::Func(Func::Log, inner)) => *inner,
        (f, arg) => Expr::apply(f, arg),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{evaluate, parse};
    use num_complex::Complex64;

    fn s(text: &str) -> Expr {
        simplify(&parse(text).unwrap())
    }

    #[test]
    fn identities() {
        let e = Expr::var('z').sin();
        assert_eq!(simplify(&(Expr::zero() + e.clone())), e);
        assert_eq!(
            simplify(&Expr::Mul(vec![
                Expr::one(),
                Expr::Mul(vec![e.clone(), Expr::one()])
            ])),
            e
        );
        assert_eq!(simplify(&(e.clone() / e.clone())), Expr::one());
    }

    #[test]
    fn folding_and_collection() {
        assert_eq!(s("2*3 + 1/2"), Expr::rational(13, 2));
        assert_eq!(s("z + z"), s("2*z"));
        assert_eq!(s("z*z*z"), Expr::var('z').powi(3));
        assert_eq!(s("z - z"), Expr::zero());
        assert_eq!(s("exp(z)*exp(z)"), s("exp(2*z)"));
        assert_eq!(s("2^(1-z)*2^z"), Expr::int(2));
        assert_eq!(s("(z-2)^(-2) / (z-2)^(-3)"), s("z-2"));
        assert_eq!(s("exp(log(z+1))"), s("z+1"));
        assert_eq!(s("sqrt(9/4)"), Expr::rational(3, 2));
        assert_eq!(s("sqrt(z)^2"), Expr::var('z'));
        assert_eq!(s("cos(0) + sin(0)"), Expr::one());
    }

    #[test]
    fn distributes_small_products() {
        assert_eq!(s("(1+z)*(1-z)"), s("1 - z^2"));
        assert_eq!(s("-(z + 1)"), s("-1 - z"));
    }

    #[test]
    fn keeps_non_integer_power_of_power() {
        // (z^2)^(1/2) is not z on the principal branch
        let e = s("(z^2)^(1/2)");
        let v = evaluate(&e, Complex64::new(-1.0, 0.0)).unwrap();
        assert!((v.re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn idempotent_on_examples() {
        for text in [
            "1/(1+z)",
            "(1+z)^2*(2-z)/(3*z)",
            "exp(2*z)*cos(z)^-3 - sin(z)/cos(z)",
            "8^(-z)*2^z*log(8)/log(2)",
        ] {
            let once = s(text);
            assert_eq!(simplify(&once), once, "{text}");
        }
    }
}
