use num_complex::Complex64;
use num_traits::Signed;

use super::{Constant, Expr};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Prec {
    Sum,
    Product,
    Unary,
    Power,
    Atom,
}

/// Prints `e` in the input grammar with a minimal set of parentheses.
pub fn format(e: &Expr) -> String {
    print(e).0
}

fn wrap((text, prec): (String, Prec), min: Prec) -> String {
    if prec >= min {
        text
    } else {
        format!("({text})")
    }
}

fn real(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || (1e-5..1e16).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

fn constant(c: &Constant) -> (String, Prec) {
    match c {
        Constant::Rational(r) => {
            let prec = if r.is_negative() {
                Prec::Unary
            } else if r.is_integer() {
                Prec::Atom
            } else {
                Prec::Product
            };
            (format!("{r}"), prec)
        }
        Constant::Float(f) => {
            let v: Complex64 = f.value();
            if v.im == 0.0 {
                let prec = if v.re < 0.0 { Prec::Unary } else { Prec::Atom };
                (real(v.re), prec)
            } else {
                let sign = if v.im < 0.0 { '-' } else { '+' };
                (
                    format!("({} {} {}*sqrt(-1))", real(v.re), sign, real(v.im.abs())),
                    Prec::Atom,
                )
            }
        }
    }
}

fn is_negative(e: &Expr) -> bool {
    match e {
        Expr::Const(c) => c.is_negative(),
        Expr::Neg(_) => true,
        Expr::Mul(xs) => matches!(xs.first(), Some(Expr::Const(c)) if c.is_negative()),
        _ => false,
    }
}

fn negated(e: &Expr) -> Expr {
    match e {
        Expr::Const(c) => Expr::Const(c.neg()),
        Expr::Neg(x) => (**x).clone(),
        Expr::Mul(xs) => {
            let Some(Expr::Const(c)) = xs.first() else {
                unreachable!()
            };
            let c = c.neg();
            let mut rest: Vec<Expr> = xs[1..].to_vec();
            if !c.is_one() {
                rest.insert(0, Expr::Const(c));
            }
            if rest.len() == 1 {
                rest.pop().unwrap()
            } else {
                Expr::Mul(rest)
            }
        }
        _ => unreachable!(),
    }
}

fn print(e: &Expr) -> (String, Prec) {
    match e {
        Expr::Const(c) => constant(c),
        Expr::Var(v) => (v.to_string(), Prec::Atom),
        Expr::Func(f, x) => (format!("{}({})", f.name(), print(x).0), Prec::Atom),
        Expr::Add(xs) => {
            let mut out = String::new();
            for (i, x) in xs.iter().enumerate() {
                if i == 0 {
                    out.push_str(&wrap(print(x), Prec::Product));
                } else if is_negative(x) {
                    out.push_str(" - ");
                    out.push_str(&wrap(print(&negated(x)), Prec::Product));
                } else {
                    out.push_str(" + ");
                    out.push_str(&wrap(print(x), Prec::Product));
                }
            }
            (out, Prec::Sum)
        }
        Expr::Neg(x) => (format!("-{}", wrap(print(x), Prec::Power)), Prec::Unary),
        Expr::Div(a, b) => (
            format!(
                "{}/{}",
                wrap(print(a), Prec::Product),
                wrap(print(b), Prec::Power)
            ),
            Prec::Product,
        ),
        Expr::Pow(_, p) if p.as_const().is_some_and(Constant::is_negative) => {
            product(std::slice::from_ref(e))
        }
        Expr::Pow(b, p) => (
            format!(
                "{}^{}",
                wrap(print(b), Prec::Atom),
                wrap(print(p), Prec::Power)
            ),
            Prec::Power,
        ),
        Expr::Mul(xs) => product(xs),
    }
}

/// Products print as `[-][coefficient*]numerators[/denominators]`, moving
/// factors with negative constant exponents below the line.
fn product(factors: &[Expr]) -> (String, Prec) {
    let mut coef = Constant::int(1);
    let mut numer: Vec<String> = Vec::new();
    let mut denom: Vec<String> = Vec::new();
    // `/(a*(b + c))` and `/(2*0)` would parse back into products that
    // simplify expands or folds
    let mut chain_denominators = false;
    for (i, f) in factors.iter().enumerate() {
        match f {
            Expr::Const(c) if i == 0 => coef = c.clone(),
            Expr::Pow(b, p) if p.as_const().is_some_and(Constant::is_negative) => {
                let flipped = p.as_const().unwrap().neg();
                let inverse = if flipped.is_one() {
                    (**b).clone()
                } else {
                    (**b).clone().pow(Expr::Const(flipped))
                };
                chain_denominators |= matches!(**b, Expr::Add(_) | Expr::Const(_));
                denom.push(wrap(print(&inverse), Prec::Power));
            }
            other => numer.push(wrap(print(other), Prec::Power)),
        }
    }

    let negative = coef.is_negative();
    let magnitude = if negative { coef.neg() } else { coef };
    let (coef_numer, coef_denom) = match &magnitude {
        Constant::Rational(r) => (
            (!r.numer().eq(&1)).then(|| r.numer().to_string()),
            (!r.denom().eq(&1)).then(|| r.denom().to_string()),
        ),
        Constant::Float(_) if magnitude.is_one() => (None, None),
        Constant::Float(_) => (Some(wrap(constant(&magnitude), Prec::Power)), None),
    };

    let mut text = String::new();
    if negative {
        text.push('-');
    }
    let fraction_prefix = coef_denom.is_some() && denom.is_empty() && !numer.is_empty();
    if fraction_prefix {
        text.push_str(&format!(
            "{}/{}*",
            coef_numer.as_deref().unwrap_or("1"),
            coef_denom.as_deref().unwrap()
        ));
    } else {
        if let Some(d) = coef_denom {
            denom.insert(0, d);
        }
        if let Some(n) = coef_numer {
            numer.insert(0, n);
        }
    }
    if numer.is_empty() {
        text.push('1');
    } else {
        text.push_str(&numer.join("*"));
    }
    match denom.len() {
        0 => {}
        1 => {
            text.push('/');
            text.push_str(&denom[0]);
        }
        _ if chain_denominators => {
            for d in &denom {
                text.push('/');
                text.push_str(d);
            }
        }
        _ => text.push_str(&format!("/({})", denom.join("*"))),
    }
    let single = !negative && !fraction_prefix && denom.is_empty() && numer.len() == 1;
    let prec = if negative {
        Prec::Unary
    } else if single {
        Prec::Power
    } else {
        Prec::Product
    };
    (text, prec)
}
