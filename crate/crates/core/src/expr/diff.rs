use super::{simplify, Expr, Func};

/// Symbolic derivative of `e` with respect to `var`, simplified.
pub fn differentiate(e: &Expr, var: char) -> Expr {
    simplify(&derivative(e, var))
}

/// Raw derivative by the sum, product, quotient, power and chain rules.
/// Subtrees free of `var` differentiate to zero without being visited.
pub(crate) fn derivative(e: &Expr, var: char) -> Expr {
    if !e.contains_var(var) {
        return Expr::zero();
    }
    match e {
        Expr::Const(_) => Expr::zero(),
        Expr::Var(_) => Expr::one(),
        Expr::Add(xs) => Expr::Add(
            xs.iter()
                .filter(|x| x.contains_var(var))
                .map(|x| derivative(x, var))
                .collect(),
        ),
        Expr::Neg(x) => -derivative(x, var),
        Expr::Mul(xs) => {
            let mut terms = Vec::new();
            for (i, x) in xs.iter().enumerate() {
                if !x.contains_var(var) {
                    continue;
                }
                let mut factors = Vec::with_capacity(xs.len());
                factors.extend(xs[..i].iter().cloned());
                factors.push(derivative(x, var));
                factors.extend(xs[i + 1..].iter().cloned());
                terms.push(Expr::Mul(factors));
            }
            Expr::Add(terms)
        }
        Expr::Div(num, den) => {
            if !den.contains_var(var) {
                return derivative(num, var) / (**den).clone();
            }
            let numerator =
                derivative(num, var) * (**den).clone() - (**num).clone() * derivative(den, var);
            numerator / (**den).clone().powi(2)
        }
        Expr::Pow(base, exponent) => power_rule(base, exponent, var),
        Expr::Func(f, arg) => {
            let inner = derivative(arg, var);
            let a = (**arg).clone();
            let outer = match f {
                Func::Exp => a.exp(),
                Func::Log => a.powi(-1),
                Func::Sin => a.cos(),
                Func::Cos => -a.sin(),
                Func::Tan => a.cos().powi(-2),
                Func::Sinh => Expr::apply(Func::Cosh, a),
                Func::Cosh => Expr::apply(Func::Sinh, a),
                Func::Sqrt => Expr::rational(1, 2) * Expr::apply(Func::Sqrt, a).powi(-1),
            };
            outer * inner
        }
    }
}

fn power_rule(base: &Expr, exponent: &Expr, var: char) -> Expr {
    let b = base.clone();
    let p = exponent.clone();
    if !exponent.contains_var(var) {
        // p * b^(p-1) * b'
        let lowered = match p.as_const() {
            Some(c) => Expr::Const(c.add(&super::Constant::int(-1))),
            None => p.clone() - Expr::one(),
        };
        return Expr::Mul(vec![p, b.pow(lowered), derivative(base, var)]);
    }
    if !base.contains_var(var) {
        // b^p * log(b) * p'
        return Expr::Mul(vec![b.clone().pow(p), b.log(), derivative(exponent, var)]);
    }
    // b^p * (p' log b + p b'/b)
    let bracket = derivative(exponent, var) * b.clone().log()
        + Expr::Mul(vec![p.clone(), derivative(base, var), b.clone().powi(-1)]);
    b.pow(p) * bracket
}
