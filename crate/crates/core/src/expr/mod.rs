//! Expression trees over a single complex variable.
//!
//! Parsing, printing, differentiation, simplification and evaluation all live
//! here. Trees are immutable values; every operation returns a new tree.

mod diff;
mod eval;
mod format;
mod parse;
mod simplify;

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::hash::{Hash, Hasher};

use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::{CheckedAdd, CheckedMul, One, Signed, ToPrimitive, Zero};

pub(crate) use diff::derivative as diff_raw;
pub use diff::differentiate;
pub use eval::evaluate;
pub use format::format;
pub use parse::{parse, parse_with_params};
pub use simplify::simplify;

/// Variable letter used when an expression has none of its own.
pub const DEFAULT_VARIABLE: char = 'z';

/// Elementary functions understood by the parser, differentiator, evaluator
/// and the truncated-series oracle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Func {
    Exp,
    Log,
    Sin,
    Cos,
    Tan,
    Sinh,
    Cosh,
    Sqrt,
}

/// Name table for [`Func`]; the parser and printer both go through it.
pub const FUNCTIONS: &[(&str, Func)] = &[
    ("exp", Func::Exp),
    ("log", Func::Log),
    ("ln", Func::Log),
    ("sin", Func::Sin),
    ("cos", Func::Cos),
    ("tan", Func::Tan),
    ("sinh", Func::Sinh),
    ("cosh", Func::Cosh),
    ("sqrt", Func::Sqrt),
];

impl Func {
    pub fn from_name(name: &str) -> Option<Func> {
        FUNCTIONS.iter().find(|(n, _)| *n == name).map(|&(_, f)| f)
    }

    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Sqrt => "sqrt",
        }
    }

    /// Principal-branch complex value.
    pub fn apply(self, x: Complex64) -> Complex64 {
        match self {
            Func::Exp => x.exp(),
            Func::Log => x.ln(),
            Func::Sin => x.sin(),
            Func::Cos => x.cos(),
            Func::Tan => x.tan(),
            Func::Sinh => x.sinh(),
            Func::Cosh => x.cosh(),
            Func::Sqrt => x.sqrt(),
        }
    }
}

/// Complex float with bitwise equality and a total order, so that it can sit
/// inside a hashable, sortable [`Expr`].
#[derive(Clone, Copy, Debug)]
pub struct FloatConst(Complex64);

impl FloatConst {
    pub fn new(value: Complex64) -> Self {
        // fold -0.0 into 0.0 so equal values compare equal
        FloatConst(Complex64::new(value.re + 0.0, value.im + 0.0))
    }

    pub fn value(self) -> Complex64 {
        self.0
    }

    fn key(&self) -> (u64, u64) {
        (self.0.re.to_bits(), self.0.im.to_bits())
    }
}

impl PartialEq for FloatConst {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}

impl Eq for FloatConst {}

impl Hash for FloatConst {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.key().hash(state);
    }
}

impl PartialOrd for FloatConst {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FloatConst {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .re
            .total_cmp(&other.0.re)
            .then(self.0.im.total_cmp(&other.0.im))
    }
}

/// Literal payload: exact where possible, complex float otherwise.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Constant {
    Rational(Rational64),
    Float(FloatConst),
}

impl Constant {
    pub fn int(n: i64) -> Self {
        Constant::Rational(Rational64::from_integer(n))
    }

    pub fn float(value: Complex64) -> Self {
        Constant::Float(FloatConst::new(value))
    }

    pub fn to_complex(&self) -> Complex64 {
        match self {
            Constant::Rational(r) => Complex64::new(rational_to_f64(r), 0.0),
            Constant::Float(f) => f.value(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Constant::Rational(r) => r.is_zero(),
            Constant::Float(f) => f.value() == Complex64::zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Constant::Rational(r) => r.is_one(),
            Constant::Float(f) => f.value() == Complex64::one(),
        }
    }

    pub fn as_integer(&self) -> Option<i64> {
        match self {
            Constant::Rational(r) if r.is_integer() => Some(*r.numer()),
            _ => None,
        }
    }

    /// True for a rational strictly below zero; floats count when real and negative.
    pub fn is_negative(&self) -> bool {
        match self {
            Constant::Rational(r) => r.is_negative(),
            Constant::Float(f) => f.value().im == 0.0 && f.value().re < 0.0,
        }
    }

    pub fn is_positive_real(&self) -> bool {
        match self {
            Constant::Rational(r) => r.is_positive(),
            Constant::Float(f) => f.value().im == 0.0 && f.value().re > 0.0,
        }
    }

    pub fn add(&self, other: &Constant) -> Constant {
        if let (Constant::Rational(a), Constant::Rational(b)) = (self, other) {
            if let Some(r) = a.checked_add(b) {
                return Constant::Rational(r);
            }
        }
        Constant::float(self.to_complex() + other.to_complex())
    }

    pub fn mul(&self, other: &Constant) -> Constant {
        if let (Constant::Rational(a), Constant::Rational(b)) = (self, other) {
            if let Some(r) = a.checked_mul(b) {
                return Constant::Rational(r);
            }
        }
        Constant::float(self.to_complex() * other.to_complex())
    }

    pub fn neg(&self) -> Constant {
        match self {
            Constant::Rational(r) if *r.numer() != i64::MIN => Constant::Rational(-r),
            _ => Constant::float(-self.to_complex()),
        }
    }

    /// Integer power; `None` when the result would be a division by zero.
    pub fn powi(&self, exp: i64) -> Option<Constant> {
        if self.is_zero() && exp < 0 {
            return None;
        }
        if let Constant::Rational(r) = self {
            let base = if exp < 0 { r.recip() } else { *r };
            let mut acc = Rational64::one();
            let mut ok = true;
            for _ in 0..exp.unsigned_abs() {
                match acc.checked_mul(&base) {
                    Some(v) => acc = v,
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                return Some(Constant::Rational(acc));
            }
        }
        let exp = i32::try_from(exp).ok()?;
        Some(Constant::float(self.to_complex().powi(exp)))
    }

    pub fn abs(&self) -> Constant {
        match self {
            Constant::Rational(r) => Constant::Rational(r.abs()),
            Constant::Float(f) => Constant::float(Complex64::new(f.value().norm(), 0.0)),
        }
    }
}

fn rational_to_f64(r: &Rational64) -> f64 {
    r.to_f64()
        .unwrap_or_else(|| *r.numer() as f64 / *r.denom() as f64)
}

/// Expression node. Children are owned; trees are finite by construction.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Expr {
    Const(Constant),
    Var(char),
    Add(Vec<Expr>),
    Neg(Box<Expr>),
    Mul(Vec<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Func(Func, Box<Expr>),
}

impl Expr {
    pub fn int(n: i64) -> Expr {
        Expr::Const(Constant::int(n))
    }

    pub fn rational(numer: i64, denom: i64) -> Expr {
        Expr::Const(Constant::Rational(Rational64::new(numer, denom)))
    }

    pub fn float(value: Complex64) -> Expr {
        Expr::Const(Constant::float(value))
    }

    pub fn var(name: char) -> Expr {
        Expr::Var(name)
    }

    pub fn zero() -> Expr {
        Expr::int(0)
    }

    pub fn one() -> Expr {
        Expr::int(1)
    }

    pub fn pow(self, exponent: Expr) -> Expr {
        Expr::Pow(Box::new(self), Box::new(exponent))
    }

    pub fn powi(self, exponent: i64) -> Expr {
        self.pow(Expr::int(exponent))
    }

    pub fn apply(func: Func, arg: Expr) -> Expr {
        Expr::Func(func, Box::new(arg))
    }

    pub fn exp(self) -> Expr {
        Expr::apply(Func::Exp, self)
    }

    pub fn log(self) -> Expr {
        Expr::apply(Func::Log, self)
    }

    pub fn sin(self) -> Expr {
        Expr::apply(Func::Sin, self)
    }

    pub fn cos(self) -> Expr {
        Expr::apply(Func::Cos, self)
    }

    pub fn as_const(&self) -> Option<&Constant> {
        match self {
            Expr::Const(c) => Some(c),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_const().is_some_and(Constant::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.as_const().is_some_and(Constant::is_one)
    }

    /// All variable letters occurring in the tree.
    pub fn variables(&self) -> BTreeSet<char> {
        let mut out = BTreeSet::new();
        self.collect_variables(&mut out);
        out
    }

    fn collect_variables(&self, out: &mut BTreeSet<char>) {
        match self {
            Expr::Const(_) => {}
            Expr::Var(v) => {
                out.insert(*v);
            }
            Expr::Add(xs) | Expr::Mul(xs) => xs.iter().for_each(|x| x.collect_variables(out)),
            Expr::Neg(x) | Expr::Func(_, x) => x.collect_variables(out),
            Expr::Div(a, b) | Expr::Pow(a, b) => {
                a.collect_variables(out);
                b.collect_variables(out);
            }
        }
    }

    pub fn contains_var(&self, var: char) -> bool {
        match self {
            Expr::Const(_) => false,
            Expr::Var(v) => *v == var,
            Expr::Add(xs) | Expr::Mul(xs) => xs.iter().any(|x| x.contains_var(var)),
            Expr::Neg(x) | Expr::Func(_, x) => x.contains_var(var),
            Expr::Div(a, b) | Expr::Pow(a, b) => a.contains_var(var) || b.contains_var(var),
        }
    }

    /// The single variable of this expression, `None` for constants.
    pub fn variable(&self) -> crate::Result<Option<char>> {
        let vars = self.variables();
        let mut it = vars.into_iter();
        match (it.next(), it.next()) {
            (first, None) => Ok(first),
            (Some(first), Some(second)) => Err(crate::Error::MultipleVariables { first, second }),
            (None, Some(_)) => unreachable!(),
        }
    }

    /// Replaces every occurrence of `var` by `with`.
    pub fn substitute(&self, var: char, with: &Expr) -> Expr {
        match self {
            Expr::Const(_) => self.clone(),
            Expr::Var(v) if *v == var => with.clone(),
            Expr::Var(_) => self.clone(),
            Expr::Add(xs) => Expr::Add(xs.iter().map(|x| x.substitute(var, with)).collect()),
            Expr::Mul(xs) => Expr::Mul(xs.iter().map(|x| x.substitute(var, with)).collect()),
            Expr::Neg(x) => Expr::Neg(Box::new(x.substitute(var, with))),
            Expr::Func(f, x) => Expr::Func(*f, Box::new(x.substitute(var, with))),
            Expr::Div(a, b) => Expr::Div(
                Box::new(a.substitute(var, with)),
                Box::new(b.substitute(var, with)),
            ),
            Expr::Pow(a, b) => Expr::Pow(
                Box::new(a.substitute(var, with)),
                Box::new(b.substitute(var, with)),
            ),
        }
    }

    /// Node count, used to keep an eye on expression swell.
    pub fn size(&self) -> usize {
        1 + match self {
            Expr::Const(_) | Expr::Var(_) => 0,
            Expr::Add(xs) | Expr::Mul(xs) => xs.iter().map(Expr::size).sum(),
            Expr::Neg(x) | Expr::Func(_, x) => x.size(),
            Expr::Div(a, b) | Expr::Pow(a, b) => a.size() + b.size(),
        }
    }
}

impl From<i64> for Expr {
    fn from(n: i64) -> Expr {
        Expr::int(n)
    }
}

impl std::ops::Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        Expr::Add(vec![self, rhs])
    }
}

impl std::ops::Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        Expr::Add(vec![self, Expr::Neg(Box::new(rhs))])
    }
}

impl std::ops::Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        Expr::Mul(vec![self, rhs])
    }
}

impl std::ops::Div for Expr {
    type Output = Expr;
    fn div(self, rhs: Expr) -> Expr {
        Expr::Div(Box::new(self), Box::new(rhs))
    }
}

impl std::ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::Neg(Box::new(self))
    }
}

impl std::fmt::Display for Expr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&format(self))
    }
}

impl std::str::FromStr for Expr {
    type Err = crate::Error;
    fn from_str(s: &str) -> crate::Result<Expr> {
        parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_arithmetic_stays_exact() {
        let a = Constant::Rational(Rational64::new(7, 6));
        let b = Constant::int(-1);
        assert_eq!(a.mul(&b), Constant::Rational(Rational64::new(-7, 6)));
        assert_eq!(a.add(&b), Constant::Rational(Rational64::new(1, 6)));
        assert_eq!(
            Constant::int(2).powi(-3),
            Some(Constant::Rational(Rational64::new(1, 8)))
        );
        assert_eq!(Constant::int(0).powi(-1), None);
    }

    #[test]
    fn overflow_falls_back_to_float() {
        let big = Constant::int(i64::MAX / 2);
        let prod = big.mul(&Constant::int(4));
        assert!(matches!(prod, Constant::Float(_)));
        assert!((prod.to_complex().re - 2.0 * i64::MAX as f64).abs() < 1e4);
    }

    #[test]
    fn negative_zero_float_is_zero() {
        assert_eq!(
            FloatConst::new(Complex64::new(-0.0, 0.0)),
            FloatConst::new(Complex64::new(0.0, -0.0))
        );
    }

    #[test]
    fn variable_detection() {
        let e = parse("sin(z) + z^2").unwrap();
        assert_eq!(e.variable().unwrap(), Some('z'));
        assert_eq!(parse("2 + 3").unwrap().variable().unwrap(), None);
        let mixed = Expr::var('s') * Expr::var('z');
        assert_eq!(
            mixed.variable(),
            Err(crate::Error::MultipleVariables {
                first: 's',
                second: 'z'
            })
        );
    }

    #[test]
    fn substitution_replaces_variable() {
        let k = parse("s^2").unwrap();
        let s = parse("exp(z)").unwrap();
        let composed = k.substitute('s', &s);
        let v = evaluate(&composed, Complex64::new(0.3, 0.0)).unwrap();
        assert!((v.re - (0.6f64).exp()).abs() < 1e-14);
    }
}
