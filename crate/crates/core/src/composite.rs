//! Derivatives of a composite function through the operator
//! `D_s = (1/s'(z)) d/dz`.
//!
//! `D_s^n k(s(z))` equals `d^n k / ds^n` written entirely in `z`. The chain is
//! built one application at a time, each entry simplified once, which avoids
//! fully expanding the nested quotient-rule terms.

use crate::expr::{differentiate, simplify, Expr, DEFAULT_VARIABLE};
use crate::{Error, Result};

/// Variable letter reserved for the inner function in [`z_derivative_via_s`].
pub const S_VARIABLE: char = 's';

/// Cached sequence `[f, D_s f, D_s^2 f, ...]` for one `(f, s)` pair.
///
/// The cache only grows; asking for a lower order after a higher one returns
/// the stored entry.
#[derive(Clone, Debug)]
pub struct OperatorChain {
    variable: char,
    composite: Expr,
    inverse_derivative: Expr,
    entries: Vec<Expr>,
}

/// The common variable of `f` and `s`, defaulting to `z`.
pub(crate) fn shared_variable(f: &Expr, s: &Expr) -> Result<char> {
    match (f.variable()?, s.variable()?) {
        (Some(a), Some(b)) if a != b => Err(Error::MultipleVariables {
            first: a,
            second: b,
        }),
        (Some(v), _) | (None, Some(v)) => Ok(v),
        (None, None) => Ok(DEFAULT_VARIABLE),
    }
}

impl OperatorChain {
    pub fn new(f: &Expr, s: &Expr) -> Result<Self> {
        let variable = shared_variable(f, s)?;
        let ds = differentiate(s, variable);
        if ds.is_zero() {
            return Err(Error::ConstantComposite);
        }
        Ok(OperatorChain {
            variable,
            composite: s.clone(),
            inverse_derivative: simplify(&ds.powi(-1)),
            entries: vec![f.clone()],
        })
    }

    pub fn variable(&self) -> char {
        self.variable
    }

    pub fn composite(&self) -> &Expr {
        &self.composite
    }

    /// `D_s^n f`, extending the cache as needed.
    pub fn entry(&mut self, n: usize) -> &Expr {
        while self.entries.len() <= n {
            let last = self.entries.last().unwrap();
            let next = self.step(last);
            self.entries.push(next);
        }
        &self.entries[n]
    }

    /// Entries computed so far.
    pub fn entries(&self) -> &[Expr] {
        &self.entries
    }

    fn step(&self, e: &Expr) -> Expr {
        let de = crate::expr::diff_raw(e, self.variable);
        simplify(&Expr::Mul(vec![de, self.inverse_derivative.clone()]))
    }
}

/// One application of `D_s`: `(1/s'(z)) de/dz`, simplified.
pub fn apply_ds(e: &Expr, s: &Expr) -> Result<Expr> {
    let mut chain = OperatorChain::new(e, s)?;
    Ok(chain.entry(1).clone())
}

/// `D_s^n f`, i.e. `d^n f / ds^n` expressed in `z`.
pub fn composite_derivative(f: &Expr, s: &Expr, n: usize) -> Result<Expr> {
    let mut chain = OperatorChain::new(f, s)?;
    Ok(chain.entry(n).clone())
}

/// `d^n/dz^n k(s(z))` computed by applying `s'(z) d/ds` to `k(s)` `n` times
/// and substituting `s := s(z)` at the end.
///
/// Intermediate expressions mix `s` and `z`. The `d/ds` of such a mixed
/// term is the total derivative `∂/∂s + (1/s'(z)) ∂/∂z`, so each step is
/// `s'(z) ∂/∂s + ∂/∂z`.
pub fn z_derivative_via_s(k: &Expr, s: &Expr, n: usize) -> Result<Expr> {
    let kv = k.variable()?;
    if kv.is_some_and(|v| v != S_VARIABLE) {
        return Err(Error::InvalidArgument(format!(
            "outer function must use the variable `{S_VARIABLE}`"
        )));
    }
    let z = s.variable()?.ok_or(Error::ConstantComposite)?;
    if z == S_VARIABLE {
        return Err(Error::InvalidArgument(format!(
            "inner function must not use the variable `{S_VARIABLE}`"
        )));
    }
    let ds = differentiate(s, z);
    if ds.is_zero() {
        return Err(Error::ConstantComposite);
    }
    let mut current = k.clone();
    for _ in 0..n {
        let partial_s = crate::expr::diff_raw(&current, S_VARIABLE);
        let partial_z = crate::expr::diff_raw(&current, z);
        current = simplify(&(Expr::Mul(vec![ds.clone(), partial_s]) + partial_z));
    }
    Ok(simplify(&current.substitute(S_VARIABLE, s)))
}
