//! Functional power series.
//!
//! Expands an analytic function `f(z)` as a power series in another analytic
//! function `s(z)`:
//!
//! ```text
//! f(z) = sum_n c_n (s(z) - s(z0))^n,   c_n = [(1/s'(z) d/dz)^n f]_{z0} / n!
//! ```
//!
//! The crate contains a small expression engine ([`expr`]), the iterated
//! composite-derivative operator ([`composite`]), the expansion itself
//! ([`series`]), an independent truncated-series oracle ([`oracle`]),
//! truncation-error estimates ([`remainder`]) and a contour-quadrature
//! implementation of Teixeira's two-sided expansion ([`teixeira`]).

pub mod catalog;
pub mod composite;
mod error;
pub mod expr;
pub mod oracle;
pub mod remainder;
pub mod series;
pub mod teixeira;

pub use error::{Error, Result};
pub use expr::{parse, Expr};
pub use num_complex::Complex64;
pub use series::{expand, ExpansionRequest, SeriesExpansion, Tolerances};
