//! Fixed `(f, s, z0)` pairs used as a regression corpus by the tests, the
//! `check` command and the demo page.

use num_complex::Complex64;

use crate::expr::{parse, Expr};

#[derive(Clone, Copy, Debug)]
pub struct CatalogPair {
    pub name: &'static str,
    pub f: &'static str,
    pub s: &'static str,
    pub z0: f64,
    /// Index past which every coefficient vanishes, if the series terminates.
    pub terminates_at: Option<usize>,
}

impl CatalogPair {
    pub fn f_expr(&self) -> Expr {
        parse(self.f).expect("catalog expressions parse")
    }

    pub fn s_expr(&self) -> Expr {
        parse(self.s).expect("catalog expressions parse")
    }

    pub fn z0(&self) -> Complex64 {
        Complex64::new(self.z0, 0.0)
    }
}

pub const CATALOG: &[CatalogPair] = &[
    CatalogPair {
        name: "rational-in-sine",
        f: "1/(1+z)",
        s: "sin(z)",
        z0: 0.0,
        terminates_at: None,
    },
    CatalogPair {
        name: "reciprocal-in-power",
        f: "1/(1-2^(1-z))",
        s: "2^(-z)",
        z0: 0.5,
        terminates_at: None,
    },
    CatalogPair {
        name: "power-in-reciprocal",
        f: "2^(-z)",
        s: "1/(1-2^(1-z))",
        z0: 0.5,
        terminates_at: None,
    },
    CatalogPair {
        name: "power-8-in-2",
        f: "8^(-z)",
        s: "2^(-z)",
        z0: 0.0,
        terminates_at: Some(3),
    },
    CatalogPair {
        name: "power-9-in-3",
        f: "9^(-z)",
        s: "3^(-z)",
        z0: 0.0,
        terminates_at: Some(2),
    },
    CatalogPair {
        name: "power-5-in-2",
        f: "5^(-z)",
        s: "2^(-z)",
        z0: 0.0,
        terminates_at: None,
    },
    CatalogPair {
        name: "degenerate-rational",
        f: "1/(z-2)^2",
        s: "1/(z-2)",
        z0: 0.0,
        terminates_at: Some(2),
    },
    CatalogPair {
        name: "exp-square",
        f: "exp(2*z)",
        s: "exp(z)",
        z0: 0.0,
        terminates_at: Some(2),
    },
];

pub fn find(name: &str) -> Option<&'static CatalogPair> {
    CATALOG.iter().find(|p| p.name == name)
}
