use funcseries::catalog::CATALOG;
use funcseries::composite::OperatorChain;
use funcseries::oracle::{oracle_coefficients, reconstruct, ts_from_expr, TruncatedSeries};
use funcseries::{expand, parse, Complex64, ExpansionRequest};

fn rel_close(a: Complex64, b: Complex64, rel: f64, floor: f64) -> bool {
    (a - b).norm() <= rel * a.norm().max(b.norm()).max(floor)
}

#[test]
fn engine_matches_oracle_on_catalog() {
    for pair in CATALOG {
        let req = ExpansionRequest::new(pair.f_expr(), pair.s_expr(), pair.z0(), 10);
        let engine = expand(&req).unwrap();
        let oracle = oracle_coefficients(&pair.f_expr(), &pair.s_expr(), pair.z0(), 10).unwrap();
        let floor = 1e-10 * engine.coefficients()[0].norm().max(1.0);
        for (n, (e, o)) in engine.coefficients().iter().zip(&oracle).enumerate() {
            if e.norm() < floor && o.norm() < floor {
                continue;
            }
            assert!(
                rel_close(*e, *o, 1e-8, 0.0),
                "{} c_{n}: {e} vs {o}",
                pair.name
            );
        }
        assert_eq!(engine.terminated_at(), pair.terminates_at, "{}", pair.name);
    }
}

/// Reconstructing `sum c_n u^n` reproduces the Taylor data of `f`. The
/// tolerance is relative to the magnitude of the summands, `sum |c_n| |(u^n)_k|`,
/// since several catalog pairs reach tiny coefficients through cancellation.
#[test]
fn oracle_reconstruction_reproduces_target() {
    for pair in CATALOG {
        let order = 10;
        let c = oracle_coefficients(&pair.f_expr(), &pair.s_expr(), pair.z0(), order).unwrap();
        let target = ts_from_expr(&pair.f_expr(), pair.z0(), order).unwrap();
        let u = ts_from_expr(&pair.s_expr(), pair.z0(), order)
            .unwrap()
            .without_constant();
        let back = reconstruct(&c, &u).unwrap();
        let mut power = TruncatedSeries::constant(Complex64::new(1.0, 0.0), order);
        let mut magnitude = vec![0.0; order + 1];
        for cn in &c {
            for (k, m) in magnitude.iter_mut().enumerate() {
                *m += cn.norm() * power.coeffs()[k].norm();
            }
            power = power.mul(&u);
        }
        for (k, (a, b)) in back.coeffs().iter().zip(target.coeffs()).enumerate() {
            assert!(
                (a - b).norm() <= 1e-11 * magnitude[k].max(b.norm()),
                "{} t^{k}: {a} vs {b}",
                pair.name
            );
        }
    }
}

#[test]
fn taylor_reduction() {
    type Coefficient = fn(f64, usize) -> f64;
    let exact: [(&str, Coefficient); 3] = [
        ("exp(z)", |z0, n| z0.exp() / factorial(n)),
        ("sin(z)", |z0, n| {
            let d = match n % 4 {
                0 => z0.sin(),
                1 => z0.cos(),
                2 => -z0.sin(),
                _ => -z0.cos(),
            };
            d / factorial(n)
        }),
        ("1/(1+z)", |z0, n| {
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            sign / (1.0 + z0).powi(n as i32 + 1)
        }),
    ];
    for (f, taylor) in exact {
        for z0 in [0.0, 0.3] {
            let req = ExpansionRequest::new(
                parse(f).unwrap(),
                parse("z").unwrap(),
                Complex64::new(z0, 0.0),
                8,
            );
            let e = expand(&req).unwrap();
            for n in 0..=8 {
                let want = Complex64::new(taylor(z0, n), 0.0);
                assert!(
                    rel_close(e.coefficients()[n], want, 1e-10, 1e-300),
                    "{f} at {z0}, n={n}: {} vs {want}",
                    e.coefficients()[n]
                );
            }
        }
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

#[test]
fn linearity_in_f() {
    let s = parse("sin(z)").unwrap();
    let z0 = Complex64::new(0.1, 0.0);
    let f = parse("exp(z)").unwrap();
    let g = parse("1/(2+z)").unwrap();
    let combo = parse("3*exp(z) - 1/2/(2+z)").unwrap();
    let cf = expand(&ExpansionRequest::new(f, s.clone(), z0, 8)).unwrap();
    let cg = expand(&ExpansionRequest::new(g, s.clone(), z0, 8)).unwrap();
    let cc = expand(&ExpansionRequest::new(combo, s, z0, 8)).unwrap();
    for n in 0..=8 {
        let want = 3.0 * cf.coefficients()[n] - 0.5 * cg.coefficients()[n];
        assert!(rel_close(cc.coefficients()[n], want, 1e-10, 1e-12), "n={n}");
    }
}

#[test]
fn chain_swell_stays_bounded() {
    for pair in CATALOG {
        let mut chain = OperatorChain::new(&pair.f_expr(), &pair.s_expr()).unwrap();
        let size = chain.entry(10).size();
        assert!(size < 20_000, "{}: entry 10 has {size} nodes", pair.name);
    }
}
