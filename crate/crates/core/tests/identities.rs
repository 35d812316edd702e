use funcseries::catalog::CATALOG;
use funcseries::composite::{composite_derivative, z_derivative_via_s};
use funcseries::expr::{differentiate, evaluate};
use funcseries::series::{inverse_composite_expand, power_expansion_coefficients};
use funcseries::teixeira::{teixeira_A, ContourSpec};
use funcseries::{expand, parse, Complex64, ExpansionRequest};

fn rel_close(a: Complex64, b: Complex64, rel: f64) -> bool {
    (a - b).norm() <= rel * a.norm().max(b.norm()).max(1e-12)
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

fn points(center: f64) -> Vec<Complex64> {
    (0..8)
        .map(|k| Complex64::new(center - 0.35 + 0.1 * k as f64, 0.05 * k as f64))
        .collect()
}

const COMPOSITES: [(&str, f64); 3] = [("exp(z)", 0.0), ("sin(z)", 0.2), ("1/(z-2)", 0.0)];

#[test]
fn powers_of_the_composite_have_closed_form_derivatives() {
    for (s_text, center) in COMPOSITES {
        let s = parse(s_text).unwrap();
        for m in 1..=4usize {
            let k = parse(&format!("({s_text})^{m}")).unwrap();
            for n in 0..=m + 1 {
                let d = composite_derivative(&k, &s, n).unwrap();
                for p in points(center) {
                    let got = evaluate(&d, p).unwrap();
                    let want = if n > m {
                        Complex64::new(0.0, 0.0)
                    } else {
                        let sp = evaluate(&s, p).unwrap();
                        sp.powi((m - n) as i32) * (factorial(m) / factorial(m - n))
                    };
                    assert!(
                        (got - want).norm() <= 1e-9 * want.norm().max(1.0),
                        "s={s_text} m={m} n={n} at {p}: {got} vs {want}"
                    );
                }
            }
        }
    }
}

#[test]
fn reverse_operator_matches_direct_differentiation() {
    let ks = ["s^3", "exp(s)", "1/(1+s)", "sin(s)*s"];
    for (s_text, center) in COMPOSITES {
        let s = parse(s_text).unwrap();
        for k_text in ks {
            let k = parse(k_text).unwrap();
            let mut direct = k.substitute('s', &s);
            for n in 1..=4 {
                direct = differentiate(&direct, 'z');
                let via = z_derivative_via_s(&k, &s, n).unwrap();
                for p in points(center) {
                    let a = evaluate(&via, p).unwrap();
                    let b = evaluate(&direct, p).unwrap();
                    assert!(
                        rel_close(a, b, 1e-9),
                        "k={k_text} s={s_text} n={n} at {p}: {a} vs {b}"
                    );
                }
            }
        }
    }
}

#[test]
fn terminated_series_reproduce_f() {
    for pair in CATALOG.iter().filter(|p| p.terminates_at.is_some()) {
        let e = expand(&ExpansionRequest::new(
            pair.f_expr(),
            pair.s_expr(),
            pair.z0(),
            8,
        ))
        .unwrap();
        let m = e.terminated_at().unwrap();
        for k in 0..16 {
            let phi = std::f64::consts::TAU * k as f64 / 16.0;
            let z = pair.z0() + Complex64::from_polar(0.3 + 0.05 * k as f64, phi);
            let exact = evaluate(&pair.f_expr(), z).unwrap();
            let partial = e.partial_sum(z, m).unwrap();
            assert!(
                rel_close(partial, exact, 1e-11),
                "{} at {z}: {partial} vs {exact}",
                pair.name
            );
        }
    }
}

#[test]
fn power_in_power_closed_form() {
    for (k, m) in [(8.0f64, 2.0f64), (9.0, 3.0), (5.0, 2.0)] {
        let f = parse(&format!("{k}^(-z)")).unwrap();
        let s = parse(&format!("{m}^(-z)")).unwrap();
        let z0 = 0.25;
        let e = expand(&ExpansionRequest::new(f, s, Complex64::new(z0, 0.0), 8)).unwrap();
        let s0 = m.powf(-z0);
        let mut product = 1.0;
        for n in 0..=8 {
            if n > 0 {
                product *= (k / m.powi(n as i32 - 1)).ln();
            }
            let want =
                k.powf(-z0) * product / (factorial(n) * m.ln().powi(n as i32) * s0.powi(n as i32));
            let got = e.coefficients()[n];
            assert!(
                (got.re - want).abs() <= 1e-10 * want.abs() + 1e-13 && got.im.abs() < 1e-13,
                "k={k} M={m} n={n}: {got} vs {want}"
            );
        }
    }
}

#[test]
fn reciprocal_and_power_pairs_closed_forms() {
    let z0 = 0.5f64;
    let a = 1.0 - 2f64.powf(1.0 - z0);
    let rp = CATALOG
        .iter()
        .find(|p| p.name == "reciprocal-in-power")
        .unwrap();
    let e = expand(&ExpansionRequest::new(rp.f_expr(), rp.s_expr(), rp.z0(), 8)).unwrap();
    for n in 0..=8 {
        let want = 2f64.powi(n as i32) / a.powi(n as i32 + 1);
        assert!(
            rel_close(e.coefficients()[n], Complex64::new(want, 0.0), 1e-10),
            "n={n}"
        );
    }
    let pr = CATALOG
        .iter()
        .find(|p| p.name == "power-in-reciprocal")
        .unwrap();
    let e = expand(&ExpansionRequest::new(pr.f_expr(), pr.s_expr(), pr.z0(), 8)).unwrap();
    assert!(rel_close(
        e.coefficients()[0],
        Complex64::new(2f64.powf(-z0), 0.0),
        1e-12
    ));
    for n in 1..=8 {
        let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
        let want = sign * a.powi(n as i32 + 1) / 2.0;
        assert!(
            rel_close(e.coefficients()[n], Complex64::new(want, 0.0), 1e-10),
            "n={n}"
        );
    }
}

#[test]
fn power_law_product_formula() {
    for beta in [0.5, 1.0 / 3.0] {
        let a = power_expansion_coefficients(beta, 8).unwrap();
        let cut = (1.0 / beta).round() as usize + 1;
        assert!(a[cut..].iter().all(|&x| x == 0.0), "beta={beta}: {a:?}");
        let f = parse("exp(z)").unwrap();
        let s = parse(&format!("exp({beta}*z)")).unwrap();
        let e = expand(&ExpansionRequest::new(f, s, Complex64::new(0.0, 0.0), 8)).unwrap();
        for (n, (c, want)) in e.coefficients().iter().zip(&a).enumerate() {
            assert!(
                (c - want).norm() <= 1e-10 * want.abs().max(1.0),
                "beta={beta} n={n}: {c} vs {want}"
            );
        }
    }
}

#[test]
fn direct_and_inverse_routes_agree() {
    let cases = [
        ("exp(3*z)+z", "exp(z)", "log(z)", 0.2),
        ("sin(z)", "2^(-z)", "-log(z)/log(2)", 0.5),
        ("z^2", "1/(z-2)", "2 + 1/z", 0.0),
    ];
    for (f, s, g, z0) in cases {
        let (f, s, g) = (parse(f).unwrap(), parse(s).unwrap(), parse(g).unwrap());
        let z0 = Complex64::new(z0, 0.0);
        let direct = expand(&ExpansionRequest::new(f.clone(), s.clone(), z0, 6)).unwrap();
        let inverse = inverse_composite_expand(&f, &s, &g, z0, 6).unwrap();
        for (n, (a, b)) in direct
            .coefficients()
            .iter()
            .zip(inverse.coefficients())
            .enumerate()
        {
            assert!(rel_close(*a, *b, 1e-9), "n={n}: {a} vs {b}");
        }
    }
}

#[test]
fn partial_sums_converge_near_expansion_point() {
    let pair = CATALOG
        .iter()
        .find(|p| p.name == "rational-in-sine")
        .unwrap();
    let e = expand(&ExpansionRequest::new(
        pair.f_expr(),
        pair.s_expr(),
        pair.z0(),
        10,
    ))
    .unwrap();
    for z in [0.1, -0.2, 0.3] {
        let z = Complex64::new(z, 0.0);
        let exact = evaluate(&pair.f_expr(), z).unwrap();
        let errors: Vec<f64> = e
            .partial_sums(z)
            .unwrap()
            .iter()
            .map(|p| (p - exact).norm())
            .collect();
        assert!(
            errors[10] < errors[2] && errors[10] < 1e-3,
            "{z}: {errors:?}"
        );
    }
}

#[test]
fn teixeira_matches_taylor_coefficients() {
    let f = parse("exp(z)").unwrap();
    for z0 in [0.0, 0.4, -0.7] {
        let theta = parse(&format!("z - ({z0})")).unwrap();
        let c1 = ContourSpec::circle(Complex64::new(z0, 0.0), 1.0).unwrap();
        let e = expand(&ExpansionRequest::new(
            f.clone(),
            parse("z").unwrap(),
            Complex64::new(z0, 0.0),
            8,
        ))
        .unwrap();
        for n in 1..=8 {
            let a = teixeira_A(&f, &theta, &c1, n).unwrap();
            assert!(
                rel_close(a, e.coefficients()[n], 1e-7),
                "z0={z0} n={n}: {a} vs {}",
                e.coefficients()[n]
            );
        }
    }
}
