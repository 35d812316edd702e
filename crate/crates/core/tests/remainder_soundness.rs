use funcseries::catalog::find;
use funcseries::remainder::{lagrange_bound, measured_error, DEFAULT_SAMPLES};
use funcseries::{expand, Complex64, ExpansionRequest};

/// Catalog pairs whose composite is monotone on the listed real segments.
const REAL_CASES: &[(&str, &[f64])] = &[
    ("rational-in-sine", &[-0.5, -0.3, -0.1, 0.1, 0.3, 0.5]),
    ("reciprocal-in-power", &[0.1, 0.3, 0.7, 0.8]),
    ("power-in-reciprocal", &[0.2, 0.4, 0.6, 0.8]),
    ("power-5-in-2", &[-0.6, -0.2, 0.3, 0.7]),
    ("degenerate-rational", &[-0.8, -0.3, 0.4, 1.0]),
    ("exp-square", &[-0.5, 0.5]),
];

#[test]
fn measured_error_never_exceeds_lagrange_bound() {
    for (name, zs) in REAL_CASES {
        let pair = find(name).unwrap();
        let e = expand(&ExpansionRequest::new(
            pair.f_expr(),
            pair.s_expr(),
            pair.z0(),
            6,
        ))
        .unwrap();
        for &z in *zs {
            for n in 0..=6 {
                let bound = lagrange_bound(&e, z, n, DEFAULT_SAMPLES).unwrap().bound;
                let measured = measured_error(&e, Complex64::new(z, 0.0), n).unwrap().bound;
                // terminated series leave rounding-level residue on both sides
                assert!(
                    measured <= bound + 1e-12,
                    "{name} z={z} N={n}: {measured} > {bound}"
                );
            }
        }
    }
}

#[test]
fn error_shrinks_with_order_on_sine_case() {
    let pair = find("rational-in-sine").unwrap();
    let e = expand(&ExpansionRequest::new(
        pair.f_expr(),
        pair.s_expr(),
        pair.z0(),
        6,
    ))
    .unwrap();
    let grid: Vec<f64> = (0..=40).map(|i| -0.5 + 0.025 * i as f64).collect();
    let worst = |n: usize| {
        grid.iter()
            .map(|&z| measured_error(&e, Complex64::new(z, 0.0), n).unwrap().bound)
            .fold(0.0, f64::max)
    };
    for n in 0..3 {
        assert!(worst(n + 1) < worst(n), "S{} vs S{n}", n + 1);
    }
}
