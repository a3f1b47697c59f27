use proptest::prelude::*;
use torus_spectra::{ks_distance, levy_distance, DistanceReport, SpectralDistribution};

const TOL: f64 = 1e-9;

fn dist(v: Vec<f64>) -> SpectralDistribution {
    SpectralDistribution::new(v, "p").unwrap()
}

fn atoms() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0f64..2.0, 1..40)
}

/// Smallest feasible `ε` on the grid `k h`, checking the defining
/// inequalities on a dense set of abscissae.
fn grid_oracle(f: &SpectralDistribution, g: &SpectralDistribution, h: f64) -> f64 {
    let xs: Vec<f64> = (0..=800).map(|i| -1.0 + i as f64 * 5e-3).collect();
    let mut k = 0;
    loop {
        let eps = k as f64 * h;
        let mut probe = xs.clone();
        for &a in f.eigenvalues().iter().chain(g.eigenvalues()) {
            for s in [-eps, 0.0, eps] {
                probe.extend([a + s, a + s - 1e-7]);
            }
        }
        if probe
            .iter()
            .all(|&x| f.cdf(x - eps) - eps <= g.cdf(x) && g.cdf(x) <= f.cdf(x + eps) + eps)
        {
            return eps;
        }
        k += 1;
    }
}

#[test]
fn matches_grid_oracle_on_fixed_pairs() {
    let cases = [
        (vec![0.0, 1.0], vec![0.5, 1.5]),
        (vec![0.1, 0.2, 0.3, 1.9], vec![0.15, 0.2, 1.0]),
        (vec![1.0; 10], vec![0.0, 2.0]),
        (vec![0.3], vec![0.3, 0.3, 0.31, 1.2]),
    ];
    let h = 1e-3;
    for (a, b) in cases {
        let (f, g) = (dist(a), dist(b));
        let l = levy_distance(&f, &g, TOL);
        let oracle = grid_oracle(&f, &g, h);
        assert!(
            l <= oracle + 2.0 * TOL && l >= oracle - h - 2.0 * TOL,
            "{l} vs {oracle}"
        );
    }
}

#[test]
fn known_values() {
    // shifting every atom by s costs s while s is below the smallest jump
    let f = dist(vec![0.2, 0.5, 0.9]);
    let g = dist(vec![0.45, 0.75, 1.15]);
    assert!((levy_distance(&f, &g, TOL) - 0.25).abs() <= 2.0 * TOL);
    assert!((ks_distance(&f, &g) - 1.0 / 3.0).abs() < 1e-15);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn metric_axioms(a in atoms(), b in atoms(), c in atoms()) {
        let (f, g, h) = (dist(a), dist(b), dist(c));
        let fg = levy_distance(&f, &g, TOL);
        prop_assert_eq!(levy_distance(&f, &f, TOL), 0.0);
        prop_assert!((fg - levy_distance(&g, &f, TOL)).abs() <= TOL);
        prop_assert!(fg <= levy_distance(&f, &h, TOL) + levy_distance(&h, &g, TOL) + 3.0 * TOL);
        prop_assert!((0.0..=1.0).contains(&fg));
    }

    #[test]
    fn levy_bounded_by_ks(a in atoms(), b in atoms()) {
        let (f, g) = (dist(a), dist(b));
        let r = DistanceReport::compute(&f, &g, TOL);
        prop_assert!(r.levy <= r.ks + TOL);
        prop_assert!((0.0..=1.0).contains(&r.ks));
        prop_assert_eq!(r.levy_cubed, r.levy.powi(3));
    }

    #[test]
    fn shift_is_lipschitz(a in atoms(), s in -0.9f64..0.9) {
        let shifted: Vec<f64> = a.iter().map(|x| x + s).collect();
        let l = levy_distance(&dist(a), &dist(shifted), TOL);
        prop_assert!(l <= s.abs() + 2.0 * TOL);
    }

    #[test]
    fn matches_grid_oracle(a in prop::collection::vec(0.0f64..2.0, 1..12), b in prop::collection::vec(0.0f64..2.0, 1..12)) {
        let (f, g) = (dist(a), dist(b));
        let l = levy_distance(&f, &g, TOL);
        let h = 2e-3;
        let oracle = grid_oracle(&f, &g, h);
        prop_assert!(l <= oracle + 2.0 * TOL, "{} > oracle {}", l, oracle);
        prop_assert!(l >= oracle - h - 2.0 * TOL, "{} < oracle {} - h", l, oracle);
    }
}
