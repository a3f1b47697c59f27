//! Distances between spectral distributions: the Lévy metric and the
//! Kolmogorov–Smirnov distance.
//!
//! For distribution functions `F`, `G` the Lévy distance is
//!
//! ```text
//! L(F, G) = inf { ε > 0 : F(x - ε) - ε <= G(x) <= F(x + ε) + ε  for all x }
//! ```
//!
//! For step functions the two conditions reduce to
//! `sup_x [G(x) - F(x + ε)] <= ε` and `sup_x [F(x) - G(x + ε)] <= ε`, each a
//! supremum of a right-continuous step function that is attained at one of
//! its breakpoints. Feasibility of a given `ε` is therefore decided exactly
//! by a merge over the two atom lists, and `ε` is found by bisection.

use serde::{Deserialize, Serialize};

use crate::spectra::SpectralDistribution;

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistanceReport {
    pub levy: f64,
    pub levy_cubed: f64,
    pub ks: f64,
    /// Bisection stopping width of the Lévy computation.
    pub tolerance: f64,
}

impl DistanceReport {
    pub fn compute(f: &SpectralDistribution, g: &SpectralDistribution, tol: f64) -> Self {
        let levy = levy_distance(f, g, tol);
        Self {
            levy,
            levy_cubed: levy.powi(3),
            ks: ks_distance(f, g),
            tolerance: tol,
        }
    }
}

/// `sup_x [#{a <= x}/|a| - #{b + shift <= x}/|b|]`, at least 0 (its value
/// at `-∞`). Both slices must be sorted.
fn sup_difference(a: &[f64], b: &[f64], shift: f64) -> f64 {
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut best = 0.0f64;
    while i < a.len() || j < b.len() {
        let next_a = a.get(i).copied().unwrap_or(f64::INFINITY);
        let next_b = b.get(j).map_or(f64::INFINITY, |&v| v + shift);
        let x = next_a.min(next_b);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] + shift <= x {
            j += 1;
        }
        best = best.max(i as f64 / na - j as f64 / nb);
    }
    best
}

fn feasible(f: &[f64], g: &[f64], eps: f64) -> bool {
    sup_difference(g, f, -eps) <= eps && sup_difference(f, g, -eps) <= eps
}

/// Lévy distance, accurate to within `tol` above the true infimum.
pub fn levy_distance(f: &SpectralDistribution, g: &SpectralDistribution, tol: f64) -> f64 {
    assert!(tol > 0.0, "tolerance must be positive");
    let (a, b) = (f.eigenvalues(), g.eigenvalues());
    if feasible(a, b, 0.0) {
        return 0.0;
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if feasible(a, b, mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// `sup_x |F(x) - G(x)|`.
pub fn ks_distance(f: &SpectralDistribution, g: &SpectralDistribution) -> f64 {
    let (a, b) = (f.eigenvalues(), g.eigenvalues());
    sup_difference(a, b, 0.0).max(sup_difference(b, a, 0.0))
}
