//! Closed-form spectra of the one-dimensional lattice graph.
//!
//! With `k = a'` neighbors (`k/2` on each side), the adjacency eigenvalue of
//! Fourier mode `m` is `D(mπ/n, k) - 1` with the Dirichlet ratio
//! `D(w, k) = sin(w (k + 1)) / sin(w)`. Normalizing gives
//!
//! ```text
//! λ_m = 1 - (D(mπ/n, a') - 1) / a'                            (α = 0)
//! λ_w = 1 - D(w, γ') / (γ' + α) + (1 - α δ_w) / (γ' + α)      (w ∈ [0, π])
//! ```
//!
//! The first is exact at finite `n`; the second is its `n → ∞` form with
//! the regularizer, sampled on a uniform grid of `w`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::Metric;
use crate::graphs::LATTICE_SLACK;
use crate::spectra::SpectralDistribution;

/// Below this `|sin w|` the ratio is replaced by its analytic limit.
const SINGULAR_SIN: f64 = 1e-12;

/// `sin(w (k + 1)) / sin(w)` on `[0, π]`, with the removable singularities
/// at `0` and `π` evaluated as `(k + 1) (-1)^(j k)` for `w ≈ jπ`.
pub fn dirichlet_ratio(w: f64, k: u64) -> Result<f64> {
    if !(0.0..=PI).contains(&w) {
        return Err(Error::invalid("w", format!("must lie in [0, π], got {w}")));
    }
    let s = w.sin();
    if s.abs() < SINGULAR_SIN {
        let j = (w / PI).round() as u64;
        let sign = if (j * k).is_multiple_of(2) { 1.0 } else { -1.0 };
        return Ok(sign * (k + 1) as f64);
    }
    Ok((w * (k + 1) as f64).sin() / s)
}

/// `D(mπ/n, k)` with both phases reduced exactly modulo `2π`.
fn dirichlet_ratio_mode(m: usize, n: usize, k: u64) -> f64 {
    if m == 0 {
        return (k + 1) as f64;
    }
    let period = 2 * n as u128;
    let phase = |numer: u128| PI * (numer % period) as f64 / n as f64;
    phase(m as u128 * (k as u128 + 1)).sin() / phase(m as u128).sin()
}

/// Lattice degree `2 floor(n r)` of the 1-d euclidean grid graph, with the
/// same rounding slack as the graph builder.
pub fn lattice_degree(n: usize, r: f64) -> u64 {
    2 * (n as f64 * r * (1.0 + LATTICE_SLACK)).floor() as u64
}

/// `2 floor(γ)`.
pub fn gamma_prime(gamma: f64) -> u64 {
    2 * gamma.floor() as u64
}

/// Per-mode eigenvalues `λ_0, ..., λ_{n-1}` of the unregularized lattice
/// Laplacian.
pub fn lemma1_modes(n: usize, r: f64) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::invalid("n", "need at least one vertex"));
    }
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::invalid(
            "r",
            format!("radius must be positive, got {r}"),
        ));
    }
    let degree = lattice_degree(n, r);
    if degree == 0 {
        return Err(Error::invalid(
            "r",
            format!("floor(n r) = 0 for n = {n}, r = {r}: the lattice graph has no edges"),
        ));
    }
    if degree >= n as u64 {
        return Err(Error::invalid(
            "r",
            format!("2 floor(n r) = {degree} >= n = {n}: neighbor windows overlap around the ring"),
        ));
    }
    let a = degree as f64;
    Ok((0..n)
        .map(|m| 1.0 - (dirichlet_ratio_mode(m, n, degree) - 1.0) / a)
        .collect())
}

pub fn lemma1_spectrum(n: usize, r: f64) -> Result<SpectralDistribution> {
    SpectralDistribution::new(lemma1_modes(n, r)?, format!("lemma1 n={n} r={r}"))
}

/// The closed forms hold for the euclidean ring only; other metrics and
/// dimensions are rejected rather than approximated.
pub fn require_closed_form(d: usize, metric: Metric) -> Result<()> {
    if d == 1 && metric == Metric::Euclidean {
        Ok(())
    } else {
        Err(Error::Unsupported(format!(
            "closed-form lattice spectra need d = 1 and the euclidean metric, got d = {d}, {metric}"
        )))
    }
}

fn check_gamma(gamma: f64) -> Result<()> {
    if gamma >= 2.0 && gamma.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(
            "gamma",
            format!("must be finite and >= 2, got {gamma}"),
        ))
    }
}

/// Limiting eigenvalue at frequency `w` for mean degree `γ` and regularizer `α`.
pub fn lemma2_eigenvalue(w: f64, gamma: f64, alpha: f64) -> Result<f64> {
    check_gamma(gamma)?;
    if !(alpha >= 0.0 && alpha.is_finite()) {
        return Err(Error::invalid(
            "alpha",
            format!("must be finite and >= 0, got {alpha}"),
        ));
    }
    let gp = gamma_prime(gamma);
    let delta = if w == 0.0 { 1.0 } else { 0.0 };
    let scale = gp as f64 + alpha;
    // 1 - D/(γ'+α) + (1 - αδ)/(γ'+α), grouped so the w = 0 mode cancels exactly
    Ok(1.0 - ((dirichlet_ratio(w, gp)? - 1.0) + alpha * delta) / scale)
}

/// The limiting law sampled at `w_j = jπ/M`, `j = 0..M`.
pub fn lemma2_spectrum(gamma: f64, alpha: f64, samples: usize) -> Result<SpectralDistribution> {
    if samples < 2 {
        return Err(Error::invalid(
            "samples",
            format!("need at least 2, got {samples}"),
        ));
    }
    let values = (0..samples)
        .map(|j| lemma2_eigenvalue(j as f64 * PI / samples as f64, gamma, alpha))
        .collect::<Result<Vec<_>>>()?;
    SpectralDistribution::new(
        values,
        format!("lemma2 gamma={gamma} alpha={alpha} M={samples}"),
    )
}
