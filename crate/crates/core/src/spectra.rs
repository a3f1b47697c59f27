//! Full spectra of regularized Laplacians and their empirical spectral
//! distributions.

use std::f64::consts::PI;

use faer::{Mat, Side};

use crate::error::{Error, Result};
use crate::laplacian::{LaplacianRepr, RegularizedLaplacian};

pub const DEFAULT_DENSE_CAP: usize = 8192;

/// Imaginary parts of circulant eigenvalues above this (relative to the
/// row's absolute sum) indicate an asymmetric first row.
const IMAGINARY_TOLERANCE: f64 = 1e-9;

/// Sorted eigenvalue multiset with the right-continuous CDF
/// `F(x) = #{λ <= x} / n`. Equal eigenvalues stay separate atoms.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDistribution {
    eigenvalues: Vec<f64>,
    label: String,
}

impl SpectralDistribution {
    pub fn new(mut eigenvalues: Vec<f64>, label: impl Into<String>) -> Result<Self> {
        if eigenvalues.is_empty() {
            return Err(Error::invalid("eigenvalues", "spectrum is empty"));
        }
        if let Some(x) = eigenvalues.iter().find(|x| !x.is_finite()) {
            return Err(Error::invalid(
                "eigenvalues",
                format!("non-finite value {x}"),
            ));
        }
        eigenvalues.sort_by(f64::total_cmp);
        Ok(Self {
            eigenvalues,
            label: label.into(),
        })
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues[self.eigenvalues.len() - 1]
    }

    /// Number of eigenvalues `<= x`.
    pub fn count_le(&self, x: f64) -> usize {
        self.eigenvalues.partition_point(|&v| v <= x)
    }

    pub fn cdf(&self, x: f64) -> f64 {
        self.count_le(x) as f64 / self.len() as f64
    }

    /// Fraction of the mass in the closed interval `[lo, hi]`.
    pub fn mass_in(&self, lo: f64, hi: f64) -> f64 {
        let below = self.eigenvalues.partition_point(|&v| v < lo);
        self.count_le(hi).saturating_sub(below) as f64 / self.len() as f64
    }

    pub fn sum(&self) -> f64 {
        self.eigenvalues.iter().sum()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct EigenOptions {
    /// Largest order accepted by the dense solver.
    pub cap: usize,
    /// Also compute eigenvectors and check `max ||L v - λ v|| <= 1e-8 n`.
    pub verify: bool,
}

impl Default for EigenOptions {
    fn default() -> Self {
        Self {
            cap: DEFAULT_DENSE_CAP,
            verify: false,
        }
    }
}

fn to_faer(l: &RegularizedLaplacian) -> Mat<f64> {
    let n = l.n();
    match l.repr() {
        LaplacianRepr::Dense(data) => Mat::from_fn(n, n, |i, j| data[i * n + j]),
        LaplacianRepr::Circulant(_) => Mat::from_fn(n, n, |i, j| l.get(i, j)),
    }
}

/// All eigenvalues via a dense symmetric eigensolver (Householder
/// tridiagonalization followed by a tridiagonal solve). A circulant operator
/// is expanded first.
pub fn eigenvalues_dense(
    l: &RegularizedLaplacian,
    opts: &EigenOptions,
) -> Result<SpectralDistribution> {
    let n = l.n();
    if n > opts.cap {
        return Err(Error::CapExceeded { n, cap: opts.cap });
    }
    let m = to_faer(l);
    let values = if opts.verify {
        let (values, residual) = solve_with_residual(&m)?;
        let bound = 1e-8 * n as f64;
        if residual > bound {
            return Err(Error::Eigensolver(format!(
                "residual {residual:e} exceeds {bound:e}"
            )));
        }
        values
    } else {
        m.self_adjoint_eigenvalues(Side::Lower)
            .map_err(|e| Error::Eigensolver(format!("{e:?}")))?
    };
    SpectralDistribution::new(values, "dense")
}

/// Largest eigenpair residual `max_i ||L v_i - λ_i v_i||` of the dense solve.
pub fn dense_residual(l: &RegularizedLaplacian, opts: &EigenOptions) -> Result<f64> {
    if l.n() > opts.cap {
        return Err(Error::CapExceeded {
            n: l.n(),
            cap: opts.cap,
        });
    }
    solve_with_residual(&to_faer(l)).map(|(_, r)| r)
}

fn solve_with_residual(m: &Mat<f64>) -> Result<(Vec<f64>, f64)> {
    let evd = m
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Eigensolver(format!("{e:?}")))?;
    let n = m.nrows();
    let u = evd.U();
    let s = evd.S().column_vector();
    let values: Vec<f64> = (0..n).map(|i| s[i]).collect();
    let lu = m * u;
    let residual = (0..n)
        .map(|k| {
            (0..n)
                .map(|i| {
                    let r = lu[(i, k)] - values[k] * u[(i, k)];
                    r * r
                })
                .sum::<f64>()
                .sqrt()
        })
        .fold(0.0, f64::max);
    Ok((values, residual))
}

/// Eigenvalues of a real symmetric circulant by mode index:
/// `λ_m = Σ_k c_k exp(-2πi m k / n)`.
///
/// The row is split into a constant background plus a sparse remainder, so
/// the transform costs `O(n * nnz)` where `nnz` counts entries that differ
/// from the most common value. Phases are reduced exactly with integer
/// arithmetic before evaluating the trigonometric functions.
pub fn circulant_modes(row: &[f64]) -> Result<Vec<f64>> {
    let n = row.len();
    if n == 0 {
        return Err(Error::invalid("row", "empty circulant row"));
    }
    let background = most_common(row);
    let sparse: Vec<(usize, f64)> = row
        .iter()
        .enumerate()
        .filter(|&(_, &c)| c != background)
        .map(|(k, &c)| (k, c - background))
        .collect();
    let scale = row.iter().map(|c| c.abs()).sum::<f64>().max(1.0);

    let mut modes = Vec::with_capacity(n);
    for m in 0..n {
        let (mut re, mut im) = (0.0, 0.0);
        for &(k, c) in &sparse {
            let phase = 2.0 * PI * ((m * k) % n) as f64 / n as f64;
            re += c * phase.cos();
            im -= c * phase.sin();
        }
        if m == 0 {
            re += background * n as f64;
        }
        if im.abs() > IMAGINARY_TOLERANCE * scale {
            return Err(Error::ImaginaryResidue {
                mode: m,
                residue: im.abs(),
            });
        }
        modes.push(re);
    }
    Ok(modes)
}

fn most_common(row: &[f64]) -> f64 {
    let mut sorted = row.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut best = (sorted[0], 0usize);
    let mut start = 0;
    for i in 1..=sorted.len() {
        if i == sorted.len() || sorted[i] != sorted[start] {
            if i - start > best.1 {
                best = (sorted[start], i - start);
            }
            start = i;
        }
    }
    best.0
}

/// Spectrum of a circulant-represented Laplacian through its discrete
/// Fourier transform.
pub fn eigenvalues_circulant(l: &RegularizedLaplacian) -> Result<SpectralDistribution> {
    match l.repr() {
        LaplacianRepr::Circulant(row) => {
            SpectralDistribution::new(circulant_modes(row)?, "circulant")
        }
        LaplacianRepr::Dense(_) => Err(Error::Unsupported(
            "circulant eigensolve needs a circulant representation".into(),
        )),
    }
}

/// Picks the circulant route when available, the dense solver otherwise.
pub fn eigenvalues(l: &RegularizedLaplacian, opts: &EigenOptions) -> Result<SpectralDistribution> {
    if l.is_circulant() {
        eigenvalues_circulant(l)
    } else {
        eigenvalues_dense(l, opts)
    }
}
