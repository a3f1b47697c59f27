//! The regularized normalized Laplacian
//!
//! ```text
//! L[i][j] = δ_ij - (χ[i ~ j] + α/n) / sqrt((N_i + α)(N_j + α))
//! ```
//!
//! where `N_i` is the degree of vertex `i`. The `α/n` term is applied to every
//! entry, the diagonal included. With `α = 0` an isolated vertex makes the
//! matrix undefined and assembly fails.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::{GeometricGraph, GraphKind, GraphParams};

#[derive(Debug, Clone, PartialEq)]
pub enum LaplacianRepr {
    /// Row-major `n * n` storage.
    Dense(Vec<f64>),
    /// First row of a circulant matrix; row `i` is this row rotated by `i`.
    Circulant(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegularizedLaplacian {
    n: usize,
    alpha: f64,
    repr: LaplacianRepr,
    source: GraphParams,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub graph: GraphParams,
    pub alpha: f64,
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha >= 0.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(
            "alpha",
            format!("regularizer must be finite and >= 0, got {alpha}"),
        ))
    }
}

/// Entry for a pair with adjacency indicator `edge`. Used by both
/// representations so they agree bit for bit.
#[inline]
fn off_weight(edge: bool, deg_i: usize, deg_j: usize, alpha: f64, n: usize) -> f64 {
    let chi = if edge { 1.0 } else { 0.0 };
    (chi + alpha / n as f64) / ((deg_i as f64 + alpha) * (deg_j as f64 + alpha)).sqrt()
}

/// Dense assembly from any geometric graph.
pub fn assemble(g: &GeometricGraph, alpha: f64) -> Result<RegularizedLaplacian> {
    check_alpha(alpha)?;
    if alpha == 0.0 {
        if let Some(vertex) = g.first_isolated_vertex() {
            return Err(Error::IsolatedVertex { vertex });
        }
    }
    let n = g.n();
    let deg = g.degrees();
    let mut data = vec![0.0; n * n];
    let mut adjacent = vec![false; n];
    for i in 0..n {
        for &j in g.neighbors(i) {
            adjacent[j as usize] = true;
        }
        data[i * n + i] = 1.0 - off_weight(false, deg[i], deg[i], alpha, n);
        for j in i + 1..n {
            let w = -off_weight(adjacent[j], deg[i], deg[j], alpha, n);
            data[i * n + j] = w;
            data[j * n + i] = w;
        }
        for &j in g.neighbors(i) {
            adjacent[j as usize] = false;
        }
    }
    Ok(RegularizedLaplacian {
        n,
        alpha,
        repr: LaplacianRepr::Dense(data),
        source: *g.params(),
    })
}

/// Circulant assembly for the one-dimensional lattice graph, storing only
/// the first row.
pub fn assemble_circulant(g: &GeometricGraph, alpha: f64) -> Result<RegularizedLaplacian> {
    check_alpha(alpha)?;
    if g.kind() != GraphKind::Dgg || g.dim() != 1 {
        return Err(Error::Unsupported(format!(
            "circulant assembly needs a 1-d lattice graph, got {} with d = {}",
            g.kind(),
            g.dim()
        )));
    }
    let n = g.n();
    let degree = g.degrees()[0];
    if alpha == 0.0 && degree == 0 {
        return Err(Error::IsolatedVertex { vertex: 0 });
    }
    let mut row: Vec<f64> = (0..n)
        .map(|_| -off_weight(false, degree, degree, alpha, n))
        .collect();
    for &j in g.neighbors(0) {
        row[j as usize] = -off_weight(true, degree, degree, alpha, n);
    }
    row[0] = 1.0 - off_weight(false, degree, degree, alpha, n);
    Ok(RegularizedLaplacian {
        n,
        alpha,
        repr: LaplacianRepr::Circulant(row),
        source: *g.params(),
    })
}

impl RegularizedLaplacian {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn repr(&self) -> &LaplacianRepr {
        &self.repr
    }

    pub fn provenance(&self) -> Provenance {
        Provenance {
            graph: self.source,
            alpha: self.alpha,
        }
    }

    pub fn is_circulant(&self) -> bool {
        matches!(self.repr, LaplacianRepr::Circulant(_))
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        match &self.repr {
            LaplacianRepr::Dense(data) => data[i * self.n + j],
            LaplacianRepr::Circulant(row) => row[(j + self.n - i) % self.n],
        }
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    /// Dense row-major copy of the matrix.
    pub fn to_dense(&self) -> Vec<f64> {
        match &self.repr {
            LaplacianRepr::Dense(data) => data.clone(),
            LaplacianRepr::Circulant(_) => {
                let n = self.n;
                (0..n * n).map(|k| self.get(k / n, k % n)).collect()
            }
        }
    }

    /// The same operator in dense representation.
    pub fn expand(&self) -> RegularizedLaplacian {
        RegularizedLaplacian {
            n: self.n,
            alpha: self.alpha,
            repr: LaplacianRepr::Dense(self.to_dense()),
            source: self.source,
        }
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }
}
