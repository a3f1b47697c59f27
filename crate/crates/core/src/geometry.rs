//! Points on the unit torus `[0,1)^d`, minimum-image metrics and unit-ball
//! volumes.
//!
//! Every coordinate is reduced modulo 1 when a point is built, so distances
//! never need to re-normalize. The per-axis displacement on the torus is
//! `min(|a - b|, 1 - |a - b|)`; metrics combine these displacements.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};

/// Distance on the torus, applied after the minimum-image reduction per axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Euclidean,
    Chebyshev,
    /// The `l_p` norm, `p >= 1`.
    Lp(f64),
}

impl Metric {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Metric::Lp(p) if !(p >= 1.0 && p.is_finite()) => Err(Error::invalid(
                "metric",
                format!("l_p requires finite p >= 1, got {p}"),
            )),
            _ => Ok(()),
        }
    }

    /// Distance between two coordinate slices of equal length. Callers check
    /// the dimensions.
    #[inline]
    pub fn distance(&self, a: &[f64], b: &[f64]) -> f64 {
        debug_assert_eq!(a.len(), b.len());
        self.norm(a.iter().zip(b).map(|(x, y)| wrap_delta(*x - *y)))
    }

    /// Norm of a displacement given by its nonnegative per-axis lengths.
    #[inline]
    pub fn norm(&self, axes: impl Iterator<Item = f64>) -> f64 {
        match *self {
            Metric::Euclidean => axes.map(|t| t * t).sum::<f64>().sqrt(),
            Metric::Chebyshev => axes.fold(0.0, f64::max),
            Metric::Lp(p) => axes.map(|t| t.powf(p)).sum::<f64>().powf(p.recip()),
        }
    }

    /// Connection predicate shared by every graph builder. Ties connect.
    #[inline]
    pub fn within(&self, a: &[f64], b: &[f64], radius: f64) -> bool {
        self.distance(a, b) <= radius
    }

    /// Distance in the flat cube `[0,1)^d`, with no wrap-around.
    pub fn flat_distance(&self, a: &[f64], b: &[f64]) -> f64 {
        self.norm(a.iter().zip(b).map(|(x, y)| (x - y).abs()))
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Metric::Euclidean => f.write_str("euclidean"),
            Metric::Chebyshev => f.write_str("chebyshev"),
            Metric::Lp(p) => write!(f, "lp:{p}"),
        }
    }
}

impl FromStr for Metric {
    type Err = Error;

    /// Accepts `euclidean`, `chebyshev` and `lp:<p>`.
    fn from_str(s: &str) -> Result<Self> {
        let metric = match s.trim().to_ascii_lowercase().as_str() {
            "euclidean" | "l2" => Metric::Euclidean,
            "chebyshev" | "linf" => Metric::Chebyshev,
            other => {
                let p = other
                    .strip_prefix("lp:")
                    .and_then(|p| p.parse::<f64>().ok())
                    .ok_or_else(|| {
                        Error::invalid(
                            "metric",
                            format!("expected euclidean, chebyshev or lp:<p>, got {s:?}"),
                        )
                    })?;
                Metric::Lp(p)
            }
        };
        metric.validate()?;
        Ok(metric)
    }
}

/// Minimum-image displacement along one axis.
#[inline]
fn wrap_delta(delta: f64) -> f64 {
    let t = delta.abs();
    t.min(1.0 - t)
}

/// Reduce a coordinate into `[0, 1)`.
#[inline]
fn reduce(c: f64) -> f64 {
    let r = c.rem_euclid(1.0);
    // rem_euclid of a tiny negative number rounds up to exactly 1.0
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

/// A point of the torus.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    coords: Vec<f64>,
}

impl Point {
    pub fn new(coords: impl Into<Vec<f64>>) -> Result<Self> {
        let mut coords = coords.into();
        if coords.is_empty() {
            return Err(Error::invalid("point", "dimension must be at least 1"));
        }
        if let Some(c) = coords.iter().find(|c| !c.is_finite()) {
            return Err(Error::invalid(
                "point",
                format!("non-finite coordinate {c}"),
            ));
        }
        coords.iter_mut().for_each(|c| *c = reduce(*c));
        Ok(Self { coords })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }
}

pub fn torus_distance(a: &Point, b: &Point, metric: Metric) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    metric.validate()?;
    Ok(metric.distance(a.coords(), b.coords()))
}

/// Volume of the unit ball of `metric` in `d` dimensions, the constant
/// relating radius to expected degree: `a_n = volume * n * r^d`.
pub fn unit_ball_volume(d: usize, metric: Metric) -> f64 {
    assert!(d >= 1, "dimension must be positive");
    if d == 1 {
        // [-1, 1] for every norm
        return 2.0;
    }
    let d = d as f64;
    match metric {
        Metric::Euclidean => PI.powf(d / 2.0) / gamma(d / 2.0 + 1.0),
        Metric::Chebyshev => 2f64.powf(d),
        Metric::Lp(p) => (2.0 * gamma(1.0 + 1.0 / p)).powf(d) / gamma(1.0 + d / p),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PointKind {
    Random,
    Lattice,
}

/// `n` points of the `d`-torus stored point-major.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    dim: usize,
    coords: Vec<f64>,
    kind: PointKind,
    seed: Option<u64>,
}

impl PointSet {
    /// Uniform i.i.d. points. Coordinates are drawn point-major, axis-minor
    /// from a ChaCha8 stream seeded with `seed`.
    pub fn random(n: usize, dim: usize, seed: u64) -> Result<Self> {
        check_shape(n, dim)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let coords = (0..n * dim).map(|_| rng.random::<f64>()).collect();
        Ok(Self {
            dim,
            coords,
            kind: PointKind::Random,
            seed: Some(seed),
        })
    }

    /// The regular grid with spacing `n^{-1/d}`; `n` must be a perfect d-th power.
    pub fn lattice(n: usize, dim: usize) -> Result<Self> {
        check_shape(n, dim)?;
        let side = lattice_side(n, dim)?;
        let mut coords = Vec::with_capacity(n * dim);
        for index in 0..n {
            let mut rest = index;
            for _ in 0..dim {
                coords.push((rest % side) as f64 / side as f64);
                rest /= side;
            }
        }
        Ok(Self {
            dim,
            coords,
            kind: PointKind::Lattice,
            seed: None,
        })
    }

    pub fn from_points(points: &[Point]) -> Result<Self> {
        let first = points
            .first()
            .ok_or_else(|| Error::invalid("points", "need at least one point"))?;
        let dim = first.dim();
        let mut coords = Vec::with_capacity(points.len() * dim);
        for p in points {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch {
                    left: dim,
                    right: p.dim(),
                });
            }
            coords.extend_from_slice(p.coords());
        }
        Ok(Self {
            dim,
            coords,
            kind: PointKind::Random,
            seed: None,
        })
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> PointKind {
        self.kind
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }
}

fn check_shape(n: usize, dim: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::invalid("n", "need at least one point"));
    }
    if dim == 0 {
        return Err(Error::invalid("d", "dimension must be at least 1"));
    }
    Ok(())
}

/// Integer `k` with `k^dim == n`.
pub fn lattice_side(n: usize, dim: usize) -> Result<usize> {
    let guess = (n as f64).powf(1.0 / dim as f64).round() as usize;
    (guess.saturating_sub(1).max(1)..=guess + 1)
        .find(|&k| k.checked_pow(dim as u32) == Some(n))
        .ok_or(Error::NotPerfectPower { n, dim })
}
