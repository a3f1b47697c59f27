//! Random geometric graphs and their lattice counterparts on the torus.
//!
//! Both builders produce undirected simple graphs: vertices `i` and `j`
//! are adjacent iff their torus distance is at most the radius. The radius
//! is capped at 1/2 so that each pair has a single minimum image.

pub mod cell_list;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{lattice_side, unit_ball_volume, Metric, PointSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphKind {
    /// Uniform random points.
    Rgg,
    /// Regular lattice points.
    Dgg,
}

impl std::fmt::Display for GraphKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            GraphKind::Rgg => "rgg",
            GraphKind::Dgg => "dgg",
        })
    }
}

/// Construction parameters, shared by the graph and everything derived from it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GraphParams {
    pub n: usize,
    pub d: usize,
    pub r: f64,
    pub metric: Metric,
    pub kind: GraphKind,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeometricGraph {
    params: GraphParams,
    neighbors: Vec<Vec<u32>>,
    degrees: Vec<usize>,
}

pub fn check_radius(r: f64) -> Result<()> {
    if r > 0.0 && r <= 0.5 {
        Ok(())
    } else {
        Err(Error::invalid(
            "r",
            format!("radius must lie in (0, 1/2], got {r}"),
        ))
    }
}

fn check_common(n: usize, r: f64, d: usize, metric: Metric) -> Result<()> {
    if n == 0 {
        return Err(Error::invalid("n", "need at least one vertex"));
    }
    if d == 0 {
        return Err(Error::invalid("d", "dimension must be at least 1"));
    }
    if n > u32::MAX as usize {
        return Err(Error::invalid("n", "vertex count exceeds u32 range"));
    }
    check_radius(r)?;
    metric.validate()
}

/// Random geometric graph on `n` uniform points drawn from `seed`.
pub fn sample_rgg(n: usize, r: f64, d: usize, metric: Metric, seed: u64) -> Result<GeometricGraph> {
    check_common(n, r, d, metric)?;
    let points = PointSet::random(n, d, seed)?;
    let neighbors = cell_list::neighbor_lists(&points, r, metric);
    Ok(GeometricGraph::from_lists(
        GraphParams {
            n,
            d,
            r,
            metric,
            kind: GraphKind::Rgg,
            seed: Some(seed),
        },
        neighbors,
    ))
}

/// Relative slack on `r * side` in lattice comparisons.
pub(crate) const LATTICE_SLACK: f64 = 1e-12;

/// Deterministic geometric graph on the `n^{1/d}`-per-axis lattice.
///
/// Adjacency is decided in integer lattice units: an offset whose
/// minimum-image axis lengths `u_k` (in multiples of the spacing) satisfy
/// `norm(u) <= r * side` connects. Every vertex shares the same offset
/// stencil, so the graph is vertex-transitive; for `d = 1` under any metric
/// the degree is `2 * floor(n * r)` whenever that is below `n`.
///
/// `r * side` within relative `LATTICE_SLACK` of a lattice distance counts
/// as reaching it, so `r = 0.29, n = 100` gives 29 steps, not 28.
pub fn build_dgg(n: usize, r: f64, d: usize, metric: Metric) -> Result<GeometricGraph> {
    check_common(n, r, d, metric)?;
    let side = lattice_side(n, d)?;
    let reach = r * side as f64 * (1.0 + LATTICE_SLACK);

    // Residue offsets in [0, side)^d, excluding zero, within reach.
    let offsets: Vec<Vec<usize>> = (1..n)
        .map(|code| decompose(code, side, d))
        .filter(|t| metric.norm(t.iter().map(|&t| t.min(side - t) as f64)) <= reach)
        .collect();

    let neighbors = (0..n)
        .map(|v| {
            let base = decompose(v, side, d);
            let mut list: Vec<u32> = offsets
                .iter()
                .map(|t| {
                    base.iter()
                        .zip(t)
                        .rev()
                        .fold(0, |acc, (b, t)| acc * side + (b + t) % side)
                        as u32
                })
                .collect();
            list.sort_unstable();
            list
        })
        .collect();

    Ok(GeometricGraph::from_lists(
        GraphParams {
            n,
            d,
            r,
            metric,
            kind: GraphKind::Dgg,
            seed: None,
        },
        neighbors,
    ))
}

/// Lattice coordinates of a vertex index, axis 0 varying fastest.
fn decompose(mut index: usize, side: usize, d: usize) -> Vec<usize> {
    (0..d)
        .map(|_| {
            let c = index % side;
            index /= side;
            c
        })
        .collect()
}

impl GeometricGraph {
    fn from_lists(params: GraphParams, neighbors: Vec<Vec<u32>>) -> Self {
        let degrees = neighbors.iter().map(Vec::len).collect();
        Self {
            params,
            neighbors,
            degrees,
        }
    }

    /// Rebuild a graph from an edge list, e.g. one read back from disk.
    pub fn from_edges(params: GraphParams, edges: &[(usize, usize)]) -> Result<Self> {
        check_common(params.n, params.r, params.d, params.metric)?;
        let mut neighbors = vec![Vec::new(); params.n];
        for &(u, v) in edges {
            if u >= params.n || v >= params.n {
                return Err(Error::invalid(
                    "edges",
                    format!("edge ({u}, {v}) out of range for n = {}", params.n),
                ));
            }
            if u == v {
                return Err(Error::invalid("edges", format!("self-loop at {u}")));
            }
            neighbors[u].push(v as u32);
            neighbors[v].push(u as u32);
        }
        for (u, list) in neighbors.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::invalid(
                    "edges",
                    format!("duplicate edge ({u}, {})", w[0]),
                ));
            }
        }
        Ok(Self::from_lists(params, neighbors))
    }

    pub fn params(&self) -> &GraphParams {
        &self.params
    }

    pub fn n(&self) -> usize {
        self.params.n
    }

    pub fn dim(&self) -> usize {
        self.params.d
    }

    pub fn radius(&self) -> f64 {
        self.params.r
    }

    pub fn metric(&self) -> Metric {
        self.params.metric
    }

    pub fn kind(&self) -> GraphKind {
        self.params.kind
    }

    pub fn seed(&self) -> Option<u64> {
        self.params.seed
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.neighbors[v]
    }

    pub fn neighbor_lists(&self) -> &[Vec<u32>] {
        &self.neighbors
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn edge_count(&self) -> usize {
        self.degrees.iter().sum::<usize>() / 2
    }

    pub fn is_adjacent(&self, u: usize, v: usize) -> bool {
        self.neighbors[u].binary_search(&(v as u32)).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.neighbors.iter().enumerate().flat_map(|(u, list)| {
            list.iter()
                .map(|&v| v as usize)
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }

    pub fn average_degree(&self) -> f64 {
        self.degrees.iter().sum::<usize>() as f64 / self.n() as f64
    }

    /// Expected average degree of the random model, `volume * n * r^d`.
    pub fn nominal_degree(&self) -> f64 {
        nominal_degree(self.n(), self.radius(), self.dim(), self.metric())
    }

    pub fn first_isolated_vertex(&self) -> Option<usize> {
        self.degrees.iter().position(|&k| k == 0)
    }
}

pub fn nominal_degree(n: usize, r: f64, d: usize, metric: Metric) -> f64 {
    unit_ball_volume(d, metric) * n as f64 * r.powi(d as i32)
}
