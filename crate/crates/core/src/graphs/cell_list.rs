//! Fixed-radius neighbor search on the torus with a uniform cell grid.

use rayon::prelude::*;

use crate::geometry::{Metric, PointSet};

/// Cells per axis are capped so the grid holds at most this many cells per point.
const MAX_CELLS_PER_POINT: usize = 2;

/// Neighbor lists (sorted, no self-loops) for every point of `points`.
///
/// The grid has `m` cells per axis with `m <= floor(1 / radius)`, so a cell
/// edge is never shorter than the radius and only the `3^d` surrounding cells
/// need scanning. With fewer than three cells per axis the wrapped stencil
/// would visit cells twice, so the search falls back to all pairs.
pub fn neighbor_lists(points: &PointSet, radius: f64, metric: Metric) -> Vec<Vec<u32>> {
    let n = points.len();
    let dim = points.dim();
    let by_radius = (1.0 / radius).floor() as usize;
    let by_count = ((MAX_CELLS_PER_POINT * n) as f64)
        .powf(1.0 / dim as f64)
        .floor() as usize;
    let per_axis = by_radius.min(by_count);
    if per_axis < 3 {
        return all_pairs(points, radius, metric);
    }

    let grid = CellGrid::new(points, per_axis);
    let offsets = stencil(dim);
    (0..n)
        .into_par_iter()
        .map(|i| {
            let p = points.point(i);
            let home = grid.cell_coords(p);
            let mut out = Vec::new();
            let mut cell = vec![0usize; dim];
            for offset in &offsets {
                for k in 0..dim {
                    cell[k] = (home[k] + per_axis).wrapping_add_signed(offset[k]) % per_axis;
                }
                for &j in grid.members(grid.flat_index(&cell)) {
                    if j as usize != i && metric.within(p, points.point(j as usize), radius) {
                        out.push(j);
                    }
                }
            }
            out.sort_unstable();
            out
        })
        .collect()
}

/// The O(n²) reference construction.
pub fn all_pairs(points: &PointSet, radius: f64, metric: Metric) -> Vec<Vec<u32>> {
    let n = points.len();
    let mut lists = vec![Vec::new(); n];
    for i in 0..n {
        let p = points.point(i);
        for j in i + 1..n {
            if metric.within(p, points.point(j), radius) {
                lists[i].push(j as u32);
                lists[j].push(i as u32);
            }
        }
    }
    lists
}

struct CellGrid {
    per_axis: usize,
    starts: Vec<usize>,
    members: Vec<u32>,
}

impl CellGrid {
    fn new(points: &PointSet, per_axis: usize) -> Self {
        let total = per_axis.pow(points.dim() as u32);
        let mut grid = CellGrid {
            per_axis,
            starts: vec![0; total + 1],
            members: vec![0; points.len()],
        };
        let cells: Vec<usize> = points
            .iter()
            .map(|p| grid.flat_index(&grid.cell_coords(p)))
            .collect();
        for &c in &cells {
            grid.starts[c + 1] += 1;
        }
        for c in 0..total {
            grid.starts[c + 1] += grid.starts[c];
        }
        let mut fill = grid.starts.clone();
        for (i, &c) in cells.iter().enumerate() {
            grid.members[fill[c]] = i as u32;
            fill[c] += 1;
        }
        grid
    }

    fn cell_coords(&self, p: &[f64]) -> Vec<usize> {
        p.iter()
            .map(|&x| ((x * self.per_axis as f64) as usize).min(self.per_axis - 1))
            .collect()
    }

    fn flat_index(&self, cell: &[usize]) -> usize {
        cell.iter().rev().fold(0, |acc, &c| acc * self.per_axis + c)
    }

    fn members(&self, flat: usize) -> &[u32] {
        &self.members[self.starts[flat]..self.starts[flat + 1]]
    }
}

/// All offsets in `{-1, 0, 1}^dim`.
fn stencil(dim: usize) -> Vec<Vec<isize>> {
    (0..3usize.pow(dim as u32))
        .map(|mut code| {
            (0..dim)
                .map(|_| {
                    let o = (code % 3) as isize - 1;
                    code /= 3;
                    o
                })
                .collect()
        })
        .collect()
}
