//! Distances, critical radius, radius grids and Vietoris-Rips filtrations.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::{Error, Result};
use crate::projection::EmbeddedPoints;

/// Default number of grid steps up to the critical radius.
pub const DEFAULT_STEPS: usize = 100;

/// Default cap on the number of simplices a filtration may hold.
pub const DEFAULT_SIMPLEX_LIMIT: usize = 20_000_000;

/// Symmetric matrix of pairwise Euclidean distances.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    d: Vec<f64>,
}

impl DistanceMatrix {
    pub fn from_points(points: &EmbeddedPoints) -> Self {
        Self::from_coords(points.dim, &points.coords)
    }

    /// Row-major coordinates, `dim` per point.
    pub fn from_coords(dim: usize, coords: &[f64]) -> Self {
        let n = if dim == 0 { 0 } else { coords.len() / dim };
        let mut d = vec![0.0; n * n];
        for i in 0..n {
            let p = &coords[i * dim..(i + 1) * dim];
            for j in (i + 1)..n {
                let q = &coords[j * dim..(j + 1) * dim];
                let s: f64 = p.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum();
                let v = libm::sqrt(s);
                d[i * n + j] = v;
                d[j * n + i] = v;
            }
        }
        Self { n, d }
    }

    /// Validates a full `n x n` matrix: symmetric, zero diagonal, finite and
    /// nonnegative.
    pub fn from_full(n: usize, d: Vec<f64>) -> Result<Self> {
        if d.len() != n * n {
            return Err(Error::Shape(format!("{} entries for {n}x{n}", d.len())));
        }
        for i in 0..n {
            if d[i * n + i] != 0.0 {
                return Err(Error::InvalidArgument(format!("nonzero diagonal at {i}")));
            }
            for j in 0..n {
                let v = d[i * n + j];
                if !v.is_finite() || v < 0.0 || v != d[j * n + i] {
                    return Err(Error::InvalidArgument(format!(
                        "entry ({i},{j}) is not a symmetric finite distance"
                    )));
                }
            }
        }
        Ok(Self { n, d })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.d[i * self.n + j]
    }

    /// Distances among `indices`, which become `0..indices.len()`.
    pub fn restrict(&self, indices: &[usize]) -> Self {
        let m = indices.len();
        let mut d = vec![0.0; m * m];
        for (a, &i) in indices.iter().enumerate() {
            for (b, &j) in indices.iter().enumerate() {
                d[a * m + b] = self.get(i, j);
            }
        }
        Self { n: m, d }
    }

    /// Largest pairwise distance.
    pub fn diameter(&self) -> f64 {
        self.d.iter().copied().fold(0.0, f64::max)
    }

    /// `min_i max_j d(i, j)`. Above this radius the Rips complex is a cone,
    /// so every finite feature has died by then.
    pub fn enclosing_radius(&self) -> f64 {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j)).fold(0.0, f64::max))
            .fold(f64::INFINITY, f64::min)
            .min(if self.n == 0 { 0.0 } else { f64::INFINITY })
    }

    /// Pairs `i < j` with `d(i, j) <= radius`, in row-major order.
    pub fn edges_within(&self, radius: f64) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if self.get(i, j) <= radius {
                    out.push((i, j));
                }
            }
        }
        out
    }
}

/// Least radius at which the neighbourhood graph is connected: the longest
/// edge of a minimum spanning tree (Prim, `O(n^2)`). Zero for `n <= 1`.
pub fn critical_radius(dm: &DistanceMatrix) -> f64 {
    let n = dm.len();
    if n <= 1 {
        return 0.0;
    }
    let mut in_tree = vec![false; n];
    let mut best = vec![f64::INFINITY; n];
    best[0] = 0.0;
    let mut longest: f64 = 0.0;
    for _ in 0..n {
        let mut u = usize::MAX;
        for v in 0..n {
            if !in_tree[v] && (u == usize::MAX || best[v] < best[u]) {
                u = v;
            }
        }
        in_tree[u] = true;
        longest = longest.max(best[u]);
        for v in 0..n {
            if !in_tree[v] {
                let w = dm.get(u, v);
                if w < best[v] {
                    best[v] = w;
                }
            }
        }
    }
    longest
}

/// Evenly spaced radii `eps, 2 eps, ..., steps * eps` with `eps = r_c / steps`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct RadiusGrid {
    pub epsilon: f64,
    pub steps: usize,
    pub values: Vec<f64>,
    pub critical_radius: f64,
}

impl RadiusGrid {
    pub fn last(&self) -> f64 {
        *self.values.last().expect("grid has at least one step")
    }

    /// Smallest grid value `>= v`, or `v` itself beyond the grid.
    pub fn snap_up(&self, v: f64) -> f64 {
        if v <= 0.0 {
            return 0.0;
        }
        let k = libm::ceil(v / self.epsilon - 1e-9);
        let k = if k < 1.0 { 1.0 } else { k };
        let idx = k as usize;
        if idx <= self.steps {
            self.values[idx - 1]
        } else {
            k * self.epsilon
        }
    }
}

pub fn radius_grid(r_c: f64, steps: usize) -> Result<RadiusGrid> {
    if steps == 0 {
        return Err(Error::InvalidArgument("radius grid needs at least one step".into()));
    }
    if !(r_c > 0.0) || !r_c.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "critical radius {r_c} is not positive: all points coincide, deduplicate the input"
        )));
    }
    let values = (1..=steps)
        .map(|k| if k == steps { r_c } else { r_c * k as f64 / steps as f64 })
        .collect();
    Ok(RadiusGrid {
        epsilon: r_c / steps as f64,
        steps,
        values,
        critical_radius: r_c,
    })
}

/// A simplex with its appearance scale.
#[derive(Debug, Clone, PartialEq)]
pub struct Simplex {
    /// Ascending vertex indices.
    pub vertices: Vec<u32>,
    pub value: f64,
}

impl Simplex {
    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }
}

fn filtration_order(a: &Simplex, b: &Simplex) -> Ordering {
    a.value
        .total_cmp(&b.value)
        .then(a.vertices.len().cmp(&b.vertices.len()))
        .then_with(|| a.vertices.cmp(&b.vertices))
}

/// Simplices sorted by (value, dimension, lexicographic vertices).
#[derive(Debug, Clone, PartialEq)]
pub struct FilteredComplex {
    pub simplices: Vec<Simplex>,
    pub max_dim: usize,
    pub n_vertices: usize,
}

impl FilteredComplex {
    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    /// Number of simplices per dimension.
    pub fn counts(&self) -> Vec<usize> {
        let mut c = vec![0; self.max_dim + 1];
        for s in &self.simplices {
            c[s.dim()] += 1;
        }
        c
    }

    /// Copy with every value rounded up to the grid, re-sorted.
    pub fn snapped(&self, grid: &RadiusGrid) -> Self {
        let mut simplices: Vec<Simplex> = self
            .simplices
            .iter()
            .map(|s| Simplex {
                vertices: s.vertices.clone(),
                value: grid.snap_up(s.value),
            })
            .collect();
        simplices.sort_by(filtration_order);
        Self {
            simplices,
            max_dim: self.max_dim,
            n_vertices: self.n_vertices,
        }
    }

    /// Simplices with value `<= radius` (a prefix of the order).
    pub fn prefix_len(&self, radius: f64) -> usize {
        self.simplices.partition_point(|s| s.value <= radius)
    }
}

/// All cliques of at most `max_dim + 1` vertices with diameter `<= cutoff`,
/// valued by their diameter.
///
/// Fails with [`Error::ResourceLimit`] once more than `limit` simplices have
/// been generated.
pub fn build_filtration(
    dm: &DistanceMatrix,
    max_dim: usize,
    cutoff: f64,
    limit: usize,
) -> Result<FilteredComplex> {
    let n = dm.len();
    if !(cutoff >= 0.0) {
        return Err(Error::InvalidArgument(format!("cutoff {cutoff} is negative")));
    }
    // Upper neighbours only, so each clique is generated once from its
    // smallest vertex.
    let upper: Vec<Vec<u32>> = (0..n)
        .map(|i| {
            ((i + 1)..n)
                .filter(|&j| dm.get(i, j) <= cutoff)
                .map(|j| j as u32)
                .collect()
        })
        .collect();

    let mut simplices = Vec::new();
    let mut stack: Vec<(Vec<u32>, f64, Vec<u32>)> = Vec::new();
    for v in 0..n {
        stack.push((vec![v as u32], 0.0, upper[v].clone()));
        while let Some((verts, value, candidates)) = stack.pop() {
            if verts.len() <= max_dim {
                for (k, &c) in candidates.iter().enumerate() {
                    let mut next_value = value;
                    for &u in &verts {
                        next_value = next_value.max(dm.get(u as usize, c as usize));
                    }
                    let next_candidates: Vec<u32> = candidates[k + 1..]
                        .iter()
                        .copied()
                        .filter(|&w| dm.get(c as usize, w as usize) <= cutoff)
                        .collect();
                    let mut next = verts.clone();
                    next.push(c);
                    stack.push((next, next_value, next_candidates));
                }
            }
            simplices.push(Simplex {
                vertices: verts,
                value,
            });
            if simplices.len() > limit {
                return Err(Error::ResourceLimit {
                    what: "simplex count",
                    limit,
                    count: simplices.len(),
                });
            }
        }
    }
    simplices.sort_by(filtration_order);
    Ok(FilteredComplex {
        simplices,
        max_dim,
        n_vertices: n,
    })
}
