//! Persistent homology over GF(2) by standard column reduction.
//!
//! [`reduce`] runs the textbook algorithm on the boundary matrix of a
//! [`FilteredComplex`]: columns are processed in filtration order and a
//! column's lowest entry is cancelled against earlier columns with the same
//! low until it is zero or has a fresh pivot. No clearing or twisting is
//! applied, so the output is a plain function of the simplex order.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::filtration::FilteredComplex;

/// Birth/death pairs by simplex index, plus unpaired (essential) births.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PersistencePairs {
    pub pairs: Vec<(usize, usize)>,
    pub essentials: Vec<usize>,
}

/// Half-open persistence interval `[birth, death)`; `death` may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Interval {
    pub birth: f64,
    pub death: f64,
}

impl Interval {
    pub fn new(birth: f64, death: f64) -> Self {
        Self { birth, death }
    }

    pub fn is_finite(&self) -> bool {
        self.death.is_finite()
    }

    pub fn length(&self) -> f64 {
        self.death - self.birth
    }

    /// Length with an infinite death clipped to `cutoff`.
    pub fn clipped_length(&self, cutoff: f64) -> f64 {
        if self.is_finite() {
            self.length()
        } else {
            (cutoff - self.birth).max(0.0)
        }
    }

    pub fn contains(&self, r: f64) -> bool {
        self.birth <= r && r < self.death
    }
}

/// Reported intervals per homology dimension. Zero-length intervals are not
/// included.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Barcode {
    pub dims: Vec<Vec<Interval>>,
}

impl Barcode {
    pub fn dim(&self, k: usize) -> &[Interval] {
        self.dims.get(k).map_or(&[], Vec::as_slice)
    }

    pub fn max_dim(&self) -> Option<usize> {
        self.dims.len().checked_sub(1)
    }

    /// Number of intervals in dimension `k` containing `radius`.
    pub fn betti_at(&self, radius: f64, k: usize) -> usize {
        self.dim(k).iter().filter(|iv| iv.contains(radius)).count()
    }

    /// Sum of finite interval lengths in dimension `k`.
    pub fn total_persistence(&self, k: usize) -> f64 {
        self.dim(k)
            .iter()
            .filter(|iv| iv.is_finite())
            .map(Interval::length)
            .sum()
    }

    /// Sum of lengths in dimension `k`, infinite deaths clipped to `cutoff`.
    pub fn clipped_total(&self, k: usize, cutoff: f64) -> f64 {
        self.dim(k).iter().map(|iv| iv.clipped_length(cutoff)).sum()
    }

    /// Drops dimensions above `max_dim`.
    pub fn truncated(mut self, max_dim: usize) -> Self {
        self.dims.truncate(max_dim + 1);
        self
    }

    /// Intervals as `(dim, interval)` in reporting order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, Interval)> + '_ {
        self.dims
            .iter()
            .enumerate()
            .flat_map(|(k, ivs)| ivs.iter().map(move |&iv| (k, iv)))
    }
}

/// Combinatorial-number-system keys `(dim, code)` for face lookup.
struct FaceIndex {
    binom: Vec<Vec<u128>>,
    by_dim: Vec<Vec<(u128, usize)>>,
}

impl FaceIndex {
    fn new(fc: &FilteredComplex) -> Self {
        let n = fc.n_vertices.max(1);
        let kmax = fc.max_dim + 1;
        let mut binom = vec![vec![0u128; kmax + 1]; n + 1];
        for v in 0..=n {
            binom[v][0] = 1;
            for k in 1..=kmax {
                binom[v][k] = if v == 0 {
                    0
                } else {
                    binom[v - 1][k - 1].saturating_add(binom[v - 1][k])
                };
            }
        }
        let mut idx = Self {
            binom,
            by_dim: vec![Vec::new(); fc.max_dim + 1],
        };
        for (i, s) in fc.simplices.iter().enumerate() {
            let key = idx.code(s.vertices.iter().copied());
            idx.by_dim[s.dim()].push((key, i));
        }
        for d in &mut idx.by_dim {
            d.sort_unstable();
        }
        idx
    }

    fn code(&self, vertices: impl Iterator<Item = u32>) -> u128 {
        vertices
            .enumerate()
            .map(|(i, v)| self.binom[v as usize][i + 1])
            .fold(0u128, u128::saturating_add)
    }

    fn find(&self, dim: usize, vertices: impl Iterator<Item = u32>) -> Option<usize> {
        let key = self.code(vertices);
        let list = self.by_dim.get(dim)?;
        list.binary_search_by(|probe| probe.0.cmp(&key))
            .ok()
            .map(|p| list[p].1)
    }
}

/// Boundary column of simplex `j` as ascending simplex indices.
fn boundary(fc: &FilteredComplex, index: &FaceIndex, j: usize) -> Result<Vec<u32>> {
    let s = &fc.simplices[j];
    if s.vertices.len() < 2 {
        return Ok(Vec::new());
    }
    let mut col = Vec::with_capacity(s.vertices.len());
    for skip in 0..s.vertices.len() {
        let face = s
            .vertices
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != skip)
            .map(|(_, &v)| v);
        match index.find(s.dim() - 1, face) {
            Some(f) if f < j => col.push(f as u32),
            Some(f) => {
                return Err(Error::MalformedComplex(format!(
                    "face {f} of simplex {j} appears after it"
                )))
            }
            None => {
                return Err(Error::MalformedComplex(format!(
                    "simplex {j} {:?} has a face missing from the complex",
                    s.vertices
                )))
            }
        }
    }
    col.sort_unstable();
    Ok(col)
}

// Symmetric difference of two ascending index lists.
fn add_columns(a: &[u32], b: &[u32], out: &mut Vec<u32>) {
    out.clear();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            core::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            core::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            core::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
}

/// Standard GF(2) column reduction of the boundary matrix.
pub fn reduce(fc: &FilteredComplex) -> Result<PersistencePairs> {
    let index = FaceIndex::new(fc);
    let m = fc.len();
    // pivot_owner[row] = reduced column whose lowest entry is `row`
    let mut pivot_owner = vec![u32::MAX; m];
    let mut reduced: Vec<Vec<u32>> = vec![Vec::new(); m];
    let mut paired = vec![false; m];
    let mut pairs = Vec::new();
    let mut scratch = Vec::new();

    for j in 0..m {
        let mut col = boundary(fc, &index, j)?;
        while let Some(&low) = col.last() {
            let owner = pivot_owner[low as usize];
            if owner == u32::MAX {
                break;
            }
            add_columns(&col, &reduced[owner as usize], &mut scratch);
            core::mem::swap(&mut col, &mut scratch);
        }
        if let Some(&low) = col.last() {
            pivot_owner[low as usize] = j as u32;
            paired[low as usize] = true;
            paired[j] = true;
            pairs.push((low as usize, j));
            reduced[j] = col;
        }
    }
    let essentials = (0..m).filter(|&i| !paired[i]).collect();
    pairs.sort_unstable();
    Ok(PersistencePairs { pairs, essentials })
}

/// Intervals from persistence pairs; zero-length ones are dropped.
pub fn barcodes(pp: &PersistencePairs, fc: &FilteredComplex) -> Barcode {
    let mut dims = vec![Vec::new(); fc.max_dim + 1];
    for &(b, d) in &pp.pairs {
        let sb = &fc.simplices[b];
        let birth = sb.value;
        let death = fc.simplices[d].value;
        if death > birth {
            dims[sb.dim()].push(Interval::new(birth, death));
        }
    }
    for &e in &pp.essentials {
        let s = &fc.simplices[e];
        dims[s.dim()].push(Interval::new(s.value, f64::INFINITY));
    }
    for ivs in &mut dims {
        ivs.sort_by(|a, b| a.birth.total_cmp(&b.birth).then(a.death.total_cmp(&b.death)));
    }
    Barcode { dims }
}

/// Reduces `fc` and returns its barcode.
pub fn barcode_of(fc: &FilteredComplex) -> Result<Barcode> {
    Ok(barcodes(&reduce(fc)?, fc))
}

/// Betti number `k` of the subcomplex with values `<= radius`.
///
/// Meaningful for `k < fc.max_dim`; in the top dimension cycles can never be
/// filled.
pub fn betti_at(fc: &FilteredComplex, radius: f64, k: usize) -> Result<usize> {
    Ok(barcode_of(fc)?.betti_at(radius, k))
}
