//! Principal-component reduction to a retained-variance fraction.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::dataset::ParameterMatrix;
use crate::error::{Error, Result};
use crate::linalg::symmetric_eigen;

/// Default retained-variance fraction.
pub const DEFAULT_VARIANCE_FRACTION: f64 = 0.6;

/// Eigenvalues below this fraction of the largest one count as zero rank.
pub const RANK_TOLERANCE: f64 = 1e-12;

/// Named points in a `dim`-dimensional Euclidean space.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddedPoints {
    pub point_names: Vec<String>,
    pub dim: usize,
    /// Row-major `n x dim`.
    pub coords: Vec<f64>,
    /// Fraction of total variance carried by the retained components.
    pub explained_variance: f64,
    /// Row-major `dim x D`: loadings of each retained component on the
    /// original features. Identity for raw point clouds.
    pub component_weights: Vec<f64>,
    /// All covariance eigenvalues, descending (empty for raw point clouds).
    pub eigenvalues: Vec<f64>,
}

impl EmbeddedPoints {
    /// Wraps raw coordinates without any projection.
    pub fn from_coords(point_names: Vec<String>, dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim == 0 || coords.len() != point_names.len() * dim {
            return Err(Error::Shape(format!(
                "{} coordinates for {} points of dimension {dim}",
                coords.len(),
                point_names.len()
            )));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidArgument("non-finite coordinate".into()));
        }
        let mut weights = vec![0.0; dim * dim];
        for i in 0..dim {
            weights[i * dim + i] = 1.0;
        }
        Ok(Self {
            point_names,
            dim,
            coords,
            explained_variance: 1.0,
            component_weights: weights,
            eigenvalues: Vec::new(),
        })
    }

    /// Anonymous points named `x0, x1, ...`.
    pub fn unnamed(dim: usize, coords: Vec<f64>) -> Result<Self> {
        let n = if dim == 0 { 0 } else { coords.len() / dim };
        Self::from_coords((0..n).map(|i| format!("x{i}")).collect(), dim, coords)
    }

    /// Uses the matrix cells directly as coordinates.
    pub fn from_matrix(m: &ParameterMatrix) -> Result<Self> {
        if m.has_missing() {
            return Err(Error::InvalidArgument(
                "matrix has missing cells; filter or fill first".into(),
            ));
        }
        Self::from_coords(m.row_names().to_vec(), m.n_cols(), m.values().to_vec())
    }

    pub fn len(&self) -> usize {
        self.point_names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.point_names.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    /// Subset of points, in the order given.
    pub fn select(&self, indices: &[usize]) -> Self {
        let mut coords = Vec::with_capacity(indices.len() * self.dim);
        for &i in indices {
            coords.extend_from_slice(self.point(i));
        }
        Self {
            point_names: indices.iter().map(|&i| self.point_names[i].clone()).collect(),
            dim: self.dim,
            coords,
            explained_variance: self.explained_variance,
            component_weights: self.component_weights.clone(),
            eigenvalues: self.eigenvalues.clone(),
        }
    }
}

/// Projects the mean-centred rows of `m` onto the fewest leading principal
/// components whose cumulative variance reaches `variance_fraction`.
///
/// The covariance uses divisor `n`. Each component's entry of largest
/// magnitude is made nonnegative (ties go to the lowest feature index).
pub fn pca_reduce(m: &ParameterMatrix, variance_fraction: f64) -> Result<EmbeddedPoints> {
    if !(variance_fraction > 0.0 && variance_fraction <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "variance fraction {variance_fraction} outside (0, 1]"
        )));
    }
    if m.has_missing() {
        return Err(Error::InvalidArgument(
            "matrix has missing cells; filter or fill first".into(),
        ));
    }
    let (n, d) = (m.n_rows(), m.n_cols());
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "PCA needs at least two rows, got {n}"
        )));
    }

    let mut centred = m.values().to_vec();
    for j in 0..d {
        let mean = (0..n).map(|i| centred[i * d + j]).sum::<f64>() / n as f64;
        for i in 0..n {
            centred[i * d + j] -= mean;
        }
    }
    let mut cov = vec![0.0; d * d];
    for a in 0..d {
        for b in a..d {
            let s: f64 = (0..n).map(|i| centred[i * d + a] * centred[i * d + b]).sum();
            cov[a * d + b] = s / n as f64;
            cov[b * d + a] = s / n as f64;
        }
    }
    let eig = symmetric_eigen(&cov, d)?;

    let largest = eig.values.first().copied().unwrap_or(0.0);
    if largest <= 0.0 {
        return Err(Error::ZeroVariance);
    }
    let floor = RANK_TOLERANCE * largest;
    let clamped: Vec<f64> = eig
        .values
        .iter()
        .map(|&v| if v < floor { 0.0 } else { v })
        .collect();
    let mut cumulative = Vec::with_capacity(d);
    let mut acc = 0.0;
    for &v in &clamped {
        acc += v;
        cumulative.push(acc);
    }
    let total = acc;
    let k = cumulative
        .iter()
        .position(|&c| c >= variance_fraction * total)
        .map_or(d, |p| p + 1);

    let mut weights = vec![0.0; k * d];
    for c in 0..k {
        let mut v = eig.vector(c);
        let mut best = 0;
        for (i, x) in v.iter().enumerate() {
            if x.abs() > v[best].abs() {
                best = i;
            }
        }
        if v[best] < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
        weights[c * d..(c + 1) * d].copy_from_slice(&v);
    }

    let mut coords = vec![0.0; n * k];
    for i in 0..n {
        let row = &centred[i * d..(i + 1) * d];
        for c in 0..k {
            let w = &weights[c * d..(c + 1) * d];
            coords[i * k + c] = row.iter().zip(w).map(|(x, y)| x * y).sum();
        }
    }

    Ok(EmbeddedPoints {
        point_names: m.row_names().to_vec(),
        dim: k,
        coords,
        explained_variance: cumulative[k - 1] / total,
        component_weights: weights,
        eigenvalues: eig.values,
    })
}
