//! Dense symmetric eigen-decomposition by cyclic Jacobi rotations.
//!
//! Matrices are square, row-major `&[f64]` slices. The solver is small and
//! deterministic: sweeps visit the upper triangle in a fixed order, so the
//! same input always produces bit-identical output.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Off-diagonal Frobenius norm (relative to the full norm) at which the
/// iteration stops.
pub const JACOBI_TOLERANCE: f64 = 1e-12;

const MAX_SWEEPS: usize = 100;

/// Eigenvalues in descending order with their unit eigenvectors.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricEigen {
    pub dim: usize,
    /// Sorted descending; ties keep the order in which Jacobi produced them.
    pub values: Vec<f64>,
    /// Row-major `dim x dim`; column `j` is the eigenvector of `values[j]`.
    pub vectors: Vec<f64>,
}

impl SymmetricEigen {
    /// Component `i` of eigenvector `j`.
    #[inline]
    pub fn vector_entry(&self, i: usize, j: usize) -> f64 {
        self.vectors[i * self.dim + j]
    }

    pub fn vector(&self, j: usize) -> Vec<f64> {
        (0..self.dim).map(|i| self.vector_entry(i, j)).collect()
    }
}

fn off_diagonal_norm(a: &[f64], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            s += 2.0 * a[i * n + j] * a[i * n + j];
        }
    }
    libm::sqrt(s)
}

/// Decomposes the symmetric matrix `a` (`n x n`, row-major).
///
/// Only the upper triangle is trusted; the lower one is overwritten with it
/// before iterating.
pub fn symmetric_eigen(a: &[f64], n: usize) -> Result<SymmetricEigen> {
    if a.len() != n * n {
        return Err(Error::Shape(alloc::format!(
            "expected {n}x{n} matrix, got {} entries",
            a.len()
        )));
    }
    let mut m = a.to_vec();
    for i in 0..n {
        for j in 0..i {
            m[i * n + j] = m[j * n + i];
        }
    }
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }

    let total = libm::sqrt(m.iter().map(|x| x * x).sum::<f64>());
    let threshold = JACOBI_TOLERANCE * if total > 0.0 { total } else { 1.0 };

    let mut converged = off_diagonal_norm(&m, n) <= threshold;
    let mut sweeps = 0;
    while !converged && sweeps < MAX_SWEEPS {
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = m[p * n + p];
                let aqq = m[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + libm::sqrt(theta * theta + 1.0))
                } else {
                    -1.0 / (-theta + libm::sqrt(theta * theta + 1.0))
                };
                let c = 1.0 / libm::sqrt(t * t + 1.0);
                let s = t * c;
                rotate(&mut m, &mut v, n, p, q, c, s);
            }
        }
        sweeps += 1;
        converged = off_diagonal_norm(&m, n) <= threshold;
    }
    if !converged {
        return Err(Error::NonConvergent {
            residual: off_diagonal_norm(&m, n),
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[j * n + j].total_cmp(&m[i * n + i]).then(i.cmp(&j)));
    let values = order.iter().map(|&i| m[i * n + i]).collect();
    let mut vectors = vec![0.0; n * n];
    for (col, &src) in order.iter().enumerate() {
        for row in 0..n {
            vectors[row * n + col] = v[row * n + src];
        }
    }
    Ok(SymmetricEigen {
        dim: n,
        values,
        vectors,
    })
}

// Applies A <- J^T A J and V <- V J for the (p, q) rotation.
fn rotate(m: &mut [f64], v: &mut [f64], n: usize, p: usize, q: usize, c: f64, s: f64) {
    for k in 0..n {
        let akp = m[k * n + p];
        let akq = m[k * n + q];
        m[k * n + p] = c * akp - s * akq;
        m[k * n + q] = s * akp + c * akq;
    }
    for k in 0..n {
        let apk = m[p * n + k];
        let aqk = m[q * n + k];
        m[p * n + k] = c * apk - s * aqk;
        m[q * n + k] = s * apk + c * aqk;
    }
    for k in 0..n {
        let vkp = v[k * n + p];
        let vkq = v[k * n + q];
        v[k * n + p] = c * vkp - s * vkq;
        v[k * n + q] = s * vkp + c * vkq;
    }
}
