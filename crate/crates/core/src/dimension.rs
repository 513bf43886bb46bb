//! Weighted local-PCA intrinsic dimension and density estimates.
//!
//! Around each base point the `s` nearest neighbours are rescaled into the
//! unit ball and weighted by a Gaussian kernel normalised to unit
//! determinant. The weighted (uncentred) covariance of the neighbourhood is
//! diagonalised, and the residual of each neighbour after projecting out the
//! top `f` eigen-directions is its fit error at dimension `f`.
//!
//! [`dimension_profile`] compares the fit errors of the data with those of
//! uniform samples from unit balls and spheres. A candidate dimension `f` is
//! scored with references of dimension `f`: a Welch statistic is taken at every
//! fit dimension `g = 1..=f_max`, and the per-`g` statistics are combined in
//! quadrature. Comparing the whole error profile is what separates a flat
//! `f`-dimensional sample from lower-dimensional data, since both have
//! vanishing errors once `g >= f`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::symmetric_eigen;
use crate::projection::EmbeddedPoints;

/// Default kernel width.
pub const DEFAULT_ALPHA: f64 = 1.0 / 3.0;

/// Default neighbour count cap; the effective default is `min(20, n - 2)`.
pub const DEFAULT_NEIGHBORS: usize = 20;

/// Below this the standard error of a comparison counts as zero.
const DEGENERATE_SE: f64 = 1e-12;

/// Scaled neighbourhood of one base point.
#[derive(Debug, Clone, PartialEq)]
pub struct NeighborhoodFrame {
    pub base: usize,
    /// Neighbour indices, nearest first.
    pub neighbors: Vec<usize>,
    pub dim: usize,
    /// Row-major `s x dim`: `(x_i - x_base) / scale`.
    pub x: Vec<f64>,
    /// Diagonal of the weight matrix; the product of entries is 1.
    pub weights: Vec<f64>,
    /// Distance from the base to the farthest of the `s` neighbours.
    pub scale: f64,
}

impl NeighborhoodFrame {
    pub fn s(&self) -> usize {
        self.neighbors.len()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.x[i * self.dim..(i + 1) * self.dim]
    }
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Other points ordered by distance to `p` (ties by index), with distances.
fn sorted_neighbors(points: &EmbeddedPoints, p: usize) -> Vec<(usize, f64)> {
    let base = points.point(p);
    let mut others: Vec<(usize, f64)> = (0..points.len())
        .filter(|&i| i != p)
        .map(|i| (i, libm::sqrt(sq_dist(points.point(i), base))))
        .collect();
    others.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
    others
}

/// `exp(-d^2 / alpha)`, divided by the geometric mean so the product is 1.
fn unit_det_weights(dists: &[f64], alpha: f64) -> Vec<f64> {
    let logs: Vec<f64> = dists.iter().map(|d| -d * d / alpha).collect();
    let mean = logs.iter().sum::<f64>() / logs.len() as f64;
    logs.iter().map(|l| libm::exp(l - mean)).collect()
}

pub fn neighborhood_frame(
    points: &EmbeddedPoints,
    p: usize,
    s: usize,
    alpha: f64,
) -> Result<NeighborhoodFrame> {
    let n = points.len();
    if p >= n {
        return Err(Error::InvalidArgument(format!("base point {p} out of range")));
    }
    if s == 0 || s + 1 > n {
        return Err(Error::InvalidArgument(format!(
            "neighbour count {s} needs 1 <= s <= n - 1 = {}",
            n.saturating_sub(1)
        )));
    }
    if !(alpha > 0.0) {
        return Err(Error::InvalidArgument(format!("alpha {alpha} must be positive")));
    }
    let sorted = sorted_neighbors(points, p);
    let chosen = &sorted[..s];
    let scale = chosen[s - 1].1;
    if !(scale > 0.0) {
        return Err(Error::CoincidentPoints(format!(
            "all {s} nearest neighbours of point {p} coincide with it"
        )));
    }
    let dim = points.dim;
    let base = points.point(p);
    let mut x = Vec::with_capacity(s * dim);
    for &(i, _) in chosen {
        for (a, b) in points.point(i).iter().zip(base) {
            x.push((a - b) / scale);
        }
    }
    let dists: Vec<f64> = chosen.iter().map(|&(_, d)| d).collect();
    Ok(NeighborhoodFrame {
        base: p,
        neighbors: chosen.iter().map(|&(i, _)| i).collect(),
        dim,
        x,
        weights: unit_det_weights(&dists, alpha),
        scale,
    })
}

/// Fit errors of every neighbour for every fit dimension `1..=dim`.
///
/// `out[f - 1][i]` is `w_i * |(I - V_f V_f^T) x_i|`, where `V_f` holds the top
/// `f` eigenvectors of `C = X^T W X / s`.
pub fn fit_error_table(frame: &NeighborhoodFrame) -> Result<Vec<Vec<f64>>> {
    let (s, d) = (frame.s(), frame.dim);
    let mut c = vec![0.0; d * d];
    for i in 0..s {
        let row = frame.row(i);
        let w = frame.weights[i];
        for a in 0..d {
            for b in a..d {
                c[a * d + b] += w * row[a] * row[b];
            }
        }
    }
    for a in 0..d {
        for b in a..d {
            c[a * d + b] /= s as f64;
            c[b * d + a] = c[a * d + b];
        }
    }
    let eig = symmetric_eigen(&c, d)?;
    let mut table = vec![vec![0.0; s]; d];
    for i in 0..s {
        let row = frame.row(i);
        let coeffs: Vec<f64> = (0..d)
            .map(|k| (0..d).map(|a| row[a] * eig.vector_entry(a, k)).sum())
            .collect();
        // residual after keeping the first f directions = tail sum of squares
        let mut tail = 0.0;
        for f in (1..=d).rev() {
            table[f - 1][i] = frame.weights[i] * libm::sqrt(tail);
            tail += coeffs[f - 1] * coeffs[f - 1];
        }
    }
    Ok(table)
}

/// Per-neighbour error magnitudes at fit dimension `f`.
pub fn fit_errors(frame: &NeighborhoodFrame, f: usize) -> Result<Vec<f64>> {
    if f == 0 || f > frame.dim {
        return Err(Error::InvalidArgument(format!(
            "fit dimension {f} outside 1..={}",
            frame.dim
        )));
    }
    Ok(fit_error_table(frame)?.swap_remove(f - 1))
}

/// Reference geometry for the dimension profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum ReferenceShape {
    /// Solid unit ball in the first `dim` coordinates.
    Ball,
    /// Unit sphere in the first `dim + 1` coordinates.
    Sphere,
}

impl ReferenceShape {
    pub fn as_str(self) -> &'static str {
        match self {
            ReferenceShape::Ball => "ball",
            ReferenceShape::Sphere => "sphere",
        }
    }
}

fn gaussian_direction(rng: &mut ChaCha8Rng, k: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..k).map(|_| StandardNormal.sample(rng)).collect();
        let norm = libm::sqrt(v.iter().map(|x| x * x).sum());
        if norm > 1e-300 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

/// Uniform sample of `n` points from a unit ball or sphere of dimension
/// `dim`, zero-padded to `ambient` coordinates.
pub fn sample_reference(
    shape: ReferenceShape,
    dim: usize,
    ambient: usize,
    n: usize,
    seed: u64,
) -> Result<EmbeddedPoints> {
    let span = match shape {
        ReferenceShape::Ball => dim,
        ReferenceShape::Sphere => dim + 1,
    };
    if dim == 0 || span > ambient {
        return Err(Error::InvalidArgument(format!(
            "a {dim}-dimensional {} does not fit in {ambient} coordinates",
            shape.as_str()
        )));
    }
    if n < dim + 2 {
        return Err(Error::InvalidArgument(format!(
            "reference needs at least {} points",
            dim + 2
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut coords = vec![0.0; n * ambient];
    for i in 0..n {
        let dir = gaussian_direction(&mut rng, span);
        let radius = match shape {
            ReferenceShape::Sphere => 1.0,
            ReferenceShape::Ball => {
                let u: f64 = rand::Rng::random(&mut rng);
                libm::pow(u, 1.0 / dim as f64)
            }
        };
        for (k, c) in dir.iter().enumerate() {
            coords[i * ambient + k] = radius * c;
        }
    }
    EmbeddedPoints::unnamed(ambient, coords)
}

/// Settings for [`dimension_profile`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileParams {
    pub alpha: f64,
    /// Neighbour count; `None` means `min(20, n - 2)`.
    pub s: Option<usize>,
    /// Largest candidate dimension; `None` means the ambient dimension.
    pub f_max: Option<usize>,
    pub seed: u64,
}

impl Default for ProfileParams {
    fn default() -> Self {
        Self {
            alpha: DEFAULT_ALPHA,
            s: None,
            f_max: None,
            seed: 0,
        }
    }
}

/// Statistics for one candidate dimension.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct DimensionRow {
    pub f: usize,
    /// Mean data fit error at fit dimension `f`.
    pub mean_err_data: f64,
    /// Mean fit error at `f` of the best-matching `f`-dimensional reference.
    pub mean_err_ref: f64,
    /// Combined Welch statistic against that reference; `None` if undefined.
    pub t: Option<f64>,
    pub reference: Option<ReferenceShape>,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DimensionProfile {
    pub s: usize,
    pub alpha: f64,
    pub rows: Vec<DimensionRow>,
    /// Candidate dimension with the largest weight.
    pub peak: usize,
    /// Row-major `n x f_max`: each point's mean neighbour error per fit
    /// dimension.
    pub point_errors: Vec<f64>,
}

impl DimensionProfile {
    pub fn f_max(&self) -> usize {
        self.rows.len()
    }

    /// Mean error of point `p` at each fit dimension.
    pub fn point_row(&self, p: usize) -> &[f64] {
        let k = self.f_max();
        &self.point_errors[p * k..(p + 1) * k]
    }

    /// Each point's mean error averaged over the fit dimensions.
    pub fn point_means(&self) -> Vec<f64> {
        let k = self.f_max().max(1);
        self.point_errors
            .chunks(k)
            .map(|c| c.iter().sum::<f64>() / k as f64)
            .collect()
    }
}

struct ErrorSamples {
    // by_fit[g - 1] pools all neighbour errors at fit dimension g
    by_fit: Vec<Vec<f64>>,
    point_means: Vec<f64>,
}

fn collect_errors(points: &EmbeddedPoints, s: usize, alpha: f64, f_max: usize) -> Result<ErrorSamples> {
    let n = points.len();
    let mut by_fit = vec![Vec::with_capacity(n * s); f_max];
    let mut point_means = Vec::with_capacity(n * f_max);
    for p in 0..n {
        let frame = neighborhood_frame(points, p, s, alpha)?;
        let table = fit_error_table(&frame)?;
        for g in 0..f_max {
            by_fit[g].extend_from_slice(&table[g]);
            point_means.push(table[g].iter().sum::<f64>() / s as f64);
        }
    }
    Ok(ErrorSamples { by_fit, point_means })
}

fn mean_var(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = if xs.len() > 1 {
        xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    (mean, var)
}

/// Welch's two-sample statistic.
///
/// When both samples are (numerically) constant the statistic is 0 if the
/// means agree and infinite otherwise. Empty samples give `None`.
pub fn welch_t(a: &[f64], b: &[f64]) -> Option<f64> {
    if a.is_empty() || b.is_empty() {
        return None;
    }
    let (ma, va) = mean_var(a);
    let (mb, vb) = mean_var(b);
    let se = libm::sqrt(va / a.len() as f64 + vb / b.len() as f64);
    let diff = ma - mb;
    if se <= DEGENERATE_SE {
        return Some(if diff.abs() <= DEGENERATE_SE {
            0.0
        } else {
            f64::INFINITY.copysign(diff)
        });
    }
    Some(diff / se)
}

/// Profile of candidate dimensions `1..=f_max` for `points`.
pub fn dimension_profile(points: &EmbeddedPoints, params: &ProfileParams) -> Result<DimensionProfile> {
    let n = points.len();
    let ambient = points.dim;
    if n < 3 {
        return Err(Error::InvalidArgument(format!(
            "dimension profile needs at least 3 points, got {n}"
        )));
    }
    let s = params.s.unwrap_or_else(|| DEFAULT_NEIGHBORS.min(n - 2));
    if s == 0 || s > n - 2 {
        return Err(Error::InvalidArgument(format!(
            "neighbour count {s} outside 1..={}",
            n - 2
        )));
    }
    let f_max = params.f_max.unwrap_or(ambient);
    if f_max == 0 || f_max > ambient {
        return Err(Error::InvalidArgument(format!(
            "f_max {f_max} outside 1..={ambient}"
        )));
    }
    let data = collect_errors(points, s, params.alpha, f_max)?;

    let mut rows = Vec::with_capacity(f_max);
    for f in 1..=f_max {
        let mut best: Option<(f64, ReferenceShape, f64)> = None;
        for (k, shape) in [ReferenceShape::Ball, ReferenceShape::Sphere].into_iter().enumerate() {
            let seed = params
                .seed
                .wrapping_mul(0x9E37_79B9_7F4A_7C15)
                .wrapping_add((f as u64) << 1 | k as u64);
            let reference = match sample_reference(shape, f, ambient, n, seed) {
                Ok(r) => r,
                Err(_) => continue,
            };
            let ref_errors = collect_errors(&reference, s, params.alpha, f_max)?;
            let mut sum_sq = 0.0;
            let mut any = false;
            for g in 0..f_max {
                if let Some(t) = welch_t(&data.by_fit[g], &ref_errors.by_fit[g]) {
                    sum_sq += t * t;
                    any = true;
                }
            }
            if !any {
                continue;
            }
            let t = libm::sqrt(sum_sq);
            let ref_mean = mean_var(&ref_errors.by_fit[f - 1]).0;
            if best.map_or(true, |(bt, _, _)| t < bt) {
                best = Some((t, shape, ref_mean));
            }
        }
        rows.push(DimensionRow {
            f,
            mean_err_data: mean_var(&data.by_fit[f - 1]).0,
            mean_err_ref: best.map_or(f64::NAN, |b| b.2),
            t: best.map(|b| b.0),
            reference: best.map(|b| b.1),
            weight: 0.0,
        });
    }

    // Weights exp(-|T|), normalised over the defined rows.
    let defined: Vec<f64> = rows.iter().filter_map(|r| r.t).filter(|t| t.is_finite()).collect();
    let t_min = defined.iter().copied().fold(f64::INFINITY, f64::min);
    if defined.is_empty() {
        let w = 1.0 / rows.len() as f64;
        rows.iter_mut().for_each(|r| r.weight = w);
    } else {
        let total: f64 = rows
            .iter()
            .filter_map(|r| r.t)
            .filter(|t| t.is_finite())
            .map(|t| libm::exp(-(t - t_min)))
            .sum();
        for r in &mut rows {
            r.weight = match r.t {
                Some(t) if t.is_finite() => libm::exp(-(t - t_min)) / total,
                _ => 0.0,
            };
        }
    }
    let mut peak = 1;
    let mut best_w = f64::NEG_INFINITY;
    for r in &rows {
        if r.weight > best_w {
            best_w = r.weight;
            peak = r.f;
        }
    }
    Ok(DimensionProfile {
        s,
        alpha: params.alpha,
        rows,
        peak,
        point_errors: data.point_means,
    })
}

/// Volume of the unit ball in `d` dimensions.
pub fn unit_ball_volume(d: usize) -> f64 {
    let h = d as f64 / 2.0;
    libm::pow(PI, h) / libm::tgamma(h + 1.0)
}

/// Nonnegative density value per point (same order as the input).
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMap {
    pub values: Vec<f64>,
}

/// Kernel-weighted average of `1 / (Vol(B^d) d r^d)` over all other points,
/// `d` being the ambient dimension and `r` the distance to the base point.
pub fn density_map(points: &EmbeddedPoints, alpha: f64) -> Result<DensityMap> {
    let n = points.len();
    if n < 3 {
        return Err(Error::InvalidArgument(format!(
            "density map needs at least 3 points, got {n}"
        )));
    }
    if !(alpha > 0.0) {
        return Err(Error::InvalidArgument(format!("alpha {alpha} must be positive")));
    }
    let d = points.dim;
    let norm = unit_ball_volume(d) * d as f64;
    let mut values = Vec::with_capacity(n);
    for p in 0..n {
        let sorted = sorted_neighbors(points, p);
        if let Some(&(q, _)) = sorted.iter().find(|&&(_, r)| r == 0.0) {
            return Err(Error::CoincidentPoints(format!(
                "points {p} and {q} coincide, so their density term is infinite"
            )));
        }
        let dists: Vec<f64> = sorted.iter().map(|&(_, r)| r).collect();
        let w = unit_det_weights(&dists, alpha);
        let num: f64 = dists
            .iter()
            .zip(&w)
            .map(|(&r, &wi)| wi / (norm * libm::pow(r, d as f64)))
            .sum();
        let den: f64 = w.iter().sum();
        values.push(num / den);
    }
    Ok(DensityMap { values })
}
