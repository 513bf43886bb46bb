//! Slow reference implementations used to cross-check the library.
//!
//! None of these share code with the crate under test beyond plain data
//! types; they work on raw coordinate slices and brute-force enumeration.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Full pairwise distance table of row-major points.
pub fn distance_table(dim: usize, coords: &[f64]) -> Vec<Vec<f64>> {
    let n = coords.len() / dim;
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| dist(&coords[i * dim..(i + 1) * dim], &coords[j * dim..(j + 1) * dim]))
                .collect()
        })
        .collect()
}

/// Every vertex subset of size `1..=max_size` that is a clique at `radius`,
/// as ascending vertex lists.
pub fn brute_cliques(d: &[Vec<f64>], max_size: usize, radius: f64) -> Vec<Vec<usize>> {
    let n = d.len();
    assert!(n < 20);
    let mut out = Vec::new();
    for mask in 1u32..(1 << n) {
        let k = mask.count_ones() as usize;
        if k > max_size {
            continue;
        }
        let v: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let ok = v
            .iter()
            .all(|&a| v.iter().all(|&b| a >= b || d[a][b] <= radius));
        if ok {
            out.push(v);
        }
    }
    out
}

/// Rank over GF(2) of rows given as bitsets.
pub fn gf2_rank(mut rows: Vec<Vec<u64>>) -> usize {
    let mut rank = 0;
    let width = rows.first().map_or(0, |r| r.len() * 64);
    for bit in 0..width {
        let (w, b) = (bit / 64, bit % 64);
        let Some(p) = (rank..rows.len()).find(|&i| rows[i][w] >> b & 1 == 1) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && row[w] >> b & 1 == 1 {
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Rank of the boundary map from `k`-simplices to `(k-1)`-simplices.
fn boundary_rank(simplices: &[Vec<usize>], k: usize) -> usize {
    if k == 0 {
        return 0;
    }
    let faces: BTreeMap<&[usize], usize> = simplices
        .iter()
        .filter(|s| s.len() == k)
        .enumerate()
        .map(|(i, s)| (s.as_slice(), i))
        .collect();
    let words = faces.len().div_ceil(64).max(1);
    let rows: Vec<Vec<u64>> = simplices
        .iter()
        .filter(|s| s.len() == k + 1)
        .map(|s| {
            let mut row = vec![0u64; words];
            for drop in 0..s.len() {
                let face: Vec<usize> = s
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != drop)
                    .map(|(_, &v)| v)
                    .collect();
                let idx = faces[face.as_slice()];
                row[idx / 64] ^= 1 << (idx % 64);
            }
            row
        })
        .collect();
    gf2_rank(rows)
}

/// Betti number `k` of the Vietoris-Rips complex at `radius`, from ranks of
/// boundary matrices.
pub fn rank_betti(d: &[Vec<f64>], radius: f64, k: usize) -> usize {
    let cx = brute_cliques(d, k + 2, radius);
    let c_k = cx.iter().filter(|s| s.len() == k + 1).count();
    c_k - boundary_rank(&cx, k) - boundary_rank(&cx, k + 1)
}

/// Naive agglomerative single linkage: every cluster ever formed with the
/// height at which it became connected. Singletons have height 0.
pub fn single_linkage(d: &[Vec<f64>]) -> Vec<(BTreeSet<usize>, f64)> {
    let n = d.len();
    let mut active: Vec<BTreeSet<usize>> = (0..n).map(|i| BTreeSet::from([i])).collect();
    let mut out: Vec<(BTreeSet<usize>, f64)> = active.iter().map(|c| (c.clone(), 0.0)).collect();
    while active.len() > 1 {
        let mut best = (f64::INFINITY, 0, 0);
        for a in 0..active.len() {
            for b in a + 1..active.len() {
                for &i in &active[a] {
                    for &j in &active[b] {
                        if d[i][j] < best.0 {
                            best = (d[i][j], a, b);
                        }
                    }
                }
            }
        }
        let (h, a, b) = best;
        let merged: BTreeSet<usize> = active[a].union(&active[b]).copied().collect();
        active.remove(b);
        active.remove(a);
        out.push((merged.clone(), h));
        active.push(merged);
    }
    out
}

/// Smallest pairwise distance at which the neighbourhood graph connects.
pub fn connectivity_scan(d: &[Vec<f64>]) -> f64 {
    let n = d.len();
    let mut radii: Vec<f64> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .map(|(i, j)| d[i][j])
        .collect();
    radii.sort_by(f64::total_cmp);
    radii.insert(0, 0.0);
    for r in radii {
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for w in 0..n {
                if !seen[w] && d[v][w] <= r {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        if seen.iter().all(|&s| s) {
            return r;
        }
    }
    unreachable!()
}

/// All simple cycles (length `3..=max_len`) of an undirected graph, each as
/// its canonical vertex sequence: rotated to the smallest vertex, direction
/// with the smaller second vertex. Found by trying every ordering of every
/// vertex subset.
pub fn brute_cycles(adj: &[Vec<bool>], max_len: usize) -> BTreeSet<Vec<usize>> {
    let n = adj.len();
    let mut out = BTreeSet::new();
    for mask in 1u32..(1 << n) {
        let k = mask.count_ones() as usize;
        if k < 3 || k > max_len {
            continue;
        }
        let v: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let mut rest = v[1..].to_vec();
        permute(&mut rest, 0, &mut |perm| {
            let mut cyc = vec![v[0]];
            cyc.extend_from_slice(perm);
            let closed = (0..k).all(|i| adj[cyc[i]][cyc[(i + 1) % k]]);
            if closed && cyc[1] < cyc[k - 1] {
                out.insert(cyc);
            }
        });
    }
    out
}

fn permute(xs: &mut Vec<usize>, i: usize, f: &mut dyn FnMut(&[usize])) {
    if i == xs.len() {
        f(xs);
        return;
    }
    for j in i..xs.len() {
        xs.swap(i, j);
        permute(xs, i + 1, f);
        xs.swap(i, j);
    }
}

/// Real roots of the characteristic polynomial of a symmetric 3x3 matrix,
/// descending, by the trigonometric cubic formula.
pub fn sym3_eigenvalues(a: [[f64; 3]; 3]) -> [f64; 3] {
    let p1 = a[0][1].powi(2) + a[0][2].powi(2) + a[1][2].powi(2);
    let q = (a[0][0] + a[1][1] + a[2][2]) / 3.0;
    let p2 = (a[0][0] - q).powi(2) + (a[1][1] - q).powi(2) + (a[2][2] - q).powi(2) + 2.0 * p1;
    let p = (p2 / 6.0).sqrt();
    if p == 0.0 {
        return [q; 3];
    }
    let mut b = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            b[i][j] = (a[i][j] - if i == j { q } else { 0.0 }) / p;
        }
    }
    let det = b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1])
        - b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0])
        + b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
    let r = (det / 2.0).clamp(-1.0, 1.0);
    let phi = r.acos() / 3.0;
    let e1 = q + 2.0 * p * phi.cos();
    let e3 = q + 2.0 * p * (phi + 2.0 * std::f64::consts::PI / 3.0).cos();
    [e1, 3.0 * q - e1 - e3, e3]
}

/// Leading eigenvector of a symmetric 3x3 matrix by power iteration.
pub fn power_iteration(a: [[f64; 3]; 3]) -> [f64; 3] {
    let mut v = [1.0, 0.7, 0.3];
    for _ in 0..5000 {
        let mut w = [0.0; 3];
        for i in 0..3 {
            for j in 0..3 {
                w[i] += a[i][j] * v[j];
            }
        }
        let n = (w[0] * w[0] + w[1] * w[1] + w[2] * w[2]).sqrt();
        v = [w[0] / n, w[1] / n, w[2] / n];
    }
    v
}

/// Nontrivial splits of a rooted tree given as nested leaf lists: each clade
/// seen from the side not containing `anchor`.
pub fn splits(clades: &[BTreeSet<&'static str>], leaves: &BTreeSet<&'static str>) -> BTreeSet<BTreeSet<&'static str>> {
    let anchor = *leaves.iter().next().unwrap();
    clades
        .iter()
        .filter(|c| c.len() >= 2 && c.len() + 2 <= leaves.len())
        .map(|c| {
            if c.contains(anchor) {
                leaves.difference(c).copied().collect()
            } else {
                c.clone()
            }
        })
        .collect()
}
