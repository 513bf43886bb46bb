//! Hand-built point clouds with known topology.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

/// Regular unit-side hexagon (points 0..6, point 0 at (1, 0)) with a tuft
/// of three points 6, 7, 8 just outside point 0. The tuft and point 0 form a
/// 4-clique well below the hexagon's side length, so every cycle through the
/// tuft is clique-filled, while the hexagon is the only cycle through point 0
/// that bounds nothing.
///
/// Every coordinate is jittered uniformly by at most `jitter`.
pub fn hexagon_with_tuft(seed: u64, jitter: f64) -> Vec<f64> {
    let mut pts: Vec<[f64; 2]> = (0..6)
        .map(|k| {
            let a = std::f64::consts::PI / 3.0 * k as f64;
            [a.cos(), a.sin()]
        })
        .collect();
    pts.extend([[1.5, 0.25], [1.5, -0.25], [1.9, 0.0]]);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    pts.iter()
        .flat_map(|p| p.to_vec())
        .map(|c| {
            if jitter > 0.0 {
                c + rng.random_range(-jitter..=jitter)
            } else {
                c
            }
        })
        .collect()
}

/// Indices of the hexagon itself in [`hexagon_with_tuft`].
pub const HEXAGON: [usize; 6] = [0, 1, 2, 3, 4, 5];

/// A unit square A B C D (0..4) tied by one bridge edge B-X to a bowtie of
/// two triangles P-X-Y and P-U-V sharing only P.
///
/// Indices: A 0, B 1, C 2, D 3, X 4, Y 5, P 6, U 7, V 8.
/// The square closes at radius 1; every bowtie edge is shorter than 1.
pub fn square_and_bowtie() -> Vec<f64> {
    vec![
        0.0, 0.0, // A
        1.0, 0.0, // B
        1.0, 1.0, // C
        0.0, 1.0, // D
        2.0, 0.0, // X
        2.8, -0.45, // Y
        2.8, 0.5, // P
        3.6, 0.95, // U
        3.7, 0.1, // V
    ]
}

/// `n` points on a circle of the given radius in the plane, equally spaced
/// in angle, with independent Gaussian radial noise.
pub fn noisy_circle(seed: u64, n: usize, radius: f64, sigma: f64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise = Normal::new(0.0, sigma).unwrap();
    (0..n)
        .flat_map(|k| {
            let a = std::f64::consts::TAU * k as f64 / n as f64;
            let r = radius + noise.sample(&mut rng);
            [r * a.cos(), r * a.sin()]
        })
        .collect()
}
