#![allow(dead_code)]

use std::f64::consts::PI;

use fmd_core::{norm, Signal};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn tone(n: usize, cycles: f64, amplitude: f64) -> Vec<f64> {
    (0..n)
        .map(|t| amplitude * (2.0 * PI * cycles * t as f64 / n as f64).sin())
        .collect()
}

pub fn sum_vecs(parts: &[Vec<f64>]) -> Vec<f64> {
    let mut out = vec![0.0; parts[0].len()];
    for p in parts {
        for (o, v) in out.iter_mut().zip(p) {
            *o += v;
        }
    }
    out
}

pub fn random_1d(n: usize, seed: u64) -> Signal {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    Signal::real_1d(&v).unwrap()
}

/// Integer pixels 0..=255.
pub fn random_image(rows: usize, cols: usize, seed: u64) -> Signal {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v: Vec<f64> = (0..rows * cols).map(|_| rng.gen_range(0..=255) as f64).collect();
    Signal::real_2d(rows, cols, &v).unwrap()
}

/// `||x - sum(components)|| / ||x||`.
pub fn reconstruction_error(x: &Signal, components: &[Signal]) -> f64 {
    let sum = Signal::sum_all(components).unwrap();
    norm(&x.sub(&sum).unwrap()) / norm(x)
}

pub fn max_abs_diff(a: &Signal, b: &Signal) -> f64 {
    a.samples()
        .iter()
        .zip(b.samples())
        .map(|(p, q)| (p - q).norm())
        .fold(0.0, f64::max)
}
