#![allow(dead_code)]

use centralab::metrology::random::{ginibre, haar_unitary, unit_vector, with_spectrum};
use centralab::{Mat, PIndex, Vector, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn p(v: f64) -> PIndex {
    PIndex::new(v).unwrap()
}

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn gaussian(r: &mut ChaCha8Rng, rows: usize, cols: usize) -> Mat {
    ginibre(r, rows, cols)
}

pub fn unitary(r: &mut ChaCha8Rng, n: usize) -> Mat {
    haar_unitary(r, n)
}

pub fn unit(r: &mut ChaCha8Rng, n: usize) -> Vector {
    unit_vector(r, n)
}

/// Random matrix with singular values `n, n-1, ..., 1` scaled by a random factor.
pub fn gapped(r: &mut ChaCha8Rng, n: usize) -> Mat {
    let scale = 0.5 + r.random::<f64>();
    let spectrum: Vec<f64> = (0..n).map(|k| scale * (n - k) as f64).collect();
    with_spectrum(r, &spectrum)
}

pub fn random_scalar(r: &mut ChaCha8Rng) -> C64 {
    let modulus = 10f64.powf(r.random_range(-2.0..2.0));
    C64::from_polar(modulus, r.random_range(0.0..std::f64::consts::TAU))
}

pub fn dist(a: &Mat, b: &Mat) -> f64 {
    (a - b).frobenius()
}

/// `y xᴴ`, written out entrywise.
pub fn outer(x: &Vector, y: &Vector) -> Mat {
    Mat::from_fn(y.len(), x.len(), |i, j| y[i] * x[j].conj())
}
