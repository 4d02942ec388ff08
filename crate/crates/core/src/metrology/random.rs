//! Random matrices and vectors drawn from a caller-supplied generator.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::matcore::{Mat, Vector, C64};

/// Standard complex Gaussian, `E|z|² = 1`.
pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn ginibre<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> Mat {
    let mut m = DMatrix::<C64>::zeros(rows, cols);
    // fill row-major so the stream layout matches the wire format
    for i in 0..rows {
        for j in 0..cols {
            m[(i, j)] = complex_normal(rng);
        }
    }
    Mat::wrap(m)
}

/// Uniformly distributed unit vector in `ℂⁿ`.
pub fn unit_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vector {
    loop {
        let v = Vector::from_iterator(n, (0..n).map(|_| complex_normal(rng)));
        let norm = v.norm();
        if norm > 1e-300 {
            return v / C64::new(norm, 0.0);
        }
    }
}

/// Haar-distributed unitary: QR of a Ginibre matrix with the phases of
/// `diag(R)` moved into `Q`.
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Mat {
    let z = ginibre(rng, n, n).into_matrix();
    let qr = z.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        let mut col = q.column_mut(j);
        col *= phase;
    }
    Mat::wrap(q)
}

/// `u · diag(spectrum) · v` with independent Haar unitaries.
pub fn with_spectrum<R: Rng + ?Sized>(rng: &mut R, spectrum: &[f64]) -> Mat {
    let n = spectrum.len();
    let u = haar_unitary(rng, n);
    let v = haar_unitary(rng, n);
    &(&u * &Mat::diag_real(spectrum)) * &v
}

/// Element of the unit ball of `B(ℂⁿ)`: a Haar unitary times a contraction
/// with uniform spectrum in `[0, 1]`.
pub fn contraction<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Mat {
    let spectrum: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
    let u = haar_unitary(rng, n);
    &u * &with_spectrum(rng, &spectrum)
}
