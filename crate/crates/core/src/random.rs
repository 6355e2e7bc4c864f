//! Seeded random matrices and vectors used by the property checks.

use nalgebra::DVector;
#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::numerics::{c64, identity, CMatrix, CVector};

pub fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

/// Complex Gaussian with unit variance in each of the real and imaginary parts.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> num_complex::Complex64 {
    c64(gaussian(rng), gaussian(rng))
}

pub fn random_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CVector {
    DVector::from_fn(n, |_, _| complex_gaussian(rng))
}

pub fn random_complex_matrix<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(n, n, |_, _| complex_gaussian(rng))
}

pub fn random_hermitian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let a = random_complex_matrix(n, rng);
    (&a + a.adjoint()).unscale(2.0)
}

/// Haar-distributed unitary via QR with phase-corrected diagonal.
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let qr = random_complex_matrix(n, rng).qr();
    let q = qr.q();
    let r = qr.r();
    let mut out = q;
    for k in 0..n {
        let d = r[(k, k)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { c64(1.0, 0.0) };
        let mut col = out.column_mut(k);
        col *= phase;
    }
    out
}

/// Random matrix with Frobenius norm exactly `scale`.
pub fn random_matrix_with_norm<R: Rng + ?Sized>(n: usize, scale: f64, rng: &mut R) -> CMatrix {
    let a = random_complex_matrix(n, rng);
    let norm = a.norm();
    if norm == 0.0 {
        identity(n) * c64(scale / (n as f64).sqrt(), 0.0)
    } else {
        a * c64(scale / norm, 0.0)
    }
}
