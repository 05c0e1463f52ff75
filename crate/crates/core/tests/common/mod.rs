#![allow(dead_code)]

use numrad_core::{random, ComplexMatrix, Complex64};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A Ginibre matrix of dimension 1..=max_dim, scaled by 10^k for k in -2..=2.
pub fn any_matrix(max_dim: usize) -> impl Strategy<Value = ComplexMatrix> {
    (1..=max_dim, any::<u64>(), -2i32..=2).prop_map(|(n, seed, k)| {
        random::ginibre(&mut rng(seed), n).scale_real(10f64.powi(k))
    })
}

pub fn any_psd(max_dim: usize) -> impl Strategy<Value = ComplexMatrix> {
    (1..=max_dim, any::<u64>()).prop_map(|(n, seed)| random::psd(&mut rng(seed), n))
}

pub fn any_pair(max_dim: usize) -> impl Strategy<Value = (ComplexMatrix, ComplexMatrix)> {
    (1..=max_dim, any::<u64>()).prop_map(|(n, seed)| {
        let mut r = rng(seed);
        (random::ginibre(&mut r, n), random::ginibre(&mut r, n))
    })
}

/// `U·diag(d)·U*` with Haar `U` and complex Gaussian `d`.
pub fn normal_matrix(seed: u64, n: usize) -> ComplexMatrix {
    let mut r = rng(seed);
    let u = random::haar_unitary(&mut r, n);
    let d: Vec<Complex64> = (0..n).map(|_| random::complex_gaussian(&mut r)).collect();
    let dm = ComplexMatrix::from_diag(&d).unwrap();
    u.matmul(&dm).unwrap().matmul(&u.adjoint()).unwrap()
}

pub fn dist(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    a.try_sub(b).unwrap().frobenius_norm()
}

pub fn is_unitary(u: &ComplexMatrix, tol: f64) -> bool {
    let n = u.dim();
    dist(&u.adjoint().matmul(u).unwrap(), &ComplexMatrix::identity(n).unwrap()) <= tol
}
