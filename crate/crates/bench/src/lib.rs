//! Fixtures shared by the benchmarks.

use numrad_core::random::{ginibre, psd};
use numrad_core::ComplexMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// A fixed Ginibre matrix of dimension `n`.
pub fn ginibre_fixture(n: usize) -> ComplexMatrix {
    ginibre(&mut ChaCha8Rng::seed_from_u64(n as u64), n)
}

/// A fixed positive semidefinite matrix of dimension `n`.
pub fn psd_fixture(n: usize) -> ComplexMatrix {
    psd(&mut ChaCha8Rng::seed_from_u64(1000 + n as u64), n)
}
