//! Random matrices and vectors used by the ensembles and by tests.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::linalg::ComplexMatrix;

/// Standard complex gaussian: real and imaginary parts i.i.d. N(0, 1/2).
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn gaussian_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Complex64> {
    (0..n).map(|_| complex_gaussian(rng)).collect()
}

/// Uniformly distributed point on the complex unit sphere.
pub fn unit_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Complex64> {
    loop {
        let v = gaussian_vector(rng, n);
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}

pub fn ginibre<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, |_, _| complex_gaussian(rng)).expect("valid dimension")
}

pub fn hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    ginibre(rng, n).hermitian_part()
}

/// `G*G` for a Ginibre `G`.
pub fn psd<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let g = ginibre(rng, n);
    g.adjoint().mul_unchecked(&g).hermitian_part()
}

/// Haar-distributed unitary: Gram-Schmidt on a Ginibre matrix. Modified
/// Gram-Schmidt on the columns yields R with positive diagonal, which is the
/// phase fix that makes Q Haar.
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    loop {
        let g = ginibre(rng, n);
        let mut cols: Vec<Vec<Complex64>> = (0..n).map(|j| g.column(j)).collect();
        let mut ok = true;
        for j in 0..n {
            for _ in 0..2 {
                for i in 0..j {
                    let proj: Complex64 = cols[i].iter().zip(&cols[j]).map(|(a, b)| a.conj() * b).sum();
                    let (head, tail) = cols.split_at_mut(j);
                    tail[0].iter_mut().zip(&head[i]).for_each(|(x, q)| *x -= proj * q);
                }
            }
            let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-6 {
                ok = false;
                break;
            }
            cols[j].iter_mut().for_each(|z| *z /= norm);
        }
        if ok {
            return ComplexMatrix::from_fn(n, |i, j| cols[j][i]).expect("valid dimension");
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn unitary_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..8 {
            let u = haar_unitary(&mut rng, n);
            let uu = u.adjoint().mul_unchecked(&u);
            let id = ComplexMatrix::identity(n).unwrap();
            assert!((&uu - &id).max_abs() < 1e-13);
        }
    }

    #[test]
    fn unit_vectors_are_normalized() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for n in 1..10 {
            let v = unit_vector(&mut rng, n);
            let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum();
            assert!((norm - 1.0).abs() < 1e-14);
        }
    }
}
