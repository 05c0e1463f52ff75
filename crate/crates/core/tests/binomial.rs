mod common;

use common::{any_pair, dist, rng};
use numrad_core::binomial::{
    binomial_coefficient, commutator, essential_part, expand_binomial, shifted_derivation, MAX_ORDER,
};
use numrad_core::linalg::mat_power;
use numrad_core::{random, ComplexMatrix, Complex64, Error};
use proptest::prelude::*;

proptest! {
    #[test]
    fn expansion_reproduces_power((a, b) in any_pair(6), n in 0usize..=6) {
        let e = expand_binomial(&a, &b, n).unwrap();
        prop_assert_eq!(e.terms.len(), n + 1);
        prop_assert!(e.relative_residual(&a, &b).unwrap() <= 1e-9);
    }

    #[test]
    fn low_order_parts((a, b) in any_pair(6)) {
        let zero = ComplexMatrix::zero(a.dim()).unwrap();
        prop_assert_eq!(essential_part(&b, &a, 0).unwrap(), zero.clone());
        prop_assert_eq!(essential_part(&b, &a, 1).unwrap(), zero);
        let d2 = essential_part(&b, &a, 2).unwrap();
        let expected = commutator(&b, &a).unwrap();
        prop_assert!(dist(&d2, &expected) <= 1e-12 * expected.frobenius_norm().max(1.0));
    }

    #[test]
    fn jacobi_identity((a, b) in any_pair(5), seed: u64) {
        let c = random::ginibre(&mut rng(seed), a.dim());
        let ab_c = commutator(&commutator(&a, &b).unwrap(), &c).unwrap();
        let bc_a = commutator(&commutator(&b, &c).unwrap(), &a).unwrap();
        let ca_b = commutator(&commutator(&c, &a).unwrap(), &b).unwrap();
        let sum = &(&ab_c + &bc_a) + &ca_b;
        let scale = a.frobenius_norm() * b.frobenius_norm() * c.frobenius_norm();
        prop_assert!(sum.frobenius_norm() <= 1e-12 * scale.max(1.0));
    }

    #[test]
    fn derivation_leibniz_rule((x, y) in any_pair(5), seed: u64) {
        // d_B(XY) = d_B(X)Y + X d_B(Y), with d_B = (0 + d_B)
        let b = random::ginibre(&mut rng(seed), x.dim());
        let zero = ComplexMatrix::zero(x.dim()).unwrap();
        let d = |m: &ComplexMatrix| shifted_derivation(&zero, &b, m).unwrap();
        let xy = x.matmul(&y).unwrap();
        let rhs = &d(&x).matmul(&y).unwrap() + &x.matmul(&d(&y)).unwrap();
        let scale = x.frobenius_norm() * y.frobenius_norm() * b.frobenius_norm();
        prop_assert!(dist(&d(&xy), &rhs) <= 1e-12 * scale.max(1.0));
    }
}

#[test]
fn commuting_pairs_have_no_essential_part() {
    let mut r = rng(8);
    for n in 1..=6 {
        let a = random::hermitian(&mut r, 4);
        let b = &a.matmul(&a).unwrap().scale_real(0.5) + &a.scale(Complex64::new(0.0, 1.0));
        let d = essential_part(&b, &a, n).unwrap();
        assert!(d.frobenius_norm() <= 1e-10 * mat_power(&a, n as u32).frobenius_norm().max(1.0));
    }
}

#[test]
fn first_order_term_is_a() {
    let mut r = rng(2);
    let a = random::ginibre(&mut r, 3);
    let b = random::ginibre(&mut r, 3);
    let e = expand_binomial(&a, &b, 1).unwrap();
    assert_eq!(e.terms[0].matrix, b);
    assert!(dist(&e.terms[1].matrix, &a) <= 1e-15);
}

#[test]
fn coefficients_and_cap() {
    let row: Vec<u64> = (0..=6).map(|k| binomial_coefficient(6, k)).collect();
    assert_eq!(row, vec![1, 6, 15, 20, 15, 6, 1]);
    let a = ComplexMatrix::identity(2).unwrap();
    assert!(matches!(
        expand_binomial(&a, &a, MAX_ORDER + 1),
        Err(Error::CapExceeded { .. })
    ));
    assert!(expand_binomial(&a, &ComplexMatrix::identity(3).unwrap(), 2).is_err());
}
