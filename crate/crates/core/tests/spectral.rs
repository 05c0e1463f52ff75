mod common;

use common::{any_psd, dist, rng};
use numrad_core::linalg::operator_norm;
use numrad_core::spectral::{
    apply_fn, cheb_double_sum, cheb_functional, pre_gruss_slack, qform, PowerPair, ScalarFn, SpectralCalculus,
    StateVector,
};
use numrad_core::{random, ComplexMatrix, Error};
use proptest::prelude::*;

fn unit(seed: u64, n: usize) -> StateVector {
    StateVector::new(random::unit_vector(&mut rng(seed), n)).unwrap()
}

fn small_fn() -> impl Strategy<Value = ScalarFn> {
    prop_oneof![
        (0.0f64..2.5).prop_map(ScalarFn::power),
        prop::collection::vec(-1.0f64..1.0, 1..4).prop_map(ScalarFn::poly),
        Just(ScalarFn::Log1p),
        Just(ScalarFn::Identity),
        (-2.0f64..2.0).prop_map(ScalarFn::constant),
    ]
}

proptest! {
    #[test]
    fn chebyshev_routes_agree(a in any_psd(7), f in small_fn(), g in small_fn(), seed: u64) {
        let x = unit(seed, a.dim());
        let m = cheb_functional(&f, &g, &a, &x).unwrap();
        let s = cheb_double_sum(&f, &g, &a, &x).unwrap();
        let fa = operator_norm(&apply_fn(&f, &a).unwrap()).unwrap();
        let ga = operator_norm(&apply_fn(&g, &a).unwrap()).unwrap();
        prop_assert!((m - s).abs() <= 1e-10 * (fa * ga).max(1.0), "{m} vs {s}");
    }

    #[test]
    fn pre_gruss_holds(a in any_psd(8), f in small_fn(), g in small_fn(), seed: u64) {
        let x = unit(seed, a.dim());
        let slack = pre_gruss_slack(&f, &g, &a, &x).unwrap();
        let fa = operator_norm(&apply_fn(&f, &a).unwrap()).unwrap();
        let ga = operator_norm(&apply_fn(&g, &a).unwrap()).unwrap();
        prop_assert!(slack >= -1e-9 * (fa * ga).max(1.0));
    }

    #[test]
    fn functional_calculus_is_multiplicative(a in any_psd(6), alpha in 0.0f64..1.0) {
        let calc = SpectralCalculus::new(&a).unwrap();
        let (f, g) = PowerPair::new(alpha).unwrap().pair();
        let prod = calc.apply(&f).unwrap().matmul(&calc.apply(&g).unwrap()).unwrap();
        prop_assert!(dist(&prod, &a) <= 1e-10 * a.frobenius_norm().max(1.0));
    }

    #[test]
    fn measure_is_a_probability(a in any_psd(6), seed: u64) {
        let x = unit(seed, a.dim());
        let mu = SpectralCalculus::new(&a).unwrap().measure(&x).unwrap();
        prop_assert!((mu.total_mass() - 1.0).abs() <= 1e-12);
        let first = mu.integrate(&ScalarFn::Identity).unwrap();
        let direct = qform(&a, &x).unwrap();
        prop_assert!((first - direct.re).abs() <= 1e-10 * a.frobenius_norm().max(1.0));
    }
}

#[test]
fn square_root_squares_back() {
    let a = random::psd(&mut rng(3), 5);
    let r = apply_fn(&ScalarFn::power(0.5), &a).unwrap();
    assert!(dist(&r.matmul(&r).unwrap(), &a) <= 1e-10 * a.frobenius_norm());
    let e = apply_fn(&ScalarFn::power(1.0), &a).unwrap();
    assert!(dist(&e, &a) <= 1e-12 * a.frobenius_norm());
}

#[test]
fn synchronous_pairs_have_nonnegative_functional() {
    let f = ScalarFn::power(1.5);
    let g = ScalarFn::poly(vec![-0.3, 0.4, 0.2]);
    let neg = ScalarFn::poly(vec![0.3, -0.4, -0.2]);
    for seed in 0..100 {
        let a = random::psd(&mut rng(seed), 2 + seed as usize % 6);
        let x = unit(seed + 500, a.dim());
        assert!(cheb_functional(&f, &g, &a, &x).unwrap() >= -1e-10);
        assert!(cheb_functional(&f, &neg, &a, &x).unwrap() <= 1e-10);
    }
}

#[test]
fn rejects_indefinite_input() {
    let h = ComplexMatrix::from_real_diag(&[1.0, -1.0]).unwrap();
    assert!(matches!(SpectralCalculus::new(&h), Err(Error::NotPsd { .. })));
}

#[test]
fn state_vectors_must_be_unit() {
    let c = numrad_core::Complex64::new(0.6, 0.0);
    assert!(StateVector::new(vec![c, c]).is_err());
    let json = "[[0.6,0.0],[0.0,0.8]]";
    let x: StateVector = serde_json::from_str(json).unwrap();
    assert_eq!(x.dim(), 2);
    assert!(serde_json::from_str::<StateVector>("[[1.0,0.0],[1.0,0.0]]").is_err());
}

#[test]
fn scalar_fn_json() {
    let f: ScalarFn = serde_json::from_str(r#"{"kind":"sqrt_of","inner":{"kind":"poly","coeffs":[1.0,2.0]}}"#).unwrap();
    assert_eq!(f.eval(4.0).unwrap(), 3.0);
    assert!(serde_json::from_str::<ScalarFn>(r#"{"kind":"power","alpha":1,"extra":0}"#).is_err());
    assert!(ScalarFn::power(-1.0).validate().is_err());
    assert!(matches!(ScalarFn::Exp.eval(1e4), Err(Error::Domain(_))));
}
