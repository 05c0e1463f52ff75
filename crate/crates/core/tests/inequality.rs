mod common;

use common::rng;
use numrad_core::inequality::{
    draw_params, established_ids, evaluate, registry, run_suite, sample_instance, Ensemble, OperatorInstance,
    Params, Shape, SuiteConfig, Verdict,
};
use numrad_core::linalg::hermitian_eigvals;
use numrad_core::{random, ComplexMatrix, Complex64, Error};

fn scale_of(lhs: f64, rhs: f64) -> f64 {
    1f64.max(lhs.abs()).max(rhs.abs())
}

/// A sampled instance and its parameters for every id, across a few dims.
fn cases(seed: u64) -> Vec<(&'static str, OperatorInstance, Params)> {
    let mut r = rng(seed);
    let mut out = Vec::new();
    for d in registry() {
        for (k, ensemble) in d.admissible().into_iter().enumerate() {
            let dim = 2 + (k + seed as usize) % 4;
            let params = draw_params(d, &Params::default(), &mut r).unwrap();
            let inst = sample_instance(d.shape, d.states, ensemble, dim, &mut r).unwrap();
            out.push((d.id, inst, params));
        }
    }
    out
}

#[test]
fn canned_examples() {
    let t = ComplexMatrix::from_real_diag(&[1.0, -3.0]).unwrap();
    let r = evaluate("I1.1R", &OperatorInstance::single(t), &Params::default()).unwrap();
    assert!((r.lhs - 3.0).abs() <= 1e-12 && (r.rhs - 3.0).abs() <= 1e-12 && r.slack.abs() <= 1e-12);

    let j = ComplexMatrix::jordan_block(2).unwrap();
    let r = evaluate("I1.3L", &OperatorInstance::single(j), &Params::default()).unwrap();
    assert!((r.lhs - 0.25).abs() <= 1e-12 && (r.rhs - 0.25).abs() <= 1e-12);
    assert!(r.slack.abs() <= 1e-8 && !r.violated);

    let a = ComplexMatrix::identity(3).unwrap().scale_real(4.0);
    let r = evaluate("EQ2.23", &OperatorInstance::single(a), &Params::alpha(0.5)).unwrap();
    assert!((r.slack + 2.0).abs() <= 1e-12, "{}", r.slack);
    assert!(r.violated);
}

#[test]
fn lhs_and_rhs_are_unitarily_invariant() {
    for seed in 0..6 {
        for (id, inst, params) in cases(seed) {
            let Ok(base) = evaluate(id, &inst, &params) else { continue };
            let u = random::haar_unitary(&mut rng(seed + 99), inst.dim);
            let moved = evaluate(id, &inst.conjugate(&u).unwrap(), &params)
                .unwrap_or_else(|e| panic!("{id}: conjugated instance failed: {e}"));
            let tol = registry().iter().find(|d| d.id == id).unwrap().tolerance_factor().max(1e-8)
                * scale_of(base.lhs, base.rhs);
            assert!((moved.lhs - base.lhs).abs() <= tol, "{id} lhs {} vs {}", moved.lhs, base.lhs);
            assert!((moved.rhs - base.rhs).abs() <= tol, "{id} rhs {} vs {}", moved.rhs, base.rhs);
        }
    }
}

/// Log-ratio of the growth of both sides under `inst → c·inst`.
fn degree_gap(id: &str, inst: &OperatorInstance, params: &Params, c: f64) -> Option<f64> {
    let one = evaluate(id, inst, params).ok()?;
    let big = evaluate(id, &inst.scaled(c), params).ok()?;
    if one.lhs.abs() <= 1e-9 || one.rhs.abs() <= 1e-9 {
        return None;
    }
    Some(((big.lhs / one.lhs).ln() - (big.rhs / one.rhs).ln()).abs())
}

#[test]
fn homogeneous_entries_scale_both_sides_alike() {
    for seed in 0..4 {
        for (id, inst, params) in cases(seed) {
            let d = registry().iter().find(|d| d.id == id).unwrap();
            if !d.homogeneous {
                continue;
            }
            if let Some(gap) = degree_gap(id, &inst, &params, 3.0) {
                let tol = if d.tolerance_factor() > 1e-8 { 1e-3 } else { 1e-8 };
                assert!(gap <= tol, "{id}: gap {gap}");
            }
        }
    }
}

#[test]
fn flagged_entries_fail_the_homogeneity_check() {
    let a = random::psd(&mut rng(4), 3);
    let inst = OperatorInstance::single(a);
    for (id, params) in [
        ("EQ2.23", Params::alpha(0.3)),
        ("EQ2.24", Params::default()),
        ("I1.5", Params::default()),
    ] {
        let d = registry().iter().find(|d| d.id == id).unwrap();
        assert!(!d.homogeneous, "{id}");
        let gap = degree_gap(id, &inst, &params, 3.0).unwrap();
        assert!(gap > 1e-3, "{id}: gap {gap}");
    }
}

#[test]
fn conditioned_ensembles_hold_their_conditions() {
    let mut r = rng(12);
    for dim in 2..=8 {
        let psd = sample_instance(Shape::Single, 0, Ensemble::Psd, dim, &mut r).unwrap();
        let min = hermitian_eigvals(psd.a()).unwrap()[0];
        assert!(min >= -1e-10 * psd.a().frobenius_norm());
        for (shape, ensemble) in [
            (Shape::PairCommuting, Ensemble::Commuting),
            (Shape::PairReid, Ensemble::Reid),
            (Shape::PairKittaneh, Ensemble::Kittaneh),
        ] {
            let inst = sample_instance(shape, 1, ensemble, dim, &mut r).unwrap();
            let (res, scale) = inst.condition_residual().unwrap().unwrap();
            assert!(res <= 1e-10 * scale, "{ensemble:?}: {res} vs {scale}");
        }
    }
    assert!(sample_instance(Shape::Single, 0, Ensemble::Ginibre, 1, &mut r).is_err());
    assert!(sample_instance(Shape::PairReid, 0, Ensemble::Ginibre, 3, &mut r).is_err());
}

#[test]
fn shape_and_parameter_errors() {
    let j = ComplexMatrix::jordan_block(2).unwrap();
    let single = OperatorInstance::single(j.clone());
    assert!(matches!(
        evaluate("REID", &single, &Params::default()),
        Err(Error::ShapeMismatch { .. })
    ));
    assert!(evaluate("EQ2.23", &single, &Params::alpha(1.5)).is_err());
    assert!(evaluate("NOPE", &single, &Params::default()).is_err());
    let z = Complex64::new(f64::NAN, 0.0);
    let nan = ComplexMatrix::from_diag(&[z, z]);
    assert!(nan.is_err() || evaluate("I1.1R", &OperatorInstance::single(nan.unwrap()), &Params::default()).is_err());
}

#[test]
fn established_suite_is_green_and_deterministic() {
    let ids = established_ids().into_iter().map(String::from).collect();
    let config = SuiteConfig::new(11, ids, (2, 5), 40);
    let report = run_suite(&config).unwrap();
    for r in &report.results {
        assert_ne!(r.verdict, Verdict::Fail, "{}: {:?}", r.id, r.worst_witness);
    }
    assert_eq!(report.summary.fail, 0);
    assert_eq!(report.to_json(), run_suite(&config).unwrap().to_json());
}

#[test]
fn kittaneh_pair_bound_needs_half_powers() {
    let eps = 1e-2;
    let a = ComplexMatrix::from_real_diag(&[1.0, eps]).unwrap();
    let b = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0 / eps, 0.0]]).unwrap();
    let e = |i| numrad_core::spectral::StateVector::basis(2, i);
    let inst = OperatorInstance::pair(Shape::PairKittaneh, a, b, vec![e(0), e(1)]).unwrap();
    assert!(inst.condition_holds().unwrap());
    let off = evaluate("KITT", &inst, &Params::alpha(0.3)).unwrap();
    assert!(off.violated);
    assert!((off.lhs - 1.0).abs() <= 1e-12 && (off.rhs - eps.powf(0.2)).abs() <= 1e-6, "{off:?}");
    let half = evaluate("KITT", &inst, &Params::alpha(0.5)).unwrap();
    assert!(!half.violated && half.slack.abs() <= 1e-8);
}
