//! Invariant tests: structural identities that must hold on randomly drawn
//! inputs, independent of any particular closed-form value.

use corrsep::analytic::hyperbola_and_min;
use corrsep::bases::{correlation_matrix, scale_correlation, OperatorBasis};
use corrsep::criteria::{
    detection_threshold_numeric, enhanced_realignment, ppt_test, xy_criterion, Criterion,
    CriterionParams, NamedCriterion, DETECTION_TOL,
};
use corrsep::linalg::{
    hermitian_spectrum, partial_trace, partial_transpose, realign, singular_values, trace_norm,
    vectorize,
};
use corrsep::states::{isotropic, random_bipartite_density, random_separable_density, IsotropicParams};
use corrsep::{BipartiteShape, CMatrix, CVector, Factor, C64};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const DIMS: [(usize, usize); 5] = [(2, 2), (2, 3), (3, 3), (2, 4), (3, 4)];

fn shape_at(idx: usize) -> BipartiteShape {
    let (d1, d2) = DIMS[idx % DIMS.len()];
    BipartiteShape::new(d1, d2).unwrap()
}

fn random_matrix(n: usize, m: usize, rng: &mut impl Rng) -> CMatrix {
    CMatrix::from_fn(n, m, |_, _| {
        C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
    })
}

/// Identity plus the rank-one correction that represents scaling the
/// identity component of one factor, acting on the realignment directly.
fn identity_component_scaling(d: usize, factor: f64) -> CMatrix {
    let v = vectorize(&CMatrix::identity(d, d));
    CMatrix::identity(d * d, d * d) + (&v * v.transpose()).scale((factor - 1.0) / d as f64)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn realignment_preserves_the_frobenius_norm(seed: u64, idx in 0usize..DIMS.len()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shape = shape_at(idx);
        let n = shape.total();
        let rho = random_matrix(n, n, &mut rng);
        let r = realign(&rho, shape).unwrap();
        prop_assert!((r.norm() - rho.norm()).abs() < 1e-12);
    }

    #[test]
    fn trace_norm_dominates_the_trace(seed: u64, n in 2usize..7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_matrix(n, n, &mut rng);
        prop_assert!(trace_norm(&a).unwrap() >= a.trace().norm() - 1e-10);
    }

    #[test]
    fn partial_transpose_is_involutive(seed: u64, idx in 0usize..DIMS.len()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shape = shape_at(idx);
        let n = shape.total();
        let rho = random_matrix(n, n, &mut rng);
        for factor in [Factor::First, Factor::Second] {
            let once = partial_transpose(&rho, shape, factor).unwrap();
            let twice = partial_transpose(&once, shape, factor).unwrap();
            prop_assert!((&twice - &rho).norm() < 1e-13);
        }
    }

    #[test]
    fn partial_traces_preserve_the_trace(seed: u64, idx in 0usize..DIMS.len()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shape = shape_at(idx);
        let n = shape.total();
        let rho = random_matrix(n, n, &mut rng);
        for keep in [Factor::First, Factor::Second] {
            let reduced = partial_trace(&rho, shape, keep).unwrap();
            prop_assert!((reduced.trace() - rho.trace()).norm() < 1e-12);
        }
    }

    #[test]
    fn correlation_scaling_composes_exactly(
        seed: u64,
        x1 in 0.0..3.0f64,
        y1 in 0.0..3.0f64,
        x2 in 0.0..3.0f64,
        y2 in 0.0..3.0f64,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shape = BipartiteShape::new(2, 3).unwrap();
        let rho = random_bipartite_density(shape, &mut rng).unwrap();
        let b1 = OperatorBasis::gell_mann(2).unwrap();
        let b2 = OperatorBasis::gell_mann(3).unwrap();
        let c = correlation_matrix(&rho, &b1, &b2).unwrap();
        let stepwise = scale_correlation(&scale_correlation(&c, x1, y1).unwrap(), x2, y2).unwrap();
        let oneshot = scale_correlation(&c, x1 * x2, y1 * y2).unwrap();
        prop_assert_eq!(stepwise.entries(), oneshot.entries());
    }

    #[test]
    fn correlation_singular_values_ignore_the_basis_choice(seed: u64, idx in 0usize..DIMS.len()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shape = shape_at(idx);
        let rho = random_bipartite_density(shape, &mut rng).unwrap();

        let g1 = OperatorBasis::gell_mann(shape.d1()).unwrap();
        let g2 = OperatorBasis::gell_mann(shape.d2()).unwrap();
        let r1 = OperatorBasis::rotated_canonical(shape.d1(), &mut rng).unwrap();
        let r2 = OperatorBasis::rotated_canonical(shape.d2(), &mut rng).unwrap();

        let sv_g = singular_values(&correlation_matrix(&rho, &g1, &g2).unwrap().entries()).unwrap();
        let sv_r = singular_values(&correlation_matrix(&rho, &r1, &r2).unwrap().entries()).unwrap();
        for (a, b) in sv_g.iter().zip(sv_r.iter()) {
            prop_assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn scaled_correlation_matches_the_realignment_sandwich(
        seed: u64,
        idx in 0usize..DIMS.len(),
        x in 0.0..3.0f64,
        y in 0.0..3.0f64,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shape = shape_at(idx);
        let rho = random_bipartite_density(shape, &mut rng).unwrap();

        let b1 = OperatorBasis::gell_mann(shape.d1()).unwrap();
        let b2 = OperatorBasis::gell_mann(shape.d2()).unwrap();
        let c = correlation_matrix(&rho, &b1, &b2).unwrap();
        let scaled = scale_correlation(&c, x, y).unwrap();
        let sv_c = singular_values(&scaled.entries()).unwrap();

        let dx = identity_component_scaling(shape.d1(), x);
        let dy = identity_component_scaling(shape.d2(), y);
        let sandwich = dx * realign(rho.matrix(), shape).unwrap() * dy;
        let sv_s = singular_values(&sandwich).unwrap();

        for (a, b) in sv_c.iter().zip(sv_s.iter()) {
            prop_assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn separable_states_are_never_detected(
        seed: u64,
        idx in 0usize..DIMS.len(),
        xfrac in 0.0..1.0f64,
        yfrac in 0.0..1.0f64,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shape = shape_at(idx);
        let rho = random_separable_density(shape, 20, &mut rng).unwrap();

        let limit = ((shape.d2() + 1) as f64).sqrt();
        let params = CriterionParams::new(xfrac * limit, yfrac * limit).unwrap();
        let report = xy_criterion(&rho, &params).unwrap();
        prop_assert!(report.margin <= DETECTION_TOL, "xy margin {}", report.margin);

        prop_assert!(!enhanced_realignment(&rho).unwrap().detected);
        prop_assert!(!ppt_test(&rho).unwrap().detected);

        // state spectra stay physical along the way
        let ev = hermitian_spectrum(rho.matrix()).unwrap();
        prop_assert!(ev[0] >= -1e-10);
    }
}

#[test]
fn isotropic_margin_is_monotone_in_the_mixing_parameter() {
    let shape = BipartiteShape::new(2, 3).unwrap();
    for params in [
        CriterionParams::new(1.0, 1.0).unwrap(),
        CriterionParams::new(0.7, 1.9).unwrap(),
        CriterionParams::new(0.0, 0.0).unwrap(),
    ] {
        let mut last = f64::NEG_INFINITY;
        for i in 0..=100 {
            let p = i as f64 / 100.0;
            let rho = isotropic(IsotropicParams { shape, p }).unwrap();
            let margin = xy_criterion(&rho, &params).unwrap().margin;
            assert!(
                margin >= last - 1e-10,
                "margin decreased at p = {p}: {margin} < {last}"
            );
            last = margin;
        }
    }
}

#[test]
fn enhanced_realignment_threshold_is_the_family_minimum() {
    let shape = BipartiteShape::new(2, 3).unwrap();
    let family = |p: f64| isotropic(IsotropicParams { shape, p });

    let er = detection_threshold_numeric(family, &Criterion::EnhancedRealignment, (0.0, 1.0))
        .unwrap();

    // rectangular grid plus points on the minimizing curve, where the
    // family-wide infimum is actually attained
    let (curve, _) = hyperbola_and_min(shape).unwrap();
    let limit = (4.0_f64).sqrt();
    let mut points = Vec::new();
    for i in 0..4 {
        for j in 0..4 {
            points.push((limit * i as f64 / 3.0, limit * j as f64 / 3.0));
        }
    }
    for i in 0..4 {
        let x = curve.x_min() + 0.4 * i as f64;
        if let Some(y) = curve.y_at(x) {
            points.push((x, y));
        }
    }

    let mut best = f64::INFINITY;
    for (x, y) in points {
        let criterion = Criterion::Xy(CriterionParams::new(x, y).unwrap());
        let threshold = detection_threshold_numeric(family, &criterion, (0.0, 1.0)).unwrap();
        best = best.min(threshold);
    }
    assert!(
        (er - best).abs() < 1e-6,
        "enhanced realignment at {er}, family minimum at {best}"
    );
}

#[test]
fn numeric_and_analytic_fei_thresholds_agree() {
    let shape = BipartiteShape::new(2, 3).unwrap();
    let family = |p: f64| isotropic(IsotropicParams { shape, p });
    let numeric = detection_threshold_numeric(
        family,
        &Criterion::Named(NamedCriterion::Fei),
        (0.0, 1.0),
    )
    .unwrap();
    let analytic = corrsep::analytic::named_thresholds(shape).unwrap().p_fei;
    assert!((numeric - analytic).abs() < 1e-8);
}

#[test]
fn realignment_of_composite_vectors_is_consistent() {
    // realignment applied to an outer product of product vectors factors the
    // same way the product rule predicts
    let shape = BipartiteShape::new(2, 3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let a = random_matrix(2, 1, &mut rng);
    let b = random_matrix(3, 1, &mut rng);
    let joint: CVector = CVector::from_fn(6, |k, _| a[(k / 3, 0)] * b[(k % 3, 0)]);
    let rho = &joint * joint.adjoint();
    let r = realign(&rho, shape).unwrap();
    let left = &a * a.adjoint();
    let right = &b * b.adjoint();
    let expect = vectorize(&left) * vectorize(&right).transpose();
    assert!((r - expect).norm() < 1e-12);
}
