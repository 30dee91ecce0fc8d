mod common;

use approx::assert_abs_diff_eq;
use common::*;
use curvlab::distribution::{distribution_at, tangency_profile, time_grid};
use curvlab::instances::rng;
use curvlab::isotropy::{extremal_curvature, kappa_at, recover_decomposition};
use curvlab::kahler::{einstein_check, identity_residuals, relations_residuals};
use curvlab::linalg::{random_skew, unit_sphere_samples, ComplexStructure, SkewEndomorphism, Vector};
use curvlab::tensor::{
    berger_check, build_model, build_r1, build_ra, holomorphic_sectional, jacobi_operator, mixed_component, ricci,
    sectional, Tau,
};

fn skew(m: &curvlab::linalg::Matrix) -> SkewEndomorphism {
    SkewEndomorphism::new(m.clone()).unwrap()
}

#[test]
fn components_match_vector_formula() {
    for (d, seed) in [(3, 1), (4, 2), (6, 3)] {
        let a = random_skew(d, seed);
        let r = build_model(-0.7, Tau::Minus, &a).unwrap();
        let v = unit_sphere_samples(d, d + 6, seed + 10);
        for w in v.windows(3) {
            let got = r.apply(&w[0], &w[1], &w[2]);
            let want = model_apply(-0.7, -1.0, a.matrix(), &w[0], &w[1], &w[2]);
            assert!((got - want).norm() < 1e-12);
        }
    }
}

#[test]
fn r_j_holomorphic_value() {
    let rj = build_ra(&skew(&std_j(4)));
    let want = ra_apply(&std_j(4), &e(4, 0), &e(4, 1), &e(4, 1)).dot(&e(4, 0));
    assert_abs_diff_eq!(want, 3.0, epsilon = 1e-15);
    assert_abs_diff_eq!(rj.get(0, 1, 1, 0), want, epsilon = 1e-15);
}

#[test]
fn block_model_jacobi_and_ricci() {
    let a = block_model_a();
    let r = build_model(1.0, Tau::Plus, &skew(&a)).unwrap();
    let jac = jacobi_operator(&r, &e(4, 0)).unwrap();
    let want = jacobi_oracle(1.0, 1.0, &a, &e(4, 0), &e(4, 1));
    assert!((&want - e(4, 1) * 13.0).norm() < 1e-14);
    assert!((jac.apply(&e(4, 1)) - want).norm() < 1e-14);

    let ric = ricci(&r);
    let want = ricci_oracle(1.0, 1.0, &a, &e(4, 0), &e(4, 0));
    assert_abs_diff_eq!(want, 15.0, epsilon = 1e-13);
    assert_abs_diff_eq!(ric.matrix()[(0, 0)], want, epsilon = 1e-13);
    // Trace of the Jacobi operator is the Ricci value.
    assert_abs_diff_eq!(jac.trace(), want, epsilon = 1e-13);

    assert_eq!(ricci(&build_r1(4)).matrix(), &(curvlab::linalg::Matrix::identity(4, 4) * 3.0));
}

#[test]
fn extremal_curvature_values() {
    let a = block_model_a();
    let r = build_model(1.0, Tau::Plus, &skew(&a)).unwrap();
    for (i, want) in [(0, 13.0), (2, 1.75)] {
        let s = e(4, i);
        let oracle = 1.0 + 3.0 * (&a * &s).norm_squared();
        assert_abs_diff_eq!(oracle, want, epsilon = 1e-15);
        assert_abs_diff_eq!(extremal_curvature(&r, 1.0, &s).unwrap(), want, epsilon = 1e-12);
    }
    assert_eq!(kappa_at(&r, &e(4, 0), 1e-9).unwrap().1, 2);
    assert_abs_diff_eq!(extremal_curvature(&build_r1(4), 1.0, &e(4, 3)).unwrap(), 1.0, epsilon = 1e-14);
}

#[test]
fn holomorphic_sectional_values() {
    let a = block_model_a();
    let j = ComplexStructure::new(std_j(4)).unwrap();
    let r = build_model(1.0, Tau::Plus, &skew(&a)).unwrap();
    let want = sectional_oracle(1.0, 1.0, &a, &e(4, 0), &e(4, 1));
    assert_abs_diff_eq!(want, 13.0, epsilon = 1e-13);
    assert_abs_diff_eq!(holomorphic_sectional(&r, &j, &e(4, 0)).unwrap(), want, epsilon = 1e-12);

    let j6 = ComplexStructure::new(std_j(6)).unwrap();
    let r = &build_r1(6) + &build_ra(&j6.as_skew());
    for v in unit_sphere_samples(6, 20, 4) {
        assert_abs_diff_eq!(holomorphic_sectional(&r, &j6, &v).unwrap(), 4.0, epsilon = 1e-12);
    }
    assert_eq!(sectional(&build_r1(3), &e(3, 0), &e(3, 2)).unwrap(), 1.0);
}

#[test]
fn berger_equality_case() {
    let jm = std_j(4);
    let r = &build_r1(4) + &build_ra(&skew(&jm));
    let (e1, e2, e3, e4) = (e(4, 0), e(4, 1), e(4, 2), e(4, 3));
    let want = model_apply(1.0, 1.0, &jm, &e1, &e2, &e3);
    assert!((&want + &e4 * 2.0).norm() < 1e-15);
    assert_abs_diff_eq!(mixed_component(&r, [&e1, &e2, &e3, &e4]), -2.0, epsilon = 1e-14);
    assert_abs_diff_eq!(berger_check(&r, [&e1, &e2, &e3, &e4], 1.0, 4.0).unwrap(), 0.0, epsilon = 1e-12);
    assert_eq!(berger_check(&build_r1(4), [&e1, &e2, &e3, &e4], 1.0, 1.0).unwrap(), 0.0);
    let rq = build_model(1.0, Tau::Plus, &skew(&quaternion())).unwrap();
    // (e1, Je1, ...) repeats a direction for the standard J.
    let je1 = &jm * &e1;
    assert!(berger_check(&rq, [&e1, &e2, &je1, &e4], 1.0, 4.0).is_err());
    assert!(berger_check(&rq, [&e1, &e3, &e2, &e4], 1.0, 4.0).unwrap() >= -1e-12);
}

#[test]
fn kahler_identity_values() {
    let j = ComplexStructure::new(std_j(4)).unwrap();
    // Values from evaluating both sides of the identities by hand at x = e1, y = e3.
    let (one, two) = identity_residuals(1.0, 1.0, &skew(&quaternion()), &j, &e(4, 0), &e(4, 2)).unwrap();
    assert_abs_diff_eq!(one, 6.0, epsilon = 1e-12);
    assert_abs_diff_eq!(two, 2.0, epsilon = 1e-12);
    let (one, two) = identity_residuals(1.0, 1.0, &skew(&block_model_a()), &j, &e(4, 0), &e(4, 2)).unwrap();
    assert!(one < 1e-12 && two < 1e-12);
    let (three, four) = relations_residuals(1.0, 1.0, 3.0, 3.0, &e(4, 0), &e(4, 2), &j).unwrap();
    assert_abs_diff_eq!(three, 8.0, epsilon = 1e-15);
    assert_abs_diff_eq!(four, (3.0f64 - 27.0).abs(), epsilon = 1e-12);
}

#[test]
fn einstein_constant() {
    let j = std_j(6);
    let r = &build_r1(6) + &build_ra(&skew(&j));
    let c = ricci_oracle(1.0, 1.0, &j, &e(6, 3), &e(6, 3));
    assert_abs_diff_eq!(c, 8.0, epsilon = 1e-13);
    let (ok, got) = einstein_check(&r, 1e-9);
    assert!(ok);
    assert_abs_diff_eq!(got, c, epsilon = 1e-12);
}

#[test]
fn flat_case_normalization() {
    // c = −4: τ carries the sign and A carries √|c|.
    let mut jw = std_j(4);
    jw[(3, 2)] = 0.0;
    jw[(2, 3)] = 0.0;
    let r = &build_ra(&skew(&jw)) * -4.0;
    let dec = recover_decomposition(&r, 1e-9).unwrap();
    assert_eq!(dec.tau, Tau::Minus);
    assert!(dec.kappa.abs() < 1e-12);
    let want = &jw * 2.0;
    assert!((dec.a.matrix() - &want).amax().min((dec.a.matrix() + &want).amax()) < 1e-10);
}

#[test]
fn great_circle_inner_product_is_constant() {
    // ⟨ċ, Ac⟩ along c(t) = cos t s + sin t w expands to ⟨w, As⟩.
    let mut g = rng(3);
    let a = random_skew(5, 12);
    for _ in 0..5 {
        let s = curvlab::linalg::unit_sphere_samples(5, 1, rand::Rng::random(&mut g))[0].clone();
        let w0 = Vector::from_fn(5, |i, _| (i as f64 + 1.0).sin());
        let w = (&w0 - &s * s.dot(&w0)).normalize();
        let p = tangency_profile(&a, &s, &w, &time_grid(200)).unwrap();
        let want = w.dot(&a.apply(&s)).abs();
        assert_abs_diff_eq!(p.max_abs, want, epsilon = 1e-12);
        assert_abs_diff_eq!(p.min_abs, want, epsilon = 1e-12);
    }
    let d = distribution_at(&skew(&std_j(4)), &e(4, 0)).unwrap();
    assert!(d.distance(&e(4, 2)) < 1e-15 && d.distance(&e(4, 3)) < 1e-15);
}
