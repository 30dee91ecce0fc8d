//! Seeded property suite over every module.
//!
//! Each check draws fresh instances per trial and dimension, measures one
//! scalar, and compares it with a fixed bound. Checks that do not apply to a
//! dimension (for example Kähler checks in odd dimension) are skipped there.

use std::fmt::Write as _;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::distribution::{
    distribution_at, fit_skew_from_samples, planted_samples, projective_angle, sphere_structure_check,
    tangency_profile, time_grid, SphereFrame,
};
use crate::error::{Error, Result};
use crate::instances::{
    case2_instance, case3_instance, case4_instance, kernel_skew, quaternion_j, random_model, rng, KahlerInstance,
    ModelInstance, SkewKind,
};
use crate::io::{parse_tensor, tensor_to_json};
use crate::isotropy::{
    almost_isotropy_scan, eigenspace_at, equal_residual, jacobi_line_residual, lam_residual, recover_decomposition,
};
use crate::kahler::{
    class_deviation, classify_kahler, classify_kahler_detailed, commute_type, einstein_check, identity_residuals,
    CommuteType, KahlerClass,
};
use crate::linalg::{
    random_skew, random_unit, random_unit_orthogonal, rank_with_tol, standard_complex_structure, Matrix,
    SkewEndomorphism, Subspace, SymmetricOperator, Vector,
};
use crate::tensor::{
    build_model, holomorphic_sectional, jacobi_operator, nullity_space, ricci, validate_symmetries, Tau,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteConfig {
    pub dims: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self { dims: vec![4, 6], trials: 20, seed: 7 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub module: &'static str,
    pub check: &'static str,
    pub trials: usize,
    pub failures: usize,
    /// Largest measured value over all trials (for boolean checks, 1 on failure).
    pub worst: f64,
    pub bound: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_error: Option<String>,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// One trial: `Ok(None)` when the check does not apply to the dimension.
type Trial = fn(usize, &mut ChaCha8Rng) -> Result<Option<f64>>;

struct Check {
    module: &'static str,
    name: &'static str,
    bound: f64,
    run: Trial,
}

fn flag(ok: bool) -> Option<f64> {
    Some(if ok { 0.0 } else { 1.0 })
}

fn pair(d: usize, g: &mut ChaCha8Rng) -> (Vector, Vector) {
    let x = random_unit(d, g);
    let y = random_unit_orthogonal(&x, g);
    (x, y)
}

fn kinds(g: &mut ChaCha8Rng) -> SkewKind {
    match g.random_range(0..3) {
        0 => SkewKind::Gaussian,
        1 => SkewKind::BlockDisjoint,
        _ => SkewKind::WithKernel,
    }
}

fn kahler_instance(d: usize, g: &mut ChaCha8Rng) -> Result<Option<KahlerInstance>> {
    if d < 4 || d % 2 == 1 {
        return Ok(None);
    }
    let pick = g.random_range(0..3);
    let inst = match pick {
        0 if d == 4 => case2_instance(g)?,
        0 | 1 => case3_instance(d, g)?,
        _ => case4_instance(d, g)?,
    };
    Ok(Some(inst))
}

fn max_over<I: IntoIterator<Item = f64>>(it: I) -> f64 {
    it.into_iter().fold(0.0f64, f64::max)
}

// core-linalg

fn projector_idempotent(d: usize, g: &mut ChaCha8Rng) -> Result<Option<f64>> {
    let k = g.random_range(0..=d);
    let vecs: Vec<Vector> = (0..k).map(|_| random_unit(d, g)).collect();
    let w = Subspace::span(d, &vecs, 1e-10);
    let p = w.projector().into_matrix();
    let comp = w.complement();
    let cross = max_over(w.basis().iter().flat_map(|a| comp.basis().iter().map(move |b| a.dot(b).abs())));
    let dims = if w.dim() + comp.dim() == d { 0.0 } else { 1.0 };
    Ok(Some((&p * &p - &p).amax().max(cross).max(dims)))
}

fn skew_even_rank(d: usize, g: &mut ChaCha8Rng) -> Result<Option<f64>> {
    let a = random_skew(d, g.random());
    Ok(flag(rank_with_tol(a.matrix(), 1e-9)? % 2 == 0))
}

fn spectrum_reassembles(d: usize, g: &mut ChaCha8Rng) -> Result<Option<f64>> {
    let m = crate::linalg::random_matrix(d, d, g);
    let s = SymmetricOperator::symmetric_part(&(&m + m.transpose()));
    let spec = s.spectrum();
    let sorted = spec.values.windows(2).all(|w| w[0] <= w[1]);
    Ok(Some((spec.reassemble() - s.matrix()).amax().max(if sorted { 0.0 } else { 1.0 })))
}

// curvature-tensor

fn model_symmetries(d: usize, g: &mut ChaCha8Rng) -> Result<Option<f64>> {
    let m = random_model(d, kinds(g), true, g);
    let rep = validate_symmetries(&m.r, None)?;
    Ok(Some(rep.antisymmetry_residual.max(rep.pair_exchange_residual).max(rep.bianchi_residual)))
}

fn jacobi_formula(d: usize, g: &mut ChaCha8Rng) -> Result<Option<f64>> {
    let m = random_model(d, kinds(g), true, g);
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let (s, w) = pair(d, g);
        let as_ = m.a.apply(&s);
        let want = &w * m.kappa + &as_ * (3.0 * m.tau.value() * w.dot(&as_));
        worst = worst.max((jacobi_operator(&m.r, &s)?.apply(&w) - want).norm());
    }
    Ok(Some(worst))
}

fn ricci_formula(d: usize, g: &mut ChaCha8Rng) -> Result<Option<f64>> {
    let m = random_model(d, kinds(g), true, g);
    let a2 = m.a.matrix() * m.a.matrix();
    let want = Matrix::identity(d, d) * ((d as f64 - 1.0) * m.kappa) - a2 * (3.0 * m.tau.value());
    Ok(Some((ricci(&m.r).into_matrix() - want).amax()))
}

fn einstein_criterion(d: usize, g: &mut ChaCha8Rng) -> Result<Option<f64>> {
    let m = if d % 2 == 0 && g.random_bool(0.5) {
        let j = standard_complex_structure(d)?;
        ModelInstance::new(g.random_range(-2.0..2.0), Tau::Plus, j.as_skew().scaled(g.random_range(0.5..2.0)))?
    } else {
        random_model(d, kinds(g), true, g)
    };
    let a2 = m.a.matrix() * m.a.matrix();
    let dev = (&a2 - Matrix::identity(d, d) * (a2.trace() / d as f64)).amax();
    Ok(flag(einstein_check(&m.r, 1e-9).0 == (dev < 1e-9)))
}

fn almost_isotropy_rank(d: usize, g: &mut ChaCha8Rng) -> Result<Option<f64>> {
    let m = random_model(d, kinds(g), true, g);
    let rep = almost_isotropy_scan(&m.r, 20, g.random(), 1e-9)?;
    if !rep.is_almost_isotropic {
        return Ok(Some(f64::INFINITY));
    }
    Ok(Some(rep.worst_rank_residual / m.r.max_abs().max(1.0)))
}

// isotropy-analysis

fn round_trip(d: usize, g: &mut ChaCha8Rng) -> Result<Option<f64>> {
    let m = random_model(d, kinds(g), false, g);
    let dec = recover_decomposition(&m.r, 1e-9)?;
    let rel = (&dec.model() - &m.r).norm() / m.r.norm().max(1.0);
    Ok(Some(rel.max((dec.kappa - m.kappa).abs())))
}

fn lambda_equal_jacobi(d: usize, g: &mut ChaCha8Rng) -> Result<Option<f64>> {
    let m = random_model(d, kinds(g), false, g);
    let dec = recover_decomposition(&m.r, 1e-9)?;
    let scale = m.r.max_abs().max(1.0);
    let mut worst = 0.0f64;
    for _ in 0..5 {
        let (v, w) = pair(d, g);
        worst = worst.max(lam_residual(&m.r, &dec, &v)?);
        worst = worst.max(equal_residual(&m.r, &dec, &v, &w)?);
        if let Some(x) = jacobi_line_residual(&m.r, &dec, &v, &w)? {
            worst = worst.max(x);
        }
    }
    Ok(Some(worst / scale))
}

fn eigenspace_matches(d: usize, g: &mut ChaCha8Rng) -> Result<Option<f64>> {
    let m = random_model(d, SkewKind::Gaussian, false, g);
    let s = random_unit(d, g);
    let as_ = m.a.apply(&s);
    if as_.norm() < 1e-3 {
        return Ok(Some(0.0));
    }
    let got = eigenspace_at(&m.r, m.kappa, &s, 1e-9)?;
    let want = Subspace::span(d, &[s, as_], 1e-12).complement();
    Ok(Some(got.max_principal_angle(&want)))
}

// kahler-classify

fn classification(d: usize, g: &mut ChaCha8Rng) -> Result<Option<f64>> {
    let Some(inst) = kahler_instance(d, g)? else { return Ok(None) };
    let got = classify_kahler(&inst.model.r, &inst.j, 1e-9)?;
    Ok(Some(class_deviation(&inst.expected, &got)))
}

fn dichotomy(d: usize, g: &mut ChaCha8Rng) -> Result<Option<f64>> {
    let Some(inst) = kahler_instance(d, g)? else { return Ok(None) };
    let cls = classify_kahler_detailed(&inst.model.r, &inst.j, 1e-9)?;
    let commutes = commute_type(&cls.decomposition.a, &inst.j, 1e-8) == CommuteType::Commute;
    // J plus a generic skew map is of neither type.
    let other = SkewEndomorphism::new(inst.j.matrix() + random_skew(d, g.random()).matrix())?;
    let r = build_model(1.0, Tau::Plus, &other)?;
    let rejected = matches!(classify_kahler(&r, &inst.j, 1e-9), Err(Error::NotKahler(_)));
    Ok(flag(commutes && rejected))
}

fn skewcommute(d: usize, g: &mut ChaCha8Rng) -> Result<Option<f64>> {
    if d != 4 {
        return Ok(None);
    }
    let a = quaternion_j();
    let j = standard_complex_structure(4)?;
    let (kappa, tau) = (1.0, 1.0);
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let x = random_unit(4, g);
        let n = a.apply(&x).norm_squared();
        worst = worst.max((kappa * n - tau * n * n).abs());
    }
    let r = build_model(kappa, Tau::Plus, &a)?;
    let scanned = almost_isotropy_scan(&r, 20, g.random(), 1e-9)?.is_almost_isotropic;
    let rejected = matches!(classify_kahler(&r, &j, 1e-9), Err(Error::NotKahler(_)));
    Ok(Some(if scanned && rejected { worst } else { f64::INFINITY }))
}

fn eigenplane_invariance(d: usize, g: &mut ChaCha8Rng) -> Result<Option<f64>> {
    let Some(inst) = kahler_instance(d, g)? else { return Ok(None) };
    let cls = classify_kahler_detailed(&inst.model.r, &inst.j, 1e-9)?;
    let b = cls.b.expect("nonzero Kähler tensors carry a B analysis");
    Ok(Some(max_over(b.eigenplanes.iter().map(|p| p.invariance_defect(inst.j.matrix())))))
}

fn product_relation(d: usize, g: &mut ChaCha8Rng) -> Result<Option<f64>> {
    let Some(inst) = kahler_instance(d, g)? else { return Ok(None) };
    let cls = classify_kahler_detailed(&inst.model.r, &inst.j, 1e-9)?;
    let scale = inst.model.r.max_abs().max(1.0);
    let ratio = cls.decomposition.kappa / cls.decomposition.tau.value();
    let dev = match &cls.class {
        KahlerClass::Case2 { mu1, mu2, .. } => (mu1 * mu2 - ratio).abs(),
        KahlerClass::Case3 { .. } => {
            let b = cls.b.expect("B analysis present");
            max_over(b.eigenvalues.iter().map(|beta| (beta * beta - ratio).abs()))
        }
        _ => 0.0,
    };
    Ok(Some(dev / scale))
}

fn nullity(d: usize, g: &mut ChaCha8Rng) -> Result<Option<f64>> {
    if d < 4 || d % 2 == 1 {
        return Ok(None);
    }
    let inst = case4_instance(d, g)?;
    let KahlerClass::Case4 { w, .. } = &inst.expected else { unreachable!() };
    let n = nullity_space(&inst.model.r);
    if n.dim() != d - 2 {
        return Ok(Some(f64::INFINITY));
    }
    Ok(Some(n.max_principal_angle(&w.complement())))
}

fn identities(d: usize, g: &mut ChaCha8Rng) -> Result<Option<f64>> {
    let Some(inst) = kahler_instance(d, g)? else { return Ok(None) };
    let m = &inst.model;
    let mut worst = 0.0f64;
    for _ in 0..5 {
        let (x, y) = pair(d, g);
        let (a, b) = identity_residuals(m.kappa, m.tau.value(), &m.a, &inst.j, &x, &y)?;
        worst = worst.max(a).max(b);
    }
    Ok(Some(worst))
}

fn holomorphic_curvature(d: usize, g: &mut ChaCha8Rng) -> Result<Option<f64>> {
    if d < 4 || d % 2 == 1 {
        return Ok(None);
    }
    let inst = case3_instance(d, g)?;
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let v = random_unit(d, g);
        worst = worst.max((holomorphic_sectional(&inst.model.r, &inst.j, &v)? - 4.0 * inst.model.kappa).abs());
    }
    Ok(Some(worst))
}

// sphere-distribution

fn nonzero_skew(d: usize, g: &mut ChaCha8Rng) -> SkewEndomorphism {
    if d >= 4 && g.random_bool(0.5) {
        kernel_skew(d, g)
    } else {
        random_skew(d, g.random())
    }
}

fn distribution_symmetry(d: usize, g: &mut ChaCha8Rng) -> Result<Option<f64>> {
    let a = nonzero_skew(d, g);
    let s = random_unit(d, g);
    let ds = distribution_at(&a, &s)?;
    if ds.is_zero() {
        return Ok(Some(0.0));
    }
    let c = Vector::from_fn(ds.dim(), |_, _| g.random_range(-1.0..1.0));
    let x = (ds.basis_matrix() * c).normalize();
    Ok(Some(x.dot(&a.apply(&s)).abs().max(s.dot(&a.apply(&x)).abs())))
}

fn total_geodesy(d: usize, g: &mut ChaCha8Rng) -> Result<Option<f64>> {
    let a = nonzero_skew(d, g);
    let s = random_unit(d, g);
    let times = time_grid(1000);
    let ds = distribution_at(&a, &s)?;
    let mut worst = 0.0f64;
    if !ds.is_zero() {
        let c = Vector::from_fn(ds.dim(), |_, _| g.random_range(-1.0..1.0));
        let w = (ds.basis_matrix() * c).normalize();
        worst = tangency_profile(&a, &s, &w, &times)?.max_abs;
    }
    for _ in 0..20 {
        let w = random_unit_orthogonal(&s, g);
        if w.dot(&a.apply(&s)).abs() > 0.1 {
            let p = tangency_profile(&a, &s, &w, &times)?;
            if p.min_abs <= 1e-3 {
                return Ok(Some(f64::INFINITY));
            }
            break;
        }
    }
    Ok(Some(worst))
}

fn planted_recovery(d: usize, g: &mut ChaCha8Rng) -> Result<Option<f64>> {
    if d < 3 {
        return Ok(None);
    }
    let a = nonzero_skew(d, g);
    let fit = fit_skew_from_samples(&planted_samples(&a, 4 * d + 8, g.random())?)?;
    if fit.gap <= 1e-6 {
        return Ok(Some(0.0));
    }
    Ok(Some(projective_angle(&fit.a, &a)))
}

fn sphere_parts(d: usize, g: &mut ChaCha8Rng) -> Result<Option<f64>> {
    if d < 4 {
        return Ok(None);
    }
    let a = kernel_skew(d, g);
    let kernel = a.kernel(1e-10);
    let range = kernel.complement();
    let pick = |w: &Subspace, g: &mut ChaCha8Rng| {
        let c = Vector::from_fn(w.dim(), |_, _| g.random_range(-1.0..1.0));
        (w.basis_matrix() * c).normalize()
    };
    let k = pick(&kernel, g);
    let m = pick(&range, g);
    let frame = SphereFrame::new(&a, &k, &m)?;
    let codim = if frame.tangent_codimension() == 1 { 0.0 } else { f64::INFINITY };
    let singular = {
        let on = distribution_at(&a, &k)?.dim() == d - 1;
        let off = distribution_at(&a, &m)?.dim() == d - 2;
        if on && off { 0.0 } else { f64::INFINITY }
    };
    let t = g.random_range(0.05..std::f64::consts::FRAC_PI_2 - 0.05);
    let angle = sphere_structure_check(&a, &k, &m, t)?;
    Ok(Some(frame.kernel_in_dm().max(frame.range_in_dk()).max(codim).max(singular).max(angle)))
}

// cli-io

fn tensor_file_round_trip(d: usize, g: &mut ChaCha8Rng) -> Result<Option<f64>> {
    let m = random_model(d, kinds(g), true, g);
    let back = parse_tensor(&tensor_to_json(&m.r), 1e-9)?;
    let same = m.r.components().iter().zip(back.components()).all(|(a, b)| a.to_bits() == b.to_bits());
    Ok(flag(same))
}

fn checks() -> Vec<Check> {
    vec![
        Check { module: "core-linalg", name: "projector_and_complement", bound: 1e-12, run: projector_idempotent },
        Check { module: "core-linalg", name: "skew_rank_even", bound: 0.0, run: skew_even_rank },
        Check { module: "core-linalg", name: "spectrum_reassembles", bound: 1e-12, run: spectrum_reassembles },
        Check { module: "curvature-tensor", name: "model_symmetries", bound: 1e-12, run: model_symmetries },
        Check { module: "curvature-tensor", name: "jacobi_formula", bound: 1e-10, run: jacobi_formula },
        Check { module: "curvature-tensor", name: "ricci_formula", bound: 1e-10, run: ricci_formula },
        Check { module: "curvature-tensor", name: "einstein_criterion", bound: 0.0, run: einstein_criterion },
        Check { module: "curvature-tensor", name: "almost_isotropy_rank", bound: 1e-9, run: almost_isotropy_rank },
        Check { module: "isotropy-analysis", name: "decomposition_round_trip", bound: 1e-8, run: round_trip },
        Check { module: "isotropy-analysis", name: "lambda_equal_jacobi", bound: 1e-8, run: lambda_equal_jacobi },
        Check { module: "isotropy-analysis", name: "eigenspace_is_span_perp", bound: 1e-6, run: eigenspace_matches },
        Check { module: "kahler-classify", name: "classification_round_trip", bound: 1e-6, run: classification },
        Check { module: "kahler-classify", name: "commute_dichotomy", bound: 0.0, run: dichotomy },
        Check { module: "kahler-classify", name: "anticommuting_rejected", bound: 1e-12, run: skewcommute },
        Check { module: "kahler-classify", name: "eigenplanes_invariant", bound: 1e-8, run: eigenplane_invariance },
        Check { module: "kahler-classify", name: "product_relation", bound: 1e-8, run: product_relation },
        Check { module: "kahler-classify", name: "nullity_is_w_perp", bound: 1e-6, run: nullity },
        Check { module: "kahler-classify", name: "identities", bound: 1e-10, run: identities },
        Check { module: "kahler-classify", name: "holomorphic_curvature", bound: 1e-10, run: holomorphic_curvature },
        Check { module: "sphere-distribution", name: "symmetry", bound: 1e-10, run: distribution_symmetry },
        Check { module: "sphere-distribution", name: "total_geodesy", bound: 1e-10, run: total_geodesy },
        Check { module: "sphere-distribution", name: "planted_recovery", bound: 1e-6, run: planted_recovery },
        Check { module: "sphere-distribution", name: "sphere_structure", bound: 1e-10, run: sphere_parts },
        Check { module: "cli-io", name: "tensor_file_round_trip", bound: 0.0, run: tensor_file_round_trip },
    ]
}

pub fn run_suite(cfg: &SuiteConfig) -> Vec<CheckResult> {
    checks()
        .into_iter()
        .enumerate()
        .map(|(idx, check)| {
            let mut res = CheckResult {
                module: check.module,
                check: check.name,
                trials: 0,
                failures: 0,
                worst: 0.0,
                bound: check.bound,
                first_error: None,
            };
            for &d in &cfg.dims {
                let mut g = rng(cfg.seed ^ ((idx as u64 + 1) << 32) ^ ((d as u64) << 16));
                for _ in 0..cfg.trials {
                    match (check.run)(d, &mut g) {
                        Ok(None) => break,
                        Ok(Some(v)) => {
                            res.trials += 1;
                            res.worst = res.worst.max(v);
                            if !(v <= check.bound) {
                                res.failures += 1;
                            }
                        }
                        Err(e) => {
                            res.trials += 1;
                            res.failures += 1;
                            res.worst = f64::INFINITY;
                            res.first_error.get_or_insert_with(|| format!("d={d}: {e}"));
                        }
                    }
                }
            }
            res
        })
        .collect()
}

pub fn render_table(results: &[CheckResult]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<20} {:<26} {:>6} {:>8} {:>11} {:>9}  result",
        "module", "check", "trials", "failures", "worst", "bound"
    );
    for r in results {
        let _ = writeln!(
            out,
            "{:<20} {:<26} {:>6} {:>8} {:>11.3e} {:>9.1e}  {}",
            r.module,
            r.check,
            r.trials,
            r.failures,
            r.worst,
            r.bound,
            if r.passed() { "pass" } else { "FAIL" }
        );
        if let Some(e) = &r.first_error {
            let _ = writeln!(out, "    first error: {e}");
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suite_passes() {
        let cfg = SuiteConfig { dims: vec![3, 4, 6], trials: 4, seed: 7 };
        let results = run_suite(&cfg);
        let table = render_table(&results);
        assert!(results.iter().all(CheckResult::passed), "{table}");
        assert!(results.iter().all(|r| r.trials > 0), "{table}");
    }
}
