//! The plane distribution `D[A]_s = span(s, As)⊥` on the unit sphere.
//!
//! Great circles tangent to `D[A]` at one point stay tangent everywhere, and
//! conversely a distribution with that property comes from a skew `A`. The
//! reconstruction here is a least-squares fit: every sampled tangent `t ∈ D_s`
//! contributes the constraint `⟨t, As⟩ = 0`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{
    ensure_orthonormal, ensure_unit, random_unit_orthogonal, unit_sphere_samples, Matrix, SkewEndomorphism,
    Subspace, SymmetricOperator, Vector,
};

/// Tolerance for `s ⊥ t` and `‖t‖ = 1` in sample entries.
pub const SAMPLE_TOL: f64 = 1e-10;

const KERNEL_TOL: f64 = 1e-10;

/// A point of the sphere together with tangent vectors claimed to lie in
/// the distribution there.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleEntry {
    pub s: Vector,
    pub tangents: Vec<Vector>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistributionSamples {
    dim: usize,
    entries: Vec<SampleEntry>,
}

impl DistributionSamples {
    /// Validates the entries: each `s` is unit, each tangent is orthogonal
    /// to its `s`. Tangents are normalized; zero tangents are rejected.
    pub fn new(dim: usize, entries: Vec<SampleEntry>) -> Result<Self> {
        let mut out = Vec::with_capacity(entries.len());
        for entry in entries {
            if entry.s.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: entry.s.len() });
            }
            ensure_unit(&entry.s)?;
            let mut tangents = Vec::with_capacity(entry.tangents.len());
            for t in entry.tangents {
                if t.len() != dim {
                    return Err(Error::DimensionMismatch { expected: dim, found: t.len() });
                }
                let n = t.norm();
                if n <= SAMPLE_TOL {
                    return Err(Error::NotUnit(n));
                }
                let t = t / n;
                let overlap = t.dot(&entry.s).abs();
                if overlap > SAMPLE_TOL {
                    return Err(Error::NotOrthonormal(overlap));
                }
                tangents.push(t);
            }
            out.push(SampleEntry { s: entry.s, tangents });
        }
        Ok(Self { dim, entries: out })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[SampleEntry] {
        &self.entries
    }

    pub fn tangent_count(&self) -> usize {
        self.entries.iter().map(|e| e.tangents.len()).sum()
    }
}

/// `span(s, As)⊥`. Has dimension `d − 1` on the singular set `As = 0` and
/// `d − 2` elsewhere.
pub fn distribution_at(a: &SkewEndomorphism, s: &Vector) -> Result<Subspace> {
    if a.is_zero() {
        return Err(Error::ZeroOperator);
    }
    ensure_unit(s)?;
    let d = a.dim();
    let as_ = a.apply(s);
    let mut span = vec![s.clone()];
    if as_.norm() > KERNEL_TOL * a.spectral_norm() {
        span.push(as_);
    }
    Ok(Subspace::span(d, &span, 1e-12).complement())
}

/// Extremes of `|⟨ċ(t), A c(t)⟩|` along a great circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TangencyProfile {
    pub max_abs: f64,
    pub min_abs: f64,
}

/// Evaluates `⟨ċ(t), A c(t)⟩` along `c(t) = cos(t)s + sin(t)w`.
pub fn tangency_profile(a: &SkewEndomorphism, s: &Vector, w: &Vector, times: &[f64]) -> Result<TangencyProfile> {
    ensure_orthonormal(&[s, w], SAMPLE_TOL)?;
    if times.is_empty() {
        return Err(Error::PreconditionViolated("no evaluation times".into()));
    }
    let mut max_abs = 0.0f64;
    let mut min_abs = f64::INFINITY;
    for &t in times {
        let (sin, cos) = t.sin_cos();
        let c = s * cos + w * sin;
        let dc = w * cos - s * sin;
        let v = dc.dot(&a.apply(&c)).abs();
        max_abs = max_abs.max(v);
        min_abs = min_abs.min(v);
    }
    Ok(TangencyProfile { max_abs, min_abs })
}

/// `n` equally spaced times covering `[0, 2π]`.
pub fn time_grid(n: usize) -> Vec<f64> {
    let step = std::f64::consts::TAU / (n.max(2) - 1) as f64;
    (0..n).map(|i| i as f64 * step).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    /// Unit Frobenius norm, canonical sign.
    pub a: SkewEndomorphism,
    /// Minimum of the quadratic form.
    pub residual: f64,
    /// Second-smallest minus smallest eigenvalue of the form.
    pub gap: f64,
}

impl FitResult {
    pub fn is_ambiguous(&self) -> bool {
        self.gap < 1e-8
    }
}

/// Index pairs `a < b` of the skew basis `(e_a e_bᵀ − e_b e_aᵀ)/√2`.
fn skew_basis(d: usize) -> Vec<(usize, usize)> {
    (0..d).flat_map(|a| (a + 1..d).map(move |b| (a, b))).collect()
}

/// Minimizes `Σ ⟨t, As⟩²` over skew `A` with `‖A‖_F = 1`.
pub fn fit_skew_from_samples(samples: &DistributionSamples) -> Result<FitResult> {
    let d = samples.dim();
    if d < 3 {
        return Err(Error::DimensionTooSmall(d, 3));
    }
    if samples.tangent_count() == 0 {
        return Err(Error::EmptySamples);
    }
    let pairs = skew_basis(d);
    let m = pairs.len();
    let mut form = Matrix::zeros(m, m);
    let mut g = Vector::zeros(m);
    let r2 = std::f64::consts::FRAC_1_SQRT_2;
    for entry in samples.entries() {
        let s = &entry.s;
        for t in &entry.tangents {
            for (k, &(a, b)) in pairs.iter().enumerate() {
                g[k] = (t[a] * s[b] - t[b] * s[a]) * r2;
            }
            form += &g * g.transpose();
        }
    }
    let spec = SymmetricOperator::symmetric_part(&form).spectrum();
    let coeffs = &spec.vectors[0];
    let mut mat = Matrix::zeros(d, d);
    for (k, &(a, b)) in pairs.iter().enumerate() {
        mat[(a, b)] = coeffs[k] * r2;
        mat[(b, a)] = -coeffs[k] * r2;
    }
    let a = SkewEndomorphism::skew_part(&mat).canonical_sign(1e-6);
    Ok(FitResult { a, residual: spec.values[0].max(0.0), gap: (spec.values[1] - spec.values[0]).max(0.0) })
}

/// Angle between the projective classes `[A]` and `[B]` in the Frobenius
/// inner product.
pub fn projective_angle(a: &SkewEndomorphism, b: &SkewEndomorphism) -> f64 {
    let (na, nb) = (a.frobenius_norm(), b.frobenius_norm());
    if na == 0.0 || nb == 0.0 {
        return std::f64::consts::FRAC_PI_2;
    }
    let ua = a.matrix() / na;
    let ub = b.matrix() / nb;
    // Sine form: distance to the nearer of ±ub.
    let half = (&ua - &ub).norm().min((&ua + &ub).norm()) / 2.0;
    2.0 * half.min(1.0).asin()
}

/// Exact samples of `D[A]`: `n` sphere points, each with a full basis of
/// the distribution.
pub fn planted_samples(a: &SkewEndomorphism, n: usize, seed: u64) -> Result<DistributionSamples> {
    let d = a.dim();
    let mut entries = Vec::with_capacity(n);
    for s in unit_sphere_samples(d, n, seed) {
        let tangents = distribution_at(a, &s)?.basis().to_vec();
        entries.push(SampleEntry { s, tangents });
    }
    DistributionSamples::new(d, entries)
}

/// Samples whose tangents are drawn uniformly from `s⊥`, with no
/// distribution behind them.
pub fn unstructured_samples(d: usize, n: usize, per_point: usize, seed: u64) -> Result<DistributionSamples> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut entries = Vec::with_capacity(n);
    for s in unit_sphere_samples(d, n, seed) {
        let tangents = (0..per_point).map(|_| random_unit_orthogonal(&s, &mut rng)).collect();
        entries.push(SampleEntry { s, tangents });
    }
    DistributionSamples::new(d, entries)
}

/// Compares `D_s` at `s = cos(T)k + sin(T)m` with
/// `(k⊥ ∩ K) ⊕ (D_m ∩ T_m S_M) ⊕ span(−sin(T)k + cos(T)m)`, where `K = ker A`,
/// `M = K⊥`, and returns the largest principal angle between the two.
pub fn sphere_structure_check(a: &SkewEndomorphism, k: &Vector, m: &Vector, t: f64) -> Result<f64> {
    let parts = SphereFrame::new(a, k, m)?;
    if !(t > 0.0 && t < std::f64::consts::FRAC_PI_2) {
        return Err(Error::PreconditionViolated(format!("T = {t} is outside (0, π/2)")));
    }
    let d = a.dim();
    let (sin, cos) = t.sin_cos();
    let s = k * cos + m * sin;
    let lhs = distribution_at(a, &s)?;

    let k_perp_in_kernel = parts.kernel.intersection(&Subspace::span(d, std::slice::from_ref(k), 1e-12).complement(), 1e-10);
    let middle = parts.dm.intersection(&parts.tangent_sm, 1e-10);
    let turn = Subspace::span(d, &[m * cos - k * sin], 1e-12);
    let rhs = k_perp_in_kernel.sum(&middle, 1e-10).sum(&turn, 1e-10);
    Ok(lhs.max_principal_angle(&rhs))
}

/// The subspaces around a kernel point `k` and a range-side point `m`.
#[derive(Debug, Clone)]
pub struct SphereFrame {
    /// `K = ker A`.
    pub kernel: Subspace,
    /// `M = K⊥`.
    pub range: Subspace,
    pub dk: Subspace,
    pub dm: Subspace,
    /// `T_m S_M = m⊥ ∩ M`.
    pub tangent_sm: Subspace,
}

impl SphereFrame {
    pub fn new(a: &SkewEndomorphism, k: &Vector, m: &Vector) -> Result<Self> {
        if a.is_zero() {
            return Err(Error::ZeroOperator);
        }
        ensure_unit(k)?;
        ensure_unit(m)?;
        let scale = a.spectral_norm();
        let ak = a.apply(k).norm();
        if ak > KERNEL_TOL * scale {
            return Err(Error::PreconditionViolated(format!("k is not in ker(A): |Ak| = {ak:e}")));
        }
        let d = a.dim();
        let kernel = a.kernel(KERNEL_TOL);
        let range = kernel.complement();
        let leak = kernel.basis().iter().map(|b| b.dot(m).abs()).fold(0.0f64, f64::max);
        if leak > KERNEL_TOL {
            return Err(Error::PreconditionViolated(format!("m is not orthogonal to ker(A): overlap {leak:e}")));
        }
        let tangent_sm = range.intersection(&Subspace::span(d, std::slice::from_ref(m), 1e-12).complement(), 1e-10);
        Ok(Self { dk: distribution_at(a, k)?, dm: distribution_at(a, m)?, kernel, range, tangent_sm })
    }

    /// Largest distance of a unit vector of `X` from `Y`.
    fn containment(x: &Subspace, y: &Subspace) -> f64 {
        x.basis().iter().map(|b| y.distance(b)).fold(0.0f64, f64::max)
    }

    /// How far `K` is from lying in `D_m`.
    pub fn kernel_in_dm(&self) -> f64 {
        Self::containment(&self.kernel, &self.dm)
    }

    /// How far `M` is from lying in `D_k`.
    pub fn range_in_dk(&self) -> f64 {
        Self::containment(&self.range, &self.dk)
    }

    /// `dim T_m S_M − dim(D_m ∩ T_m S_M)`.
    pub fn tangent_codimension(&self) -> usize {
        self.tangent_sm.dim() - self.dm.intersection(&self.tangent_sm, 1e-10).dim()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{basis_vector, projector, random_skew, standard_complex_structure};

    fn e(d: usize, i: usize) -> Vector {
        basis_vector(d, i)
    }

    fn partial_j(d: usize) -> SkewEndomorphism {
        let j = standard_complex_structure(d).unwrap();
        let w = Subspace::new(d, vec![e(d, 0), e(d, 1)]).unwrap();
        SkewEndomorphism::new(j.matrix() * projector(&w).into_matrix()).unwrap()
    }

    #[test]
    fn distribution_examples() {
        let j = standard_complex_structure(4).unwrap().as_skew();
        let got = distribution_at(&j, &e(4, 0)).unwrap();
        let want = Subspace::new(4, vec![e(4, 2), e(4, 3)]).unwrap();
        assert!(got.max_principal_angle(&want) < 1e-12);

        let sing = distribution_at(&partial_j(4), &e(4, 2)).unwrap();
        assert_eq!(sing.dim(), 3);
        assert!(sing.distance(&e(4, 2)) > 1.0 - 1e-12);

        let j2 = standard_complex_structure(2).unwrap().as_skew();
        assert!(distribution_at(&j2, &e(2, 0)).unwrap().is_zero());
        assert!(matches!(distribution_at(&SkewEndomorphism::zero(3), &e(3, 0)), Err(Error::ZeroOperator)));
    }

    #[test]
    fn tangency_examples() {
        let j = standard_complex_structure(4).unwrap().as_skew();
        let times = time_grid(100);
        let p = tangency_profile(&j, &e(4, 0), &e(4, 2), &times).unwrap();
        assert!(p.max_abs < 1e-14);
        let p = tangency_profile(&j, &e(4, 0), &e(4, 1), &times).unwrap();
        assert!((p.max_abs - 1.0).abs() < 1e-14 && (p.min_abs - 1.0).abs() < 1e-14);
        let p = tangency_profile(&SkewEndomorphism::zero(4), &e(4, 0), &e(4, 1), &times).unwrap();
        assert_eq!(p.max_abs, 0.0);
        assert!(tangency_profile(&j, &e(4, 0), &e(4, 0), &times).is_err());
    }

    #[test]
    fn fit_recovers_planted_j() {
        let j = standard_complex_structure(4).unwrap().as_skew();
        let fit = fit_skew_from_samples(&planted_samples(&j, 40, 1).unwrap()).unwrap();
        assert!(projective_angle(&fit.a, &j) < 1e-6);
        assert!(fit.residual < 1e-12);
        assert!(fit.gap > 0.01);
        assert!((fit.a.frobenius_norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fit_single_point_is_ambiguous() {
        let j = standard_complex_structure(4).unwrap().as_skew();
        let s = e(4, 0);
        let tangents = distribution_at(&j, &s).unwrap().basis().to_vec();
        let samples = DistributionSamples::new(4, vec![SampleEntry { s, tangents }]).unwrap();
        assert!(fit_skew_from_samples(&samples).unwrap().is_ambiguous());
    }

    #[test]
    fn fit_rejects_unstructured_and_empty() {
        let fit = fit_skew_from_samples(&unstructured_samples(4, 40, 2, 5).unwrap()).unwrap();
        assert!(fit.residual > 0.01);
        let empty = DistributionSamples::new(4, vec![SampleEntry { s: e(4, 0), tangents: vec![] }]).unwrap();
        assert!(matches!(fit_skew_from_samples(&empty), Err(Error::EmptySamples)));
    }

    #[test]
    fn fit_recovers_singular_a() {
        let a = partial_j(6);
        let fit = fit_skew_from_samples(&planted_samples(&a, 60, 2).unwrap()).unwrap();
        assert!(fit.gap > 1e-6);
        assert!(projective_angle(&fit.a, &a) < 1e-6);
    }

    #[test]
    fn samples_validate() {
        let bad = SampleEntry { s: e(3, 0), tangents: vec![Vector::from_vec(vec![1.0, 1.0, 0.0])] };
        assert!(matches!(DistributionSamples::new(3, vec![bad]), Err(Error::NotOrthonormal(_))));
        let scaled = SampleEntry { s: e(3, 0), tangents: vec![e(3, 1) * 3.0] };
        let ok = DistributionSamples::new(3, vec![scaled]).unwrap();
        assert_eq!(ok.entries()[0].tangents[0], e(3, 1));
    }

    #[test]
    fn sphere_structure_examples() {
        let a = partial_j(4);
        let angle = sphere_structure_check(&a, &e(4, 2), &e(4, 0), std::f64::consts::FRAC_PI_4).unwrap();
        assert!(angle < 1e-12);
        let angle = sphere_structure_check(&a, &e(4, 3), &e(4, 1), std::f64::consts::FRAC_PI_6).unwrap();
        assert!(angle < 1e-10);
        let j = standard_complex_structure(4).unwrap().as_skew();
        assert!(matches!(
            sphere_structure_check(&j, &e(4, 0), &e(4, 1), 0.3),
            Err(Error::PreconditionViolated(_))
        ));
        assert!(matches!(sphere_structure_check(&a, &e(4, 2), &e(4, 3), 0.3), Err(Error::PreconditionViolated(_))));
    }

    #[test]
    fn sphere_frame_parts() {
        let a = partial_j(6);
        let f = SphereFrame::new(&a, &e(6, 4), &e(6, 1)).unwrap();
        assert!(f.kernel_in_dm() < 1e-12);
        assert!(f.range_in_dk() < 1e-12);
        assert_eq!(f.tangent_codimension(), 1);
    }

    #[test]
    fn projective_angle_ignores_scale_and_sign() {
        let a = random_skew(5, 1);
        assert!(projective_angle(&a, &a.scaled(-3.0)) < 1e-7);
        assert!(projective_angle(&a, &random_skew(5, 2)) > 0.1);
    }
}
