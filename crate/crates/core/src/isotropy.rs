//! Almost isotropy detection and the inverse of the model construction.
//!
//! A tensor is almost isotropic when every Jacobi operator `𝒥_s` restricted
//! to `s⊥` equals `κ·Id` up to a rank-one term, with the same `κ` for all
//! directions. Every such tensor has the form `κR₁ + τR_A`;
//! [`recover_decomposition`] reads `κ`, `τ` and `A` back off the Jacobi
//! operators of the basis directions.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{
    basis_vector, ensure_unit, unit_sphere_samples, Matrix, SkewEndomorphism, Spectrum, Subspace,
    SymmetricOperator, Vector,
};
use crate::tensor::{build_model, jacobi_operator, jacobi_unchecked, CurvatureTensor, Tau};

/// Seed of the direction sample used inside [`recover_decomposition`].
const RECOVERY_SEED: u64 = 0x5eed;

/// Why a sphere scan did not certify almost isotropy.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum ScanFailure {
    NoDominantEigenvalue { sample: usize, spectrum: Vec<f64> },
    InconsistentKappa { first: f64, other: f64 },
    AmbiguousKappa { first: f64, other: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IsotropyReport {
    pub kappa: f64,
    pub is_isotropic: bool,
    pub is_almost_isotropic: bool,
    /// Largest second singular value of `𝒥_s − κ·Id` on `s⊥` over the samples.
    pub worst_rank_residual: f64,
    pub samples_used: usize,
    pub failure: Option<ScanFailure>,
}

impl IsotropyReport {
    /// Converts a failed scan into the matching error.
    pub fn ensure(&self) -> Result<()> {
        match &self.failure {
            None => Ok(()),
            Some(ScanFailure::NoDominantEigenvalue { spectrum, .. }) => Err(Error::NoDominantEigenvalue {
                needed: spectrum.len().saturating_sub(1),
                spectrum: spectrum.clone(),
            }),
            Some(ScanFailure::InconsistentKappa { first, other }) => Err(Error::InconsistentKappa(*first, *other)),
            Some(ScanFailure::AmbiguousKappa { first, other }) => Err(Error::AmbiguousKappa(*first, *other)),
        }
    }
}

/// Spectrum of `𝒥_s` compressed to `s⊥`, with eigenvectors mapped back to
/// `R^d`.
fn restricted_spectrum(r: &CurvatureTensor, s: &Vector) -> Spectrum {
    let perp = Subspace::span(r.dim(), std::slice::from_ref(s), 1e-12).complement();
    let jac = jacobi_unchecked(r, s);
    let compressed = jac.compress(&perp);
    let spec = compressed.spectrum();
    let q = perp.basis_matrix();
    Spectrum { values: spec.values, vectors: spec.vectors.iter().map(|u| &q * u).collect() }
}

fn spectrum_scale(values: &[f64]) -> f64 {
    values.iter().fold(1.0f64, |a, x| a.max(x.abs()))
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

enum Cluster {
    Found(f64, usize),
    Ambiguous(f64, f64),
    Missing,
}

/// Finds the eigenvalue of multiplicity at least `n − 1` among the `n`
/// ascending eigenvalues of `𝒥_s` on `s⊥`.
fn dominant_cluster(values: &[f64], width: f64) -> Cluster {
    let n = values.len();
    if n == 0 {
        return Cluster::Missing;
    }
    if values[n - 1] - values[0] <= width {
        return Cluster::Found(mean(values), n);
    }
    if n == 1 {
        return Cluster::Found(values[0], 1);
    }
    if n == 2 {
        return Cluster::Ambiguous(values[0], values[1]);
    }
    let low = values[n - 2] - values[0];
    let high = values[n - 1] - values[1];
    let pick_low = low <= width && (high > width || low <= high);
    if pick_low {
        Cluster::Found(mean(&values[..n - 1]), n - 1)
    } else if high <= width {
        Cluster::Found(mean(&values[1..]), n - 1)
    } else {
        Cluster::Missing
    }
}

/// The eigenvalue of `𝒥_s` on `s⊥` with multiplicity at least `d − 2`,
/// together with its multiplicity.
///
/// In dimension three two distinct eigenvalues are both candidates;
/// [`almost_isotropy_scan`] settles that case by agreement across
/// directions, and this function reports [`Error::AmbiguousKappa`].
pub fn kappa_at(r: &CurvatureTensor, s: &Vector, tol: f64) -> Result<(f64, usize)> {
    ensure_unit(s)?;
    let spec = restricted_spectrum(r, s);
    let width = tol * spectrum_scale(&spec.values);
    match dominant_cluster(&spec.values, width) {
        Cluster::Found(k, m) => Ok((k, m)),
        Cluster::Ambiguous(a, b) => Err(Error::AmbiguousKappa(a, b)),
        Cluster::Missing => Err(Error::NoDominantEigenvalue {
            needed: spec.values.len().saturating_sub(1),
            spectrum: spec.values,
        }),
    }
}

/// Checks the almost isotropy condition over `n_samples` deterministic
/// directions (basis vectors first).
///
/// The scan itself only fails on bad input; a tensor that is not almost
/// isotropic yields a report with `is_almost_isotropic = false` and the
/// reason in `failure`. [`IsotropyReport::ensure`] turns that into an error.
pub fn almost_isotropy_scan(r: &CurvatureTensor, n_samples: usize, seed: u64, tol: f64) -> Result<IsotropyReport> {
    if !(tol > 0.0) {
        return Err(Error::NonPositiveTolerance(tol));
    }
    if n_samples == 0 {
        return Err(Error::PreconditionViolated("almost isotropy scan needs at least one sample".into()));
    }
    let d = r.dim();
    let spectra: Vec<Vec<f64>> = unit_sphere_samples(d, n_samples, seed)
        .iter()
        .map(|s| restricted_spectrum(r, s).values)
        .collect();
    let scale = spectra.iter().fold(1.0f64, |a, v| a.max(spectrum_scale(v)));
    let width = tol * scale;

    let (kappa, failure) = if d == 3 {
        vote_kappa(&spectra, width)
    } else {
        consensus_kappa(&spectra, width)
    };

    let mut worst = 0.0f64;
    let mut worst_top = 0.0f64;
    for values in &spectra {
        let mut dev: Vec<f64> = values.iter().map(|x| (x - kappa).abs()).collect();
        dev.sort_by(|a, b| b.total_cmp(a));
        worst_top = worst_top.max(dev.first().copied().unwrap_or(0.0));
        worst = worst.max(dev.get(1).copied().unwrap_or(0.0));
    }
    let is_almost_isotropic = failure.is_none() && worst <= width;
    Ok(IsotropyReport {
        kappa,
        is_isotropic: is_almost_isotropic && worst_top <= width,
        is_almost_isotropic,
        worst_rank_residual: worst,
        samples_used: spectra.len(),
        failure,
    })
}

fn consensus_kappa(spectra: &[Vec<f64>], width: f64) -> (f64, Option<ScanFailure>) {
    let mut kappas = Vec::with_capacity(spectra.len());
    let mut failure = None;
    for (idx, values) in spectra.iter().enumerate() {
        match dominant_cluster(values, width) {
            Cluster::Found(k, _) => kappas.push(k),
            _ => {
                if failure.is_none() {
                    failure = Some(ScanFailure::NoDominantEigenvalue { sample: idx, spectrum: values.clone() });
                }
            }
        }
    }
    if kappas.is_empty() {
        return (0.0, failure);
    }
    let kappa = mean(&kappas);
    if failure.is_none() {
        if let Some(bad) = kappas.iter().find(|k| (*k - kappas[0]).abs() > width) {
            failure = Some(ScanFailure::InconsistentKappa { first: kappas[0], other: *bad });
        }
    }
    (kappa, failure)
}

/// Dimension three: each direction offers two candidates; `κ` is the one
/// that every direction shares.
fn vote_kappa(spectra: &[Vec<f64>], width: f64) -> (f64, Option<ScanFailure>) {
    let first = &spectra[0];
    let mut winners: Vec<f64> = Vec::new();
    for &cand in first {
        let mut matched = Vec::with_capacity(spectra.len());
        let shared = spectra.iter().all(|values| {
            match values.iter().map(|x| (x - cand).abs()).enumerate().min_by(|a, b| a.1.total_cmp(&b.1)) {
                Some((i, dist)) if dist <= width => {
                    matched.push(values[i]);
                    true
                }
                _ => false,
            }
        });
        if shared {
            let k = mean(&matched);
            if !winners.iter().any(|w| (w - k).abs() <= width) {
                winners.push(k);
            }
        }
    }
    match winners.as_slice() {
        [k] => (*k, None),
        [] => (first[0], Some(ScanFailure::InconsistentKappa { first: first[0], other: first[first.len() - 1] })),
        [a, b, ..] => (*a, Some(ScanFailure::AmbiguousKappa { first: *a, other: *b })),
    }
}

/// `λ(s) = trace(𝒥_s) − (d − 2)κ`, the eigenvalue of `𝒥_s` off the
/// `κ`-eigenspace.
pub fn extremal_curvature(r: &CurvatureTensor, kappa: f64, s: &Vector) -> Result<f64> {
    let jac = jacobi_operator(r, s)?;
    Ok(jac.trace() - (r.dim() as f64 - 2.0) * kappa)
}

/// The `κ`-eigenspace of `𝒥_s` restricted to `s⊥`.
pub fn eigenspace_at(r: &CurvatureTensor, kappa: f64, s: &Vector, tol: f64) -> Result<Subspace> {
    ensure_unit(s)?;
    let spec = restricted_spectrum(r, s);
    let width = tol * spectrum_scale(&spec.values);
    let basis = spec
        .values
        .iter()
        .zip(spec.vectors)
        .filter(|(v, _)| (*v - kappa).abs() <= width)
        .map(|(_, u)| u)
        .collect();
    Subspace::new(r.dim(), basis)
}

/// `R = κR₁ + τR_A` with `τ ∈ {−1, 0, 1}` and `τ = 0 ⇔ A = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub kappa: f64,
    pub tau: Tau,
    /// Reported with the first significant entry (row-major) positive,
    /// since `R_A = R_{−A}`.
    pub a: SkewEndomorphism,
    /// `‖R − κR₁ − τR_A‖ / max(1, ‖R‖)`.
    pub residual: f64,
}

impl Decomposition {
    pub fn model(&self) -> CurvatureTensor {
        build_model(self.kappa, self.tau, &self.a).expect("decomposition respects the tau/A convention")
    }
}

/// `(𝒥_s − κ(I − ssᵀ)) / 3`, which equals `τ (As)(As)ᵀ` for a model tensor.
fn rank_one_part(r: &CurvatureTensor, kappa: f64, s: &Vector) -> Matrix {
    let d = r.dim();
    let jac = jacobi_unchecked(r, s).into_matrix();
    (jac - (Matrix::identity(d, d) - s * s.transpose()) * kappa) / 3.0
}

/// Recovers `(κ, τ, A)` from an almost isotropic tensor.
///
/// Each basis direction gives `τ (Ae_i)(Ae_i)ᵀ`, hence the column `Ae_i` up
/// to sign. Column signs are tied together along a maximum-weight spanning
/// forest of the relations `⟨e_j, Ae_i⟩ = −⟨e_i, Ae_j⟩`; forests that stay
/// disconnected (blocks sharing no basis index) are aligned by probing the
/// mixed direction `(e_i + e_j)/√2`.
pub fn recover_decomposition(r: &CurvatureTensor, tol: f64) -> Result<Decomposition> {
    let d = r.dim();
    let n_samples = (2 * d).max(d + 24);
    let report = almost_isotropy_scan(r, n_samples, RECOVERY_SEED, tol)?;
    report.ensure().map_err(|e| Error::NotAlmostIsotropic(e.to_string()))?;
    if !report.is_almost_isotropic {
        return Err(Error::NotAlmostIsotropic(format!(
            "rank residual {:e} exceeds tolerance",
            report.worst_rank_residual
        )));
    }
    let kappa = report.kappa;
    let scale = r.max_abs().max(1.0);

    let mut columns: Vec<Option<Vector>> = Vec::with_capacity(d);
    let mut tau_sign = 0.0f64;
    for i in 0..d {
        let e = basis_vector(d, i);
        let p = SymmetricOperator::symmetric_part(&rank_one_part(r, kappa, &e));
        let spec = p.spectrum();
        let mut by_mag: Vec<usize> = (0..d).collect();
        by_mag.sort_by(|&a, &b| spec.values[b].abs().total_cmp(&spec.values[a].abs()));
        let lead = spec.values[by_mag[0]];
        let second = spec.values.get(by_mag.get(1).copied().unwrap_or(0)).copied().unwrap_or(0.0);
        if d > 1 && second.abs() > tol * scale {
            return Err(Error::NotAlmostIsotropic(format!(
                "Jacobi operator at e_{} has a rank-two deviation (second eigenvalue {second:e})",
                i + 1
            )));
        }
        if lead.abs() <= tol * scale {
            columns.push(None);
            continue;
        }
        let sign = lead.signum();
        if tau_sign != 0.0 && sign != tau_sign {
            return Err(Error::InconsistentTau);
        }
        tau_sign = sign;
        columns.push(Some(&spec.vectors[by_mag[0]] * lead.abs().sqrt()));
    }

    if tau_sign == 0.0 {
        let a = SkewEndomorphism::zero(d);
        let residual = relative_residual(r, kappa, Tau::Zero, &a);
        return Ok(Decomposition { kappa, tau: Tau::Zero, a, residual });
    }
    let tau = Tau::from_sign(tau_sign);

    let signs = resolve_signs(r, kappa, tau, &columns, tol);
    let mut m = Matrix::zeros(d, d);
    for (i, col) in columns.iter().enumerate() {
        if let Some(c) = col {
            m.set_column(i, &(c * signs[i]));
        }
    }
    let a = SkewEndomorphism::skew_part(&m).canonical_sign(1e-6);
    let residual = relative_residual(r, kappa, tau, &a);
    if residual > 1e2 * tol {
        return Err(Error::SignResolutionFailure(residual));
    }
    Ok(Decomposition { kappa, tau, a, residual })
}

fn resolve_signs(r: &CurvatureTensor, kappa: f64, tau: Tau, columns: &[Option<Vector>], tol: f64) -> Vec<f64> {
    let d = columns.len();
    let nonzero: Vec<usize> = (0..d).filter(|&i| columns[i].is_some()).collect();
    let cmax = nonzero
        .iter()
        .map(|&i| columns[i].as_ref().map_or(0.0, |c| c.amax()))
        .fold(0.0f64, f64::max);
    let edge_floor = tol.sqrt() * cmax;
    let weight = |i: usize, j: usize| -> f64 {
        match (&columns[i], &columns[j]) {
            (Some(ci), Some(cj)) => ci[j].abs().min(cj[i].abs()),
            _ => 0.0,
        }
    };

    let mut sign = vec![1.0f64; d];
    let mut visited = vec![false; d];
    let mut roots: Vec<usize> = Vec::new();
    for &start in &nonzero {
        if visited[start] {
            continue;
        }
        visited[start] = true;
        roots.push(start);
        let mut tree = vec![start];
        // Prim: grow along the strongest remaining relation.
        loop {
            let mut best: Option<(usize, usize, f64)> = None;
            for &i in &tree {
                for &j in &nonzero {
                    if visited[j] {
                        continue;
                    }
                    let w = weight(i, j);
                    if w > edge_floor && best.is_none_or(|b| w > b.2) {
                        best = Some((i, j, w));
                    }
                }
            }
            let Some((i, j, _)) = best else { break };
            let (ci, cj) = (columns[i].as_ref().unwrap(), columns[j].as_ref().unwrap());
            // sign_j c_j[i] = −sign_i c_i[j]
            sign[j] = -sign[i] * (ci[j] * cj[i]).signum();
            visited[j] = true;
            tree.push(j);
        }
    }

    // Align each remaining forest with the first through a mixed probe.
    if let Some((&anchor, rest)) = roots.split_first() {
        let ca = columns[anchor].as_ref().unwrap();
        for &root in rest {
            let cr = columns[root].as_ref().unwrap();
            let s = (basis_vector(d, anchor) + basis_vector(d, root)) * std::f64::consts::FRAC_1_SQRT_2;
            let observed = rank_one_part(r, kappa, &s);
            let candidate = |flip: f64| {
                let v = (ca * sign[anchor] + cr * (sign[root] * flip)) * std::f64::consts::FRAC_1_SQRT_2;
                (&observed - &v * v.transpose() * tau.value()).norm()
            };
            if candidate(-1.0) < candidate(1.0) {
                let flip_root = root;
                // Flip the whole forest hanging from this root.
                let members = forest_members(columns, flip_root, edge_floor);
                for m in members {
                    sign[m] = -sign[m];
                }
            }
        }
    }
    sign
}

/// Indices reachable from `root` through relations above `floor`.
fn forest_members(columns: &[Option<Vector>], root: usize, floor: f64) -> Vec<usize> {
    let d = columns.len();
    let mut seen = vec![false; d];
    let mut stack = vec![root];
    seen[root] = true;
    let mut out = Vec::new();
    while let Some(i) = stack.pop() {
        out.push(i);
        let Some(ci) = &columns[i] else { continue };
        for j in 0..d {
            if seen[j] {
                continue;
            }
            if let Some(cj) = &columns[j] {
                if ci[j].abs().min(cj[i].abs()) > floor {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
    }
    out
}

fn relative_residual(r: &CurvatureTensor, kappa: f64, tau: Tau, a: &SkewEndomorphism) -> f64 {
    let model = build_model(kappa, tau, a).expect("convention holds by construction");
    (r - &model).norm() / r.norm().max(1.0)
}

/// `|λ(s) − κ − 3τ⟨As, As⟩|` for a decomposition.
pub fn lam_residual(r: &CurvatureTensor, dec: &Decomposition, s: &Vector) -> Result<f64> {
    let lambda = extremal_curvature(r, dec.kappa, s)?;
    let as_ = dec.a.apply(s);
    Ok((lambda - dec.kappa - 3.0 * dec.tau.value() * as_.norm_squared()).abs())
}

/// `|(λ(v) − κ)⟨Aw, Aw⟩ − (λ(w) − κ)⟨Av, Av⟩|` for an orthonormal pair.
pub fn equal_residual(r: &CurvatureTensor, dec: &Decomposition, v: &Vector, w: &Vector) -> Result<f64> {
    crate::linalg::ensure_orthonormal(&[v, w], 1e-10)?;
    let lv = extremal_curvature(r, dec.kappa, v)? - dec.kappa;
    let lw = extremal_curvature(r, dec.kappa, w)? - dec.kappa;
    Ok((lv * dec.a.apply(w).norm_squared() - lw * dec.a.apply(v).norm_squared()).abs())
}

/// `‖𝒥_s(w) − κw − (λ(s) − κ)(⟨w, As⟩/⟨As, As⟩)As‖` for `w ⊥ s`.
///
/// Returns `None` when `As` vanishes (to `1e-12`), where the formula does
/// not apply.
pub fn jacobi_line_residual(r: &CurvatureTensor, dec: &Decomposition, s: &Vector, w: &Vector) -> Result<Option<f64>> {
    let jac = jacobi_operator(r, s)?;
    let as_ = dec.a.apply(s);
    let n2 = as_.norm_squared();
    if n2 < 1e-12 {
        return Ok(None);
    }
    let lambda = extremal_curvature(r, dec.kappa, s)?;
    let expected = w * dec.kappa + &as_ * ((lambda - dec.kappa) * w.dot(&as_) / n2);
    Ok(Some((jac.apply(w) - expected).norm()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{projector, random_skew, standard_complex_structure};
    use crate::tensor::{build_r1, build_ra};

    fn block_model_a() -> SkewEndomorphism {
        let j = standard_complex_structure(4).unwrap();
        let w1 = Subspace::new(4, vec![basis_vector(4, 0), basis_vector(4, 1)]).unwrap();
        let w2 = Subspace::new(4, vec![basis_vector(4, 2), basis_vector(4, 3)]).unwrap();
        let m = j.matrix() * (projector(&w1).into_matrix() * 2.0 + projector(&w2).into_matrix() * 0.5);
        SkewEndomorphism::new(m).unwrap()
    }

    #[test]
    fn kappa_at_model_and_r1() {
        let r = build_model(1.0, Tau::Plus, &block_model_a()).unwrap();
        let (k, m) = kappa_at(&r, &basis_vector(4, 0), 1e-9).unwrap();
        assert!((k - 1.0).abs() < 1e-12);
        assert_eq!(m, 2);
        let (k, m) = kappa_at(&build_r1(5), &basis_vector(5, 2), 1e-9).unwrap();
        assert!((k - 1.0).abs() < 1e-14);
        assert_eq!(m, 4);
    }

    #[test]
    fn kappa_at_rejects_broken_cluster() {
        // R₁ plus two independent rank-one Jacobi perturbations at e₁.
        let d = 5;
        let mut a1 = Matrix::zeros(d, d);
        a1[(1, 0)] = 1.0;
        a1[(0, 1)] = -1.0;
        let mut a2 = Matrix::zeros(d, d);
        a2[(2, 0)] = 0.7;
        a2[(0, 2)] = -0.7;
        let r = &(&build_r1(d) + &build_ra(&SkewEndomorphism::new(a1).unwrap()))
            + &(&build_ra(&SkewEndomorphism::new(a2).unwrap()) * 0.5);
        assert!(matches!(
            kappa_at(&r, &basis_vector(d, 0), 1e-9),
            Err(Error::NoDominantEigenvalue { .. })
        ));
    }

    #[test]
    fn scan_examples() {
        let r = build_model(-2.0, Tau::Plus, &random_skew(6, 3)).unwrap();
        let rep = almost_isotropy_scan(&r, 40, 1, 1e-9).unwrap();
        assert!(rep.is_almost_isotropic);
        assert!(!rep.is_isotropic);
        assert!((rep.kappa + 2.0).abs() < 1e-9);

        let r = &build_r1(5) * 3.0;
        let rep = almost_isotropy_scan(&r, 30, 1, 1e-9).unwrap();
        assert!(rep.is_isotropic && rep.is_almost_isotropic);
        assert!((rep.kappa - 3.0).abs() < 1e-12);
    }

    #[test]
    fn scan_flags_generic_sum() {
        let d = 6;
        let r = &build_r1(d) + &(&(&build_ra(&random_skew(d, 21)) + &build_ra(&random_skew(d, 22))) * 0.5);
        let rep = almost_isotropy_scan(&r, 30, 2, 1e-9).unwrap();
        assert!(!rep.is_almost_isotropic);
        assert!(rep.failure.is_some());
        assert!(rep.ensure().is_err());
    }

    #[test]
    fn dimension_three_vote() {
        let r = build_model(0.5, Tau::Minus, &random_skew(3, 5)).unwrap();
        let rep = almost_isotropy_scan(&r, 20, 9, 1e-9).unwrap();
        assert!(rep.is_almost_isotropic, "{rep:?}");
        assert!((rep.kappa - 0.5).abs() < 1e-10);
        let s = Vector::from_row_slice(&[0.6, 0.0, 0.8]);
        assert!(matches!(kappa_at(&r, &s, 1e-9), Err(Error::AmbiguousKappa(..))));
    }

    #[test]
    fn extremal_and_eigenspace() {
        let r = build_model(1.0, Tau::Plus, &block_model_a()).unwrap();
        assert!((extremal_curvature(&r, 1.0, &basis_vector(4, 0)).unwrap() - 13.0).abs() < 1e-12);
        assert!((extremal_curvature(&r, 1.0, &basis_vector(4, 2)).unwrap() - 1.75).abs() < 1e-12);
        let e = eigenspace_at(&r, 1.0, &basis_vector(4, 0), 1e-9).unwrap();
        let want = Subspace::new(4, vec![basis_vector(4, 2), basis_vector(4, 3)]).unwrap();
        assert!(e.max_principal_angle(&want) < 1e-12);
        let full = eigenspace_at(&build_r1(4), 1.0, &basis_vector(4, 0), 1e-9).unwrap();
        assert_eq!(full.dim(), 3);
    }

    #[test]
    fn recover_block_model() {
        let a = block_model_a();
        let r = build_model(1.0, Tau::Plus, &a).unwrap();
        let dec = recover_decomposition(&r, 1e-9).unwrap();
        assert!((dec.kappa - 1.0).abs() < 1e-10);
        assert_eq!(dec.tau, Tau::Plus);
        let diff = (dec.a.matrix() - a.matrix()).norm().min((dec.a.matrix() + a.matrix()).norm());
        assert!(diff < 1e-8);
        assert!(dec.residual < 1e-10);
    }

    #[test]
    fn recover_isotropic_and_negative() {
        let dec = recover_decomposition(&(&build_r1(5) * 3.0), 1e-9).unwrap();
        assert!((dec.kappa - 3.0).abs() < 1e-12);
        assert_eq!(dec.tau, Tau::Zero);
        assert!(dec.a.is_zero());

        let j = standard_complex_structure(4).unwrap();
        let w = Subspace::new(4, vec![basis_vector(4, 0), basis_vector(4, 1)]).unwrap();
        let a = SkewEndomorphism::new(j.matrix() * projector(&w).into_matrix()).unwrap();
        let r = &build_ra(&a) * -4.0;
        let dec = recover_decomposition(&r, 1e-9).unwrap();
        assert!(dec.kappa.abs() < 1e-12);
        assert_eq!(dec.tau, Tau::Minus);
        let want = a.matrix() * 2.0;
        let diff = (dec.a.matrix() - &want).norm().min((dec.a.matrix() + &want).norm());
        assert!(diff < 1e-10);
    }

    #[test]
    fn lemma_residuals_vanish_on_model() {
        let a = random_skew(6, 3);
        let r = build_model(-0.5, Tau::Minus, &a).unwrap();
        let dec = recover_decomposition(&r, 1e-9).unwrap();
        let samples = unit_sphere_samples(6, 12, 11);
        for pair in samples.windows(2) {
            let s = &pair[0];
            let w = &pair[1] - s * s.dot(&pair[1]);
            let w = w.normalize();
            assert!(lam_residual(&r, &dec, s).unwrap() < 1e-9);
            assert!(equal_residual(&r, &dec, s, &w).unwrap() < 1e-9);
            assert!(jacobi_line_residual(&r, &dec, s, &w).unwrap().unwrap() < 1e-9);
        }
    }
}
