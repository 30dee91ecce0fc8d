//! Classification of Kähler almost isotropic tensors.
//!
//! After [`recover_decomposition`] produces `R = κR₁ + τR_A`, everything is
//! read off `B = A∘J`: it must be symmetric (`A` commutes with `J`), its
//! eigenspaces are `J`-invariant, and the eigenvalue pattern fixes the case.
//! A `B`-eigenvalue `β` corresponds to the parameter `μ = −β`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::isotropy::{recover_decomposition, Decomposition};
use crate::linalg::{
    ensure_orthonormal, spectral_norm, ComplexStructure, Matrix, SkewEndomorphism, Subspace,
    SymmetricOperator, Vector,
};
use crate::tensor::{ricci, validate_symmetries, CurvatureTensor, Tau};

/// `‖(I − P) J P‖` bound for a subspace to count as `J`-invariant.
pub const INVARIANCE_TOL: f64 = 1e-8;

const PAIR_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CommuteType {
    Commute,
    Anticommute,
    Neither,
}

/// Compares `‖AJ − JA‖₂` and `‖AJ + JA‖₂` against `tol · ‖A‖₂`.
pub fn commute_type(a: &SkewEndomorphism, j: &ComplexStructure, tol: f64) -> CommuteType {
    let aj = a.matrix() * j.matrix();
    let ja = j.matrix() * a.matrix();
    let bound = tol * a.spectral_norm();
    if spectral_norm(&(&aj - &ja)) <= bound {
        CommuteType::Commute
    } else if spectral_norm(&(&aj + &ja)) <= bound {
        CommuteType::Anticommute
    } else {
        CommuteType::Neither
    }
}

/// `B = A∘J` with its eigenvalue clusters.
#[derive(Debug, Clone)]
pub struct BAnalysis {
    pub b: SymmetricOperator,
    pub commute_type: CommuteType,
    /// One representative eigenvalue per cluster, ascending.
    pub eigenvalues: Vec<f64>,
    /// The eigenspace of each entry of `eigenvalues`.
    pub eigenplanes: Vec<Subspace>,
}

impl BAnalysis {
    pub fn new(a: &SkewEndomorphism, j: &ComplexStructure, tol: f64) -> Self {
        let raw = a.matrix() * j.matrix();
        let commute = commute_type(a, j, tol);
        let b = SymmetricOperator::symmetric_part(&raw);
        let spec = b.spectrum();
        let scale = spec.values.iter().fold(1.0f64, |m, x| m.max(x.abs()));
        let d = a.dim();
        let mut eigenvalues = Vec::new();
        let mut eigenplanes = Vec::new();
        let mut start = 0;
        for i in 1..=spec.values.len() {
            let split = i == spec.values.len() || spec.values[i] - spec.values[i - 1] > tol * scale;
            if split {
                let vals = &spec.values[start..i];
                eigenvalues.push(vals.iter().sum::<f64>() / vals.len() as f64);
                let basis = spec.vectors[start..i].to_vec();
                eigenplanes.push(Subspace::new(d, basis).expect("symmetric eigenvectors are orthonormal"));
                start = i;
            }
        }
        Self { b, commute_type: commute, eigenvalues, eigenplanes }
    }
}

/// The four cases of the classification.
#[derive(Debug, Clone, PartialEq)]
pub enum KahlerClass {
    /// `d = 2`: `R = κR₁`.
    Case1 { kappa: f64 },
    /// `d = 4`, `κ ≠ 0`: `A = J∘(μ₁π^{W₁} + μ₂π^{W₂})` with `μ₁μ₂ = κ/τ`.
    Case2 { kappa: f64, tau: Tau, mu1: f64, mu2: f64, w1: Subspace, w2: Subspace },
    /// `R = κ(R₁ + R_J)`.
    Case3 { kappa: f64 },
    /// `κ = 0`: `R = c R_{J∘π^W}` for a holomorphic plane `W`.
    Case4 { c: f64, w: Subspace },
}

impl KahlerClass {
    pub fn case_number(&self) -> u8 {
        match self {
            KahlerClass::Case1 { .. } => 1,
            KahlerClass::Case2 { .. } => 2,
            KahlerClass::Case3 { .. } => 3,
            KahlerClass::Case4 { .. } => 4,
        }
    }
}

/// Largest parameter deviation between two classes of the same case
/// (subspaces compared by principal angle); infinite when the cases differ.
/// Case2 pairs are compared up to swapping and a joint sign flip of `μ`.
pub fn class_deviation(a: &KahlerClass, b: &KahlerClass) -> f64 {
    use KahlerClass::*;
    match (a, b) {
        (Case1 { kappa: x }, Case1 { kappa: y }) | (Case3 { kappa: x }, Case3 { kappa: y }) => (x - y).abs(),
        (Case4 { c: c1, w: w1 }, Case4 { c: c2, w: w2 }) => (c1 - c2).abs().max(w1.max_principal_angle(w2)),
        (
            Case2 { kappa: k1, tau: t1, mu1: a1, mu2: a2, w1: u1, w2: u2 },
            Case2 { kappa: k2, tau: t2, mu1: b1, mu2: b2, w1: v1, w2: v2 },
        ) => {
            if t1 != t2 {
                return f64::INFINITY;
            }
            let straight = |s: f64| {
                (a1 - s * b1)
                    .abs()
                    .max((a2 - s * b2).abs())
                    .max(u1.max_principal_angle(v1))
                    .max(u2.max_principal_angle(v2))
            };
            let swapped = |s: f64| {
                (a1 - s * b2)
                    .abs()
                    .max((a2 - s * b1).abs())
                    .max(u1.max_principal_angle(v2))
                    .max(u2.max_principal_angle(v1))
            };
            let best = straight(1.0).min(straight(-1.0)).min(swapped(1.0)).min(swapped(-1.0));
            best.max((k1 - k2).abs())
        }
        _ => f64::INFINITY,
    }
}

/// A classification together with the intermediate objects it was derived
/// from.
#[derive(Debug, Clone)]
pub struct Classification {
    pub class: KahlerClass,
    pub decomposition: Decomposition,
    pub b: Option<BAnalysis>,
}

pub fn classify_kahler(r: &CurvatureTensor, j: &ComplexStructure, tol: f64) -> Result<KahlerClass> {
    classify_kahler_detailed(r, j, tol).map(|c| c.class)
}

pub fn classify_kahler_detailed(r: &CurvatureTensor, j: &ComplexStructure, tol: f64) -> Result<Classification> {
    let d = r.dim();
    if j.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, found: j.dim() });
    }
    let report = validate_symmetries(r, Some(j))?;
    if let Some((identity, residual)) = report.first_violation(tol) {
        return Err(Error::SymmetryViolation { identity, residual });
    }
    if !report.is_kahler(tol) {
        return Err(Error::NotKahler(report.kahler_residual.unwrap_or(f64::INFINITY)));
    }
    let dec = recover_decomposition(r, tol)?;
    let kappa = dec.kappa;
    let scale = r.max_abs().max(1.0);

    if d == 2 {
        return Ok(Classification { class: KahlerClass::Case1 { kappa }, decomposition: dec, b: None });
    }
    if dec.tau == Tau::Zero {
        if r.max_abs() > tol {
            return Err(Error::StructureViolation(format!(
                "isotropic Kähler tensor in dimension {d} must vanish, but |R| reaches {:e}",
                r.max_abs()
            )));
        }
        let class = KahlerClass::Case4 { c: 0.0, w: Subspace::zero(d) };
        return Ok(Classification { class, decomposition: dec, b: None });
    }

    let tau = dec.tau;
    let b = BAnalysis::new(&dec.a, j, tol);
    if b.commute_type != CommuteType::Commute {
        return Err(Error::StructureViolation(format!("A∘J is not symmetric ({:?})", b.commute_type)));
    }
    for plane in &b.eigenplanes {
        let defect = plane.invariance_defect(j.matrix());
        if defect >= INVARIANCE_TOL {
            return Err(Error::StructureViolation(format!("eigenspace of B is not J-invariant ({defect:e})")));
        }
    }
    let target = kappa / tau.value();

    let class = if kappa.abs() <= tol * scale {
        let b_scale = b.eigenvalues.iter().fold(1.0f64, |m, x| m.max(x.abs()));
        let nonzero: Vec<usize> = (0..b.eigenvalues.len())
            .filter(|&i| b.eigenvalues[i].abs() > tol * b_scale)
            .collect();
        match nonzero.as_slice() {
            [i] if b.eigenplanes[*i].dim() == 2 => {
                let mu = -b.eigenvalues[*i];
                KahlerClass::Case4 { c: tau.value() * mu * mu, w: b.eigenplanes[*i].clone() }
            }
            _ => {
                let dims: Vec<usize> = nonzero.iter().map(|&i| b.eigenplanes[i].dim()).collect();
                return Err(Error::StructureViolation(format!(
                    "flat case needs A of rank 2, found nonzero eigenspaces of dimensions {dims:?}"
                )));
            }
        }
    } else {
        match b.eigenvalues.as_slice() {
            [beta] => {
                let mu = -beta;
                if (mu * mu - target).abs() > tol * scale {
                    return Err(Error::StructureViolation(format!("μ² = {} but κ/τ = {target}", mu * mu)));
                }
                KahlerClass::Case3 { kappa }
            }
            [b1, b2] if d == 4 => {
                let (mut mu1, mut mu2) = (-b1, -b2);
                let (mut w1, mut w2) = (b.eigenplanes[0].clone(), b.eigenplanes[1].clone());
                if (mu1 * mu2 - target).abs() > tol * scale {
                    return Err(Error::StructureViolation(format!("μ₁μ₂ = {} but κ/τ = {target}", mu1 * mu2)));
                }
                // (μ₁, μ₂) and (−μ₁, −μ₂) describe the same tensor.
                let lead = if mu1.abs() >= mu2.abs() { mu1 } else { mu2 };
                if lead < 0.0 {
                    mu1 = -mu1;
                    mu2 = -mu2;
                }
                if mu2 > mu1 {
                    std::mem::swap(&mut mu1, &mut mu2);
                    std::mem::swap(&mut w1, &mut w2);
                }
                if (mu1 - mu2).abs() < tol {
                    KahlerClass::Case3 { kappa }
                } else {
                    KahlerClass::Case2 { kappa, tau, mu1, mu2, w1, w2 }
                }
            }
            other => {
                return Err(Error::StructureViolation(format!(
                    "B should be a multiple of the identity in dimension {d}, found eigenvalues {other:?}"
                )));
            }
        }
    };
    Ok(Classification { class, decomposition: dec, b: Some(b) })
}

/// Residual norms of the two vector identities that the Kähler symmetry
/// imposes on `κR₁ + τR_A`, for an orthonormal pair `{x, y}`.
///
/// With `B = AJ`:
///
/// ```text
/// κ[⟨x,Jy⟩Jy − x] = τ[⟨x,(3A+2JB)y⟩Ay + ⟨x,By⟩By − ⟨y,By⟩Bx]
/// κ[⟨y,By⟩Jx − ⟨y,Bx⟩Jy − ⟨x,Ay⟩y]
///     = τ[2⟨x,(A+JB)y⟩A²y + ⟨y,A²y⟩Ax − ⟨x,A²y⟩Ay + ⟨By,Ay⟩Bx − ⟨Bx,Ay⟩By]
/// ```
pub fn identity_residuals(
    kappa: f64,
    tau: f64,
    a: &SkewEndomorphism,
    j: &ComplexStructure,
    x: &Vector,
    y: &Vector,
) -> Result<(f64, f64)> {
    ensure_orthonormal(&[x, y], PAIR_TOL)?;
    let am = a.matrix();
    let jm = j.matrix();
    let bm: Matrix = am * jm;
    let jb: Matrix = jm * &bm;
    let a2: Matrix = am * am;

    let (ax, ay) = (am * x, am * y);
    let (bx, by) = (&bm * x, &bm * y);
    let (jx, jy) = (jm * x, jm * y);
    let a2y = &a2 * y;

    let lhs1 = (&jy * x.dot(&jy) - x) * kappa;
    let rhs1 = (&ay * x.dot(&((am * 3.0 + &jb * 2.0) * y)) + &by * x.dot(&by) - &bx * y.dot(&by)) * tau;

    let lhs2 = (&jx * y.dot(&by) - &jy * y.dot(&bx) - y * x.dot(&ay)) * kappa;
    let rhs2 = (&a2y * (2.0 * x.dot(&((am + &jb) * y))) + &ax * y.dot(&a2y) - &ay * x.dot(&a2y)
        + &bx * by.dot(&ay)
        - &by * bx.dot(&ay))
        * tau;

    Ok(((lhs1 - rhs1).norm(), (lhs2 - rhs2).norm()))
}

/// Absolute residuals of the scalar relations satisfied by an orthonormal
/// pair of `B`-eigenvectors with eigenvalues `μ₁`, `μ₂`:
///
/// ```text
/// κ(1 − c²) = τ(μ₁μ₂ − μ₂²c²)
/// κμ₂(1 − c²) = τμ₁μ₂²(1 − c²)        with c = ⟨e₁, Je₂⟩
/// ```
pub fn relations_residuals(
    kappa: f64,
    tau: f64,
    mu1: f64,
    mu2: f64,
    e1: &Vector,
    e2: &Vector,
    j: &ComplexStructure,
) -> Result<(f64, f64)> {
    ensure_orthonormal(&[e1, e2], PAIR_TOL)?;
    let c = e1.dot(&j.apply(e2));
    let c2 = c * c;
    let three = (kappa * (1.0 - c2) - tau * (mu1 * mu2 - mu2 * mu2 * c2)).abs();
    let four = (kappa * mu2 * (1.0 - c2) - tau * mu1 * mu2 * mu2 * (1.0 - c2)).abs();
    Ok((three, four))
}

/// Whether `Ric = c·Id` within `tol · max(1, |c|)`, with `c = trace(Ric)/d`.
pub fn einstein_check(r: &CurvatureTensor, tol: f64) -> (bool, f64) {
    let ric = ricci(r);
    let d = r.dim();
    let c = ric.trace() / d as f64;
    let dev = (ric.matrix() - Matrix::identity(d, d) * c).amax();
    (dev < tol * c.abs().max(1.0), c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{basis_vector, projector, standard_complex_structure};
    use crate::tensor::{build_model, build_r1, build_ra};

    fn e(d: usize, i: usize) -> Vector {
        basis_vector(d, i)
    }

    fn plane(d: usize, a: usize, b: usize) -> Subspace {
        Subspace::new(d, vec![e(d, a), e(d, b)]).unwrap()
    }

    fn quaternion_j() -> SkewEndomorphism {
        let mut m = Matrix::zeros(4, 4);
        m[(2, 0)] = 1.0;
        m[(3, 1)] = -1.0;
        m[(0, 2)] = -1.0;
        m[(1, 3)] = 1.0;
        SkewEndomorphism::new(m).unwrap()
    }

    fn case2_a() -> SkewEndomorphism {
        let j = standard_complex_structure(4).unwrap();
        let m = j.matrix()
            * (projector(&plane(4, 0, 1)).into_matrix() * 2.0 + projector(&plane(4, 2, 3)).into_matrix() * 0.5);
        SkewEndomorphism::new(m).unwrap()
    }

    #[test]
    fn commute_examples() {
        let j = standard_complex_structure(4).unwrap();
        assert_eq!(commute_type(&j.as_skew(), &j, 1e-9), CommuteType::Commute);
        assert_eq!(commute_type(&quaternion_j(), &j, 1e-9), CommuteType::Anticommute);
        let sum = SkewEndomorphism::new(j.matrix() + quaternion_j().matrix()).unwrap();
        assert_eq!(commute_type(&sum, &j, 1e-9), CommuteType::Neither);
        let aj = sum.matrix() * j.matrix();
        let ja = j.matrix() * sum.matrix();
        assert!((spectral_norm(&(&aj - &ja)) - 2.0).abs() < 1e-12);
        assert!((spectral_norm(&(&aj + &ja)) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn classify_case3() {
        let j = standard_complex_structure(6).unwrap();
        let r = &(&build_r1(6) + &build_ra(&j.as_skew())) * -1.0;
        match classify_kahler(&r, &j, 1e-9).unwrap() {
            KahlerClass::Case3 { kappa } => assert!((kappa + 1.0).abs() < 1e-10),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn classify_case2() {
        let j = standard_complex_structure(4).unwrap();
        let r = build_model(1.0, Tau::Plus, &case2_a()).unwrap();
        match classify_kahler(&r, &j, 1e-9).unwrap() {
            KahlerClass::Case2 { kappa, tau, mu1, mu2, w1, w2 } => {
                assert!((kappa - 1.0).abs() < 1e-10);
                assert_eq!(tau, Tau::Plus);
                assert!((mu1 - 2.0).abs() < 1e-9 && (mu2 - 0.5).abs() < 1e-9);
                assert!(w1.max_principal_angle(&plane(4, 0, 1)) < 1e-9);
                assert!(w2.max_principal_angle(&plane(4, 2, 3)) < 1e-9);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn classify_case4() {
        let j = standard_complex_structure(6).unwrap();
        let w = plane(6, 0, 1);
        let a = SkewEndomorphism::new(j.matrix() * projector(&w).into_matrix()).unwrap();
        let r = &build_ra(&a) * 2.0;
        match classify_kahler(&r, &j, 1e-9).unwrap() {
            KahlerClass::Case4 { c, w: got } => {
                assert!((c - 2.0).abs() < 1e-9);
                assert!(got.max_principal_angle(&w) < 1e-9);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn classify_zero_and_dim_two() {
        let j4 = standard_complex_structure(4).unwrap();
        match classify_kahler(&CurvatureTensor::zeros(4), &j4, 1e-9).unwrap() {
            KahlerClass::Case4 { c, w } => {
                assert_eq!(c, 0.0);
                assert!(w.is_zero());
            }
            other => panic!("unexpected {other:?}"),
        }
        let j2 = standard_complex_structure(2).unwrap();
        let r = &build_r1(2) * -0.5;
        assert_eq!(classify_kahler(&r, &j2, 1e-9).unwrap(), KahlerClass::Case1 { kappa: -0.5 });
    }

    #[test]
    fn r1_is_not_kahler() {
        let j = standard_complex_structure(4).unwrap();
        assert!(matches!(classify_kahler(&build_r1(4), &j, 1e-9), Err(Error::NotKahler(_))));
    }

    #[test]
    fn anticommuting_model_is_not_kahler() {
        let j = standard_complex_structure(4).unwrap();
        let r = build_model(1.0, Tau::Plus, &quaternion_j()).unwrap();
        let rep = validate_symmetries(&r, Some(&j)).unwrap();
        assert!(rep.kahler_residual.unwrap() > 0.1);
        assert!(matches!(classify_kahler(&r, &j, 1e-9), Err(Error::NotKahler(_))));
    }

    #[test]
    fn identity_residual_examples() {
        let j = standard_complex_structure(4).unwrap();
        let (one, _) = identity_residuals(1.0, 1.0, &quaternion_j(), &j, &e(4, 0), &e(4, 2)).unwrap();
        assert!(one > 0.1);
        let (one, two) = identity_residuals(1.0, 1.0, &case2_a(), &j, &e(4, 0), &e(4, 2)).unwrap();
        assert!(one < 1e-12 && two < 1e-12);
        assert!(identity_residuals(1.0, 1.0, &case2_a(), &j, &e(4, 0), &e(4, 0)).is_err());
    }

    #[test]
    fn relations_examples() {
        let j = standard_complex_structure(4).unwrap();
        let (a, b) = relations_residuals(1.0, 1.0, 2.0, 0.5, &e(4, 0), &e(4, 2), &j).unwrap();
        assert_eq!((a, b), (0.0, 0.0));
        let (a, b) = relations_residuals(1.0, 1.0, 2.0, 2.0, &e(4, 0), &e(4, 1), &j).unwrap();
        assert!(a.abs() < 1e-15 && b.abs() < 1e-15);
        let (a, _) = relations_residuals(1.0, 1.0, 3.0, 3.0, &e(4, 0), &e(4, 2), &j).unwrap();
        assert_eq!(a, 8.0);
    }

    #[test]
    fn einstein_examples() {
        let j = standard_complex_structure(6).unwrap();
        let r = &build_r1(6) + &build_ra(&j.as_skew());
        let (ok, c) = einstein_check(&r, 1e-9);
        assert!(ok);
        assert!((c - 8.0).abs() < 1e-12);
        let r = build_model(1.0, Tau::Plus, &case2_a()).unwrap();
        assert!(!einstein_check(&r, 1e-9).0);
        assert_eq!(einstein_check(&CurvatureTensor::zeros(4), 1e-9), (true, 0.0));
    }
}
