//! Algebraic curvature tensors and the functionals built from them.
//!
//! Components are stored densely as `R[i][j][k][l] = ⟨R(e_i, e_j) e_k, e_l⟩`
//! in row-major order, with no symmetry compression.

use std::ops::{Add, Mul, Neg, Sub};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{
    ensure_orthonormal, ensure_unit, ComplexStructure, Matrix, SkewEndomorphism, Subspace,
    Svd, SymmetricOperator, Vector, DEFAULT_TOL,
};

/// Orthonormality tolerance for vector pairs and frames.
const FRAME_TOL: f64 = 1e-10;

/// Normalized coefficient of the skew part of a model tensor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Tau {
    Minus,
    Zero,
    Plus,
}

impl Tau {
    pub fn value(self) -> f64 {
        match self {
            Tau::Minus => -1.0,
            Tau::Zero => 0.0,
            Tau::Plus => 1.0,
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Tau::Minus => -1,
            Tau::Zero => 0,
            Tau::Plus => 1,
        }
    }

    pub fn from_sign(x: f64) -> Self {
        if x > 0.0 {
            Tau::Plus
        } else if x < 0.0 {
            Tau::Minus
        } else {
            Tau::Zero
        }
    }
}

impl TryFrom<i64> for Tau {
    type Error = Error;

    fn try_from(v: i64) -> Result<Self> {
        match v {
            -1 => Ok(Tau::Minus),
            0 => Ok(Tau::Zero),
            1 => Ok(Tau::Plus),
            other => Err(Error::ConventionViolation(format!("tau must be -1, 0 or 1, got {other}"))),
        }
    }
}

/// A tensor `R: V³ → V` on `R^d`, stored as its `d⁴` components.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureTensor {
    dim: usize,
    components: Vec<f64>,
}

impl CurvatureTensor {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, components: vec![0.0; dim.pow(4)] }
    }

    /// Wraps raw components. Only the length is checked; use
    /// [`validate_symmetries`] for the curvature identities.
    pub fn from_components(dim: usize, components: Vec<f64>) -> Result<Self> {
        if components.len() != dim.pow(4) {
            return Err(Error::DimensionMismatch { expected: dim.pow(4), found: components.len() });
        }
        Ok(Self { dim, components })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn components(&self) -> &[f64] {
        &self.components
    }

    #[inline]
    fn idx(&self, i: usize, j: usize, k: usize, l: usize) -> usize {
        ((i * self.dim + j) * self.dim + k) * self.dim + l
    }

    /// `⟨R(e_i, e_j) e_k, e_l⟩`.
    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.components[self.idx(i, j, k, l)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, k: usize, l: usize, value: f64) {
        let n = self.idx(i, j, k, l);
        self.components[n] = value;
    }

    /// Largest absolute component.
    pub fn max_abs(&self) -> f64 {
        self.components.iter().fold(0.0f64, |a, x| a.max(x.abs()))
    }

    /// Euclidean norm of the component array.
    pub fn norm(&self) -> f64 {
        self.components.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// The vector `R(x, y) z`.
    pub fn apply(&self, x: &Vector, y: &Vector, z: &Vector) -> Vector {
        let d = self.dim;
        let mut out = Vector::zeros(d);
        for i in 0..d {
            if x[i] == 0.0 {
                continue;
            }
            for j in 0..d {
                let xy = x[i] * y[j];
                if xy == 0.0 {
                    continue;
                }
                for k in 0..d {
                    let xyz = xy * z[k];
                    if xyz == 0.0 {
                        continue;
                    }
                    let base = self.idx(i, j, k, 0);
                    for l in 0..d {
                        out[l] += xyz * self.components[base + l];
                    }
                }
            }
        }
        out
    }

    /// `⟨R(x, y) z, w⟩`.
    pub fn form(&self, x: &Vector, y: &Vector, z: &Vector, w: &Vector) -> f64 {
        self.apply(x, y, z).dot(w)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        assert_eq!(self.dim, other.dim, "tensor dimensions differ");
        let components = self.components.iter().zip(&other.components).map(|(a, b)| f(*a, *b)).collect();
        Self { dim: self.dim, components }
    }
}

impl Add for &CurvatureTensor {
    type Output = CurvatureTensor;
    fn add(self, rhs: &CurvatureTensor) -> CurvatureTensor {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &CurvatureTensor {
    type Output = CurvatureTensor;
    fn sub(self, rhs: &CurvatureTensor) -> CurvatureTensor {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Mul<f64> for &CurvatureTensor {
    type Output = CurvatureTensor;
    fn mul(self, c: f64) -> CurvatureTensor {
        CurvatureTensor { dim: self.dim, components: self.components.iter().map(|x| x * c).collect() }
    }
}

impl Neg for &CurvatureTensor {
    type Output = CurvatureTensor;
    fn neg(self) -> CurvatureTensor {
        self * -1.0
    }
}

/// Constant curvature one: `R₁(x,y)z = ⟨y,z⟩x − ⟨x,z⟩y`.
pub fn build_r1(d: usize) -> CurvatureTensor {
    let mut r = CurvatureTensor::zeros(d);
    for i in 0..d {
        for j in 0..d {
            if i == j {
                continue;
            }
            // δ_jk δ_il − δ_ik δ_jl
            r.set(i, j, j, i, 1.0);
            r.set(i, j, i, j, -1.0);
        }
    }
    r
}

/// `R_A(x,y)z = 2⟨x,Ay⟩Az + ⟨x,Az⟩Ay − ⟨y,Az⟩Ax`.
pub fn build_ra(a: &SkewEndomorphism) -> CurvatureTensor {
    let d = a.dim();
    let m = a.matrix();
    let mut r = CurvatureTensor::zeros(d);
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                for l in 0..d {
                    let v = 2.0 * m[(i, j)] * m[(l, k)] + m[(i, k)] * m[(l, j)] - m[(j, k)] * m[(l, i)];
                    r.set(i, j, k, l, v);
                }
            }
        }
    }
    r
}

/// `κR₁ + τR_A` with the normalization `τ = 0 ⇔ A = 0`.
pub fn build_model(kappa: f64, tau: Tau, a: &SkewEndomorphism) -> Result<CurvatureTensor> {
    match (tau, a.is_zero()) {
        (Tau::Zero, false) => {
            return Err(Error::ConventionViolation("tau = 0 requires A = 0".into()));
        }
        (Tau::Plus | Tau::Minus, true) => {
            return Err(Error::ConventionViolation("tau = ±1 requires A ≠ 0".into()));
        }
        _ => {}
    }
    let r1 = &build_r1(a.dim()) * kappa;
    if tau == Tau::Zero {
        return Ok(r1);
    }
    Ok(&r1 + &(&build_ra(a) * tau.value()))
}

/// Max-norm violations of the curvature identities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SymmetryReport {
    pub antisymmetry_residual: f64,
    pub pair_exchange_residual: f64,
    pub bianchi_residual: f64,
    pub kahler_residual: Option<f64>,
    /// Largest absolute component, the scale the residuals are judged against.
    pub scale: f64,
}

impl SymmetryReport {
    /// First curvature identity (not Kähler) whose residual exceeds
    /// `tol · max(1, scale)`.
    pub fn first_violation(&self, tol: f64) -> Option<(&'static str, f64)> {
        let bound = tol * self.scale.max(1.0);
        [
            ("antisymmetry", self.antisymmetry_residual),
            ("pair_exchange", self.pair_exchange_residual),
            ("bianchi", self.bianchi_residual),
        ]
        .into_iter()
        .find(|(_, r)| *r > bound)
    }

    pub fn is_kahler(&self, tol: f64) -> bool {
        self.kahler_residual.is_some_and(|r| r < tol * self.scale.max(1.0))
    }
}

pub fn validate_symmetries(r: &CurvatureTensor, j: Option<&ComplexStructure>) -> Result<SymmetryReport> {
    let d = r.dim();
    if let Some(j) = j {
        if j.dim() != d {
            return Err(Error::DimensionMismatch { expected: d, found: j.dim() });
        }
    }
    let mut anti = 0.0f64;
    let mut pair = 0.0f64;
    let mut bianchi = 0.0f64;
    for i in 0..d {
        for jj in 0..d {
            for k in 0..d {
                for l in 0..d {
                    let x = r.get(i, jj, k, l);
                    anti = anti.max((x + r.get(jj, i, k, l)).abs());
                    pair = pair.max((x - r.get(k, l, i, jj)).abs());
                    bianchi = bianchi.max((x + r.get(jj, k, i, l) + r.get(k, i, jj, l)).abs());
                }
            }
        }
    }
    let kahler_residual = j.map(|j| kahler_residual(r, j.matrix()));
    Ok(SymmetryReport {
        antisymmetry_residual: anti,
        pair_exchange_residual: pair,
        bianchi_residual: bianchi,
        kahler_residual,
        scale: r.max_abs(),
    })
}

/// `max |⟨R(e_i,e_j)e_k,e_l⟩ − ⟨R(Je_i,Je_j)e_k,e_l⟩|`.
fn kahler_residual(r: &CurvatureTensor, j: &Matrix) -> f64 {
    let d = r.dim();
    // First slot: T[i][b][k][l] = Σ_a J[a][i] R[a][b][k][l].
    let mut first = CurvatureTensor::zeros(d);
    for i in 0..d {
        for a in 0..d {
            let c = j[(a, i)];
            if c == 0.0 {
                continue;
            }
            for b in 0..d {
                for k in 0..d {
                    for l in 0..d {
                        let n = first.idx(i, b, k, l);
                        first.components[n] += c * r.get(a, b, k, l);
                    }
                }
            }
        }
    }
    let mut worst = 0.0f64;
    for i in 0..d {
        for jj in 0..d {
            for k in 0..d {
                for l in 0..d {
                    let mut t = 0.0;
                    for b in 0..d {
                        t += j[(b, jj)] * first.get(i, b, k, l);
                    }
                    worst = worst.max((r.get(i, jj, k, l) - t).abs());
                }
            }
        }
    }
    worst
}

/// The Jacobi operator `w ↦ R(w, v) v` as a full `d × d` matrix; `v` lies in
/// its kernel.
pub fn jacobi_operator(r: &CurvatureTensor, v: &Vector) -> Result<SymmetricOperator> {
    ensure_unit(v)?;
    Ok(jacobi_unchecked(r, v))
}

pub(crate) fn jacobi_unchecked(r: &CurvatureTensor, v: &Vector) -> SymmetricOperator {
    let d = r.dim();
    let mut m = Matrix::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            if v[j] == 0.0 {
                continue;
            }
            for k in 0..d {
                let c = v[j] * v[k];
                if c == 0.0 {
                    continue;
                }
                for l in 0..d {
                    m[(l, i)] += c * r.get(i, j, k, l);
                }
            }
        }
    }
    SymmetricOperator::symmetric_part(&m)
}

/// `sec(v, w) = ⟨R(v,w)w, v⟩` for an orthonormal pair.
pub fn sectional(r: &CurvatureTensor, v: &Vector, w: &Vector) -> Result<f64> {
    ensure_orthonormal(&[v, w], FRAME_TOL)?;
    Ok(r.form(v, w, w, v))
}

/// `Ric(v, w) = trace(x ↦ R(x, v) w)`, i.e. `Ric[i][j] = Σ_k R[k][i][j][k]`.
pub fn ricci(r: &CurvatureTensor) -> SymmetricOperator {
    let d = r.dim();
    let m = Matrix::from_fn(d, d, |i, j| (0..d).map(|k| r.get(k, i, j, k)).sum());
    SymmetricOperator::symmetric_part(&m)
}

/// `{v : R(w, v) = 0 for all w}` at the default tolerance.
pub fn nullity_space(r: &CurvatureTensor) -> Subspace {
    nullity_space_with_tol(r, DEFAULT_TOL)
}

/// Kernel of `v ↦ R(·, v)·`, from the SVD of the `d³ × d` matrix whose
/// column `j` lists `R[i][j][k][l]` over `(i, k, l)`.
pub fn nullity_space_with_tol(r: &CurvatureTensor, tol: f64) -> Subspace {
    let d = r.dim();
    let mut n = Matrix::zeros(d * d * d, d);
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                for l in 0..d {
                    n[((i * d + k) * d + l, j)] = r.get(i, j, k, l);
                }
            }
        }
    }
    let svd = Svd::new(&n);
    let cutoff = tol * svd.top().max(1.0);
    let kernel: Vec<Vector> =
        (0..d).filter(|&i| svd.sigma[i] <= cutoff).map(|i| svd.v.column(i).into_owned()).collect();
    Subspace::span(d, &kernel, 1e-6)
}

/// Sectional curvature of the holomorphic plane `span(v, Jv)`.
pub fn holomorphic_sectional(r: &CurvatureTensor, j: &ComplexStructure, v: &Vector) -> Result<f64> {
    ensure_unit(v)?;
    if j.dim() != r.dim() {
        return Err(Error::DimensionMismatch { expected: r.dim(), found: j.dim() });
    }
    let jv = j.apply(v);
    sectional(r, v, &jv)
}

/// Slack in Berger's mixed curvature inequality,
/// `(2/3)(k_max − k_min) − |⟨R(e₁,e₂)e₃, e₄⟩|`, for caller-supplied
/// sectional curvature bounds. Nonnegative means the inequality holds.
pub fn berger_check(r: &CurvatureTensor, frame: [&Vector; 4], kmin: f64, kmax: f64) -> Result<f64> {
    ensure_orthonormal(&frame, FRAME_TOL)?;
    let mixed = r.form(frame[0], frame[1], frame[2], frame[3]);
    Ok(2.0 * (kmax - kmin) / 3.0 - mixed.abs())
}

/// The mixed component `⟨R(e₁,e₂)e₃, e₄⟩` used by [`berger_check`].
pub fn mixed_component(r: &CurvatureTensor, frame: [&Vector; 4]) -> f64 {
    r.form(frame[0], frame[1], frame[2], frame[3])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{basis_vector, standard_complex_structure, unit_sphere_samples};

    fn e(d: usize, i: usize) -> Vector {
        basis_vector(d, i)
    }

    #[test]
    fn r1_components() {
        let r = build_r1(2);
        assert_eq!(r.get(0, 1, 1, 0), 1.0);
        let rep = validate_symmetries(&build_r1(4), None).unwrap();
        assert_eq!(rep.antisymmetry_residual, 0.0);
        assert_eq!(rep.pair_exchange_residual, 0.0);
        assert_eq!(rep.bianchi_residual, 0.0);
        assert!(rep.kahler_residual.is_none());
    }

    #[test]
    fn r1_jacobi_is_identity_on_complement() {
        for d in [2, 3, 5] {
            let r = build_r1(d);
            for v in unit_sphere_samples(d, 10, 4) {
                let jac = jacobi_operator(&r, &v).unwrap();
                let want = Matrix::identity(d, d) - &v * v.transpose();
                assert!((jac.matrix() - want).amax() < 1e-14);
            }
        }
    }

    #[test]
    fn ra_with_j() {
        let j = standard_complex_structure(4).unwrap();
        let rj = build_ra(&j.as_skew());
        assert_eq!(rj.get(0, 1, 1, 0), 3.0);
        assert_eq!(rj.get(0, 2, 2, 0), 0.0);
        assert_eq!(build_ra(&SkewEndomorphism::zero(4)), CurvatureTensor::zeros(4));
    }

    #[test]
    fn model_convention() {
        let j = standard_complex_structure(4).unwrap().as_skew();
        assert!(matches!(build_model(2.0, Tau::Zero, &j), Err(Error::ConventionViolation(_))));
        assert!(matches!(
            build_model(2.0, Tau::Plus, &SkewEndomorphism::zero(4)),
            Err(Error::ConventionViolation(_))
        ));
        let r = build_model(1.0, Tau::Zero, &SkewEndomorphism::zero(4)).unwrap();
        assert_eq!(r, build_r1(4));
    }

    #[test]
    fn holomorphic_curvature_of_complex_space_form() {
        let j = standard_complex_structure(4).unwrap();
        let r = build_model(1.0, Tau::Plus, &j.as_skew()).unwrap();
        assert!((sectional(&r, &e(4, 0), &e(4, 1)).unwrap() - 4.0).abs() < 1e-14);
        assert!((holomorphic_sectional(&r, &j, &e(4, 2)).unwrap() - 4.0).abs() < 1e-14);
        assert_eq!(holomorphic_sectional(&CurvatureTensor::zeros(4), &j, &e(4, 0)).unwrap(), 0.0);
    }

    #[test]
    fn perturbation_breaks_antisymmetry() {
        let mut r = build_r1(4);
        r.set(0, 1, 2, 3, 1e-3);
        let rep = validate_symmetries(&r, None).unwrap();
        assert!(rep.antisymmetry_residual >= 1e-3);
        assert_eq!(rep.first_violation(1e-10).map(|v| v.0), Some("antisymmetry"));
    }

    #[test]
    fn kahler_dimension_mismatch() {
        let j = standard_complex_structure(6).unwrap();
        assert!(matches!(
            validate_symmetries(&build_r1(4), Some(&j)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn unit_and_orthonormal_checks() {
        let r = build_r1(3);
        let v = Vector::from_row_slice(&[1.0, 1.0, 0.0]);
        assert!(matches!(jacobi_operator(&r, &v), Err(Error::NotUnit(_))));
        assert!(matches!(sectional(&r, &e(3, 0), &e(3, 0)), Err(Error::NotOrthonormal(_))));
    }

    #[test]
    fn ricci_and_nullity_of_r1() {
        let ric = ricci(&build_r1(4));
        assert!((ric.matrix() - Matrix::identity(4, 4) * 3.0).amax() < 1e-15);
        assert_eq!(nullity_space(&build_r1(4)).dim(), 0);
        assert_eq!(nullity_space(&CurvatureTensor::zeros(4)).dim(), 4);
        assert_eq!(ricci(&CurvatureTensor::zeros(3)).matrix(), &Matrix::zeros(3, 3));
    }

    #[test]
    fn berger_for_r1() {
        let r = build_r1(4);
        let f: Vec<Vector> = (0..4).map(|i| e(4, i)).collect();
        let slack = berger_check(&r, [&f[0], &f[1], &f[2], &f[3]], 1.0, 1.0).unwrap();
        assert_eq!(slack, 0.0);
        assert!(berger_check(&r, [&f[0], &f[0], &f[2], &f[3]], 1.0, 1.0).is_err());
    }

    #[test]
    fn tau_conversions() {
        assert_eq!(Tau::try_from(-1).unwrap(), Tau::Minus);
        assert!(Tau::try_from(2).is_err());
        assert_eq!(Tau::from_sign(-3.0), Tau::Minus);
    }
}
