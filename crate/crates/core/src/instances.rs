//! Seeded generators for model tensors and the Kähler normal forms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::kahler::KahlerClass;
use crate::linalg::{
    projector, random_matrix, random_unit, standard_complex_structure, ComplexStructure, Matrix, SkewEndomorphism,
    Subspace, Vector,
};
use crate::tensor::{build_model, CurvatureTensor, Tau};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `span(v, Jv)` for a nonzero `v`.
pub fn holomorphic_plane(j: &ComplexStructure, v: &Vector) -> Subspace {
    let v = v.normalize();
    let jv = j.apply(&v);
    Subspace::new(j.dim(), vec![v, jv]).expect("v ⊥ Jv for orthogonal J")
}

pub fn random_holomorphic_plane(j: &ComplexStructure, rng: &mut ChaCha8Rng) -> Subspace {
    holomorphic_plane(j, &random_unit(j.dim(), rng))
}

/// `J∘π^W`.
pub fn j_on(j: &ComplexStructure, w: &Subspace) -> Result<SkewEndomorphism> {
    SkewEndomorphism::new(j.matrix() * projector(w).into_matrix())
}

/// `J∘(μ₁π^{W₁} + μ₂π^{W₂})` with `W₂ = W₁⊥` (dimension 4).
pub fn case2_operator(j: &ComplexStructure, mu1: f64, mu2: f64, w1: &Subspace) -> Result<SkewEndomorphism> {
    let p1 = projector(w1).into_matrix();
    let p2 = Matrix::identity(j.dim(), j.dim()) - &p1;
    SkewEndomorphism::new(j.matrix() * (p1 * mu1 + p2 * mu2))
}

/// The standard `J` scaled by `μ_k` on the complex line `span(e_{2k}, e_{2k+1})`.
pub fn block_j(mus: &[f64]) -> Result<SkewEndomorphism> {
    let d = 2 * mus.len();
    let j = standard_complex_structure(d)?;
    let mut scale = Matrix::zeros(d, d);
    for (k, mu) in mus.iter().enumerate() {
        scale[(2 * k, 2 * k)] = *mu;
        scale[(2 * k + 1, 2 * k + 1)] = *mu;
    }
    SkewEndomorphism::new(j.matrix() * scale)
}

/// `Ae₁ = e₃`, `Ae₂ = −e₄`, `Ae₃ = −e₁`, `Ae₄ = e₂`: a complex structure
/// on `R⁴` anticommuting with the standard one.
pub fn quaternion_j() -> SkewEndomorphism {
    let mut m = Matrix::zeros(4, 4);
    m[(2, 0)] = 1.0;
    m[(3, 1)] = -1.0;
    m[(0, 2)] = -1.0;
    m[(1, 3)] = 1.0;
    SkewEndomorphism::new(m).expect("skew by construction")
}

/// Random orthogonal matrix from the QR factorization of a Gaussian matrix.
pub fn random_orthogonal(d: usize, rng: &mut ChaCha8Rng) -> Matrix {
    let qr = random_matrix(d, d, rng).qr();
    let (q, r) = (qr.q(), qr.r());
    let mut q = q;
    for i in 0..d {
        if r[(i, i)] < 0.0 {
            let col = -q.column(i);
            q.set_column(i, &col);
        }
    }
    q
}

/// Block-diagonal skew map with one `2×2` block per coordinate pair and
/// distinct block weights. Column-sign relations never link two blocks.
pub fn block_disjoint_skew(d: usize, rng: &mut ChaCha8Rng) -> SkewEndomorphism {
    let mut m = Matrix::zeros(d, d);
    for k in 0..d / 2 {
        let w = rng.random_range(0.5..2.0) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        m[(2 * k + 1, 2 * k)] = w;
        m[(2 * k, 2 * k + 1)] = -w;
    }
    SkewEndomorphism::new(m).expect("skew by construction")
}

/// Random skew map whose kernel has dimension at least two.
pub fn kernel_skew(d: usize, rng: &mut ChaCha8Rng) -> SkewEndomorphism {
    let q = random_orthogonal(d, rng);
    let mut m = Matrix::zeros(d, d);
    for k in 0..d.saturating_sub(2) / 2 {
        let w = rng.random_range(0.5..2.0);
        m[(2 * k + 1, 2 * k)] = w;
        m[(2 * k, 2 * k + 1)] = -w;
    }
    SkewEndomorphism::skew_part(&(&q * m * q.transpose()))
}

/// A random `(κ, τ, A)` triple with `κ ∈ [−2, 2]` and `τ ∈ {−1, 0, 1}`.
#[derive(Debug, Clone)]
pub struct ModelInstance {
    pub kappa: f64,
    pub tau: Tau,
    pub a: SkewEndomorphism,
    pub r: CurvatureTensor,
}

impl ModelInstance {
    pub fn new(kappa: f64, tau: Tau, a: SkewEndomorphism) -> Result<Self> {
        let r = build_model(kappa, tau, &a)?;
        Ok(Self { kappa, tau, a, r })
    }
}

/// Which family of skew maps [`random_model`] draws from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SkewKind {
    Gaussian,
    BlockDisjoint,
    WithKernel,
}

pub fn random_model(d: usize, kind: SkewKind, allow_zero_tau: bool, rng: &mut ChaCha8Rng) -> ModelInstance {
    let kappa = rng.random_range(-2.0..2.0);
    let tau = match rng.random_range(0..if allow_zero_tau { 3 } else { 2 }) {
        0 => Tau::Minus,
        1 => Tau::Plus,
        _ => Tau::Zero,
    };
    let a = match tau {
        Tau::Zero => SkewEndomorphism::zero(d),
        _ => match kind {
            SkewKind::Gaussian => {
                let m = random_matrix(d, d, rng);
                SkewEndomorphism::skew_part(&(&m - m.transpose()))
            }
            SkewKind::BlockDisjoint => block_disjoint_skew(d, rng),
            SkewKind::WithKernel if d >= 4 => kernel_skew(d, rng),
            SkewKind::WithKernel => block_disjoint_skew(d, rng),
        },
    };
    ModelInstance::new(kappa, tau, a).expect("tau and A chosen consistently")
}

/// A Kähler tensor together with the class it was built from.
#[derive(Debug, Clone)]
pub struct KahlerInstance {
    pub j: ComplexStructure,
    pub model: ModelInstance,
    pub expected: KahlerClass,
}

fn nonzero(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    let x = rng.random_range(lo..hi);
    if rng.random_bool(0.5) {
        x
    } else {
        -x
    }
}

/// `κ(R₁ + R_J)` with `|κ| ∈ [0.5, 2]`.
pub fn case3_instance(d: usize, rng: &mut ChaCha8Rng) -> Result<KahlerInstance> {
    let j = standard_complex_structure(d)?;
    let kappa = nonzero(rng, 0.5, 2.0);
    // κR_J = τR_{√|κ|J}
    let a = j.as_skew().scaled(kappa.abs().sqrt());
    let model = ModelInstance::new(kappa, Tau::from_sign(kappa), a)?;
    Ok(KahlerInstance { j, model, expected: KahlerClass::Case3 { kappa } })
}

/// `d = 4`, random holomorphic `W₁`, random `μ₁`, and `μ₂ = κ/(τμ₁)`.
pub fn case2_instance(rng: &mut ChaCha8Rng) -> Result<KahlerInstance> {
    let j = standard_complex_structure(4)?;
    let tau = if rng.random_bool(0.5) { Tau::Plus } else { Tau::Minus };
    let kappa = nonzero(rng, 0.5, 2.0);
    let (mu1, mu2) = loop {
        let mu1 = rng.random_range(0.5f64..2.5);
        let mu2 = kappa / (tau.value() * mu1);
        if (mu1 - mu2).abs() > 0.1 && (mu1 + mu2).abs() > 0.1 {
            break (mu1, mu2);
        }
    };
    let w1 = random_holomorphic_plane(&j, rng);
    let w2 = w1.complement();
    let a = case2_operator(&j, mu1, mu2, &w1)?;
    let model = ModelInstance::new(kappa, tau, a)?;
    let expected = canonical_case2(kappa, tau, mu1, mu2, w1, w2);
    Ok(KahlerInstance { j, model, expected })
}

/// Orders a `(μ, W)` pair the way the classifier reports it: the entry of
/// larger magnitude positive, then `μ₁ ≥ μ₂`.
pub fn canonical_case2(kappa: f64, tau: Tau, mu1: f64, mu2: f64, w1: Subspace, w2: Subspace) -> KahlerClass {
    let (mut mu1, mut mu2, mut w1, mut w2) = (mu1, mu2, w1, w2);
    let lead = if mu1.abs() >= mu2.abs() { mu1 } else { mu2 };
    if lead < 0.0 {
        mu1 = -mu1;
        mu2 = -mu2;
    }
    if mu2 > mu1 {
        std::mem::swap(&mut mu1, &mut mu2);
        std::mem::swap(&mut w1, &mut w2);
    }
    KahlerClass::Case2 { kappa, tau, mu1, mu2, w1, w2 }
}

/// `c R_{J∘π^W}` with `|c| ∈ [0.25, 4]` and a random holomorphic plane `W`.
pub fn case4_instance(d: usize, rng: &mut ChaCha8Rng) -> Result<KahlerInstance> {
    let j = standard_complex_structure(d)?;
    if d < 4 {
        return Err(Error::DimensionTooSmall(d, 4));
    }
    let c = nonzero(rng, 0.25, 4.0);
    let w = random_holomorphic_plane(&j, rng);
    let a = j_on(&j, &w)?.scaled(c.abs().sqrt());
    let model = ModelInstance::new(0.0, Tau::from_sign(c), a)?;
    Ok(KahlerInstance { j, model, expected: KahlerClass::Case4 { c, w } })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::spectral_norm;

    #[test]
    fn orthogonal_and_kernel() {
        let mut g = rng(3);
        let q = random_orthogonal(5, &mut g);
        assert!((q.transpose() * &q - Matrix::identity(5, 5)).amax() < 1e-12);
        let a = kernel_skew(6, &mut g);
        assert_eq!(a.kernel(1e-10).dim(), 2);
    }

    #[test]
    fn block_j_and_quaternion() {
        let a = block_j(&[2.0, 0.5]).unwrap();
        assert_eq!(a.matrix()[(1, 0)], 2.0);
        assert_eq!(a.matrix()[(3, 2)], 0.5);
        let q = quaternion_j();
        assert!((q.matrix() * q.matrix() + Matrix::identity(4, 4)).amax() < 1e-15);
    }

    #[test]
    fn case2_parameters_multiply_to_ratio() {
        let mut g = rng(9);
        for _ in 0..10 {
            let inst = case2_instance(&mut g).unwrap();
            if let KahlerClass::Case2 { kappa, tau, mu1, mu2, .. } = inst.expected {
                assert!((mu1 * mu2 - kappa / tau.value()).abs() < 1e-12);
                assert!(mu1 >= mu2);
            } else {
                panic!("wrong case");
            }
            assert!(spectral_norm(&(inst.model.a.matrix() * inst.j.matrix() - inst.j.matrix() * inst.model.a.matrix())) < 1e-12);
        }
    }
}
