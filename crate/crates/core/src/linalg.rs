//! Dense real linear algebra on a fixed orthonormal basis.
//!
//! Everything here works with the standard dot product on `R^d`. The types
//! wrap `nalgebra` matrices and enforce the structural invariant they are
//! named after (skew, symmetric, orthonormal, complex structure) at
//! construction time.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};

pub type Vector = DVector<f64>;
pub type Matrix = DMatrix<f64>;

/// Relative tolerance used when a caller does not supply one.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Allowed deviation of `‖v‖` from 1 for vectors that must be unit.
pub const UNIT_TOL: f64 = 1e-12;

const STRUCTURE_TOL: f64 = 1e-12;
const GRAM_TOL: f64 = 1e-10;

/// The `i`-th standard basis vector of `R^d`.
pub fn basis_vector(d: usize, i: usize) -> Vector {
    let mut v = Vector::zeros(d);
    v[i] = 1.0;
    v
}

pub fn ensure_unit(v: &Vector) -> Result<()> {
    let n = v.norm();
    if (n - 1.0).abs() > UNIT_TOL {
        return Err(Error::NotUnit(n));
    }
    Ok(())
}

/// Checks that `vectors` are mutually orthonormal within `tol`.
pub fn ensure_orthonormal(vectors: &[&Vector], tol: f64) -> Result<()> {
    let dev = gram_deviation(vectors);
    if dev > tol {
        return Err(Error::NotOrthonormal(dev));
    }
    Ok(())
}

fn gram_deviation(vectors: &[&Vector]) -> f64 {
    let mut dev = 0.0f64;
    for (i, a) in vectors.iter().enumerate() {
        for (j, b) in vectors.iter().enumerate() {
            let target = if i == j { 1.0 } else { 0.0 };
            dev = dev.max((a.dot(b) - target).abs());
        }
    }
    dev
}

fn max_abs(m: &Matrix) -> f64 {
    m.iter().fold(0.0f64, |acc, x| acc.max(x.abs()))
}

/// Largest singular value.
pub fn spectral_norm(m: &Matrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    Svd::new(m).sigma.first().copied().unwrap_or(0.0)
}

/// Thin singular value decomposition `M V = U diag(σ)` by one-sided Jacobi
/// rotations, with `σ` in descending order.
///
/// Used instead of the Golub–Kahan routine in nalgebra, which returns
/// inaccurate factors for some rank-deficient inputs (repeated columns).
/// Columns of `u` belonging to a zero singular value are zero.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: Matrix,
    pub sigma: Vec<f64>,
    pub v: Matrix,
}

impl Svd {
    pub fn new(m: &Matrix) -> Self {
        let (rows, n) = m.shape();
        let mut a = m.clone();
        let mut v = Matrix::identity(n, n);
        for _ in 0..80 {
            let mut rotated = false;
            for p in 0..n {
                for q in p + 1..n {
                    let alpha = a.column(p).norm_squared();
                    let beta = a.column(q).norm_squared();
                    let gamma = a.column(p).dot(&a.column(q));
                    if gamma == 0.0 || gamma.abs() <= f64::EPSILON * (alpha * beta).sqrt() {
                        continue;
                    }
                    rotated = true;
                    let zeta = (beta - alpha) / (2.0 * gamma);
                    let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = c * t;
                    rotate(&mut a, p, q, c, s);
                    rotate(&mut v, p, q, c, s);
                }
            }
            if !rotated {
                break;
            }
        }
        let mut order: Vec<(f64, usize)> = (0..n).map(|j| (a.column(j).norm(), j)).collect();
        order.sort_by(|x, y| y.0.total_cmp(&x.0).then(x.1.cmp(&y.1)));
        let mut u = Matrix::zeros(rows, n);
        let mut vs = Matrix::zeros(n, n);
        let mut sigma = Vec::with_capacity(n);
        for (dst, (norm, src)) in order.into_iter().enumerate() {
            if norm > 0.0 {
                u.set_column(dst, &(a.column(src) / norm));
            }
            vs.set_column(dst, &v.column(src));
            sigma.push(norm);
        }
        Self { u, sigma, v: vs }
    }

    pub fn top(&self) -> f64 {
        self.sigma.first().copied().unwrap_or(0.0)
    }
}

fn rotate(m: &mut Matrix, p: usize, q: usize, c: f64, s: f64) {
    for i in 0..m.nrows() {
        let (x, y) = (m[(i, p)], m[(i, q)]);
        m[(i, p)] = c * x - s * y;
        m[(i, q)] = s * x + c * y;
    }
}

/// A linear subspace of `R^d` carried by an orthonormal basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vector>,
}

impl Subspace {
    /// Wraps an orthonormal basis. The Gram matrix must be the identity
    /// within `1e-10`.
    pub fn new(ambient: usize, basis: Vec<Vector>) -> Result<Self> {
        for b in &basis {
            if b.len() != ambient {
                return Err(Error::DimensionMismatch { expected: ambient, found: b.len() });
            }
        }
        let refs: Vec<&Vector> = basis.iter().collect();
        let dev = gram_deviation(&refs);
        if dev > GRAM_TOL {
            return Err(Error::NonOrthonormalBasis(dev));
        }
        Ok(Self { ambient, basis })
    }

    pub fn zero(ambient: usize) -> Self {
        Self { ambient, basis: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        Self { ambient, basis: (0..ambient).map(|i| basis_vector(ambient, i)).collect() }
    }

    /// Orthonormalizes an arbitrary spanning set. Directions whose weight
    /// in the spanning set falls below `tol` (relative) are dropped.
    pub fn span(ambient: usize, vectors: &[Vector], tol: f64) -> Self {
        if vectors.is_empty() {
            return Self::zero(ambient);
        }
        let mut m = Matrix::zeros(ambient, vectors.len());
        for (j, v) in vectors.iter().enumerate() {
            m.set_column(j, v);
        }
        let svd = Svd::new(&m);
        let top = svd.top();
        if top <= 0.0 {
            return Self::zero(ambient);
        }
        let picked: Vec<Vector> = (0..svd.sigma.len())
            .filter(|&i| svd.sigma[i] > tol * top)
            .map(|i| svd.u.column(i).into_owned())
            .collect();
        Self { ambient, basis: picked }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    /// Basis vectors as the columns of a `d × k` matrix.
    pub fn basis_matrix(&self) -> Matrix {
        let mut m = Matrix::zeros(self.ambient, self.basis.len());
        for (j, b) in self.basis.iter().enumerate() {
            m.set_column(j, b);
        }
        m
    }

    pub fn projector(&self) -> SymmetricOperator {
        projector(self)
    }

    /// The orthogonal complement in `R^d`.
    pub fn complement(&self) -> Subspace {
        let p = Matrix::identity(self.ambient, self.ambient) - projector(self).0;
        let spec = symmetric_spectrum(&SymmetricOperator(p));
        let basis = spec
            .values
            .iter()
            .zip(spec.vectors)
            .filter(|(val, _)| **val > 0.5)
            .map(|(_, v)| v)
            .collect();
        Subspace { ambient: self.ambient, basis }
    }

    /// Intersection with `other`, computed as the complement of the sum of
    /// complements.
    pub fn intersection(&self, other: &Subspace, tol: f64) -> Subspace {
        let mut vecs: Vec<Vector> = self.complement().basis;
        vecs.extend(other.complement().basis);
        Subspace::span(self.ambient, &vecs, tol).complement()
    }

    /// Direct sum (span of both bases).
    pub fn sum(&self, other: &Subspace, tol: f64) -> Subspace {
        let mut vecs = self.basis.clone();
        vecs.extend(other.basis.iter().cloned());
        Subspace::span(self.ambient, &vecs, tol)
    }

    /// Distance of `v` from the subspace.
    pub fn distance(&self, v: &Vector) -> f64 {
        let mut r = v.clone();
        for b in &self.basis {
            r -= b * b.dot(v);
        }
        r.norm()
    }

    pub fn contains(&self, v: &Vector, tol: f64) -> bool {
        self.distance(v) <= tol * v.norm().max(1.0)
    }

    /// Largest principal angle between two subspaces; `π/2` when the
    /// dimensions differ.
    ///
    /// Computed from the sine, `‖(I − P_self) Q_other‖₂`, which stays
    /// accurate for nearly equal subspaces.
    pub fn max_principal_angle(&self, other: &Subspace) -> f64 {
        if self.dim() != other.dim() {
            return std::f64::consts::FRAC_PI_2;
        }
        if self.dim() == 0 {
            return 0.0;
        }
        let q = other.basis_matrix();
        let residual = &q - projector(self).0 * &q;
        spectral_norm(&residual).min(1.0).asin()
    }

    /// Tests `‖(I − P) M P‖ < tol`, i.e. whether `m` maps the subspace
    /// into itself.
    pub fn invariance_defect(&self, m: &Matrix) -> f64 {
        let p = projector(self).0;
        let id = Matrix::identity(self.ambient, self.ambient);
        spectral_norm(&((id - &p) * m * &p))
    }
}

/// Orthogonal projection onto `w`: `Σ b bᵀ` over the basis.
pub fn projector(w: &Subspace) -> SymmetricOperator {
    let mut p = Matrix::zeros(w.ambient, w.ambient);
    for b in &w.basis {
        p += b * b.transpose();
    }
    SymmetricOperator(p)
}

/// A skew-symmetric endomorphism `A` (`Aᵀ = −A`).
#[derive(Debug, Clone, PartialEq)]
pub struct SkewEndomorphism(Matrix);

impl SkewEndomorphism {
    pub fn new(matrix: Matrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch { expected: matrix.nrows(), found: matrix.ncols() });
        }
        let res = max_abs(&(&matrix + matrix.transpose()));
        if res > STRUCTURE_TOL * max_abs(&matrix).max(1.0) {
            return Err(Error::NotSkew(res));
        }
        Ok(Self(matrix))
    }

    /// `(M − Mᵀ)/2`, exactly skew.
    pub fn skew_part(matrix: &Matrix) -> Self {
        Self((matrix - matrix.transpose()) * 0.5)
    }

    pub fn zero(d: usize) -> Self {
        Self(Matrix::zeros(d, d))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }

    pub fn apply(&self, v: &Vector) -> Vector {
        &self.0 * v
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self(&self.0 * c)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn spectral_norm(&self) -> f64 {
        spectral_norm(&self.0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|x| *x == 0.0)
    }

    /// `A²`, symmetric negative semidefinite.
    pub fn square(&self) -> SymmetricOperator {
        let sq = &self.0 * &self.0;
        SymmetricOperator((&sq + sq.transpose()) * 0.5)
    }

    /// Flips the sign so that the first entry (row-major) whose magnitude
    /// exceeds `rel` times the largest entry is positive.
    pub fn canonical_sign(self, rel: f64) -> Self {
        let m = max_abs(&self.0);
        let d = self.dim();
        for i in 0..d {
            for j in 0..d {
                let x = self.0[(i, j)];
                if x.abs() > rel * m {
                    return if x < 0.0 { Self(-self.0) } else { self };
                }
            }
        }
        self
    }

    /// Kernel of `A` at relative tolerance `tol`.
    pub fn kernel(&self, tol: f64) -> Subspace {
        let d = self.dim();
        let svd = Svd::new(&self.0);
        let top = svd.top();
        let basis = (0..d).filter(|&i| svd.sigma[i] <= tol * top).map(|i| svd.v.column(i).into_owned()).collect();
        Subspace { ambient: d, basis }
    }
}

/// An orthogonal almost complex structure `J` (`JᵀJ = I`, `J² = −I`).
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexStructure(Matrix);

impl ComplexStructure {
    pub fn new(matrix: Matrix) -> Result<Self> {
        let d = matrix.nrows();
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch { expected: d, found: matrix.ncols() });
        }
        if d % 2 == 1 {
            return Err(Error::OddDimension(d));
        }
        let id = Matrix::identity(d, d);
        let orth = max_abs(&(matrix.transpose() * &matrix - &id));
        if orth > STRUCTURE_TOL {
            return Err(Error::NotComplexStructure(format!("JᵀJ deviates from I by {orth:e}")));
        }
        let sq = max_abs(&(&matrix * &matrix + &id));
        if sq > STRUCTURE_TOL {
            return Err(Error::NotComplexStructure(format!("J² deviates from −I by {sq:e}")));
        }
        Ok(Self(matrix))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn apply(&self, v: &Vector) -> Vector {
        &self.0 * v
    }

    /// `J` is itself skew; this returns it as a [`SkewEndomorphism`].
    pub fn as_skew(&self) -> SkewEndomorphism {
        SkewEndomorphism(self.0.clone())
    }
}

/// `J e_{2k−1} = e_{2k}`, `J e_{2k} = −e_{2k−1}` (one-based indices).
pub fn standard_complex_structure(d: usize) -> Result<ComplexStructure> {
    if d % 2 == 1 {
        return Err(Error::OddDimension(d));
    }
    if d < 2 {
        return Err(Error::DimensionTooSmall(d, 2));
    }
    let mut j = Matrix::zeros(d, d);
    for k in 0..d / 2 {
        j[(2 * k + 1, 2 * k)] = 1.0;
        j[(2 * k, 2 * k + 1)] = -1.0;
    }
    Ok(ComplexStructure(j))
}

/// A self-adjoint endomorphism.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricOperator(pub(crate) Matrix);

impl SymmetricOperator {
    pub fn new(matrix: Matrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch { expected: matrix.nrows(), found: matrix.ncols() });
        }
        let res = max_abs(&(&matrix - matrix.transpose()));
        if res > STRUCTURE_TOL * max_abs(&matrix).max(1.0) {
            return Err(Error::NotSymmetric(res));
        }
        Ok(Self(matrix))
    }

    /// `(M + Mᵀ)/2`.
    pub fn symmetric_part(matrix: &Matrix) -> Self {
        Self((matrix + matrix.transpose()) * 0.5)
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }

    pub fn apply(&self, v: &Vector) -> Vector {
        &self.0 * v
    }

    pub fn quadratic_form(&self, v: &Vector) -> f64 {
        v.dot(&(&self.0 * v))
    }

    pub fn trace(&self) -> f64 {
        self.0.trace()
    }

    pub fn spectrum(&self) -> Spectrum {
        symmetric_spectrum(self)
    }

    /// Matrix of the compression `Qᵀ S Q` onto a subspace with orthonormal
    /// basis `Q`.
    pub fn compress(&self, w: &Subspace) -> SymmetricOperator {
        let q = w.basis_matrix();
        SymmetricOperator::symmetric_part(&(q.transpose() * &self.0 * q))
    }
}

/// Ascending eigenvalues with matching orthonormal eigenvectors.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub values: Vec<f64>,
    pub vectors: Vec<Vector>,
}

impl Spectrum {
    /// `Σ λᵢ uᵢuᵢᵀ`.
    pub fn reassemble(&self) -> Matrix {
        let d = self.vectors.first().map_or(0, |v| v.len());
        let mut m = Matrix::zeros(d, d);
        for (val, v) in self.values.iter().zip(&self.vectors) {
            m += v * v.transpose() * *val;
        }
        m
    }

    /// Eigenvector matrix with the eigenvectors as columns.
    pub fn vector_matrix(&self) -> Matrix {
        let d = self.vectors.first().map_or(0, |v| v.len());
        let mut m = Matrix::zeros(d, self.vectors.len());
        for (j, v) in self.vectors.iter().enumerate() {
            m.set_column(j, v);
        }
        m
    }
}

/// Eigen-decomposition of a symmetric operator.
///
/// Eigenvalues come out ascending; each eigenvector has its first nonzero
/// coordinate positive, so identical input always yields identical output.
pub fn symmetric_spectrum(s: &SymmetricOperator) -> Spectrum {
    let d = s.dim();
    if d == 0 {
        return Spectrum { values: Vec::new(), vectors: Vec::new() };
    }
    let eig = nalgebra::SymmetricEigen::new(s.0.clone());
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = order
        .iter()
        .map(|&i| {
            let v: Vector = eig.eigenvectors.column(i).into_owned();
            let lead = v.iter().find(|x| x.abs() > 1e-12).copied().unwrap_or(1.0);
            if lead < 0.0 {
                -v
            } else {
                v
            }
        })
        .collect();
    Spectrum { values, vectors }
}

/// Number of singular values above `tol · max(1, σ_max)`.
pub fn rank_with_tol(m: &Matrix, tol: f64) -> Result<usize> {
    if !(tol > 0.0) {
        return Err(Error::NonPositiveTolerance(tol));
    }
    if m.is_empty() {
        return Ok(0);
    }
    let svd = Svd::new(m);
    let cutoff = tol * svd.top().max(1.0);
    Ok(svd.sigma.iter().filter(|x| **x > cutoff).count())
}

/// Deterministic unit vectors on `S^{d−1}`.
///
/// When `n ≥ d` the first `d` entries are `e_1, …, e_d`; the remainder are
/// normalized Gaussian draws from a ChaCha8 stream seeded with `seed`.
pub fn unit_sphere_samples(d: usize, n: usize, seed: u64) -> Vec<Vector> {
    let mut out = Vec::with_capacity(n);
    if n >= d {
        out.extend((0..d).map(|i| basis_vector(d, i)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while out.len() < n {
        out.push(random_unit(d, &mut rng));
    }
    out
}

pub(crate) fn random_unit(d: usize, rng: &mut ChaCha8Rng) -> Vector {
    loop {
        let v = Vector::from_fn(d, |_, _| StandardNormal.sample(rng));
        let n = v.norm();
        if n > 1e-6 {
            return v / n;
        }
    }
}

pub(crate) fn random_matrix(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| StandardNormal.sample(rng))
}

/// `M − Mᵀ` for a Gaussian `M` drawn from a seeded stream.
pub fn random_skew(d: usize, seed: u64) -> SkewEndomorphism {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = random_matrix(d, d, &mut rng);
    SkewEndomorphism(&m - m.transpose())
}

/// A unit vector orthogonal to `s`, drawn from a seeded stream.
pub(crate) fn random_unit_orthogonal(s: &Vector, rng: &mut ChaCha8Rng) -> Vector {
    loop {
        let v = random_unit(s.len(), rng);
        let w = &v - s * s.dot(&v);
        let n = w.norm();
        if n > 1e-3 {
            return w / n;
        }
    }
}
