//! Direct evaluations of the model tensors as vector-valued functions,
//! independent of the component arrays built by the library.
#![allow(dead_code)]

use curvlab::linalg::{Matrix, Vector};

/// `⟨y,z⟩x − ⟨x,z⟩y`
pub fn r1_apply(x: &Vector, y: &Vector, z: &Vector) -> Vector {
    x * y.dot(z) - y * x.dot(z)
}

/// `2⟨x,Ay⟩Az + ⟨x,Az⟩Ay − ⟨y,Az⟩Ax`
pub fn ra_apply(a: &Matrix, x: &Vector, y: &Vector, z: &Vector) -> Vector {
    let (ax, ay, az) = (a * x, a * y, a * z);
    &az * (2.0 * x.dot(&ay)) + &ay * x.dot(&az) - &ax * y.dot(&az)
}

pub fn model_apply(kappa: f64, tau: f64, a: &Matrix, x: &Vector, y: &Vector, z: &Vector) -> Vector {
    r1_apply(x, y, z) * kappa + ra_apply(a, x, y, z) * tau
}

/// `R(w, s)s` from the vector formula.
pub fn jacobi_oracle(kappa: f64, tau: f64, a: &Matrix, s: &Vector, w: &Vector) -> Vector {
    model_apply(kappa, tau, a, w, s, s)
}

/// `Σ_k ⟨R(e_k, x)y, e_k⟩`, the Ricci form, from the vector formula.
pub fn ricci_oracle(kappa: f64, tau: f64, a: &Matrix, x: &Vector, y: &Vector) -> f64 {
    let d = x.len();
    (0..d)
        .map(|k| {
            let e = Vector::from_fn(d, |i, _| if i == k { 1.0 } else { 0.0 });
            model_apply(kappa, tau, a, &e, x, y).dot(&e)
        })
        .sum()
}

/// Sectional curvature `⟨R(x,y)y, x⟩` of an orthonormal pair.
pub fn sectional_oracle(kappa: f64, tau: f64, a: &Matrix, x: &Vector, y: &Vector) -> f64 {
    model_apply(kappa, tau, a, x, y, y).dot(x)
}

pub fn e(d: usize, i: usize) -> Vector {
    Vector::from_fn(d, |k, _| if k == i { 1.0 } else { 0.0 })
}

/// Standard complex structure: `J e_{2k} = e_{2k+1}`.
pub fn std_j(d: usize) -> Matrix {
    let mut j = Matrix::zeros(d, d);
    for k in 0..d / 2 {
        j[(2 * k + 1, 2 * k)] = 1.0;
        j[(2 * k, 2 * k + 1)] = -1.0;
    }
    j
}

/// `J` scaled by `2` on `span(e1, e2)` and by `1/2` on `span(e3, e4)`.
pub fn block_model_a() -> Matrix {
    let mut a = std_j(4);
    for i in 0..2 {
        for k in 0..4 {
            a[(k, i)] *= 2.0;
            a[(k, i + 2)] *= 0.5;
        }
    }
    a
}

/// Anticommutes with `std_j(4)`.
pub fn quaternion() -> Matrix {
    let mut m = Matrix::zeros(4, 4);
    m[(2, 0)] = 1.0;
    m[(3, 1)] = -1.0;
    m[(0, 2)] = -1.0;
    m[(1, 3)] = 1.0;
    m
}
