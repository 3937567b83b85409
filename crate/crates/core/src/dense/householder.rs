//! Elementary reflectors `H = I - tau * y * y^T` with `y = [1; essential]`.

use super::blas::{axpy, dot, nrm2};
use super::matrix::MatMut;

#[derive(Debug, Clone, PartialEq)]
pub struct HouseholderReflector {
    pub tau: f64,
    /// Components of `y` below the implicit leading one.
    pub essential: Vec<f64>,
    /// The value `H` maps the generating vector's head to.
    pub pivot_value: f64,
}

impl HouseholderReflector {
    /// Full reflector vector including the unit head.
    pub fn vector(&self) -> Vec<f64> {
        let mut y = Vec::with_capacity(self.essential.len() + 1);
        y.push(1.0);
        y.extend_from_slice(&self.essential);
        y
    }

    pub fn apply_left(&self, c: MatMut<'_>) {
        apply_reflector_left(&self.vector(), self.tau, c);
    }

    pub fn apply_right(&self, c: MatMut<'_>) {
        apply_reflector_right(&self.vector(), self.tau, c);
    }
}

/// Builds the reflector taking `(alpha, x)` to `(beta, 0, ..., 0)` with
/// `beta = -sign(alpha) * ||(alpha, x)||`.
pub fn householder_generate(alpha: f64, x: &[f64]) -> HouseholderReflector {
    let mut essential = x.to_vec();
    let (tau, pivot_value) = householder_in_place(alpha, &mut essential);
    HouseholderReflector {
        tau,
        essential,
        pivot_value,
    }
}

/// In-place variant: `x` is overwritten with the essential part.
/// Returns `(tau, beta)`. A zero tail gives `tau = 0`, `beta = alpha`.
pub fn householder_in_place(alpha: f64, x: &mut [f64]) -> (f64, f64) {
    let xnorm = nrm2(x);
    if xnorm == 0.0 {
        return (0.0, alpha);
    }
    let beta = -alpha.hypot(xnorm).copysign(alpha);
    let tau = (beta - alpha) / beta;
    let scale = 1.0 / (alpha - beta);
    for v in x.iter_mut() {
        *v *= scale;
    }
    (tau, beta)
}

/// `C <- (I - tau y y^T) C`.
pub fn apply_reflector_left(y: &[f64], tau: f64, mut c: MatMut<'_>) {
    assert_eq!(y.len(), c.rows());
    if tau == 0.0 {
        return;
    }
    for j in 0..c.cols() {
        let col = c.col_mut(j);
        let w = dot(y, col);
        axpy(-tau * w, y, col);
    }
}

/// `C <- C (I - tau y y^T)`.
pub fn apply_reflector_right(y: &[f64], tau: f64, mut c: MatMut<'_>) {
    assert_eq!(y.len(), c.cols());
    if tau == 0.0 {
        return;
    }
    let mut w = vec![0.0; c.rows()];
    for (j, &yj) in y.iter().enumerate() {
        axpy(yj, c.col(j), &mut w);
    }
    for (j, &yj) in y.iter().enumerate() {
        axpy(-tau * yj, &w, c.col_mut(j));
    }
}
