//! Level-1/2/3 kernels on column-major views.
//!
//! Every kernel uses a fixed summation order that depends only on the inner
//! dimension, so results are bitwise reproducible and a row subset of an
//! output is computed exactly as it would be inside the full product.

use super::matrix::{MatMut, MatRef};
use crate::error::{mismatch, LinalgError, Result};

/// Transposition flag for an operand.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Trans {
    No,
    Yes,
}

/// Which side a triangular factor is applied from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[inline]
fn op_dims(a: MatRef<'_>, t: Trans) -> (usize, usize) {
    match t {
        Trans::No => (a.rows(), a.cols()),
        Trans::Yes => (a.cols(), a.rows()),
    }
}

/// Dot product with four interleaved partial sums.
#[inline]
pub fn dot(x: &[f64], y: &[f64]) -> f64 {
    debug_assert_eq!(x.len(), y.len());
    let n = x.len();
    let chunks = n / 4;
    let (mut s0, mut s1, mut s2, mut s3) = (0.0, 0.0, 0.0, 0.0);
    for k in 0..chunks {
        let i = 4 * k;
        s0 += x[i] * y[i];
        s1 += x[i + 1] * y[i + 1];
        s2 += x[i + 2] * y[i + 2];
        s3 += x[i + 3] * y[i + 3];
    }
    let mut s = (s0 + s1) + (s2 + s3);
    for i in 4 * chunks..n {
        s += x[i] * y[i];
    }
    s
}

/// `y += alpha * x`.
#[inline]
pub fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    debug_assert_eq!(x.len(), y.len());
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// Scaled sum-of-squares update (`scale^2 * ssq` tracks `sum x_i^2`).
pub(crate) fn accumulate_ssq(x: &[f64], scale: &mut f64, ssq: &mut f64) {
    for &v in x {
        if v != 0.0 {
            let a = v.abs();
            if *scale < a {
                *ssq = 1.0 + *ssq * (*scale / a) * (*scale / a);
                *scale = a;
            } else {
                *ssq += (a / *scale) * (a / *scale);
            }
        }
    }
}

/// Overflow-safe Euclidean norm.
pub fn nrm2(x: &[f64]) -> f64 {
    let mut scale = 0.0;
    let mut ssq = 1.0;
    accumulate_ssq(x, &mut scale, &mut ssq);
    scale * ssq.sqrt()
}

/// `C <- beta*C + alpha*op(A)*op(B)`.
///
/// `beta == 0` overwrites `C` without reading it.
pub fn gemm(
    alpha: f64,
    a: MatRef<'_>,
    ta: Trans,
    b: MatRef<'_>,
    tb: Trans,
    beta: f64,
    mut c: MatMut<'_>,
) -> Result<()> {
    let (am, ak) = op_dims(a, ta);
    let (bk, bn) = op_dims(b, tb);
    if ak != bk || am != c.rows() || bn != c.cols() {
        return Err(mismatch(
            "gemm",
            format!(
                "op(A) {am}x{ak}, op(B) {bk}x{bn}, C {}x{}",
                c.rows(),
                c.cols()
            ),
        ));
    }
    let (m, n, k) = (am, bn, ak);
    if m == 0 || n == 0 {
        return Ok(());
    }
    if beta == 0.0 {
        c.fill(0.0);
    } else if beta != 1.0 {
        c.scale(beta);
    }
    if alpha == 0.0 || k == 0 {
        return Ok(());
    }
    match (ta, tb) {
        (Trans::No, Trans::No) => {
            for j in 0..n {
                let bj = b.col(j);
                let cj = c.col_mut(j);
                for (l, &blj) in bj.iter().enumerate() {
                    axpy(alpha * blj, a.col(l), cj);
                }
            }
        }
        (Trans::No, Trans::Yes) => {
            for j in 0..n {
                let cj = c.col_mut(j);
                for l in 0..k {
                    axpy(alpha * b.get(j, l), a.col(l), cj);
                }
            }
        }
        (Trans::Yes, Trans::No) => {
            for j in 0..n {
                let bj = b.col(j);
                let cj = c.col_mut(j);
                for (i, ci) in cj.iter_mut().enumerate() {
                    *ci += alpha * dot(a.col(i), bj);
                }
            }
        }
        (Trans::Yes, Trans::Yes) => {
            let mut brow = vec![0.0; k];
            for j in 0..n {
                for (l, v) in brow.iter_mut().enumerate() {
                    *v = b.get(j, l);
                }
                let cj = c.col_mut(j);
                for (i, ci) in cj.iter_mut().enumerate() {
                    *ci += alpha * dot(a.col(i), &brow);
                }
            }
        }
    }
    Ok(())
}

/// `y <- beta*y + alpha*op(A)*x`.
pub fn gemv(alpha: f64, a: MatRef<'_>, ta: Trans, x: &[f64], beta: f64, y: &mut [f64]) -> Result<()> {
    let (m, n) = op_dims(a, ta);
    if x.len() != n || y.len() != m {
        return Err(mismatch(
            "gemv",
            format!("op(A) {m}x{n}, x {}, y {}", x.len(), y.len()),
        ));
    }
    if beta == 0.0 {
        y.fill(0.0);
    } else if beta != 1.0 {
        for v in y.iter_mut() {
            *v *= beta;
        }
    }
    if alpha == 0.0 || m == 0 {
        return Ok(());
    }
    match ta {
        Trans::No => {
            for (l, &xl) in x.iter().enumerate() {
                axpy(alpha * xl, a.col(l), y);
            }
        }
        Trans::Yes => {
            for (i, yi) in y.iter_mut().enumerate() {
                *yi += alpha * dot(a.col(i), x);
            }
        }
    }
    Ok(())
}

/// Solves with an upper-triangular `t` in place:
/// `Left`: `B <- op(T)^{-1} B`; `Right`: `B <- B op(T)^{-1}`.
pub fn triangular_solve(t: MatRef<'_>, mut b: MatMut<'_>, side: Side, trans: Trans) -> Result<()> {
    let n = t.rows();
    if t.cols() != n {
        return Err(mismatch("trsm", format!("T is {}x{}", n, t.cols())));
    }
    let need = match side {
        Side::Left => b.rows(),
        Side::Right => b.cols(),
    };
    if need != n {
        return Err(mismatch("trsm", format!("T is {n}x{n}, B is {}x{}", b.rows(), b.cols())));
    }
    if let Some(index) = (0..n).find(|&i| t.get(i, i) == 0.0) {
        return Err(LinalgError::SingularTriangular { index });
    }
    match (side, trans) {
        // back substitution per column
        (Side::Left, Trans::No) => {
            for j in 0..b.cols() {
                let x = b.col_mut(j);
                for i in (0..n).rev() {
                    let xi = x[i] / t.get(i, i);
                    x[i] = xi;
                    if xi != 0.0 {
                        axpy(-xi, &t.col(i)[..i], &mut x[..i]);
                    }
                }
            }
        }
        // T^T is lower: forward substitution, inner products down columns of T
        (Side::Left, Trans::Yes) => {
            for j in 0..b.cols() {
                let x = b.col_mut(j);
                for i in 0..n {
                    let s = x[i] - dot(&t.col(i)[..i], &x[..i]);
                    x[i] = s / t.get(i, i);
                }
            }
        }
        // X T = B: columns left to right
        (Side::Right, Trans::No) => {
            for j in 0..n {
                let (done, mut rest) = b.rb_mut().split_at_col(j);
                let cur = rest.col_mut(0);
                for l in 0..j {
                    let tlj = t.get(l, j);
                    if tlj != 0.0 {
                        axpy(-tlj, done.col(l), cur);
                    }
                }
                let tjj = t.get(j, j);
                for v in cur.iter_mut() {
                    *v /= tjj;
                }
            }
        }
        // X T^T = B: columns right to left
        (Side::Right, Trans::Yes) => {
            for i in (0..n).rev() {
                let (mut head, tail) = b.rb_mut().split_at_col(i + 1);
                let cur = head.col_mut(i);
                for j in i + 1..n {
                    let tij = t.get(i, j);
                    if tij != 0.0 {
                        axpy(-tij, tail.col(j - i - 1), cur);
                    }
                }
                let tii = t.get(i, i);
                for v in cur.iter_mut() {
                    *v /= tii;
                }
            }
        }
    }
    Ok(())
}
