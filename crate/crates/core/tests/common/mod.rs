//! Independent reference implementations used as test oracles. Nothing here
//! calls into the library's factorization code.

#![allow(dead_code)]

use bdcsvd::dense::Mat;

pub const U: f64 = f64::EPSILON / 2.0;

/// Small xorshift generator so tests do not depend on the harness PRNG.
pub struct TestRng(u64);

impl TestRng {
    pub fn new(seed: u64) -> Self {
        Self(seed.wrapping_mul(0x2545_F491_4F6C_DD1D) | 1)
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x
    }

    /// Uniform in [-1, 1).
    pub fn sym(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }

    pub fn matrix(&mut self, m: usize, n: usize) -> Mat {
        Mat::from_fn(m, n, |_, _| self.sym())
    }

    pub fn vec(&mut self, n: usize) -> Vec<f64> {
        (0..n).map(|_| self.sym()).collect()
    }
}

pub fn matmul(a: &Mat, b: &Mat) -> Mat {
    assert_eq!(a.cols(), b.rows());
    Mat::from_fn(a.rows(), b.cols(), |i, j| (0..a.cols()).map(|k| a[(i, k)] * b[(k, j)]).sum())
}

pub fn sub(a: &Mat, b: &Mat) -> Mat {
    Mat::from_fn(a.rows(), a.cols(), |i, j| a[(i, j)] - b[(i, j)])
}

pub fn max_abs_diff(a: &Mat, b: &Mat) -> f64 {
    assert_eq!((a.rows(), a.cols()), (b.rows(), b.cols()));
    let mut m = 0.0f64;
    for j in 0..a.cols() {
        for i in 0..a.rows() {
            m = m.max((a[(i, j)] - b[(i, j)]).abs());
        }
    }
    m
}

/// `||Q^T Q - I||_F`.
pub fn orth_error(q: &Mat) -> f64 {
    let g = matmul(&q.transpose(), q);
    sub(&g, &Mat::identity(q.cols())).frobenius_norm()
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
pub fn jacobi_eigenvalues(sym: &Mat) -> Vec<f64> {
    let n = sym.rows();
    let mut a = sym.clone();
    for _sweep in 0..100 {
        let mut off = 0.0;
        for j in 0..n {
            for i in 0..n {
                if i != j {
                    off += a[(i, j)] * a[(i, j)];
                }
            }
        }
        if off.sqrt() <= 1e-300 + U * a.frobenius_norm() * 1e-2 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[(i, i)]).collect();
    ev.sort_by(|x, y| x.partial_cmp(y).unwrap());
    ev
}

/// Singular values from the eigenvalues of `A^T A`, descending.
pub fn singular_values_via_gram(a: &Mat) -> Vec<f64> {
    let g = matmul(&a.transpose(), a);
    let mut s: Vec<f64> = jacobi_eigenvalues(&g).into_iter().map(|l| l.max(0.0).sqrt()).collect();
    s.reverse();
    s
}

/// One-sided (Hestenes) Jacobi SVD: singular values descending, to high
/// relative accuracy.
pub fn one_sided_jacobi_sv(a: &Mat) -> Vec<f64> {
    let mut w = if a.rows() >= a.cols() { a.clone() } else { a.transpose() };
    let n = w.cols();
    let m = w.rows();
    for _sweep in 0..200 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let (mut alpha, mut beta, mut gamma) = (0.0, 0.0, 0.0);
                for k in 0..m {
                    alpha += w[(k, p)] * w[(k, p)];
                    beta += w[(k, q)] * w[(k, q)];
                    gamma += w[(k, p)] * w[(k, q)];
                }
                if gamma.abs() <= U * (alpha * beta).sqrt() || gamma == 0.0 {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for k in 0..m {
                    let x = w[(k, p)];
                    let y = w[(k, q)];
                    w[(k, p)] = c * x - s * y;
                    w[(k, q)] = s * x + c * y;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut s: Vec<f64> = (0..n).map(|j| w.col(j).iter().map(|v| v * v).sum::<f64>().sqrt()).collect();
    s.sort_by(|x, y| y.partial_cmp(x).unwrap());
    s
}

/// Dense `I - tau v v^T` of order `n` with `v` supported on rows `offset..`.
pub fn reflector_matrix(n: usize, offset: usize, v: &[f64], tau: f64) -> Mat {
    assert_eq!(offset + v.len(), n);
    Mat::from_fn(n, n, |i, j| {
        let id = if i == j { 1.0 } else { 0.0 };
        let vi = if i >= offset { v[i - offset] } else { 0.0 };
        let vj = if j >= offset { v[j - offset] } else { 0.0 };
        id - tau * vi * vj
    })
}

/// Column reflector `j` of a packed factor (unit at row `j + shift`).
pub fn packed_column_reflector(packed: &Mat, j: usize, shift: usize) -> Vec<f64> {
    let m = packed.rows();
    let start = j + shift;
    let mut v = vec![0.0; m];
    if start < m {
        v[start] = 1.0;
        for i in start + 1..m {
            v[i] = packed[(i, j)];
        }
    }
    v
}

/// Row reflector `i` of a packed factor (unit at column `i + shift`).
pub fn packed_row_reflector(packed: &Mat, i: usize, shift: usize) -> Vec<f64> {
    let n = packed.cols();
    let start = i + shift;
    let mut v = vec![0.0; n];
    if start < n {
        v[start] = 1.0;
        for j in start + 1..n {
            v[j] = packed[(i, j)];
        }
    }
    v
}

/// Product `H(v_0) H(v_1) ... H(v_{k-1})` of full-length reflectors.
pub fn reflector_product(n: usize, vs: &[Vec<f64>], taus: &[f64]) -> Mat {
    let mut acc = Mat::identity(n);
    for (v, &t) in vs.iter().zip(taus) {
        acc = matmul(&acc, &reflector_matrix(n, 0, v, t));
    }
    acc
}

/// Applies `H(v_0) ... H(v_{k-1})` to `c` from the left, one reflector at a time.
pub fn apply_sequential_left(vs: &[Vec<f64>], taus: &[f64], c: &Mat, transpose: bool) -> Mat {
    let mut out = c.clone();
    let order: Vec<usize> = if transpose {
        (0..vs.len()).collect()
    } else {
        (0..vs.len()).rev().collect()
    };
    for idx in order {
        let v = &vs[idx];
        let t = taus[idx];
        for j in 0..out.cols() {
            let w: f64 = (0..out.rows()).map(|i| v[i] * out[(i, j)]).sum();
            for i in 0..out.rows() {
                out[(i, j)] -= t * v[i] * w;
            }
        }
    }
    out
}

/// Forward recursion for the compact-WY factor `T` of `H_1 ... H_b`:
/// `T_11 = tau_1`, `T_{1:j-1, j} = -tau_j T_{1:j-1,1:j-1} Y_{:,1:j-1}^T y_j`.
pub fn larft_forward(y: &Mat, tau: &[f64]) -> Mat {
    let b = y.cols();
    let mut t = Mat::zeros(b, b);
    for j in 0..b {
        t[(j, j)] = tau[j];
        let w: Vec<f64> = (0..j)
            .map(|i| (0..y.rows()).map(|k| y[(k, i)] * y[(k, j)]).sum::<f64>())
            .collect();
        for i in 0..j {
            let s: f64 = (i..j).map(|l| t[(i, l)] * w[l]).sum();
            t[(i, j)] = -tau[j] * s;
        }
    }
    t
}

/// Dense upper-bidiagonal matrix, optionally with the extra bordered column.
pub fn bidiagonal_matrix(d: &[f64], e: &[f64], bordered: bool) -> Mat {
    let n = d.len();
    let cols = if bordered { n + 1 } else { n };
    Mat::from_fn(n, cols, |i, j| {
        if i == j {
            d[i]
        } else if j == i + 1 && i < e.len() {
            e[i]
        } else {
            0.0
        }
    })
}
