//! One-stage reduction to upper bidiagonal form, `A = U_1 B V_1^T`.
//!
//! The blocked path accumulates each panel's left and right update vectors
//! interleaved in two tall matrices, `P = [v_1, x_1, v_2, x_2, ...]` and
//! `Q = [y_1, u_1, y_2, u_2, ...]`, so that every correction inside the panel
//! and the trailing update are single products against `P Q^T`.

use crate::dense::blas::{gemm, gemv, Trans};
use crate::dense::householder::{apply_reflector_left, apply_reflector_right, householder_in_place};
use crate::dense::{Mat, MatMut};
use crate::error::{contract, mismatch, Result};

/// `packed` holds column-reflector essentials below the diagonal and
/// row-reflector essentials right of the superdiagonal; the diagonal and
/// superdiagonal hold `d` and `e`.
#[derive(Debug, Clone)]
pub struct BidiagonalFactorization {
    pub d: Vec<f64>,
    pub e: Vec<f64>,
    pub packed: Mat,
    pub tauq: Vec<f64>,
    pub taup: Vec<f64>,
}

/// Interleaved update vectors of one panel. Columns are full height with
/// explicit zeros above each reflector's origin.
#[derive(Debug, Clone)]
pub struct PanelWorkspace {
    pub p: Mat,
    pub q: Mat,
    pub filled: usize,
}

impl PanelWorkspace {
    pub fn new(m: usize, n: usize, b: usize) -> Self {
        Self {
            p: Mat::zeros(m, 2 * b),
            q: Mat::zeros(n, 2 * b),
            filled: 0,
        }
    }
}

fn copy_row(a: &MatMut<'_>, i: usize, j0: usize, out: &mut [f64]) {
    for (k, v) in out.iter_mut().enumerate() {
        *v = a.get(i, j0 + k);
    }
}

/// Reduces the first `b` rows and columns of `a` and applies the merged
/// rank-`2b` update `A[b.., b..] -= P[b.., :] Q[b.., :]^T` to the rest.
///
/// `d`, `tauq`, `taup` take `b` entries; `e` takes `min(b, n' - 1)`.
pub fn labrd_panel(
    mut a: MatMut<'_>,
    b: usize,
    work: &mut PanelWorkspace,
    d: &mut [f64],
    e: &mut [f64],
    tauq: &mut [f64],
    taup: &mut [f64],
) -> Result<()> {
    let (m, n) = (a.rows(), a.cols());
    if b == 0 || b > m.min(n) {
        return Err(contract("labrd", format!("block width {b} for a {m}x{n} view")));
    }
    if work.p.rows() != m || work.q.rows() != n || work.p.cols() < 2 * b || work.q.cols() < 2 * b {
        return Err(mismatch("labrd", "workspace does not match the panel view"));
    }
    if d.len() != b || tauq.len() != b || taup.len() != b || e.len() != b.min(n - 1) {
        return Err(mismatch("labrd", "output slices have the wrong length"));
    }
    let (p, q) = (&mut work.p, &mut work.q);
    work.filled = 0;
    let mut qrow = vec![0.0; 2 * b];
    let mut prow = vec![0.0; 2 * b];
    let mut w = vec![0.0; 2 * b];
    let mut row = vec![0.0; n];

    for i in 0..b {
        let k = 2 * i;
        // (a) column i against all earlier update pairs: one merged product
        if i > 0 {
            for (c, v) in qrow[..k].iter_mut().enumerate() {
                *v = q[(i, c)];
            }
            let col = &mut a.col_mut(i)[i..];
            gemv(-1.0, p.submatrix(i, 0, m - i, k), Trans::No, &qrow[..k], 1.0, col)?;
        }

        // (b) column reflector H_i, stored as v_i in P[:, k]
        let tq = {
            let col = &mut a.col_mut(i)[i..];
            let (head, tail) = col.split_first_mut().expect("i < m");
            let (t, beta) = householder_in_place(*head, tail);
            *head = beta;
            d[i] = beta;
            t
        };
        tauq[i] = tq;
        {
            let vcol = p.col_mut(k);
            vcol[..i].fill(0.0);
            vcol[i] = 1.0;
            vcol[i + 1..].copy_from_slice(&a.col(i)[i + 1..]);
        }
        // y_i = tau (A^T v - Q (P^T v)), scaling folded into the products
        q.col_mut(k)[..=i].fill(0.0);
        if i + 1 < n {
            let v = &p.col(k)[i..];
            let mut y = vec![0.0; n - i - 1];
            gemv(tq, a.rb().submatrix(i, i + 1, m - i, n - i - 1), Trans::Yes, v, 0.0, &mut y)?;
            if i > 0 {
                gemv(1.0, p.submatrix(i, 0, m - i, k), Trans::Yes, v, 0.0, &mut w[..k])?;
                gemv(-tq, q.submatrix(i + 1, 0, n - i - 1, k), Trans::No, &w[..k], 1.0, &mut y)?;
            }
            q.col_mut(k)[i + 1..].copy_from_slice(&y);
        }

        // (c) row i against the update pairs including (v_i, y_i)
        if i + 1 < n {
            let len = n - i - 1;
            copy_row(&a, i, i + 1, &mut row[..len]);
            for (c, v) in prow[..=k].iter_mut().enumerate() {
                *v = p[(i, c)];
            }
            gemv(-1.0, q.submatrix(i + 1, 0, len, k + 1), Trans::No, &prow[..=k], 1.0, &mut row[..len])?;

            // (d) row reflector G_i, stored as u_i in Q[:, k + 1]
            let (head, tail) = row[..len].split_first_mut().expect("len > 0");
            let (tp, beta) = householder_in_place(*head, tail);
            *head = beta;
            e[i] = beta;
            taup[i] = tp;
            for (c, &v) in row[..len].iter().enumerate() {
                a.set(i, i + 1 + c, v);
            }
            {
                let ucol = q.col_mut(k + 1);
                ucol[..=i].fill(0.0);
                ucol[i + 1] = 1.0;
                ucol[i + 2..].copy_from_slice(&row[1..len]);
            }
            // x_i = pi (A u - P (Q^T u))
            let u = &q.col(k + 1)[i + 1..];
            let mut x = vec![0.0; m - i - 1];
            gemv(tp, a.rb().submatrix(i + 1, i + 1, m - i - 1, len), Trans::No, u, 0.0, &mut x)?;
            gemv(1.0, q.submatrix(i + 1, 0, len, k + 1), Trans::Yes, u, 0.0, &mut w[..=k])?;
            gemv(-tp, p.submatrix(i + 1, 0, m - i - 1, k + 1), Trans::No, &w[..=k], 1.0, &mut x)?;
            let xcol = p.col_mut(k + 1);
            xcol[..=i].fill(0.0);
            xcol[i + 1..].copy_from_slice(&x);
        } else {
            taup[i] = 0.0;
            p.col_mut(k + 1).fill(0.0);
            q.col_mut(k + 1).fill(0.0);
        }
        work.filled = i + 1;
    }

    if b < m && b < n {
        gemm(
            -1.0,
            p.submatrix(b, 0, m - b, 2 * b),
            Trans::No,
            q.submatrix(b, 0, n - b, 2 * b),
            Trans::Yes,
            1.0,
            a.submatrix(b, b, m - b, n - b),
        )?;
    }
    Ok(())
}

fn check_shape(a: &Mat, op: &'static str) -> Result<()> {
    let (m, n) = (a.rows(), a.cols());
    if m < n {
        return Err(contract(op, format!("needs m >= n, got {m}x{n}")));
    }
    if n == 0 {
        return Err(contract(op, "empty matrix"));
    }
    Ok(())
}

/// Reduces columns/rows `start..` one reflector pair at a time.
fn gebd2_from(a: &mut Mat, start: usize, d: &mut [f64], e: &mut [f64], tauq: &mut [f64], taup: &mut [f64]) {
    let (m, n) = (a.rows(), a.cols());
    let mut y = vec![0.0; m];
    for i in start..n {
        let col = &mut a.col_mut(i)[i..];
        let (head, tail) = col.split_first_mut().expect("i < m");
        let (tq, beta) = householder_in_place(*head, tail);
        *head = beta;
        d[i] = beta;
        tauq[i] = tq;
        if i + 1 < n {
            y[0] = 1.0;
            y[1..m - i].copy_from_slice(&a.col(i)[i + 1..]);
            apply_reflector_left(&y[..m - i], tq, a.submatrix_mut(i, i + 1, m - i, n - i - 1));

            let len = n - i - 1;
            let mut row: Vec<f64> = (0..len).map(|c| a[(i, i + 1 + c)]).collect();
            let (head, tail) = row.split_first_mut().expect("len > 0");
            let (tp, beta) = householder_in_place(*head, tail);
            *head = beta;
            e[i] = beta;
            taup[i] = tp;
            for (c, &v) in row.iter().enumerate() {
                a[(i, i + 1 + c)] = v;
            }
            if i + 1 < m {
                row[0] = 1.0;
                apply_reflector_right(&row, tp, a.submatrix_mut(i + 1, i + 1, m - i - 1, len));
            }
        } else {
            taup[i] = 0.0;
        }
    }
}

/// Unblocked reduction: both reflectors of step `i` are applied to the whole
/// trailing matrix before step `i + 1`.
pub fn gebrd_unblocked(mut a: Mat) -> Result<BidiagonalFactorization> {
    check_shape(&a, "gebrd_unblocked")?;
    let n = a.cols();
    let (mut d, mut e) = (vec![0.0; n], vec![0.0; n - 1]);
    let (mut tauq, mut taup) = (vec![0.0; n], vec![0.0; n]);
    gebd2_from(&mut a, 0, &mut d, &mut e, &mut tauq, &mut taup);
    Ok(BidiagonalFactorization {
        d,
        e,
        packed: a,
        tauq,
        taup,
    })
}

/// Blocked reduction with panels of width `b`; the final `<= b` columns are
/// finished unblocked.
pub fn gebrd_blocked(mut a: Mat, b: usize) -> Result<BidiagonalFactorization> {
    check_shape(&a, "gebrd_blocked")?;
    if b == 0 {
        return Err(contract("gebrd_blocked", "block width must be positive"));
    }
    let (m, n) = (a.rows(), a.cols());
    let (mut d, mut e) = (vec![0.0; n], vec![0.0; n - 1]);
    let (mut tauq, mut taup) = (vec![0.0; n], vec![0.0; n]);
    let mut i = 0;
    while n - i > b {
        let mut work = PanelWorkspace::new(m - i, n - i, b);
        labrd_panel(
            a.submatrix_mut(i, i, m - i, n - i),
            b,
            &mut work,
            &mut d[i..i + b],
            &mut e[i..i + b],
            &mut tauq[i..i + b],
            &mut taup[i..i + b],
        )?;
        i += b;
    }
    gebd2_from(&mut a, i, &mut d, &mut e, &mut tauq, &mut taup);
    Ok(BidiagonalFactorization {
        d,
        e,
        packed: a,
        tauq,
        taup,
    })
}
