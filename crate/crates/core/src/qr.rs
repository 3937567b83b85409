//! Blocked Householder QR with the modified compact-WY representation.
//!
//! A block of reflectors `H_1 H_2 ... H_b` is `I - Y T Y^T` with `T` upper
//! triangular. Rather than building `T` by the column recursion we form its
//! inverse directly, `T^{-1} = triu(Y^T Y)` with diagonal `1/tau_i`, and
//! replace every multiplication by `T` with a triangular solve.

use crate::dense::{gemm, householder::householder_in_place, triangular_solve, Mat, MatMut, MatRef, Side, Trans};
use crate::dense::householder::apply_reflector_left;
use crate::error::{contract, mismatch, Result};

/// `packed` holds `R` on and above the diagonal and reflector essentials below.
#[derive(Debug, Clone)]
pub struct QRFactorization {
    pub packed: Mat,
    pub tau: Vec<f64>,
}

/// Explicit reflector panel `Y` (unit lower trapezoidal) and `T^{-1}`.
#[derive(Debug, Clone)]
pub struct CompactWY {
    pub y: Mat,
    pub tinv: Mat,
}

impl CompactWY {
    pub fn width(&self) -> usize {
        self.y.cols()
    }
}

/// Copies the unit lower-trapezoidal reflector block out of a packed panel.
pub fn explicit_y(packed: MatRef<'_>) -> Mat {
    Mat::from_fn(packed.rows(), packed.cols(), |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Less => 0.0,
        std::cmp::Ordering::Equal => 1.0,
        std::cmp::Ordering::Greater => packed.get(i, j),
    })
}

/// Unblocked QR of a panel view. `tau` receives one scalar per column.
pub fn geqrf_panel(mut a: MatMut<'_>, tau: &mut [f64]) -> Result<()> {
    let (m, b) = (a.rows(), a.cols());
    if tau.len() != b {
        return Err(mismatch("geqrf_panel", format!("{b} columns but {} scalars", tau.len())));
    }
    if b > m {
        return Err(contract("geqrf_panel", format!("panel width {b} exceeds {m} rows")));
    }
    let mut y = vec![0.0; m];
    for (j, tj) in tau.iter_mut().enumerate() {
        let col = &mut a.col_mut(j)[j..];
        let (head, tail) = col.split_first_mut().expect("j < m");
        let (t, beta) = householder_in_place(*head, tail);
        *head = beta;
        *tj = t;
        if t != 0.0 && j + 1 < b {
            let len = m - j;
            y[0] = 1.0;
            y[1..len].copy_from_slice(&a.col(j)[j + 1..]);
            let trailing = a.rb_mut().submatrix(j, j + 1, len, b - j - 1);
            apply_reflector_left(&y[..len], t, trailing);
        }
    }
    Ok(())
}

/// Forms `T^{-1}` for the explicit panel `y`. Columns with `tau = 0` are
/// zeroed in the stored `Y` and get a unit diagonal, so they act as no-ops.
pub fn build_tinv(mut y: Mat, tau: &[f64]) -> Result<CompactWY> {
    let b = y.cols();
    if tau.len() != b {
        return Err(mismatch("build_tinv", format!("{b} columns but {} scalars", tau.len())));
    }
    for (j, &t) in tau.iter().enumerate() {
        if t == 0.0 {
            y.col_mut(j).fill(0.0);
        }
    }
    let mut tinv = Mat::zeros(b, b);
    gemm(1.0, y.as_ref(), Trans::Yes, y.as_ref(), Trans::No, 0.0, tinv.as_mut())?;
    for j in 0..b {
        for i in j + 1..b {
            tinv[(i, j)] = 0.0;
        }
        tinv[(j, j)] = if tau[j] == 0.0 { 1.0 } else { 1.0 / tau[j] };
    }
    Ok(CompactWY { y, tinv })
}

/// `C <- (I - Y T Y^T) C`, or with `T^T` when `trans` is set.
pub fn apply_block_reflector_left(block: &CompactWY, mut c: MatMut<'_>, trans: Trans) -> Result<()> {
    let y = block.y.as_ref();
    if y.rows() != c.rows() {
        return Err(mismatch(
            "apply_block_reflector_left",
            format!("Y has {} rows, C has {}", y.rows(), c.rows()),
        ));
    }
    if c.cols() == 0 || y.cols() == 0 {
        return Ok(());
    }
    let mut z = Mat::zeros(y.cols(), c.cols());
    gemm(1.0, y, Trans::Yes, c.rb(), Trans::No, 0.0, z.as_mut())?;
    triangular_solve(block.tinv.as_ref(), z.as_mut(), Side::Left, trans)?;
    gemm(-1.0, y, Trans::No, z.as_ref(), Trans::No, 1.0, c.rb_mut())
}

/// `C <- C (I - Y T Y^T)`, or with `T^T` when `trans` is set.
pub fn apply_block_reflector_right(block: &CompactWY, mut c: MatMut<'_>, trans: Trans) -> Result<()> {
    let y = block.y.as_ref();
    if y.rows() != c.cols() {
        return Err(mismatch(
            "apply_block_reflector_right",
            format!("Y has {} rows, C has {} columns", y.rows(), c.cols()),
        ));
    }
    if c.rows() == 0 || y.cols() == 0 {
        return Ok(());
    }
    let mut z = Mat::zeros(c.rows(), y.cols());
    gemm(1.0, c.rb(), Trans::No, y, Trans::No, 0.0, z.as_mut())?;
    triangular_solve(block.tinv.as_ref(), z.as_mut(), Side::Right, trans)?;
    gemm(-1.0, z.as_ref(), Trans::No, y, Trans::Yes, 1.0, c.rb_mut())
}

/// Blocked QR: panel factorization, `T^{-1}` construction, BLAS3 trailing update.
pub fn geqrf_blocked(mut a: Mat, b: usize) -> Result<QRFactorization> {
    let (m, n) = (a.rows(), a.cols());
    if m < n {
        return Err(contract("geqrf", format!("needs m >= n, got {m}x{n}")));
    }
    if b == 0 {
        return Err(contract("geqrf", "block width must be positive"));
    }
    let mut tau = vec![0.0; n];
    let mut j = 0;
    while j < n {
        let jb = b.min(n - j);
        geqrf_panel(a.submatrix_mut(j, j, m - j, jb), &mut tau[j..j + jb])?;
        if j + jb < n {
            let block = build_tinv(explicit_y(a.submatrix(j, j, m - j, jb)), &tau[j..j + jb])?;
            apply_block_reflector_left(&block, a.submatrix_mut(j, j + jb, m - j, n - j - jb), Trans::Yes)?;
        }
        j += jb;
    }
    Ok(QRFactorization { packed: a, tau })
}

/// First `k` columns of `Q = H_1 ... H_n`, built with panels of width `b`.
pub fn orgqr(fact: &QRFactorization, k: usize, b: usize) -> Result<Mat> {
    let (m, n) = (fact.packed.rows(), fact.packed.cols());
    if k > n {
        return Err(contract("orgqr", format!("asked for {k} columns of an {m}x{n} factorization")));
    }
    if b == 0 {
        return Err(contract("orgqr", "block width must be positive"));
    }
    let mut q = Mat::eye(m, k);
    // reflectors past k only touch rows that are still zero in I(:, 0..k)
    let starts: Vec<usize> = (0..k).step_by(b).collect();
    for &j in starts.iter().rev() {
        let jb = b.min(k - j);
        let block = build_tinv(
            explicit_y(fact.packed.submatrix(j, j, m - j, jb)),
            &fact.tau[j..j + jb],
        )?;
        apply_block_reflector_left(&block, q.submatrix_mut(j, j, m - j, k - j), Trans::No)?;
    }
    Ok(q)
}

/// Upper triangle of the packed factor as an `n x n` matrix.
pub fn extract_r(fact: &QRFactorization) -> Mat {
    let n = fact.packed.cols();
    Mat::from_fn(n, n, |i, j| if i <= j { fact.packed[(i, j)] } else { 0.0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_column_three_four() {
        let mut a = Mat::from_rows(&[&[3.0], &[4.0]]);
        let mut tau = [0.0];
        geqrf_panel(a.as_mut(), &mut tau).unwrap();
        assert_eq!(a[(0, 0)], -5.0);
        assert!((a[(1, 0)] - 0.5).abs() < 1e-15);
        assert!((tau[0] - 1.6).abs() < 1e-15);
    }

    #[test]
    fn zero_panel() {
        let mut a = Mat::zeros(4, 3);
        let mut tau = [1.0; 3];
        geqrf_panel(a.as_mut(), &mut tau).unwrap();
        assert_eq!(tau, [0.0; 3]);
        assert_eq!(a, Mat::zeros(4, 3));
    }

    #[test]
    fn tinv_two_reflector_example() {
        let y = Mat::from_rows(&[&[1.0, 0.0], &[1.0, 1.0]]);
        let blk = build_tinv(y, &[1.0, 2.0]).unwrap();
        assert_eq!(blk.tinv, Mat::from_rows(&[&[1.0, 1.0], &[0.0, 0.5]]));
        let t = Mat::from_rows(&[&[1.0, -2.0], &[0.0, 2.0]]);
        let mut p = Mat::zeros(2, 2);
        gemm(1.0, t.as_ref(), Trans::No, blk.tinv.as_ref(), Trans::No, 0.0, p.as_mut()).unwrap();
        assert_eq!(p, Mat::identity(2));
    }

    #[test]
    fn tinv_single_reflector() {
        let y = Mat::from_rows(&[&[1.0], &[0.25], &[-2.0]]);
        let blk = build_tinv(y, &[0.4]).unwrap();
        assert_eq!(blk.tinv[(0, 0)], 2.5);
    }

    #[test]
    fn all_zero_tau_block_is_identity() {
        let y = Mat::from_fn(5, 2, |i, j| if i == j { 1.0 } else if i > j { 0.3 } else { 0.0 });
        let blk = build_tinv(y, &[0.0, 0.0]).unwrap();
        let c0 = Mat::from_fn(5, 3, |i, j| (i * 3 + j) as f64);
        let mut c = c0.clone();
        apply_block_reflector_left(&blk, c.as_mut(), Trans::No).unwrap();
        assert_eq!(c, c0);
    }

    #[test]
    fn identity_input_gives_identity_q() {
        let fact = geqrf_blocked(Mat::identity(5), 2).unwrap();
        assert!(fact.tau.iter().all(|&t| t == 0.0));
        assert_eq!(orgqr(&fact, 5, 2).unwrap(), Mat::identity(5));
    }

    #[test]
    fn wide_input_rejected() {
        assert!(geqrf_blocked(Mat::zeros(2, 3), 2).is_err());
        let fact = geqrf_blocked(Mat::identity(3), 2).unwrap();
        assert!(orgqr(&fact, 4, 2).is_err());
    }
}
