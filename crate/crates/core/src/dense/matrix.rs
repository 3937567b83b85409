//! Column-major storage with an explicit leading dimension, plus borrowed
//! views that share the owning buffer.
//!
//! Element `(i, j)` of a view lives at offset `i + j * ld` from the view
//! origin. Submatrix views keep the parent's leading dimension, so panel and
//! trailing blocks of a factorization are zero-copy.

use std::fmt;
use std::ops::{Index, IndexMut};

/// Owned dense matrix.
#[derive(Clone, PartialEq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    ld: usize,
    data: Vec<f64>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::with_leading_dim(rows, cols, rows.max(1))
    }

    /// Zero matrix whose columns are `ld` apart in memory (`ld >= rows`).
    pub fn with_leading_dim(rows: usize, cols: usize, ld: usize) -> Self {
        assert!(ld >= rows.max(1), "leading dimension {ld} smaller than rows {rows}");
        Self {
            rows,
            cols,
            ld,
            data: vec![0.0; ld * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::eye(n, n)
    }

    /// Rectangular identity: ones on the main diagonal.
    pub fn eye(rows: usize, cols: usize) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows.min(cols) {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for j in 0..cols {
            for i in 0..rows {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Takes ownership of a packed column-major buffer (`ld == rows`).
    pub fn from_col_major(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), rows * cols, "buffer length does not match {rows}x{cols}");
        if rows == 0 {
            return Self::zeros(0, cols);
        }
        Self {
            rows,
            cols,
            ld: rows,
            data,
        }
    }

    /// Builds a matrix from row slices; handy for literals in tests.
    pub fn from_rows(rows: &[&[f64]]) -> Self {
        let m = rows.len();
        let n = rows.first().map_or(0, |r| r.len());
        Self::from_fn(m, n, |i, j| {
            assert_eq!(rows[i].len(), n, "ragged row {i}");
            rows[i][j]
        })
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &v) in diag.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn ld(&self) -> usize {
        self.ld
    }

    /// Raw buffer including any padding rows between columns.
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn as_ref(&self) -> MatRef<'_> {
        MatRef::new(&self.data, self.rows, self.cols, self.ld)
    }

    pub fn as_mut(&mut self) -> MatMut<'_> {
        MatMut::new(&mut self.data, self.rows, self.cols, self.ld)
    }

    pub fn col(&self, j: usize) -> &[f64] {
        assert!(j < self.cols);
        &self.data[j * self.ld..j * self.ld + self.rows]
    }

    pub fn col_mut(&mut self, j: usize) -> &mut [f64] {
        assert!(j < self.cols);
        &mut self.data[j * self.ld..j * self.ld + self.rows]
    }

    pub fn row(&self, i: usize) -> Vec<f64> {
        (0..self.cols).map(|j| self[(i, j)]).collect()
    }

    pub fn submatrix(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> MatRef<'_> {
        self.as_ref().submatrix(r0, c0, nr, nc)
    }

    pub fn submatrix_mut(&mut self, r0: usize, c0: usize, nr: usize, nc: usize) -> MatMut<'_> {
        self.as_mut().submatrix(r0, c0, nr, nc)
    }

    /// Owned copy of a block.
    pub fn block(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> Mat {
        self.submatrix(r0, c0, nr, nc).to_owned()
    }

    pub fn transpose(&self) -> Mat {
        self.as_ref().transpose_to_owned()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.as_ref().frobenius_norm()
    }

    pub fn max_abs(&self) -> f64 {
        self.as_ref().max_abs()
    }

    /// Swaps columns `a` and `b` in place.
    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let ld = self.ld;
        let rows = self.rows;
        let (left, right) = self.data.split_at_mut(hi * ld);
        left[lo * ld..lo * ld + rows].swap_with_slice(&mut right[..rows]);
    }

    /// New matrix whose column `k` is column `perm[k]` of `self`.
    pub fn select_cols(&self, perm: &[usize]) -> Mat {
        let mut out = Mat::zeros(self.rows, perm.len());
        for (k, &j) in perm.iter().enumerate() {
            out.col_mut(k).copy_from_slice(self.col(j));
        }
        out
    }

    pub fn copy_from(&mut self, src: MatRef<'_>) {
        self.as_mut().copy_from(src);
    }
}

impl Index<(usize, usize)> for Mat {
    type Output = f64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.rows && j < self.cols, "({i},{j}) out of {}x{}", self.rows, self.cols);
        &self.data[i + j * self.ld]
    }
}

impl IndexMut<(usize, usize)> for Mat {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.rows && j < self.cols, "({i},{j}) out of {}x{}", self.rows, self.cols);
        &mut self.data[i + j * self.ld]
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} (ld {})", self.rows, self.cols, self.ld)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| format!("{:12.5e}", self[(i, j)])).collect();
            writeln!(f, "  [{}]", row.join(" "))?;
        }
        Ok(())
    }
}

#[inline]
fn view_len(rows: usize, cols: usize, ld: usize) -> usize {
    if rows == 0 || cols == 0 {
        0
    } else {
        (cols - 1) * ld + rows
    }
}

/// Read-only view.
#[derive(Clone, Copy)]
pub struct MatRef<'a> {
    data: &'a [f64],
    rows: usize,
    cols: usize,
    ld: usize,
}

impl<'a> MatRef<'a> {
    pub fn new(data: &'a [f64], rows: usize, cols: usize, ld: usize) -> Self {
        assert!(ld >= rows.max(1));
        let len = view_len(rows, cols, ld);
        assert!(data.len() >= len, "buffer too short for {rows}x{cols} view");
        Self {
            data: &data[..len],
            rows,
            cols,
            ld,
        }
    }

    /// `n x 1` view of a contiguous vector.
    pub fn from_col(v: &'a [f64]) -> Self {
        Self::new(v, v.len(), 1, v.len().max(1))
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn ld(&self) -> usize {
        self.ld
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i + j * self.ld]
    }

    #[inline]
    pub fn col(&self, j: usize) -> &'a [f64] {
        debug_assert!(j < self.cols);
        if self.rows == 0 {
            return &[];
        }
        &self.data[j * self.ld..j * self.ld + self.rows]
    }

    pub fn submatrix(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> MatRef<'a> {
        assert!(
            r0 + nr <= self.rows && c0 + nc <= self.cols,
            "submatrix ({r0},{c0}) {nr}x{nc} out of {}x{}",
            self.rows,
            self.cols
        );
        let len = view_len(nr, nc, self.ld);
        let data = if len == 0 {
            &[][..]
        } else {
            let start = r0 + c0 * self.ld;
            &self.data[start..start + len]
        };
        MatRef {
            data,
            rows: nr,
            cols: nc,
            ld: self.ld,
        }
    }

    pub fn to_owned(&self) -> Mat {
        let mut m = Mat::zeros(self.rows, self.cols);
        m.copy_from(*self);
        m
    }

    pub fn transpose_to_owned(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for j in 0..self.cols {
            for (i, &v) in self.col(j).iter().enumerate() {
                t[(j, i)] = v;
            }
        }
        t
    }

    pub fn frobenius_norm(&self) -> f64 {
        let mut scale = 0.0;
        let mut ssq = 1.0;
        for j in 0..self.cols {
            super::blas::accumulate_ssq(self.col(j), &mut scale, &mut ssq);
        }
        scale * ssq.sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        (0..self.cols)
            .flat_map(|j| self.col(j).iter())
            .fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

/// Mutable view.
pub struct MatMut<'a> {
    data: &'a mut [f64],
    rows: usize,
    cols: usize,
    ld: usize,
}

impl<'a> MatMut<'a> {
    pub fn new(data: &'a mut [f64], rows: usize, cols: usize, ld: usize) -> Self {
        assert!(ld >= rows.max(1));
        let len = view_len(rows, cols, ld);
        assert!(data.len() >= len, "buffer too short for {rows}x{cols} view");
        Self {
            data: &mut data[..len],
            rows,
            cols,
            ld,
        }
    }

    pub fn from_col(v: &'a mut [f64]) -> Self {
        let n = v.len();
        Self::new(v, n, 1, n.max(1))
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn ld(&self) -> usize {
        self.ld
    }

    /// Shared reborrow.
    pub fn rb(&self) -> MatRef<'_> {
        MatRef {
            data: self.data,
            rows: self.rows,
            cols: self.cols,
            ld: self.ld,
        }
    }

    /// Mutable reborrow with a shorter lifetime.
    pub fn rb_mut(&mut self) -> MatMut<'_> {
        MatMut {
            data: self.data,
            rows: self.rows,
            cols: self.cols,
            ld: self.ld,
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i + j * self.ld]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i + j * self.ld] = v;
    }

    #[inline]
    pub fn col(&self, j: usize) -> &[f64] {
        debug_assert!(j < self.cols);
        if self.rows == 0 {
            return &[];
        }
        &self.data[j * self.ld..j * self.ld + self.rows]
    }

    #[inline]
    pub fn col_mut(&mut self, j: usize) -> &mut [f64] {
        debug_assert!(j < self.cols);
        if self.rows == 0 {
            return &mut [];
        }
        &mut self.data[j * self.ld..j * self.ld + self.rows]
    }

    /// Consumes the view and narrows it to a block.
    pub fn submatrix(self, r0: usize, c0: usize, nr: usize, nc: usize) -> MatMut<'a> {
        assert!(
            r0 + nr <= self.rows && c0 + nc <= self.cols,
            "submatrix ({r0},{c0}) {nr}x{nc} out of {}x{}",
            self.rows,
            self.cols
        );
        let len = view_len(nr, nc, self.ld);
        let ld = self.ld;
        let buf = self.data;
        let data = if len == 0 {
            &mut [][..]
        } else {
            let start = r0 + c0 * ld;
            &mut buf[start..start + len]
        };
        MatMut {
            data,
            rows: nr,
            cols: nc,
            ld,
        }
    }

    /// Splits into columns `[0, j)` and `[j, cols)`.
    pub fn split_at_col(self, j: usize) -> (MatMut<'a>, MatMut<'a>) {
        assert!(j <= self.cols);
        let (rows, cols, ld) = (self.rows, self.cols, self.ld);
        let cut = (j * ld).min(self.data.len());
        let (left, right) = self.data.split_at_mut(cut);
        let left_len = view_len(rows, j, ld);
        let right_len = view_len(rows, cols - j, ld);
        (
            MatMut {
                data: &mut left[..left_len],
                rows,
                cols: j,
                ld,
            },
            MatMut {
                data: &mut right[..right_len],
                rows,
                cols: cols - j,
                ld,
            },
        )
    }

    pub fn fill(&mut self, v: f64) {
        for j in 0..self.cols {
            self.col_mut(j).fill(v);
        }
    }

    pub fn copy_from(&mut self, src: MatRef<'_>) {
        assert!(src.rows() == self.rows && src.cols() == self.cols, "copy_from shape mismatch");
        for j in 0..self.cols {
            self.col_mut(j).copy_from_slice(src.col(j));
        }
    }

    pub fn scale(&mut self, alpha: f64) {
        for j in 0..self.cols {
            for v in self.col_mut(j) {
                *v *= alpha;
            }
        }
    }
}
