//! Plane rotations.

use super::Mat;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GivensRotation {
    pub c: f64,
    pub s: f64,
}

impl GivensRotation {
    pub const IDENTITY: GivensRotation = GivensRotation { c: 1.0, s: 0.0 };

    /// `(x, y) <- (c x + s y, -s x + c y)` elementwise.
    pub fn apply(&self, x: &mut [f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), y.len());
        let (c, s) = (self.c, self.s);
        for (xi, yi) in x.iter_mut().zip(y.iter_mut()) {
            let (a, b) = (*xi, *yi);
            *xi = c * a + s * b;
            *yi = c * b - s * a;
        }
    }
}

/// Returns the rotation with `c a + s b = r`, `-s a + c b = 0`, `r >= 0`.
/// `(0, 0)` gives the identity and `r = 0`.
pub fn givens_generate(a: f64, b: f64) -> (GivensRotation, f64) {
    if b == 0.0 && a == 0.0 {
        return (GivensRotation::IDENTITY, 0.0);
    }
    let r = a.hypot(b);
    (GivensRotation { c: a / r, s: b / r }, r)
}

/// `(col_a, col_b) <- (c col_a + s col_b, -s col_a + c col_b)` on a matrix.
pub fn rotate_columns(m: &mut Mat, a: usize, b: usize, g: GivensRotation) {
    assert!(a != b && a < m.cols() && b < m.cols());
    if m.rows() == 0 {
        return;
    }
    let (ld, rows) = (m.ld(), m.rows());
    let (lo, hi) = (a.min(b), a.max(b));
    let data = m.as_mut_slice();
    let (left, right) = data.split_at_mut(hi * ld);
    let x = &mut left[lo * ld..lo * ld + rows];
    let y = &mut right[..rows];
    if a < b {
        g.apply(x, y);
    } else {
        g.apply(y, x);
    }
}
