//! Assembly of a node's singular vectors from its children.
//!
//! With `r` the removed row, the node's bases before the secular step are
//!
//! ```text
//!   left  = [ W1  .   .  ]      right = [ c0 q1  Q1  .   -s0 q1 ]
//!           [ .   1   .  ]  (row r)     [ s0 q2  .   Q2   c0 q2 ]
//!           [ .   .   W2 ]
//! ```
//!
//! (columns reordered so the unit column comes first). Each column is tagged
//! with the row blocks it touches, so the final products only multiply the
//! nonzero blocks.

use super::deflate::{DeflationOutcome, RotationKind};
use super::{RowSelection, SubproblemSVD};
use crate::dense::{gemm, rotate_columns, Mat, Trans};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Support {
    Top,
    Middle,
    Bottom,
    Both,
}

impl Support {
    fn union(self, other: Support) -> Support {
        if self == other {
            self
        } else {
            Support::Both
        }
    }

    fn touches_top(self) -> bool {
        matches!(self, Support::Top | Support::Both)
    }

    fn touches_bottom(self) -> bool {
        matches!(self, Support::Bottom | Support::Both)
    }
}

/// Bases of one merge, columns in the unsorted `[0, D1, D2]` order.
#[derive(Debug, Clone)]
pub struct MergeBasis {
    pub n1: usize,
    pub n2: usize,
    pub sqre: usize,
    pub wb: Option<Mat>,
    pub w_support: Vec<Support>,
    /// Tracked rows of the right basis; the first `v_top` come from the left child.
    pub vb: Mat,
    pub v_top: usize,
    pub v_support: Vec<Support>,
    pub rows: RowSelection,
}

/// First and last tracked rows of a child's right basis.
fn end_rows(child: &SubproblemSVD) -> (usize, usize) {
    (0, child.qfull.rows() - 1)
}

/// Removed-row couplings `(d, z, c0, s0)` in the children's bases.
pub fn build_z(
    alpha: f64,
    beta: f64,
    left: &SubproblemSVD,
    right: &SubproblemSVD,
    sqre: bool,
) -> (Vec<f64>, Vec<f64>, f64, f64) {
    let n1 = left.dvals.len();
    let n2 = right.dvals.len();
    let (_, last1) = end_rows(left);
    let lambda1 = left.qfull[(last1, n1)];
    let (c0, s0, z0) = if sqre {
        let phi2 = right.qfull[(0, n2)];
        let (g, r) = crate::dense::givens_generate(alpha * lambda1, beta * phi2);
        (g.c, g.s, r)
    } else {
        (1.0, 0.0, alpha * lambda1)
    };
    let mut d = Vec::with_capacity(n1 + n2 + 1);
    let mut z = Vec::with_capacity(n1 + n2 + 1);
    d.push(0.0);
    z.push(z0);
    for j in 0..n1 {
        d.push(left.dvals[j]);
        z.push(alpha * left.qfull[(last1, j)]);
    }
    for j in 0..n2 {
        d.push(right.dvals[j]);
        z.push(beta * right.qfull[(0, j)]);
    }
    (d, z, c0, s0)
}

pub fn build_basis(left: &SubproblemSVD, right: &SubproblemSVD, c0: f64, s0: f64, sqre: bool) -> MergeBasis {
    let n1 = left.dvals.len();
    let n2 = right.dvals.len();
    let n = n1 + n2 + 1;
    let sq = usize::from(sqre);
    let cols = n + sq;
    let rows = left.rows;
    let (top_rows, bottom_rows): (Vec<usize>, Vec<usize>) = match rows {
        RowSelection::All => ((0..left.qfull.rows()).collect(), (0..right.qfull.rows()).collect()),
        RowSelection::Ends => (vec![0], vec![right.qfull.rows() - 1]),
    };
    let v_top = top_rows.len();
    let mut vb = Mat::zeros(v_top + bottom_rows.len(), cols);
    for (t, &src) in top_rows.iter().enumerate() {
        let q1 = left.qfull[(src, n1)];
        vb[(t, 0)] = c0 * q1;
        for j in 0..n1 {
            vb[(t, 1 + j)] = left.qfull[(src, j)];
        }
        if sqre {
            vb[(t, n)] = -s0 * q1;
        }
    }
    for (b, &src) in bottom_rows.iter().enumerate() {
        let row = v_top + b;
        for j in 0..n2 {
            vb[(row, n1 + 1 + j)] = right.qfull[(src, j)];
        }
        if sqre {
            let q2 = right.qfull[(src, n2)];
            vb[(row, 0)] = s0 * q2;
            vb[(row, n)] = c0 * q2;
        }
    }
    let mut v_support = vec![if sqre { Support::Both } else { Support::Top }];
    v_support.extend(std::iter::repeat_n(Support::Top, n1));
    v_support.extend(std::iter::repeat_n(Support::Bottom, n2));
    if sqre {
        v_support.push(Support::Both);
    }

    let wb = match (&left.w, &right.w) {
        (Some(w1), Some(w2)) => {
            let mut wb = Mat::zeros(n, n);
            wb[(n1, 0)] = 1.0;
            wb.submatrix_mut(0, 1, n1, n1).copy_from(w1.as_ref());
            wb.submatrix_mut(n1 + 1, n1 + 1, n2, n2).copy_from(w2.as_ref());
            Some(wb)
        }
        _ => None,
    };
    let mut w_support = vec![Support::Middle];
    w_support.extend(std::iter::repeat_n(Support::Top, n1));
    w_support.extend(std::iter::repeat_n(Support::Bottom, n2));

    MergeBasis {
        n1,
        n2,
        sqre: sq,
        wb,
        w_support,
        vb,
        v_top,
        v_support,
        rows,
    }
}

/// Applies the deflation rotations to the bases and their support tags.
pub fn apply_rotations(basis: &mut MergeBasis, outcome: &DeflationOutcome) {
    for rot in &outcome.rotations {
        rotate_columns(&mut basis.vb, rot.i, rot.j, rot.g);
        let s = basis.v_support[rot.i].union(basis.v_support[rot.j]);
        basis.v_support[rot.i] = s;
        basis.v_support[rot.j] = s;
        if rot.kind == RotationKind::Both {
            if let Some(wb) = basis.wb.as_mut() {
                rotate_columns(wb, rot.i, rot.j, rot.g);
            }
            let s = basis.w_support[rot.i].union(basis.w_support[rot.j]);
            basis.w_support[rot.i] = s;
            basis.w_support[rot.j] = s;
        }
    }
}

/// `out[rows, :] = basis[rows, kept[sel]] * small[sel, :]` for the kept
/// columns whose support passes `keep`.
#[allow(clippy::too_many_arguments)]
fn block_product(
    basis: &Mat,
    row0: usize,
    nrows: usize,
    kept: &[usize],
    support: &[Support],
    keep: impl Fn(Support) -> bool,
    small: &Mat,
    out: &mut Mat,
) -> Result<()> {
    if nrows == 0 {
        return Ok(());
    }
    let sel: Vec<usize> = (0..kept.len()).filter(|&p| keep(support[kept[p]])).collect();
    if sel.is_empty() {
        return Ok(());
    }
    let a = Mat::from_fn(nrows, sel.len(), |i, c| basis[(row0 + i, kept[sel[c]])]);
    let b = Mat::from_fn(sel.len(), small.cols(), |i, c| small[(sel[i], c)]);
    gemm(
        1.0,
        a.as_ref(),
        Trans::No,
        b.as_ref(),
        Trans::No,
        0.0,
        out.submatrix_mut(row0, 0, nrows, small.cols()),
    )
}

/// Final node vectors: kept columns through the secular vectors, deflated
/// columns copied, everything sorted by descending value.
pub fn merge_vectors(
    basis: &MergeBasis,
    outcome: &DeflationOutcome,
    omega: &[f64],
    umat: &Mat,
    vmat: &Mat,
) -> Result<SubproblemSVD> {
    let kept = &outcome.kept;
    let nk = kept.len();
    let (n1, n2) = (basis.n1, basis.n2);
    let n = n1 + n2 + 1;

    let vrows = basis.vb.rows();
    let mut vk = Mat::zeros(vrows, nk);
    block_product(&basis.vb, 0, basis.v_top, kept, &basis.v_support, Support::touches_top, vmat, &mut vk)?;
    block_product(
        &basis.vb,
        basis.v_top,
        vrows - basis.v_top,
        kept,
        &basis.v_support,
        Support::touches_bottom,
        vmat,
        &mut vk,
    )?;

    let wk = match &basis.wb {
        Some(wb) => {
            let mut wk = Mat::zeros(n, nk);
            block_product(wb, 0, n1, kept, &basis.w_support, Support::touches_top, umat, &mut wk)?;
            for c in 0..nk {
                wk[(n1, c)] = umat[(0, c)];
            }
            block_product(wb, n1 + 1, n2, kept, &basis.w_support, Support::touches_bottom, umat, &mut wk)?;
            Some(wk)
        }
        None => None,
    };

    enum Src {
        Kept(usize),
        Deflated(usize),
    }
    let mut entries: Vec<(f64, Src)> = omega.iter().enumerate().map(|(p, &w)| (w, Src::Kept(p))).collect();
    entries.extend(outcome.deflated.iter().map(|&(col, val)| (val, Src::Deflated(col))));
    entries.sort_by(|a, b| b.0.total_cmp(&a.0));

    let mut dvals = Vec::with_capacity(n);
    let mut qfull = Mat::zeros(vrows, n + basis.sqre);
    let mut w = wk.as_ref().map(|_| Mat::zeros(n, n));
    for (c, (val, src)) in entries.iter().enumerate() {
        dvals.push(*val);
        match *src {
            Src::Kept(p) => {
                qfull.col_mut(c).copy_from_slice(vk.col(p));
                if let (Some(w), Some(wk)) = (w.as_mut(), wk.as_ref()) {
                    w.col_mut(c).copy_from_slice(wk.col(p));
                }
            }
            Src::Deflated(col) => {
                qfull.col_mut(c).copy_from_slice(basis.vb.col(col));
                if let (Some(w), Some(wb)) = (w.as_mut(), basis.wb.as_ref()) {
                    w.col_mut(c).copy_from_slice(wb.col(col));
                }
            }
        }
    }
    if basis.sqre == 1 {
        qfull.col_mut(n).copy_from_slice(basis.vb.col(n));
    }
    Ok(SubproblemSVD {
        w,
        dvals,
        qfull,
        rows: basis.rows,
    })
}
