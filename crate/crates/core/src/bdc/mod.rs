//! Divide and conquer for the bidiagonal SVD.
//!
//! A problem is split at its middle row into two bordered halves, each half
//! is solved recursively (QR iteration at the leaves), and the halves are
//! glued together through the secular equation of a rank-one bordered
//! diagonal matrix.

pub mod bdsqr;
pub mod deflate;
pub mod merge;
pub mod secular;

pub use bdsqr::bdsqr_base;
pub use deflate::{deflate, DeflationOutcome};
pub use secular::{recompute_z, secular_vectors, solve_secular, SecularRoot, SecularSystem};

use crate::dense::Mat;
use crate::error::{contract, Result};

/// Upper bidiagonal `n x n` matrix, or `n x (n+1)` when `bordered`
/// (then `e` has `n` entries and the last one sits in the extra column).
#[derive(Debug, Clone, PartialEq)]
pub struct BidiagonalProblem {
    pub d: Vec<f64>,
    pub e: Vec<f64>,
    pub bordered: bool,
}

impl BidiagonalProblem {
    pub fn new(d: Vec<f64>, e: Vec<f64>, bordered: bool) -> Result<Self> {
        let n = d.len();
        let want = if bordered { n } else { n.saturating_sub(1) };
        if (!bordered && n == 0) || e.len() != want {
            return Err(contract(
                "BidiagonalProblem",
                format!("n = {n}, bordered = {bordered}, but e has {} entries", e.len()),
            ));
        }
        Ok(Self { d, e, bordered })
    }

    pub fn n(&self) -> usize {
        self.d.len()
    }

    pub fn cols(&self) -> usize {
        self.n() + usize::from(self.bordered)
    }

    /// Dense form, handy for checks.
    pub fn to_dense(&self) -> Mat {
        let n = self.n();
        Mat::from_fn(n, self.cols(), |i, j| {
            if i == j {
                self.d[i]
            } else if j == i + 1 {
                self.e[i]
            } else {
                0.0
            }
        })
    }
}

/// Which rows of the right singular vectors a solve keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowSelection {
    All,
    /// Only the first and last rows, which is all a parent merge reads.
    Ends,
}

/// `B = W [diag(dvals) 0] Qfull^T`, values descending. `qfull` holds the
/// rows chosen by `rows`; its last column is the null vector when bordered.
#[derive(Debug, Clone)]
pub struct SubproblemSVD {
    pub w: Option<Mat>,
    pub dvals: Vec<f64>,
    pub qfull: Mat,
    pub rows: RowSelection,
}

/// Split of a problem at row `k - 1` (0-based), i.e. `k = floor(n/2)`.
#[derive(Debug, Clone)]
pub struct BdcNode {
    pub k: usize,
    pub alpha: f64,
    pub beta: f64,
    pub left: BidiagonalProblem,
    pub right: BidiagonalProblem,
}

#[derive(Debug, Clone, Copy)]
pub struct BdcOptions {
    pub leaf: usize,
    pub deflation_multiple: f64,
}

impl Default for BdcOptions {
    fn default() -> Self {
        Self {
            leaf: 32,
            deflation_multiple: 8.0,
        }
    }
}

pub fn split(prob: &BidiagonalProblem) -> BdcNode {
    let n = prob.n();
    assert!(n >= 2, "cannot split a problem of size {n}");
    let k = n / 2;
    let r = k - 1;
    let left = BidiagonalProblem {
        d: prob.d[..r].to_vec(),
        e: prob.e[..r].to_vec(),
        bordered: true,
    };
    let right = BidiagonalProblem {
        d: prob.d[r + 1..].to_vec(),
        e: prob.e[r + 1..].to_vec(),
        bordered: prob.bordered,
    };
    BdcNode {
        k,
        alpha: prob.d[r],
        beta: prob.e[r],
        left,
        right,
    }
}

/// Everything a single merge produces, exposed for inspection in tests.
#[derive(Debug, Clone)]
pub struct MergeTrace {
    pub d: Vec<f64>,
    pub z: Vec<f64>,
    pub outcome: DeflationOutcome,
    pub roots: Vec<SecularRoot>,
    pub result: SubproblemSVD,
}

/// Merges two solved children of `node`.
pub fn merge_node(
    node: &BdcNode,
    left: &SubproblemSVD,
    right: &SubproblemSVD,
    bordered: bool,
    opts: &BdcOptions,
) -> Result<MergeTrace> {
    let (d, z, c0, s0) = merge::build_z(node.alpha, node.beta, left, right, bordered);
    let outcome = deflate(&d, &z, opts.deflation_multiple);
    let roots = secular::solve_all(&outcome.system)?;
    let zt = recompute_z(&outcome.system, &roots);
    let (umat, vmat) = secular_vectors(&outcome.system.d, &zt, &roots);
    let mut basis = merge::build_basis(left, right, c0, s0, bordered);
    merge::apply_rotations(&mut basis, &outcome);
    let omega: Vec<f64> = roots.iter().map(|r| r.omega).collect();
    let result = merge::merge_vectors(&basis, &outcome, &omega, &umat, &vmat)?;
    Ok(MergeTrace {
        d,
        z,
        outcome,
        roots,
        result,
    })
}

fn solve(prob: &BidiagonalProblem, want_w: bool, rows: RowSelection, opts: &BdcOptions) -> Result<SubproblemSVD> {
    if prob.n() <= opts.leaf.max(1) {
        return bdsqr::bdsqr_tracked(prob, want_w, rows);
    }
    let node = split(prob);
    let left = solve(&node.left, want_w, rows, opts)?;
    let right = solve(&node.right, want_w, rows, opts)?;
    Ok(merge_node(&node, &left, &right, prob.bordered, opts)?.result)
}

/// Divide-and-conquer SVD of a bidiagonal problem. Without vectors only the
/// end rows of the right vectors are carried, which the merges need; the
/// values follow exactly the same arithmetic in both modes.
pub fn bdsdc(prob: &BidiagonalProblem, want_vectors: bool, opts: &BdcOptions) -> Result<SubproblemSVD> {
    if opts.leaf == 0 {
        return Err(contract("bdsdc", "leaf size must be positive"));
    }
    if opts.deflation_multiple.is_nan() || opts.deflation_multiple <= 0.0 {
        return Err(contract("bdsdc", "deflation multiple must be positive"));
    }
    let rows = if want_vectors { RowSelection::All } else { RowSelection::Ends };
    let big = prob.d.iter().chain(&prob.e).fold(0.0f64, |m, v| m.max(v.abs()));
    if big == 0.0 || prob.n() == 0 {
        return bdsqr::bdsqr_tracked(prob, want_vectors, rows);
    }
    // power-of-two normalisation keeps the scaling exact
    let scale = 2f64.powi(big.log2().floor() as i32);
    let scaled = BidiagonalProblem {
        d: prob.d.iter().map(|v| v / scale).collect(),
        e: prob.e.iter().map(|v| v / scale).collect(),
        bordered: prob.bordered,
    };
    let mut out = solve(&scaled, want_vectors, rows, opts)?;
    for v in out.dvals.iter_mut() {
        *v *= scale;
    }
    Ok(out)
}
