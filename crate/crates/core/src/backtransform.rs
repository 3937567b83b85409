//! Back-transformation of the bidiagonal singular vectors.
//!
//! Column reflectors of a factorization are applied from the left, row
//! reflectors from the right, a panel at a time through the same `T^{-1}`
//! block reflectors the QR code uses.

use crate::bidiag::BidiagonalFactorization;
use crate::dense::{Mat, MatMut, MatRef, Side, Trans};
use crate::error::{contract, mismatch, Result};
use crate::qr::{apply_block_reflector_left, apply_block_reflector_right, build_tinv, QRFactorization};

pub const DEFAULT_APPLY_BLOCK: usize = 64;

/// Reflectors `H_0 H_1 ... H_{k-1}` read from a packed factor.
///
/// With `side = Left` reflector `i` lives in column `i` of `storage`, has its
/// unit entry in row `i + offset` and its essential part below. With
/// `side = Right` the same holds with rows and columns swapped.
#[derive(Clone, Copy)]
pub struct ReflectorSequence<'a> {
    pub storage: MatRef<'a>,
    pub tau: &'a [f64],
    pub side: Side,
    pub offset: usize,
}

impl<'a> ReflectorSequence<'a> {
    pub fn new(storage: MatRef<'a>, tau: &'a [f64], side: Side, offset: usize) -> Result<Self> {
        let seq = Self {
            storage,
            tau,
            side,
            offset,
        };
        let (len, slots) = match side {
            Side::Left => (storage.rows(), storage.cols()),
            Side::Right => (storage.cols(), storage.rows()),
        };
        if tau.len() > slots || tau.len() + offset > len.max(offset) {
            return Err(contract(
                "ReflectorSequence",
                format!("{} reflectors at offset {offset} do not fit a {len}-vector store", tau.len()),
            ));
        }
        Ok(seq)
    }

    /// The left factor `U_1` of a bidiagonalization.
    pub fn column_reflectors(f: &'a BidiagonalFactorization) -> Self {
        Self {
            storage: f.packed.as_ref(),
            tau: &f.tauq,
            side: Side::Left,
            offset: 0,
        }
    }

    /// The right factor `V_1` of a bidiagonalization.
    pub fn row_reflectors(f: &'a BidiagonalFactorization) -> Self {
        let k = f.packed.cols().saturating_sub(1);
        Self {
            storage: f.packed.as_ref(),
            tau: &f.taup[..k],
            side: Side::Right,
            offset: 1,
        }
    }

    pub fn from_qr(f: &'a QRFactorization) -> Self {
        Self {
            storage: f.packed.as_ref(),
            tau: &f.tau,
            side: Side::Left,
            offset: 0,
        }
    }

    /// Length of the vectors the reflectors act on.
    pub fn dim(&self) -> usize {
        match self.side {
            Side::Left => self.storage.rows(),
            Side::Right => self.storage.cols(),
        }
    }

    pub fn len(&self) -> usize {
        self.tau.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tau.is_empty()
    }

    fn stored(&self, coord: usize, refl: usize) -> f64 {
        match self.side {
            Side::Left => self.storage.get(coord, refl),
            Side::Right => self.storage.get(refl, coord),
        }
    }

    /// Explicit unit lower-trapezoidal `Y` for reflectors `j..j+jb`, rows
    /// starting at coordinate `j + offset`.
    pub fn panel_y(&self, j: usize, jb: usize) -> Mat {
        let start = j + self.offset;
        Mat::from_fn(self.dim() - start, jb, |r, c| match r.cmp(&c) {
            std::cmp::Ordering::Less => 0.0,
            std::cmp::Ordering::Equal => 1.0,
            std::cmp::Ordering::Greater => self.stored(start + r, j + c),
        })
    }
}

/// `C <- H C` / `H^T C` for left sequences, `C H` / `C H^T` for right ones,
/// where `H = H_0 H_1 ... H_{k-1}`.
pub fn apply_sequence(seq: &ReflectorSequence<'_>, mut c: MatMut<'_>, trans: Trans, b: usize) -> Result<()> {
    if b == 0 {
        return Err(contract("apply_sequence", "block width must be positive"));
    }
    let dim = seq.dim();
    let cdim = match seq.side {
        Side::Left => c.rows(),
        Side::Right => c.cols(),
    };
    if cdim != dim {
        return Err(mismatch(
            "apply_sequence",
            format!("reflectors act on {dim}-vectors, C is {}x{}", c.rows(), c.cols()),
        ));
    }
    let k = seq.len();
    let starts: Vec<usize> = (0..k).step_by(b).collect();
    // H C and C H^T consume the panels last to first
    let reverse = matches!((seq.side, trans), (Side::Left, Trans::No) | (Side::Right, Trans::Yes));
    let order: Box<dyn Iterator<Item = &usize>> = if reverse {
        Box::new(starts.iter().rev())
    } else {
        Box::new(starts.iter())
    };
    for &j in order {
        let jb = b.min(k - j);
        let block = build_tinv(seq.panel_y(j, jb), &seq.tau[j..j + jb])?;
        let start = j + seq.offset;
        let len = dim - start;
        match seq.side {
            Side::Left => {
                let cols = c.cols();
                apply_block_reflector_left(&block, c.rb_mut().submatrix(start, 0, len, cols), trans)?;
            }
            Side::Right => {
                let rows = c.rows();
                apply_block_reflector_right(&block, c.rb_mut().submatrix(0, start, rows, len), trans)?;
            }
        }
    }
    Ok(())
}

/// Column-reflector application from the left.
pub fn ormqr_like(seq: &ReflectorSequence<'_>, c: MatMut<'_>, trans: Trans, b: usize) -> Result<()> {
    if seq.side != Side::Left || seq.offset != 0 {
        return Err(contract("ormqr_like", "expects column reflectors with offset 0"));
    }
    apply_sequence(seq, c, trans, b)
}

/// Row-reflector application from the right.
pub fn ormlq_like(seq: &ReflectorSequence<'_>, c: MatMut<'_>, trans: Trans, b: usize) -> Result<()> {
    if seq.side != Side::Right || seq.offset != 1 {
        return Err(contract("ormlq_like", "expects row reflectors with offset 1"));
    }
    apply_sequence(seq, c, trans, b)
}
