//! Deflation of the merge system before the secular solve.
//!
//! Entries of `z` below the tolerance decouple their `d` value outright.
//! Two `d` values closer than the tolerance are merged by a rotation that
//! moves all of their `z` weight onto one of them; the other becomes a
//! decoupled value.

use super::secular::SecularSystem;
use crate::dense::{givens_generate, GivensRotation};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RotationKind {
    /// Rotation of right-basis columns only (partner of `d_0 = 0`).
    RightOnly,
    /// Same rotation on both left and right basis columns.
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeflationRotation {
    pub kind: RotationKind,
    /// Original column indices; `i` keeps the combined weight, `j` is deflated.
    pub i: usize,
    pub j: usize,
    pub g: GivensRotation,
}

#[derive(Debug, Clone)]
pub struct DeflationOutcome {
    /// Surviving system, `d` ascending with `d[0] = 0`.
    pub system: SecularSystem,
    /// Original column index of each surviving entry; `kept[0] = 0`.
    pub kept: Vec<usize>,
    /// `(original column index, value)` of every deflated entry.
    pub deflated: Vec<(usize, f64)>,
    /// Rotations in the order they must be applied to the bases.
    pub rotations: Vec<DeflationRotation>,
    pub tol: f64,
}

/// Deflates the system `(d, z)` with `d[0] = 0`; tolerance is
/// `multiple * u * max(|d|, |z|)`.
pub fn deflate(d: &[f64], z: &[f64], multiple: f64) -> DeflationOutcome {
    let n = d.len();
    assert_eq!(z.len(), n);
    assert!(n >= 1 && d[0] == 0.0, "first pole must be zero");
    let u = f64::EPSILON / 2.0;
    let scale = d.iter().chain(z).fold(0.0f64, |m, v| m.max(v.abs()));
    let tol = multiple * u * scale;

    let mut order: Vec<usize> = (1..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]).then(a.cmp(&b)));

    let mut zw = z.to_vec();
    if zw[0].abs() <= tol {
        zw[0] = if zw[0] < 0.0 { -tol } else { tol };
    }
    let mut kept = vec![0usize];
    let mut deflated = Vec::new();
    let mut rotations = Vec::new();
    let mut prev = 0usize;
    for &k in &order {
        if zw[k].abs() <= tol {
            zw[k] = 0.0;
            deflated.push((k, d[k]));
            continue;
        }
        if (d[k] - d[prev]).abs() <= tol {
            let (g, r) = givens_generate(zw[prev], zw[k]);
            let kind = if prev == 0 { RotationKind::RightOnly } else { RotationKind::Both };
            rotations.push(DeflationRotation { kind, i: prev, j: k, g });
            zw[prev] = r;
            zw[k] = 0.0;
            deflated.push((k, d[k]));
            continue;
        }
        kept.push(k);
        prev = k;
    }
    let system = SecularSystem::new(kept.iter().map(|&k| d[k]).collect(), kept.iter().map(|&k| zw[k]).collect());
    DeflationOutcome {
        system,
        kept,
        deflated,
        rotations,
        tol,
    }
}
