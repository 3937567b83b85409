//! Dense SVD driver.
//!
//! Square-ish inputs go bidiagonalization -> divide and conquer ->
//! back-transformation. Tall-skinny inputs are first reduced by QR and the
//! small triangular factor takes the square path.

use std::time::Instant;

use crate::backtransform::{ormlq_like, ormqr_like, ReflectorSequence, DEFAULT_APPLY_BLOCK};
use crate::bdc::{bdsdc, BdcOptions, BidiagonalProblem};
use crate::bidiag::gebrd_blocked;
use crate::dense::{gemm, Mat, Trans};
use crate::error::{contract, Result};
use crate::qr::{extract_r, geqrf_blocked, orgqr};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Jobz {
    ValuesOnly,
    /// `U` is `m x min(m, n)`, `Vt` is `min(m, n) x n`.
    Economy,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SVDOptions {
    pub jobz: Jobz,
    pub bidiag_block: usize,
    pub qr_block: usize,
    pub orgqr_block: usize,
    pub apply_block: usize,
    pub leaf_size: usize,
    /// QR-first path when `m >= ts_crossover * n`; `INFINITY` disables it.
    pub ts_crossover: f64,
    pub deflation_multiple: f64,
}

impl Default for SVDOptions {
    fn default() -> Self {
        Self {
            jobz: Jobz::Economy,
            bidiag_block: 32,
            qr_block: 32,
            orgqr_block: 64,
            apply_block: DEFAULT_APPLY_BLOCK,
            leaf_size: 32,
            ts_crossover: 5.0 / 3.0,
            deflation_multiple: 8.0,
        }
    }
}

impl SVDOptions {
    pub fn validate(&self) -> Result<()> {
        let widths = [
            ("bidiag_block", self.bidiag_block),
            ("qr_block", self.qr_block),
            ("orgqr_block", self.orgqr_block),
            ("apply_block", self.apply_block),
            ("leaf_size", self.leaf_size),
        ];
        for (name, w) in widths {
            if w == 0 {
                return Err(contract("SVDOptions", format!("{name} must be at least 1")));
            }
        }
        if self.ts_crossover.is_nan() || self.ts_crossover <= 1.0 {
            return Err(contract("SVDOptions", format!("ts_crossover must exceed 1, got {}", self.ts_crossover)));
        }
        if !(self.deflation_multiple > 0.0 && self.deflation_multiple.is_finite()) {
            return Err(contract(
                "SVDOptions",
                format!("deflation_multiple must be positive, got {}", self.deflation_multiple),
            ));
        }
        Ok(())
    }

    fn bdc(&self) -> BdcOptions {
        BdcOptions {
            leaf: self.leaf_size,
            deflation_multiple: self.deflation_multiple,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SVDResult {
    pub sigma: Vec<f64>,
    pub u: Option<Mat>,
    pub vt: Option<Mat>,
}

pub const PHASES: [&str; 6] = ["geqrf", "orgqr", "gebrd", "bdcdc", "ormqr+ormlq", "gemm"];

/// Wall time per pipeline phase, in the order of [`PHASES`].
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseProfile {
    pub phases: Vec<(&'static str, f64)>,
    pub total: f64,
}

impl PhaseProfile {
    fn new() -> Self {
        Self {
            phases: PHASES.iter().map(|&p| (p, 0.0)).collect(),
            total: 0.0,
        }
    }

    pub fn get(&self, phase: &str) -> Option<f64> {
        self.phases.iter().find(|(p, _)| *p == phase).map(|(_, s)| *s)
    }

    fn time<T>(&mut self, phase: &str, f: impl FnOnce() -> T) -> T {
        let t0 = Instant::now();
        let out = f();
        let dt = t0.elapsed().as_secs_f64();
        let slot = self.phases.iter_mut().find(|(p, _)| *p == phase).expect("known phase");
        slot.1 += dt;
        out
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("phase,seconds\n");
        for (p, t) in &self.phases {
            s.push_str(&format!("{p},{t:.9}\n"));
        }
        s
    }
}

pub fn gesdd(a: &Mat, opts: &SVDOptions) -> Result<SVDResult> {
    gesdd_profiled(a, opts, &mut PhaseProfile::new())
}

pub fn phase_profile(a: &Mat, opts: &SVDOptions) -> Result<PhaseProfile> {
    let mut prof = PhaseProfile::new();
    let t0 = Instant::now();
    gesdd_profiled(a, opts, &mut prof)?;
    prof.total = t0.elapsed().as_secs_f64();
    Ok(prof)
}

fn gesdd_profiled(a: &Mat, opts: &SVDOptions, prof: &mut PhaseProfile) -> Result<SVDResult> {
    let (m, n) = (a.rows(), a.cols());
    if m == 0 || n == 0 {
        return Err(contract("gesdd", format!("empty {m}x{n} input")));
    }
    opts.validate()?;
    if m >= n {
        return tall(a.clone(), opts, prof);
    }
    // A^T = V S U^T
    let r = tall(a.transpose(), opts, prof)?;
    Ok(SVDResult {
        sigma: r.sigma,
        u: r.vt.map(|vt| vt.transpose()),
        vt: r.u.map(|u| u.transpose()),
    })
}

fn tall(a: Mat, opts: &SVDOptions, prof: &mut PhaseProfile) -> Result<SVDResult> {
    let (m, n) = (a.rows(), a.cols());
    if (m as f64) < opts.ts_crossover * n as f64 {
        return square(a, opts, prof);
    }
    let fact = prof.time("geqrf", || geqrf_blocked(a, opts.qr_block))?;
    let r = extract_r(&fact);
    let inner = square(r, opts, prof)?;
    let Some(u0) = inner.u else {
        return Ok(inner);
    };
    let q = prof.time("orgqr", || orgqr(&fact, n, opts.orgqr_block))?;
    let mut u = Mat::zeros(m, n);
    prof.time("gemm", || gemm(1.0, q.as_ref(), Trans::No, u0.as_ref(), Trans::No, 0.0, u.as_mut()))?;
    Ok(SVDResult {
        sigma: inner.sigma,
        u: Some(u),
        vt: inner.vt,
    })
}

fn square(a: Mat, opts: &SVDOptions, prof: &mut PhaseProfile) -> Result<SVDResult> {
    let (m, n) = (a.rows(), a.cols());
    let want = opts.jobz == Jobz::Economy;
    let f = prof.time("gebrd", || gebrd_blocked(a, opts.bidiag_block))?;
    let prob = BidiagonalProblem::new(f.d.clone(), f.e.clone(), false)?;
    let s = prof.time("bdcdc", || bdsdc(&prob, want, &opts.bdc()))?;
    if !want {
        return Ok(SVDResult {
            sigma: s.dvals,
            u: None,
            vt: None,
        });
    }
    let w = s.w.expect("vectors requested");
    let (u, vt) = prof.time("ormqr+ormlq", || -> Result<(Mat, Mat)> {
        let mut u = Mat::zeros(m, n);
        u.submatrix_mut(0, 0, n, n).copy_from(w.as_ref());
        ormqr_like(&ReflectorSequence::column_reflectors(&f), u.as_mut(), Trans::No, opts.apply_block)?;
        let mut vt = s.qfull.transpose();
        ormlq_like(&ReflectorSequence::row_reflectors(&f), vt.as_mut(), Trans::Yes, opts.apply_block)?;
        Ok((u, vt))
    })?;
    Ok(SVDResult {
        sigma: s.dvals,
        u: Some(u),
        vt: Some(vt),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_input() {
        let a = Mat::from_diag(&[3.0, 2.0, 1.0]);
        let r = gesdd(&a, &SVDOptions::default()).unwrap();
        assert_eq!(r.sigma, vec![3.0, 2.0, 1.0]);
        let (u, vt) = (r.u.unwrap(), r.vt.unwrap());
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((u[(i, j)].abs() - want).abs() < 1e-15);
                assert!((vt[(i, j)].abs() - want).abs() < 1e-15);
            }
            // signs of U and V columns must pair up
            assert!(u[(i, i)] * vt[(i, i)] > 0.0);
        }
    }

    #[test]
    fn identity_has_unit_values() {
        let r = gesdd(&Mat::identity(40), &SVDOptions::default()).unwrap();
        assert!(r.sigma.iter().all(|&s| (s - 1.0).abs() < 1e-15));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(gesdd(&Mat::zeros(0, 3), &SVDOptions::default()).is_err());
        let opts = SVDOptions {
            ts_crossover: 1.0,
            ..SVDOptions::default()
        };
        assert!(gesdd(&Mat::identity(2), &opts).is_err());
        let opts = SVDOptions {
            leaf_size: 0,
            ..SVDOptions::default()
        };
        assert!(gesdd(&Mat::identity(2), &opts).is_err());
    }

    #[test]
    fn values_only_profile_skips_back_transform() {
        let a = Mat::from_fn(50, 20, |i, j| ((i * 3 + j * 5) % 7) as f64 + 0.01 * i as f64);
        let opts = SVDOptions {
            jobz: Jobz::ValuesOnly,
            ts_crossover: f64::INFINITY,
            ..SVDOptions::default()
        };
        let p = phase_profile(&a, &opts).unwrap();
        assert_eq!(p.get("ormqr+ormlq"), Some(0.0));
        assert_eq!(p.get("gemm"), Some(0.0));
        assert_eq!(p.phases.len(), PHASES.len());
        assert!(p.to_csv().starts_with("phase,seconds\n"));
    }
}
