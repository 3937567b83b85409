//! Test matrices with prescribed singular value distributions.

use super::rng::SplitMix64;
use crate::dense::{gemm, Mat, Trans};
use crate::error::{contract, Result};
use crate::qr::{geqrf_blocked, orgqr};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixKind {
    /// Entries uniform in (0, 1).
    Random,
    /// `log(sigma)` uniform in `(log(1/cond), 0)`.
    Logrand,
    /// Arithmetic from 1 down to `1/cond`.
    Arith,
    /// Geometric from 1 down to `1/cond`.
    Geo,
}

impl MatrixKind {
    pub fn name(self) -> &'static str {
        match self {
            MatrixKind::Random => "random",
            MatrixKind::Logrand => "logrand",
            MatrixKind::Arith => "arith",
            MatrixKind::Geo => "geo",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatrixSpec {
    pub kind: MatrixKind,
    pub m: usize,
    pub n: usize,
    /// Ignored for `Random`.
    pub cond: f64,
    pub seed: u64,
}

/// A generated matrix and, for the prescribed-spectrum kinds, its singular
/// values in descending order.
#[derive(Debug, Clone)]
pub struct Generated {
    pub a: Mat,
    pub sigma: Option<Vec<f64>>,
}

/// Target singular values for `k = min(m, n)`. `Logrand` draws from `rng`.
pub fn sigma_profile(kind: MatrixKind, k: usize, cond: f64, rng: &mut SplitMix64) -> Vec<f64> {
    let t = |i: usize| if k == 1 { 0.0 } else { i as f64 / (k - 1) as f64 };
    let mut s: Vec<f64> = match kind {
        MatrixKind::Random => Vec::new(),
        MatrixKind::Geo => (0..k).map(|i| cond.powf(-t(i))).collect(),
        MatrixKind::Arith => (0..k).map(|i| 1.0 - t(i) * (1.0 - 1.0 / cond)).collect(),
        MatrixKind::Logrand => (0..k).map(|_| cond.powf(-rng.uniform())).collect(),
    };
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// `m x k` matrix with orthonormal columns: QR of a standard normal matrix,
/// columns signed so that `R` has a positive diagonal.
pub fn random_orthonormal(m: usize, k: usize, rng: &mut SplitMix64) -> Result<Mat> {
    let mut g = Mat::zeros(m, k);
    for v in g.as_mut_slice() {
        *v = rng.normal();
    }
    let f = geqrf_blocked(g, 32)?;
    let mut q = orgqr(&f, k, 64)?;
    for j in 0..k {
        if f.packed[(j, j)] < 0.0 {
            q.col_mut(j).iter_mut().for_each(|v| *v = -*v);
        }
    }
    Ok(q)
}

pub fn generate(spec: &MatrixSpec) -> Result<Generated> {
    let (m, n) = (spec.m, spec.n);
    if m == 0 || n == 0 {
        return Err(contract("generate_matrix", format!("empty {m}x{n} matrix")));
    }
    let mut rng = SplitMix64::new(spec.seed);
    if spec.kind == MatrixKind::Random {
        let mut a = Mat::zeros(m, n);
        for v in a.as_mut_slice() {
            *v = rng.uniform();
        }
        return Ok(Generated { a, sigma: None });
    }
    if !(spec.cond > 1.0 && spec.cond.is_finite()) {
        return Err(contract(
            "generate_matrix",
            format!("{} needs a finite condition number > 1, got {}", spec.kind.name(), spec.cond),
        ));
    }
    let k = m.min(n);
    let sigma = sigma_profile(spec.kind, k, spec.cond, &mut rng);
    let u = random_orthonormal(m, k, &mut rng)?;
    let v = random_orthonormal(n, k, &mut rng)?;
    let us = Mat::from_fn(m, k, |i, j| u[(i, j)] * sigma[j]);
    let mut a = Mat::zeros(m, n);
    gemm(1.0, us.as_ref(), Trans::No, v.as_ref(), Trans::Yes, 0.0, a.as_mut())?;
    Ok(Generated { a, sigma: Some(sigma) })
}

pub fn generate_matrix(spec: &MatrixSpec) -> Result<Mat> {
    generate(spec).map(|g| g.a)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(kind: MatrixKind, n: usize, cond: f64) -> MatrixSpec {
        MatrixSpec {
            kind,
            m: n,
            n,
            cond,
            seed: 3,
        }
    }

    #[test]
    fn geometric_profile() {
        let s = sigma_profile(MatrixKind::Geo, 3, 100.0, &mut SplitMix64::new(0));
        assert_eq!(s[0], 1.0);
        assert!((s[1] - 0.1).abs() <= 1e-16);
        assert!((s[2] - 0.01).abs() <= 1e-17);
    }

    #[test]
    fn arithmetic_profile() {
        let s = sigma_profile(MatrixKind::Arith, 3, 2.0, &mut SplitMix64::new(0));
        assert_eq!(s, vec![1.0, 0.75, 0.5]);
    }

    #[test]
    fn single_value_profiles() {
        for kind in [MatrixKind::Geo, MatrixKind::Arith] {
            assert_eq!(sigma_profile(kind, 1, 10.0, &mut SplitMix64::new(0)), vec![1.0]);
        }
    }

    #[test]
    fn logrand_stays_in_range() {
        let s = sigma_profile(MatrixKind::Logrand, 200, 1e6, &mut SplitMix64::new(9));
        assert!(s.iter().all(|&v| v > 1e-6 && v < 1.0));
        assert!(s.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn condition_must_exceed_one() {
        assert!(generate(&spec(MatrixKind::Geo, 4, 1.0)).is_err());
        assert!(generate(&spec(MatrixKind::Arith, 4, 0.5)).is_err());
        assert!(generate(&spec(MatrixKind::Random, 4, 1.0)).is_ok());
    }

    #[test]
    fn random_entries_in_unit_interval() {
        let a = generate_matrix(&spec(MatrixKind::Random, 10, 0.0)).unwrap();
        assert!(a.as_slice().iter().all(|&v| v > 0.0 && v < 1.0));
    }

    #[test]
    fn same_spec_same_bits() {
        for kind in [MatrixKind::Random, MatrixKind::Logrand, MatrixKind::Arith, MatrixKind::Geo] {
            let s = spec(kind, 12, 1e4);
            assert_eq!(generate_matrix(&s).unwrap(), generate_matrix(&s).unwrap());
        }
    }
}
