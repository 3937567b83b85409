//! Accuracy metrics of a computed SVD.

use crate::dense::{gemm, Mat, Trans};
use crate::driver::SVDResult;

/// `e_sigma = ||S1 - S2||_F / k`, `e_svd = ||A - U S Vt||_F / ||A||_F`,
/// `orth_u = ||U^T U - I||_F`, `orth_v = ||Vt Vt^T - I||_F`. Entries that
/// need vectors or a reference are absent when those are.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AccuracyReport {
    pub e_sigma: Option<f64>,
    pub e_svd: Option<f64>,
    pub orth_u: Option<f64>,
    pub orth_v: Option<f64>,
}

impl AccuracyReport {
    /// Largest of the present metrics.
    pub fn worst(&self) -> f64 {
        [self.e_sigma, self.e_svd, self.orth_u, self.orth_v]
            .into_iter()
            .flatten()
            .fold(0.0, f64::max)
    }
}

pub fn sigma_error(computed: &[f64], reference: &[f64]) -> f64 {
    assert_eq!(computed.len(), reference.len());
    let ss: f64 = computed.iter().zip(reference).map(|(a, b)| (a - b) * (a - b)).sum();
    ss.sqrt() / computed.len().max(1) as f64
}

/// `||G - I||_F` for the Gram matrix of `x` (`x^T x`, or `x x^T` when `rows`).
fn gram_error(x: &Mat, rows: bool) -> f64 {
    let (ta, tb, k) = if rows { (Trans::No, Trans::Yes, x.rows()) } else { (Trans::Yes, Trans::No, x.cols()) };
    let mut g = Mat::zeros(k, k);
    gemm(1.0, x.as_ref(), ta, x.as_ref(), tb, 0.0, g.as_mut()).expect("conformal");
    for i in 0..k {
        g[(i, i)] -= 1.0;
    }
    g.frobenius_norm()
}

pub fn accuracy(a: &Mat, result: &SVDResult, reference_sigma: Option<&[f64]>) -> AccuracyReport {
    let mut rep = AccuracyReport {
        e_sigma: reference_sigma.map(|r| sigma_error(&result.sigma, r)),
        ..AccuracyReport::default()
    };
    if let (Some(u), Some(vt)) = (&result.u, &result.vt) {
        let k = result.sigma.len();
        let us = Mat::from_fn(u.rows(), k, |i, j| u[(i, j)] * result.sigma[j]);
        let mut r = a.clone();
        gemm(-1.0, us.as_ref(), Trans::No, vt.as_ref(), Trans::No, 1.0, r.as_mut()).expect("conformal");
        let an = a.frobenius_norm();
        let rn = r.frobenius_norm();
        rep.e_svd = Some(if an > 0.0 { rn / an } else { rn });
        rep.orth_u = Some(gram_error(u, false));
        rep.orth_v = Some(gram_error(vt, true));
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_factors_give_zero() {
        let u = Mat::identity(3);
        let vt = Mat::from_rows(&[&[0.0, 1.0, 0.0], &[1.0, 0.0, 0.0], &[0.0, 0.0, 1.0]]);
        let sigma = vec![4.0, 2.0, 0.5];
        let a = Mat::from_rows(&[&[0.0, 4.0, 0.0], &[2.0, 0.0, 0.0], &[0.0, 0.0, 0.5]]);
        let res = SVDResult {
            sigma: sigma.clone(),
            u: Some(u),
            vt: Some(vt),
        };
        let rep = accuracy(&a, &res, Some(&sigma));
        assert_eq!(rep.e_sigma, Some(0.0));
        assert_eq!(rep.e_svd, Some(0.0));
        assert_eq!(rep.orth_u, Some(0.0));
        assert_eq!(rep.orth_v, Some(0.0));
        assert_eq!(rep.worst(), 0.0);
    }

    #[test]
    fn sigma_error_formula() {
        // sqrt(3^2 + 4^2) / 2
        assert_eq!(sigma_error(&[4.0, 1.0], &[1.0, 5.0]), 2.5);
    }

    #[test]
    fn values_only_reports_sigma_error_only() {
        let res = SVDResult {
            sigma: vec![1.0],
            u: None,
            vt: None,
        };
        let rep = accuracy(&Mat::identity(1), &res, None);
        assert_eq!(rep, AccuracyReport::default());
    }
}
