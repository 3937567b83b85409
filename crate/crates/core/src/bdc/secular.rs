//! Secular equation of the merge matrix
//!
//! ```text
//!     M = [ z_0  z_1  ...  z_{N-1} ]
//!         [      d_1               ]
//!         [           ...          ]
//!         [               d_{N-1}  ]
//! ```
//!
//! with `0 = d_0 < d_1 < ... < d_{N-1}`. Its singular values are the roots of
//! `f(w) = 1 + sum_j z_j^2 / (d_j^2 - w^2)`. Each root is kept as an anchor
//! pole `d_K` and an offset `mu = w^2 - d_K^2`, so every difference
//! `d_j^2 - w^2 = (d_j - d_K)(d_j + d_K) - mu` is formed without cancellation.

use crate::dense::Mat;
use crate::error::{LinalgError, Result};

const MAX_ITER: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub struct SecularSystem {
    pub d: Vec<f64>,
    pub z: Vec<f64>,
}

impl SecularSystem {
    pub fn new(d: Vec<f64>, z: Vec<f64>) -> Self {
        assert_eq!(d.len(), z.len());
        assert!(!d.is_empty());
        Self { d, z }
    }

    pub fn len(&self) -> usize {
        self.d.len()
    }

    pub fn is_empty(&self) -> bool {
        self.d.is_empty()
    }

    /// Upper bound on `||M||_2`.
    pub fn norm_bound(&self) -> f64 {
        let dn = *self.d.last().expect("non-empty");
        (dn * dn + self.z.iter().map(|v| v * v).sum::<f64>()).sqrt()
    }

    /// `d_j^2 - w^2` for a root given in shifted form.
    #[inline]
    pub fn gap_to(&self, j: usize, root: &SecularRoot) -> f64 {
        let dk = self.d[root.anchor];
        (self.d[j] - dk) * (self.d[j] + dk) - root.mu
    }

    /// `(f, sum of |terms|)` at a root given in shifted form.
    pub fn eval(&self, root: &SecularRoot) -> (f64, f64) {
        let mut f = 1.0;
        let mut scale = 1.0;
        for j in 0..self.len() {
            let t = self.z[j] * self.z[j] / self.gap_to(j, root);
            f += t;
            scale += t.abs();
        }
        (f, scale)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecularRoot {
    /// Index of the pole the root is measured from.
    pub anchor: usize,
    /// `omega^2 - d_anchor^2`.
    pub mu: f64,
    pub omega: f64,
}

impl SecularRoot {
    fn new(d: &[f64], anchor: usize, mu: f64) -> Self {
        let dk = d[anchor];
        Self {
            anchor,
            mu,
            omega: (dk * dk + mu).sqrt(),
        }
    }
}

struct Eval {
    f: f64,
    psi: f64,
    dpsi: f64,
    phi: f64,
    dphi: f64,
}

/// Splits `f` at `x` into the poles at or below `split` and those above.
fn eval_split(delta: &[f64], z2: &[f64], split: usize, x: f64) -> Eval {
    let (mut psi, mut dpsi, mut phi, mut dphi) = (0.0, 0.0, 0.0, 0.0);
    for j in 0..delta.len() {
        let inv = 1.0 / (delta[j] - x);
        let t = z2[j] * inv;
        if j <= split {
            psi += t;
            dpsi += t * inv;
        } else {
            phi += t;
            dphi += t * inv;
        }
    }
    Eval {
        f: 1.0 + psi + phi,
        psi,
        dpsi,
        phi,
        dphi,
    }
}

/// Step `tau` from `x` that zeroes the two-pole rational model of `f`, or
/// `None` if the model has no usable root.
fn model_step(ev: &Eval, p: f64, q: Option<f64>, x: f64) -> Option<f64> {
    let pd = p - x;
    let b = ev.dpsi * pd * pd;
    let a = ev.psi - ev.dpsi * pd;
    let Some(q) = q else {
        // only the psi group exists past the last pole
        let c = 1.0 + a;
        return if c > 0.0 { Some(pd + b / c) } else { None };
    };
    let qd = q - x;
    let bb = ev.dphi * qd * qd;
    let aa = ev.phi - ev.dphi * qd;
    let c = 1.0 + a + aa;
    let beta = c * (pd + qd) + b + bb;
    let gamma = pd * qd * ev.f;
    if c == 0.0 {
        return if beta != 0.0 { Some(gamma / beta) } else { None };
    }
    let disc = beta * beta - 4.0 * c * gamma;
    if disc < 0.0 {
        return None;
    }
    let sq = disc.sqrt();
    let (t1, t2) = if beta >= 0.0 {
        let den = beta + sq;
        ((den) / (2.0 * c), if den != 0.0 { 2.0 * gamma / den } else { 0.0 })
    } else {
        let den = beta - sq;
        (if den != 0.0 { 2.0 * gamma / den } else { 0.0 }, den / (2.0 * c))
    };
    // the wanted root lies strictly between the poles
    let inside = |t: f64| t > pd && t < qd;
    match (inside(t1), inside(t2)) {
        (true, false) => Some(t1),
        (false, true) => Some(t2),
        (true, true) => Some(if t1.abs() <= t2.abs() { t1 } else { t2 }),
        (false, false) => None,
    }
}

/// Finds root `i` (0-based, ascending) of the system.
pub fn solve_secular(sys: &SecularSystem, i: usize) -> Result<SecularRoot> {
    let n = sys.len();
    assert!(i < n, "root index {i} out of {n}");
    let d = &sys.d;
    let z2: Vec<f64> = sys.z.iter().map(|v| v * v).collect();
    let znorm2: f64 = z2.iter().sum();
    if n == 1 {
        return Ok(SecularRoot::new(d, 0, znorm2));
    }

    let (anchor, mut lo, mut hi, p, q) = if i == n - 1 {
        (i, 0.0, znorm2, 0.0, None)
    } else {
        let gap = (d[i + 1] - d[i]) * (d[i + 1] + d[i]);
        let delta: Vec<f64> = (0..n).map(|j| (d[j] - d[i]) * (d[j] + d[i])).collect();
        let mid = eval_split(&delta, &z2, i, gap / 2.0);
        if mid.f >= 0.0 {
            (i, 0.0, gap / 2.0, 0.0, Some(gap))
        } else {
            (i + 1, -gap / 2.0, 0.0, -gap, Some(0.0))
        }
    };
    let dk = d[anchor];
    let delta: Vec<f64> = (0..n).map(|j| (d[j] - dk) * (d[j] + dk)).collect();

    let n_f = n as f64;
    let u = f64::EPSILON / 2.0;
    let mut x = if anchor == i { lo + (hi - lo) / 4.0 } else { hi - (hi - lo) / 4.0 };
    if i == n - 1 {
        x = hi / 2.0;
    }
    for _ in 0..MAX_ITER {
        let ev = eval_split(&delta, &z2, i, x);
        let scale = 1.0 + ev.psi.abs() + ev.phi.abs() + x.abs() * (ev.dpsi + ev.dphi);
        if ev.f.abs() <= n_f * u * scale {
            return Ok(SecularRoot::new(d, anchor, x));
        }
        if ev.f < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let width = hi - lo;
        if width <= 2.0 * u * lo.abs().max(hi.abs()) || width <= f64::MIN_POSITIVE {
            return Ok(SecularRoot::new(d, anchor, x));
        }
        let next = model_step(&ev, p, q, x).map(|t| x + t);
        let next = match next {
            Some(t) if t > lo && t < hi => t,
            _ => lo + width / 2.0,
        };
        if (next - x).abs() <= u * x.abs() {
            return Ok(SecularRoot::new(d, anchor, x));
        }
        x = next;
    }
    Err(LinalgError::NoConvergence {
        op: "secular equation",
        iterations: MAX_ITER,
    })
}

pub fn solve_all(sys: &SecularSystem) -> Result<Vec<SecularRoot>> {
    (0..sys.len()).map(|i| solve_secular(sys, i)).collect()
}

/// Recomputes `z` so that the computed roots are exact singular values of
/// the perturbed matrix (Loewner formula); signs are taken from the input.
pub fn recompute_z(sys: &SecularSystem, roots: &[SecularRoot]) -> Vec<f64> {
    let n = sys.len();
    let d = &sys.d;
    let diff = |i: usize, j: usize| (d[i] - d[j]) * (d[i] + d[j]);
    (0..n)
        .map(|i| {
            // omega_k^2 - d_i^2 = -(d_i^2 - omega_k^2)
            let w = |k: usize| -sys.gap_to(i, &roots[k]);
            let mut prod = w(n - 1);
            for k in 0..i {
                prod *= w(k) / diff(k, i);
            }
            for k in i..n - 1 {
                prod *= w(k) / diff(k + 1, i);
            }
            debug_assert!(prod >= 0.0, "interlacing violated at {i}: {prod}");
            prod.max(0.0).sqrt().copysign(sys.z[i])
        })
        .collect()
}

/// Left and right singular vectors of `M` (columns ordered like `roots`),
/// built from the supplied `z` (normally the recomputed one).
pub fn secular_vectors(d: &[f64], z: &[f64], roots: &[SecularRoot]) -> (Mat, Mat) {
    let n = d.len();
    let sys = SecularSystem::new(d.to_vec(), z.to_vec());
    let mut umat = Mat::zeros(n, n);
    let mut vmat = Mat::zeros(n, n);
    for (c, root) in roots.iter().enumerate() {
        let v = vmat.col_mut(c);
        for j in 0..n {
            v[j] = z[j] / sys.gap_to(j, root);
        }
        let vn = crate::dense::blas::nrm2(v);
        for x in v.iter_mut() {
            *x /= vn;
        }
        let u = umat.col_mut(c);
        u[0] = -1.0;
        for j in 1..n {
            u[j] = d[j] * z[j] / sys.gap_to(j, root);
        }
        let un = crate::dense::blas::nrm2(u);
        for x in u.iter_mut() {
            *x /= un;
        }
    }
    (umat, vmat)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn golden() -> SecularSystem {
        SecularSystem::new(vec![0.0, 1.0], vec![1.0, 1.0])
    }

    #[test]
    fn golden_ratio_roots() {
        let sys = golden();
        let roots = solve_all(&sys).unwrap();
        let s5 = 5f64.sqrt();
        let w0 = roots[0].omega * roots[0].omega;
        let w1 = roots[1].omega * roots[1].omega;
        assert!((w0 - (3.0 - s5) / 2.0).abs() <= 1e-14 * (3.0 - s5) / 2.0);
        assert!((w1 - (3.0 + s5) / 2.0).abs() <= 1e-14 * (3.0 + s5) / 2.0);
    }

    #[test]
    fn single_pole() {
        let sys = SecularSystem::new(vec![0.0], vec![-0.75]);
        let r = solve_secular(&sys, 0).unwrap();
        assert_eq!(r.omega, 0.75);
        assert_eq!(recompute_z(&sys, &[r]), vec![-0.75]);
        let (u, v) = secular_vectors(&sys.d, &sys.z, &[r]);
        assert_eq!(u[(0, 0)], -1.0);
        assert_eq!(v[(0, 0)].abs(), 1.0);
    }

    #[test]
    fn golden_ratio_recomputed_z_and_vectors() {
        let sys = golden();
        let roots = solve_all(&sys).unwrap();
        let zt = recompute_z(&sys, &roots);
        assert!((zt[0] - 1.0).abs() < 1e-14 && (zt[1] - 1.0).abs() < 1e-14);
        let (_, v) = secular_vectors(&sys.d, &zt, &roots);
        let (a, b) = (-2.618_033_988_749_895, 1.618_033_988_749_895);
        let nrm = f64::hypot(a, b);
        assert!((v[(0, 0)] - a / nrm).abs() < 1e-14);
        assert!((v[(1, 0)] - b / nrm).abs() < 1e-14);
    }
}
