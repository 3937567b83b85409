//! Implicit-shift QR iteration for small bidiagonal problems (the leaves of
//! the divide-and-conquer tree).

use super::{BidiagonalProblem, RowSelection, SubproblemSVD};
use crate::dense::{givens_generate, rotate_columns, GivensRotation, Mat};
use crate::error::{LinalgError, Result};

/// Singular values of the 2x2 upper triangular `[[f, g], [0, h]]` as
/// `(smaller, larger)`, computed without overflow.
pub fn las2(f: f64, g: f64, h: f64) -> (f64, f64) {
    let (fa, ga, ha) = (f.abs(), g.abs(), h.abs());
    let fhmn = fa.min(ha);
    let fhmx = fa.max(ha);
    if fhmn == 0.0 {
        let ssmax = if fhmx == 0.0 {
            ga
        } else {
            let (mx, mn) = (fhmx.max(ga), fhmx.min(ga));
            mx * (1.0 + (mn / mx) * (mn / mx)).sqrt()
        };
        return (0.0, ssmax);
    }
    if ga < fhmx {
        let as_ = 1.0 + fhmn / fhmx;
        let at = (fhmx - fhmn) / fhmx;
        let au = (ga / fhmx) * (ga / fhmx);
        let c = 2.0 / ((as_ * as_ + au).sqrt() + (at * at + au).sqrt());
        (fhmn * c, fhmx / c)
    } else {
        let au = fhmx / ga;
        if au == 0.0 {
            ((fhmn * fhmx) / ga, ga)
        } else {
            let as_ = 1.0 + fhmn / fhmx;
            let at = (fhmx - fhmn) / fhmx;
            let c = 1.0 / ((1.0 + (as_ * au) * (as_ * au)).sqrt() + (1.0 + (at * au) * (at * au)).sqrt());
            let ssmin = (fhmn * c) * au;
            (ssmin + ssmin, ga / (c + c))
        }
    }
}

struct Work<'a> {
    d: &'a mut [f64],
    e: &'a mut [f64],
    w: Option<&'a mut Mat>,
    v: &'a mut Mat,
}

impl Work<'_> {
    fn rot_right(&mut self, a: usize, b: usize, g: GivensRotation) {
        rotate_columns(self.v, a, b, g);
    }

    fn rot_left(&mut self, a: usize, b: usize, g: GivensRotation) {
        if let Some(w) = self.w.as_deref_mut() {
            rotate_columns(w, a, b, g);
        }
    }

    /// `d[k] = 0` with `k < hi`: clears `e[k]` with left rotations of rows
    /// `k` and `k+1..=hi`.
    fn chase_row(&mut self, k: usize, hi: usize) {
        let mut bulge = self.e[k];
        self.e[k] = 0.0;
        for j in k + 1..=hi {
            if bulge == 0.0 {
                break;
            }
            let (g, r) = givens_generate(self.d[j], bulge);
            self.d[j] = r;
            if j < hi {
                bulge = -g.s * self.e[j];
                self.e[j] *= g.c;
            }
            self.rot_left(j, k, g);
        }
    }

    /// `d[hi] = 0`: clears `e[hi-1]` with right rotations of columns
    /// `ll..hi` against column `hi`.
    fn chase_col(&mut self, ll: usize, hi: usize) {
        let mut bulge = self.e[hi - 1];
        self.e[hi - 1] = 0.0;
        for j in (ll..hi).rev() {
            if bulge == 0.0 {
                break;
            }
            let (g, r) = givens_generate(self.d[j], bulge);
            self.d[j] = r;
            if j > ll {
                bulge = -g.s * self.e[j - 1];
                self.e[j - 1] *= g.c;
            }
            self.rot_right(j, hi, g);
        }
    }

    fn shifted_sweep(&mut self, ll: usize, hi: usize, shift: f64) {
        let d0 = self.d[ll];
        let mut f = (d0.abs() - shift) * (1f64.copysign(d0) + shift / d0);
        let mut g = self.e[ll];
        for i in ll..hi {
            let (gr, r) = givens_generate(f, g);
            if i > ll {
                self.e[i - 1] = r;
            }
            f = gr.c * self.d[i] + gr.s * self.e[i];
            self.e[i] = gr.c * self.e[i] - gr.s * self.d[i];
            g = gr.s * self.d[i + 1];
            self.d[i + 1] *= gr.c;
            let (gl, r) = givens_generate(f, g);
            self.d[i] = r;
            f = gl.c * self.e[i] + gl.s * self.d[i + 1];
            self.d[i + 1] = gl.c * self.d[i + 1] - gl.s * self.e[i];
            if i + 1 < hi {
                g = gl.s * self.e[i + 1];
                self.e[i + 1] *= gl.c;
            }
            self.rot_right(i, i + 1, gr);
            self.rot_left(i, i + 1, gl);
        }
        self.e[hi - 1] = f;
    }

    fn zero_shift_sweep(&mut self, ll: usize, hi: usize) {
        let mut cs = 1.0;
        let mut oldcs = 1.0;
        let mut oldsn = 0.0;
        for i in ll..hi {
            let (gr, r) = givens_generate(self.d[i] * cs, self.e[i]);
            cs = gr.c;
            if i > ll {
                self.e[i - 1] = oldsn * r;
            }
            let (gl, r2) = givens_generate(oldcs * r, self.d[i + 1] * gr.s);
            oldcs = gl.c;
            oldsn = gl.s;
            self.d[i] = r2;
            self.rot_right(i, i + 1, gr);
            self.rot_left(i, i + 1, gl);
        }
        let h = self.d[hi] * cs;
        self.d[hi] = h * oldcs;
        self.e[hi - 1] = h * oldsn;
    }
}

/// Unit rows of the identity that a [`RowSelection`] keeps.
pub(crate) fn tracked_identity(order: usize, rows: RowSelection) -> Mat {
    match rows {
        RowSelection::All => Mat::identity(order),
        RowSelection::Ends => {
            if order == 1 {
                Mat::identity(1)
            } else {
                Mat::from_fn(2, order, |i, j| if (i == 0 && j == 0) || (i == 1 && j == order - 1) { 1.0 } else { 0.0 })
            }
        }
    }
}

/// QR iteration on a (possibly bordered) bidiagonal problem.
pub fn bdsqr_base(prob: &BidiagonalProblem, want_vectors: bool) -> Result<SubproblemSVD> {
    let rows = if want_vectors { RowSelection::All } else { RowSelection::Ends };
    bdsqr_tracked(prob, want_vectors, rows)
}

pub(crate) fn bdsqr_tracked(prob: &BidiagonalProblem, want_w: bool, rows: RowSelection) -> Result<SubproblemSVD> {
    let n = prob.n();
    let sqre = usize::from(prob.bordered);
    let cols = n + sqre;
    let mut v = tracked_identity(cols, rows);
    let mut w = if want_w { Some(Mat::identity(n)) } else { None };
    if n == 0 {
        return Ok(SubproblemSVD {
            w,
            dvals: Vec::new(),
            qfull: v,
            rows,
        });
    }
    let mut d = prob.d.clone();
    d.push(0.0);
    let mut e = prob.e.clone();
    if !prob.bordered {
        e.push(0.0);
    }
    let smax = d.iter().chain(&e).fold(0.0f64, |m, x| m.max(x.abs()));
    let mut work = Work {
        d: &mut d,
        e: &mut e,
        w: w.as_mut(),
        v: &mut v,
    };
    if prob.bordered {
        work.chase_col(0, n);
    }
    if smax > 0.0 {
        qr_iterate(&mut work, n, smax)?;
    }

    let mut dvals = d[..n].to_vec();
    for (i, x) in dvals.iter_mut().enumerate() {
        if *x < 0.0 {
            *x = -*x;
            for val in v.col_mut(i) {
                *val = -*val;
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| dvals[b].total_cmp(&dvals[a]).then(a.cmp(&b)));
    let sorted: Vec<f64> = order.iter().map(|&i| dvals[i]).collect();
    let mut vperm: Vec<usize> = order.clone();
    vperm.extend(n..cols);
    Ok(SubproblemSVD {
        w: w.map(|w| w.select_cols(&order)),
        dvals: sorted,
        qfull: v.select_cols(&vperm),
        rows,
    })
}

fn qr_iterate(work: &mut Work<'_>, n: usize, smax: f64) -> Result<()> {
    let u = f64::EPSILON / 2.0;
    let rel = 4.0 * u;
    let thresh = u * smax;
    let maxit = 6 * n * n;
    let mut iters = 0usize;
    let mut hi = n - 1;
    while hi > 0 {
        for k in 0..=hi {
            if work.d[k].abs() <= thresh {
                work.d[k] = 0.0;
            }
        }
        for i in 0..hi {
            let ei = work.e[i].abs();
            if ei <= thresh || ei <= rel * (work.d[i].abs() + work.d[i + 1].abs()) {
                work.e[i] = 0.0;
            }
        }
        if work.e[hi - 1] == 0.0 {
            hi -= 1;
            continue;
        }
        let mut ll = hi - 1;
        while ll > 0 && work.e[ll - 1] != 0.0 {
            ll -= 1;
        }
        if let Some(k) = (ll..hi).find(|&k| work.d[k] == 0.0) {
            work.chase_row(k, hi);
            continue;
        }
        if work.d[hi] == 0.0 {
            work.chase_col(ll, hi);
            continue;
        }
        iters += hi - ll;
        if iters > maxit {
            return Err(LinalgError::NoConvergence {
                op: "bidiagonal QR iteration",
                iterations: iters,
            });
        }
        let (mut shift, _) = las2(work.d[hi - 1], work.e[hi - 1], work.d[hi]);
        let sll = work.d[ll].abs();
        if (shift / sll) * (shift / sll) < f64::EPSILON {
            shift = 0.0;
        }
        if shift == 0.0 {
            work.zero_shift_sweep(ll, hi);
        } else {
            work.shifted_sweep(ll, hi, shift);
        }
    }
    Ok(())
}
