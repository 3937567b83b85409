mod common;

use bdcsvd::bidiag::{gebrd_blocked, gebrd_unblocked, labrd_panel, BidiagonalFactorization, PanelWorkspace};
use bdcsvd::dense::Mat;
use common::*;
use proptest::prelude::*;

fn left_factor(f: &BidiagonalFactorization) -> Mat {
    let m = f.packed.rows();
    let vs: Vec<Vec<f64>> = (0..f.d.len()).map(|j| packed_column_reflector(&f.packed, j, 0)).collect();
    reflector_product(m, &vs, &f.tauq)
}

fn right_factor(f: &BidiagonalFactorization) -> Mat {
    let n = f.packed.cols();
    let k = n.saturating_sub(1);
    let vs: Vec<Vec<f64>> = (0..k).map(|i| packed_row_reflector(&f.packed, i, 1)).collect();
    reflector_product(n, &vs, &f.taup[..k])
}

fn check_reconstruction(a: &Mat, f: &BidiagonalFactorization) {
    let (m, n) = (a.rows(), a.cols());
    let u1 = left_factor(f);
    let v1 = right_factor(f);
    let b = matmul(&matmul(&u1.transpose(), a), &v1);
    let mut bd = Mat::zeros(m, n);
    for i in 0..n {
        bd[(i, i)] = f.d[i];
        if i + 1 < n {
            bd[(i, i + 1)] = f.e[i];
        }
    }
    let scale = 50.0 * m.max(n) as f64 * U;
    assert!(sub(&b, &bd).frobenius_norm() <= scale * a.frobenius_norm());
    assert!(orth_error(&u1) <= scale);
    assert!(orth_error(&v1) <= scale);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn blocked_reconstruction(m in 1usize..40, extra in 0usize..20, b in 1usize..9, seed in any::<u64>()) {
        let n = m;
        let m = m + extra;
        let a = TestRng::new(seed).matrix(m, n);
        let f = gebrd_blocked(a.clone(), b).unwrap();
        check_reconstruction(&a, &f);
    }

    #[test]
    fn unblocked_reconstruction(n in 1usize..30, extra in 0usize..10, seed in any::<u64>()) {
        let a = TestRng::new(seed).matrix(n + extra, n);
        let f = gebrd_unblocked(a.clone()).unwrap();
        check_reconstruction(&a, &f);
    }
}

#[test]
fn labrd_panel_matches_explicit_reflector_products() {
    let (m, n, b) = (12, 8, 4);
    let a = TestRng::new(7).matrix(m, n);
    let mut work = a.clone();
    let mut ws = PanelWorkspace::new(m, n, b);
    let (mut d, mut e, mut tq, mut tp) = (vec![0.0; b], vec![0.0; b], vec![0.0; b], vec![0.0; b]);
    labrd_panel(work.as_mut(), b, &mut ws, &mut d, &mut e, &mut tq, &mut tp).unwrap();
    assert_eq!(ws.filled, b);

    let hs: Vec<Vec<f64>> = (0..b).map(|j| packed_column_reflector(&work, j, 0)).collect();
    let gs: Vec<Vec<f64>> = (0..b).map(|i| packed_row_reflector(&work, i, 1)).collect();
    let ub = reflector_product(m, &hs, &tq);
    let vb = reflector_product(n, &gs, &tp);
    let reduced = matmul(&matmul(&ub.transpose(), &a), &vb);

    let tol = 1e-13 * a.frobenius_norm();
    for i in b..m {
        for j in b..n {
            assert!((reduced[(i, j)] - work[(i, j)]).abs() <= tol, "trailing ({i},{j})");
        }
    }
    for i in 0..b {
        for j in 0..n {
            let expect = if j == i {
                d[i]
            } else if j == i + 1 {
                e[i]
            } else {
                0.0
            };
            assert!((reduced[(i, j)] - expect).abs() <= tol, "panel row ({i},{j})");
        }
        for r in i + 1..m {
            assert!(reduced[(r, i)].abs() <= tol, "panel column ({r},{i})");
        }
    }
}

#[test]
fn labrd_on_bidiagonal_input_does_nothing() {
    let n = 5;
    let a = bidiagonal_matrix(&[1.0, -2.0, 3.0, 0.5, 4.0], &[0.3, 0.7, -1.1, 2.0], false);
    let mut work = a.clone();
    let mut ws = PanelWorkspace::new(n, n, n);
    let (mut d, mut e, mut tq, mut tp) = (vec![0.0; n], vec![0.0; n - 1], vec![0.0; n], vec![0.0; n]);
    labrd_panel(work.as_mut(), n, &mut ws, &mut d, &mut e, &mut tq, &mut tp).unwrap();
    assert!(tq.iter().chain(&tp).all(|&t| t == 0.0));
    assert_eq!(d, vec![1.0, -2.0, 3.0, 0.5, 4.0]);
    assert_eq!(e, vec![0.3, 0.7, -1.1, 2.0]);
}

fn bidiag_singular_values(f: &BidiagonalFactorization) -> Vec<f64> {
    one_sided_jacobi_sv(&bidiagonal_matrix(&f.d, &f.e, false))
}

#[test]
fn square_64_preserves_singular_values() {
    let a = TestRng::new(64).matrix(64, 64);
    let reference = singular_values_via_gram(&a);
    let got = bidiag_singular_values(&gebrd_blocked(a, 32).unwrap());
    for (x, y) in got.iter().zip(&reference) {
        assert!((x - y).abs() <= 1e-12 * reference[0], "{x} vs {y}");
    }
}

#[test]
fn block_widths_agree_with_unblocked() {
    let a = TestRng::new(96).matrix(96, 64);
    let reference = bidiag_singular_values(&gebrd_unblocked(a.clone()).unwrap());
    for b in [8, 16, 32] {
        let got = bidiag_singular_values(&gebrd_blocked(a.clone(), b).unwrap());
        for (x, y) in got.iter().zip(&reference) {
            assert!((x - y).abs() <= 1e-12 * reference[0], "b={b}: {x} vs {y}");
        }
    }
}

#[test]
fn merged_products_match_split_forms() {
    let mut rng = TestRng::new(3);
    for b in [8, 32] {
        let (m, n) = (b + 40, b + 24);
        let a = rng.matrix(m, n);
        let mut work = a.clone();
        let mut ws = PanelWorkspace::new(m, n, b);
        let (mut d, mut e, mut tq, mut tp) = (vec![0.0; b], vec![0.0; b], vec![0.0; b], vec![0.0; b]);
        labrd_panel(work.as_mut(), b, &mut ws, &mut d, &mut e, &mut tq, &mut tp).unwrap();
        let (p, q) = (&ws.p, &ws.q);
        let v = p.select_cols(&(0..b).map(|i| 2 * i).collect::<Vec<_>>());
        let x = p.select_cols(&(0..b).map(|i| 2 * i + 1).collect::<Vec<_>>());
        let y = q.select_cols(&(0..b).map(|i| 2 * i).collect::<Vec<_>>());
        let u = q.select_cols(&(0..b).map(|i| 2 * i + 1).collect::<Vec<_>>());

        let merged = sub(&a, &matmul(p, &q.transpose()));
        let split = sub(&sub(&a, &matmul(&v, &y.transpose())), &matmul(&x, &u.transpose()));
        let bound = 8.0 * (2 * b) as f64 * U * (a.max_abs() + p.max_abs() * q.max_abs() * (2 * b) as f64);
        assert!(max_abs_diff(&merged, &split) <= bound);

        let probe = rng.vec(m);
        let pm = Mat::from_col_major(m, 1, probe.clone());
        let merged_v = matmul(q, &matmul(&p.transpose(), &pm));
        let four = {
            let t1 = matmul(&y, &matmul(&v.transpose(), &pm));
            let t2 = matmul(&u, &matmul(&x.transpose(), &pm));
            Mat::from_fn(n, 1, |i, _| t1[(i, 0)] + t2[(i, 0)])
        };
        let scale = p.max_abs() * q.max_abs() * probe.iter().map(|v| v.abs()).sum::<f64>();
        assert!(max_abs_diff(&merged_v, &four) <= 8.0 * (2 * b) as f64 * U * scale * (2 * b) as f64);
    }
}
