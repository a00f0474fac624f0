//! Library results against independent reference computations.

mod common;

use std::f64::consts::SQRT_2;

use common::*;
use entangle_core::bell::{chsh_max, chsh_value, MeasurementSettings};
use entangle_core::collective::{postselect, v_from_u, xor_rows};
use entangle_core::linalg::{hermitian_eigenvalues, ComplexMatrix};
use entangle_core::optimizer::objective;
use entangle_core::separability::ppt_check;
use entangle_core::states::{gisin_state, singlet_projector, werner, GisinParams};
use num_complex::Complex64;
use rand::Rng;

/// Determinant by Gaussian elimination with partial pivoting.
fn det(m: &ComplexMatrix) -> Complex64 {
    let n = m.rows();
    let mut a: Vec<Vec<Complex64>> = (0..n).map(|i| m.row(i).to_vec()).collect();
    let mut d = Complex64::new(1.0, 0.0);
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| a[i][c].norm().total_cmp(&a[j][c].norm())).unwrap();
        if a[p][c].norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        d *= a[c][c];
        let pivot = a[c].clone();
        for row in a.iter_mut().skip(c + 1) {
            let f = row[c] / pivot[c];
            for (x, p) in row[c..].iter_mut().zip(&pivot[c..]) {
                *x -= f * p;
            }
        }
    }
    d
}

#[test]
fn eigenvalues_are_roots_of_the_characteristic_polynomial() {
    let mut r = rng(1);
    for d in 2..=6 {
        for _ in 0..5 {
            let h = random_density(&mut r, d);
            for lambda in hermitian_eigenvalues(&h).unwrap() {
                let shifted = &h - &ComplexMatrix::identity(d).scale_real(lambda);
                assert!(det(&shifted).norm() < 1e-12, "d = {d}, lambda = {lambda}");
            }
        }
    }
}

#[test]
fn two_by_two_closed_form_spectrum() {
    let mut r = rng(2);
    for _ in 0..50 {
        let h = random_density(&mut r, 2);
        let (a, c) = (h[(0, 0)].re, h[(1, 1)].re);
        let b = h[(0, 1)].norm();
        let disc = ((a - c) * (a - c) / 4.0 + b * b).sqrt();
        let expected = [(a + c) / 2.0 - disc, (a + c) / 2.0 + disc];
        let got = hermitian_eigenvalues(&h).unwrap();
        assert!((got[0] - expected[0]).abs() < 1e-14 && (got[1] - expected[1]).abs() < 1e-14);
    }
}

#[test]
fn gisin_partial_transpose_closed_form() {
    // partial transpose moves the coherence x a b* onto the |00>, |11> block
    for (x, ab) in [(0.3, 0.2), (0.6, 0.5), (0.9, 0.45), (0.1, 0.05), (0.95, 0.01)] {
        let p = GisinParams::with_product(x, ab).unwrap();
        let (a2, b2) = (p.a.norm_sqr(), p.b.norm_sqr());
        let expected = ((1.0 - x) / 2.0 - x * ab).min(x * a2.min(b2));
        let got = ppt_check(&gisin_state(p)).unwrap().min_eigenvalue;
        assert!((got - expected).abs() < 1e-12, "x = {x}, |ab| = {ab}: {got} vs {expected}");
    }
}

#[test]
fn chsh_max_matches_direct_search_over_settings() {
    let mut r = rng(3);
    for _ in 0..5 {
        let s = random_state(&mut r, (2, 2));
        let target = chsh_max(&s).unwrap();
        let mut best = f64::NEG_INFINITY;
        let mut dirs = [random_unit3(&mut r), random_unit3(&mut r), random_unit3(&mut r), random_unit3(&mut r)];
        let value =
            |d: &[[f64; 3]; 4]| chsh_value(&s, &MeasurementSettings::new(d[0], d[1], d[2], d[3]).unwrap()).unwrap();
        let mut step = 0.5;
        while step > 1e-7 {
            let mut improved = false;
            for k in 0..4 {
                for c in 0..3 {
                    for sign in [1.0, -1.0] {
                        let mut trial = dirs;
                        trial[k][c] += sign * step;
                        let n = trial[k].iter().map(|v| v * v).sum::<f64>().sqrt();
                        trial[k].iter_mut().for_each(|v| *v /= n);
                        let v = value(&trial);
                        if v > best {
                            best = v;
                            dirs = trial;
                            improved = true;
                        }
                    }
                }
            }
            if !improved {
                step /= 2.0;
            }
        }
        assert!(best <= target + 1e-9, "search {best} exceeds bound {target}");
        assert!(target - best < 1e-6, "search {best} short of bound {target}");
    }
}

/// XOR postselection keeps the entries of `rho^{(x) n}` whose pair indices all
/// agree, so `rho_new` is proportional to the elementwise `n`-th power, up to
/// the sign `(-1)^(n+1)` that Bob's tied rows attach to his `|1..1>`.
fn xor_closed_form(rho: &ComplexMatrix, n: i32) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(4, 4);
    for i in 0..4 {
        for j in 0..4 {
            let flip = (n + 1) * ((i & 1) + (j & 1)) as i32 % 2 == 1;
            out[(i, j)] = rho[(i, j)].powi(n) * if flip { -1.0 } else { 1.0 };
        }
    }
    let tr = out.trace().unwrap().re;
    out.scale_real(1.0 / tr)
}

#[test]
fn xor_filter_equals_elementwise_power() {
    let mut r = rng(4);
    for n in 1..=4 {
        for _ in 0..3 {
            let pair = random_state(&mut r, (2, 2));
            let u = xor_rows(n).unwrap();
            let got = postselect(&pair, n, &u, &v_from_u(&u)).unwrap();
            let expected = xor_closed_form(pair.rho(), n as i32);
            assert!(got.rho_new.rho().max_abs_diff(&expected).unwrap() < 1e-12);
        }
    }
}

#[test]
fn werner_xor_chsh_closed_form() {
    // diagonal (d, s, s, d) with s = (1+x)/4, d = (1-x)/4 and coherence -x/2
    for n in 1..=6 {
        let x: f64 = 0.5;
        let (s, d, c) = ((1.0 + x) / 4.0, (1.0 - x) / 4.0, -x / 2.0);
        let norm = 2.0 * s.powi(n) + 2.0 * d.powi(n);
        let tzz = (2.0 * d.powi(n) - 2.0 * s.powi(n)) / norm;
        let txx = 2.0 * c.powi(n) / norm;
        let m = (tzz * tzz + txx * txx).max(2.0 * txx * txx);
        let got = objective(n as usize, x, &xor_rows(n as usize).unwrap()).unwrap().chsh();
        assert!((got - 2.0 * m.sqrt()).abs() < 1e-12, "n = {n}: {got} vs {}", 2.0 * m.sqrt());
    }
}

#[test]
fn xor_on_pure_singlets() {
    for n in 1..=4 {
        let u = xor_rows(n).unwrap();
        let res = postselect(&singlet_projector(), n, &u, &v_from_u(&u)).unwrap();
        assert!(res.rho_new.rho().max_abs_diff(singlet_projector().rho()).unwrap() < 1e-12);
        assert!((res.success_probability - 0.5f64.powi(n as i32 - 1)).abs() < 1e-12);
        assert!((chsh_max(&res.rho_new).unwrap() - 2.0 * SQRT_2).abs() < 1e-12);
    }
}

#[test]
fn random_rows_on_werner_match_brute_force_at_four_pairs() {
    let mut r = rng(5);
    let x: f64 = r.gen_range(0.2..0.9);
    let pair = werner(x).unwrap();
    let u = random_rows(&mut r, 4);
    let v = v_from_u(&u);
    let dense = postselect(&pair, 4, &u, &v).unwrap();
    let (oracle, p) = brute_force_postselect(pair.rho(), 4, &u, &v);
    assert!(dense.rho_new.rho().max_abs_diff(&oracle).unwrap() < 1e-10);
    assert!((dense.success_probability - p).abs() < 1e-10);
}
