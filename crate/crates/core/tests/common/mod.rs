//! Random test inputs and independent reference implementations.
#![allow(dead_code)]

use entangle_core::collective::FilterRows;
use entangle_core::linalg::{pauli, ComplexMatrix};
use entangle_core::states::product_state;
use entangle_core::BipartiteState;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    rng.sample(StandardNormal)
}

/// `G G^dagger / tr` for a complex Gaussian `d x k` matrix `G` (rank at most `k`).
pub fn random_density_rank(rng: &mut ChaCha8Rng, d: usize, k: usize) -> ComplexMatrix {
    let g =
        ComplexMatrix::new(d, k, (0..d * k).map(|_| Complex64::new(gaussian(rng), gaussian(rng))).collect()).unwrap();
    let rho = g.multiply(&g.dagger()).unwrap();
    let tr = rho.trace().unwrap().re;
    rho.scale_real(1.0 / tr)
}

pub fn random_density(rng: &mut ChaCha8Rng, d: usize) -> ComplexMatrix {
    random_density_rank(rng, d, d)
}

pub fn random_state(rng: &mut ChaCha8Rng, dims: (usize, usize)) -> BipartiteState {
    BipartiteState::new(dims, random_density(rng, dims.0 * dims.1)).unwrap()
}

/// Convex mixture of `terms` random product states.
pub fn random_separable(rng: &mut ChaCha8Rng, dims: (usize, usize), terms: usize) -> BipartiteState {
    let weights: Vec<f64> = (0..terms).map(|_| rng.gen_range(0.05..1.0)).collect();
    let total: f64 = weights.iter().sum();
    let d = dims.0 * dims.1;
    let mut rho = ComplexMatrix::zeros(d, d);
    for w in weights {
        let rank_a = rng.gen_range(1..=dims.0);
        let rank_b = rng.gen_range(1..=dims.1);
        let a = random_density_rank(rng, dims.0, rank_a);
        let b = random_density_rank(rng, dims.1, rank_b);
        rho = &rho + &product_state(&a, &b).unwrap().rho().scale_real(w / total);
    }
    BipartiteState::new(dims, rho).unwrap()
}

/// `exp(i t n.sigma)` times a global phase.
pub fn random_su2(rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let n = [gaussian(rng), gaussian(rng), gaussian(rng)];
    let len = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
    let axis = [n[0] / len, n[1] / len, n[2] / len];
    let t: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let phase = Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU));
    let gen = pauli::bloch_operator(&axis).scale(Complex64::new(0.0, t.sin()));
    (&ComplexMatrix::identity(2).scale_real(t.cos()) + &gen).scale(phase)
}

pub fn random_unit3(rng: &mut ChaCha8Rng) -> [f64; 3] {
    let v = [gaussian(rng), gaussian(rng), gaussian(rng)];
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    [v[0] / n, v[1] / n, v[2] / n]
}

pub fn random_rows(rng: &mut ChaCha8Rng, n: usize) -> FilterRows {
    let d = 1 << n;
    let u0: Vec<f64> = (0..d).map(|_| gaussian(rng)).collect();
    let u1: Vec<f64> = (0..d).map(|_| gaussian(rng)).collect();
    FilterRows::orthonormalize(n, &u0, &u1).unwrap()
}

/// Mixes a random two-qubit state towards `I/4` until its partial transpose is
/// positive semidefinite, using the closed-form partial transpose of the mixture.
pub fn random_ppt_two_qubit(rng: &mut ChaCha8Rng) -> BipartiteState {
    let rho = random_density(rng, 4);
    let mixed = |p: f64| &rho.scale_real(1.0 - p) + &ComplexMatrix::identity(4).scale_real(p / 4.0);
    let is_ppt = |m: &ComplexMatrix| {
        let s = BipartiteState::new((2, 2), m.clone()).unwrap();
        entangle_core::separability::ppt_check(&s).unwrap().min_eigenvalue >= 0.0
    };
    if is_ppt(&rho) {
        return BipartiteState::new((2, 2), rho).unwrap();
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if is_ppt(&mixed(mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    BipartiteState::new((2, 2), mixed(hi)).unwrap()
}

/// Partial transpose from its definition on basis operators:
/// `(|m><n| (x) B)^T_A = |n><m| (x) B`.
pub fn partial_transpose_by_blocks(rho: &ComplexMatrix, (da, db): (usize, usize)) -> ComplexMatrix {
    let d = da * db;
    let mut out = ComplexMatrix::zeros(d, d);
    for m in 0..da {
        for n in 0..da {
            let mut e = ComplexMatrix::zeros(da, da);
            e[(n, m)] = Complex64::new(1.0, 0.0);
            let mut block = ComplexMatrix::zeros(db, db);
            for mu in 0..db {
                for nu in 0..db {
                    block[(mu, nu)] = rho[(m * db + mu, n * db + nu)];
                }
            }
            out = &out + &e.kron(&block);
        }
    }
    out
}

/// Postselected two-qubit state by explicit summation over every Alice and
/// Bob index of all `n` pairs, with no tensor-product or permutation helpers.
pub fn brute_force_postselect(rho: &ComplexMatrix, n: usize, u: &FilterRows, v: &FilterRows) -> (ComplexMatrix, f64) {
    let d = 1usize << n;
    let bit = |x: usize, i: usize| (x >> (n - 1 - i)) & 1;
    let product = |a: usize, b: usize, ap: usize, bp: usize| {
        (0..n).fold(Complex64::new(1.0, 0.0), |acc, i| {
            acc * rho[(2 * bit(a, i) + bit(b, i), 2 * bit(ap, i) + bit(bp, i))]
        })
    };
    let mut raw = ComplexMatrix::zeros(4, 4);
    for a in 0..d {
        for b in 0..d {
            for ap in 0..d {
                for bp in 0..d {
                    let z = product(a, b, ap, bp);
                    if z.norm_sqr() == 0.0 {
                        continue;
                    }
                    for mu in 0..2 {
                        for nu in 0..2 {
                            for mup in 0..2 {
                                for nup in 0..2 {
                                    let w = u.row(mu)[a] * v.row(nu)[b] * u.row(mup)[ap] * v.row(nup)[bp];
                                    raw[(2 * mu + nu, 2 * mup + nup)] += z * w;
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    let p = raw.trace().unwrap().re;
    (raw.scale_real(1.0 / p), p)
}
