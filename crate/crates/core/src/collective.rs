//! Collective tests on `n` copies of a two-qubit state.
//!
//! Alice holds the first qubit of every pair and Bob the second. Each applies a
//! local unitary to their `n` qubits and keeps the run only when qubits
//! `2..n` all read spin up. Only two rows of each unitary matter, the rows
//! that map onto `|0 0..0>` and `|1 0..0>`, so a filter is a pair of orthonormal
//! real vectors of length `2^n` per side. The surviving first pair is described
//! by `rho_new = W rho^{(x) n} W^T / p` with `W = U (x) V` and success
//! probability `p`.
//!
//! Multi-qubit indices use slot 0 as the most significant bit, so component
//! `k` of a filter row belongs to the bit string of `k` with the first pair's
//! qubit leading.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::bell::{correlation_of, CorrelationMatrix};
use crate::error::{Error, Result};
use crate::linalg::{dot, gram_schmidt, norm, ComplexMatrix};
use crate::states::BipartiteState;

/// Orthonormality tolerance for filter rows.
pub const FILTER_TOL: f64 = 1e-10;
/// Raw postselected traces at or below this are treated as impossible events.
pub const MIN_PROBABILITY: f64 = 1e-14;
/// Largest supported number of pairs (the dense state is `4^n x 4^n`).
pub const MAX_PAIRS: usize = 6;

/// The two retained rows of one observer's local unitary.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterRows {
    n: usize,
    u0: Vec<f64>,
    u1: Vec<f64>,
}

impl FilterRows {
    pub fn new(n: usize, u0: Vec<f64>, u1: Vec<f64>) -> Result<Self> {
        check_pairs(n)?;
        let len = 1usize << n;
        if u0.len() != len || u1.len() != len {
            return Err(Error::InvalidFilter(format!(
                "rows must have {len} components for n = {n}, got {} and {}",
                u0.len(),
                u1.len()
            )));
        }
        let (n0, n1, overlap) = (norm(&u0), norm(&u1), dot(&u0, &u1));
        if (n0 - 1.0).abs() > FILTER_TOL || (n1 - 1.0).abs() > FILTER_TOL || overlap.abs() > FILTER_TOL {
            return Err(Error::InvalidFilter(format!(
                "rows not orthonormal: |u0| = {n0}, |u1| = {n1}, u0.u1 = {overlap:e}"
            )));
        }
        Ok(Self { n, u0, u1 })
    }

    /// Orthonormalises two arbitrary rows with Gram-Schmidt.
    pub fn orthonormalize(n: usize, u0: &[f64], u1: &[f64]) -> Result<Self> {
        let q = gram_schmidt(&[u0.to_vec(), u1.to_vec()])?;
        let [q0, q1]: [Vec<f64>; 2] = q.try_into().expect("two rows");
        Self::new(n, q0, q1)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn u0(&self) -> &[f64] {
        &self.u0
    }

    pub fn u1(&self) -> &[f64] {
        &self.u1
    }

    pub fn row(&self, mu: usize) -> &[f64] {
        match mu {
            0 => &self.u0,
            1 => &self.u1,
            _ => panic!("filter row index {mu} out of range"),
        }
    }

    /// Both rows concatenated, `u0` first.
    pub fn to_flat(&self) -> Vec<f64> {
        [self.u0.as_slice(), self.u1.as_slice()].concat()
    }

    /// The rows as a `2 x 2^n` matrix.
    pub fn to_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_real(2, self.u0.len(), &self.to_flat()).expect("2 x 2^n")
    }
}

fn check_pairs(n: usize) -> Result<()> {
    if (1..=MAX_PAIRS).contains(&n) {
        Ok(())
    } else {
        Err(Error::param("n", n, "pair count must be between 1 and 6"))
    }
}

fn unit(len: usize, k: usize) -> Vec<f64> {
    let mut e = vec![0.0; len];
    e[k] = 1.0;
    e
}

/// Rows `e_{00..0}` and `e_{11..1}`; the controlled-NOT filter for `n = 2`.
pub fn xor_rows(n: usize) -> Result<FilterRows> {
    check_pairs(n)?;
    let len = 1 << n;
    FilterRows::new(n, unit(len, 0), unit(len, len - 1))
}

/// The `n = 3` controlled-Hadamard filter:
/// `u0 = (e_000 + e_111)/sqrt2`, `u1 = (e_001 + e_110)/sqrt2`.
pub fn controlled_hadamard_rows() -> FilterRows {
    let mut u0 = vec![0.0; 8];
    let mut u1 = vec![0.0; 8];
    u0[0b000] = FRAC_1_SQRT_2;
    u0[0b111] = FRAC_1_SQRT_2;
    u1[0b001] = FRAC_1_SQRT_2;
    u1[0b110] = FRAC_1_SQRT_2;
    FilterRows::new(3, u0, u1).expect("orthonormal by construction")
}

/// Bob's rows under the symmetric ansatz: `V[nu][k] = (-1)^(nu + popcount k) U[nu][k]`.
pub fn v_from_u(u: &FilterRows) -> FilterRows {
    let sign = |nu: usize, k: usize| if (nu + k.count_ones() as usize).is_multiple_of(2) { 1.0 } else { -1.0 };
    let flip = |nu: usize| u.row(nu).iter().enumerate().map(|(k, &c)| sign(nu, k) * c).collect();
    FilterRows { n: u.n, u0: flip(0), u1: flip(1) }
}

/// `rho^{(x) n}` with qubits reordered from pair order `A1 B1 A2 B2 ..` to
/// block order `A1 .. An B1 .. Bn`.
pub fn n_pair_state(rho_pair: &BipartiteState, n: usize) -> Result<ComplexMatrix> {
    require_two_qubit(rho_pair)?;
    check_pairs(n)?;
    let mut full = rho_pair.rho().clone();
    for _ in 1..n {
        full = full.kron(rho_pair.rho());
    }
    full.permute_qubits(&block_order(n))
}

/// Slot permutation taking pair order to block order.
pub fn block_order(n: usize) -> Vec<usize> {
    (0..n).map(|i| 2 * i).chain((0..n).map(|i| 2 * i + 1)).collect()
}

fn require_two_qubit(s: &BipartiteState) -> Result<()> {
    if s.is_two_qubit() {
        Ok(())
    } else {
        Err(Error::WrongDimensions(s.dims()))
    }
}

#[derive(Debug, Clone)]
pub struct PostselectionResult {
    pub rho_new: BipartiteState,
    /// Probability that every spin-up test succeeds.
    pub success_probability: f64,
}

fn check_filters(n: usize, u: &FilterRows, v: &FilterRows) -> Result<()> {
    if u.n != n || v.n != n {
        return Err(Error::InvalidFilter(format!("filters built for n = {} / {} used with n = {n}", u.n, v.n)));
    }
    Ok(())
}

fn normalize(raw: ComplexMatrix) -> Result<(ComplexMatrix, f64)> {
    let p = raw.trace()?.re;
    if p.is_nan() || p <= MIN_PROBABILITY {
        return Err(Error::ZeroProbability { probability: p });
    }
    Ok((raw.scale_real(1.0 / p), p))
}

/// Postselected first-pair state, computed as a dense `W rho W^T` sandwich
/// on the block-ordered `n`-pair state.
pub fn postselect(rho_pair: &BipartiteState, n: usize, u: &FilterRows, v: &FilterRows) -> Result<PostselectionResult> {
    check_filters(n, u, v)?;
    let full = n_pair_state(rho_pair, n)?;
    let w = u.to_matrix().kron(&v.to_matrix());
    let raw = w.multiply(&full)?.multiply(&w.dagger())?;
    let (rho_new, p) = normalize(raw)?;
    Ok(PostselectionResult { rho_new: BipartiteState::two_qubit(rho_new)?, success_probability: p })
}

/// Sparse factorised form of the block-ordered `n`-pair state.
///
/// Non-zero entries of `rho^{(x) n}` are products of one non-zero entry per
/// pair, so they are enumerated directly instead of forming the dense
/// `4^n x 4^n` matrix. For Werner pairs this is `6^n` terms instead of `16^n`.
#[derive(Debug, Clone)]
pub struct PairContraction {
    n: usize,
    alice_row: Vec<u32>,
    bob_row: Vec<u32>,
    alice_col: Vec<u32>,
    bob_col: Vec<u32>,
    re: Vec<f64>,
    im: Option<Vec<f64>>,
}

impl PairContraction {
    pub fn new(rho_pair: &BipartiteState, n: usize) -> Result<Self> {
        require_two_qubit(rho_pair)?;
        check_pairs(n)?;
        let rho = rho_pair.rho();
        let entries: Vec<(usize, usize, Complex64)> = (0..4)
            .flat_map(|r| (0..4).map(move |c| (r, c)))
            .map(|(r, c)| (r, c, rho[(r, c)]))
            .filter(|(_, _, z)| z.norm_sqr() != 0.0)
            .collect();

        // (alice_row, bob_row, alice_col, bob_col, value)
        let mut terms: Vec<(u32, u32, u32, u32, Complex64)> = vec![(0, 0, 0, 0, Complex64::new(1.0, 0.0))];
        for _ in 0..n {
            let mut next = Vec::with_capacity(terms.len() * entries.len());
            for &(ar, br, ac, bc, val) in &terms {
                for &(r, c, z) in &entries {
                    next.push((
                        (ar << 1) | (r >> 1) as u32,
                        (br << 1) | (r & 1) as u32,
                        (ac << 1) | (c >> 1) as u32,
                        (bc << 1) | (c & 1) as u32,
                        val * z,
                    ));
                }
            }
            terms = next;
        }
        let complex = terms.iter().any(|t| t.4.im != 0.0);
        Ok(Self {
            n,
            alice_row: terms.iter().map(|t| t.0).collect(),
            bob_row: terms.iter().map(|t| t.1).collect(),
            alice_col: terms.iter().map(|t| t.2).collect(),
            bob_col: terms.iter().map(|t| t.3).collect(),
            re: terms.iter().map(|t| t.4.re).collect(),
            im: complex.then(|| terms.iter().map(|t| t.4.im).collect()),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of stored non-zero entries.
    pub fn len(&self) -> usize {
        self.re.len()
    }

    pub fn is_empty(&self) -> bool {
        self.re.is_empty()
    }

    /// Unnormalised postselected 4x4 matrix for rows `u` (Alice) and `v` (Bob).
    #[allow(clippy::needless_range_loop)]
    pub fn raw(&self, u: [&[f64]; 2], v: [&[f64]; 2]) -> ComplexMatrix {
        let mut acc_re = [0.0f64; 16];
        let mut acc_im = [0.0f64; 16];
        for t in 0..self.re.len() {
            let (ar, br) = (self.alice_row[t] as usize, self.bob_row[t] as usize);
            let (ac, bc) = (self.alice_col[t] as usize, self.bob_col[t] as usize);
            let ua = [u[0][ar], u[1][ar]];
            let uc = [u[0][ac], u[1][ac]];
            let vb = [v[0][br], v[1][br]];
            let vc = [v[0][bc], v[1][bc]];
            let val = self.re[t];
            let val_im = self.im.as_ref().map_or(0.0, |im| im[t]);
            for mu in 0..2 {
                for sigma in 0..2 {
                    let a = ua[mu] * uc[sigma];
                    if a == 0.0 {
                        continue;
                    }
                    for nu in 0..2 {
                        for tau in 0..2 {
                            let w = a * vb[nu] * vc[tau];
                            let k = (2 * mu + nu) * 4 + 2 * sigma + tau;
                            acc_re[k] += val * w;
                            acc_im[k] += val_im * w;
                        }
                    }
                }
            }
        }
        let data = acc_re.iter().zip(&acc_im).map(|(&r, &i)| Complex64::new(r, i)).collect();
        ComplexMatrix::new(4, 4, data).expect("4x4")
    }

    /// Same contract as [`postselect`].
    pub fn postselect(&self, u: &FilterRows, v: &FilterRows) -> Result<PostselectionResult> {
        check_filters(self.n, u, v)?;
        let (rho_new, p) = normalize(self.raw([&u.u0, &u.u1], [&v.u0, &v.u1]))?;
        Ok(PostselectionResult { rho_new: BipartiteState::two_qubit(rho_new)?, success_probability: p })
    }

    /// Correlation matrix of the postselected state and the success probability,
    /// without validating `rho_new`. Rows need not be exactly orthonormal.
    pub fn correlation(&self, u: [&[f64]; 2], v: [&[f64]; 2]) -> Result<(CorrelationMatrix, f64)> {
        let (rho_new, p) = normalize(self.raw(u, v))?;
        Ok((correlation_of(&rho_new)?, p))
    }
}
