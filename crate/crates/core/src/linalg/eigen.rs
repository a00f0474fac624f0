//! Cyclic Jacobi diagonalisation.
//!
//! Hermitian input `H = A + iB` is handled through its real symmetric embedding
//! `[[A, -B], [B, A]]`, whose spectrum is that of `H` with every eigenvalue
//! repeated twice.

use super::{ComplexMatrix, HERMITIAN_TOL};
use crate::error::{Error, Result};

const OFF_DIAGONAL_TOL: f64 = 1e-12;

/// Eigenvalues (ascending) and matching column eigenvectors of a real symmetric matrix.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    /// Row-major `d x d`; column `k` is the eigenvector of `values[k]`.
    pub vectors: Vec<f64>,
    pub dim: usize,
}

impl SymmetricEigen {
    pub fn vector(&self, k: usize) -> Vec<f64> {
        (0..self.dim).map(|i| self.vectors[i * self.dim + k]).collect()
    }
}

/// Diagonalises a real symmetric `dim x dim` matrix given row-major.
///
/// Sweeps stop once the off-diagonal Frobenius norm drops below
/// `1e-12 * max(1, ||a||_F)`; more than `10 * dim^2` sweeps is an error.
pub fn symmetric_eigen(a: &[f64], dim: usize) -> Result<SymmetricEigen> {
    assert_eq!(a.len(), dim * dim, "symmetric_eigen: data length");
    let mut m = a.to_vec();
    // symmetrise so rounding asymmetries cannot stall the sweep
    for i in 0..dim {
        for j in (i + 1)..dim {
            let s = 0.5 * (m[i * dim + j] + m[j * dim + i]);
            m[i * dim + j] = s;
            m[j * dim + i] = s;
        }
    }
    let mut v = vec![0.0; dim * dim];
    for i in 0..dim {
        v[i * dim + i] = 1.0;
    }

    let scale = m.iter().map(|x| x * x).sum::<f64>().sqrt().max(1.0);
    let tol = OFF_DIAGONAL_TOL * scale;
    let max_sweeps = (10 * dim * dim).max(1);

    let mut converged = false;
    for _ in 0..max_sweeps {
        if off_diagonal_norm(&m, dim) < tol {
            converged = true;
            break;
        }
        for p in 0..dim {
            for q in (p + 1)..dim {
                let apq = m[p * dim + q];
                if apq == 0.0 {
                    continue;
                }
                let app = m[p * dim + p];
                let aqq = m[q * dim + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t =
                    if theta.is_finite() { theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt()) } else { 0.0 };
                if t == 0.0 {
                    continue;
                }
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                rotate(&mut m, &mut v, dim, p, q, c, s, t, apq);
            }
        }
    }
    if !converged && off_diagonal_norm(&m, dim) >= tol {
        return Err(Error::NoConvergence { sweeps: max_sweeps });
    }

    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&i, &j| m[i * dim + i].total_cmp(&m[j * dim + j]));
    let values = order.iter().map(|&i| m[i * dim + i]).collect();
    let mut vectors = vec![0.0; dim * dim];
    for (k, &src) in order.iter().enumerate() {
        for i in 0..dim {
            vectors[i * dim + k] = v[i * dim + src];
        }
    }
    Ok(SymmetricEigen { values, vectors, dim })
}

#[allow(clippy::too_many_arguments)]
fn rotate(m: &mut [f64], v: &mut [f64], dim: usize, p: usize, q: usize, c: f64, s: f64, t: f64, apq: f64) {
    let tau = s / (1.0 + c);
    m[p * dim + p] -= t * apq;
    m[q * dim + q] += t * apq;
    m[p * dim + q] = 0.0;
    m[q * dim + p] = 0.0;
    for r in 0..dim {
        if r == p || r == q {
            continue;
        }
        let arp = m[r * dim + p];
        let arq = m[r * dim + q];
        let new_rp = arp - s * (arq + tau * arp);
        let new_rq = arq + s * (arp - tau * arq);
        m[r * dim + p] = new_rp;
        m[p * dim + r] = new_rp;
        m[r * dim + q] = new_rq;
        m[q * dim + r] = new_rq;
    }
    for r in 0..dim {
        let vrp = v[r * dim + p];
        let vrq = v[r * dim + q];
        v[r * dim + p] = vrp - s * (vrq + tau * vrp);
        v[r * dim + q] = vrq + s * (vrp - tau * vrq);
    }
}

fn off_diagonal_norm(m: &[f64], dim: usize) -> f64 {
    let mut sum = 0.0;
    for i in 0..dim {
        for j in 0..dim {
            if i != j {
                sum += m[i * dim + j] * m[i * dim + j];
            }
        }
    }
    sum.sqrt()
}

/// All eigenvalues of a Hermitian matrix in ascending order.
pub fn hermitian_eigenvalues(h: &ComplexMatrix) -> Result<Vec<f64>> {
    if !h.is_square() {
        return Err(Error::NotSquare { rows: h.rows(), cols: h.cols() });
    }
    let deviation = h.hermitian_deviation();
    if deviation > HERMITIAN_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    let d = h.rows();

    // Purely real input needs no embedding.
    if h.as_slice().iter().all(|z| z.im == 0.0) {
        let re: Vec<f64> = h.as_slice().iter().map(|z| z.re).collect();
        return Ok(symmetric_eigen(&re, d)?.values);
    }

    let n = 2 * d;
    let mut emb = vec![0.0; n * n];
    for i in 0..d {
        for j in 0..d {
            // Hermitian part of h
            let z = 0.5 * (h[(i, j)] + h[(j, i)].conj());
            emb[i * n + j] = z.re;
            emb[(i + d) * n + (j + d)] = z.re;
            emb[i * n + (j + d)] = -z.im;
            emb[(i + d) * n + j] = z.im;
        }
    }
    let doubled = symmetric_eigen(&emb, n)?.values;
    Ok(doubled.into_iter().step_by(2).collect())
}
