//! Partial transpose, the PPT test, reduced states and the purity test.
//!
//! A negative eigenvalue of the partial transpose certifies entanglement.
//! A positive partial transpose is sufficient for separability only when
//! `dA * dB <= 6`; for larger systems a PPT verdict is inconclusive.

use num_complex::Complex64;

use crate::error::Result;
use crate::linalg::{hermitian_eigenvalues, ComplexMatrix};
use crate::states::BipartiteState;

/// Eigenvalues at or above `-PPT_TOL` count as non-negative.
pub const PPT_TOL: f64 = 1e-10;
/// Margin by which the global purity must exceed both reduced purities.
pub const PURITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct PptReport {
    pub sigma: ComplexMatrix,
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    pub min_eigenvalue: f64,
    pub is_ppt: bool,
}

impl PptReport {
    /// Whether a PPT verdict also implies separability for these dimensions.
    pub fn ppt_is_conclusive(dims: (usize, usize)) -> bool {
        dims.0 * dims.1 <= 6
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Alpha2Report {
    pub purity: f64,
    pub purity_a: f64,
    pub purity_b: f64,
    pub flags_inseparable: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    First,
    Second,
}

/// Transposes the first subsystem's indices: `sigma[m mu, n nu] = rho[n mu, m nu]`.
pub fn partial_transpose(s: &BipartiteState) -> ComplexMatrix {
    partial_transpose_matrix(s.rho(), s.dims())
}

pub(crate) fn partial_transpose_matrix(rho: &ComplexMatrix, (da, db): (usize, usize)) -> ComplexMatrix {
    let mut sigma = ComplexMatrix::zeros(da * db, da * db);
    for m in 0..da {
        for n in 0..da {
            for mu in 0..db {
                for nu in 0..db {
                    sigma[(m * db + mu, n * db + nu)] = rho[(n * db + mu, m * db + nu)];
                }
            }
        }
    }
    sigma
}

pub fn ppt_check(s: &BipartiteState) -> Result<PptReport> {
    let sigma = partial_transpose(s);
    let eigenvalues = hermitian_eigenvalues(&sigma)?;
    let min_eigenvalue = eigenvalues[0];
    Ok(PptReport { sigma, eigenvalues, min_eigenvalue, is_ppt: min_eigenvalue >= -PPT_TOL })
}

/// Reduced density matrix of the kept subsystem.
pub fn partial_trace(s: &BipartiteState, keep: Subsystem) -> ComplexMatrix {
    let (da, db) = s.dims();
    let rho = s.rho();
    match keep {
        Subsystem::First => {
            let mut out = ComplexMatrix::zeros(da, da);
            for m in 0..da {
                for n in 0..da {
                    out[(m, n)] = (0..db).map(|mu| rho[(m * db + mu, n * db + mu)]).sum::<Complex64>();
                }
            }
            out
        }
        Subsystem::Second => {
            let mut out = ComplexMatrix::zeros(db, db);
            for mu in 0..db {
                for nu in 0..db {
                    out[(mu, nu)] = (0..da).map(|m| rho[(m * db + mu, m * db + nu)]).sum::<Complex64>();
                }
            }
            out
        }
    }
}

/// `Tr rho^2` for Hermitian `rho`, i.e. the squared Frobenius norm.
fn purity(rho: &ComplexMatrix) -> f64 {
    rho.frobenius_norm().powi(2)
}

/// Separable states satisfy `Tr rho^2 <= min(Tr rho_A^2, Tr rho_B^2)`; the
/// state is flagged when the global purity exceeds the larger reduced purity.
pub fn alpha2_check(s: &BipartiteState) -> Alpha2Report {
    let purity_all = purity(s.rho());
    let purity_a = purity(&partial_trace(s, Subsystem::First));
    let purity_b = purity(&partial_trace(s, Subsystem::Second));
    Alpha2Report {
        purity: purity_all,
        purity_a,
        purity_b,
        flags_inseparable: purity_all > purity_a.max(purity_b) + PURITY_TOL,
    }
}
