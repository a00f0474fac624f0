//! Bipartite density matrices and the standard two-qubit families.
//!
//! Row and column index of a `dA x dB` state is `m * dB + mu`, with `m` the
//! first subsystem's index and `mu` the second's.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, StateViolation};
use crate::linalg::{hermitian_eigenvalues, ComplexMatrix};

/// Tolerance for Hermiticity, unit trace and positivity of a state.
pub const STATE_TOL: f64 = 1e-10;
/// Tolerance on `|a|^2 + |b|^2 = 1` for Gisin-type amplitudes.
pub const AMPLITUDE_TOL: f64 = 1e-12;

/// A validated density matrix on `C^dA (x) C^dB`.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteState {
    dims: (usize, usize),
    rho: ComplexMatrix,
}

impl BipartiteState {
    /// Validates dimensions, Hermiticity, unit trace and positivity.
    pub fn new(dims: (usize, usize), rho: ComplexMatrix) -> Result<Self> {
        let state = Self::with_dims(dims, rho)?;
        state.check_trace_and_hermiticity()?;
        let min = hermitian_eigenvalues(&state.rho)?[0];
        if min < -STATE_TOL {
            return Err(Error::InvalidState(StateViolation::NegativeEigenvalue { eigenvalue: min }));
        }
        Ok(state)
    }

    /// Two-qubit state from a 4x4 matrix.
    pub fn two_qubit(rho: ComplexMatrix) -> Result<Self> {
        Self::new((2, 2), rho)
    }

    /// Skips the eigenvalue check; used for matrices that are PSD by construction.
    pub(crate) fn trusted(dims: (usize, usize), rho: ComplexMatrix) -> Result<Self> {
        let state = Self::with_dims(dims, rho)?;
        state.check_trace_and_hermiticity()?;
        Ok(state)
    }

    fn with_dims(dims: (usize, usize), rho: ComplexMatrix) -> Result<Self> {
        let d = dims.0 * dims.1;
        if dims.0 == 0 || dims.1 == 0 || rho.shape() != (d, d) {
            return Err(Error::InvalidState(StateViolation::Dimensions { dims, rows: rho.rows(), cols: rho.cols() }));
        }
        Ok(Self { dims, rho })
    }

    fn check_trace_and_hermiticity(&self) -> Result<()> {
        let deviation = self.rho.hermitian_deviation();
        if deviation > STATE_TOL {
            return Err(Error::InvalidState(StateViolation::NotHermitian { deviation }));
        }
        let trace = self.rho.trace()?.re;
        if (trace - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidState(StateViolation::Trace { trace }));
        }
        Ok(())
    }

    pub fn dims(&self) -> (usize, usize) {
        self.dims
    }

    pub fn dim(&self) -> usize {
        self.dims.0 * self.dims.1
    }

    pub fn rho(&self) -> &ComplexMatrix {
        &self.rho
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.rho
    }

    pub fn is_two_qubit(&self) -> bool {
        self.dims == (2, 2)
    }

    /// `rho (x) other`, ordered as (self.A, self.B, other.A, other.B) with the
    /// combined dims `(dA * dB, dA' * dB')`. Use [`Self::regroup_pair`] to move
    /// both first subsystems to the first side.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        Self::trusted((self.dim(), other.dim()), self.rho.kron(&other.rho))
    }

    /// `rho (x) rho'` regrouped so that the first party holds both first
    /// subsystems: qubit order `A1 A2 B1 B2`, dims `(4, 4)`. Two-qubit inputs only.
    pub fn regroup_pair(&self, other: &Self) -> Result<Self> {
        for s in [self, other] {
            if !s.is_two_qubit() {
                return Err(Error::WrongDimensions(s.dims));
            }
        }
        let m = self.rho.kron(&other.rho).permute_qubits(&[0, 2, 1, 3])?;
        Self::trusted((4, 4), m)
    }

    /// Conjugates by a local unitary `ua (x) ub`.
    pub fn local_unitary(&self, ua: &ComplexMatrix, ub: &ComplexMatrix) -> Result<Self> {
        if ua.shape() != (self.dims.0, self.dims.0) || ub.shape() != (self.dims.1, self.dims.1) {
            return Err(Error::DimensionMismatch { op: "local_unitary", left: ua.shape(), right: ub.shape() });
        }
        let u = ua.kron(ub);
        let m = u.multiply(&self.rho)?.multiply(&u.dagger())?;
        Self::trusted(self.dims, m)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&StateFile::from(self)).expect("state serialises")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: StateFile = serde_json::from_str(text)?;
        file.into_state()
    }
}

/// Singlet fraction of a Werner state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WernerParams {
    pub x: f64,
}

impl WernerParams {
    pub fn new(x: f64) -> Result<Self> {
        check_unit_interval("x", x)?;
        Ok(Self { x })
    }
}

/// Mixture `x |psi><psi| + (1-x)/2 (|00><00| + |11><11|)` with `psi = a|01> + b|10>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GisinParams {
    pub x: f64,
    pub a: Complex64,
    pub b: Complex64,
}

impl GisinParams {
    pub fn new(x: f64, a: Complex64, b: Complex64) -> Result<Self> {
        check_unit_interval("x", x)?;
        let norm = a.norm_sqr() + b.norm_sqr();
        if (norm - 1.0).abs() > AMPLITUDE_TOL {
            return Err(Error::param("|a|^2+|b|^2", norm, "must equal 1"));
        }
        Ok(Self { x, a, b })
    }

    /// Real amplitudes `a = cos t`, `b = sin t` with `a * b = ab`, for `0 <= ab <= 1/2`.
    pub fn with_product(x: f64, ab: f64) -> Result<Self> {
        if !(0.0..=0.5).contains(&ab) {
            return Err(Error::param("|ab|", ab, "must lie in [0, 1/2]"));
        }
        let a = ((1.0 + (1.0 - 4.0 * ab * ab).sqrt()) / 2.0).sqrt();
        let b = (1.0 - a * a).max(0.0).sqrt();
        Self::new(x, a.into(), b.into())
    }
}

fn check_unit_interval(name: &'static str, x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::param(name, x, "must lie in [0, 1]"))
    }
}

fn real4(entries: [f64; 16]) -> ComplexMatrix {
    ComplexMatrix::from_real(4, 4, &entries).expect("4x4")
}

/// Projector onto the singlet `(|01> - |10>)/sqrt(2)`.
pub fn singlet_projector() -> BipartiteState {
    #[rustfmt::skip]
    let s = real4([
        0.0, 0.0, 0.0, 0.0,
        0.0, 0.5, -0.5, 0.0,
        0.0, -0.5, 0.5, 0.0,
        0.0, 0.0, 0.0, 0.0,
    ]);
    BipartiteState { dims: (2, 2), rho: s }
}

/// `x S + (1 - x) I/4`.
pub fn werner_state(p: WernerParams) -> BipartiteState {
    let x = p.x;
    let d = (1.0 - x) / 4.0;
    let rho = singlet_projector().rho.scale_real(x).add(&ComplexMatrix::identity(4).scale_real(d)).expect("4x4");
    BipartiteState { dims: (2, 2), rho }
}

/// Convenience wrapper validating `x`.
pub fn werner(x: f64) -> Result<BipartiteState> {
    Ok(werner_state(WernerParams::new(x)?))
}

pub fn gisin_state(p: GisinParams) -> BipartiteState {
    let GisinParams { x, a, b } = p;
    let mut rho = ComplexMatrix::zeros(4, 4);
    rho[(0, 0)] = ((1.0 - x) / 2.0).into();
    rho[(3, 3)] = ((1.0 - x) / 2.0).into();
    rho[(1, 1)] = (x * a.norm_sqr()).into();
    rho[(2, 2)] = (x * b.norm_sqr()).into();
    rho[(1, 2)] = a * b.conj() * x;
    rho[(2, 1)] = (a * b.conj() * x).conj();
    BipartiteState { dims: (2, 2), rho }
}

/// `x S + (1 - x) |00><00|`.
pub fn singlet_plus_polarized(x: f64) -> Result<BipartiteState> {
    check_unit_interval("x", x)?;
    let mut rho = singlet_projector().rho.scale_real(x);
    rho[(0, 0)] += Complex64::from(1.0 - x);
    Ok(BipartiteState { dims: (2, 2), rho })
}

/// Product state `rho_a (x) rho_b`.
pub fn product_state(rho_a: &ComplexMatrix, rho_b: &ComplexMatrix) -> Result<BipartiteState> {
    BipartiteState::new((rho_a.rows(), rho_b.rows()), rho_a.kron(rho_b))
}

/// On-disk interchange format: `{"dims": [dA, dB], "re": [[..]], "im": [[..]]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateFile {
    pub dims: [usize; 2],
    pub re: Vec<Vec<f64>>,
    #[serde(default)]
    pub im: Vec<Vec<f64>>,
}

impl From<&BipartiteState> for StateFile {
    fn from(s: &BipartiteState) -> Self {
        let d = s.dim();
        let rows = |f: fn(&Complex64) -> f64| (0..d).map(|i| s.rho.row(i).iter().map(f).collect()).collect();
        StateFile { dims: [s.dims.0, s.dims.1], re: rows(|z| z.re), im: rows(|z| z.im) }
    }
}

impl StateFile {
    pub fn into_state(self) -> Result<BipartiteState> {
        let d = self.dims[0] * self.dims[1];
        if self.re.len() != d || self.re.iter().any(|r| r.len() != d) {
            return Err(Error::Parse(format!("'re' must be a {d}x{d} array for dims {:?}", self.dims)));
        }
        let im = if self.im.is_empty() { vec![vec![0.0; d]; d] } else { self.im };
        if im.len() != d || im.iter().any(|r| r.len() != d) {
            return Err(Error::Parse(format!("'im' must be a {d}x{d} array for dims {:?}", self.dims)));
        }
        let data = self
            .re
            .iter()
            .zip(&im)
            .flat_map(|(r, i)| r.iter().zip(i).map(|(&re, &im)| Complex64::new(re, im)))
            .collect();
        let m = ComplexMatrix::new(d, d, data)?;
        BipartiteState::new((self.dims[0], self.dims[1]), m)
    }
}

/// Reads and validates a state in the interchange format.
pub fn state_from_file(path: impl AsRef<Path>) -> Result<BipartiteState> {
    let text = std::fs::read_to_string(path)?;
    BipartiteState::from_json(&text)
}

pub fn state_to_file(state: &BipartiteState, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, state.to_json())?;
    Ok(())
}
