//! CHSH expectation values and the maximal CHSH value of two-qubit states.
//!
//! With `T_pq = Tr[(sigma_p (x) sigma_q) rho]` and `M` the sum of the two
//! largest eigenvalues of `T^T T`, the largest value of
//! `<AB + AB' + A'B - A'B'>` over all spin measurements is `2 sqrt(M)`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{dot, norm, pauli, symmetric_eigen, ComplexMatrix};
use crate::states::BipartiteState;

/// Tolerance on unit length of measurement directions.
pub const UNIT_TOL: f64 = 1e-12;
const IMAG_TOL: f64 = 1e-10;

/// Bloch directions of the four dichotomic observables `A = a . sigma` etc.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementSettings {
    pub a: [f64; 3],
    pub a_prime: [f64; 3],
    pub b: [f64; 3],
    pub b_prime: [f64; 3],
}

impl MeasurementSettings {
    pub fn new(a: [f64; 3], a_prime: [f64; 3], b: [f64; 3], b_prime: [f64; 3]) -> Result<Self> {
        for (name, v) in [("a", a), ("a'", a_prime), ("b", b), ("b'", b_prime)] {
            let n = norm(&v);
            if (n - 1.0).abs() > UNIT_TOL {
                return Err(Error::param(
                    name,
                    format!("{v:?} (norm {n})"),
                    "measurement direction must be a unit vector",
                ));
            }
        }
        Ok(Self { a, a_prime, b, b_prime })
    }

    /// The Bell operator `AB + AB' + A'B - A'B'` as a 4x4 matrix.
    pub fn bell_operator(&self) -> ComplexMatrix {
        let a = pauli::bloch_operator(&self.a);
        let ap = pauli::bloch_operator(&self.a_prime);
        let b = pauli::bloch_operator(&self.b);
        let bp = pauli::bloch_operator(&self.b_prime);
        let terms = [a.kron(&b), a.kron(&bp), ap.kron(&b), ap.kron(&bp).scale_real(-1.0)];
        terms.iter().skip(1).fold(terms[0].clone(), |acc, t| &acc + t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationMatrix {
    /// `t[p][q] = Tr[(sigma_p (x) sigma_q) rho]`, `p, q` over x, y, z.
    pub t: [[f64; 3]; 3],
    /// Sum of the two largest eigenvalues of `T^T T`.
    pub m_value: f64,
    /// `2 sqrt(m_value)`.
    pub chsh_max: f64,
}

impl CorrelationMatrix {
    pub fn from_t(t: [[f64; 3]; 3]) -> Result<Self> {
        let ttt = t_transpose_t(&t);
        let eig = symmetric_eigen(&ttt, 3)?;
        let m_value = (eig.values[1] + eig.values[2]).max(0.0);
        Ok(Self { t, m_value, chsh_max: 2.0 * m_value.sqrt() })
    }

    fn apply(&self, v: &[f64]) -> [f64; 3] {
        let mut out = [0.0; 3];
        for (p, o) in out.iter_mut().enumerate() {
            *o = dot(&self.t[p], v);
        }
        out
    }
}

fn t_transpose_t(t: &[[f64; 3]; 3]) -> Vec<f64> {
    let mut out = vec![0.0; 9];
    for i in 0..3 {
        for j in 0..3 {
            out[i * 3 + j] = (0..3).map(|p| t[p][i] * t[p][j]).sum();
        }
    }
    out
}

/// `Tr[(a (x) b) rho]` for 2x2 `a`, `b` and 4x4 `rho`.
fn local_expectation(a: &ComplexMatrix, b: &ComplexMatrix, rho: &ComplexMatrix) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..2 {
        for j in 0..2 {
            let aij = a[(i, j)];
            if aij.norm_sqr() == 0.0 {
                continue;
            }
            for k in 0..2 {
                for l in 0..2 {
                    acc += aij * b[(k, l)] * rho[(j * 2 + l, i * 2 + k)];
                }
            }
        }
    }
    acc
}

/// Correlation matrix of a 4x4 matrix assumed Hermitian with unit trace.
pub(crate) fn correlation_of(rho: &ComplexMatrix) -> Result<CorrelationMatrix> {
    let sigmas = pauli::sigmas();
    let mut t = [[0.0; 3]; 3];
    for p in 0..3 {
        for q in 0..3 {
            let z = local_expectation(&sigmas[p], &sigmas[q], rho);
            if z.im.abs() > IMAG_TOL {
                return Err(Error::NotHermitian { deviation: z.im.abs() });
            }
            t[p][q] = z.re;
        }
    }
    CorrelationMatrix::from_t(t)
}

fn require_two_qubit(s: &BipartiteState) -> Result<()> {
    if s.is_two_qubit() {
        Ok(())
    } else {
        Err(Error::WrongDimensions(s.dims()))
    }
}

pub fn t_matrix(s: &BipartiteState) -> Result<CorrelationMatrix> {
    require_two_qubit(s)?;
    correlation_of(s.rho())
}

/// Maximal CHSH value `2 sqrt(M)`.
pub fn chsh_max(s: &BipartiteState) -> Result<f64> {
    Ok(t_matrix(s)?.chsh_max)
}

/// `Tr(C rho)` for the Bell operator built from `settings`.
pub fn chsh_value(s: &BipartiteState, settings: &MeasurementSettings) -> Result<f64> {
    require_two_qubit(s)?;
    let c = settings.bell_operator();
    Ok(c.multiply(s.rho())?.trace()?.re)
}

fn normalized_or(v: [f64; 3], fallback: [f64; 3]) -> [f64; 3] {
    let n = norm(&v);
    if n > 1e-300 {
        [v[0] / n, v[1] / n, v[2] / n]
    } else {
        fallback
    }
}

fn orthogonal_unit(v: &[f64; 3]) -> [f64; 3] {
    // cross with the axis least aligned with v
    let axis = if v[0].abs() <= v[1].abs() && v[0].abs() <= v[2].abs() {
        [1.0, 0.0, 0.0]
    } else if v[1].abs() <= v[2].abs() {
        [0.0, 1.0, 0.0]
    } else {
        [0.0, 0.0, 1.0]
    };
    let c = [v[1] * axis[2] - v[2] * axis[1], v[2] * axis[0] - v[0] * axis[2], v[0] * axis[1] - v[1] * axis[0]];
    normalized_or(c, [1.0, 0.0, 0.0])
}

/// Settings achieving `chsh_max`, built from the top two eigenvectors `c1, c2`
/// of `T^T T`: `b, b' = cos(t) c1 +- sin(t) c2` with `tan t = sqrt(l2 / l1)`,
/// `a = T c1 / |T c1|`, `a' = T c2 / |T c2|`.
pub fn optimal_settings(s: &BipartiteState) -> Result<MeasurementSettings> {
    let corr = t_matrix(s)?;
    let eig = symmetric_eigen(&t_transpose_t(&corr.t), 3)?;
    let c1 = eig.vector(2);
    let c2 = eig.vector(1);
    let l1 = eig.values[2].max(0.0);
    let l2 = eig.values[1].max(0.0);
    let (cos_t, sin_t) = if l1 + l2 > 0.0 {
        let r = (l1 + l2).sqrt();
        (l1.sqrt() / r, l2.sqrt() / r)
    } else {
        (1.0, 0.0)
    };
    let b: [f64; 3] = std::array::from_fn(|i| cos_t * c1[i] + sin_t * c2[i]);
    let b_prime: [f64; 3] = std::array::from_fn(|i| cos_t * c1[i] - sin_t * c2[i]);
    let a = normalized_or(corr.apply(&c1), [0.0, 0.0, 1.0]);
    let a_prime = normalized_or(corr.apply(&c2), orthogonal_unit(&a));
    let top = [c1[0], c1[1], c1[2]];
    MeasurementSettings::new(a, a_prime, normalized_or(b, top), normalized_or(b_prime, top))
}
