//! Dense complex linear algebra for small multi-qubit systems.
//!
//! Basis indices of multi-qubit matrices follow one convention throughout the
//! crate: qubit slot 0 is the most significant bit of the index.

mod eigen;
mod ortho;
pub mod pauli;

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub use eigen::{hermitian_eigenvalues, symmetric_eigen, SymmetricEigen};
pub use ortho::{dot, gram_schmidt, norm};

/// Tolerance used when checking Hermiticity of input matrices.
pub const HERMITIAN_TOL: f64 = 1e-10;

pub(crate) const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
pub(crate) const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Row-major dense complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::param("shape", format!("{rows}x{cols}"), "rows and cols must be positive"));
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch { op: "new", left: (rows, cols), right: (data.len(), 1) });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "empty matrix");
        Self { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    /// Builds a matrix from real row-major entries.
    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        Self::new(rows, cols, data.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Builds a matrix from nested rows. All rows must have equal length.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Parse("ragged matrix rows".into()));
        }
        Self::new(rows.len(), cols, rows.concat())
    }

    pub fn diag(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = Complex64::new(v, 0.0);
        }
        m
    }

    /// Outer product `|a><b|` of two column vectors.
    pub fn outer(a: &[Complex64], b: &[Complex64]) -> Self {
        let mut m = Self::zeros(a.len(), b.len());
        for (i, ai) in a.iter().enumerate() {
            for (j, bj) in b.iter().enumerate() {
                m[(i, j)] = ai * bj.conj();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Kronecker (direct) product. Entry `(i*b.rows + k, j*b.cols + l)` is `a[i,j] * b[k,l]`.
    pub fn kron(&self, other: &Self) -> Self {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut data = vec![ZERO; rows * cols];
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self[(i, j)];
                if a == ZERO {
                    continue;
                }
                for k in 0..other.rows {
                    let row = (i * other.rows + k) * cols + j * other.cols;
                    for l in 0..other.cols {
                        data[row + l] = a * other[(k, l)];
                    }
                }
            }
        }
        Self { rows, cols, data }
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    pub fn conj(&self) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z.conj()).collect() }
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { op: "multiply", left: self.shape(), right: other.shape() });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == ZERO {
                    continue;
                }
                for (o, b) in out_row.iter_mut().zip(other.row(k)) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, "add", |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, "sub", |a, b| a - b)
    }

    fn zip_with(&self, other: &Self, op: &'static str, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Self> {
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch { op, left: self.shape(), right: other.shape() });
        }
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect();
        Ok(Self { rows: self.rows, cols: self.cols, data })
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z * s).collect() }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    pub fn trace(&self) -> Result<Complex64> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        Ok((0..self.rows).map(|i| self[(i, i)]).sum())
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch { op: "max_abs_diff", left: self.shape(), right: other.shape() });
        }
        Ok(self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
    }

    /// Largest entrywise modulus of `self - self^dagger`; infinite when not square.
    pub fn hermitian_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut dev = 0.0f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Re-orders qubit slots of a `2^k x 2^k` matrix.
    ///
    /// Slot `i` of the result carries slot `perm[i]` of the input, applied to row
    /// and column indices alike. The result is `P m P^T` for a permutation matrix
    /// `P`, so trace, Hermiticity and spectrum are preserved.
    pub fn permute_qubits(&self, perm: &[usize]) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        let k = qubit_count(self.rows)?;
        if perm.len() != k {
            return Err(Error::InvalidPermutation(perm.to_vec()));
        }
        let mut seen = vec![false; k];
        for &p in perm {
            if p >= k || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidPermutation(perm.to_vec()));
            }
        }
        // source index for every destination index
        let src: Vec<usize> = (0..self.rows)
            .map(|dst| {
                let mut s = 0;
                for (i, &p) in perm.iter().enumerate() {
                    let bit = (dst >> (k - 1 - i)) & 1;
                    s |= bit << (k - 1 - p);
                }
                s
            })
            .collect();
        let mut out = Self::zeros(self.rows, self.cols);
        for (r, &sr) in src.iter().enumerate() {
            let src_row = self.row(sr);
            let out_row = &mut out.data[r * self.cols..(r + 1) * self.cols];
            for (o, &sc) in out_row.iter_mut().zip(&src) {
                *o = src_row[sc];
            }
        }
        Ok(out)
    }
}

/// Number of qubits `k` with `2^k = dim`.
pub fn qubit_count(dim: usize) -> Result<usize> {
    if dim.is_power_of_two() {
        Ok(dim.trailing_zeros() as usize)
    } else {
        Err(Error::NotPowerOfTwo(dim))
    }
}

/// Free-function form of [`ComplexMatrix::kron`].
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kron(b)
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

// Operator forms panic on shape mismatch; use the named methods for checked arithmetic.
impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: Self) -> ComplexMatrix {
        ComplexMatrix::add(self, rhs).expect("shape mismatch in +")
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: Self) -> ComplexMatrix {
        ComplexMatrix::sub(self, rhs).expect("shape mismatch in -")
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: Self) -> ComplexMatrix {
        self.multiply(rhs).expect("shape mismatch in *")
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for z in self.row(i) {
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::pauli::{identity, sigma_x, sigma_y, sigma_z};
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn kron_identities() {
        assert_eq!(identity().kron(&identity()), ComplexMatrix::identity(4));
        assert_eq!(sigma_z().kron(&sigma_z()), ComplexMatrix::diag(&[1.0, -1.0, -1.0, 1.0]));
        let a = ComplexMatrix::zeros(2, 3);
        let b = ComplexMatrix::zeros(4, 2);
        assert_eq!(a.kron(&b).shape(), (8, 6));
    }

    #[test]
    fn kron_entry_layout() {
        let a = ComplexMatrix::from_real(2, 2, &[1.0, 2.0, 3.0, 4.0]).unwrap();
        let b = ComplexMatrix::from_real(2, 3, &[1.0, 10.0, 100.0, -1.0, -10.0, -100.0]).unwrap();
        let k = a.kron(&b);
        for i in 0..2 {
            for j in 0..2 {
                for p in 0..2 {
                    for q in 0..3 {
                        assert_eq!(k[(i * 2 + p, j * 3 + q)], a[(i, j)] * b[(p, q)]);
                    }
                }
            }
        }
    }

    #[test]
    fn dagger_multiply_trace() {
        assert_eq!(sigma_y().dagger(), sigma_y());
        assert_eq!(ComplexMatrix::identity(4).trace().unwrap(), c(4.0));
        assert_eq!(sigma_x().multiply(&sigma_x()).unwrap(), identity());
        assert!(matches!(
            ComplexMatrix::zeros(2, 3).multiply(&ComplexMatrix::zeros(2, 3)),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(ComplexMatrix::zeros(2, 3).trace(), Err(Error::NotSquare { .. })));
        assert!(ComplexMatrix::zeros(2, 2).add(&ComplexMatrix::zeros(3, 3)).is_err());
    }

    #[test]
    fn new_rejects_bad_shapes() {
        assert!(ComplexMatrix::new(0, 2, vec![]).is_err());
        assert!(ComplexMatrix::new(2, 2, vec![ZERO; 3]).is_err());
    }

    #[test]
    fn permute_identity_and_swap() {
        let a = ComplexMatrix::from_real(2, 2, &[0.7, 0.1, 0.1, 0.3]).unwrap();
        let b = ComplexMatrix::from_real(2, 2, &[0.4, -0.2, -0.2, 0.6]).unwrap();
        let ab = a.kron(&b);
        assert_eq!(ab.permute_qubits(&[0, 1]).unwrap(), ab);
        assert_eq!(ab.permute_qubits(&[1, 0]).unwrap(), b.kron(&a));
    }

    #[test]
    fn permute_three_slots_moves_factors() {
        let a = sigma_x();
        let b = sigma_z();
        let d = ComplexMatrix::diag(&[2.0, 3.0]);
        let abd = a.kron(&b).kron(&d);
        // new slot 0 <- old 2, new 1 <- old 0, new 2 <- old 1
        assert_eq!(abd.permute_qubits(&[2, 0, 1]).unwrap(), d.kron(&a).kron(&b));
    }

    #[test]
    fn permute_errors() {
        let m = ComplexMatrix::identity(4);
        assert!(matches!(m.permute_qubits(&[0, 0]), Err(Error::InvalidPermutation(_))));
        assert!(matches!(m.permute_qubits(&[0, 2]), Err(Error::InvalidPermutation(_))));
        assert!(matches!(m.permute_qubits(&[0]), Err(Error::InvalidPermutation(_))));
        assert!(matches!(ComplexMatrix::identity(3).permute_qubits(&[0]), Err(Error::NotPowerOfTwo(3))));
    }

    #[test]
    fn trace_of_kron_factorises() {
        let a = ComplexMatrix::from_real(2, 2, &[1.5, 2.0, -1.0, 0.25]).unwrap();
        let b = ComplexMatrix::from_real(3, 3, &[1.0, 0.0, 2.0, 0.0, -3.0, 0.0, 1.0, 1.0, 0.5]).unwrap();
        let lhs = a.kron(&b).trace().unwrap();
        let rhs = a.trace().unwrap() * b.trace().unwrap();
        assert!((lhs - rhs).norm() < 1e-14);
    }
}
