//! The 2x2 identity and Pauli matrices.

use num_complex::Complex64;

use super::ComplexMatrix;

fn m2(entries: [Complex64; 4]) -> ComplexMatrix {
    ComplexMatrix::new(2, 2, entries.to_vec()).expect("2x2")
}

const fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity() -> ComplexMatrix {
    m2([c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)])
}

pub fn sigma_x() -> ComplexMatrix {
    m2([c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)])
}

pub fn sigma_y() -> ComplexMatrix {
    m2([c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)])
}

pub fn sigma_z() -> ComplexMatrix {
    m2([c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)])
}

/// `[sigma_x, sigma_y, sigma_z]`, indexed by `p = 0, 1, 2`.
pub fn sigmas() -> [ComplexMatrix; 3] {
    [sigma_x(), sigma_y(), sigma_z()]
}

/// `n . sigma` for a real 3-vector `n`.
pub fn bloch_operator(n: &[f64; 3]) -> ComplexMatrix {
    m2([c(n[2], 0.0), c(n[0], -n[1]), c(n[0], n[1]), c(-n[2], 0.0)])
}
