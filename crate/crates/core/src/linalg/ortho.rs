use crate::error::{Error, Result};

const RANK_TOL: f64 = 1e-12;

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Orthonormalises real vectors in order (modified Gram-Schmidt, two passes).
///
/// The first output is the first input rescaled. Fails with `RankDeficient`
/// when a residual norm falls below `1e-12` times the norm of its input vector.
pub fn gram_schmidt(rows: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(rows.len());
    for (index, row) in rows.iter().enumerate() {
        if let Some(first) = rows.first() {
            if row.len() != first.len() {
                return Err(Error::DimensionMismatch {
                    op: "gram_schmidt",
                    left: (1, first.len()),
                    right: (1, row.len()),
                });
            }
        }
        let original = norm(row);
        let mut w = row.clone();
        for _ in 0..2 {
            for q in &out {
                let c = dot(q, &w);
                w.iter_mut().zip(q).for_each(|(wi, qi)| *wi -= c * qi);
            }
        }
        let r = norm(&w);
        if original == 0.0 || r <= RANK_TOL * original {
            return Err(Error::RankDeficient { index });
        }
        w.iter_mut().for_each(|x| *x /= r);
        out.push(w);
    }
    Ok(out)
}
