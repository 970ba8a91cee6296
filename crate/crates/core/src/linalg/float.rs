//! f64 numerics backed by nalgebra: orthonormal bases, complements, singular values.

use nalgebra::{DMatrix, SymmetricEigen};

use super::CMatrix;
use crate::scalar::ComplexScalar;

pub type C64 = nalgebra::Complex<f64>;

/// Modified Gram-Schmidt with one reorthogonalization pass; drops dependent rows.
pub fn orthonormal_rows(rows: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let scale = rows
        .iter()
        .map(|r| r.iter().map(|x| x * x).sum::<f64>().sqrt())
        .fold(0.0, f64::max);
    let mut out: Vec<Vec<f64>> = Vec::new();
    for r in rows {
        let mut v = r.clone();
        for _ in 0..2 {
            for b in &out {
                let f: f64 = b.iter().zip(&v).map(|(x, y)| x * y).sum();
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi -= f * bi;
                }
            }
        }
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-8 * scale.max(1e-300) && n > 1e-13 {
            v.iter_mut().for_each(|x| *x /= n);
            out.push(v);
        }
    }
    out
}

/// Orthonormal basis of the orthogonal complement of orthonormal `rows` in R^dim.
pub fn orthonormal_complement(rows: &[Vec<f64>], dim: usize) -> Vec<Vec<f64>> {
    let mut p = DMatrix::<f64>::identity(dim, dim);
    for r in rows {
        for i in 0..dim {
            if r[i] == 0.0 {
                continue;
            }
            for j in 0..dim {
                p[(i, j)] -= r[i] * r[j];
            }
        }
    }
    let eig = SymmetricEigen::new(p);
    let mut out = Vec::new();
    for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
        if lambda > 0.5 {
            out.push(eig.eigenvectors.column(k).iter().copied().collect());
        }
    }
    orthonormal_rows(&out)
}

pub fn singular_values(m: &DMatrix<f64>) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.clone().singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Numerical rank with a singular-value threshold relative to the largest value.
pub fn numerical_rank(values: &[f64], rel: f64) -> usize {
    let Some(&top) = values.first() else { return 0 };
    if top <= 1e-13 {
        return 0;
    }
    values.iter().filter(|&&s| s > rel * top).count()
}

pub fn to_nalgebra(m: &CMatrix<f64>) -> DMatrix<C64> {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| {
        let z = m.get(i, j);
        C64::new(z.re, z.im)
    })
}

pub fn from_nalgebra(m: &DMatrix<C64>) -> CMatrix<f64> {
    CMatrix::from_fn(m.nrows(), m.ncols(), |i, j| {
        let z = m[(i, j)];
        ComplexScalar::new(z.re, z.im)
    })
}

pub fn real_to_nalgebra(m: &super::Matrix<f64>) -> DMatrix<f64> {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| *m.get(i, j))
}

/// Matrix exponential of a complex matrix.
pub fn expm(m: &CMatrix<f64>) -> CMatrix<f64> {
    from_nalgebra(&to_nalgebra(m).exp())
}

pub fn frobenius_distance(a: &CMatrix<f64>, b: &CMatrix<f64>) -> f64 {
    a.sub(b)
        .entries()
        .iter()
        .map(|z| z.re * z.re + z.im * z.im)
        .sum::<f64>()
        .sqrt()
}
