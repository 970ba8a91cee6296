//! Dense matrices over a ring, reduced echelon form, and subspaces with membership tests.

pub mod float;

use std::fmt;

use crate::scalar::{ComplexScalar, RingElem, Scalar};

#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type CMatrix<S> = Matrix<ComplexScalar<S>>;

impl<T: RingElem> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = T::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        Matrix {
            rows: r,
            cols: c,
            data: rows.iter().flat_map(|row| row.iter().cloned()).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut T {
        &mut self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Product skipping zero entries of the left factor.
    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let slot = &mut out.data[i * rhs.cols + j];
                    slot.add_mul_assign(a, b);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = T::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    acc.add_mul_assign(a, b);
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.add_ref(b))
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.sub_ref(b))
                .collect(),
        }
    }

    pub fn scale(&self, s: &T) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a.mul_ref(s)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(RingElem::neg_ref).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(RingElem::is_zero)
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn map<U: RingElem>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn commutator(&self, rhs: &Self) -> Self {
        self.mul(rhs).sub(&rhs.mul(self))
    }
}

impl<S: Scalar> Matrix<S> {
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(Scalar::magnitude).fold(0.0, f64::max)
    }
}

impl<S: Scalar> CMatrix<S> {
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn trace(&self) -> ComplexScalar<S> {
        let mut t = ComplexScalar::zero();
        for i in 0..self.rows.min(self.cols) {
            t = t.add_ref(self.get(i, i));
        }
        t
    }

    pub fn max_abs(&self) -> f64 {
        self.data
            .iter()
            .map(ComplexScalar::magnitude)
            .fold(0.0, f64::max)
    }

    pub fn frobenius(&self) -> f64 {
        self.data
            .iter()
            .map(|z| z.norm_sqr().to_f64())
            .sum::<f64>()
            .sqrt()
    }

    /// ‖U U* − I‖ as a max-entry residual.
    pub fn unitarity_residual(&self) -> f64 {
        self.mul(&self.adjoint())
            .sub(&Self::identity(self.rows))
            .max_abs()
    }

    /// Determinant by fraction-free elimination over the complex ring (small n only).
    pub fn det(&self) -> ComplexScalar<S> {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.clone();
        let mut det = ComplexScalar::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !a.get(r, col).is_zero()) else {
                return ComplexScalar::zero();
            };
            if p != col {
                for j in 0..n {
                    a.data.swap(p * n + j, col * n + j);
                }
                det = det.neg_ref();
            }
            let piv = a.get(col, col).clone();
            det = det.mul_ref(&piv);
            let inv = piv.inv().expect("nonzero pivot has an inverse");
            for r in col + 1..n {
                let f = a.get(r, col).mul_ref(&inv);
                if f.is_zero() {
                    continue;
                }
                for j in col..n {
                    let v = a.get(r, j).sub_ref(&f.mul_ref(a.get(col, j)));
                    a.set(r, j, v);
                }
            }
        }
        det
    }
}

impl<T: RingElem> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}x{}]", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        Ok(())
    }
}

pub fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    let mut acc = S::zero();
    for (x, y) in a.iter().zip(b) {
        acc.add_mul_assign(x, y);
    }
    acc
}

pub fn max_magnitude<S: Scalar>(v: &[S]) -> f64 {
    v.iter().map(Scalar::magnitude).fold(0.0, f64::max)
}

fn pivot_tolerance<S: Scalar>(rows: &[Vec<S>]) -> f64 {
    if S::EXACT {
        0.0
    } else {
        let scale = rows.iter().map(|r| max_magnitude(r)).fold(1.0, f64::max);
        1e-10 * scale
    }
}

/// Reduced row echelon form. Returns the nonzero rows and their pivot columns.
pub fn rref<S: Scalar>(mut rows: Vec<Vec<S>>, ncols: usize) -> (Vec<Vec<S>>, Vec<usize>) {
    let tol = pivot_tolerance(&rows);
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == rows.len() {
            break;
        }
        let found = if S::EXACT {
            (r..rows.len()).find(|&i| !rows[i][col].is_zero())
        } else {
            (r..rows.len())
                .max_by(|&i, &j| {
                    rows[i][col]
                        .magnitude()
                        .total_cmp(&rows[j][col].magnitude())
                })
                .filter(|&i| rows[i][col].magnitude() > tol)
        };
        let Some(p) = found else { continue };
        rows.swap(r, p);
        let inv = rows[r][col].inv().expect("pivot is invertible");
        let pivot_row: Vec<S> = rows[r].iter().map(|x| x.mul_ref(&inv)).collect();
        for (i, target) in rows.iter_mut().enumerate() {
            if i == r || target[col].is_zero() {
                continue;
            }
            let f = target[col].clone();
            for (t, s) in target.iter_mut().zip(&pivot_row).skip(col) {
                if !s.is_zero() {
                    *t = t.sub_ref(&f.mul_ref(s));
                }
            }
            if !S::EXACT {
                target[col] = S::zero();
            }
        }
        rows[r] = pivot_row;
        pivots.push(col);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

pub fn rank<S: Scalar>(rows: Vec<Vec<S>>, ncols: usize) -> usize {
    rref(rows, ncols).1.len()
}

/// Basis of {v : rows · v = 0}.
pub fn nullspace<S: Scalar>(rows: Vec<Vec<S>>, ncols: usize) -> Vec<Vec<S>> {
    let (r, pivots) = rref(rows, ncols);
    let mut out = Vec::new();
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    for free in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![S::zero(); ncols];
        v[free] = S::one();
        for (row, &p) in r.iter().zip(&pivots) {
            v[p] = row[free].neg_ref();
        }
        out.push(v);
    }
    out
}

/// A linear subspace of S^N.
///
/// Exact rings keep the reduced echelon basis; float rings keep an orthonormal basis.
#[derive(Clone, Debug)]
pub struct Subspace<S> {
    ambient: usize,
    basis: Vec<Vec<S>>,
    pivots: Vec<usize>,
}

/// Float membership threshold on relative residuals.
pub const FLOAT_MEMBERSHIP_TOL: f64 = 1e-9;

impl<S: Scalar> Subspace<S> {
    pub fn span(ambient: usize, vectors: Vec<Vec<S>>) -> Self {
        debug_assert!(vectors.iter().all(|v| v.len() == ambient));
        if let Some(basis) = S::orthonormal_rows(&vectors) {
            return Subspace {
                ambient,
                basis,
                pivots: Vec::new(),
            };
        }
        let (basis, pivots) = rref(vectors, ambient);
        Subspace {
            ambient,
            basis,
            pivots,
        }
    }

    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        let vectors = (0..ambient)
            .map(|i| {
                let mut v = vec![S::zero(); ambient];
                v[i] = S::one();
                v
            })
            .collect();
        Self::span(ambient, vectors)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<S>] {
        &self.basis
    }

    /// Component of `v` outside the subspace.
    pub fn reduce(&self, v: &[S]) -> Vec<S> {
        let mut out = v.to_vec();
        if S::EXACT {
            for (row, &p) in self.basis.iter().zip(&self.pivots) {
                if out[p].is_zero() {
                    continue;
                }
                let f = out[p].clone();
                for (o, b) in out.iter_mut().zip(row) {
                    if !b.is_zero() {
                        *o = o.sub_ref(&f.mul_ref(b));
                    }
                }
            }
        } else {
            // Two passes of Gram-Schmidt projection.
            for _ in 0..2 {
                for row in &self.basis {
                    let f = dot(row, &out);
                    for (o, b) in out.iter_mut().zip(row) {
                        *o = o.sub_ref(&f.mul_ref(b));
                    }
                }
            }
        }
        out
    }

    /// Exact: max magnitude of the reduced remainder (0 iff member).
    /// Float: norm of the orthogonal remainder relative to max(1, ‖v‖).
    pub fn residual(&self, v: &[S]) -> f64 {
        let rem = self.reduce(v);
        if S::EXACT {
            if rem.iter().all(RingElem::is_zero) {
                0.0
            } else {
                max_magnitude(&rem).max(f64::MIN_POSITIVE)
            }
        } else {
            let n = rem.iter().map(|x| x.to_f64().powi(2)).sum::<f64>().sqrt();
            let scale = v
                .iter()
                .map(|x| x.to_f64().powi(2))
                .sum::<f64>()
                .sqrt()
                .max(1.0);
            n / scale
        }
    }

    pub fn contains(&self, v: &[S]) -> bool {
        if S::EXACT {
            self.reduce(v).iter().all(RingElem::is_zero)
        } else {
            self.residual(v) <= FLOAT_MEMBERSHIP_TOL
        }
    }

    pub fn contains_all(&self, other: &Subspace<S>) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    pub fn same_as(&self, other: &Subspace<S>) -> bool {
        self.ambient == other.ambient && self.dim() == other.dim() && self.contains_all(other)
    }

    /// Annihilator in dual coordinates: {β : β·v = 0 for all v in self}.
    pub fn annihilator(&self) -> Subspace<S> {
        if let Some(comp) = S::orthonormal_complement(&self.basis, self.ambient) {
            return Subspace {
                ambient: self.ambient,
                basis: comp,
                pivots: Vec::new(),
            };
        }
        Self::span(self.ambient, nullspace(self.basis.clone(), self.ambient))
    }

    pub fn sum(&self, other: &Subspace<S>) -> Subspace<S> {
        let mut v = self.basis.clone();
        v.extend(other.basis.iter().cloned());
        Self::span(self.ambient, v)
    }

    pub fn intersect(&self, other: &Subspace<S>) -> Subspace<S> {
        self.annihilator().sum(&other.annihilator()).annihilator()
    }

    /// Exact rings: literal equality of the reduced echelon bases (canonical, so this is
    /// subspace equality). Float rings fall back to `same_as`.
    pub fn same_echelon(&self, other: &Subspace<S>) -> bool {
        if S::EXACT {
            self.ambient == other.ambient
                && self.pivots == other.pivots
                && self.basis == other.basis
        } else {
            self.same_as(other)
        }
    }

    pub fn to_float(&self) -> Subspace<f64> {
        Subspace::span(
            self.ambient,
            self.basis
                .iter()
                .map(|v| v.iter().map(Scalar::to_f64).collect())
                .collect(),
        )
    }

    /// Image under a linear map given as an N×N matrix acting on column vectors.
    pub fn map(&self, m: &Matrix<S>) -> Subspace<S> {
        Self::span(m.rows(), self.basis.iter().map(|v| m.mul_vec(v)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use proptest::prelude::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    #[test]
    fn rref_and_nullspace() {
        let rows = vec![
            vec![q(1), q(2), q(3)],
            vec![q(2), q(4), q(6)],
            vec![q(0), q(1), q(1)],
        ];
        let (r, p) = rref(rows.clone(), 3);
        assert_eq!(p, vec![0, 1]);
        assert_eq!(r.len(), 2);
        let ns = nullspace(rows.clone(), 3);
        assert_eq!(ns.len(), 1);
        for row in &rows {
            assert!(dot(row, &ns[0]).is_zero());
        }
    }

    #[test]
    fn intersection_dimension_formula() {
        let e = |i: usize| {
            let mut v = vec![q(0); 4];
            v[i] = q(1);
            v
        };
        let a = Subspace::span(4, vec![e(0), e(1), e(2)]);
        let b = Subspace::span(4, vec![e(1), e(2), e(3)]);
        let i = a.intersect(&b);
        assert_eq!(i.dim(), 2);
        assert_eq!(i.dim(), a.dim() + b.dim() - a.sum(&b).dim());
        assert!(a.intersect(&a).same_as(&a));
    }

    #[test]
    fn float_subspace_matches_exact() {
        let rows = vec![vec![1.0, 2.0, 0.0, 1.0], vec![0.0, 1.0, 1.0, 0.0]];
        let s = Subspace::span(4, rows);
        assert_eq!(s.dim(), 2);
        assert_eq!(s.annihilator().dim(), 2);
        assert!(s.contains(&[1.0, 3.0, 1.0, 1.0]));
        assert!(!s.contains(&[0.0, 0.0, 0.0, 1.0]));
        let ann = s.annihilator();
        for b in ann.basis() {
            assert!(dot(b, &[1.0, 2.0, 0.0, 1.0]).abs() < 1e-12);
        }
    }

    #[test]
    fn determinant_of_permutation() {
        let m: CMatrix<Rational> = Matrix::from_fn(3, 3, |i, j| {
            if (i + 1) % 3 == j {
                ComplexScalar::one()
            } else {
                ComplexScalar::zero()
            }
        });
        assert_eq!(m.det(), ComplexScalar::one());
    }

    proptest! {
        #[test]
        fn rank_nullity(entries in proptest::collection::vec(-3i64..=3, 20)) {
            let rows: Vec<Vec<Rational>> = entries.chunks(5).map(|c| c.iter().map(|&x| q(x)).collect()).collect();
            let r = rank(rows.clone(), 5);
            let ns = nullspace(rows.clone(), 5);
            prop_assert_eq!(r + ns.len(), 5);
            for v in &ns {
                for row in &rows {
                    prop_assert!(dot(row, v).is_zero());
                }
            }
        }
    }
}
