//! u(n) and su(n) in coordinates: the ordered basis, structure constants, Ad and ad.

pub mod sample;
pub mod sigma;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{CMatrix, Matrix, Subspace};
use crate::scalar::{ComplexScalar, Rational, RingElem, Scalar, ScalarError};

pub use sigma::{build_sigma, SigmaVariant};

#[derive(Debug, Error)]
pub enum LieError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algebra {
    Su,
    U,
}

/// Basis labels with 1-based matrix indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BasisLabel {
    Plus(usize, usize),
    Minus(usize, usize),
    Cartan(usize),
    Center,
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisLabel::Plus(i, j) => write!(f, "X+_{i},{j}"),
            BasisLabel::Minus(i, j) => write!(f, "X-_{i},{j}"),
            BasisLabel::Cartan(l) => write!(f, "H_{l}"),
            BasisLabel::Center => write!(f, "iI"),
        }
    }
}

type Sparse = Vec<(usize, usize, ComplexScalar<Rational>)>;

/// The ordered basis X⁺_ij (i<j), X⁻_ij (i<j), H_1..H_{n−1} [, i·I for u(n)].
#[derive(Debug, Clone)]
pub struct LieBasis {
    n: usize,
    algebra: Algebra,
    labels: Vec<BasisLabel>,
    elements: Vec<Sparse>,
    /// structure[a][b] = coordinates of [e_a, e_b], sparse.
    structure: Vec<Vec<Vec<(usize, Rational)>>>,
}

fn gauss(re: i64, im: i64) -> ComplexScalar<Rational> {
    ComplexScalar::new(Rational::from_integer(re), Rational::from_integer(im))
}

impl LieBasis {
    pub fn new(n: usize, algebra: Algebra) -> Self {
        assert!(n >= 1, "n must be positive");
        let mut labels = Vec::new();
        let mut elements: Vec<Sparse> = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                labels.push(BasisLabel::Plus(i + 1, j + 1));
                elements.push(vec![(i, j, gauss(0, 1)), (j, i, gauss(0, 1))]);
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                labels.push(BasisLabel::Minus(i + 1, j + 1));
                elements.push(vec![(i, j, gauss(1, 0)), (j, i, gauss(-1, 0))]);
            }
        }
        for l in 0..n.saturating_sub(1) {
            labels.push(BasisLabel::Cartan(l + 1));
            elements.push(vec![(l, l, gauss(0, 1)), (n - 1, n - 1, gauss(0, -1))]);
        }
        if algebra == Algebra::U {
            labels.push(BasisLabel::Center);
            elements.push((0..n).map(|i| (i, i, gauss(0, 1))).collect());
        }
        let mut basis = LieBasis {
            n,
            algebra,
            labels,
            elements,
            structure: Vec::new(),
        };
        basis.structure = basis.compute_structure();
        basis
    }

    fn compute_structure(&self) -> Vec<Vec<Vec<(usize, Rational)>>> {
        let dim = self.dim();
        let mats: Vec<CMatrix<Rational>> = (0..dim).map(|a| self.basis_matrix(a)).collect();
        let mut out = vec![vec![Vec::new(); dim]; dim];
        for a in 0..dim {
            for b in a + 1..dim {
                let br = mats[a].commutator(&mats[b]);
                let coords = self.coords(&br);
                let sparse: Vec<(usize, Rational)> = coords
                    .into_iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .collect();
                out[b][a] = sparse.iter().map(|(k, v)| (*k, -v)).collect();
                out[a][b] = sparse;
            }
        }
        out
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn algebra(&self) -> Algebra {
        self.algebra
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[BasisLabel] {
        &self.labels
    }

    pub fn label(&self, idx: usize) -> BasisLabel {
        self.labels[idx]
    }

    fn pair_count(&self) -> usize {
        self.n * (self.n - 1) / 2
    }

    /// 0-based position of the pair (i, j), i < j, both 1-based.
    fn pair(&self, i: usize, j: usize) -> usize {
        assert!(
            1 <= i && i < j && j <= self.n,
            "invalid pair ({i},{j}) for n={}",
            self.n
        );
        let (i0, j0) = (i - 1, j - 1);
        i0 * (2 * self.n - i0 - 1) / 2 + (j0 - i0 - 1)
    }

    pub fn plus_index(&self, i: usize, j: usize) -> usize {
        self.pair(i, j)
    }

    pub fn minus_index(&self, i: usize, j: usize) -> usize {
        self.pair_count() + self.pair(i, j)
    }

    pub fn cartan_index(&self, l: usize) -> usize {
        assert!(1 <= l && l < self.n);
        2 * self.pair_count() + l - 1
    }

    pub fn center_index(&self) -> Option<usize> {
        (self.algebra == Algebra::U).then(|| self.dim() - 1)
    }

    /// Structure constants: sparse coordinates of [e_a, e_b].
    pub fn structure(&self, a: usize, b: usize) -> &[(usize, Rational)] {
        &self.structure[a][b]
    }

    pub fn basis_matrix<S: Scalar>(&self, a: usize) -> CMatrix<S> {
        let mut m = CMatrix::zeros(self.n, self.n);
        for (i, j, v) in &self.elements[a] {
            m.set(*i, *j, cast(v));
        }
        m
    }

    /// Coordinates of an anti-Hermitian matrix in this basis.
    pub fn coords<S: Scalar>(&self, x: &CMatrix<S>) -> Vec<S> {
        let n = self.n;
        let mut out = vec![S::zero(); self.dim()];
        let np = self.pair_count();
        let mut k = 0;
        for i in 0..n {
            for j in i + 1..n {
                let z = x.get(i, j);
                out[k] = z.im.clone();
                out[np + k] = z.re.clone();
                k += 1;
            }
        }
        let thetas: Vec<S> = (0..n).map(|l| x.get(l, l).im.clone()).collect();
        match self.algebra {
            Algebra::Su => {
                for l in 0..n - 1 {
                    out[2 * np + l] = thetas[l].clone();
                }
            }
            Algebra::U => {
                let mut total = S::zero();
                for t in &thetas {
                    total = total.add_ref(t);
                }
                let z = total.mul_ref(&S::from_rational(&Rational::new(1, n as i64)));
                for l in 0..n - 1 {
                    out[2 * np + l] = thetas[l].sub_ref(&z);
                }
                out[2 * np + n - 1] = z;
            }
        }
        out
    }

    pub fn element<S: Scalar>(&self, coords: &[S]) -> CMatrix<S> {
        assert_eq!(coords.len(), self.dim());
        let mut m = CMatrix::zeros(self.n, self.n);
        for (a, v) in coords.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            for (i, j, e) in &self.elements[a] {
                let cur = m.get(*i, *j).add_ref(&cast::<S>(e).scale(v));
                m.set(*i, *j, cur);
            }
        }
        m
    }

    pub fn bracket_coords<S: Scalar>(&self, x: &[S], y: &[S]) -> Vec<S> {
        let mut out = vec![S::zero(); self.dim()];
        for (a, xa) in x.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for (b, yb) in y.iter().enumerate() {
                if yb.is_zero() {
                    continue;
                }
                let f = xa.mul_ref(yb);
                for (k, c) in &self.structure[a][b] {
                    out[*k].add_mul_assign(&f, &S::from_rational(c));
                }
            }
        }
        out
    }

    /// Matrix of ad_x: column b holds the coordinates of [x, e_b].
    pub fn ad_matrix<S: Scalar>(&self, x: &[S]) -> Matrix<S> {
        let dim = self.dim();
        let mut m = Matrix::<S>::zeros(dim, dim);
        for (a, xa) in x.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for b in 0..dim {
                for (k, c) in &self.structure[a][b] {
                    m.get_mut(*k, b).add_mul_assign(xa, &S::from_rational(c));
                }
            }
        }
        m
    }

    /// Matrix of Ad_g (x ↦ g x g*): column b holds the coordinates of g e_b g*.
    pub fn big_ad_matrix<S: Scalar>(&self, g: &CMatrix<S>) -> Matrix<S> {
        let n = self.n;
        let dim = self.dim();
        let gc: Vec<Vec<ComplexScalar<S>>> = (0..n).map(|i| g.column(i)).collect();
        let gconj: Vec<Vec<ComplexScalar<S>>> = gc
            .iter()
            .map(|col| col.iter().map(ComplexScalar::conj).collect())
            .collect();
        let mut m = Matrix::zeros(dim, dim);
        for b in 0..dim {
            let mut image = CMatrix::<S>::zeros(n, n);
            for (i, j, v) in &self.elements[b] {
                let v: ComplexScalar<S> = cast(v);
                for p in 0..n {
                    let left = gc[*i][p].mul_ref(&v);
                    if left.is_zero() {
                        continue;
                    }
                    for q in p..n {
                        let right = &gconj[*j][q];
                        if right.is_zero() {
                            continue;
                        }
                        let cur = image.get(p, q).add_ref(&left.mul_ref(right));
                        image.set(p, q, cur);
                    }
                }
            }
            for (a, v) in self.coords(&image).into_iter().enumerate() {
                m.set(a, b, v);
            }
        }
        m
    }

    /// Subspace spanned by the given basis indices.
    pub fn coordinate_span<S: Scalar>(&self, idx: impl IntoIterator<Item = usize>) -> Subspace<S> {
        let dim = self.dim();
        let vectors = idx
            .into_iter()
            .map(|a| {
                let mut v = vec![S::zero(); dim];
                v[a] = S::one();
                v
            })
            .collect();
        Subspace::span(dim, vectors)
    }

    /// Block-diagonal subalgebra for a partition of {1..n} into index groups.
    /// Includes every diagonal generator of the ambient algebra.
    pub fn partition_subalgebra<S: Scalar>(&self, groups: &[Vec<usize>]) -> Subspace<S> {
        let mut group_of = vec![usize::MAX; self.n + 1];
        for (g, members) in groups.iter().enumerate() {
            for &i in members {
                group_of[i] = g;
            }
        }
        let idx = self
            .labels
            .iter()
            .enumerate()
            .filter_map(|(a, label)| match *label {
                BasisLabel::Plus(i, j) | BasisLabel::Minus(i, j) => {
                    (group_of[i] == group_of[j] && group_of[i] != usize::MAX).then_some(a)
                }
                BasisLabel::Cartan(_) | BasisLabel::Center => Some(a),
            });
        self.coordinate_span(idx)
    }

    /// Diagonal torus of the ambient algebra.
    pub fn torus<S: Scalar>(&self) -> Subspace<S> {
        let idx = self
            .labels
            .iter()
            .enumerate()
            .filter(|(_, l)| matches!(l, BasisLabel::Cartan(_) | BasisLabel::Center))
            .map(|(a, _)| a);
        self.coordinate_span(idx)
    }

    pub fn unit_vector<S: Scalar>(&self, a: usize) -> Vec<S> {
        let mut v = vec![S::zero(); self.dim()];
        v[a] = S::one();
        v
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BlockVariant {
    /// s(u(l) × u(n−l)): trace-zero block-diagonal matrices.
    SuBlock,
    /// u(l) × u(n−l) (inside u(n); equals `SuBlock` inside su(n)).
    UBlock,
    /// Diagonal matrices.
    Torus,
}

/// The block subalgebra with a top-left block of size `l`.
pub fn build_block_subalgebra<S: Scalar>(
    basis: &LieBasis,
    l: usize,
    variant: BlockVariant,
) -> Result<Subspace<S>, LieError> {
    let n = basis.n();
    if variant != BlockVariant::Torus && !(1..n).contains(&l) {
        return Err(LieError::OutOfRange(format!("block size l={l} for n={n}")));
    }
    if variant == BlockVariant::Torus {
        return Ok(basis.torus());
    }
    let groups = vec![(1..=l).collect::<Vec<_>>(), (l + 1..=n).collect()];
    let sub = basis.partition_subalgebra::<S>(&groups);
    match (variant, basis.center_index()) {
        // Every generator except i·I is traceless, so dropping it leaves the trace-zero part.
        (BlockVariant::SuBlock, Some(center)) => {
            let kept = sub
                .basis()
                .iter()
                .filter(|v| v[center].is_zero())
                .cloned()
                .collect();
            Ok(Subspace::span(basis.dim(), kept))
        }
        _ => Ok(sub),
    }
}

pub fn cast<S: Scalar>(z: &ComplexScalar<Rational>) -> ComplexScalar<S> {
    ComplexScalar::new(S::from_rational(&z.re), S::from_rational(&z.im))
}

pub fn cast_matrix<S: Scalar>(m: &CMatrix<Rational>) -> CMatrix<S> {
    m.map(cast)
}

pub fn to_float<S: Scalar>(m: &CMatrix<S>) -> CMatrix<f64> {
    m.map(|z| ComplexScalar::new(z.re.to_f64(), z.im.to_f64()))
}

pub fn to_float_vec<S: Scalar>(v: &[S]) -> Vec<f64> {
    v.iter().map(Scalar::to_f64).collect()
}

/// e_ab, 1-based.
pub fn matrix_unit<S: Scalar>(n: usize, a: usize, b: usize) -> CMatrix<S> {
    let mut m = CMatrix::zeros(n, n);
    m.set(a - 1, b - 1, ComplexScalar::one());
    m
}

/// X⁺_ab = i(e_ab + e_ba) for any a ≠ b.
pub fn x_plus<S: Scalar>(n: usize, a: usize, b: usize) -> CMatrix<S> {
    let i = ComplexScalar::<S>::i();
    matrix_unit::<S>(n, a, b)
        .add(&matrix_unit(n, b, a))
        .scale(&i)
}

/// X⁻_ab = e_ab − e_ba for any a ≠ b.
pub fn x_minus<S: Scalar>(n: usize, a: usize, b: usize) -> CMatrix<S> {
    matrix_unit::<S>(n, a, b).sub(&matrix_unit(n, b, a))
}

/// K_i = i(e_ii − e_{n+1−i,n+1−i}).
pub fn k_element<S: Scalar>(n: usize, i: usize) -> CMatrix<S> {
    let j = n + 1 - i;
    let iu = ComplexScalar::<S>::i();
    matrix_unit::<S>(n, i, i)
        .sub(&matrix_unit(n, j, j))
        .scale(&iu)
}

/// H_l = i(e_ll − e_nn).
pub fn h_element<S: Scalar>(n: usize, l: usize) -> CMatrix<S> {
    let iu = ComplexScalar::<S>::i();
    matrix_unit::<S>(n, l, l)
        .sub(&matrix_unit(n, n, n))
        .scale(&iu)
}

pub fn bracket<S: Scalar>(x: &CMatrix<S>, y: &CMatrix<S>) -> Result<CMatrix<S>, LieError> {
    if x.rows() != y.rows() || !x.is_square() || !y.is_square() {
        return Err(LieError::Dimension(format!(
            "{}x{} vs {}x{}",
            x.rows(),
            x.cols(),
            y.rows(),
            y.cols()
        )));
    }
    Ok(x.commutator(y))
}

/// Ad_g(x) = g x g⁻¹ for unitary g.
pub fn adjoint<S: Scalar>(g: &CMatrix<S>, x: &CMatrix<S>) -> Result<CMatrix<S>, LieError> {
    if g.rows() != x.rows() || !g.is_square() || !x.is_square() {
        return Err(LieError::Dimension(format!(
            "group {}x{} vs algebra {}x{}",
            g.rows(),
            g.cols(),
            x.rows(),
            x.cols()
        )));
    }
    Ok(g.mul(x).mul(&g.adjoint()))
}

pub fn anti_hermitian_residual<S: Scalar>(x: &CMatrix<S>) -> f64 {
    x.add(&x.adjoint()).max_abs()
}
