//! ∧²g and ∧³g in basis coordinates, the standard r-matrix, cobracket and Schouten bracket.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;

use crate::lie::{
    build_block_subalgebra, build_sigma, Algebra, BlockVariant, LieBasis, LieError, SigmaVariant,
};
use crate::linalg::{CMatrix, Matrix, Subspace};
use crate::report::{CheckReport, Mode};
use crate::scalar::{Rational, RingElem, Scalar};

/// Σ_{i<j} w_ij e_i∧e_j stored as the full antisymmetric matrix W (W_ij = w_ij = −W_ji).
#[derive(Clone, Debug, PartialEq)]
pub struct Wedge2<S: Scalar> {
    coeffs: Matrix<S>,
}

impl<S: Scalar> Wedge2<S> {
    pub fn zero(dim: usize) -> Self {
        Wedge2 {
            coeffs: Matrix::zeros(dim, dim),
        }
    }

    pub fn from_matrix(coeffs: Matrix<S>) -> Self {
        debug_assert!(coeffs.add(&coeffs.transpose()).is_zero() || !S::EXACT);
        Wedge2 { coeffs }
    }

    pub fn dim(&self) -> usize {
        self.coeffs.rows()
    }

    pub fn coeffs(&self) -> &Matrix<S> {
        &self.coeffs
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        self.coeffs.get(i, j)
    }

    /// Adds v·e_i∧e_j.
    pub fn add_term(&mut self, i: usize, j: usize, v: &S) {
        if i == j || v.is_zero() {
            return;
        }
        let a = self.coeffs.get(i, j).add_ref(v);
        let b = self.coeffs.get(j, i).sub_ref(v);
        self.coeffs.set(i, j, a);
        self.coeffs.set(j, i, b);
    }

    /// x∧y = x yᵀ − y xᵀ for coordinate vectors.
    pub fn wedge_of(x: &[S], y: &[S]) -> Self {
        assert_eq!(x.len(), y.len(), "wedge of vectors from different algebras");
        let n = x.len();
        let coeffs = Matrix::from_fn(n, n, |i, j| {
            x[i].mul_ref(&y[j]).sub_ref(&y[i].mul_ref(&x[j]))
        });
        Wedge2 { coeffs }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        Wedge2 {
            coeffs: self.coeffs.add(&rhs.coeffs),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        Wedge2 {
            coeffs: self.coeffs.sub(&rhs.coeffs),
        }
    }

    pub fn scale(&self, s: &S) -> Self {
        Wedge2 {
            coeffs: self.coeffs.scale(s),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_zero()
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.max_abs()
    }

    /// (A⊗A)(w) for a linear map A on g: the congruence A W Aᵀ.
    pub fn congruence(&self, a: &Matrix<S>) -> Self {
        Wedge2 {
            coeffs: a.mul(&self.coeffs).mul(&a.transpose()),
        }
    }

    /// (M⊗1 + 1⊗M)(w) for a derivation M: M W + W Mᵀ.
    pub fn derivation(&self, m: &Matrix<S>) -> Self {
        let mw = m.mul(&self.coeffs);
        Wedge2 {
            // W Mᵀ = −(M W)ᵀ since W is antisymmetric.
            coeffs: mw.sub(&mw.transpose()),
        }
    }

    /// w(β, −): x_j = Σ_i β_i W_ij.
    pub fn contract_first(&self, beta: &[S]) -> Vec<S> {
        let n = self.dim();
        let mut out = vec![S::zero(); n];
        for (i, b) in beta.iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                o.add_mul_assign(b, self.coeffs.get(i, j));
            }
        }
        out
    }

    /// w(−, β): x_i = Σ_j W_ij β_j.
    pub fn contract_second(&self, beta: &[S]) -> Vec<S> {
        self.coeffs.mul_vec(beta)
    }

    /// Nonzero coefficients (i, j, w_ij) with i < j.
    pub fn terms(&self) -> Vec<(usize, usize, S)> {
        let n = self.dim();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let v = self.coeffs.get(i, j);
                if !v.is_zero() {
                    out.push((i, j, v.clone()));
                }
            }
        }
        out
    }

    pub fn to_float(&self) -> Wedge2<f64> {
        Wedge2 {
            coeffs: self.coeffs.map(Scalar::to_f64),
        }
    }

    pub fn to_json(&self, basis: &LieBasis) -> SparseTensorJson {
        SparseTensorJson {
            ring: S::RING.to_string(),
            legend: basis.labels().iter().map(ToString::to_string).collect(),
            entries: self
                .terms()
                .into_iter()
                .map(|(i, j, v)| (vec![i, j], v.to_json_string()))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SparseTensorJson {
    pub ring: String,
    pub legend: Vec<String>,
    pub entries: Vec<(Vec<usize>, String)>,
}

/// Sparse element of ∧³g keyed by strictly increasing index triples.
#[derive(Clone, Debug, PartialEq)]
pub struct Wedge3<S: Scalar> {
    dim: usize,
    terms: BTreeMap<(usize, usize, usize), S>,
}

impl<S: Scalar> Wedge3<S> {
    pub fn zero(dim: usize) -> Self {
        Wedge3 {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Adds v·e_i∧e_j∧e_k for arbitrary indices.
    pub fn add_term(&mut self, i: usize, j: usize, k: usize, v: &S) {
        if i == j || j == k || i == k || v.is_zero() {
            return;
        }
        let mut idx = [i, j, k];
        let mut odd = false;
        for a in 0..3 {
            for b in 0..2 - a {
                if idx[b] > idx[b + 1] {
                    idx.swap(b, b + 1);
                    odd = !odd;
                }
            }
        }
        let key = (idx[0], idx[1], idx[2]);
        let add = if odd { v.neg_ref() } else { v.clone() };
        let slot = self.terms.entry(key).or_insert_with(S::zero);
        *slot = slot.add_ref(&add);
        if S::EXACT && slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> S {
        self.terms.get(&(i, j, k)).cloned().unwrap_or_else(S::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(usize, usize, usize), &S)> {
        self.terms.iter()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for ((i, j, k), v) in &rhs.terms {
            out.add_term(*i, *j, *k, v);
        }
        out
    }

    pub fn scale(&self, s: &S) -> Self {
        let mut out = Wedge3::zero(self.dim);
        for ((i, j, k), v) in &self.terms {
            out.add_term(*i, *j, *k, &v.mul_ref(s));
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.scale(&S::from_i64(-1)))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.values().all(RingElem::is_zero)
    }

    pub fn max_abs(&self) -> f64 {
        self.terms
            .values()
            .map(Scalar::magnitude)
            .fold(0.0, f64::max)
    }

    pub fn nonzero_count(&self) -> usize {
        self.terms.values().filter(|v| !v.is_zero()).count()
    }

    /// (M⊗1⊗1 + 1⊗M⊗1 + 1⊗1⊗M) for a derivation with matrix M.
    pub fn derivation(&self, m: &Matrix<S>) -> Self {
        let n = self.dim;
        let cols: Vec<Vec<(usize, S)>> = (0..n)
            .map(|c| {
                (0..n)
                    .filter_map(|p| {
                        let v = m.get(p, c);
                        (!v.is_zero()).then(|| (p, v.clone()))
                    })
                    .collect()
            })
            .collect();
        let mut out = Wedge3::zero(n);
        for ((i, j, k), v) in &self.terms {
            for (p, mv) in &cols[*i] {
                out.add_term(*p, *j, *k, &v.mul_ref(mv));
            }
            for (p, mv) in &cols[*j] {
                out.add_term(*i, *p, *k, &v.mul_ref(mv));
            }
            for (p, mv) in &cols[*k] {
                out.add_term(*i, *j, *p, &v.mul_ref(mv));
            }
        }
        out
    }

    pub fn to_json(&self, basis: &LieBasis) -> SparseTensorJson {
        SparseTensorJson {
            ring: S::RING.to_string(),
            legend: basis.labels().iter().map(ToString::to_string).collect(),
            entries: self
                .terms
                .iter()
                .filter(|(_, v)| !v.is_zero())
                .map(|((i, j, k), v)| (vec![*i, *j, *k], v.to_json_string()))
                .collect(),
        }
    }
}

/// Adds a·(Σ_k C_k e_k)∧e_p∧e_q where C are sparse bracket coordinates.
fn add_bracket_wedge<S: Scalar>(
    out: &mut Wedge3<S>,
    bracket: &[(usize, Rational)],
    p: usize,
    q: usize,
    a: &S,
) {
    for (k, c) in bracket {
        out.add_term(*k, p, q, &a.mul_ref(&S::from_rational(c)));
    }
}

/// r = Σ_{i<j} X⁺_ij ∧ X⁻_ij.
pub fn build_r<S: Scalar>(basis: &LieBasis) -> Wedge2<S> {
    let n = basis.n();
    let mut r = Wedge2::zero(basis.dim());
    for i in 1..=n {
        for j in i + 1..=n {
            r.add_term(basis.plus_index(i, j), basis.minus_index(i, j), &S::one());
        }
    }
    r
}

/// Where a pair (i, j), i<j, falls in the σ(c,m) decomposition of r.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RPart {
    Phi,
    Theta,
    Omega,
}

pub fn classify_pair(n: usize, m: usize, i: usize, j: usize) -> RPart {
    let top = |a: usize| a <= m;
    let bottom = |a: usize| a > n - m;
    let middle = |a: usize| !top(a) && !bottom(a);
    if middle(i) && middle(j) {
        RPart::Phi
    } else if (top(i) && middle(j)) || (middle(i) && bottom(j)) || (top(i) && j == n + 1 - i) {
        RPart::Theta
    } else {
        RPart::Omega
    }
}

/// (Φ, Θ, Ω) with Φ + Θ + Ω = r. Φ ranges over middle pairs i<j.
pub fn decompose_r<S: Scalar>(
    basis: &LieBasis,
    m: usize,
) -> Result<(Wedge2<S>, Wedge2<S>, Wedge2<S>), LieError> {
    let n = basis.n();
    if m < 1 || 2 * m > n {
        return Err(LieError::OutOfRange(format!("m={m} for n={n}")));
    }
    let dim = basis.dim();
    let (mut phi, mut theta, mut omega) = (Wedge2::zero(dim), Wedge2::zero(dim), Wedge2::zero(dim));
    for i in 1..=n {
        for j in i + 1..=n {
            let target = match classify_pair(n, m, i, j) {
                RPart::Phi => &mut phi,
                RPart::Theta => &mut theta,
                RPart::Omega => &mut omega,
            };
            target.add_term(basis.plus_index(i, j), basis.minus_index(i, j), &S::one());
        }
    }
    Ok((phi, theta, omega))
}

/// (Ad_g ⊗ Ad_g)(w).
pub fn ad2<S: Scalar>(basis: &LieBasis, g: &CMatrix<S>, w: &Wedge2<S>) -> Wedge2<S> {
    w.congruence(&basis.big_ad_matrix(g))
}

/// δ(x) = (ad_x⊗1 + 1⊗ad_x)(r).
pub fn cobracket<S: Scalar>(basis: &LieBasis, x: &[S], r: &Wedge2<S>) -> Wedge2<S> {
    r.derivation(&basis.ad_matrix(x))
}

/// Algebraic Schouten bracket on ∧²g, via
/// [[a∧b, c∧d]] = [a,c]∧b∧d − [a,d]∧b∧c − [b,c]∧a∧d + [b,d]∧a∧c.
pub fn schouten2<S: Scalar>(basis: &LieBasis, x: &Wedge2<S>, y: &Wedge2<S>) -> Wedge3<S> {
    let mut out = Wedge3::zero(basis.dim());
    let yt = y.terms();
    for (a, b, xv) in x.terms() {
        for (c, d, yv) in &yt {
            let f = xv.mul_ref(yv);
            add_bracket_wedge(&mut out, basis.structure(a, *c), b, *d, &f);
            add_bracket_wedge(&mut out, basis.structure(a, *d), b, *c, &f.neg_ref());
            add_bracket_wedge(&mut out, basis.structure(b, *c), a, *d, &f.neg_ref());
            add_bracket_wedge(&mut out, basis.structure(b, *d), a, *c, &f);
        }
    }
    out
}

/// Degree-one extension of the cobracket to ∧²g: d(x∧y) = δ(x)∧y − x∧δ(y).
pub fn cobracket_differential<S: Scalar>(
    basis: &LieBasis,
    x: &Wedge2<S>,
    r: &Wedge2<S>,
) -> Wedge3<S> {
    let dim = basis.dim();
    let mut deltas: Vec<Option<Vec<(usize, usize, S)>>> = vec![None; dim];
    let mut delta = |i: usize| -> Vec<(usize, usize, S)> {
        deltas[i]
            .get_or_insert_with(|| cobracket(basis, &basis.unit_vector::<S>(i), r).terms())
            .clone()
    };
    let mut out = Wedge3::zero(dim);
    for (i, j, v) in x.terms() {
        for (a, b, w) in delta(i) {
            out.add_term(a, b, j, &v.mul_ref(&w));
        }
        for (a, b, w) in delta(j) {
            out.add_term(i, a, b, &v.mul_ref(&w).neg_ref());
        }
    }
    out
}

/// Residual of dX = ½[[X, X]], the condition for the affine field π + X^l to be Poisson.
pub fn affine_poisson_defect<S: Scalar>(
    basis: &LieBasis,
    x: &Wedge2<S>,
    r: &Wedge2<S>,
) -> Wedge3<S> {
    let half = S::from_rational(&Rational::new(1, 2));
    cobracket_differential(basis, x, r).sub(&schouten2(basis, x, x).scale(&half))
}

/// h∧g ⊂ ∧²g, tested through the annihilator: w ∈ h∧g iff w(α, β) = 0 for α, β ∈ h⊥.
#[derive(Clone, Debug)]
pub struct WedgeSubspace<S: Scalar> {
    h: Subspace<S>,
    ann: Matrix<S>,
}

pub fn h_wedge_g<S: Scalar>(h: &Subspace<S>) -> WedgeSubspace<S> {
    let ann = h.annihilator();
    let n = h.ambient();
    let ann = if ann.dim() == 0 {
        Matrix::zeros(0, n)
    } else {
        Matrix::from_rows(ann.basis())
    };
    WedgeSubspace { h: h.clone(), ann }
}

impl<S: Scalar> WedgeSubspace<S> {
    pub fn h(&self) -> &Subspace<S> {
        &self.h
    }

    /// dim h∧g = C(N,2) − C(N − dim h, 2).
    pub fn dim(&self) -> usize {
        let n = self.h.ambient();
        let a = self.ann.rows();
        n * (n.saturating_sub(1)) / 2 - a * a.saturating_sub(1) / 2
    }

    fn projected(&self, w: &Wedge2<S>) -> Matrix<S> {
        self.ann.mul(w.coeffs()).mul(&self.ann.transpose())
    }

    /// Exact: 0 iff member (else the largest surviving coefficient).
    /// Float: ‖Q W Qᵀ‖_F relative to max(1, ‖W‖_F) with Q orthonormal.
    pub fn residual(&self, w: &Wedge2<S>) -> f64 {
        let p = self.projected(w);
        if S::EXACT {
            if p.is_zero() {
                0.0
            } else {
                p.max_abs().max(f64::MIN_POSITIVE)
            }
        } else {
            let frob = |m: &Matrix<S>| {
                m.entries()
                    .iter()
                    .map(|x| x.to_f64().powi(2))
                    .sum::<f64>()
                    .sqrt()
            };
            frob(&p) / frob(w.coeffs()).max(1.0)
        }
    }

    pub fn contains(&self, w: &Wedge2<S>) -> bool {
        if S::EXACT {
            self.projected(w).is_zero()
        } else {
            self.residual(w) <= crate::linalg::FLOAT_MEMBERSHIP_TOL
        }
    }

    /// Membership in the smaller space h∧h: w(α, −) = 0 for α ∈ h⊥.
    pub fn contains_in_square(&self, w: &Wedge2<S>) -> bool {
        let p = self.ann.mul(w.coeffs());
        if S::EXACT {
            p.is_zero()
        } else {
            p.max_abs() <= crate::linalg::FLOAT_MEMBERSHIP_TOL * w.max_abs().max(1.0)
        }
    }

    /// Dimension of span{b∧e_j} computed by brute-force rank (cross-check for small N).
    pub fn span_rank(&self) -> usize {
        let n = self.h.ambient();
        let packed = |w: &Wedge2<S>| -> Vec<S> {
            let mut v = Vec::with_capacity(n * (n - 1) / 2);
            for i in 0..n {
                for j in i + 1..n {
                    v.push(w.get(i, j).clone());
                }
            }
            v
        };
        let mut rows = Vec::new();
        for b in self.h.basis() {
            for j in 0..n {
                let mut e = vec![S::zero(); n];
                e[j] = S::one();
                rows.push(packed(&Wedge2::wedge_of(b, &e)));
            }
        }
        crate::linalg::rank(rows, n * (n - 1) / 2)
    }
}

fn exact_or(mode_exact: bool, zero: bool, value: f64) -> f64 {
    if mode_exact {
        if zero {
            0.0
        } else {
            value.max(f64::MIN_POSITIVE)
        }
    } else {
        value
    }
}

/// dX − ½[X,X] for the affine field r + X: Poisson exactly when it vanishes.
pub fn check_affine_poisson_cocycle<S: Scalar>(
    basis: &LieBasis,
    x: &Wedge2<S>,
    r: &Wedge2<S>,
    tol: f64,
) -> CheckReport {
    let started = Instant::now();
    let d = affine_poisson_defect(basis, x, r);
    let mode = if S::EXACT { Mode::Exact } else { Mode::Float };
    let res = exact_or(S::EXACT, d.is_zero(), d.max_abs());
    let mut report = CheckReport::new("affine-cocycle", mode, basis.n());
    report.note(format!("{} nonzero defect coefficients", d.nonzero_count()));
    report.finish(res, tol, 1, started)
}

/// Ad_{σ(c,m)⁻¹} r − λ r, whose membership in (u(n−m)×u(m))∧u(n) singles out λ = 2c−1.
pub fn proposition_defect<S: Scalar>(
    basis: &LieBasis,
    m: usize,
    c: &Rational,
    lambda: &Rational,
) -> Result<Wedge2<S>, LieError> {
    let sigma = build_sigma::<S>(c, m, basis.n(), SigmaVariant::Canonical)?;
    let r = build_r::<S>(basis);
    Ok(ad2(basis, &sigma.adjoint(), &r).sub(&r.scale(&S::from_rational(lambda))))
}

/// The main membership in u(n): residual of Ad_{σ⁻¹}r − (2c−1)r against 𝔥∧g with
/// 𝔥 = u(n−m)×u(m). Also records that other scalars λ fail and that Φ is fixed.
pub fn check_main_proposition<S: Scalar>(
    n: usize,
    m: usize,
    c: &Rational,
    tol: f64,
) -> Result<CheckReport, LieError> {
    let started = Instant::now();
    let basis = LieBasis::new(n, Algebra::U);
    let h = build_block_subalgebra::<S>(&basis, n - m, BlockVariant::UBlock)?;
    let hw = h_wedge_g(&h);
    let two_c_minus_one = &(c + c) - &Rational::one();
    let defect = proposition_defect::<S>(&basis, m, c, &two_c_minus_one)?;
    let res = hw.residual(&defect);
    let mode = if S::EXACT { Mode::Exact } else { Mode::Float };
    let mut report = CheckReport::new("proposition", mode, n).m_or_k(m).c(c);
    let seventh = Rational::new(1, 7);
    let others = [
        Rational::zero(),
        Rational::one(),
        c + c,
        &two_c_minus_one + &seventh,
        &two_c_minus_one - &seventh,
    ];
    let mut accepted = Vec::new();
    for lambda in others.iter().filter(|l| **l != two_c_minus_one) {
        if hw.contains(&proposition_defect::<S>(&basis, m, c, lambda)?) {
            accepted.push(lambda.to_string());
        }
    }
    report.note(format!("other scalars accepted: {accepted:?}"));
    let sigma = build_sigma::<S>(c, m, n, SigmaVariant::Canonical)?;
    let (phi, _, _) = decompose_r::<S>(&basis, m)?;
    report.note(format!(
        "Φ fixed by Ad_σ⁻¹: {}",
        ad2(&basis, &sigma.adjoint(), &phi) == phi
    ));
    Ok(report.finish(res, tol, 1, started))
}

/// (Σ ad_x on three slots)[[r,r]] = 0 for every basis element x.
pub fn check_cybe<S: Scalar>(basis: &LieBasis, tol: f64) -> CheckReport {
    let started = Instant::now();
    let r = build_r::<S>(basis);
    let s = schouten2(basis, &r, &r);
    let res = crate::report::max_residual((0..basis.dim()).map(|x| {
        let d = s.derivation(&basis.ad_matrix(&basis.unit_vector::<S>(x)));
        exact_or(S::EXACT, d.is_zero(), d.max_abs())
    }));
    let mode = if S::EXACT { Mode::Exact } else { Mode::Float };
    let mut report = CheckReport::new("cybe", mode, basis.n());
    report.note(format!(
        "[[r,r]] has {} nonzero coefficients",
        s.nonzero_count()
    ));
    report.finish(res, tol, basis.dim(), started)
}
