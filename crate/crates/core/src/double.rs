//! The double g ⊕ g*, its bracket, the G-action on it and Lagrangian subalgebras of quotients.

use std::time::Instant;

use serde::Serialize;

use crate::lie::{LieBasis, LieError};
use crate::linalg::{dot, CMatrix, Matrix, Subspace};
use crate::poisson::{c4_residual, BivectorField};
use crate::report::{max_residual, CheckReport, Mode};
use crate::scalar::{Rational, RingElem, Scalar};
use crate::wedge::{ad2, cobracket, Wedge2};

/// (x, β) ∈ g × g*, both in basis coordinates (β in the dual basis).
#[derive(Clone, Debug, PartialEq)]
pub struct DoubleElement<S: Scalar> {
    pub x: Vec<S>,
    pub beta: Vec<S>,
}

impl<S: Scalar> DoubleElement<S> {
    pub fn new(x: Vec<S>, beta: Vec<S>) -> Self {
        assert_eq!(x.len(), beta.len(), "double halves differ in size");
        DoubleElement { x, beta }
    }

    pub fn from_g(x: Vec<S>) -> Self {
        let n = x.len();
        DoubleElement {
            x,
            beta: vec![S::zero(); n],
        }
    }

    pub fn from_dual(beta: Vec<S>) -> Self {
        let n = beta.len();
        DoubleElement {
            x: vec![S::zero(); n],
            beta,
        }
    }

    /// Concatenated 2N coordinates.
    pub fn flat(&self) -> Vec<S> {
        let mut v = self.x.clone();
        v.extend(self.beta.iter().cloned());
        v
    }

    pub fn from_flat(v: &[S]) -> Self {
        let n = v.len() / 2;
        DoubleElement {
            x: v[..n].to_vec(),
            beta: v[n..].to_vec(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.x.iter().chain(&self.beta).all(RingElem::is_zero)
    }
}

fn vadd<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter().zip(b).map(|(x, y)| x.add_ref(y)).collect()
}

fn vsub<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter().zip(b).map(|(x, y)| x.sub_ref(y)).collect()
}

/// g ⊕ g* for the coboundary bialgebra of an r-matrix.
pub struct Double<'a, S: Scalar> {
    basis: &'a LieBasis,
    r: Wedge2<S>,
    /// δ(e_k) for every basis vector.
    deltas: Vec<Wedge2<S>>,
    /// ad_{e_k}.
    ads: Vec<Matrix<S>>,
}

impl<'a, S: Scalar> Double<'a, S> {
    pub fn new(basis: &'a LieBasis, r: Wedge2<S>) -> Self {
        let dim = basis.dim();
        let deltas = (0..dim)
            .map(|k| cobracket(basis, &basis.unit_vector(k), &r))
            .collect();
        let ads = (0..dim)
            .map(|k| basis.ad_matrix(&basis.unit_vector::<S>(k)))
            .collect();
        Double {
            basis,
            r,
            deltas,
            ads,
        }
    }

    pub fn basis(&self) -> &LieBasis {
        self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn r(&self) -> &Wedge2<S> {
        &self.r
    }

    /// [β,γ]*_k = ⟨β⊗γ, δ(e_k)⟩ = Σ_ij β_i γ_j δ(e_k)_ij.
    pub fn dual_bracket(&self, beta: &[S], gamma: &[S]) -> Vec<S> {
        self.deltas
            .iter()
            .map(|d| dot(beta, &d.contract_second(gamma)))
            .collect()
    }

    fn ad_x(&self, x: &[S]) -> Matrix<S> {
        let n = self.dim();
        let mut m = Matrix::zeros(n, n);
        for (k, xk) in x.iter().enumerate() {
            if !xk.is_zero() {
                m = m.add(&self.ads[k].scale(xk));
            }
        }
        m
    }

    /// ad*_x γ = −ad_xᵀ γ, i.e. (ad*_x γ)(y) = −γ([x, y]).
    pub fn coad_g(&self, x: &[S], gamma: &[S]) -> Vec<S> {
        self.ad_x(x)
            .transpose()
            .mul_vec(gamma)
            .iter()
            .map(RingElem::neg_ref)
            .collect()
    }

    /// ad*_β y ∈ g with (ad*_β y)(γ) = −⟨[β, γ]*, y⟩.
    pub fn coad_dual(&self, beta: &[S], y: &[S]) -> Vec<S> {
        let n = self.dim();
        let mut out = vec![S::zero(); n];
        for (j, yj) in y.iter().enumerate() {
            if yj.is_zero() {
                continue;
            }
            // Σ_i β_i δ(e_j)_{ik} for all k.
            let row = self.deltas[j].contract_first(beta);
            for (o, v) in out.iter_mut().zip(&row) {
                *o = o.sub_ref(&yj.mul_ref(v));
            }
        }
        out
    }

    /// ([x,y] + ad*_β y − ad*_γ x, [β,γ]* + ad*_x γ − ad*_y β).
    pub fn bracket(&self, u: &DoubleElement<S>, v: &DoubleElement<S>) -> DoubleElement<S> {
        let xy = self.basis.bracket_coords(&u.x, &v.x);
        let gpart = vsub(
            &vadd(&xy, &self.coad_dual(&u.beta, &v.x)),
            &self.coad_dual(&v.beta, &u.x),
        );
        let bg = self.dual_bracket(&u.beta, &v.beta);
        let dpart = vsub(
            &vadd(&bg, &self.coad_g(&u.x, &v.beta)),
            &self.coad_g(&v.x, &u.beta),
        );
        DoubleElement::new(gpart, dpart)
    }

    /// ⟨(x,β),(y,γ)⟩ = β(y) + γ(x).
    pub fn pairing(&self, u: &DoubleElement<S>, v: &DoubleElement<S>) -> S {
        dot(&u.beta, &v.x).add_ref(&dot(&v.beta, &u.x))
    }

    /// g·(X, α) = (Ad_g X + T(g)(Ad*_g α, −), Ad*_g α) with T(g) = Ad_g r − r and Ad*_g = Ad_{g⁻¹}ᵀ.
    pub fn action(&self, g: &CMatrix<S>, u: &DoubleElement<S>) -> DoubleElement<S> {
        let ad = self.basis.big_ad_matrix(g);
        let ad_inv = self.basis.big_ad_matrix(&g.adjoint());
        let alpha = ad_inv.transpose().mul_vec(&u.beta);
        let t = ad2(self.basis, g, &self.r).sub(&self.r);
        let x = vadd(&ad.mul_vec(&u.x), &t.contract_first(&alpha));
        DoubleElement::new(x, alpha)
    }

    /// h ⊕ h⊥.
    pub fn split_lagrangian(&self, h: &Subspace<S>) -> LagrangianSubalgebra<S> {
        let n = self.dim();
        let mut rows: Vec<Vec<S>> = h
            .basis()
            .iter()
            .map(|x| DoubleElement::from_g(x.clone()).flat())
            .collect();
        rows.extend(
            h.annihilator()
                .basis()
                .iter()
                .map(|b| DoubleElement::from_dual(b.clone()).flat()),
        );
        LagrangianSubalgebra {
            space: Subspace::span(2 * n, rows),
        }
    }

    /// h ⊕ {(W⌟β, β) : β ∈ h⊥}, W = π_{σ⁻¹}(e) = Ad_σ r − r contracted in its first slot.
    /// Refuses unless Ad_σ h is coisotropic.
    pub fn lagrangian_of_quotient(
        &self,
        h: &Subspace<S>,
        sigma: &CMatrix<S>,
    ) -> Result<LagrangianSubalgebra<S>, LieError> {
        let conj = h.map(&self.basis.big_ad_matrix(sigma));
        let pi = BivectorField::multiplicative(self.r.clone());
        let res = c4_residual(self.basis, &pi, &conj);
        let ok = if S::EXACT {
            res == 0.0
        } else {
            res <= crate::linalg::FLOAT_MEMBERSHIP_TOL
        };
        if !ok {
            return Err(LieError::OutOfRange(format!(
                "Ad_sigma h is not coisotropic (residual {res:.3e})"
            )));
        }
        let w = ad2(self.basis, sigma, &self.r).sub(&self.r);
        let n = self.dim();
        let mut rows: Vec<Vec<S>> = h
            .basis()
            .iter()
            .map(|x| DoubleElement::from_g(x.clone()).flat())
            .collect();
        for beta in h.annihilator().basis() {
            rows.push(DoubleElement::new(w.contract_first(beta), beta.clone()).flat());
        }
        Ok(LagrangianSubalgebra {
            space: Subspace::span(2 * n, rows),
        })
    }

    /// σ⁻¹·(Ad_σh ⊕ (Ad_σh)⊥), the same subalgebra reached through the group action.
    pub fn lagrangian_by_action(
        &self,
        h: &Subspace<S>,
        sigma: &CMatrix<S>,
    ) -> LagrangianSubalgebra<S> {
        let conj = h.map(&self.basis.big_ad_matrix(sigma));
        let split = self.split_lagrangian(&conj);
        self.act_on(&sigma.adjoint(), &split)
    }

    pub fn act_on(&self, g: &CMatrix<S>, l: &LagrangianSubalgebra<S>) -> LagrangianSubalgebra<S> {
        let rows = l
            .space
            .basis()
            .iter()
            .map(|v| self.action(g, &DoubleElement::from_flat(v)).flat())
            .collect();
        LagrangianSubalgebra {
            space: Subspace::span(2 * self.dim(), rows),
        }
    }
}

/// A subspace of the double expected to be a Lagrangian subalgebra.
#[derive(Clone, Debug)]
pub struct LagrangianSubalgebra<S: Scalar> {
    pub space: Subspace<S>,
}

fn mag<S: Scalar>(v: &S) -> f64 {
    if S::EXACT && !v.is_zero() {
        v.magnitude().max(f64::MIN_POSITIVE)
    } else {
        v.magnitude()
    }
}

impl<S: Scalar> LagrangianSubalgebra<S> {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// max |⟨u, v⟩| over basis pairs (literal zero test in exact rings).
    pub fn isotropy_residual(&self, d: &Double<S>) -> f64 {
        let b: Vec<DoubleElement<S>> = self
            .space
            .basis()
            .iter()
            .map(|v| DoubleElement::from_flat(v))
            .collect();
        max_residual(
            (0..b.len())
                .flat_map(|i| (i..b.len()).map(move |j| (i, j)))
                .map(|(i, j)| mag(&d.pairing(&b[i], &b[j]))),
        )
    }

    /// Largest membership residual of brackets of basis pairs.
    pub fn closure_residual(&self, d: &Double<S>) -> f64 {
        let b: Vec<DoubleElement<S>> = self
            .space
            .basis()
            .iter()
            .map(|v| DoubleElement::from_flat(v))
            .collect();
        let pairs: Vec<(usize, usize)> = (0..b.len())
            .flat_map(|i| (i + 1..b.len()).map(move |j| (i, j)))
            .collect();
        max_residual(
            pairs
                .iter()
                .map(|&(i, j)| self.space.residual(&d.bracket(&b[i], &b[j]).flat())),
        )
    }

    pub fn same_as(&self, other: &LagrangianSubalgebra<S>) -> bool {
        self.space.same_echelon(&other.space)
    }

    pub fn to_json(&self) -> LagrangianJson {
        LagrangianJson {
            ring: S::RING.to_string(),
            basis: self
                .space
                .basis()
                .iter()
                .map(|v| v.iter().map(Scalar::to_json_string).collect())
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LagrangianJson {
    pub ring: String,
    pub basis: Vec<Vec<String>>,
}

/// Outcome of the Lagrangian checks for one (n, m, c).
#[derive(Debug, Clone)]
pub struct LagrangianOutcome {
    pub dim: usize,
    pub expected_dim: usize,
    pub isotropy: f64,
    pub closure: f64,
    pub matches_action: bool,
}

impl LagrangianOutcome {
    pub fn holds(&self) -> bool {
        self.dim == self.expected_dim
            && self.isotropy == 0.0
            && self.closure == 0.0
            && self.matches_action
    }
}

/// Dimension, isotropy, closure, and equality with the action construction.
pub fn lagrangian_outcome<S: Scalar>(
    basis: &LieBasis,
    h: &Subspace<S>,
    sigma: &CMatrix<S>,
) -> Result<LagrangianOutcome, LieError> {
    let d = Double::new(basis, crate::wedge::build_r(basis));
    let l = d.lagrangian_of_quotient(h, sigma)?;
    let by_action = d.lagrangian_by_action(h, sigma);
    Ok(LagrangianOutcome {
        dim: l.dim(),
        expected_dim: basis.dim(),
        isotropy: l.isotropy_residual(&d),
        closure: l.closure_residual(&d),
        matches_action: l.same_as(&by_action),
    })
}

/// Which annihilator a generator is scored against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum HperpTarget {
    /// (Ad_σ h)⊥.
    Conjugate,
    /// (Ad_{σ⁻¹} h)⊥.
    InverseConjugate,
}

#[derive(Debug, Clone, Serialize)]
pub struct FamilyScore {
    pub family: String,
    pub generators: usize,
    /// Generators lying in (Ad_σ h)⊥.
    pub in_conjugate: usize,
    /// Generators lying in (Ad_{σ⁻¹} h)⊥.
    pub in_inverse_conjugate: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct HperpScore {
    pub annihilator_dim: usize,
    pub expected_dim: usize,
    pub dual_bracket_closed: bool,
    pub families: Vec<FamilyScore>,
    /// Rank of the full list (F2 in each reading) and whether it spans each target.
    pub readings: Vec<ReadingScore>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReadingScore {
    pub reading: String,
    pub rank: usize,
    pub spans_conjugate: bool,
    pub spans_inverse_conjugate: bool,
}

/// Covector generators of h_σ⊥ as listed in the paper, in dual-basis coordinates.
pub struct HperpGenerators<S: Scalar> {
    pub f1: Vec<Vec<S>>,
    /// Second family with x^{i,n+1−j} ∓ x^{j,n+1−i}.
    pub f2_minus_plus: Vec<Vec<S>>,
    /// Second family with x^{i,n+1−j} ± x^{j,n+1−i}.
    pub f2_plus_minus: Vec<Vec<S>>,
    pub f3: Vec<Vec<S>>,
    /// Third family with √c and √(1−c) exchanged.
    pub f3_swapped: Vec<Vec<S>>,
    pub f4: Vec<Vec<S>>,
}

/// Dual basis covector of X^±_{ab} for any a ≠ b (X⁻_{ba} = −X⁻_{ab}).
fn dual_x<S: Scalar>(basis: &LieBasis, plus: bool, a: usize, b: usize) -> Vec<S> {
    let mut v = vec![S::zero(); basis.dim()];
    let (i, j) = if a < b { (a, b) } else { (b, a) };
    if plus {
        v[basis.plus_index(i, j)] = S::one();
    } else {
        v[basis.minus_index(i, j)] = if a < b { S::one() } else { S::from_i64(-1) };
    }
    v
}

fn lin<S: Scalar>(terms: &[(S, Vec<S>)]) -> Vec<S> {
    let n = terms[0].1.len();
    let mut out = vec![S::zero(); n];
    for (c, v) in terms {
        for (o, x) in out.iter_mut().zip(v) {
            o.add_mul_assign(c, x);
        }
    }
    out
}

pub fn hperp_generators<S: Scalar>(
    basis: &LieBasis,
    m: usize,
    c: &Rational,
) -> Result<HperpGenerators<S>, LieError> {
    let n = basis.n();
    if m < 1 || 2 * m > n {
        return Err(LieError::OutOfRange(format!("m={m} for n={n}")));
    }
    let (sc, s1c) = S::sqrt_pair(c)?;
    let prod = sc.mul_ref(&s1c);
    let two_c_1 = S::from_rational(&(&(c * &Rational::from_integer(2)) - &Rational::one()));
    // (2c−1)/√(c(1−c)); at c ∈ {0,1} the family is only defined when 2c−1 vanishes, which it does not.
    let kappa = two_c_1.mul_ref(
        &prod
            .inv()
            .ok_or_else(|| LieError::OutOfRange(format!("c={c} makes c(1-c)=0")))?,
    );
    let one = S::one();
    let neg = S::from_i64(-1);
    let mut g = HperpGenerators {
        f1: Vec::new(),
        f2_minus_plus: Vec::new(),
        f2_plus_minus: Vec::new(),
        f3: Vec::new(),
        f3_swapped: Vec::new(),
        f4: Vec::new(),
    };
    for plus in [true, false] {
        // Upper sign for '+', lower for '−'.
        let (up, down) = if plus {
            (one.clone(), neg.clone())
        } else {
            (neg.clone(), one.clone())
        };
        for i in 1..=m {
            for j in i + 1..=m {
                g.f1.push(lin(&[
                    (down.clone(), dual_x(basis, plus, i, j)),
                    (one.clone(), dual_x(basis, plus, n + 1 - j, n + 1 - i)),
                    (kappa.neg_ref(), dual_x(basis, plus, j, n + 1 - i)),
                ]));
                g.f2_minus_plus.push(lin(&[
                    (one.clone(), dual_x(basis, plus, i, n + 1 - j)),
                    (down.clone(), dual_x(basis, plus, j, n + 1 - i)),
                ]));
                g.f2_plus_minus.push(lin(&[
                    (one.clone(), dual_x(basis, plus, i, n + 1 - j)),
                    (up.clone(), dual_x(basis, plus, j, n + 1 - i)),
                ]));
            }
            for p in 1..=n - 2 * m {
                g.f3.push(lin(&[
                    (sc.clone(), dual_x(basis, plus, i, m + p)),
                    (up.mul_ref(&s1c), dual_x(basis, plus, m + p, n + 1 - i)),
                ]));
                g.f3_swapped.push(lin(&[
                    (s1c.clone(), dual_x(basis, plus, i, m + p)),
                    (up.mul_ref(&sc), dual_x(basis, plus, m + p, n + 1 - i)),
                ]));
            }
        }
    }
    for i in 1..=m {
        g.f4.push(dual_x(basis, false, i, n + 1 - i));
        let mut v = basis.unit_vector::<S>(basis.cartan_index(i));
        let hb = basis.unit_vector::<S>(basis.cartan_index(n - i));
        for (o, x) in v.iter_mut().zip(&hb) {
            *o = o.add_ref(x);
        }
        // Σ_{j=n−i+1}^{n} x^{n+1−j, j}_+ runs over the anti-diagonal pairs (a, n+1−a), a = 1..i.
        for a in 1..=i {
            let x = dual_x::<S>(basis, true, a, n + 1 - a);
            for (o, xv) in v.iter_mut().zip(&x) {
                o.add_mul_assign(&kappa, xv);
            }
        }
        g.f4.push(v);
    }
    Ok(g)
}

/// Scores the listed generators against the directly computed annihilators.
pub fn score_hperp<S: Scalar>(
    basis: &LieBasis,
    h: &Subspace<S>,
    sigma: &CMatrix<S>,
    m: usize,
    c: &Rational,
) -> Result<HperpScore, LieError> {
    let conj = h.map(&basis.big_ad_matrix(sigma)).annihilator();
    let inv = h.map(&basis.big_ad_matrix(&sigma.adjoint())).annihilator();
    let gens = hperp_generators::<S>(basis, m, c)?;
    let d = Double::new(basis, crate::wedge::build_r(basis));
    let b = conj.basis();
    let closed = (0..b.len())
        .all(|i| (i + 1..b.len()).all(|j| conj.contains(&d.dual_bracket(&b[i], &b[j]))));
    let score = |name: &str, list: &[Vec<S>]| FamilyScore {
        family: name.to_string(),
        generators: list.len(),
        in_conjugate: list.iter().filter(|v| conj.contains(v)).count(),
        in_inverse_conjugate: list.iter().filter(|v| inv.contains(v)).count(),
    };
    let families = vec![
        score("F1", &gens.f1),
        score("F2(-+)", &gens.f2_minus_plus),
        score("F2(+-)", &gens.f2_plus_minus),
        score("F3", &gens.f3),
        score("F3(swapped)", &gens.f3_swapped),
        score("F4", &gens.f4),
    ];
    let reading = |name: &str, f2: &[Vec<S>], f3: &[Vec<S>]| {
        let all: Vec<Vec<S>> = gens
            .f1
            .iter()
            .chain(f2)
            .chain(f3)
            .chain(&gens.f4)
            .cloned()
            .collect();
        let span = Subspace::span(basis.dim(), all);
        ReadingScore {
            reading: name.to_string(),
            rank: span.dim(),
            spans_conjugate: span.same_as(&conj),
            spans_inverse_conjugate: span.same_as(&inv),
        }
    };
    let readings = vec![
        reading("F2(-+), F3", &gens.f2_minus_plus, &gens.f3),
        reading("F2(+-), F3", &gens.f2_plus_minus, &gens.f3),
        reading("F2(-+), F3(swapped)", &gens.f2_minus_plus, &gens.f3_swapped),
    ];
    Ok(HperpScore {
        annihilator_dim: conj.dim(),
        expected_dim: basis.dim() - h.dim(),
        dual_bracket_closed: closed,
        families,
        readings,
    })
}

/// Exact report: passes on the annihilator dimension and dual-bracket closure; the generator list
/// is scored in the notes only.
pub fn check_hperp_generators<S: Scalar>(
    basis: &LieBasis,
    h: &Subspace<S>,
    sigma: &CMatrix<S>,
    m: usize,
    c: &Rational,
) -> Result<(CheckReport, HperpScore), LieError> {
    let started = Instant::now();
    let score = score_hperp(basis, h, sigma, m, c)?;
    let mode = if S::EXACT { Mode::Exact } else { Mode::Float };
    let mut report = CheckReport::new("hperp", mode, basis.n()).m_or_k(m).c(c);
    for f in &score.families {
        report.note(format!(
            "{}: {} generators, {} in (Ad_s h)^perp, {} in (Ad_s^-1 h)^perp",
            f.family, f.generators, f.in_conjugate, f.in_inverse_conjugate
        ));
    }
    for r in &score.readings {
        report.note(format!(
            "list with {}: rank {}, spans (Ad_s h)^perp: {}, spans (Ad_s^-1 h)^perp: {}",
            r.reading, r.rank, r.spans_conjugate, r.spans_inverse_conjugate
        ));
    }
    let ok = score.annihilator_dim == score.expected_dim && score.dual_bracket_closed;
    Ok((report.finish_bool(ok, 1, started), score))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::sample::{haar_unitary, sample_rng};
    use crate::lie::{build_block_subalgebra, build_sigma, Algebra, BlockVariant, SigmaVariant};
    use crate::scalar::TowerScalar;
    use crate::wedge::build_r;

    type Q = Rational;
    type T = TowerScalar;

    #[test]
    fn zero_r_gives_zero_dual_bracket() {
        let b = LieBasis::new(2, Algebra::Su);
        let d = Double::new(&b, Wedge2::<Q>::zero(3));
        let e0 = b.unit_vector::<Q>(0);
        let e1 = b.unit_vector::<Q>(1);
        assert!(d.dual_bracket(&e0, &e1).iter().all(RingElem::is_zero));
    }

    #[test]
    fn su2_dual_bracket_is_nonzero() {
        let b = LieBasis::new(2, Algebra::Su);
        let d = Double::new(&b, build_r::<Q>(&b));
        let xp = b.unit_vector::<Q>(b.plus_index(1, 2));
        let xm = b.unit_vector::<Q>(b.minus_index(1, 2));
        let v = d.dual_bracket(&xp, &xm);
        assert!(v.iter().all(RingElem::is_zero));
        let h = b.unit_vector::<Q>(b.cartan_index(1));
        assert!(!d.dual_bracket(&h, &xp).iter().all(RingElem::is_zero));
    }

    #[test]
    fn dual_jacobi() {
        for n in 2..=3 {
            let b = LieBasis::new(n, Algebra::Su);
            let d = Double::new(&b, build_r::<Q>(&b));
            let e: Vec<Vec<Q>> = (0..b.dim()).map(|i| b.unit_vector(i)).collect();
            for x in &e {
                for y in &e {
                    for z in &e {
                        let a = d.dual_bracket(x, &d.dual_bracket(y, z));
                        let bb = d.dual_bracket(y, &d.dual_bracket(z, x));
                        let c = d.dual_bracket(z, &d.dual_bracket(x, y));
                        assert!(vadd(&vadd(&a, &bb), &c).iter().all(RingElem::is_zero));
                    }
                }
            }
        }
    }

    #[test]
    fn pairing_invariance_on_basis() {
        for n in 2..=3 {
            let b = LieBasis::new(n, Algebra::Su);
            let d = Double::new(&b, build_r::<Q>(&b));
            let dim = b.dim();
            let elems: Vec<DoubleElement<Q>> = (0..2 * dim)
                .map(|k| {
                    let mut v = vec![Q::zero(); 2 * dim];
                    v[k] = Q::one();
                    DoubleElement::from_flat(&v)
                })
                .collect();
            for u in &elems {
                for v in &elems {
                    let uv = d.bracket(u, v);
                    for w in &elems {
                        let lhs = d.pairing(&uv, w).add_ref(&d.pairing(v, &d.bracket(u, w)));
                        assert!(lhs.is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn double_jacobi_su2() {
        let b = LieBasis::new(2, Algebra::Su);
        let d = Double::new(&b, build_r::<Q>(&b));
        let elems: Vec<DoubleElement<Q>> = (0..6)
            .map(|k| {
                let mut v = vec![Q::zero(); 6];
                v[k] = Q::one();
                DoubleElement::from_flat(&v)
            })
            .collect();
        for u in &elems {
            for v in &elems {
                for w in &elems {
                    let a = d.bracket(u, &d.bracket(v, w)).flat();
                    let bb = d.bracket(v, &d.bracket(w, u)).flat();
                    let c = d.bracket(w, &d.bracket(u, v)).flat();
                    assert!(vadd(&vadd(&a, &bb), &c).iter().all(RingElem::is_zero));
                }
            }
        }
    }

    #[test]
    fn action_is_an_action_and_automorphism() {
        let b = LieBasis::new(3, Algebra::Su);
        let d = Double::new(&b, build_r::<f64>(&b));
        let mut rng = sample_rng(11, 0);
        let g = haar_unitary(3, &mut rng, true);
        let h = haar_unitary(3, &mut rng, true);
        let u =
            DoubleElement::from_flat(&(0..16).map(|i| (i as f64 * 0.37).sin()).collect::<Vec<_>>());
        let v =
            DoubleElement::from_flat(&(0..16).map(|i| (i as f64 * 0.91).cos()).collect::<Vec<_>>());
        let lhs = d.action(&g.mul(&h), &u);
        let rhs = d.action(&g, &d.action(&h, &u));
        assert!(vsub(&lhs.flat(), &rhs.flat())
            .iter()
            .all(|x| x.abs() < 1e-10));
        let e = CMatrix::identity(3);
        assert!(vsub(&d.action(&e, &u).flat(), &u.flat())
            .iter()
            .all(|x| x.abs() < 1e-12));
        let a = d.action(&g, &d.bracket(&u, &v));
        let bb = d.bracket(&d.action(&g, &u), &d.action(&g, &v));
        assert!(vsub(&a.flat(), &bb.flat()).iter().all(|x| x.abs() < 1e-9));
        let p = d.pairing(&d.action(&g, &u), &d.action(&g, &v)) - d.pairing(&u, &v);
        assert!(p.abs() < 1e-10);
    }

    #[test]
    fn split_lagrangian_at_identity() {
        let b = LieBasis::new(3, Algebra::Su);
        let h = build_block_subalgebra::<Q>(&b, 2, BlockVariant::SuBlock).unwrap();
        let d = Double::new(&b, build_r::<Q>(&b));
        let l = d.lagrangian_of_quotient(&h, &CMatrix::identity(3)).unwrap();
        assert!(l.same_as(&d.split_lagrangian(&h)));
        assert_eq!(l.closure_residual(&d), 0.0);
    }

    #[test]
    fn lagrangian_exact_n3() {
        let b = LieBasis::new(3, Algebra::Su);
        for c in [Q::new(1, 3), Q::new(1, 2)] {
            let s = build_sigma::<T>(&c, 1, 3, SigmaVariant::Canonical).unwrap();
            let h = build_block_subalgebra::<T>(&b, 2, BlockVariant::SuBlock).unwrap();
            let out = lagrangian_outcome(&b, &h, &s).unwrap();
            assert!(out.holds(), "{out:?}");
        }
    }

    #[test]
    fn refuses_non_coisotropic() {
        let b = LieBasis::new(3, Algebra::Su);
        let h = build_block_subalgebra::<f64>(&b, 2, BlockVariant::SuBlock).unwrap();
        let g = haar_unitary(3, &mut sample_rng(2, 0), true);
        let d = Double::new(&b, build_r::<f64>(&b));
        assert!(d.lagrangian_of_quotient(&h, &g).is_err());
    }

    #[test]
    fn hperp_counts_and_closure() {
        let b = LieBasis::new(4, Algebra::Su);
        let c = Q::new(1, 3);
        let s = build_sigma::<T>(&c, 1, 4, SigmaVariant::Canonical).unwrap();
        let h = build_block_subalgebra::<T>(&b, 3, BlockVariant::SuBlock).unwrap();
        let (rep, score) = check_hperp_generators(&b, &h, &s, 1, &c).unwrap();
        assert!(rep.pass, "{:?}", rep.notes);
        assert_eq!(score.annihilator_dim, 6);
        let total: usize = score
            .families
            .iter()
            .filter(|f| f.family != "F2(+-)" && f.family != "F3(swapped)")
            .map(|f| f.generators)
            .sum();
        assert_eq!(total, 6);
    }
}
