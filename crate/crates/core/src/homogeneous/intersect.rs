//! Exact intersections 𝔨_l ∩ Ad_{σ(c,k)}𝔨_k and the dimension counts they feed.
//!
//! 𝔨_l is s(u(l)×u(n−l)) with the u(l) block in the top-left corner, and Ad_σ x = σxσ⁻¹.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::{HomogeneousError, Result};
use crate::lie::{
    build_block_subalgebra, build_sigma, Algebra, BlockVariant, LieBasis, SigmaVariant,
};
use crate::linalg::{CMatrix, Subspace};
use crate::report::{CheckReport, Mode};
use crate::scalar::{ComplexScalar, Rational, RingElem, Scalar, Tower, TowerScalar};

fn check_indices(n: usize, k: usize, l: usize) -> Result<()> {
    if k < 1 || 2 * k > n || !(1..n).contains(&l) {
        return Err(HomogeneousError::OutOfRange(format!(
            "(n,k,l)=({n},{k},{l}) needs 1 ≤ k ≤ n/2, 1 ≤ l < n"
        )));
    }
    Ok(())
}

/// Ad_{σ(c,k)} 𝔨_k.
pub fn twisted_block<S: Scalar>(basis: &LieBasis, c: &Rational, k: usize) -> Result<Subspace<S>> {
    let sigma = build_sigma::<S>(c, k, basis.n(), SigmaVariant::Canonical)?;
    let kk = build_block_subalgebra::<S>(basis, k, BlockVariant::SuBlock)?;
    Ok(kk.map(&basis.big_ad_matrix(&sigma)))
}

/// 𝔨_l ∩ Ad_{σ(c,k)} 𝔨_k.
pub fn block_intersection<S: Scalar>(
    basis: &LieBasis,
    c: &Rational,
    k: usize,
    l: usize,
) -> Result<Subspace<S>> {
    check_indices(basis.n(), k, l)?;
    let kl = build_block_subalgebra::<S>(basis, l, BlockVariant::SuBlock)?;
    Ok(kl.intersect(&twisted_block(basis, c, k)?))
}

/// Which of the three regimes (l, k) falls into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    /// l < k: codimension l².
    Below,
    /// l = k or l = n−k: a Stiefel manifold, codimension k².
    Stiefel,
    /// k < l < n−k: codimension k².
    Middle,
    /// l > n−k: codimension (n−l)².
    Above,
}

pub fn regime(n: usize, k: usize, l: usize) -> Regime {
    if l < k {
        Regime::Below
    } else if l > n - k {
        Regime::Above
    } else if l == k || l == n - k {
        Regime::Stiefel
    } else {
        Regime::Middle
    }
}

pub fn expected_codimension(n: usize, k: usize, l: usize) -> usize {
    match regime(n, k, l) {
        Regime::Below => l * l,
        Regime::Above => (n - l) * (n - l),
        Regime::Stiefel | Regime::Middle => k * k,
    }
}

/// Real dimension of the Stiefel manifold of unitary k-frames in ℂ^m.
pub fn stiefel_dim(k: usize, m: usize) -> usize {
    k * (2 * m - k)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimensionOutcome {
    pub n: usize,
    pub k: usize,
    pub l: usize,
    pub regime: Regime,
    pub dim_block: usize,
    pub dim_intersection: usize,
    /// dim 𝔨_l − dim(𝔨_l ∩ Ad_σ𝔨_k): the real dimension of the orbit of K_l.
    pub image_dim: usize,
    /// Real dimension 2k(n−k) of the Grassmannian.
    pub grass_dim: usize,
    pub codimension: isize,
    pub expected_codimension: usize,
    /// Present in the Stiefel regime.
    pub stiefel_dim: Option<usize>,
}

impl DimensionOutcome {
    pub fn holds(&self) -> bool {
        let codim_ok = self.codimension == self.expected_codimension as isize;
        let stiefel_ok = self.stiefel_dim.is_none_or(|d| d == self.image_dim);
        // For lines every orbit has dimension 2n−3.
        let line_ok = self.k != 1 || self.image_dim + 3 == 2 * self.n;
        codim_ok && stiefel_ok && line_ok
    }
}

pub fn dimension_outcome(n: usize, k: usize, l: usize, c: &Rational) -> Result<DimensionOutcome> {
    check_indices(n, k, l)?;
    let basis = LieBasis::new(n, Algebra::Su);
    let inter = block_intersection::<TowerScalar>(&basis, c, k, l)?;
    let dim_block = l * l + (n - l) * (n - l) - 1;
    let image_dim = dim_block - inter.dim();
    let grass_dim = 2 * k * (n - k);
    let reg = regime(n, k, l);
    Ok(DimensionOutcome {
        n,
        k,
        l,
        regime: reg,
        dim_block,
        dim_intersection: inter.dim(),
        image_dim,
        grass_dim,
        codimension: grass_dim as isize - image_dim as isize,
        expected_codimension: expected_codimension(n, k, l),
        stiefel_dim: (reg == Regime::Stiefel).then(|| stiefel_dim(k, n - k)),
    })
}

pub fn check_dimension_claims(n: usize, k: usize, l: usize, c: &Rational) -> Result<CheckReport> {
    let started = Instant::now();
    let out = dimension_outcome(n, k, l, c)?;
    let mut report = CheckReport::new("dimensions", Mode::Exact, n)
        .m_or_k(k)
        .l(l)
        .c(c);
    report.note(format!(
        "{:?}: image dim {} = {} − {}, codimension {} (expected {}){}",
        out.regime,
        out.image_dim,
        out.dim_block,
        out.dim_intersection,
        out.codimension,
        out.expected_codimension,
        out.stiefel_dim
            .map(|d| format!(", Stiefel dim {d}"))
            .unwrap_or_default()
    ));
    Ok(report.finish_bool(out.holds(), 1, started))
}

/// Both sides of the symmetry statement, the second mapped into the tower of c.
fn symmetry_sides(
    basis: &LieBasis,
    k: usize,
    l: usize,
    c: &Rational,
) -> Result<(Subspace<TowerScalar>, Subspace<TowerScalar>)> {
    let n = basis.n();
    let lhs = block_intersection::<TowerScalar>(basis, c, k, l)?;
    let rhs = block_intersection::<TowerScalar>(basis, &c.one_minus(), k, n - l)?;
    let tower = Tower::new(c.clone())?;
    let moved = rhs
        .basis()
        .iter()
        .map(|v| {
            v.iter()
                .map(|x| x.remap_complement(&tower))
                .collect::<std::result::Result<Vec<_>, _>>()
        })
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Ok((lhs, Subspace::span(basis.dim(), moved)))
}

/// The anti-diagonal permutation 𝕁_n.
pub fn antidiagonal<S: Scalar>(n: usize) -> CMatrix<S> {
    CMatrix::from_fn(n, n, |i, j| {
        if i + j == n - 1 {
            ComplexScalar::one()
        } else {
            ComplexScalar::zero()
        }
    })
}

/// Literal equality 𝔨_l ∩ Ad_{σ(c,k)}𝔨_k = 𝔨_{n−l} ∩ Ad_{σ(1−c,k)}𝔨_k.
pub fn check_symmetry_lemma(n: usize, k: usize, l: usize, c: &Rational) -> Result<CheckReport> {
    let started = Instant::now();
    let basis = LieBasis::new(n, Algebra::Su);
    let (lhs, rhs) = symmetry_sides(&basis, k, l, c)?;
    let equal = lhs.same_echelon(&rhs);
    let mut report = CheckReport::new("symmetry", Mode::Exact, n)
        .m_or_k(k)
        .l(l)
        .c(c);
    report.note(format!("dims {} and {}", lhs.dim(), rhs.dim()));
    if !equal {
        let conj = lhs
            .map(&basis.big_ad_matrix(&antidiagonal::<TowerScalar>(n)))
            .same_echelon(&rhs);
        report.note(format!("equal after Ad_J on the left side: {conj}"));
    }
    Ok(report.finish_bool(equal, 1, started))
}

/// Ad_𝕁(𝔨_l ∩ Ad_{σ(c,k)}𝔨_k) = 𝔨_{n−l} ∩ Ad_{σ(1−c,k)}𝔨_k, the form the conjugation by 𝕁 produces.
pub fn check_symmetry_conjugate(n: usize, k: usize, l: usize, c: &Rational) -> Result<CheckReport> {
    let started = Instant::now();
    let basis = LieBasis::new(n, Algebra::Su);
    let (lhs, rhs) = symmetry_sides(&basis, k, l, c)?;
    let flipped = lhs.map(&basis.big_ad_matrix(&antidiagonal::<TowerScalar>(n)));
    let mut report = CheckReport::new("symmetry-conjugate", Mode::Exact, n)
        .m_or_k(k)
        .l(l)
        .c(c);
    report.note(format!("dims {} and {}", lhs.dim(), rhs.dim()));
    Ok(report.finish_bool(flipped.same_echelon(&rhs), 1, started))
}

/// The block pattern diag(A, B₁₁, B₂₂, 𝕁A𝕁) with A ∈ u(k), B₁₁ ∈ u(l−k), B₂₂ ∈ u(n−l−k),
/// cut down to trace zero, in u(n) coordinates.
pub fn intersection_pattern<S: Scalar>(
    basis: &LieBasis,
    k: usize,
    l: usize,
) -> Result<Subspace<S>> {
    let n = basis.n();
    if basis.algebra() != Algebra::U || !(k < l && l < n - k) {
        return Err(HomogeneousError::OutOfRange(format!(
            "pattern needs u(n) and k<l<n−k, got ({n},{k},{l})"
        )));
    }
    let mut gens = Vec::new();
    // Hermitian-basis generators of u(size) placed at `offset`; `mirror` adds the 𝕁-flipped copy.
    let block = |size: usize, offset: usize, mirror: bool| -> Vec<CMatrix<S>> {
        let mut out = Vec::new();
        let units = |p: usize, q: usize| -> Vec<CMatrix<S>> {
            let mut pair = vec![(p, q)];
            if mirror {
                pair.push((n - 1 - p, n - 1 - q));
            }
            let place = |f: &dyn Fn(usize, usize, &mut CMatrix<S>)| {
                let mut m = CMatrix::<S>::zeros(n, n);
                for &(a, b) in &pair {
                    f(a, b, &mut m);
                }
                m
            };
            if p == q {
                vec![place(&|a, _, m| {
                    m.set(a, a, crate::scalar::ComplexScalar::i())
                })]
            } else {
                vec![
                    place(&|a, b, m| {
                        m.set(a, b, crate::scalar::ComplexScalar::i());
                        m.set(b, a, crate::scalar::ComplexScalar::i());
                    }),
                    place(&|a, b, m| {
                        m.set(a, b, crate::scalar::ComplexScalar::one());
                        m.set(b, a, crate::scalar::ComplexScalar::one().neg_ref());
                    }),
                ]
            }
        };
        for p in offset..offset + size {
            for q in p..offset + size {
                out.extend(units(p, q));
            }
        }
        out
    };
    gens.extend(block(k, 0, true));
    gens.extend(block(l - k, k, false));
    gens.extend(block(n - l - k, l, false));
    let vectors = gens.iter().map(|m| basis.coords(m)).collect();
    let pattern = Subspace::span(basis.dim(), vectors);
    let center = basis.center_index().expect("u(n) has a center");
    let traceless = basis.coordinate_span((0..basis.dim()).filter(|&a| a != center));
    Ok(pattern.intersect(&traceless))
}

/// For k < l < n−k the intersection is exactly the four-block pattern.
pub fn check_intersection_blocks(
    n: usize,
    k: usize,
    l: usize,
    c: &Rational,
) -> Result<CheckReport> {
    let started = Instant::now();
    let basis = LieBasis::new(n, Algebra::U);
    let inter = block_intersection::<TowerScalar>(&basis, c, k, l)?;
    let pattern = intersection_pattern::<TowerScalar>(&basis, k, l)?;
    let mut report = CheckReport::new("intersection-blocks", Mode::Exact, n)
        .m_or_k(k)
        .l(l)
        .c(c);
    report.note(format!("dims {} and {}", inter.dim(), pattern.dim()));
    Ok(report.finish_bool(inter.same_echelon(&pattern), 1, started))
}

/// dim(𝔱 ∩ Ad_{σ(c,k)}𝔨_k) in su(n).
pub fn torus_intersection_dim(n: usize, k: usize, c: &Rational) -> Result<usize> {
    check_indices(n, k, 1)?;
    let basis = LieBasis::new(n, Algebra::Su);
    let t = basis.torus::<TowerScalar>();
    Ok(t.intersect(&twisted_block(&basis, c, k)?).dim())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> Rational {
        Rational::new(a, b)
    }

    #[test]
    fn block_intersection_without_twist() {
        // c = 1 makes σ the identity: 𝔨_1 ∩ 𝔨_2 in su(4) is s(u(1)×u(1)×u(2)).
        let b = LieBasis::new(4, Algebra::Su);
        let i = block_intersection::<TowerScalar>(&b, &Rational::one(), 2, 1).unwrap();
        assert_eq!(i.dim(), 1 + 1 + 4 - 1);
    }

    #[test]
    fn spec_dimension_examples() {
        let c = q(1, 3);
        let a = dimension_outcome(4, 1, 2, &c).unwrap();
        assert_eq!(a.image_dim, 5);
        assert!(a.holds());
        let b = dimension_outcome(6, 2, 3, &c).unwrap();
        assert_eq!(b.codimension, 4);
        let d = dimension_outcome(6, 2, 1, &c).unwrap();
        assert_eq!(d.codimension, 1);
    }

    #[test]
    fn symmetry_small() {
        assert!(check_symmetry_lemma(4, 1, 2, &q(1, 3)).unwrap().pass);
        assert!(check_symmetry_lemma(4, 2, 2, &q(1, 2)).unwrap().pass);
    }

    #[test]
    fn symmetry_literal_fails_off_the_diagonal() {
        let r = check_symmetry_lemma(5, 1, 2, &q(1, 3)).unwrap();
        assert!(!r.pass);
        assert!(r.notes.iter().any(|s| s.ends_with("true")), "{r:?}");
        for (n, k, l) in [(5, 1, 2), (4, 2, 1), (5, 2, 4)] {
            assert!(check_symmetry_conjugate(n, k, l, &q(2, 5)).unwrap().pass);
        }
    }

    #[test]
    fn pattern_matches() {
        assert!(check_intersection_blocks(5, 1, 2, &q(1, 3)).unwrap().pass);
        assert!(check_intersection_blocks(5, 1, 3, &q(2, 5)).unwrap().pass);
    }

    #[test]
    fn regimes() {
        assert_eq!(regime(6, 2, 1), Regime::Below);
        assert_eq!(regime(6, 2, 2), Regime::Stiefel);
        assert_eq!(regime(6, 2, 3), Regime::Middle);
        assert_eq!(regime(6, 2, 4), Regime::Stiefel);
        assert_eq!(regime(6, 2, 5), Regime::Above);
        assert_eq!(stiefel_dim(2, 4), 12);
    }
}
