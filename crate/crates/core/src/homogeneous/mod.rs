//! Complex Grassmannians as quotients of SU(n): projections, pushed-forward bivectors and
//! their ranks, leaf equations, Schubert cells, and the intersection subgroups behind the
//! dimension counts.
//!
//! A point of Gr_k(ℂⁿ) is the Hermitian projector onto the span of the last k columns of a
//! representative, P = g Q g* with Q the coordinate projector on the last k slots.

mod intersect;
mod schubert;

pub use intersect::*;
pub use schubert::*;

use std::time::Instant;

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::lie::sample::{block_diagonal_unitary, haar_unitary, sample_rng, torus_element};
use crate::lie::{build_sigma, LieBasis, LieError, SigmaVariant};
use crate::linalg::float::{singular_values, C64};
use crate::linalg::CMatrix;
use crate::par::par_map;
use crate::poisson::BivectorField;
use crate::report::{max_residual, CheckReport, Mode};
use crate::scalar::{ComplexScalar, Rational, RingElem, ScalarError};
use crate::wedge::{build_r, Wedge2};

#[derive(Debug, Error)]
pub enum HomogeneousError {
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("not a rank-{k} projector (residual {residual:.3e})")]
    InvalidPoint { k: usize, residual: f64 },
    #[error("vector is not unit length (norm {0})")]
    NonUnit(f64),
    #[error("invalid Schubert symbol: {0}")]
    InvalidSymbol(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("division by zero: {0}")]
    DivisionByZero(String),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

pub type Result<T> = std::result::Result<T, HomogeneousError>;

/// Residual bound accepted when wrapping a float projector.
pub const POINT_TOL: f64 = 1e-10;

/// Rank-k Hermitian projector on ℂⁿ.
#[derive(Debug, Clone)]
pub struct GrassPoint {
    n: usize,
    k: usize,
    p: CMatrix<f64>,
}

impl GrassPoint {
    pub fn from_projector(p: CMatrix<f64>, k: usize) -> Result<Self> {
        if !p.is_square() || k > p.rows() {
            return Err(HomogeneousError::Shape(format!(
                "{}x{} projector, k={k}",
                p.rows(),
                p.cols()
            )));
        }
        let point = GrassPoint { n: p.rows(), k, p };
        let residual = point.invariant_residual();
        if !(residual <= POINT_TOL) {
            return Err(HomogeneousError::InvalidPoint { k, residual });
        }
        Ok(point)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn projector(&self) -> &CMatrix<f64> {
        &self.p
    }

    /// max(‖P − P*‖, ‖P² − P‖, |tr P − k|).
    pub fn invariant_residual(&self) -> f64 {
        let herm = self.p.sub(&self.p.adjoint()).max_abs();
        let idem = self.p.mul(&self.p).sub(&self.p).max_abs();
        let tr = self.p.trace();
        let trace = ((tr.re - self.k as f64).powi(2) + tr.im.powi(2)).sqrt();
        herm.max(idem).max(trace)
    }

    /// Orthonormal basis of range(P) as the columns of an n×k matrix.
    pub fn range_basis(&self) -> DMatrix<C64> {
        let n = self.n;
        let mut cols: Vec<Vec<C64>> = Vec::new();
        let mut order: Vec<usize> = (0..n).collect();
        // Largest diagonal entries first: those columns carry most of the range.
        order.sort_by(|&a, &b| self.p.get(b, b).re.total_cmp(&self.p.get(a, a).re));
        for j in order {
            if cols.len() == self.k {
                break;
            }
            let mut v: Vec<C64> = (0..n).map(|i| to_c64(self.p.get(i, j))).collect();
            for _ in 0..2 {
                for u in &cols {
                    let f: C64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                    for (vi, ui) in v.iter_mut().zip(u) {
                        *vi -= f * ui;
                    }
                }
            }
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm > 1e-6 {
                v.iter_mut().for_each(|z| *z /= norm);
                cols.push(v);
            }
        }
        DMatrix::from_fn(n, cols.len(), |i, j| cols[j][i])
    }

    /// Content hash of the projector rounded to 1e-9, for survey rows.
    pub fn hash_hex(&self) -> String {
        let mut h = Sha256::new();
        for v in realify(&self.p) {
            let rounded = (v * 1e9).round() as i64;
            h.update(rounded.to_le_bytes());
        }
        h.finalize()
            .iter()
            .take(8)
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

fn to_c64(z: &ComplexScalar<f64>) -> C64 {
    C64::new(z.re, z.im)
}

/// Q_k: the diagonal projector on the last k coordinates.
pub fn base_projector(n: usize, k: usize) -> CMatrix<f64> {
    let mut q = CMatrix::<f64>::zeros(n, n);
    for i in n - k.min(n)..n {
        q.set(i, i, ComplexScalar::one());
    }
    q
}

fn check_k(n: usize, k: usize) -> Result<()> {
    if !(1..n).contains(&k) {
        return Err(HomogeneousError::OutOfRange(format!("k={k} for n={n}")));
    }
    Ok(())
}

/// p(g) = g Q_k g*.
pub fn project(g: &CMatrix<f64>, k: usize) -> Result<GrassPoint> {
    check_k(g.rows(), k)?;
    let q = base_projector(g.rows(), k);
    GrassPoint::from_projector(g.mul(&q).mul(&g.adjoint()), k)
}

/// p_σ(g) = p(gσ).
pub fn project_twisted(g: &CMatrix<f64>, k: usize, sigma: &CMatrix<f64>) -> Result<GrassPoint> {
    project(&g.mul(sigma), k)
}

/// Real coordinates (Re, Im) of the entries of an n×n matrix, row-major, length 2n².
pub fn realify(m: &CMatrix<f64>) -> Vec<f64> {
    m.entries().iter().flat_map(|z| [z.re, z.im]).collect()
}

fn wedge_to_dmatrix(w: &Wedge2<f64>) -> DMatrix<f64> {
    let c = w.coeffs();
    DMatrix::from_fn(c.rows(), c.cols(), |i, j| *c.get(i, j))
}

/// Differential of X ↦ p(g exp X) at X = 0 for a base projector `q`, as a 2n²×N real matrix.
pub fn projection_differential(
    basis: &LieBasis,
    g: &CMatrix<f64>,
    q: &CMatrix<f64>,
) -> DMatrix<f64> {
    let n = basis.n();
    let gs = g.adjoint();
    let mut j = DMatrix::<f64>::zeros(2 * n * n, basis.dim());
    for b in 0..basis.dim() {
        let e = basis.basis_matrix::<f64>(b);
        let d = g.mul(&e.mul(q).sub(&q.mul(&e))).mul(&gs);
        for (row, v) in realify(&d).into_iter().enumerate() {
            j[(row, b)] = v;
        }
    }
    j
}

/// Push-forward of the field at g along g ↦ g q g*: B = J ρ̃(g) Jᵀ on the 2n² real
/// coordinates of the projector.
pub fn projected_bivector(
    basis: &LieBasis,
    g: &CMatrix<f64>,
    q: &CMatrix<f64>,
    f: &BivectorField<f64>,
) -> Result<DMatrix<f64>> {
    let w = wedge_to_dmatrix(&f.eval(basis, g)?);
    let j = projection_differential(basis, g, q);
    Ok(&j * w * j.transpose())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeafRank {
    pub rank: usize,
    pub largest: f64,
    /// Smallest singular value counted in the rank.
    pub min_nonzero: Option<f64>,
    /// First discarded value over the last kept one (0 when nothing was discarded).
    pub gap: f64,
}

pub fn leaf_rank(b: &DMatrix<f64>, rel: f64) -> LeafRank {
    let sv = singular_values(b);
    let largest = sv.first().copied().unwrap_or(0.0);
    let rank = crate::linalg::float::numerical_rank(&sv, rel);
    let min_nonzero = (rank > 0).then(|| sv[rank - 1]);
    let gap = match (min_nonzero, sv.get(rank)) {
        (Some(lo), Some(&next)) if lo > 0.0 => next / lo,
        _ => 0.0,
    };
    LeafRank {
        rank,
        largest,
        min_nonzero,
        gap,
    }
}

/// |Z_1|²+…+|Z_k|² − c/(1−c)·(|Z_{k+1}|²+…+|Z_n|²) on the unit generator Z of a line.
pub fn leaf_residual(p: &GrassPoint, k: usize, c: &Rational) -> Result<f64> {
    if p.k() != 1 {
        return Err(HomogeneousError::OutOfRange(format!(
            "leaf equation needs a line, got k={}",
            p.k()
        )));
    }
    check_k(p.n(), k)?;
    let one_minus = c.one_minus();
    if one_minus.is_zero() {
        return Err(HomogeneousError::DivisionByZero("c = 1".into()));
    }
    let z = p.range_basis();
    let head: f64 = (0..k).map(|i| z[(i, 0)].norm_sqr()).sum();
    let tail: f64 = (k..p.n()).map(|i| z[(i, 0)].norm_sqr()).sum();
    Ok(head - c.to_f64() / one_minus.to_f64() * tail)
}

/// The line through (√(1−c), √c·v_1, …, √c·v_{n−1}).
pub fn embed_sphere(v: &[C64], c: &Rational) -> Result<GrassPoint> {
    if c.is_negative() || c.is_zero() || *c >= Rational::one() {
        return Err(HomogeneousError::OutOfRange(format!(
            "c={c} must lie strictly inside (0,1)"
        )));
    }
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(HomogeneousError::NonUnit(norm));
    }
    let cf = c.to_f64();
    let mut z = vec![C64::new((1.0 - cf).sqrt(), 0.0)];
    z.extend(v.iter().map(|x| x * cf.sqrt()));
    Ok(line_through(&z))
}

/// Rank-one projector onto a unit vector.
pub fn line_through(z: &[C64]) -> GrassPoint {
    let n = z.len();
    let p = CMatrix::from_fn(n, n, |i, j| {
        let w = z[i] * z[j].conj();
        ComplexScalar::new(w.re, w.im)
    });
    GrassPoint { n, k: 1, p }
}

fn unit_vector(dim: usize, rng: &mut impl Rng) -> Vec<C64> {
    let v: Vec<C64> = (0..dim)
        .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

fn float_sigma(c: &Rational, k: usize, n: usize, variant: SigmaVariant) -> Result<CMatrix<f64>> {
    Ok(build_sigma::<f64>(c, k, n, variant)?)
}

/// Leaf equation on P^{n−1}: images of K_j = S(U(j)×U(n−j)) under the twisted projection
/// with last column (√c, 0, …, 0, √(1−c)), for every j, plus sphere images under c ↔ 1−c.
pub fn check_leaf_equation(
    n: usize,
    c: &Rational,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<CheckReport> {
    let started = Instant::now();
    check_k(n, 1)?;
    // The transpose of σ(1−c,1) has the displayed last column.
    let sigma = float_sigma(&c.one_minus(), 1, n, SigmaVariant::SignVariant)?;
    let complement = c.one_minus();
    let results: Vec<Result<(f64, f64)>> = par_map(samples, |i| {
        let mut rng = sample_rng(seed, i as u64);
        let j = 1 + i % (n - 1);
        let g = block_diagonal_unitary(&[j, n - j], &mut rng, true);
        let image = leaf_residual(&project_twisted(&g, 1, &sigma)?, j, c)?.abs();
        let v = unit_vector(n - 1, &mut rng);
        let sphere = leaf_residual(&embed_sphere(&v, c)?, 1, &complement)?.abs();
        Ok((image, sphere))
    });
    let results: Vec<(f64, f64)> = results.into_iter().collect::<Result<_>>()?;
    let image = max_residual(results.iter().map(|r| r.0));
    let sphere = max_residual(results.iter().map(|r| r.1));
    let mut report = CheckReport::new("leaf-equation", Mode::Float, n)
        .m_or_k(1)
        .c(c);
    report.note(format!(
        "K_j images {image:.3e}, sphere images (c ↔ 1−c) {sphere:.3e}"
    ));
    Ok(report.finish(image.max(sphere), tol, samples, started))
}

/// Twisted quotient data: σ(c,k), the field π, and the base projector σQσ⁻¹.
struct TwistedQuotient {
    sigma: CMatrix<f64>,
    pi: BivectorField<f64>,
    q_sigma: CMatrix<f64>,
    q: CMatrix<f64>,
}

impl TwistedQuotient {
    fn new(basis: &LieBasis, k: usize, c: &Rational) -> Result<Self> {
        let n = basis.n();
        check_k(n, k)?;
        let sigma = float_sigma(c, k, n, SigmaVariant::Canonical)?;
        let q = base_projector(n, k);
        let q_sigma = sigma.mul(&q).mul(&sigma.adjoint());
        Ok(TwistedQuotient {
            pi: BivectorField::multiplicative(build_r::<f64>(basis)),
            sigma,
            q_sigma,
            q,
        })
    }
}

fn relative(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).abs().max() / a.abs().max().max(b.abs().max()).max(1.0)
}

/// Transport through ι: [g] ↦ [gσ⁻¹]. The push-forward of π_σ along p at g must equal the
/// push-forward of π along the twisted quotient at gσ⁻¹. With `other` set, the second side
/// uses σ(other, k) instead (a negative control).
pub fn check_poisson_diffeo(
    basis: &LieBasis,
    k: usize,
    c: &Rational,
    other: Option<&Rational>,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<CheckReport> {
    let started = Instant::now();
    let n = basis.n();
    let quot = TwistedQuotient::new(basis, k, c)?;
    let twisted = BivectorField::translated(quot.pi.clone(), quot.sigma.clone());
    let rhs_sigma = match other {
        Some(c2) => float_sigma(c2, k, n, SigmaVariant::Canonical)?,
        None => quot.sigma.clone(),
    };
    let rhs_q = rhs_sigma.mul(&quot.q).mul(&rhs_sigma.adjoint());
    let res: Vec<Result<f64>> = par_map(samples, |i| {
        let g = haar_unitary(n, &mut sample_rng(seed, i as u64), true);
        let lhs = projected_bivector(basis, &g, &quot.q, &twisted)?;
        let g2 = g.mul(&rhs_sigma.adjoint());
        let rhs = projected_bivector(basis, &g2, &rhs_q, &quot.pi)?;
        let p1 = project(&g, k)?;
        let p2 = GrassPoint::from_projector(g2.mul(&rhs_q).mul(&g2.adjoint()), k)?;
        let points = p1.projector().sub(p2.projector()).max_abs();
        Ok(relative(&lhs, &rhs).max(points))
    });
    let res = max_residual(res.into_iter().collect::<Result<Vec<_>>>()?);
    let name = if other.is_some() {
        "diffeo-mismatched-sigma"
    } else {
        "diffeo"
    };
    let mut report = CheckReport::new(name, Mode::Float, n).m_or_k(k).c(c);
    if let Some(c2) = other {
        report.note(format!("second side uses σ({c2},{k})"));
    }
    Ok(report.finish(res, tol, samples, started))
}

/// Covariance of τ = p_*π_σ: τ(hPh*) = L_h τ(P) L_hᵀ + J_{h,P} π̃(h) J_{h,P}ᵀ, where L_h is
/// M ↦ hMh* and J_{h,P}(Y) = h(YP − PY)h*. The left side is evaluated at the representative
/// h·g·s with s in the stabilizer of Q. With `zero_tau` the left side is replaced by 0.
pub fn check_covariance(
    basis: &LieBasis,
    k: usize,
    c: &Rational,
    zero_tau: bool,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<CheckReport> {
    let started = Instant::now();
    let n = basis.n();
    let quot = TwistedQuotient::new(basis, k, c)?;
    let tau = BivectorField::translated(quot.pi.clone(), quot.sigma.clone());
    let res: Vec<Result<f64>> = par_map(samples, |i| {
        let mut rng = sample_rng(seed, i as u64);
        let g = haar_unitary(n, &mut rng, true);
        let h = haar_unitary(n, &mut rng, true);
        let s = block_diagonal_unitary(&[n - k, k], &mut rng, true);
        let p = project(&g, k)?;
        let lhs = if zero_tau {
            DMatrix::zeros(2 * n * n, 2 * n * n)
        } else {
            projected_bivector(basis, &h.mul(&g).mul(&s), &quot.q, &tau)?
        };
        let l_h = conjugation_matrix(&h);
        let base = projected_bivector(basis, &g, &quot.q, &tau)?;
        let j_h = projection_differential(basis, &h, p.projector());
        let w = wedge_to_dmatrix(&quot.pi.eval(basis, &h)?);
        let rhs = &l_h * base * l_h.transpose() + &j_h * w * j_h.transpose();
        Ok(relative(&lhs, &rhs))
    });
    let res = max_residual(res.into_iter().collect::<Result<Vec<_>>>()?);
    let name = if zero_tau {
        "covariance-zero-tensor"
    } else {
        "covariance"
    };
    let report = CheckReport::new(name, Mode::Float, n).m_or_k(k).c(c);
    Ok(report.finish(res, tol, samples, started))
}

/// Real 2n²×2n² matrix of M ↦ hMh*.
pub fn conjugation_matrix(h: &CMatrix<f64>) -> DMatrix<f64> {
    let n = h.rows();
    let hs = h.adjoint();
    let mut out = DMatrix::<f64>::zeros(2 * n * n, 2 * n * n);
    for a in 0..n {
        for b in 0..n {
            for part in 0..2 {
                let mut e = CMatrix::<f64>::zeros(n, n);
                let unit = if part == 0 {
                    ComplexScalar::one()
                } else {
                    ComplexScalar::i()
                };
                e.set(a, b, unit);
                let col = 2 * (a * n + b) + part;
                for (row, v) in realify(&h.mul(&e).mul(&hs)).into_iter().enumerate() {
                    out[(row, col)] = v;
                }
            }
        }
    }
    out
}

/// The push-forward along the twisted quotient is the same at g and at g·σsσ⁻¹ for s in the
/// stabilizer of Q, and so is its rank.
pub fn check_well_defined(
    basis: &LieBasis,
    k: usize,
    c: &Rational,
    samples: usize,
    seed: u64,
    tol: f64,
    rank_rel: f64,
) -> Result<CheckReport> {
    let started = Instant::now();
    let n = basis.n();
    let quot = TwistedQuotient::new(basis, k, c)?;
    let res: Vec<Result<(f64, bool)>> = par_map(samples, |i| {
        let mut rng = sample_rng(seed, i as u64);
        let g = haar_unitary(n, &mut rng, true);
        let s = block_diagonal_unitary(&[n - k, k], &mut rng, true);
        let moved = g.mul(&quot.sigma).mul(&s).mul(&quot.sigma.adjoint());
        let b1 = projected_bivector(basis, &g, &quot.q_sigma, &quot.pi)?;
        let b2 = projected_bivector(basis, &moved, &quot.q_sigma, &quot.pi)?;
        let same_rank = leaf_rank(&b1, rank_rel).rank == leaf_rank(&b2, rank_rel).rank;
        Ok((relative(&b1, &b2), same_rank))
    });
    let res = res.into_iter().collect::<Result<Vec<_>>>()?;
    let ranks_agree = res.iter().all(|r| r.1);
    let mut report = CheckReport::new("well-defined", Mode::Float, n)
        .m_or_k(k)
        .c(c);
    report.note(format!(
        "ranks agree along stabilizer orbits: {ranks_agree}"
    ));
    let value = if ranks_agree {
        max_residual(res.iter().map(|r| r.0))
    } else {
        f64::INFINITY
    };
    Ok(report.finish(value, tol, samples, started))
}

/// One row of a leaf-rank survey.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeafSample {
    pub seed: u64,
    pub index: usize,
    pub n: usize,
    pub k: usize,
    pub c: String,
    pub point_hash: String,
    pub rank: usize,
    pub min_nonzero: Option<f64>,
    pub gap: f64,
}

/// Where survey points are drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SamplePoints {
    Haar,
    Torus,
}

/// Ranks of the push-forward of π along the twisted quotient of σ(c,k).
pub fn leaf_survey(
    basis: &LieBasis,
    k: usize,
    c: &Rational,
    points: SamplePoints,
    samples: usize,
    seed: u64,
    rank_rel: f64,
) -> Result<Vec<LeafSample>> {
    let n = basis.n();
    let quot = TwistedQuotient::new(basis, k, c)?;
    let rows: Vec<Result<LeafSample>> = par_map(samples, |i| {
        let mut rng = sample_rng(seed, i as u64);
        let g = match points {
            SamplePoints::Haar => haar_unitary(n, &mut rng, true),
            SamplePoints::Torus => torus_element(n, &mut rng, true),
        };
        let b = projected_bivector(basis, &g, &quot.q_sigma, &quot.pi)?;
        let point = GrassPoint::from_projector(g.mul(&quot.q_sigma).mul(&g.adjoint()), k)?;
        let lr = leaf_rank(&b, rank_rel);
        Ok(LeafSample {
            seed,
            index: i,
            n,
            k,
            c: c.to_string(),
            point_hash: point.hash_hex(),
            rank: lr.rank,
            min_nonzero: lr.min_nonzero,
            gap: lr.gap,
        })
    });
    rows.into_iter().collect()
}

/// Zero-dimensional leaves through the torus images, and even positive ranks at generic points.
pub fn check_torus_leaves(
    basis: &LieBasis,
    k: usize,
    c: &Rational,
    samples: usize,
    seed: u64,
    rank_rel: f64,
) -> Result<CheckReport> {
    let started = Instant::now();
    let torus = leaf_survey(basis, k, c, SamplePoints::Torus, samples, seed, rank_rel)?;
    let generic = leaf_survey(basis, k, c, SamplePoints::Haar, samples, seed, rank_rel)?;
    let torus_max = torus.iter().map(|s| s.rank).max().unwrap_or(0);
    let generic_ok = generic.iter().all(|s| s.rank > 0 && s.rank % 2 == 0);
    let mut ranks: Vec<usize> = generic.iter().map(|s| s.rank).collect();
    ranks.sort_unstable();
    ranks.dedup();
    let mut report = CheckReport::new("torus-leaves", Mode::Float, basis.n())
        .m_or_k(k)
        .c(c);
    report.note(format!(
        "max torus rank {torus_max}; generic ranks {ranks:?}"
    ));
    Ok(report.finish_bool(torus_max == 0 && generic_ok, 2 * samples, started))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::Algebra;

    fn q(a: i64, b: i64) -> Rational {
        Rational::new(a, b)
    }

    #[test]
    fn identity_projects_to_last_unit() {
        let p = project(&CMatrix::identity(4), 1).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == 3 && j == 3 { 1.0 } else { 0.0 };
                assert_eq!(p.projector().get(i, j).re, want);
            }
        }
    }

    #[test]
    fn stabilizer_does_not_move_the_point() {
        let mut rng = sample_rng(3, 0);
        let s = block_diagonal_unitary(&[3, 2], &mut rng, true);
        let p = project(&s, 2).unwrap();
        assert!(p.projector().sub(&base_projector(5, 2)).max_abs() < 1e-12);
    }

    #[test]
    fn invalid_projector_is_rejected() {
        let mut m = base_projector(3, 1);
        m.set(0, 0, ComplexScalar::real(0.5));
        assert!(GrassPoint::from_projector(m, 1).is_err());
    }

    #[test]
    fn twisted_line_for_n3() {
        let c = q(1, 3);
        let s = build_sigma::<f64>(&c.one_minus(), 1, 3, SigmaVariant::SignVariant).unwrap();
        let p = project_twisted(&CMatrix::identity(3), 1, &s).unwrap();
        let z = p.range_basis();
        assert!((z[(0, 0)].norm_sqr() - 1.0 / 3.0).abs() < 1e-12);
        assert!(z[(1, 0)].norm() < 1e-12);
        assert!((z[(2, 0)].norm_sqr() - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn leaf_equation_on_images() {
        for n in 3..=5 {
            for c in [q(1, 3), q(1, 2)] {
                let r = check_leaf_equation(n, &c, 40, 7, 1e-10).unwrap();
                assert!(r.pass, "{r:?}");
            }
        }
    }

    #[test]
    fn leaf_residual_errors() {
        let p = project(&CMatrix::identity(3), 1).unwrap();
        assert!(leaf_residual(&p, 1, &Rational::one()).is_err());
        let v = [C64::new(2.0, 0.0), C64::new(0.0, 0.0)];
        assert!(embed_sphere(&v, &q(1, 3)).is_err());
    }

    #[test]
    fn off_image_point_has_residual() {
        let z = [C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0)];
        let r = leaf_residual(&line_through(&z), 1, &q(1, 3)).unwrap();
        assert!((r - 1.0).abs() < 1e-12);
    }

    #[test]
    fn projected_bivector_vanishes_at_identity() {
        let b = LieBasis::new(3, Algebra::Su);
        let pi = BivectorField::multiplicative(build_r::<f64>(&b));
        let m = projected_bivector(&b, &CMatrix::identity(3), &base_projector(3, 1), &pi).unwrap();
        assert_eq!(m.abs().max(), 0.0);
        let g = haar_unitary(3, &mut sample_rng(1, 0), true);
        let m = projected_bivector(&b, &g, &base_projector(3, 1), &pi).unwrap();
        assert!((&m + m.transpose()).abs().max() < 1e-12);
    }

    #[test]
    fn generic_rank_on_projective_plane() {
        let b = LieBasis::new(3, Algebra::Su);
        let pi = BivectorField::multiplicative(build_r::<f64>(&b));
        for i in 0..20 {
            let g = haar_unitary(3, &mut sample_rng(11, i), true);
            let m = projected_bivector(&b, &g, &base_projector(3, 1), &pi).unwrap();
            assert_eq!(leaf_rank(&m, 1e-7).rank, 4);
        }
    }

    #[test]
    fn diffeo_and_control() {
        let b = LieBasis::new(3, Algebra::Su);
        let c = q(1, 3);
        let r = check_poisson_diffeo(&b, 1, &c, None, 30, 5, 1e-8).unwrap();
        assert!(r.pass, "{r:?}");
        let bad = check_poisson_diffeo(&b, 1, &c, Some(&q(2, 3)), 10, 5, 1e-8).unwrap();
        assert!(!bad.holds, "{bad:?}");
    }

    #[test]
    fn covariance_and_control() {
        let b = LieBasis::new(3, Algebra::Su);
        let c = q(1, 3);
        let r = check_covariance(&b, 1, &c, false, 10, 2, 1e-8).unwrap();
        assert!(r.pass, "{r:?}");
        let bad = check_covariance(&b, 1, &c, true, 10, 2, 1e-8).unwrap();
        assert!(!bad.holds);
    }

    #[test]
    fn descends_to_quotient() {
        for (n, k) in [(3, 1), (4, 1), (4, 2)] {
            let b = LieBasis::new(n, Algebra::Su);
            let r = check_well_defined(&b, k, &q(1, 3), 20, 9, 1e-8, 1e-7).unwrap();
            assert!(r.pass, "{r:?}");
        }
    }

    #[test]
    fn torus_points_are_leaves() {
        for (n, k) in [(3, 1), (4, 1), (4, 2)] {
            let b = LieBasis::new(n, Algebra::Su);
            let r = check_torus_leaves(&b, k, &q(1, 3), 20, 4, 1e-7).unwrap();
            assert!(r.pass, "{r:?}");
        }
    }
}
