//! Schubert varieties of Gr_k(ℂⁿ) for the flag V_i = span of the last i basis vectors.

use std::fmt;
use std::time::Instant;

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::{project, GrassPoint, HomogeneousError, Result};
use crate::lie::sample::{block_diagonal_unitary, sample_rng};
use crate::linalg::float::C64;
use crate::linalg::CMatrix;
use crate::par::par_map;
use crate::report::{CheckReport, Mode};
use crate::scalar::ComplexScalar;

/// Singular values below this count as zero in the intersection-dimension test.
pub const MEMBERSHIP_TOL: f64 = 1e-8;

/// [a_1, …, a_k] with 0 ≤ a_1 ≤ … ≤ a_k ≤ n−k.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SchubertSymbol {
    n: usize,
    a: Vec<usize>,
}

impl SchubertSymbol {
    pub fn new(n: usize, a: Vec<usize>) -> Result<Self> {
        let k = a.len();
        if k == 0 || k >= n {
            return Err(HomogeneousError::InvalidSymbol(format!("k={k} for n={n}")));
        }
        if a.windows(2).any(|w| w[0] > w[1]) {
            return Err(HomogeneousError::InvalidSymbol(format!(
                "{a:?} is not non-decreasing"
            )));
        }
        if a.iter().any(|&x| x > n - k) {
            return Err(HomogeneousError::InvalidSymbol(format!(
                "{a:?} exceeds n−k={}",
                n - k
            )));
        }
        Ok(SchubertSymbol { n, a })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.a.len()
    }

    pub fn entries(&self) -> &[usize] {
        &self.a
    }

    /// Complex dimension Σ a_i of the open cell.
    pub fn cell_dim(&self) -> usize {
        self.a.iter().sum()
    }

    /// Every symbol for (n, k), in lexicographic order.
    pub fn all(n: usize, k: usize) -> Vec<SchubertSymbol> {
        let mut out = Vec::new();
        if k == 0 || k >= n {
            return out;
        }
        let mut cur = vec![0usize; k];
        loop {
            out.push(SchubertSymbol { n, a: cur.clone() });
            // Increment the last position that can grow; reset the tail to it.
            let Some(pos) = (0..k).rev().find(|&i| cur[i] < n - k) else {
                break;
            };
            let v = cur[pos] + 1;
            for x in cur.iter_mut().skip(pos) {
                *x = v;
            }
        }
        out
    }
}

impl fmt::Display for SchubertSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.a.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

pub fn bruhat_leq(s: &SchubertSymbol, t: &SchubertSymbol) -> Result<bool> {
    if s.n != t.n || s.k() != t.k() {
        return Err(HomogeneousError::Shape(format!(
            "{s} (n={}) vs {t} (n={})",
            s.n, t.n
        )));
    }
    Ok(s.a.iter().zip(&t.a).all(|(x, y)| x <= y))
}

/// dim(range(P) ∩ V_j) = k − rank(first n−j rows of an orthonormal range basis).
pub fn intersection_dim(p: &GrassPoint, j: usize) -> usize {
    let u = p.range_basis();
    let n = p.n();
    let rows = n - j.min(n);
    if rows == 0 {
        return p.k();
    }
    let top: DMatrix<C64> = u.rows(0, rows).into_owned();
    let rank = top
        .singular_values()
        .iter()
        .filter(|&&s| s > MEMBERSHIP_TOL)
        .count();
    p.k() - rank
}

pub fn schubert_membership(p: &GrassPoint, s: &SchubertSymbol) -> Result<bool> {
    if p.n() != s.n || p.k() != s.k() {
        return Err(HomogeneousError::InvalidSymbol(format!(
            "{s} for a point of Gr_{}(C^{})",
            p.k(),
            p.n()
        )));
    }
    Ok(s.a
        .iter()
        .enumerate()
        .all(|(i, &a)| intersection_dim(p, a + i + 1) > i))
}

/// The symbol of p(S(U(n−l)×U(l))) with the U(l) factor in the bottom-right corner.
pub fn standard_image_symbol(l: usize, k: usize, n: usize) -> Result<SchubertSymbol> {
    if !(1..n).contains(&l) || !(1..n).contains(&k) {
        return Err(HomogeneousError::OutOfRange(format!(
            "l={l}, k={k} for n={n}"
        )));
    }
    let a = if l < k {
        let mut a = vec![0; l];
        a.extend(std::iter::repeat_n(n - k, k - l));
        a
    } else {
        vec![l - k; k]
    };
    SchubertSymbol::new(n, a)
}

/// A point of the open cell of `s`: the i-th spanning vector is generic inside V_{a_i+i}.
pub fn generic_cell_point(s: &SchubertSymbol, rng: &mut impl Rng) -> GrassPoint {
    let n = s.n;
    let k = s.k();
    let mut cols: Vec<Vec<C64>> = Vec::new();
    for (i, &a) in s.a.iter().enumerate() {
        let support = a + i + 1;
        let mut v: Vec<C64> = (0..n)
            .map(|r| {
                if r >= n - support {
                    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
                } else {
                    C64::new(0.0, 0.0)
                }
            })
            .collect();
        for _ in 0..2 {
            for u in &cols {
                let f: C64 = u.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
                for (vi, ui) in v.iter_mut().zip(u) {
                    *vi -= f * ui;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        cols.push(v.into_iter().map(|z| z / norm).collect());
    }
    let p = CMatrix::from_fn(n, n, |i, j| {
        let w: C64 = cols.iter().map(|u| u[i] * u[j].conj()).sum();
        ComplexScalar::new(w.re, w.im)
    });
    GrassPoint::from_projector(p, k).expect("orthonormal columns give a projector")
}

/// Sampled p(K_l) points lie in the predicted Schubert variety and, being generic, in no
/// strictly smaller one.
pub fn check_standard_images(
    n: usize,
    k: usize,
    l: usize,
    samples: usize,
    seed: u64,
) -> Result<CheckReport> {
    let started = Instant::now();
    let symbol = standard_image_symbol(l, k, n)?;
    let below: Vec<SchubertSymbol> = SchubertSymbol::all(n, k)
        .into_iter()
        .filter(|t| t != &symbol && bruhat_leq(t, &symbol).unwrap_or(false))
        .collect();
    let outcomes: Vec<Result<(bool, bool)>> = par_map(samples, |i| {
        let g = block_diagonal_unitary(&[n - l, l], &mut sample_rng(seed, i as u64), true);
        let p = project(&g, k)?;
        let inside = schubert_membership(&p, &symbol)?;
        let mut tight = true;
        for t in &below {
            tight &= !schubert_membership(&p, t)?;
        }
        Ok((inside, tight))
    });
    let outcomes = outcomes.into_iter().collect::<Result<Vec<_>>>()?;
    let inside = outcomes.iter().filter(|o| o.0).count();
    let tight = outcomes.iter().filter(|o| o.1).count();
    let mut report = CheckReport::new("schubert-image", Mode::Float, n)
        .m_or_k(k)
        .l(l);
    report.note(format!(
        "symbol {symbol}: {inside}/{samples} inside, {tight}/{samples} in the open cell"
    ));
    Ok(report.finish_bool(inside == samples && tight == samples, samples, started))
}

/// For every pair of symbols (s, t): a generic point of the cell of s lies in the variety of t
/// exactly when s ≤ t.
pub fn check_bruhat_closure(n: usize, seed: u64) -> Result<CheckReport> {
    let started = Instant::now();
    let mut pairs = 0;
    let mut mismatches = Vec::new();
    for k in 1..n {
        let symbols = SchubertSymbol::all(n, k);
        for (si, s) in symbols.iter().enumerate() {
            let p = generic_cell_point(s, &mut sample_rng(seed, (k * 1000 + si) as u64));
            for t in &symbols {
                pairs += 1;
                if schubert_membership(&p, t)? != bruhat_leq(s, t)? {
                    mismatches.push(format!("{s} vs {t}"));
                }
            }
        }
    }
    let mut report = CheckReport::new("bruhat-closure", Mode::Float, n);
    report.note(format!(
        "{pairs} ordered pairs, {} mismatches",
        mismatches.len()
    ));
    for m in mismatches.iter().take(5) {
        report.note(m.clone());
    }
    Ok(report.finish_bool(mismatches.is_empty(), pairs, started))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructor_validates() {
        assert!(SchubertSymbol::new(4, vec![1, 0]).is_err());
        assert!(SchubertSymbol::new(4, vec![0, 3]).is_err());
        assert!(SchubertSymbol::new(4, vec![0, 1]).is_ok());
    }

    #[test]
    fn enumeration_counts_binomials() {
        assert_eq!(SchubertSymbol::all(4, 2).len(), 6);
        assert_eq!(SchubertSymbol::all(6, 3).len(), 20);
        assert_eq!(SchubertSymbol::all(5, 1).len(), 5);
    }

    #[test]
    fn order_basics() {
        let s = SchubertSymbol::new(4, vec![0, 1]).unwrap();
        let t = SchubertSymbol::new(4, vec![1, 1]).unwrap();
        assert!(bruhat_leq(&s, &s).unwrap());
        assert!(bruhat_leq(&s, &t).unwrap());
        assert!(!bruhat_leq(&t, &s).unwrap());
        assert!(s.cell_dim() <= t.cell_dim());
        let u = SchubertSymbol::new(5, vec![0, 1]).unwrap();
        assert!(bruhat_leq(&s, &u).is_err());
    }

    #[test]
    fn base_point_and_top_symbol() {
        let p = project(&CMatrix::identity(5), 2).unwrap();
        assert!(schubert_membership(&p, &SchubertSymbol::new(5, vec![0, 0]).unwrap()).unwrap());
        let q = project(
            &crate::lie::sample::haar_unitary(5, &mut sample_rng(1, 0), true),
            2,
        )
        .unwrap();
        assert!(schubert_membership(&q, &SchubertSymbol::new(5, vec![3, 3]).unwrap()).unwrap());
        assert!(!schubert_membership(&q, &SchubertSymbol::new(5, vec![2, 3]).unwrap()).unwrap());
    }

    #[test]
    fn image_symbols() {
        assert_eq!(standard_image_symbol(2, 2, 5).unwrap().entries(), &[0, 0]);
        assert_eq!(
            standard_image_symbol(1, 3, 6).unwrap().entries(),
            &[0, 3, 3]
        );
        assert_eq!(standard_image_symbol(4, 2, 6).unwrap().entries(), &[2, 2]);
        assert!(standard_image_symbol(0, 1, 3).is_err());
    }

    #[test]
    fn sampled_images_match() {
        for n in 3..=5 {
            for k in 1..n {
                for l in 1..n {
                    let r = check_standard_images(n, k, l, 10, 3).unwrap();
                    assert!(r.pass, "{r:?}");
                }
            }
        }
    }

    #[test]
    fn closure_matches_order() {
        for n in 2..=4 {
            let r = check_bruhat_closure(n, 1).unwrap();
            assert!(r.pass, "{r:?}");
        }
    }
}
