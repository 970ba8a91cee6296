//! The twist matrices σ(c,m) and their conjugation tables.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::{k_element, matrix_unit, x_minus, x_plus, LieError};
use crate::linalg::CMatrix;
use crate::report::{max_residual, CheckReport, Mode};
use crate::scalar::{ComplexScalar, Rational, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SigmaVariant {
    /// (n+1−i, i) = +√(1−c), (i, n+1−i) = −√(1−c).
    #[default]
    Canonical,
    /// The transpose: signs of the off-diagonal blocks exchanged.
    SignVariant,
}

/// σ(c,m): √c on the first and last m diagonal slots, 1 in the middle, ±√(1−c) on the
/// anti-diagonal corners.
pub fn build_sigma<S: Scalar>(
    c: &Rational,
    m: usize,
    n: usize,
    variant: SigmaVariant,
) -> Result<CMatrix<S>, LieError> {
    if m < 1 || 2 * m > n {
        return Err(LieError::OutOfRange(format!(
            "m={m} must satisfy 1 ≤ m ≤ ⌊{n}/2⌋"
        )));
    }
    if c.is_negative() || *c > Rational::one() {
        return Err(LieError::OutOfRange(format!("c={c} outside [0,1]")));
    }
    let (s, t) = S::sqrt_pair(c)?;
    let mut g = CMatrix::<S>::zeros(n, n);
    for i in 0..n {
        let v = if i < m || i >= n - m {
            s.clone()
        } else {
            S::one()
        };
        g.set(i, i, ComplexScalar::real(v));
    }
    for i in 0..m {
        let j = n - 1 - i;
        g.set(j, i, ComplexScalar::real(t.clone()));
        g.set(i, j, ComplexScalar::real(t.neg_ref()));
    }
    Ok(match variant {
        SigmaVariant::Canonical => g,
        SigmaVariant::SignVariant => g.transpose(),
    })
}

/// One displayed identity σ⁻¹·Y·σ = Z, instantiated at concrete indices.
#[derive(Debug, Clone)]
pub struct TableIdentity<S: Scalar> {
    pub formula: String,
    pub lhs: CMatrix<S>,
    pub rhs: CMatrix<S>,
}

impl<S: Scalar> TableIdentity<S> {
    pub fn residual(&self) -> f64 {
        let d = self.lhs.sub(&self.rhs);
        if S::EXACT && d.is_zero() {
            0.0
        } else {
            d.max_abs()
                .max(if S::EXACT { f64::MIN_POSITIVE } else { 0.0 })
        }
    }
}

/// Every conjugation identity of the σ(c,m) tables, for all admissible indices.
pub fn conjugation_tables<S: Scalar>(
    c: &Rational,
    m: usize,
    n: usize,
) -> Result<Vec<TableIdentity<S>>, LieError> {
    let sigma = build_sigma::<S>(c, m, n, SigmaVariant::Canonical)?;
    let sigma_inv = sigma.adjoint();
    let conj = |y: &CMatrix<S>| sigma_inv.mul(y).mul(&sigma);
    let (s, t) = S::sqrt_pair(c)?;
    let cc = S::from_rational(c);
    let dc = S::from_rational(&c.one_minus());
    let a = s.mul_ref(&t);
    let re = |x: &S| ComplexScalar::real(x.clone());
    let two_c_minus_1 = cc.add_ref(&cc).sub_ref(&S::one());
    let flip = |i: usize| n + 1 - i;
    let e = |i: usize, j: usize| matrix_unit::<S>(n, i, j);
    let xp = |i: usize, j: usize| x_plus::<S>(n, i, j);
    let xm = |i: usize, j: usize| x_minus::<S>(n, i, j);

    let mut out = Vec::new();
    let mut push = |formula: String, y: CMatrix<S>, rhs: CMatrix<S>| {
        out.push(TableIdentity {
            formula,
            lhs: conj(&y),
            rhs,
        });
    };

    for i in 1..=m {
        for j in 1..=m {
            let (ni, nj) = (flip(i), flip(j));
            push(
                format!("e({i},{j})"),
                e(i, j),
                e(i, j)
                    .scale(&re(&cc))
                    .add(&e(ni, nj).scale(&re(&dc)))
                    .sub(&e(i, nj).add(&e(ni, j)).scale(&re(&a))),
            );
            push(
                format!("e({nj},{ni})"),
                e(nj, ni),
                e(nj, ni)
                    .scale(&re(&cc))
                    .add(&e(j, i).scale(&re(&dc)))
                    .add(&e(nj, i).add(&e(j, ni)).scale(&re(&a))),
            );
            push(
                format!("e({i},{nj})"),
                e(i, nj),
                e(i, nj)
                    .scale(&re(&cc))
                    .sub(&e(ni, j).scale(&re(&dc)))
                    .add(&e(i, j).sub(&e(ni, nj)).scale(&re(&a))),
            );
            push(
                format!("e({ni},{j})"),
                e(ni, j),
                e(ni, j)
                    .scale(&re(&cc))
                    .sub(&e(i, nj).scale(&re(&dc)))
                    .add(&e(i, j).sub(&e(ni, nj)).scale(&re(&a))),
            );
        }
    }
    for i in 1..=m {
        let ni = flip(i);
        for p in 1..=n - 2 * m {
            let q = m + p;
            push(
                format!("e({i},{q})"),
                e(i, q),
                e(i, q).scale(&re(&s)).sub(&e(ni, q).scale(&re(&t))),
            );
            push(
                format!("e({ni},{q})"),
                e(ni, q),
                e(ni, q).scale(&re(&s)).add(&e(i, q).scale(&re(&t))),
            );
            push(
                format!("e({q},{i})"),
                e(q, i),
                e(q, i).scale(&re(&s)).sub(&e(q, ni).scale(&re(&t))),
            );
            push(
                format!("e({q},{ni})"),
                e(q, ni),
                e(q, ni).scale(&re(&s)).add(&e(q, i).scale(&re(&t))),
            );
        }
    }
    for i in m + 1..=n - m {
        for j in m + 1..=n - m {
            push(format!("e({i},{j}) middle"), e(i, j), e(i, j));
        }
    }

    // Upper sign (+) then lower sign (−) of each ± / ∓ formula.
    for (tag, x, sgn) in [
        ("+", &xp as &dyn Fn(usize, usize) -> CMatrix<S>, 1i64),
        ("-", &xm, -1),
    ] {
        let sg = ComplexScalar::real(S::from_i64(sgn));
        for i in 1..=m {
            for j in 1..=m {
                if i == j {
                    continue;
                }
                let (ni, nj) = (flip(i), flip(j));
                // cX_{i,n+1−j} ∓ (1−c)X_{j,n+1−i} + A(X_{ij} ∓ X_{n+1−j,n+1−i})
                push(
                    format!("X{tag}({i},{nj})"),
                    x(i, nj),
                    x(i, nj)
                        .scale(&re(&cc))
                        .sub(&x(j, ni).scale(&re(&dc)).scale(&sg))
                        .add(&x(i, j).sub(&x(nj, ni).scale(&sg)).scale(&re(&a))),
                );
            }
        }
        for i in 1..=m {
            for j in i + 1..=m {
                let (ni, nj) = (flip(i), flip(j));
                // cX_ij − AX_{i,n+1−j} ∓ AX_{j,n+1−i} ± (1−c)X_{n+1−j,n+1−i}
                push(
                    format!("X{tag}({i},{j})"),
                    x(i, j),
                    x(i, j)
                        .scale(&re(&cc))
                        .sub(&x(i, nj).scale(&re(&a)))
                        .sub(&x(j, ni).scale(&re(&a)).scale(&sg))
                        .add(&x(nj, ni).scale(&re(&dc)).scale(&sg)),
                );
                // cX_{n+1−j,n+1−i} ± (1−c)X_ij ± AX_{i,n+1−j} + AX_{j,n+1−i}
                push(
                    format!("X{tag}({nj},{ni})"),
                    x(nj, ni),
                    x(nj, ni)
                        .scale(&re(&cc))
                        .add(&x(i, j).scale(&re(&dc)).scale(&sg))
                        .add(&x(i, nj).scale(&re(&a)).scale(&sg))
                        .add(&x(j, ni).scale(&re(&a))),
                );
            }
        }
        for i in 1..=m {
            let ni = flip(i);
            for p in 1..=n - 2 * m {
                let q = m + p;
                push(
                    format!("X{tag}({i},{q})"),
                    x(i, q),
                    x(i, q)
                        .scale(&re(&s))
                        .sub(&x(q, ni).scale(&re(&t)).scale(&sg)),
                );
                push(
                    format!("X{tag}({q},{ni})"),
                    x(q, ni),
                    x(q, ni)
                        .scale(&re(&s))
                        .add(&x(i, q).scale(&re(&t)).scale(&sg)),
                );
            }
        }
        for p in m + 1..=n - m {
            for q in p + 1..=n - m {
                push(format!("X{tag}({p},{q}) middle"), x(p, q), x(p, q));
            }
        }
    }
    for i in 1..=m {
        let ni = flip(i);
        push(format!("X-({i},{ni})"), xm(i, ni), xm(i, ni));
        push(
            format!("X+({i},{ni})"),
            xp(i, ni),
            xp(i, ni)
                .scale(&re(&two_c_minus_1))
                .add(&k_element::<S>(n, i).scale(&re(&a.add_ref(&a)))),
        );
    }
    Ok(out)
}

/// Every table identity at (n, m, c), reported as one claim.
pub fn check_conjugation_tables<S: Scalar>(
    c: &Rational,
    m: usize,
    n: usize,
    tol: f64,
) -> Result<CheckReport, LieError> {
    let started = Instant::now();
    let tables = conjugation_tables::<S>(c, m, n)?;
    let failing: Vec<&str> = tables
        .iter()
        .filter(|t| t.residual() > tol)
        .map(|t| t.formula.as_str())
        .collect();
    let res = max_residual(tables.iter().map(TableIdentity::residual));
    let mode = if S::EXACT { Mode::Exact } else { Mode::Float };
    let mut report = CheckReport::new("tables", mode, n).m_or_k(m).c(c);
    report.note(format!(
        "{} identities, {} failing",
        tables.len(),
        failing.len()
    ));
    for f in failing.iter().take(5) {
        report.note(f.to_string());
    }
    Ok(report.finish(res, tol, tables.len(), started))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{adjoint, Algebra, LieBasis};
    use crate::scalar::{RingElem, TowerScalar};

    type T = TowerScalar;

    #[test]
    fn c_one_is_identity() {
        let g = build_sigma::<T>(&Rational::one(), 1, 4, SigmaVariant::Canonical).unwrap();
        assert_eq!(g, CMatrix::identity(4));
    }

    #[test]
    fn n3_entries() {
        let c = Rational::new(1, 3);
        let g = build_sigma::<T>(&c, 1, 3, SigmaVariant::Canonical).unwrap();
        let (s, t) = T::sqrt_pair(&c).unwrap();
        assert_eq!(g.get(0, 0).re, s);
        assert_eq!(g.get(2, 2).re, s);
        assert_eq!(g.get(1, 1).re, T::one());
        assert_eq!(g.get(2, 0).re, t);
        assert_eq!(g.get(0, 2).re, t.neg_ref());
        assert!(g.get(1, 0).is_zero() && g.get(0, 1).is_zero());
    }

    #[test]
    fn unitary_with_unit_determinant() {
        for (n, m, c) in [
            (4, 2, Rational::new(1, 2)),
            (5, 2, Rational::new(1, 3)),
            (6, 3, Rational::new(2, 5)),
        ] {
            let g = build_sigma::<T>(&c, m, n, SigmaVariant::Canonical).unwrap();
            assert_eq!(g.mul(&g.adjoint()), CMatrix::identity(n));
            assert_eq!(g.det(), ComplexScalar::one());
            let v = build_sigma::<T>(&c, m, n, SigmaVariant::SignVariant).unwrap();
            assert_eq!(v, g.adjoint());
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(build_sigma::<f64>(&Rational::new(1, 3), 3, 5, SigmaVariant::Canonical).is_err());
        assert!(build_sigma::<f64>(&Rational::new(1, 3), 0, 5, SigmaVariant::Canonical).is_err());
        assert!(build_sigma::<f64>(&Rational::new(4, 3), 1, 5, SigmaVariant::Canonical).is_err());
    }

    #[test]
    fn adjoint_is_a_bracket_homomorphism_on_sigma() {
        for n in 2..=5 {
            let b = LieBasis::new(n, Algebra::U);
            let g = build_sigma::<T>(&Rational::new(2, 5), 1, n, SigmaVariant::Canonical).unwrap();
            for x in 0..b.dim() {
                for y in 0..b.dim() {
                    let ex = b.basis_matrix::<T>(x);
                    let ey = b.basis_matrix::<T>(y);
                    let lhs = adjoint(&g, &ex.commutator(&ey)).unwrap();
                    let rhs = adjoint(&g, &ex)
                        .unwrap()
                        .commutator(&adjoint(&g, &ey).unwrap());
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn tables_hold_for_small_case() {
        let rows = conjugation_tables::<T>(&Rational::new(1, 3), 2, 5).unwrap();
        let bad: Vec<_> = rows
            .iter()
            .filter(|r| r.residual() != 0.0)
            .map(|r| r.formula.clone())
            .collect();
        assert!(bad.is_empty(), "failing identities: {bad:?}");
    }
}
