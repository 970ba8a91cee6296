//! Bivector fields on U(n)/SU(n) in left-trivialized form and the identities they satisfy.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::Rng;

use crate::lie::sample::{haar_unitary, sample_rng, sample_subgroup_element};
use crate::lie::{to_float, Algebra, LieBasis, LieError};
use crate::linalg::{CMatrix, Subspace};
use crate::par::par_map;
use crate::report::{max_residual, CheckReport, Expect, Mode};
use crate::scalar::Scalar;
use crate::wedge::{ad2, cobracket, h_wedge_g, Wedge2, WedgeSubspace};

/// Closed-form bivector fields, evaluated as ρ̃(g) = L_g⁻¹ρ(g) ∈ ∧²g.
#[derive(Clone, Debug)]
pub enum BivectorField<S: Scalar> {
    /// π̃(g) = r − Ad_{g⁻¹} r.
    Multiplicative { r: Wedge2<S> },
    /// ρ̃(g) = π̃(g) + X₀.
    Affine { r: Wedge2<S>, x0: Wedge2<S> },
    /// π̃_σ(g) = Ad_{σ⁻¹}(basẽ(gσ⁻¹)), the field R_σ(base(·σ⁻¹)).
    Translated {
        base: Box<BivectorField<S>>,
        sigma: CMatrix<S>,
    },
}

impl<S: Scalar> BivectorField<S> {
    pub fn multiplicative(r: Wedge2<S>) -> Self {
        BivectorField::Multiplicative { r }
    }

    pub fn affine(r: Wedge2<S>, x0: Wedge2<S>) -> Self {
        BivectorField::Affine { r, x0 }
    }

    pub fn translated(base: BivectorField<S>, sigma: CMatrix<S>) -> Self {
        BivectorField::Translated {
            base: Box::new(base),
            sigma,
        }
    }

    /// The r-matrix the field is built from.
    pub fn r(&self) -> &Wedge2<S> {
        match self {
            BivectorField::Multiplicative { r } | BivectorField::Affine { r, .. } => r,
            BivectorField::Translated { base, .. } => base.r(),
        }
    }

    pub fn eval(&self, basis: &LieBasis, g: &CMatrix<S>) -> Result<Wedge2<S>, LieError> {
        if g.rows() != basis.n() || !g.is_square() {
            return Err(LieError::Dimension(format!(
                "{}x{} element for n={}",
                g.rows(),
                g.cols(),
                basis.n()
            )));
        }
        Ok(match self {
            BivectorField::Multiplicative { r } => r.sub(&ad2(basis, &g.adjoint(), r)),
            BivectorField::Affine { r, x0 } => r.sub(&ad2(basis, &g.adjoint(), r)).add(x0),
            BivectorField::Translated { base, sigma } => {
                let inner = base.eval(basis, &g.mul(&sigma.adjoint()))?;
                ad2(basis, &sigma.adjoint(), &inner)
            }
        })
    }

    pub fn at_identity(&self, basis: &LieBasis) -> Wedge2<S> {
        self.eval(basis, &CMatrix::identity(basis.n()))
            .expect("identity has the basis size")
    }

    /// (Dρ̃)_e(x). Every affine field built from r has the cobracket of r as its linear part.
    pub fn differential(&self, basis: &LieBasis, x: &[S]) -> Wedge2<S> {
        cobracket(basis, x, self.r())
    }

    pub fn to_float(&self) -> BivectorField<f64> {
        match self {
            BivectorField::Multiplicative { r } => {
                BivectorField::Multiplicative { r: r.to_float() }
            }
            BivectorField::Affine { r, x0 } => BivectorField::Affine {
                r: r.to_float(),
                x0: x0.to_float(),
            },
            BivectorField::Translated { base, sigma } => BivectorField::Translated {
                base: Box::new(base.to_float()),
                sigma: to_float(sigma),
            },
        }
    }

    pub fn label(&self) -> String {
        match self {
            BivectorField::Multiplicative { .. } => "multiplicative".into(),
            BivectorField::Affine { .. } => "affine".into(),
            BivectorField::Translated { base, .. } => format!("translated({})", base.label()),
        }
    }
}

fn rel(defect: &Wedge2<impl Scalar>, scale: f64) -> f64 {
    defect.max_abs() / scale.max(1.0)
}

/// ρ̃(gh) − Ad_{h⁻¹}ρ̃(g) − ρ̃(h).
pub fn multiplicative_defect<S: Scalar>(
    basis: &LieBasis,
    f: &BivectorField<S>,
    g: &CMatrix<S>,
    h: &CMatrix<S>,
) -> Result<Wedge2<S>, LieError> {
    let gh = f.eval(basis, &g.mul(h))?;
    let moved = ad2(basis, &h.adjoint(), &f.eval(basis, g)?);
    Ok(gh.sub(&moved).sub(&f.eval(basis, h)?))
}

/// ρ̃(gh) − Ad_{h⁻¹}ρ̃(g) − ρ̃(h) + Ad_{h⁻¹}ρ̃(e).
pub fn affine_defect<S: Scalar>(
    basis: &LieBasis,
    f: &BivectorField<S>,
    g: &CMatrix<S>,
    h: &CMatrix<S>,
) -> Result<Wedge2<S>, LieError> {
    let base = multiplicative_defect(basis, f, g, h)?;
    Ok(base.add(&ad2(basis, &h.adjoint(), &f.at_identity(basis))))
}

/// [ρ̃_σ(g) − ρ̃_σ(e)] − [ρ̃(g) − ρ̃(e)] where ρ_σ = R_σρ: the multiplicative part is σ-invariant.
pub fn lemma1_defect<S: Scalar>(
    basis: &LieBasis,
    f: &BivectorField<S>,
    sigma: &CMatrix<S>,
    g: &CMatrix<S>,
) -> Result<Wedge2<S>, LieError> {
    let t = BivectorField::translated(f.clone(), sigma.clone());
    let lhs = t.eval(basis, g)?.sub(&t.at_identity(basis));
    let rhs = f.eval(basis, g)?.sub(&f.at_identity(basis));
    Ok(lhs.sub(&rhs))
}

fn is_special(basis: &LieBasis) -> bool {
    basis.algebra() == Algebra::Su
}

/// Float version of a field and its sampled residuals over pairs (g, h) of Haar samples.
fn sampled_pairs(
    basis: &LieBasis,
    samples: usize,
    seed: u64,
    eval: impl Fn(&CMatrix<f64>, &CMatrix<f64>) -> f64 + Sync + Send,
) -> f64 {
    let special = is_special(basis);
    let n = basis.n();
    max_residual(par_map(samples, |i| {
        let mut rng = sample_rng(seed, i as u64);
        let g = haar_unitary(n, &mut rng, special);
        let h = haar_unitary(n, &mut rng, special);
        eval(&g, &h)
    }))
}

fn field_report(claim: &str, basis: &LieBasis, f: &BivectorField<f64>) -> CheckReport {
    let mut report = CheckReport::new(claim, Mode::Float, basis.n());
    report.note(format!("field: {}", f.label()));
    report
}

pub fn check_multiplicative(
    basis: &LieBasis,
    f: &BivectorField<f64>,
    samples: usize,
    seed: u64,
    tol: f64,
) -> CheckReport {
    let started = Instant::now();
    let res = sampled_pairs(basis, samples, seed, |g, h| {
        let d = multiplicative_defect(basis, f, g, h).expect("sampled sizes match");
        rel(&d, 1.0)
    });
    field_report("multiplicative", basis, f).finish(res, tol, samples, started)
}

pub fn check_affine(
    basis: &LieBasis,
    f: &BivectorField<f64>,
    samples: usize,
    seed: u64,
    tol: f64,
) -> CheckReport {
    let started = Instant::now();
    let res = sampled_pairs(basis, samples, seed, |g, h| {
        let d = affine_defect(basis, f, g, h).expect("sampled sizes match");
        rel(&d, 1.0)
    });
    field_report("affine", basis, f).finish(res, tol, samples, started)
}

pub fn check_lemma1_invariant(
    basis: &LieBasis,
    f: &BivectorField<f64>,
    sigma: &CMatrix<f64>,
    samples: usize,
    seed: u64,
    tol: f64,
) -> CheckReport {
    let started = Instant::now();
    let res = sampled_pairs(basis, samples, seed, |g, _| {
        rel(
            &lemma1_defect(basis, f, sigma, g).expect("sampled sizes match"),
            1.0,
        )
    });
    field_report("lemma1-invariant", basis, f).finish(res, tol, samples, started)
}

/// Exact spot check of the lemma at the given points (e.g. products of σ powers).
pub fn check_lemma1_exact<S: Scalar>(
    basis: &LieBasis,
    f: &BivectorField<S>,
    sigma: &CMatrix<S>,
    points: &[CMatrix<S>],
) -> CheckReport {
    let started = Instant::now();
    let res = max_residual(points.iter().map(|g| {
        let d = lemma1_defect(basis, f, sigma, g).expect("points match the basis");
        if d.is_zero() {
            0.0
        } else {
            d.max_abs().max(f64::MIN_POSITIVE)
        }
    }));
    let mode = if S::EXACT { Mode::Exact } else { Mode::Float };
    CheckReport::new("lemma1-invariant-exact", mode, basis.n()).finish(
        res,
        1e-12,
        points.len(),
        started,
    )
}

/// A translate of an affine field that vanishes at σ is multiplicative: R_{σ⁻¹}ρ is Poisson-Lie.
/// Built from ρ = AFFINE(r, Ad_{σ⁻¹}r − r), which vanishes at σ.
pub fn check_proposition2(
    basis: &LieBasis,
    sigma: &CMatrix<f64>,
    samples: usize,
    seed: u64,
    tol: f64,
) -> CheckReport {
    let started = Instant::now();
    let r = crate::wedge::build_r::<f64>(basis);
    let x0 = ad2(basis, &sigma.adjoint(), &r).sub(&r);
    let rho = BivectorField::affine(r, x0);
    let at_sigma = rho
        .eval(basis, sigma)
        .expect("σ matches the basis")
        .max_abs();
    let t = BivectorField::translated(rho, sigma.adjoint());
    let mult = check_multiplicative(basis, &t, samples, seed, tol);
    let mut report = CheckReport::new("proposition2", Mode::Float, basis.n());
    report.note(format!("|rho(sigma)| = {at_sigma:.3e}"));
    report.finish(at_sigma.max(mult.max_residual), tol, samples, started)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Condition {
    C1,
    C2,
    C3,
    C4,
    C5,
}

impl Condition {
    pub const ALL: [Condition; 5] = [
        Condition::C1,
        Condition::C2,
        Condition::C3,
        Condition::C4,
        Condition::C5,
    ];
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let i = match self {
            Condition::C1 => 1,
            Condition::C2 => 2,
            Condition::C3 => 3,
            Condition::C4 => 4,
            Condition::C5 => 5,
        };
        write!(f, "c{i}")
    }
}

impl FromStr for Condition {
    type Err = LieError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "c1" | "1" => Ok(Condition::C1),
            "c2" | "2" => Ok(Condition::C2),
            "c3" | "3" => Ok(Condition::C3),
            "c4" | "4" => Ok(Condition::C4),
            "c5" | "5" => Ok(Condition::C5),
            other => Err(LieError::OutOfRange(format!(
                "unknown coisotropy condition {other:?}"
            ))),
        }
    }
}

/// Algebraic condition c4: the largest membership residual of δ(x) + ad_x ρ̃(e) over a basis of h.
pub fn c4_residual<S: Scalar>(basis: &LieBasis, f: &BivectorField<S>, h: &Subspace<S>) -> f64 {
    let hw = h_wedge_g(h);
    let rho_e = f.at_identity(basis);
    max_residual(h.basis().iter().map(|x| {
        let v = f
            .differential(basis, x)
            .add(&rho_e.derivation(&basis.ad_matrix(x)));
        hw.residual(&v)
    }))
}

/// Residual of one sampled instance of c1, c2, c3 or c5.
fn group_condition_residual(
    basis: &LieBasis,
    f: &BivectorField<f64>,
    hw: &WedgeSubspace<f64>,
    cond: Condition,
    g: &CMatrix<f64>,
    k: &CMatrix<f64>,
    h: &CMatrix<f64>,
) -> f64 {
    let ev = |x: &CMatrix<f64>| f.eval(basis, x).expect("sampled sizes match");
    let v = match cond {
        Condition::C1 => ev(h),
        Condition::C2 => ev(h).sub(&ad2(basis, &h.adjoint(), &f.at_identity(basis))),
        Condition::C3 => ev(&k.mul(h)).sub(&ad2(basis, &h.adjoint(), &ev(k))),
        Condition::C5 => ev(&g.mul(h)).sub(&ad2(basis, &h.adjoint(), &ev(g))),
        Condition::C4 => unreachable!("c4 is algebraic"),
    };
    hw.residual(&v)
}

/// Sampled residual of a group-level coisotropy condition. Index 0 uses identity fixtures.
pub fn sampled_condition_residual(
    basis: &LieBasis,
    f: &BivectorField<f64>,
    h: &Subspace<f64>,
    cond: Condition,
    samples: usize,
    seed: u64,
) -> f64 {
    let hw = h_wedge_g(h);
    let n = basis.n();
    let special = is_special(basis);
    max_residual(par_map(samples, |i| {
        let mut rng = sample_rng(seed, i as u64);
        let (g, k, hh) = if i == 0 {
            let e = CMatrix::identity(n);
            (haar_unitary(n, &mut rng, special), e.clone(), e)
        } else {
            let g = haar_unitary(n, &mut rng, special);
            let k = sample_subgroup_element(basis, h, &mut rng);
            let hh = sample_subgroup_element(basis, h, &mut rng);
            (g, k, hh)
        };
        group_condition_residual(basis, f, &hw, cond, &g, &k, &hh)
    }))
}

/// Coisotropy condition report. c4 runs in the ring of `f`; the others sample in float mode.
pub fn check_coisotropy<S: Scalar>(
    basis: &LieBasis,
    f: &BivectorField<S>,
    h: &Subspace<S>,
    cond: Condition,
    samples: usize,
    seed: u64,
    tol: f64,
) -> CheckReport {
    let started = Instant::now();
    let (res, mode, count) = match cond {
        Condition::C4 => {
            let mode = if S::EXACT { Mode::Exact } else { Mode::Float };
            (c4_residual(basis, f, h), mode, h.dim())
        }
        _ => {
            let ff = f.to_float();
            let hf = h.to_float();
            (
                sampled_condition_residual(basis, &ff, &hf, cond, samples, seed),
                Mode::Float,
                samples,
            )
        }
    };
    let mut report = CheckReport::new(format!("coisotropy-{cond}"), mode, basis.n());
    report.note(format!("field: {}, dim h = {}", f.label(), h.dim()));
    report.finish(res, tol, count, started)
}

/// Whether ad_x ρ̃(e) ∈ h∧g for every x in h, and whether ρ̃(e) ∈ h∧g itself.
pub fn c1_c2_preconditions<S: Scalar>(
    basis: &LieBasis,
    f: &BivectorField<S>,
    h: &Subspace<S>,
) -> (bool, bool) {
    let hw = h_wedge_g(h);
    let rho_e = f.at_identity(basis);
    let ad_ok = h
        .basis()
        .iter()
        .all(|x| hw.contains(&rho_e.derivation(&basis.ad_matrix(x))));
    (ad_ok, hw.contains(&rho_e))
}

/// Bracket closure of a subspace of g.
pub fn is_subalgebra<S: Scalar>(basis: &LieBasis, h: &Subspace<S>) -> bool {
    let b = h.basis();
    (0..b.len()).all(|i| (i + 1..b.len()).all(|j| h.contains(&basis.bracket_coords(&b[i], &b[j]))))
}

/// Both sides of the Theorem 3 equivalence for one (h, σ) scenario.
#[derive(Debug, Clone)]
pub struct Theorem3Outcome {
    /// Sampled residual of (*) for Ad_σH under π.
    pub star: f64,
    /// Sampled residual of (**) for H under π_σ.
    pub twisted: f64,
    pub star_holds: bool,
    pub twisted_holds: bool,
    /// max |Ad_{σ⁻¹}(*)(gσ⁻¹, σhσ⁻¹) − (**)(g, h)| on matched samples.
    pub transport: f64,
}

impl Theorem3Outcome {
    pub fn agree(&self) -> bool {
        self.star_holds == self.twisted_holds
    }
}

/// (*) and (**) at independent samples, plus the matched-sample transport identity between them.
pub fn theorem3_outcome(
    basis: &LieBasis,
    h: &Subspace<f64>,
    sigma: &CMatrix<f64>,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Theorem3Outcome {
    let n = basis.n();
    let special = is_special(basis);
    let r = crate::wedge::build_r::<f64>(basis);
    let pi = BivectorField::multiplicative(r);
    let pi_sigma = BivectorField::translated(pi.clone(), sigma.clone());
    let h_conj = h.map(&basis.big_ad_matrix(sigma));
    let hw = h_wedge_g(h);
    let hw_conj = h_wedge_g(&h_conj);
    let si = sigma.adjoint();

    let star_expr = |g: &CMatrix<f64>, hh: &CMatrix<f64>| {
        let a = pi.eval(basis, &g.mul(hh)).expect("sizes");
        a.sub(&ad2(
            basis,
            &hh.adjoint(),
            &pi.eval(basis, g).expect("sizes"),
        ))
    };
    let twisted_expr = |g: &CMatrix<f64>, hh: &CMatrix<f64>| {
        let a = pi_sigma.eval(basis, &g.mul(hh)).expect("sizes");
        a.sub(&ad2(
            basis,
            &hh.adjoint(),
            &pi_sigma.eval(basis, g).expect("sizes"),
        ))
    };
    let draws = par_map(samples, |i| {
        let mut rng = sample_rng(seed, i as u64);
        let g1 = haar_unitary(n, &mut rng, special);
        let h1 = sample_subgroup_element(basis, h, &mut rng);
        let g2 = haar_unitary(n, &mut rng, special);
        let h2 = sample_subgroup_element(basis, h, &mut rng);
        let star = hw_conj.residual(&star_expr(&g1, &sigma.mul(&h1).mul(&si)));
        let tw_val = twisted_expr(&g2, &h2);
        let twisted = hw.residual(&tw_val);
        let matched = ad2(
            basis,
            &si,
            &star_expr(&g2.mul(&si), &sigma.mul(&h2).mul(&si)),
        );
        let transport = matched.sub(&tw_val).max_abs();
        (star, twisted, transport)
    });
    let star = max_residual(draws.iter().map(|d| d.0));
    let twisted = max_residual(draws.iter().map(|d| d.1));
    let transport = max_residual(draws.iter().map(|d| d.2));
    Theorem3Outcome {
        star,
        twisted,
        star_holds: star <= tol,
        twisted_holds: twisted <= tol,
        transport,
    }
}

pub fn check_theorem3(
    basis: &LieBasis,
    h: &Subspace<f64>,
    sigma: &CMatrix<f64>,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<(CheckReport, Theorem3Outcome), LieError> {
    let started = Instant::now();
    if !is_subalgebra(basis, h) {
        return Err(LieError::OutOfRange(
            "h is not closed under the bracket".into(),
        ));
    }
    let out = theorem3_outcome(basis, h, sigma, samples, seed, tol);
    let mut report = CheckReport::new("theorem3", Mode::Float, basis.n());
    report.note(format!(
        "(*) residual {:.3e} holds={}, (**) residual {:.3e} holds={}, transport {:.3e}",
        out.star, out.star_holds, out.twisted, out.twisted_holds, out.transport
    ));
    let ok = out.agree() && out.transport <= tol;
    Ok((report.finish_bool(ok, samples, started), out))
}

/// Random group element for scenario construction.
pub fn random_group_element(n: usize, special: bool, rng: &mut impl Rng) -> CMatrix<f64> {
    haar_unitary(n, rng, special)
}

/// Negative-control wrapper: same report, expected to break.
pub fn expect_failure(mut report: CheckReport) -> CheckReport {
    report.expect = Expect::Fails;
    report.pass = !report.holds;
    report
}
