//! Claim families over (n, m/k, l, c) grids, run as independent jobs and merged by claim id.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::double::{check_hperp_generators, lagrangian_outcome};
use crate::homogeneous::{
    bruhat_leq, check_bruhat_closure, check_covariance, check_dimension_claims,
    check_intersection_blocks, check_leaf_equation, check_poisson_diffeo, check_standard_images,
    check_symmetry_conjugate, check_symmetry_lemma, check_torus_leaves, check_well_defined,
    torus_intersection_dim, HomogeneousError,
};
use crate::lie::sample::{block_diagonal_unitary, haar_unitary, sample_rng, torus_element};
use crate::lie::sigma::check_conjugation_tables;
use crate::lie::{
    build_block_subalgebra, build_sigma, Algebra, BlockVariant, LieBasis, LieError, SigmaVariant,
};
use crate::linalg::{CMatrix, Subspace};
use crate::par::par_map_items;
use crate::poisson::{
    c1_c2_preconditions, check_affine, check_coisotropy, check_lemma1_invariant,
    check_multiplicative, check_proposition2, check_theorem3, expect_failure, BivectorField,
    Condition,
};
use crate::report::{CheckReport, Expect, Mode, Tolerances};
use crate::scalar::{Rational, Scalar, TowerScalar};
use crate::wedge::{
    ad2, build_r, check_affine_poisson_cocycle, check_cybe, check_main_proposition, Wedge2,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Claim {
    Proposition,
    Tables,
    Cybe,
    Affine,
    Theorem3,
    Coisotropy,
    Lagrangian,
    Hperp,
    Symmetry,
    Dimensions,
    Diffeo,
    Covariance,
    Leaves,
    Schubert,
}

impl Claim {
    pub const ALL: [Claim; 14] = [
        Claim::Proposition,
        Claim::Tables,
        Claim::Cybe,
        Claim::Affine,
        Claim::Theorem3,
        Claim::Coisotropy,
        Claim::Lagrangian,
        Claim::Hperp,
        Claim::Symmetry,
        Claim::Dimensions,
        Claim::Diffeo,
        Claim::Covariance,
        Claim::Leaves,
        Claim::Schubert,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Claim::Proposition => "proposition",
            Claim::Tables => "tables",
            Claim::Cybe => "cybe",
            Claim::Affine => "affine",
            Claim::Theorem3 => "theorem3",
            Claim::Coisotropy => "coisotropy",
            Claim::Lagrangian => "lagrangian",
            Claim::Hperp => "hperp",
            Claim::Symmetry => "symmetry",
            Claim::Dimensions => "dimensions",
            Claim::Diffeo => "diffeo",
            Claim::Covariance => "covariance",
            Claim::Leaves => "leaves",
            Claim::Schubert => "schubert",
        }
    }

    /// Sample count used when the configuration does not fix one.
    pub fn default_samples(self) -> usize {
        match self {
            Claim::Affine | Claim::Leaves => 100,
            Claim::Theorem3 | Claim::Schubert => 50,
            Claim::Diffeo | Claim::Coisotropy => 30,
            Claim::Covariance | Claim::Lagrangian => 20,
            _ => 1,
        }
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Claim {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Claim::ALL
            .into_iter()
            .find(|c| c.name() == s.trim().to_ascii_lowercase())
            .ok_or_else(|| format!("unknown claim {s:?}"))
    }
}

pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub claims: Vec<Claim>,
    pub n: Vec<usize>,
    /// Fixes m (or k) instead of ranging over 1..=n/2.
    pub m: Option<usize>,
    /// Fixes l instead of ranging over 1..n.
    pub l: Option<usize>,
    pub c: Vec<Rational>,
    /// Ring for the claims that can run either way.
    pub mode: Mode,
    /// Overrides every per-claim default sample count.
    pub samples: Option<usize>,
    pub seed: u64,
    pub tolerances: Tolerances,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            claims: Claim::ALL.to_vec(),
            n: vec![3, 4, 5],
            m: None,
            l: None,
            c: vec![
                Rational::new(1, 3),
                Rational::new(1, 2),
                Rational::new(2, 5),
            ],
            mode: Mode::Exact,
            samples: None,
            seed: DEFAULT_SEED,
            tolerances: Tolerances::default(),
        }
    }
}

impl SuiteConfig {
    fn samples(&self, claim: Claim) -> usize {
        self.samples.unwrap_or_else(|| claim.default_samples())
    }

    fn ms(&self, n: usize) -> Vec<usize> {
        match self.m {
            Some(m) => vec![m],
            None => (1..=n / 2).collect(),
        }
    }

    fn ls(&self, n: usize) -> Vec<usize> {
        match self.l {
            Some(l) => vec![l],
            None => (1..n).collect(),
        }
    }

    /// Hex digest of the canonical JSON form of the configuration.
    pub fn run_id(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("config serializes");
        Sha256::digest(&bytes)
            .iter()
            .take(8)
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub run_id: String,
    pub config: SuiteConfig,
    pub claims: Vec<CheckReport>,
    pub summary: Summary,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub skipped: Vec<String>,
}

impl RunReport {
    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn without_timing(&self) -> RunReport {
        RunReport {
            claims: self
                .claims
                .iter()
                .map(CheckReport::without_timing)
                .collect(),
            ..self.clone()
        }
    }

    pub fn to_markdown(&self) -> String {
        let mut out = format!(
            "# Verification run {}\n\npassed {}, failed {}, skipped {}\n\n| id | mode | residual | tolerance | expect | pass | ms |\n|---|---|---|---|---|---|---|\n",
            self.run_id, self.summary.passed, self.summary.failed, self.summary.skipped
        );
        for r in &self.claims {
            let mode = match r.mode {
                Mode::Exact => "exact",
                Mode::Float => "float",
            };
            let expect = match r.expect {
                Expect::Holds => "holds",
                Expect::Fails => "fails",
            };
            out.push_str(&format!(
                "| {} | {} | {:.3e} | {:.1e} | {} | {} | {} |\n",
                r.id,
                mode,
                r.max_residual,
                r.tolerance,
                expect,
                if r.pass { "yes" } else { "NO" },
                r.millis
            ));
        }
        let noted: Vec<&CheckReport> = self.claims.iter().filter(|r| !r.notes.is_empty()).collect();
        if !noted.is_empty() {
            out.push_str("\n## Notes\n\n");
            for r in noted {
                for note in &r.notes {
                    out.push_str(&format!("- `{}`: {}\n", r.id, note));
                }
            }
        }
        if !self.skipped.is_empty() {
            out.push_str("\n## Skipped\n\n");
            for s in &self.skipped {
                out.push_str(&format!("- {s}\n"));
            }
        }
        out
    }
}

#[derive(Debug, thiserror::Error)]
enum JobError {
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Homogeneous(#[from] HomogeneousError),
    #[error(transparent)]
    Scalar(#[from] crate::scalar::ScalarError),
}

type JobResult = Result<Vec<CheckReport>, JobError>;

/// One grid point of one claim family.
struct Job {
    prefix: String,
    n: usize,
    run: Box<dyn Fn() -> JobResult + Send + Sync>,
}

fn point_id(
    claim: Claim,
    n: usize,
    m: Option<usize>,
    l: Option<usize>,
    c: Option<&Rational>,
) -> String {
    let mut s = format!("{claim}/n={n}");
    if let Some(m) = m {
        s.push_str(&format!("/m={m}"));
    }
    if let Some(l) = l {
        s.push_str(&format!("/l={l}"));
    }
    if let Some(c) = c {
        s.push_str(&format!("/c={c}"));
    }
    s
}

fn tol_for(mode: Mode, tol: f64) -> f64 {
    if mode == Mode::Exact {
        0.0
    } else {
        tol
    }
}

fn block(basis: &LieBasis, size: usize) -> Result<Subspace<TowerScalar>, LieError> {
    build_block_subalgebra::<TowerScalar>(basis, size, BlockVariant::SuBlock)
}

fn sigma_t(c: &Rational, m: usize, n: usize) -> Result<CMatrix<TowerScalar>, LieError> {
    build_sigma::<TowerScalar>(c, m, n, SigmaVariant::Canonical)
}

fn sigma_f(c: &Rational, m: usize, n: usize) -> Result<CMatrix<f64>, LieError> {
    build_sigma::<f64>(c, m, n, SigmaVariant::Canonical)
}

fn to_float_matrix<S: Scalar>(m: &CMatrix<S>) -> CMatrix<f64> {
    crate::lie::to_float(m)
}

fn run_proposition(n: usize, m: usize, c: &Rational, mode: Mode, tol: f64) -> JobResult {
    Ok(vec![match mode {
        Mode::Exact => check_main_proposition::<TowerScalar>(n, m, c, 0.0)?,
        Mode::Float => check_main_proposition::<f64>(n, m, c, tol)?,
    }])
}

fn run_tables(n: usize, m: usize, c: &Rational, mode: Mode, tol: f64) -> JobResult {
    Ok(vec![match mode {
        Mode::Exact => check_conjugation_tables::<TowerScalar>(c, m, n, 0.0)?,
        Mode::Float => check_conjugation_tables::<f64>(c, m, n, tol)?,
    }])
}

fn run_cybe(n: usize, mode: Mode, tol: f64) -> JobResult {
    let basis = LieBasis::new(n, Algebra::Su);
    Ok(vec![match mode {
        Mode::Exact => check_cybe::<Rational>(&basis, 0.0),
        Mode::Float => check_cybe::<f64>(&basis, tol),
    }])
}

fn run_affine(n: usize, c: &Rational, samples: usize, seed: u64, tol: f64) -> JobResult {
    let basis = LieBasis::new(n, Algebra::Su);
    let sigma = sigma_f(c, 1, n)?;
    let r = build_r::<f64>(&basis);
    let pi = BivectorField::multiplicative(r.clone());
    let x0 = ad2(&basis, &sigma.adjoint(), &r).sub(&r);
    let affine = BivectorField::affine(r, x0);
    let translated = BivectorField::translated(pi.clone(), sigma.clone());
    let mut out = vec![
        check_multiplicative(&basis, &pi, samples, seed, tol),
        check_affine(&basis, &affine, samples, seed, tol).with_id("affine"),
        check_affine(&basis, &translated, samples, seed, tol).with_id("translated"),
        check_lemma1_invariant(&basis, &affine, &sigma, samples, seed, tol),
        check_proposition2(&basis, &sigma, samples, seed, tol),
    ];
    let rt = build_r::<TowerScalar>(&basis);
    let st = sigma_t(c, 1, n)?;
    let xt = ad2(&basis, &st.adjoint(), &rt).sub(&rt);
    out.push(check_affine_poisson_cocycle(&basis, &xt, &rt, 0.0));
    let mut generic = Wedge2::<TowerScalar>::zero(basis.dim());
    generic.add_term(0, 1, &TowerScalar::rational(Rational::one()));
    let control = expect_failure(check_affine_poisson_cocycle(&basis, &generic, &rt, 0.0));
    out.push(control.with_id("affine-cocycle-generic"));
    Ok(out)
}

/// Scenario i of the Theorem 3 batch: (h, σ, label).
fn theorem3_scenario(
    basis: &LieBasis,
    cs: &[Rational],
    i: usize,
    seed: u64,
) -> Result<(Subspace<f64>, CMatrix<f64>, &'static str), LieError> {
    let n = basis.n();
    let mut rng = sample_rng(seed ^ 0x7433, i as u64);
    let m = 1 + (i / 5) % (n / 2);
    let c = &cs[(i / 5) % cs.len()];
    let blockf = |size: usize| build_block_subalgebra::<f64>(basis, size, BlockVariant::SuBlock);
    Ok(match i % 5 {
        0 => (blockf(n - m)?, sigma_f(c, m, n)?, "twist conjugate"),
        1 => (
            blockf(n - m)?,
            haar_unitary(n, &mut rng, true),
            "random sigma",
        ),
        2 => (basis.torus(), torus_element(n, &mut rng, true), "torus"),
        3 => (
            blockf(n - 1)?,
            haar_unitary(n, &mut rng, true),
            "random sigma",
        ),
        _ => {
            let l = 1 + rng.random_range(0..n - 1);
            (
                blockf(l)?,
                block_diagonal_unitary(&[l, n - l], &mut rng, true),
                "sigma inside H",
            )
        }
    })
}

fn run_theorem3(n: usize, cs: &[Rational], scenarios: usize, seed: u64, tol: f64) -> JobResult {
    let started = Instant::now();
    let basis = LieBasis::new(n, Algebra::Su);
    let mut agree = 0;
    let (mut positive, mut negative) = (0, 0);
    let mut transport: f64 = 0.0;
    let mut disagreements = Vec::new();
    for i in 0..scenarios {
        let (h, sigma, label) = theorem3_scenario(&basis, cs, i, seed)?;
        let (_, out) = check_theorem3(&basis, &h, &sigma, 4, seed.wrapping_add(i as u64), tol)?;
        transport = transport.max(out.transport);
        if out.agree() {
            agree += 1;
        } else {
            disagreements.push(format!("scenario {i} ({label})"));
        }
        if out.twisted_holds {
            positive += 1;
        } else {
            negative += 1;
        }
    }
    let mut report = CheckReport::new("theorem3", Mode::Float, n);
    report.note(format!(
        "{agree}/{scenarios} verdicts agree; {positive} coisotropic, {negative} not"
    ));
    report.note(format!("matched transport residual {transport:.3e}"));
    for d in disagreements.iter().take(5) {
        report.note(d.clone());
    }
    let ok = agree == scenarios && transport <= tol && positive > 0 && negative > 0;
    Ok(vec![report.finish_bool(ok, scenarios, started)])
}

fn run_coisotropy(
    n: usize,
    m: usize,
    c: &Rational,
    samples: usize,
    seed: u64,
    tol: Tolerances,
) -> JobResult {
    let basis = LieBasis::new(n, Algebra::Su);
    let h = block(&basis, n - m)?;
    let sigma = sigma_t(c, m, n)?;
    let pi = BivectorField::multiplicative(build_r::<TowerScalar>(&basis));
    let pi_sigma = BivectorField::translated(pi.clone(), sigma.clone());
    let h_sigma = h.map(&basis.big_ad_matrix(&sigma));
    let mut out = Vec::new();
    for (tag, field, sub) in [("conjugate", &pi, &h_sigma), ("twisted", &pi_sigma, &h)] {
        let (_, contains) = c1_c2_preconditions(&basis, field, sub);
        for cond in Condition::ALL {
            let report = check_coisotropy(&basis, field, sub, cond, samples, seed, tol.group);
            let report = report.with_id(format!("{tag}-{cond}"));
            // c1 also asks ρ̃(e) ∈ h∧g, which the twisted field does not satisfy for c < 1.
            let report = if cond == Condition::C1 && !contains {
                let mut r = expect_failure(report);
                r.note("ρ̃(e) ∉ h∧g, so c1 cannot hold at the identity");
                r
            } else {
                report
            };
            out.push(report);
        }
    }
    let g = haar_unitary(n, &mut sample_rng(seed ^ 0xc015, 0), true);
    let hf = h.to_float().map(&basis.big_ad_matrix(&g));
    let control = check_coisotropy(
        &basis,
        &pi.to_float(),
        &hf,
        Condition::C4,
        1,
        seed,
        tol.algebra,
    );
    out.push(expect_failure(control).with_id("random-conjugate-c4"));
    Ok(out)
}

/// The su(2) torus with ρ̃(e) = r: ad_h r = 0 on the torus, c2 holds and c1 does not.
fn run_c1_c2_gap(samples: usize, seed: u64, tol: f64) -> JobResult {
    let started = Instant::now();
    let basis = LieBasis::new(2, Algebra::Su);
    let r = build_r::<f64>(&basis);
    let rho = BivectorField::affine(r.clone(), r);
    let t = basis.torus::<f64>();
    let (ad_ok, contains) = c1_c2_preconditions(&basis, &rho, &t);
    let c1 = check_coisotropy(&basis, &rho, &t, Condition::C1, samples, seed, tol);
    let c2 = check_coisotropy(&basis, &rho, &t, Condition::C2, samples, seed, tol);
    let mut report = CheckReport::new("c1-c2-gap", Mode::Float, 2);
    report.note(format!(
        "ad_h ρ̃(e) ∈ h∧g: {ad_ok}; ρ̃(e) ∈ h∧g: {contains}; c1 residual {:.3e}; c2 residual {:.3e}",
        c1.max_residual, c2.max_residual
    ));
    let ok = ad_ok && !contains && c2.holds && !c1.holds;
    Ok(vec![report.finish_bool(ok, samples, started)])
}

fn run_lagrangian(n: usize, m: usize, c: &Rational, mode: Mode, tol: f64) -> JobResult {
    let started = Instant::now();
    let basis = LieBasis::new(n, Algebra::Su);
    let out = match mode {
        Mode::Exact => {
            lagrangian_outcome::<TowerScalar>(&basis, &block(&basis, n - m)?, &sigma_t(c, m, n)?)?
        }
        Mode::Float => lagrangian_outcome::<f64>(
            &basis,
            &build_block_subalgebra::<f64>(&basis, n - m, BlockVariant::SuBlock)?,
            &sigma_f(c, m, n)?,
        )?,
    };
    let mut report = CheckReport::new("lagrangian", mode, n).m_or_k(m).c(c);
    report.note(format!(
        "dim {} (expected {}), isotropy {:.3e}, closure {:.3e}, equals action construction: {}",
        out.dim, out.expected_dim, out.isotropy, out.closure, out.matches_action
    ));
    let res = if out.dim == out.expected_dim && out.matches_action {
        out.isotropy.max(out.closure)
    } else {
        f64::INFINITY
    };
    Ok(vec![report.finish(res, tol_for(mode, tol), 1, started)])
}

fn run_hperp(n: usize, m: usize, c: &Rational, mode: Mode) -> JobResult {
    let basis = LieBasis::new(n, Algebra::Su);
    let report = match mode {
        Mode::Exact => {
            check_hperp_generators(&basis, &block(&basis, n - m)?, &sigma_t(c, m, n)?, m, c)?.0
        }
        Mode::Float => {
            let h = build_block_subalgebra::<f64>(&basis, n - m, BlockVariant::SuBlock)?;
            check_hperp_generators(&basis, &h, &sigma_f(c, m, n)?, m, c)?.0
        }
    };
    Ok(vec![report])
}

fn run_dimensions(n: usize, k: usize, l: usize, c: &Rational) -> JobResult {
    let mut out = vec![check_dimension_claims(n, k, l, c)?];
    if k < l && l < n - k {
        out.push(check_intersection_blocks(n, k, l, c)?);
    }
    Ok(out)
}

/// Torus part of the twisted block: exact dimension against a float rank computed independently.
fn run_torus_intersection(n: usize, k: usize, c: &Rational, tol: f64) -> JobResult {
    let started = Instant::now();
    let exact = torus_intersection_dim(n, k, c)?;
    let basis = LieBasis::new(n, Algebra::Su);
    let kk = build_block_subalgebra::<f64>(&basis, k, BlockVariant::SuBlock)?;
    let twisted = kk.map(&basis.big_ad_matrix(&to_float_matrix(&sigma_t(c, k, n)?)));
    let float = basis.torus::<f64>().intersect(&twisted).dim();
    let mut report = CheckReport::new("torus-intersection", Mode::Exact, n)
        .m_or_k(k)
        .c(c);
    report.note(format!(
        "dim t ∩ Ad_σ k_k = {exact} (float {float}); torus rank {}",
        n - 1
    ));
    let _ = tol;
    Ok(vec![report.finish_bool(exact == float, 1, started)])
}

fn other_c(c: &Rational) -> Rational {
    &(c + &Rational::one()) / &Rational::from_integer(2)
}

fn run_diffeo(
    n: usize,
    k: usize,
    c: &Rational,
    samples: usize,
    seed: u64,
    tol: Tolerances,
) -> JobResult {
    let basis = LieBasis::new(n, Algebra::Su);
    let mismatched = check_poisson_diffeo(
        &basis,
        k,
        c,
        Some(&other_c(c)),
        samples.min(10),
        seed,
        tol.group,
    )?;
    Ok(vec![
        check_poisson_diffeo(&basis, k, c, None, samples, seed, tol.group)?,
        expect_failure(mismatched),
        check_well_defined(&basis, k, c, samples, seed, tol.group, tol.rank)?,
    ])
}

fn run_covariance(
    n: usize,
    k: usize,
    c: &Rational,
    samples: usize,
    seed: u64,
    tol: f64,
) -> JobResult {
    let basis = LieBasis::new(n, Algebra::Su);
    Ok(vec![
        check_covariance(&basis, k, c, false, samples, seed, tol)?,
        expect_failure(check_covariance(
            &basis,
            k,
            c,
            true,
            samples.min(10),
            seed,
            tol,
        )?),
    ])
}

fn run_schubert_images(n: usize, k: usize, l: usize, samples: usize, seed: u64) -> JobResult {
    Ok(vec![check_standard_images(n, k, l, samples, seed)?])
}

fn plan(config: &SuiteConfig) -> (Vec<Job>, Vec<String>) {
    let mut jobs: Vec<Job> = Vec::new();
    let mut skipped = Vec::new();
    let seed = config.seed;
    let tol = config.tolerances;
    let mode = config.mode;
    macro_rules! job {
        ($claim:expr, $n:expr, $m:expr, $l:expr, $c:expr, $body:expr) => {{
            let prefix = point_id($claim, $n, $m, $l, $c);
            jobs.push(Job {
                prefix,
                n: $n,
                run: Box::new($body),
            });
        }};
    }
    for &claim in &config.claims {
        let samples = config.samples(claim);
        for &n in &config.n {
            let ms: Vec<usize> = config
                .ms(n)
                .into_iter()
                .filter(|&m| m >= 1 && 2 * m <= n)
                .collect();
            if ms.is_empty()
                && !matches!(
                    claim,
                    Claim::Cybe | Claim::Affine | Claim::Theorem3 | Claim::Leaves
                )
            {
                skipped.push(format!("{claim}/n={n}: no admissible m/k"));
            }
            let ls: Vec<usize> = config
                .ls(n)
                .into_iter()
                .filter(|l| (1..n).contains(l))
                .collect();
            match claim {
                Claim::Proposition
                | Claim::Tables
                | Claim::Coisotropy
                | Claim::Lagrangian
                | Claim::Hperp => {
                    for &m in &ms {
                        for c in &config.c {
                            let c = c.clone();
                            let cc = c.clone();
                            match claim {
                                Claim::Proposition => {
                                    job!(claim, n, Some(m), None, Some(&cc), move || {
                                        run_proposition(n, m, &c, mode, tol.algebra)
                                    })
                                }
                                Claim::Tables => {
                                    job!(claim, n, Some(m), None, Some(&cc), move || run_tables(
                                        n,
                                        m,
                                        &c,
                                        mode,
                                        tol.algebra
                                    ))
                                }
                                Claim::Coisotropy => {
                                    job!(
                                        claim,
                                        n,
                                        Some(m),
                                        None,
                                        Some(&cc),
                                        move || run_coisotropy(n, m, &c, samples, seed, tol)
                                    )
                                }
                                Claim::Lagrangian => {
                                    job!(
                                        claim,
                                        n,
                                        Some(m),
                                        None,
                                        Some(&cc),
                                        move || run_lagrangian(n, m, &c, mode, tol.algebra)
                                    )
                                }
                                _ => job!(claim, n, Some(m), None, Some(&cc), move || run_hperp(
                                    n, m, &c, mode
                                )),
                            }
                        }
                    }
                    if claim == Claim::Coisotropy && n == *config.n.iter().min().unwrap_or(&n) {
                        job!(claim, 2, None, None, None, move || run_c1_c2_gap(
                            samples, seed, tol.group
                        ));
                    }
                }
                Claim::Cybe => job!(claim, n, None, None, None, move || run_cybe(
                    n,
                    mode,
                    tol.algebra
                )),
                Claim::Affine => {
                    for c in &config.c {
                        let (c, cc) = (c.clone(), c.clone());
                        job!(claim, n, None, None, Some(&cc), move || run_affine(
                            n,
                            &c,
                            samples,
                            seed,
                            tol.algebra
                        ));
                    }
                }
                Claim::Theorem3 => {
                    let cs = config.c.clone();
                    job!(claim, n, None, None, None, move || run_theorem3(
                        n, &cs, samples, seed, tol.group
                    ));
                }
                Claim::Symmetry | Claim::Dimensions => {
                    for &k in &ms {
                        for &l in &ls {
                            for c in &config.c {
                                let (c, cc) = (c.clone(), c.clone());
                                if claim == Claim::Symmetry {
                                    job!(claim, n, Some(k), Some(l), Some(&cc), move || Ok(vec![
                                        check_symmetry_lemma(n, k, l, &c)?,
                                        check_symmetry_conjugate(n, k, l, &c)?,
                                    ]));
                                } else {
                                    job!(claim, n, Some(k), Some(l), Some(&cc), move || {
                                        run_dimensions(n, k, l, &c)
                                    });
                                }
                            }
                        }
                        if claim == Claim::Dimensions {
                            for c in &config.c {
                                let (c, cc) = (c.clone(), c.clone());
                                job!(claim, n, Some(k), None, Some(&cc), move || {
                                    run_torus_intersection(n, k, &c, tol.algebra)
                                });
                            }
                        }
                    }
                }
                Claim::Diffeo | Claim::Covariance => {
                    for &k in &ms {
                        for c in &config.c {
                            let (c, cc) = (c.clone(), c.clone());
                            if claim == Claim::Diffeo {
                                job!(claim, n, Some(k), None, Some(&cc), move || run_diffeo(
                                    n, k, &c, samples, seed, tol
                                ));
                            } else {
                                job!(claim, n, Some(k), None, Some(&cc), move || run_covariance(
                                    n, k, &c, samples, seed, tol.group
                                ));
                            }
                        }
                    }
                }
                Claim::Leaves => {
                    for c in &config.c {
                        if *c >= Rational::one() {
                            skipped.push(format!("{claim}/n={n}/c={c}: leaf equation needs c < 1"));
                            continue;
                        }
                        let (c1, cc) = (c.clone(), c.clone());
                        job!(claim, n, None, None, Some(&cc), move || Ok(vec![
                            check_leaf_equation(n, &c1, samples, seed, tol.leaf)?
                        ]));
                        for &k in &ms {
                            let c2 = c.clone();
                            job!(claim, n, Some(k), None, Some(&cc), move || {
                                let basis = LieBasis::new(n, Algebra::Su);
                                Ok(vec![check_torus_leaves(
                                    &basis,
                                    k,
                                    &c2,
                                    samples.min(20),
                                    seed,
                                    tol.rank,
                                )?])
                            });
                        }
                    }
                }
                Claim::Schubert => {
                    for k in 1..n {
                        if config.m.is_some_and(|m| m != k) {
                            continue;
                        }
                        for &l in &ls {
                            job!(claim, n, Some(k), Some(l), None, move || {
                                run_schubert_images(n, k, l, samples, seed)
                            });
                        }
                    }
                    job!(claim, n, None, None, None, move || Ok(vec![
                        check_bruhat_closure(n, seed)?
                    ]));
                }
            }
        }
    }
    (jobs, skipped)
}

/// Runs every job (in parallel under the `parallel` feature) and merges reports by id.
pub fn run_suite(config: &SuiteConfig) -> RunReport {
    let (jobs, skipped) = plan(config);
    let results = par_map_items(&jobs, |job| {
        let started = Instant::now();
        match (job.run)() {
            Ok(reports) => reports
                .into_iter()
                .map(|r| {
                    let id = format!("{}/{}", job.prefix, r.id);
                    r.with_id(id)
                })
                .collect(),
            Err(e) => {
                let mut r = CheckReport::new("error", Mode::Float, job.n)
                    .with_id(format!("{}/error", job.prefix));
                r.note(e.to_string());
                vec![r.finish(f64::NAN, 0.0, 0, started)]
            }
        }
    });
    let mut claims: Vec<CheckReport> = results.into_iter().flatten().collect();
    claims.sort_by(|a, b| a.id.cmp(&b.id));
    let passed = claims.iter().filter(|r| r.pass).count();
    let summary = Summary {
        passed,
        failed: claims.len() - passed,
        skipped: skipped.len(),
    };
    RunReport {
        run_id: config.run_id(),
        config: config.clone(),
        claims,
        summary,
        skipped,
    }
}

/// Pairs (s, t) of symbols for (n, k) with s ≤ t, for survey output.
pub fn bruhat_pairs(n: usize, k: usize) -> Vec<(String, String)> {
    let all = crate::homogeneous::SchubertSymbol::all(n, k);
    let mut out = Vec::new();
    for s in &all {
        for t in &all {
            if bruhat_leq(s, t).unwrap_or(false) {
                out.push((s.to_string(), t.to_string()));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(claims: &[Claim]) -> SuiteConfig {
        SuiteConfig {
            claims: claims.to_vec(),
            n: vec![3],
            c: vec![Rational::new(1, 3)],
            samples: Some(4),
            ..SuiteConfig::default()
        }
    }

    #[test]
    fn claim_names_roundtrip() {
        for c in Claim::ALL {
            assert_eq!(c.name().parse::<Claim>().unwrap(), c);
        }
        assert!("nope".parse::<Claim>().is_err());
    }

    #[test]
    fn ids_are_unique_and_sorted() {
        let report = run_suite(&small(&[Claim::Dimensions, Claim::Diffeo, Claim::Schubert]));
        let ids: Vec<&String> = report.claims.iter().map(|r| &r.id).collect();
        let mut sorted = ids.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(ids, sorted);
        assert!(report.all_passed(), "{}", report.to_markdown());
    }

    #[test]
    fn deterministic_modulo_timing() {
        let cfg = small(&[Claim::Affine, Claim::Coisotropy, Claim::Leaves]);
        let a = run_suite(&cfg).without_timing();
        let b = run_suite(&cfg).without_timing();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
        assert!(a.all_passed(), "{}", a.to_markdown());
    }

    #[test]
    fn inadmissible_m_is_skipped() {
        let cfg = SuiteConfig {
            m: Some(3),
            ..small(&[Claim::Proposition])
        };
        let report = run_suite(&cfg);
        assert!(report.claims.is_empty());
        assert_eq!(report.summary.skipped, 1);
    }
}
