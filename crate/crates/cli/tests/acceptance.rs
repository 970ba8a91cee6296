//! Acceptance criteria, one line each. Runs without the libtest harness so the lines are
//! always printed.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use covgrass::homogeneous::{
    check_bruhat_closure, check_dimension_claims, check_leaf_equation, check_poisson_diffeo,
    check_standard_images, check_symmetry_conjugate, check_symmetry_lemma, check_torus_leaves,
    dimension_outcome,
};
use covgrass::lie::{Algebra, LieBasis};
use covgrass::report::{CheckReport, Expect, Mode, Tolerances};
use covgrass::scalar::Rational;
use covgrass::suite::{run_suite, Claim, RunReport, SuiteConfig, DEFAULT_SEED};

struct Line {
    pass: bool,
    detail: String,
    /// Set when the failure matches the recorded analysis and should not fail the target.
    known: bool,
}

impl Line {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Line {
            pass,
            detail: detail.into(),
            known: false,
        }
    }
}

fn q(a: i64, b: i64) -> Rational {
    Rational::new(a, b)
}

fn suite(
    claim: Claim,
    n: &[usize],
    m: Option<usize>,
    c: &[Rational],
    samples: Option<usize>,
) -> RunReport {
    run_suite(&SuiteConfig {
        claims: vec![claim],
        n: n.to_vec(),
        m,
        l: None,
        c: c.to_vec(),
        mode: Mode::Exact,
        samples,
        seed: DEFAULT_SEED,
        tolerances: Tolerances::default(),
    })
}

fn summarize(reports: &[CheckReport]) -> Line {
    let failed: Vec<&str> = reports
        .iter()
        .filter(|r| !r.pass)
        .map(|r| r.id.as_str())
        .collect();
    // Controls are expected to fail, so their residuals stay out of the maximum.
    let worst = reports
        .iter()
        .filter(|r| r.expect == Expect::Holds)
        .map(|r| r.max_residual)
        .fold(0.0, f64::max);
    let controls = reports.iter().filter(|r| r.expect == Expect::Fails).count();
    let mut detail = format!("{} checks, max residual {worst:.3e}", reports.len());
    if controls > 0 {
        detail.push_str(&format!(" ({controls} negative controls)"));
    }
    if !failed.is_empty() {
        detail.push_str(&format!("; failing: {}", failed.join(", ")));
    }
    Line::new(failed.is_empty() && !reports.is_empty(), detail)
}

fn collect<E: std::fmt::Debug>(
    items: Vec<Result<CheckReport, E>>,
) -> Result<Vec<CheckReport>, String> {
    items
        .into_iter()
        .map(|r| r.map_err(|e| format!("{e:?}")))
        .collect()
}

fn c1() -> Line {
    let started = Instant::now();
    let report = suite(
        Claim::Proposition,
        &[4, 5, 6],
        None,
        &[q(1, 3), q(2, 5), q(1, 2)],
        None,
    );
    let elapsed = started.elapsed();
    let exact = report.claims.iter().all(|r| r.max_residual == 0.0);
    let mut line = summarize(&report.claims);
    line.pass &= exact && elapsed < Duration::from_secs(60);
    line.detail
        .push_str(&format!(", {:.1}s", elapsed.as_secs_f64()));
    line
}

fn c2() -> Line {
    summarize(&suite(Claim::Tables, &[4, 5], None, &[q(1, 3)], None).claims)
}

fn c3() -> Line {
    summarize(&suite(Claim::Cybe, &[2, 3, 4], None, &[q(1, 3)], None).claims)
}

fn c4() -> Line {
    let report = suite(Claim::Affine, &[3, 4], None, &[q(1, 3)], Some(100));
    let mut line = summarize(&report.claims);
    let floats = report.claims.iter().filter(|r| r.mode == Mode::Float);
    line.pass &= floats
        .clone()
        .all(|r| r.max_residual < 1e-9 && r.samples == 100);
    line
}

fn c5() -> Line {
    let report = suite(
        Claim::Theorem3,
        &[4],
        None,
        &[q(1, 3), q(1, 2), q(2, 5)],
        Some(50),
    );
    let mut line = summarize(&report.claims);
    if let Some(r) = report.claims.first() {
        line.detail = r.notes.join("; ");
    }
    line
}

fn c6() -> Line {
    let basis = LieBasis::new(3, Algebra::Su);
    match check_poisson_diffeo(&basis, 1, &q(1, 3), None, 30, DEFAULT_SEED, 1e-8) {
        Ok(r) => Line::new(
            r.pass && r.max_residual < 1e-8,
            format!("30 points, residual {:.3e}", r.max_residual),
        ),
        Err(e) => Line::new(false, e.to_string()),
    }
}

fn c7() -> Line {
    let report = suite(
        Claim::Lagrangian,
        &[3, 4],
        Some(1),
        &[q(1, 3), q(1, 2)],
        None,
    );
    let mut line = summarize(&report.claims);
    line.pass &= report.claims.len() == 4;
    line
}

fn c8() -> Line {
    let report = suite(Claim::Hperp, &[3, 4], None, &[q(1, 3)], None);
    let mut line = summarize(&report.claims);
    let notes: Vec<String> = report
        .claims
        .iter()
        .flat_map(|r| r.notes.iter().cloned())
        .collect();
    line.detail
        .push_str(&format!(", {} scored generator notes", notes.len()));
    line
}

fn c9() -> Line {
    let mut items = Vec::new();
    for n in [3, 4, 5] {
        for c in [q(1, 3), q(1, 2)] {
            items.push(check_leaf_equation(n, &c, 100, DEFAULT_SEED, 1e-10));
        }
    }
    match collect(items) {
        Ok(rs) => summarize(&rs),
        Err(e) => Line::new(false, e),
    }
}

fn c10() -> Line {
    let mut bad = Vec::new();
    let mut count = 0;
    for n in [4, 5, 6] {
        for l in 1..n {
            count += 1;
            match dimension_outcome(n, 1, l, &q(1, 3)) {
                Ok(o) if o.image_dim == 2 * n - 3 => {}
                Ok(o) => bad.push(format!("n={n} l={l}: {}", o.image_dim)),
                Err(e) => bad.push(format!("n={n} l={l}: {e}")),
            }
        }
    }
    Line::new(
        bad.is_empty(),
        format!(
            "{count} images of dimension 2n−3{}",
            if bad.is_empty() {
                String::new()
            } else {
                format!("; wrong: {}", bad.join(", "))
            }
        ),
    )
}

fn c11() -> Line {
    let mut items = Vec::new();
    for n in [4, 5, 6] {
        for k in 1..=n / 2 {
            for l in 1..n {
                items.push(check_dimension_claims(n, k, l, &q(1, 3)));
            }
        }
    }
    match collect(items) {
        Ok(rs) => summarize(&rs),
        Err(e) => Line::new(false, e),
    }
}

fn c12() -> Line {
    let mut literal = Vec::new();
    let mut conjugate = Vec::new();
    for n in [4, 5] {
        for c in [q(1, 3), q(2, 5)] {
            for k in 1..=n / 2 {
                for l in 1..n {
                    literal.push(check_symmetry_lemma(n, k, l, &c));
                    conjugate.push(check_symmetry_conjugate(n, k, l, &c));
                }
            }
        }
    }
    let (literal, conjugate) = match (collect(literal), collect(conjugate)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return Line::new(false, e),
    };
    let equal = literal.iter().filter(|r| r.pass).count();
    let conj = conjugate.iter().filter(|r| r.pass).count();
    let mut line = Line::new(
        equal == literal.len(),
        format!(
            "literal equality {equal}/{} cases; Ad_J-conjugate equality {conj}/{}",
            literal.len(),
            conjugate.len()
        ),
    );
    // Every literal mismatch has equal dimensions and is repaired by the anti-diagonal flip.
    line.known = !line.pass && conj == conjugate.len();
    line
}

fn c13() -> Line {
    let mut items = Vec::new();
    for n in 2..=6 {
        for k in 1..n {
            for l in 1..n {
                items.push(check_standard_images(n, k, l, 50, DEFAULT_SEED));
            }
        }
    }
    for n in 2..=5 {
        items.push(check_bruhat_closure(n, DEFAULT_SEED));
    }
    match collect(items) {
        Ok(rs) => summarize(&rs),
        Err(e) => Line::new(false, e),
    }
}

fn c14() -> Line {
    let mut items = Vec::new();
    for n in [3, 4] {
        let basis = LieBasis::new(n, Algebra::Su);
        for k in 1..=(n / 2).min(2) {
            items.push(check_torus_leaves(
                &basis,
                k,
                &q(1, 3),
                20,
                DEFAULT_SEED,
                1e-7,
            ));
        }
    }
    match collect(items) {
        Ok(rs) => {
            let mut line = summarize(&rs);
            let notes: Vec<String> = rs
                .iter()
                .map(|r| format!("k={} {}", r.m_or_k.unwrap_or(0), r.notes.join(" ")))
                .collect();
            line.detail.push_str(&format!("; {}", notes.join("; ")));
            line
        }
        Err(e) => Line::new(false, e),
    }
}

fn verify_all(path: &std::path::Path) -> Result<(RunReport, Duration), String> {
    let started = Instant::now();
    let status = Command::new(env!("CARGO_BIN_EXE_covgrass"))
        .args(["verify", "all", "--seed", &DEFAULT_SEED.to_string(), "-o"])
        .arg(path)
        .stderr(std::process::Stdio::null())
        .status()
        .map_err(|e| e.to_string())?;
    let elapsed = started.elapsed();
    // Exit code 1 only means some claim failed; the report is still complete.
    if !matches!(status.code(), Some(0 | 1)) {
        return Err(format!("verify all exited with {status}"));
    }
    let text = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
    let report: RunReport = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    Ok((report, elapsed))
}

fn c15() -> Line {
    let dir = std::env::temp_dir().join(format!("covgrass-acceptance-{}", std::process::id()));
    if let Err(e) = std::fs::create_dir_all(&dir) {
        return Line::new(false, e.to_string());
    }
    let runs = (
        verify_all(&dir.join("a.json")),
        verify_all(&dir.join("b.json")),
    );
    let _ = std::fs::remove_dir_all(&dir);
    match runs {
        (Ok((a, ta)), Ok((b, tb))) => {
            let ja = serde_json::to_string(&a.without_timing()).unwrap_or_default();
            let jb = serde_json::to_string(&b.without_timing()).unwrap_or_default();
            let slowest = ta.max(tb);
            Line::new(
                ja == jb && !ja.is_empty() && slowest < Duration::from_secs(600),
                format!(
                    "{} reports, identical modulo timing: {}, slowest run {:.1}s",
                    a.claims.len(),
                    ja == jb,
                    slowest.as_secs_f64()
                ),
            )
        }
        (Err(e), _) | (_, Err(e)) => Line::new(false, e),
    }
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Line); 15] = [
        ("exact twist proposition", c1),
        ("conjugation tables", c2),
        ("CYBE ad-invariance", c3),
        ("multiplicative/affine identities", c4),
        ("coisotropy equivalence", c5),
        ("Poisson diffeomorphism", c6),
        ("Lagrangian subalgebra", c7),
        ("annihilator closure", c8),
        ("leaf equation", c9),
        ("line orbits of dimension 2n-3", c10),
        ("orbit codimensions", c11),
        ("intersection symmetry", c12),
        ("Schubert images and closure", c13),
        ("torus leaves", c14),
        ("determinism and runtime", c15),
    ];
    let mut unexpected = 0;
    for (i, (title, run)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let line = run();
        let verdict = match (line.pass, line.known) {
            (true, _) => "PASS",
            (false, true) => "FAIL (known)",
            (false, false) => "FAIL",
        };
        if !line.pass && !line.known {
            unexpected += 1;
        }
        println!(
            "criterion {:>2} {verdict:<12} {title}: {} [{:.1}s]",
            i + 1,
            line.detail,
            started.elapsed().as_secs_f64()
        );
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{unexpected} unexpected failure(s)");
        ExitCode::FAILURE
    }
}
