use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use covgrass::homogeneous::{
    leaf_survey, project, schubert_membership, standard_image_symbol, SamplePoints, SchubertSymbol,
};
use covgrass::lie::sample::{block_diagonal_unitary, sample_rng};
use covgrass::lie::{Algebra, LieBasis};
use covgrass::report::{Mode, Tolerances};
use covgrass::scalar::Rational;
use covgrass::suite::{run_suite, Claim, RunReport, SuiteConfig, DEFAULT_SEED};

#[derive(Parser)]
#[command(
    name = "covgrass",
    version,
    about = "Verify Poisson-Lie and Grassmannian claims on SU(n)"
)]
struct Cli {
    /// Worker threads for independent claims (default: available parallelism).
    #[arg(long, global = true, env = "COVGRASS_WORKERS")]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one claim family (or all of them) over a grid and write a report.
    Verify(VerifyArgs),
    /// Export per-sample data as CSV.
    Survey {
        #[command(subcommand)]
        what: Survey,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Proposition,
    Affine,
    Theorem3,
    Coisotropy,
    Lagrangian,
    Hperp,
    Symmetry,
    Dimensions,
    Diffeo,
    Covariance,
    Cybe,
    Tables,
    Leaves,
    Schubert,
    All,
}

impl Target {
    fn claims(self) -> Vec<Claim> {
        let one = match self {
            Target::All => return Claim::ALL.to_vec(),
            Target::Proposition => Claim::Proposition,
            Target::Affine => Claim::Affine,
            Target::Theorem3 => Claim::Theorem3,
            Target::Coisotropy => Claim::Coisotropy,
            Target::Lagrangian => Claim::Lagrangian,
            Target::Hperp => Claim::Hperp,
            Target::Symmetry => Claim::Symmetry,
            Target::Dimensions => Claim::Dimensions,
            Target::Diffeo => Claim::Diffeo,
            Target::Covariance => Claim::Covariance,
            Target::Cybe => Claim::Cybe,
            Target::Tables => Claim::Tables,
            Target::Leaves => Claim::Leaves,
            Target::Schubert => Claim::Schubert,
        };
        vec![one]
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Float,
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum Format {
    Json,
    Markdown,
}

fn parse_n(s: &str) -> Result<usize, String> {
    let n: usize = s.parse().map_err(|e| format!("{e}"))?;
    if !(2..=8).contains(&n) {
        return Err(format!("n={n} outside 2..=8"));
    }
    Ok(n)
}

fn parse_c(s: &str) -> Result<Rational, String> {
    let c: Rational = s.parse().map_err(|e| format!("{e}"))?;
    if c.is_negative() || c > Rational::one() {
        return Err(format!("c={c} outside [0,1]"));
    }
    Ok(c)
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    target: Target,
    /// Matrix size; repeat for several (default 3, 4, 5).
    #[arg(long, value_parser = parse_n)]
    n: Vec<usize>,
    /// Block parameter m (also accepted as --k).
    #[arg(long, alias = "k")]
    m: Option<usize>,
    #[arg(long)]
    l: Option<usize>,
    /// Twist parameter as p/q; repeat for several (default 1/3, 1/2, 2/5).
    #[arg(long, value_parser = parse_c)]
    c: Vec<Rational>,
    #[arg(long, value_enum, default_value = "exact")]
    mode: ModeArg,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Replaces every float tolerance.
    #[arg(long, env = "COVGRASS_TOL")]
    tol: Option<f64>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Report file (stdout when absent).
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Survey {
    /// Leaf ranks of the pushed-forward bivector on the twisted Grassmannian.
    Leaves {
        #[arg(long, value_parser = parse_n)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, value_parser = parse_c)]
        c: Rational,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Draw base points from the maximal torus instead of Haar measure.
        #[arg(long)]
        torus: bool,
        #[arg(long, default_value_t = 1e-7)]
        rank_tol: f64,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Schubert memberships of sampled images of the block subgroups.
    Schubert {
        #[arg(long, value_parser = parse_n)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        l: usize,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

fn sink(output: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match output {
        Some(p) => {
            Box::new(fs::File::create(p).with_context(|| format!("creating {}", p.display()))?)
        }
        None => Box::new(io::stdout()),
    })
}

fn verify(args: VerifyArgs) -> Result<RunReport> {
    let defaults = SuiteConfig::default();
    let mut tolerances = Tolerances::default();
    if let Some(t) = args.tol {
        if !(t.is_finite() && t >= 0.0) {
            bail!("tolerance must be a nonnegative number");
        }
        tolerances = tolerances.overridden(t);
    }
    let config = SuiteConfig {
        claims: args.target.claims(),
        n: if args.n.is_empty() {
            defaults.n
        } else {
            args.n
        },
        m: args.m,
        l: args.l,
        c: if args.c.is_empty() {
            defaults.c
        } else {
            args.c
        },
        mode: match args.mode {
            ModeArg::Exact => Mode::Exact,
            ModeArg::Float => Mode::Float,
        },
        samples: args.samples,
        seed: args.seed,
        tolerances,
    };
    let report = run_suite(&config);
    let text = match args.format {
        Format::Json => serde_json::to_string_pretty(&report)? + "\n",
        Format::Markdown => report.to_markdown(),
    };
    sink(&args.output)?.write_all(text.as_bytes())?;
    eprintln!(
        "run {}: {} passed, {} failed, {} skipped",
        report.run_id, report.summary.passed, report.summary.failed, report.summary.skipped
    );
    for r in report.claims.iter().filter(|r| !r.pass) {
        eprintln!("FAILED {} (residual {:.3e})", r.id, r.max_residual);
    }
    Ok(report)
}

#[derive(Serialize)]
struct LeafRow {
    seed: u64,
    index: usize,
    n: usize,
    k: usize,
    c: String,
    point_hash: String,
    rank: usize,
    min_nonzero_sv: Option<f64>,
}

#[derive(Serialize)]
struct SchubertRow {
    seed: u64,
    index: usize,
    n: usize,
    k: usize,
    l: usize,
    symbol: String,
    member: bool,
    open_cell: bool,
}

fn survey(what: Survey) -> Result<()> {
    match what {
        Survey::Leaves {
            n,
            k,
            c,
            samples,
            seed,
            torus,
            rank_tol,
            output,
        } => {
            let basis = LieBasis::new(n, Algebra::Su);
            let points = if torus {
                SamplePoints::Torus
            } else {
                SamplePoints::Haar
            };
            let rows = leaf_survey(&basis, k, &c, points, samples, seed, rank_tol)?;
            let mut w = csv::Writer::from_writer(sink(&output)?);
            for r in rows {
                w.serialize(LeafRow {
                    seed: r.seed,
                    index: r.index,
                    n: r.n,
                    k: r.k,
                    c: r.c,
                    point_hash: r.point_hash,
                    rank: r.rank,
                    min_nonzero_sv: r.min_nonzero,
                })?;
            }
            w.flush()?;
        }
        Survey::Schubert {
            n,
            k,
            l,
            samples,
            seed,
            output,
        } => {
            let symbol = standard_image_symbol(l, k, n)?;
            let below: Vec<SchubertSymbol> = SchubertSymbol::all(n, k)
                .into_iter()
                .filter(|t| {
                    t != &symbol
                        && t.entries()
                            .iter()
                            .zip(symbol.entries())
                            .all(|(a, b)| a <= b)
                })
                .collect();
            let mut w = csv::Writer::from_writer(sink(&output)?);
            for i in 0..samples {
                let g = block_diagonal_unitary(&[n - l, l], &mut sample_rng(seed, i as u64), true);
                let p = project(&g, k)?;
                let member = schubert_membership(&p, &symbol)?;
                let mut open_cell = member;
                for t in &below {
                    open_cell &= !schubert_membership(&p, t)?;
                }
                w.serialize(SchubertRow {
                    seed,
                    index: i,
                    n,
                    k,
                    l,
                    symbol: symbol.to_string(),
                    member,
                    open_cell,
                })?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(w) = cli.workers {
        if let Err(e) = covgrass::par::init_workers(w) {
            eprintln!("error: invalid worker count: {e}");
            return ExitCode::from(2);
        }
    }
    let outcome = match cli.command {
        Command::Verify(args) => verify(args).map(|r| r.all_passed()),
        Command::Survey { what } => survey(what).map(|_| true),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
