#![cfg_attr(
    feature = "arithmetic-audit",
    deny(clippy::float_arithmetic, clippy::float_cmp)
)]

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use unate::commands::{
    self, CertifyMode, CertifyOpts, ClassifierOpts, Outcome, TuranMode, TuranOpts,
};
use unate::config::{Config, Resolver};
use unate::manifest::{to_pretty, RunRecord};
use unate::unate_core::certificate::DEFAULT_ENUMERATION_BUDGET;
use unate::unate_core::semantics::{CENSUS_STATE_BUDGET, DEFAULT_TABLE_CAP};
use unate::unate_core::{QSqrt2, Rational};
use unate::{acceptance, CliError};

/// Exact experiments on k-SAT formulae, partially directed hypergraphs and
/// the digraph certificate.
///
/// Exit codes: 0 pass, 2 property failure, 3 budget exceeded, 4 input error.
#[derive(Parser, Debug)]
#[command(name = "unate", version)]
struct Cli {
    /// Flat `key = value` file; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Root of the results directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Debug, Default)]
struct ClassifierArgs {
    /// Sparsity parameter for minimality and dominance.
    #[arg(long, value_parser = parse_rational)]
    zeta: Option<Rational>,
    /// Density threshold (default 1/(10k)).
    #[arg(long, value_parser = parse_rational)]
    zeta_prime: Option<Rational>,
    /// Unate-distance threshold (default zeta).
    #[arg(long, value_parser = parse_rational)]
    rho: Option<Rational>,
    /// Comma-separated β values (default zeta each).
    #[arg(long)]
    beta: Option<String>,
    /// Largest variable count for truth-table work.
    #[arg(long)]
    cap: Option<usize>,
}

// parsed once per process, so the variant size gap does not matter
#[allow(clippy::large_enum_variant)]
#[derive(Subcommand, Debug)]
enum Command {
    /// Syntactic flags, weight profile, minimality and classifier verdicts.
    Classify {
        path: PathBuf,
        #[command(flatten)]
        params: ClassifierArgs,
    },
    /// Count the k-SAT functions on n variables.
    Census {
        n: usize,
        k: usize,
        /// Cap on distinct truth tables held at once.
        #[arg(long)]
        state_budget: Option<usize>,
        /// Also count minimal formulae, searching at most this many nodes.
        #[arg(long)]
        minimal_nodes: Option<u64>,
    },
    /// Maximise α + θβ over T_k-free PDGs on n vertices.
    Turan {
        n: usize,
        k: usize,
        /// Element of Q(√2), e.g. `2` or `1 + 1/2*sqrt2`.
        #[arg(long)]
        theta: Option<QSqrt2>,
        /// exhaustive, bnb or heuristic.
        #[arg(long)]
        mode: Option<TuranMode>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        restarts: Option<u32>,
        #[arg(long)]
        max_nodes: Option<u64>,
    },
    /// Check the (k+1)-vertex digraph inequality.
    Certify {
        k: usize,
        #[arg(long)]
        theta: Option<QSqrt2>,
        #[arg(long)]
        a: Option<QSqrt2>,
        #[arg(long)]
        b: Option<QSqrt2>,
        /// auto, enumeration or closed-form.
        #[arg(long)]
        mode: Option<CertifyMode>,
        /// Largest number of digraphs to enumerate.
        #[arg(long)]
        budget: Option<u64>,
        /// Bisection steps for the largest certifiable θ in the default family.
        #[arg(long)]
        sweep: Option<u32>,
    },
    /// Orient a hypergraph with bounded load via bipartite matching.
    Orient { path: PathBuf },
    /// Classifier verdicts plus the sparse-minimality lemma checks.
    Stability {
        path: PathBuf,
        #[command(flatten)]
        params: ClassifierArgs,
    },
    /// Run the acceptance suite.
    Selftest {
        /// Comma-separated criterion numbers (default: all).
        #[arg(long)]
        only: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    s.parse().map_err(|e| format!("{e}"))
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>, CliError>
where
    T::Err: std::fmt::Display,
{
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<T>()
                .map_err(|e| CliError::Input(format!("{what} `{x}`: {e}")))
        })
        .collect()
}

fn classifier_opts(r: &mut Resolver, a: ClassifierArgs) -> Result<ClassifierOpts, CliError> {
    let beta = match r.opt::<String>("beta", a.beta)? {
        Some(s) => Some(parse_list::<Rational>(&s, "beta")?),
        None => None,
    };
    Ok(ClassifierOpts {
        zeta: r.or("zeta", a.zeta, Rational::new(1, 2))?,
        zeta_prime: r.opt("zeta_prime", a.zeta_prime)?,
        rho: r.opt("rho", a.rho)?,
        beta,
        cap: r.or("cap", a.cap, DEFAULT_TABLE_CAP)?,
    })
}

fn run(
    cli: Cli,
    file: &Config,
) -> Result<(Outcome, &'static str, Resolver<'_>, PathBuf), CliError> {
    let mut r = Resolver::new(file);
    let workers = r.or("workers", cli.workers, unate::parallel::default_workers())?;
    let out_root: String = r.or(
        "out",
        cli.out.map(|p| p.display().to_string()),
        "runs".to_string(),
    )?;
    let (name, outcome) = match cli.command {
        Command::Classify { path, params } => {
            r.record("path", path.display());
            let o = classifier_opts(&mut r, params)?;
            ("classify", commands::classify(&path, &o)?)
        }
        Command::Census {
            n,
            k,
            state_budget,
            minimal_nodes,
        } => {
            r.record("n", n);
            r.record("k", k);
            let budget = r.or("state_budget", state_budget, CENSUS_STATE_BUDGET)?;
            let minimal = r.opt("minimal_nodes", minimal_nodes)?;
            ("census", commands::census(n, k, budget, minimal)?)
        }
        Command::Turan {
            n,
            k,
            theta,
            mode,
            seed,
            restarts,
            max_nodes,
        } => {
            r.record("n", n);
            r.record("k", k);
            let o = TuranOpts {
                n,
                k,
                theta: r.or("theta", theta, QSqrt2::from_int(2))?,
                mode: r.or("mode", mode, TuranMode::BranchAndBound)?,
                seed: r.or("seed", seed, 0)?,
                restarts: r.or("restarts", restarts, 32)?,
                max_nodes: r.or("max_nodes", max_nodes, 2_000_000_000)?,
            };
            ("turan", commands::turan(&o)?)
        }
        Command::Certify {
            k,
            theta,
            a,
            b,
            mode,
            budget,
            sweep,
        } => {
            r.record("k", k);
            let o = CertifyOpts {
                k,
                theta: r.opt("theta", theta)?,
                a: r.opt("a", a)?,
                b: r.opt("b", b)?,
                mode: r.or("mode", mode, CertifyMode::Auto)?,
                budget: r.or("budget", budget, DEFAULT_ENUMERATION_BUDGET)?,
                sweep_steps: r.opt("sweep", sweep)?,
                workers,
            };
            ("certify", commands::certify(&o)?)
        }
        Command::Orient { path } => {
            r.record("path", path.display());
            ("orient", commands::orient_file(&path)?)
        }
        Command::Stability { path, params } => {
            r.record("path", path.display());
            let o = classifier_opts(&mut r, params)?;
            ("stability", commands::stability(&path, &o)?)
        }
        Command::Selftest { only, seed } => {
            let only = match r.opt::<String>("only", only)? {
                Some(s) => parse_list::<u32>(&s, "criterion")?,
                None => Vec::new(),
            };
            let ctx = acceptance::Ctx {
                workers,
                seed: r.or("seed", seed, acceptance::DEFAULT_SEED)?,
                ..Default::default()
            };
            (
                "selftest",
                commands::selftest(&ctx, &only, |line| println!("{line}")),
            )
        }
    };
    Ok((outcome, name, r, PathBuf::from(out_root)))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 4 } else { 0 });
        }
    };
    let started = chrono::Utc::now();
    let file = match Config::load(cli.config.as_deref()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let (outcome, name, resolver, root) = match run(cli, &file) {
        Ok(x) => x,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let record = RunRecord {
        command: name.to_string(),
        config: resolver.effective,
        input_digests: outcome.input_digests,
        seeds: outcome.seeds,
        started,
        finished: chrono::Utc::now(),
        status: outcome.status,
        result: outcome.result,
        witnesses: outcome.witnesses,
    };
    if name != "selftest" {
        print!("{}", to_pretty(&record.result));
    }
    match record.write(&root) {
        Ok(dir) => eprintln!("{}: {}", name, dir.display()),
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    }
    ExitCode::from(outcome.status.exit_code() as u8)
}
