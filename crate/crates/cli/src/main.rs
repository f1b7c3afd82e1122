//! `geoverify` — verify curvature identities, paracontact axioms, and
//! soliton equations on manifold spec files.
//!
//! Exit codes: 0 all checks passed, 1 at least one check failed,
//! 2 operational error (bad file, missing block, degenerate metric, ...).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use geoverify_core::error::Error;
use geoverify_core::fixtures;
use geoverify_core::report::VerificationReport;
use geoverify_core::specfile::load_manifold_spec;
use geoverify_core::suites::{run_suite, theorem_rows, SamplingOverride, Suite};

#[derive(Parser)]
#[command(name = "geoverify", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite over a manifold spec file.
    Verify(VerifyArgs),
    /// List or dump the bundled fixtures.
    Fixtures {
        #[command(subcommand)]
        action: FixturesAction,
    },
    /// Run the pure-arithmetic theorem suite (needs no manifold).
    Theorems(TheoremsArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// Path to the spec file, or the name of a bundled fixture.
    spec: PathBuf,
    /// Which check catalog to run.
    #[arg(long, value_enum, default_value = "all")]
    suite: SuiteArg,
    /// Base tolerance for pass/fail decisions.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// Override the spec's sample count.
    #[arg(long)]
    points: Option<usize>,
    /// Override the spec's sampling seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Output format.
    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum FixturesAction {
    /// Print the names of the bundled fixtures.
    List,
    /// Print a bundled fixture's spec file.
    Dump { name: String },
}

#[derive(Args)]
struct TheoremsArgs {
    /// Number of randomized tuples per identity.
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
    /// RNG seed.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Base tolerance.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// Output format.
    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Axioms,
    Compat,
    Sasakian,
    Identities,
    Soliton,
    Gradient,
    Theorems,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Suite {
        match s {
            SuiteArg::Axioms => Suite::Axioms,
            SuiteArg::Compat => Suite::Compat,
            SuiteArg::Sasakian => Suite::Sasakian,
            SuiteArg::Identities => Suite::Identities,
            SuiteArg::Soliton => Suite::Soliton,
            SuiteArg::Gradient => Suite::Gradient,
            SuiteArg::Theorems => Suite::Theorems,
            SuiteArg::All => Suite::All,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Text,
}

fn color_enabled() -> bool {
    match std::env::var("GEOVERIFY_COLOR") {
        Ok(v) => matches!(v.as_str(), "1" | "always" | "on"),
        Err(_) => false,
    }
}

fn emit(report: &VerificationReport, format: FormatArg, out: Option<&PathBuf>) -> Result<(), Error> {
    let body = match format {
        FormatArg::Json => report.to_json(),
        FormatArg::Text => report.to_text(out.is_none() && color_enabled()),
    };
    match out {
        Some(path) => std::fs::write(path, body).map_err(|e| Error::File {
            path: path.display().to_string(),
            message: e.to_string(),
        }),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn run() -> Result<bool, Error> {
    let cli = Cli::parse();
    match cli.command {
        Command::Verify(args) => {
            // a bundled fixture name is accepted in place of a path
            let spec = match args.spec.to_str().and_then(fixtures::bundled) {
                Some(f) => geoverify_core::parse_manifold_spec(f.text)?,
                None => load_manifold_spec(&args.spec)?,
            };
            let report = run_suite::<f64>(
                &spec,
                args.suite.into(),
                args.tol,
                SamplingOverride { count: args.points, seed: args.seed },
            )?;
            emit(&report, args.format, args.out.as_ref())?;
            Ok(report.overall)
        }
        Command::Fixtures { action } => match action {
            FixturesAction::List => {
                for f in fixtures::FIXTURES {
                    println!("{}", f.name);
                }
                Ok(true)
            }
            FixturesAction::Dump { name } => {
                let f = fixtures::bundled(&name).ok_or_else(|| Error::Spec {
                    message: format!("no bundled fixture named `{name}`"),
                    line: None,
                })?;
                print!("{}", f.text);
                Ok(true)
            }
        },
        Command::Theorems(args) => {
            let rows = theorem_rows::<f64>(args.trials, args.seed, args.tol);
            let mut report = VerificationReport::new(
                "none",
                "theorems",
                args.tol,
                args.seed,
                "random",
                args.trials,
            );
            for row in &rows {
                report.push_check(row);
            }
            emit(&report, args.format, args.out.as_ref())?;
            Ok(report.overall)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::from(0),
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
