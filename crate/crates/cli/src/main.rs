use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};
use cocyclelab::extension::{builtin_instances, h3_bar_resolution, FiniteGroup};
use cocyclelab::suite::{conventions, emit_report, run_suite, Format, SuiteConfig, SuiteName};

/// Exact and quadrature verification of anomaly cocycles, loop-group
/// extensions and group-extension obstructions.
#[derive(Parser)]
#[command(name = "cocyclelab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite and write its report.
    Verify(VerifyArgs),
    /// Order of H^3(G, a) for a finite abelian G and trivial-action a.
    H3 {
        /// Cyclic orders of G, e.g. `2` or `2,2`.
        #[arg(long, value_delimiter = ',', required = true)]
        group: Vec<u64>,
        /// Cyclic orders of a.
        #[arg(long, value_delimiter = ',', required = true)]
        coeff: Vec<u64>,
    },
    /// Print the built-in extension instances in the instance-file format.
    Instances,
    /// Print the convention ledger embedded in every report.
    Conventions,
}

#[derive(clap::Args)]
struct VerifyArgs {
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 32)]
    resolution: usize,
    #[arg(long, default_value_t = 1e-4)]
    tol: f64,
    /// JSON list of extension instances for the obstruction suite.
    #[arg(long)]
    instances: Option<PathBuf>,
    /// Output file; defaults to `$COCYCLELAB_OUT_DIR/<suite>-<seed>.<format>`,
    /// or standard output when the variable is unset.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "json")]
    format: String,
    /// Record wall-clock time in the report.
    #[arg(long)]
    timing: bool,
    #[arg(long, env = "COCYCLELAB_OUT_DIR", hide_env_values = true)]
    out_dir: Option<PathBuf>,
}

fn write_output(path: Option<&Path>, bytes: &[u8]) -> anyhow::Result<()> {
    match path {
        Some(p) => std::fs::write(p, bytes).with_context(|| format!("cannot write {}", p.display())),
        None => {
            std::io::stdout().write_all(bytes)?;
            Ok(())
        }
    }
}

fn verify(args: VerifyArgs) -> anyhow::Result<bool> {
    let suite: SuiteName = args.suite.parse()?;
    let format: Format = args.format.parse()?;
    let config = SuiteConfig {
        suite,
        seed: args.seed,
        resolution: args.resolution,
        tolerance: args.tol,
        instances: args.instances,
        timing: args.timing,
    };
    let report = run_suite(&config)?;
    let bytes = emit_report(&report, format)?;
    let out = args.out.or_else(|| {
        args.out_dir
            .map(|d| d.join(format!("{}-{}.{}", suite, args.seed, args.format)))
    });
    write_output(out.as_deref(), &bytes)?;
    if out.is_some() {
        eprintln!(
            "{} checks, {} passed, {} failed",
            report.summary.total, report.summary.passed, report.summary.failed
        );
    }
    Ok(report.all_pass())
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    match cli.command {
        Command::Verify(args) => verify(args),
        Command::H3 { group, coeff } => {
            if group.is_empty() || group.contains(&0) || coeff.contains(&0) {
                bail!("group and coefficient orders must be positive");
            }
            let g = FiniteGroup::abelian(&group);
            let h = h3_bar_resolution(&g, &coeff)?;
            println!("{}", serde_json::to_string_pretty(&h)?);
            Ok(h.composite_vanishes)
        }
        Command::Instances => {
            println!("{}", serde_json::to_string_pretty(&builtin_instances())?);
            Ok(true)
        }
        Command::Conventions => {
            for (k, v) in conventions() {
                println!("{k}: {v}");
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
