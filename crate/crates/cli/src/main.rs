//! The workbench CLI: run verification suites, list what is available, and
//! replay stored items. Exit code 0 means every item matched its expected
//! verdict.

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use realmod_core::backend::BackendKind;
use realmod_core::report::{Report, RunConfig};
use realmod_core::suites::{self, ALL_SUITES};

#[derive(Parser)]
#[command(name = "realmod", about = "realizability workbench", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Run one or more suites and write a report.
    Run {
        /// Backend: term, scott, or k2.
        #[arg(long, default_value = "term")]
        backend: String,
        /// Suite name; repeatable. Defaults to every suite.
        #[arg(long = "suite")]
        suites: Vec<String>,
        /// Weak-reduction / search step budget.
        #[arg(long)]
        fuel: Option<u64>,
        /// Sample budget per truth value.
        #[arg(long, default_value_t = 8)]
        samples: usize,
        /// Domain cutoff for quantifiers.
        #[arg(long, default_value_t = 6)]
        cutoff: usize,
        /// Rank bound for hereditary sets.
        #[arg(long, default_value_t = 4)]
        rank: usize,
        /// Truncation bound for the graph model.
        #[arg(long, default_value_t = 1 << 10)]
        trunc: u64,
        /// Prefix length for stream comparisons.
        #[arg(long, default_value_t = 8)]
        prefix: usize,
        /// Probe family: a registered name or a file path.
        #[arg(long, default_value = "default")]
        probes: String,
        /// Seed fixing all sampling.
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Where to write the report.
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Re-execute one item of a stored report and compare verdicts.
    Replay {
        #[arg(long)]
        report: PathBuf,
        #[arg(long)]
        item: String,
    },
    /// List suites and backends.
    List,
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Run {
            backend,
            suites,
            fuel,
            samples,
            cutoff,
            rank,
            trunc,
            prefix,
            probes,
            seed,
            report,
            format,
        } => {
            let backend = BackendKind::parse(&backend)
                .with_context(|| format!("unknown backend {backend}"))?;
            let fuel = fuel
                .or_else(|| {
                    std::env::var("REALMOD_FUEL")
                        .ok()
                        .and_then(|v| v.parse().ok())
                })
                .unwrap_or(realmod_core::comb::Fuel::DEFAULT.get());
            if fuel == 0 {
                bail!("fuel must be strictly positive");
            }
            if samples == 0 || cutoff < 2 || rank == 0 || trunc == 0 || prefix == 0 {
                bail!("all numeric parameters must be positive (cutoff at least 2)");
            }
            let suites = if suites.is_empty() {
                ALL_SUITES.iter().map(|s| s.to_string()).collect()
            } else {
                suites
            };
            let config = RunConfig {
                backend,
                suites,
                fuel,
                samples,
                cutoff,
                rank,
                truncation: trunc,
                prefix,
                probes,
                seed,
            };
            let rep = suites::run(&config);
            let rendered = match format {
                Format::Json => rep.to_json(),
                Format::Text => rep.to_text(),
            };
            match report {
                Some(path) => {
                    // reports always persist as JSON; the rendering choice
                    // controls stdout
                    std::fs::write(&path, rep.to_json())
                        .with_context(|| format!("writing {}", path.display()))?;
                    println!("{rendered}");
                    println!("report written to {}", path.display());
                }
                None => println!("{rendered}"),
            }
            if !rep.exit_ok() {
                std::process::exit(1);
            }
            Ok(())
        }
        Command::Replay { report, item } => {
            let text = std::fs::read_to_string(&report)
                .with_context(|| format!("reading {}", report.display()))?;
            let rep: Report = serde_json::from_str(&text).context("parsing the report")?;
            if rep.schema_version != realmod_core::report::SCHEMA_VERSION {
                bail!(
                    "report schema {} does not match this build ({})",
                    rep.schema_version,
                    realmod_core::report::SCHEMA_VERSION
                );
            }
            match suites::replay(&rep, &item) {
                Ok(fresh) => {
                    println!(
                        "replayed {}/{}: {} (matches stored verdict)",
                        fresh.suite, fresh.item, fresh.verdict
                    );
                    Ok(())
                }
                Err(e) => bail!("{e}"),
            }
        }
        Command::List => {
            println!("suites:");
            for s in ALL_SUITES {
                println!("  {s}");
            }
            println!("backends: term, scott, k2");
            Ok(())
        }
    }
}
