//! `subsat`: subsumption and subsumption resolution checks from the command
//! line.
//!
//! Exit status is 0 on success, 1 when an expectation is not met or the
//! engine disagrees with the oracle, and 2 on unreadable or malformed input.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use subsat_core::oracle::DEFAULT_BOUND;
use subsat_core::replay::to_csv;
use subsat_core::{
    fuzz, parse_clause, parse_log, replay, CheckState, EncodingChoice, Expected, FuzzConfig, LogError, ReplayConfig,
    Signature, Simplifier, SimplifyConfig, SymbolTable,
};

#[derive(Parser, Debug)]
#[command(name = "subsat", version, about = "SAT-based subsumption and subsumption resolution")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check one side premise against one main premise.
    Check {
        /// File holding the side premise.
        side: PathBuf,
        /// File holding the main premise.
        main: PathBuf,
        #[command(flatten)]
        engine: EngineArgs,
        /// Expected answer: S+, S-, SR+ or SR-.
        #[arg(long, value_parser = parse_expected)]
        expect: Option<Expected>,
    },
    /// Run every check of a log and report statistics.
    Replay {
        log: PathBuf,
        #[command(flatten)]
        engine: EngineArgs,
        /// Share match sets between the two checks of a pair; `false` runs
        /// them independently.
        #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
        optimized_loop: bool,
        /// Compare every record with the brute-force oracle.
        #[arg(long)]
        oracle_verify: bool,
        /// Write one CSV row per record.
        #[arg(long)]
        stats_out: Option<PathBuf>,
        /// Write success rates per tick bucket as CSV.
        #[arg(long)]
        histogram_out: Option<PathBuf>,
    },
    /// Compare the engine with the oracle on generated pairs.
    Fuzz {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 10_000)]
        count: usize,
        #[arg(long, default_value_t = 4)]
        max_side: usize,
        #[arg(long, default_value_t = 4)]
        max_main: usize,
        /// Use a single unary predicate and a single constant.
        #[arg(long)]
        degenerate: bool,
    },
}

#[derive(Args, Debug)]
struct EngineArgs {
    #[arg(long, value_enum, default_value_t = Encoding::Dynamic)]
    encoding: Encoding,
    /// Tick budget per pair: `none` or a number such as 150 or 5000.
    #[arg(long, default_value = "none", value_parser = parse_cutoff)]
    cutoff: Cutoff,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Encoding {
    Direct,
    Indirect,
    Dynamic,
}

#[derive(Clone, Copy, Debug)]
struct Cutoff(Option<u64>);

fn parse_cutoff(s: &str) -> Result<Cutoff, String> {
    if s == "none" {
        return Ok(Cutoff(None));
    }
    s.parse().map(|n| Cutoff(Some(n))).map_err(|_| format!("expected `none` or a tick count, got `{s}`"))
}

fn parse_expected(s: &str) -> Result<Expected, String> {
    Expected::parse(s).ok_or_else(|| format!("expected one of S+, S-, SR+, SR-, got `{s}`"))
}

impl EngineArgs {
    fn config(&self) -> SimplifyConfig {
        SimplifyConfig {
            encoding: match self.encoding {
                Encoding::Direct => EncodingChoice::Direct,
                Encoding::Indirect => EncodingChoice::Indirect,
                Encoding::Dynamic => EncodingChoice::Dynamic,
            },
            cutoff: self.cutoff.0,
            ..SimplifyConfig::default()
        }
    }
}

/// Input problems map to exit status 2.
#[derive(Debug)]
struct InputError(String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())).into())
}

fn check(side: &Path, main: &Path, engine: &EngineArgs, expect: Option<Expected>) -> Result<bool> {
    let mut symbols = SymbolTable::new();
    let s = parse_clause(read(side)?.trim(), &mut symbols)
        .map_err(|e| InputError(format!("{}: {e}", side.display())))?;
    let m = parse_clause(read(main)?.trim(), &mut symbols)
        .map_err(|e| InputError(format!("{}: {e}", main.display())))?;
    let mut simplifier = Simplifier::new(engine.config());
    let mut st = CheckState::new();
    let sub = simplifier.check_subsumption(&s, &m, &mut st);
    let res = simplifier.check_subsumption_resolution(&s, &m, &mut st);
    match &sub {
        Some(sub) => println!("SUBSUMED by σ={}", sub.display(&symbols)),
        None => println!("NOT SUBSUMED"),
    }
    match &res {
        Some(r) => println!(
            "SR: conclusion {} by σ={} on literal {}",
            r.conclusion.display(&symbols),
            r.sub.display(&symbols),
            r.literal + 1
        ),
        None => println!("SR: none"),
    }
    if st.cutoff_hit {
        println!("cutoff reached");
    }
    println!("stage: {}", st.stage);
    if let Some(e) = st.encoding {
        println!("encoding: {e}");
    }
    println!("ticks: {}", st.ticks);
    let met = match expect {
        None => true,
        Some(Expected::Subsumed) => sub.is_some(),
        Some(Expected::NotSubsumed) => sub.is_none() && !st.cutoff_hit,
        Some(Expected::Resolved) => res.is_some(),
        Some(Expected::NotResolved) => res.is_none() && !st.cutoff_hit,
    };
    if !met {
        eprintln!("expectation {} not met", expect.unwrap());
    }
    Ok(met)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Check {
            side,
            main,
            engine,
            expect,
        } => Ok(if check(&side, &main, &engine, expect)? {
            ExitCode::SUCCESS
        } else {
            ExitCode::from(1)
        }),
        Command::Replay {
            log,
            engine,
            optimized_loop,
            oracle_verify,
            stats_out,
            histogram_out,
        } => {
            let (records, mut errors) = parse_log(&read(&log)?);
            let config = ReplayConfig {
                simplify: engine.config(),
                optimized: optimized_loop,
                oracle_verify,
            };
            let summary = replay(&records, &config);
            errors.extend(summary.errors.iter().cloned());
            errors.sort_by_key(|e| match e {
                LogError::Format { line, .. } | LogError::Clause { line, .. } => *line,
            });
            for e in &errors {
                eprintln!("skipped {e}");
            }
            for m in &summary.mismatches {
                eprintln!("line {}: {}", m.line, m.message);
            }
            if let Some(path) = &stats_out {
                fs::write(path, to_csv(&summary.rows)).with_context(|| path.display().to_string())?;
            }
            let histogram = summary.histogram();
            if let Some(path) = &histogram_out {
                fs::write(path, histogram.csv()).with_context(|| path.display().to_string())?;
            }
            print!("{summary}");
            println!("success rate by ticks:");
            for (b, n, p) in histogram.rows() {
                println!("  {b:>8} {n:>7} {:.3}", p as f64 / n as f64);
            }
            Ok(if !errors.is_empty() {
                ExitCode::from(2)
            } else if !summary.mismatches.is_empty() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            })
        }
        Command::Fuzz {
            seed,
            count,
            max_side,
            max_main,
            degenerate,
        } => {
            if max_side > DEFAULT_BOUND || max_main > DEFAULT_BOUND || max_main == 0 {
                bail!(InputError(format!("clause sizes must lie in 1..={DEFAULT_BOUND}")));
            }
            let report = fuzz(&FuzzConfig {
                seed,
                count,
                max_side,
                max_main,
                signature: if degenerate {
                    Signature::degenerate()
                } else {
                    Signature::standard()
                },
            })?;
            print!("{report}");
            Ok(if report.disagreements.is_empty() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.is::<InputError>() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
