use std::fs;
use std::io::{self, Read};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use mostar::enumerate::{default_threads, MaximizeOptions};
use mostar::families::FamilyRegistry;
use mostar::harness::{self, Outcome, VerificationReport};
use mostar::Error;

#[derive(Parser)]
#[command(name = "mostar", version, about = "Edge Mostar index tools and extremal verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(clap::Args)]
struct VerifyArgs {
    /// Sizes to check, e.g. `7..12`.
    #[arg(long, conflicts_with = "size")]
    range: Option<String>,
    /// Single size to check.
    #[arg(long)]
    size: Option<usize>,
    /// Worker threads for the enumeration.
    #[arg(long, default_value_t = default_threads())]
    threads: usize,
    /// Include the full index distribution per size.
    #[arg(long)]
    histogram: bool,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Write maximizers as graph6 lines here.
    #[arg(long)]
    maximizers: Option<PathBuf>,
    /// Registry file to use instead of the bundled one.
    #[arg(long)]
    registry: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Edge Mostar index of each graph6 line.
    Compute {
        /// Input file; stdin when omitted.
        input: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Tricyclic maxima for sizes 6..=12 (13 with --deep).
    VerifyTheorem1 {
        #[command(flatten)]
        args: VerifyArgs,
        /// Allow and default to the range ending at 13.
        #[arg(long)]
        deep: bool,
    },
    /// Bicyclic maxima for sizes 5..=11.
    VerifyTheorem2 {
        #[command(flatten)]
        args: VerifyArgs,
    },
    /// Reconstructs the extremal families from enumeration data.
    Atlas {
        /// Registry output path.
        #[arg(long, default_value = "families.json")]
        output: PathBuf,
        /// Discovery report path; stdout when omitted.
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long, default_value_t = default_threads())]
        threads: usize,
    },
    /// Checks the pendant-shift index changes on seeded parameter tuples.
    Lemmas {
        #[arg(long, default_value_t = 20)]
        probes: usize,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn emit(text: &str, output: Option<&Path>) -> Result<(), Error> {
    match output {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn registry(path: Option<&Path>) -> Result<FamilyRegistry, Error> {
    match path {
        Some(p) => {
            let mut reg = FamilyRegistry::analytic();
            for spec in FamilyRegistry::from_json(&fs::read_to_string(p)?)?.specs() {
                reg.insert(spec.clone());
            }
            Ok(reg)
        }
        None => Ok(FamilyRegistry::bundled()),
    }
}

fn verify(
    args: &VerifyArgs,
    default: &str,
    run: impl Fn(std::ops::RangeInclusive<usize>, &FamilyRegistry, MaximizeOptions) -> Result<VerificationReport, Error>,
) -> Result<Outcome, Error> {
    let range = match (args.size, &args.range) {
        (Some(m), _) => m..=m,
        (None, Some(r)) => harness::parse_range(r)?,
        (None, None) => harness::parse_range(default)?,
    };
    if args.threads == 0 {
        return Err(Error::Usage("--threads must be positive".into()));
    }
    let reg = registry(args.registry.as_deref())?;
    let opts = MaximizeOptions {
        threads: args.threads,
        histogram: args.histogram,
    };
    let start = Instant::now();
    let report = run(range, &reg, opts)?;
    for row in &report.rows {
        eprintln!(
            "m={:<3} expected={:<6} observed={:<6} maximizers={:<3} {:?}",
            row.m,
            row.expected_max.map_or("-".into(), |v| v.to_string()),
            row.observed_max.map_or("-".into(), |v| v.to_string()),
            row.observed_maximizer_count,
            row.status
        );
    }
    eprintln!("elapsed {:.2}s", start.elapsed().as_secs_f64());
    emit(&format!("{}\n", serde_json::to_string_pretty(&report)?), args.output.as_deref())?;
    if let Some(path) = &args.maximizers {
        fs::write(path, report.sidecar())?;
    }
    Ok(report.outcome())
}

fn run(cli: Cli) -> Result<Outcome, Error> {
    match cli.command {
        Command::Compute {
            input,
            format,
            output,
        } => {
            let text = match input {
                Some(p) => fs::read_to_string(p)?,
                None => {
                    let mut s = String::new();
                    io::stdin().read_to_string(&mut s)?;
                    s
                }
            };
            let out = harness::compute(&text);
            for p in &out.problems {
                eprintln!("line {}: {}", p.line, p.message);
            }
            let rendered = match format {
                Format::Json => out.to_json_lines()?,
                Format::Csv => out.to_csv(),
            };
            emit(&rendered, output.as_deref())?;
            Ok(out.outcome())
        }
        Command::VerifyTheorem1 { args, deep } => {
            let default = if deep { "7..=13" } else { "7..=12" };
            let last = match (args.size, &args.range) {
                (Some(m), _) => Some(m),
                (None, Some(r)) => Some(*harness::parse_range(r)?.end()),
                (None, None) => None,
            };
            if !deep && last.is_some_and(|m| m > 12) {
                return Err(Error::Usage("sizes above 12 require --deep".into()));
            }
            verify(&args, default, harness::verify_theorem1)
        }
        Command::VerifyTheorem2 { args } => verify(&args, "5..=10", harness::verify_theorem2),
        Command::Atlas {
            output,
            report,
            threads,
        } => {
            let (reg, rep) = harness::atlas(threads.max(1))?;
            fs::write(&output, format!("{}\n", reg.to_json()?))?;
            for id in &rep.discovery.unresolved {
                eprintln!("unresolved: {id}");
            }
            emit(&format!("{}\n", serde_json::to_string_pretty(&rep)?), report.as_deref())?;
            Ok(rep.outcome())
        }
        Command::Lemmas {
            probes,
            seed,
            output,
        } => {
            let report = harness::lemmas(probes, seed)?;
            for s in &report.summaries {
                eprintln!("{:<6} {:?} {}/{}", s.lemma.as_str(), s.status, s.matches, s.tuples);
            }
            emit(&format!("{}\n", serde_json::to_string_pretty(&report)?), output.as_deref())?;
            Ok(harness::lemma_outcome(&report))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(outcome) => ExitCode::from(outcome.code() as u8),
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::Usage(_) | Error::Parse { .. } => Outcome::Usage,
                _ => Outcome::Fail,
            };
            ExitCode::from(code.code() as u8)
        }
    }
}
