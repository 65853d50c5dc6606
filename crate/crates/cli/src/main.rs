//! `transmean`: ordinal arithmetic, transfinite means, block division, law
//! checking and capture verification from the command line.
//!
//! Exit codes: 0 on success, 1 on a failed check or a defined partial
//! operation (such as an indivisible length), 2 on usage, parse or
//! validation errors.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use transmean::capture::{self, ProbSpace};
use transmean::laws::{mutants, run_all, GenConfig, OracleCheck};
use transmean::mean::{divide_labels, OracleConfig};
use transmean::seq::{parse_label_seq, parse_real_seq};
use transmean::{divide, DivideError, MeanPair, Ordinal};

#[derive(Parser)]
#[command(name = "transmean", version, about = "Exact transfinite means of symbolic sequences")]
struct Cli {
    /// `text` for reports, `lines` for one key=value pair per line.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Lines,
}

#[derive(Subcommand)]
enum Command {
    /// Ordinal arithmetic in Cantor normal form.
    #[command(subcommand)]
    Ord(OrdCommand),
    /// Upper, lower and true mean of a sequence expression.
    Mean { expr: String },
    /// Block division: each block of the given length becomes its mean.
    Divide { expr: String, by: String },
    /// Seeded law suites.
    #[command(subcommand)]
    Laws(LawsCommand),
    /// Capturing sequences for finite probability spaces.
    #[command(subcommand)]
    Capture(CaptureCommand),
}

#[derive(Subcommand)]
enum OrdCommand {
    /// Print in canonical form.
    Eval { a: String },
    /// Compare: less, equal or greater.
    Cmp { a: String, b: String },
    Add { a: String, b: String },
    Mul { a: String, b: String },
    /// Standard decomposition `a = w^sigma*n + rho`.
    Decomp { a: String },
}

#[derive(Subcommand)]
enum LawsCommand {
    Run {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        cases: usize,
        /// Maximum nesting depth of generated sequences.
        #[arg(long, default_value_t = 4)]
        depth: u32,
        /// Truncation-oracle widths, level ω first.
        #[arg(long, value_delimiter = ',', default_values_t = [3000, 300, 60, 20])]
        widths: Vec<usize>,
        /// Slack allowed around the oracle's interval.
        #[arg(long, default_value_t = 0.02)]
        tolerance: f64,
        /// Swap in a deliberately broken evaluator (mutation testing).
        #[arg(long, hide = true, value_parser = clap::builder::PossibleValuesParser::new(mutants::NAMES))]
        mutant: Option<String>,
    },
}

#[derive(Subcommand)]
enum CaptureCommand {
    /// Print the capturing sequence of length w^depth.
    Build {
        space: PathBuf,
        #[arg(long, default_value_t = 1)]
        depth: u32,
    },
    /// Check every event of the space against a sequence.
    Verify {
        space: PathBuf,
        /// Label sequence to verify; defaults to the built sequence.
        #[arg(long)]
        seq: Option<String>,
        #[arg(long, default_value = "w")]
        resolution: String,
        /// Depth of the built sequence when `--seq` is absent.
        #[arg(long, default_value_t = 1)]
        depth: u32,
    },
    /// Monte-Carlo strong-law trials.
    Slln {
        space: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
        #[arg(long, default_value_t = 10)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// What a command printed and whether it succeeded.
struct Outcome {
    stdout: String,
    ok: bool,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { stdout, ok: true }
    }
}

/// A usage, parse or validation error (exit 2).
struct Usage(String);

impl<E: std::fmt::Display> From<E> for Usage {
    fn from(e: E) -> Self {
        Usage(e.to_string())
    }
}

type Result<T> = std::result::Result<T, Usage>;

fn ordinal(text: &str) -> Result<Ordinal> {
    Ordinal::parse(text).map_err(|e| Usage(format!("ordinal '{text}': {e}")))
}

fn read_space(path: &Path) -> Result<ProbSpace> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Usage(format!("{}: {e}", path.display())))?;
    capture::parse_space(&text).map_err(|e| Usage(format!("{}: {e}", path.display())))
}

/// `key=value` pairs, on one line or one per line.
fn pairs(format: Format, items: &[(&str, String)]) -> String {
    let sep = match format {
        Format::Text => " ",
        Format::Lines => "\n",
    };
    let body: Vec<String> = items.iter().map(|(k, v)| format!("{k}={v}")).collect();
    format!("{}\n", body.join(sep))
}

fn single(format: Format, key: &str, value: String) -> String {
    match format {
        Format::Text => format!("{value}\n"),
        Format::Lines => format!("{key}={value}\n"),
    }
}

fn cmd_ord(format: Format, cmd: OrdCommand) -> Result<Outcome> {
    let out = match cmd {
        OrdCommand::Eval { a } => single(format, "value", ordinal(&a)?.to_string()),
        OrdCommand::Cmp { a, b } => {
            let word = match ordinal(&a)?.cmp(&ordinal(&b)?) {
                std::cmp::Ordering::Less => "less",
                std::cmp::Ordering::Equal => "equal",
                std::cmp::Ordering::Greater => "greater",
            };
            single(format, "cmp", word.to_string())
        }
        OrdCommand::Add { a, b } => {
            single(format, "value", ordinal(&a)?.add(&ordinal(&b)?).to_string())
        }
        OrdCommand::Mul { a, b } => {
            single(format, "value", ordinal(&a)?.mul(&ordinal(&b)?).to_string())
        }
        OrdCommand::Decomp { a } => {
            let (sigma, n, rho) = match ordinal(&a)?.standard_decomposition() {
                Ok(d) => d,
                Err(e) => {
                    eprintln!("{e}");
                    return Ok(Outcome {
                        stdout: single(format, "error", "ZeroOrdinal".to_string()),
                        ok: false,
                    });
                }
            };
            pairs(
                format,
                &[
                    ("sigma", sigma.to_string()),
                    ("n", n.to_string()),
                    ("rho", rho.to_string()),
                ],
            )
        }
    };
    Ok(Outcome::ok(out))
}

fn cmd_mean(format: Format, expr: &str) -> Result<Outcome> {
    let s = parse_real_seq(expr)?;
    let m = MeanPair::of(&s);
    Ok(Outcome::ok(pairs(
        format,
        &[
            ("upper", m.upper.to_string()),
            ("lower", m.lower.to_string()),
            ("mean", m.mean().map_or_else(|| "none".into(), |v| v.to_string())),
        ],
    )))
}

fn cmd_divide(format: Format, expr: &str, by: &str) -> Result<Outcome> {
    let b = ordinal(by)?;
    let result = match parse_real_seq(expr) {
        Ok(s) => divide(&s, &b).map(|d| d.to_string()),
        Err(real_err) => match parse_label_seq(expr) {
            Ok(x) => divide_labels(&x, &b).map(|d| d.to_string()),
            Err(_) => return Err(real_err.into()),
        },
    };
    Ok(match result {
        Ok(d) => Outcome::ok(single(format, "result", d)),
        Err(e) => {
            eprintln!("{e}");
            Outcome {
                stdout: single(format, "error", e.name().to_string()),
                ok: false,
            }
        }
    })
}

fn cmd_laws(format: Format, cmd: LawsCommand) -> Result<Outcome> {
    let LawsCommand::Run {
        seed,
        cases,
        depth,
        widths,
        tolerance,
        mutant,
    } = cmd;
    if widths.is_empty() || widths.iter().any(|&w| w < 4) {
        return Err(Usage("--widths needs positive entries of at least 4".into()));
    }
    let cfg = GenConfig {
        seed,
        case_count: cases,
        max_depth: depth,
        ..GenConfig::default()
    };
    let cfg = match mutant.as_deref().and_then(mutants::by_name) {
        Some(evaluator) => GenConfig { evaluator, ..cfg },
        None => cfg,
    };
    let oracle = OracleCheck {
        config: OracleConfig {
            widths,
            ..OracleConfig::default()
        },
        tolerance,
    };
    let reports = run_all(&cfg, &oracle);
    let mut out = String::new();
    for r in &reports {
        writeln!(out, "{}", r.line()).unwrap();
        if format == Format::Text {
            for f in r.failures.iter().take(3) {
                writeln!(out, "  case {}: {}", f.case, f.detail).unwrap();
            }
        }
    }
    Ok(Outcome {
        stdout: out,
        ok: reports.iter().all(|r| r.passed()),
    })
}

fn cmd_capture(format: Format, cmd: CaptureCommand) -> Result<Outcome> {
    match cmd {
        CaptureCommand::Build { space, depth } => {
            let sp = read_space(&space)?;
            let x = capture::build_capture(&sp, depth)?;
            Ok(Outcome::ok(single(format, "seq", x.to_string())))
        }
        CaptureCommand::Verify {
            space,
            seq,
            resolution,
            depth,
        } => {
            let sp = read_space(&space)?;
            let x = match seq {
                Some(text) => parse_label_seq(&text)?,
                None => capture::build_capture(&sp, depth)?,
            };
            let res = ordinal(&resolution)?;
            let report = match capture::verify_capture(&sp, &x, &res) {
                Ok(r) => r,
                Err(capture::CaptureError::Divide(e @ DivideError::NotDivisible { .. })) => {
                    eprintln!("{e}");
                    return Ok(Outcome {
                        stdout: single(format, "error", e.name().to_string()),
                        ok: false,
                    });
                }
                Err(e) => return Err(e.into()),
            };
            let mut out = String::new();
            for e in &report.events {
                writeln!(out, "{}", e.line()).unwrap();
            }
            for (a, b) in &report.complement_failures {
                writeln!(out, "COMPLEMENT {a} {b} FAIL").unwrap();
            }
            Ok(Outcome {
                stdout: out,
                ok: report.passed(),
            })
        }
        CaptureCommand::Slln {
            space,
            samples,
            trials,
            seed,
        } => {
            if samples == 0 {
                return Err(Usage("--samples must be at least 1".into()));
            }
            let sp = read_space(&space)?;
            let r = capture::slln_trial(&sp, samples, trials, seed);
            let mut out = pairs(
                format,
                &[
                    ("samples", samples.to_string()),
                    ("trials", trials.to_string()),
                    ("seed", seed.to_string()),
                    ("sigma", format!("{:.6}", r.sigma)),
                    ("bound", format!("{:.6}", 3.0 * r.sigma)),
                ],
            );
            for e in &r.events {
                out += &pairs(
                    format,
                    &[
                        ("event", e.name.clone()),
                        ("m", e.mass.to_string()),
                        ("max_dev", format!("{:.6}", e.max_deviation)),
                        ("bound", format!("{:.6}", e.bound)),
                        ("exceedances", e.exceeding_trials.len().to_string()),
                    ],
                );
            }
            out += &pairs(
                format,
                &[
                    ("max_deviation", format!("{:.6}", r.max_deviation())),
                    ("exceedances", r.exceedances().to_string()),
                ],
            );
            Ok(Outcome {
                stdout: out,
                ok: r.passed(),
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Ord(cmd) => cmd_ord(cli.format, cmd),
        Command::Mean { expr } => cmd_mean(cli.format, &expr),
        Command::Divide { expr, by } => cmd_divide(cli.format, &expr, &by),
        Command::Laws(cmd) => cmd_laws(cli.format, cmd),
        Command::Capture(cmd) => cmd_capture(cli.format, cmd),
    };
    match result {
        Ok(outcome) => {
            print!("{}", outcome.stdout);
            if outcome.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
