use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use threshspec::diagonalize::{diagonalize, eigencount, Shift};
use threshspec::sequences::{anti_regular, parse_flexible, CreationSequence};
use threshspec::spectra::{
    cross_check_inertia, spectral_summary, BisectionConfig, SpectraError, DEFAULT_TOL,
};
use threshspec::verify::{
    verify_conjecture, verify_corollary2_inequalities, verify_critical_cases, verify_sign_pattern,
    verify_theorem5_chain, VerifyConfig, VerifyError, DEFAULT_SIGN_SEED, DEFAULT_VERIFY_CAP,
};
use threshspec::{eigenvalues, sig, SequenceError};

const CAP_ENV: &str = "THRESHSPEC_CAP";

#[derive(Parser)]
#[command(
    name = "threshspec",
    version,
    about = "Eigenvalue counting and localization for threshold graphs"
)]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Args)]
struct Output {
    /// Write the result to this file instead of stdout
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct Tol {
    /// Bisection tolerance for eigenvalue localization
    #[arg(long, default_value_t = DEFAULT_TOL, value_parser = positive_real)]
    tol: f64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Emit {
    Sequence,
    Inertia,
    Spectrum,
    Signs,
}

#[derive(Subcommand)]
enum Verb {
    /// Diagonalize A - xI and count eigenvalues above, at and below x
    Diag {
        /// Creation sequence, as bits ("0101") or run-length tokens ("0^2 1 0 1")
        sequence: String,
        /// Eigenvalue threshold; the shift passed to the sweep is -x
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true, value_parser = finite_real)]
        x: f64,
        /// Emit the full trace (final diagonal, α-sequence, subcases, signs)
        #[arg(long)]
        trace: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Localize the smallest positive eigenvalue and the largest one below -1
    Spectrum {
        sequence: String,
        #[command(flatten)]
        tol: Tol,
        #[command(flatten)]
        output: Output,
    },
    /// Inertia and multiplicity of -1, with a cross-check against substring counting
    Inertia {
        sequence: String,
        #[command(flatten)]
        output: Output,
    },
    /// Dense Jacobi reference spectrum (n <= 64)
    Oracle {
        sequence: String,
        #[command(flatten)]
        output: Output,
    },
    /// Exhaustively compare every connected graph of order n with the anti-regular graph
    Verify {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        tol: Tol,
        /// Worker threads; the report does not depend on this
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        jobs: u64,
        /// json prints the report; csv prints one (seq, λ⁺, λ⁻) row per graph
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[command(flatten)]
        output: Output,
    },
    /// Compare the n-2 critical graphs with the anti-regular graph
    Critical {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        tol: Tol,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[command(flatten)]
        output: Output,
    },
    /// Properties of the anti-regular graph of order n
    Antiregular {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Emit::Sequence)]
        emit: Emit,
        /// Number of sampled shifts for --emit signs
        #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u64).range(1..))]
        samples: u64,
        #[command(flatten)]
        tol: Tol,
        #[command(flatten)]
        output: Output,
    },
    /// Widened-run inequality chains (λ⁻ for even n >= 8, λ⁺ for odd n >= 5)
    Chain {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        tol: Tol,
        #[command(flatten)]
        output: Output,
    },
}

fn positive_real(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() && v > 0.0 => Ok(v),
        _ => Err(format!("expected a positive number, got {s:?}")),
    }
}

fn finite_real(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(format!("expected a finite number, got {s:?}")),
    }
}

enum Failure {
    /// Bad input: exit 2.
    Usage(String),
    /// A computation failed: exit 1.
    Runtime(String),
}

impl From<SequenceError> for Failure {
    fn from(e: SequenceError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<SpectraError> for Failure {
    fn from(e: SpectraError) -> Self {
        match e {
            SpectraError::Sequence(e) => e.into(),
            other => Failure::Runtime(other.to_string()),
        }
    }
}

impl From<VerifyError> for Failure {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::Sequence(e) => e.into(),
            VerifyError::InvalidOrder { .. } => Failure::Usage(e.to_string()),
            other => Failure::Runtime(other.to_string()),
        }
    }
}

fn sequence_arg(text: &str) -> Result<CreationSequence, Failure> {
    parse_flexible(text).map_err(|e| Failure::Usage(format!("invalid sequence {text:?}: {e}")))
}

fn connected_arg(text: &str) -> Result<CreationSequence, Failure> {
    let seq = sequence_arg(text)?;
    seq.require_connected()?;
    Ok(seq)
}

fn cap_from_env() -> Result<usize, Failure> {
    match std::env::var(CAP_ENV) {
        Err(_) => Ok(DEFAULT_VERIFY_CAP),
        Ok(v) => v.trim().parse().map_err(|_| {
            Failure::Usage(format!(
                "{CAP_ENV} must be a non-negative integer, got {v:?}"
            ))
        }),
    }
}

/// Rendered output plus whether the verb's verdict was positive.
struct Emitted {
    body: String,
    ok: bool,
}

fn json<T: Serialize>(value: &T, ok: bool) -> Result<Emitted, Failure> {
    let mut body =
        serde_json::to_string_pretty(value).map_err(|e| Failure::Runtime(e.to_string()))?;
    body.push('\n');
    Ok(Emitted { body, ok })
}

fn csv_rows<T: Serialize>(rows: &[T], ok: bool) -> Result<Emitted, Failure> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in rows {
        writer
            .serialize(row)
            .map_err(|e| Failure::Runtime(e.to_string()))?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| Failure::Runtime(e.to_string()))?;
    let body = String::from_utf8(bytes).map_err(|e| Failure::Runtime(e.to_string()))?;
    Ok(Emitted { body, ok })
}

#[derive(Serialize)]
struct CountsOutput {
    seq: CreationSequence,
    #[serde(serialize_with = "sig::f64")]
    x: f64,
    greater: usize,
    equal: usize,
    less: usize,
}

#[derive(Serialize)]
struct InertiaOutput {
    seq: CreationSequence,
    n_plus: usize,
    n_zero: usize,
    n_minus: usize,
    n_minus_one: usize,
    counting: threshspec::Inertia,
    counting_agrees: bool,
}

#[derive(Serialize)]
struct CriticalOutput {
    n: usize,
    rows: Vec<threshspec::verify::CriticalRow>,
    verdict: bool,
}

#[derive(Serialize)]
struct SignsOutput {
    n: usize,
    samples: Vec<threshspec::verify::SignPatternCheck>,
    verdict: bool,
}

#[derive(Serialize)]
struct ChainOutput {
    #[serde(flatten)]
    report: threshspec::verify::ChainReport,
    verdict: bool,
}

fn run(verb: Verb) -> Result<(Emitted, Option<PathBuf>), Failure> {
    let emitted = match verb {
        Verb::Diag {
            sequence,
            x,
            trace,
            output,
        } => {
            let seq = sequence_arg(&sequence)?;
            let shift = Shift::at_probe(x).map_err(|e| Failure::Usage(e.to_string()))?;
            let result = if trace {
                json(&diagonalize(&seq, shift), true)?
            } else {
                let c = eigencount(&seq, x).map_err(|e| Failure::Runtime(e.to_string()))?;
                json(
                    &CountsOutput {
                        seq,
                        x,
                        greater: c.greater,
                        equal: c.equal,
                        less: c.less,
                    },
                    true,
                )?
            };
            (result, output.out)
        }
        Verb::Spectrum {
            sequence,
            tol,
            output,
        } => {
            let seq = connected_arg(&sequence)?;
            let summary = spectral_summary(&seq, &BisectionConfig::with_tol(tol.tol))?;
            (json(&summary, true)?, output.out)
        }
        Verb::Inertia { sequence, output } => {
            let seq = connected_arg(&sequence)?;
            let check = cross_check_inertia(&seq)?;
            if !check.agrees() {
                eprintln!(
                    "note: substring counting gives {:?}, diagonalization gives {:?}",
                    check.by_counting, check.by_diagonalization
                );
            }
            let d = check.by_diagonalization;
            let out = InertiaOutput {
                seq,
                n_plus: d.n_plus,
                n_zero: d.n_zero,
                n_minus: d.n_minus,
                n_minus_one: d.n_minus_one,
                counting: check.by_counting,
                counting_agrees: check.agrees(),
            };
            (json(&out, true)?, output.out)
        }
        Verb::Oracle { sequence, output } => {
            let seq = sequence_arg(&sequence)?;
            let spec = eigenvalues(&seq.adjacency()).map_err(|e| Failure::Usage(e.to_string()))?;
            (json(&spec, true)?, output.out)
        }
        Verb::Verify {
            n,
            tol,
            jobs,
            format,
            output,
        } => {
            let cfg = VerifyConfig {
                bisection: BisectionConfig::with_tol(tol.tol),
                jobs: jobs as usize,
                cap: cap_from_env()?,
            };
            let report = verify_conjecture(n, &cfg)?;
            let ok = report.verdict;
            let result = match format {
                Format::Json => json(&report, ok)?,
                Format::Csv => csv_rows(&report.rows, ok)?,
            };
            (result, output.out)
        }
        Verb::Critical {
            n,
            tol,
            format,
            output,
        } => {
            let cfg = VerifyConfig {
                bisection: BisectionConfig::with_tol(tol.tol),
                ..VerifyConfig::default()
            };
            let rows = verify_critical_cases(n, &cfg)?;
            let verdict = rows.iter().all(|r| r.dominated);
            let result = match format {
                Format::Json => json(&CriticalOutput { n, rows, verdict }, verdict)?,
                Format::Csv => csv_rows(&rows, verdict)?,
            };
            (result, output.out)
        }
        Verb::Antiregular {
            n,
            emit,
            samples,
            tol,
            output,
        } => {
            let seq = anti_regular(n)?;
            let cfg = BisectionConfig::with_tol(tol.tol);
            let result = match emit {
                Emit::Sequence => {
                    let rl = seq.to_run_length()?;
                    json(
                        &serde_json::json!({ "n": n, "sequence": seq, "run_length": rl.to_string() }),
                        true,
                    )?
                }
                Emit::Inertia => {
                    let i = threshspec::inertia_by_diagonalization(&seq)?;
                    json(&i, true)?
                }
                Emit::Spectrum => json(&spectral_summary(&seq, &cfg)?, true)?,
                Emit::Signs => {
                    let checks = verify_sign_pattern(n, samples as usize, DEFAULT_SIGN_SEED, &cfg)?;
                    let verdict = checks.iter().all(|c| c.matches);
                    json(
                        &SignsOutput {
                            n,
                            samples: checks,
                            verdict,
                        },
                        verdict,
                    )?
                }
            };
            (result, output.out)
        }
        Verb::Chain { n, tol, output } => {
            let cfg = VerifyConfig {
                bisection: BisectionConfig::with_tol(tol.tol),
                ..VerifyConfig::default()
            };
            let report = if n % 2 == 0 {
                verify_theorem5_chain(n, &cfg)?
            } else {
                verify_corollary2_inequalities(n, &cfg)?
            };
            let verdict = report.holds();
            (json(&ChainOutput { report, verdict }, verdict)?, output.out)
        }
    };
    Ok(emitted)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.verb) {
        Ok((emitted, out)) => {
            let written = match out {
                Some(path) => {
                    File::create(&path).and_then(|mut f| f.write_all(emitted.body.as_bytes()))
                }
                None => io::stdout().lock().write_all(emitted.body.as_bytes()),
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
            if emitted.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
