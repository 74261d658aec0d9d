use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use genspectra_cli::document::{self, error_exit_code, QueryDocument};
use genspectra_cli::suites::{self, Scale};
use serde_json::Value;

/// Generalized-spectrum membership checks, witness extraction, and
/// verification suites over concrete coefficient algebras.
#[derive(Parser)]
#[command(name = "genspectra", version, about)]
struct Cli {
    /// Tolerance/engine configuration file (JSON object); overrides the
    /// GENSPECTRA_* environment variables.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    json: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide membership for the query document (exit code 0 = out,
    /// 1 = in, 2 = boundary-indeterminate).
    Check {
        /// Query document path, or - for stdin.
        #[arg(long)]
        doc: String,
    },
    /// Emit the witness certificate produced by the applicable rule.
    Witness {
        #[arg(long)]
        doc: String,
    },
    /// Run a named verification suite.
    Verify {
        /// Suite identifier; list with `verify list`.
        suite: String,
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
        #[arg(long, default_value = "small")]
        scale: String,
    },
    /// Dump per-depth smallest singular values of (aI - F) as CSV.
    OracleDump {
        #[arg(long)]
        doc: String,
        /// Depth ladder.
        #[arg(long, value_delimiter = ',', default_values_t = vec![16usize, 32, 64])]
        depths: Vec<usize>,
        /// Output CSV path (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn read_doc(path: &str) -> Result<Value, String> {
    let text = if path == "-" {
        use std::io::Read;
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| format!("reading stdin: {e}"))?;
        buf
    } else {
        fs::read_to_string(path).map_err(|e| format!("reading {path}: {e}"))?
    };
    serde_json::from_str(&text).map_err(|e| format!("parsing {path}: {e}"))
}

fn emit(json_path: &Option<PathBuf>, report: &Value) -> Result<(), String> {
    let text = serde_json::to_string_pretty(report).expect("report serializes");
    match json_path {
        Some(path) => fs::write(path, text).map_err(|e| format!("writing report: {e}")),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    let file_config = match &cli.config {
        Some(path) => match fs::read_to_string(path)
            .map_err(|e| format!("reading config {}: {e}", path.display()))
            .and_then(|t| {
                serde_json::from_str::<Value>(&t).map_err(|e| format!("parsing config: {e}"))
            }) {
            Ok(v) => Some(v),
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(10);
            }
        },
        None => None,
    };

    let code: i32 = match &cli.command {
        Command::Check { doc } | Command::Witness { doc } => {
            let value = match read_doc(doc) {
                Ok(v) => v,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(10);
                }
            };
            match QueryDocument::from_value(&value, file_config.as_ref()) {
                Ok(parsed) => {
                    let result = if matches!(cli.command, Command::Check { .. }) {
                        document::run_check(&parsed)
                    } else {
                        document::run_witness(&parsed)
                    };
                    match result {
                        Ok(out) => {
                            if let Err(e) = emit(&cli.json, &out.report) {
                                eprintln!("error: {e}");
                                return ExitCode::from(12);
                            }
                            out.exit_code
                        }
                        Err(e) => {
                            eprintln!("error: {e}");
                            error_exit_code(&e)
                        }
                    }
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    error_exit_code(&e)
                }
            }
        }
        Command::Verify { suite, seed, scale } => {
            if suite == "list" {
                for id in suites::suite_ids() {
                    println!("{id}");
                }
                return ExitCode::SUCCESS;
            }
            let scale = match scale.as_str() {
                "small" => Scale::Small,
                "full" => Scale::Full,
                other => {
                    eprintln!("error: unknown scale \"{other}\"");
                    return ExitCode::from(10);
                }
            };
            match suites::run_suite(suite, *seed, scale) {
                Ok(result) => {
                    let report = result.to_value();
                    if let Err(e) = emit(&cli.json, &report) {
                        eprintln!("error: {e}");
                        return ExitCode::from(12);
                    }
                    eprintln!(
                        "[{}] {} — {} cases, {} failures ({} ms)",
                        result.suite,
                        if result.passed() { "PASS" } else { "FAIL" },
                        result.cases,
                        result.failures.len(),
                        result.wall_ms
                    );
                    if result.passed() {
                        0
                    } else {
                        3
                    }
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    error_exit_code(&e)
                }
            }
        }
        Command::OracleDump { doc, depths, out } => {
            let value = match read_doc(doc) {
                Ok(v) => v,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(10);
                }
            };
            match QueryDocument::from_value(&value, file_config.as_ref())
                .and_then(|parsed| document::run_oracle_dump(&parsed, depths))
            {
                Ok(csv) => match out {
                    Some(path) => {
                        if let Err(e) = fs::write(path, csv) {
                            eprintln!("error: writing CSV: {e}");
                            return ExitCode::from(12);
                        }
                        0
                    }
                    None => {
                        print!("{csv}");
                        0
                    }
                },
                Err(e) => {
                    eprintln!("error: {e}");
                    error_exit_code(&e)
                }
            }
        }
    };
    ExitCode::from(code.clamp(0, 255) as u8)
}
