//! `zigzag`: batch front end for zigzag-core.
//!
//! Exit codes: 0 on success, 1 when a check or validation fails, 2 on parse
//! and usage errors.

mod commands;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    /// Graph description; `skeleton` only.
    Dot,
}

#[derive(Debug, Parser)]
#[command(name = "zigzag", version, about = "Zig-zag presentations of perverse sheaves on curves with nodes")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: Format,
    /// Write output to PATH instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse and validate a .zzl file.
    Check { file: PathBuf },
    /// Dualize a zig-zag and decide whether it is self-dual.
    Dual { file: PathBuf, name: String },
    /// Extension class, normal form and self-duality of an extension.
    ExtClass { file: PathBuf, name: String },
    /// Assemble the node set and verify shadow compatibility.
    Assemble { file: PathBuf },
    /// Verify a gluing quadruple.
    Gluing { file: PathBuf, name: String },
    /// Export the combinatorial skeleton of the node set.
    Skeleton { file: PathBuf },
    /// Rebuild and verify the standard tables.
    Tables,
    /// Monodromy weight filtration of a nilpotent map.
    Wfilt {
        file: PathBuf,
        name: String,
        #[arg(long, allow_hyphen_values = true)]
        center: i64,
    },
    /// Logarithm of a unipotent map.
    Nlog { file: PathBuf, name: String },
    /// Picard-Lefschetz transformation.
    Pl {
        file: PathBuf,
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        delta: String,
        #[arg(long)]
        pairing: String,
    },
}

/// Rendered result of one invocation.
pub struct Outcome {
    pub code: u8,
    pub text: String,
    pub json: serde_json::Value,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let outcome = commands::run(&cli);
    let payload = match cli.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&outcome.json).expect("JSON values serialize");
            s.push('\n');
            s
        }
        Format::Text | Format::Dot => outcome.text,
    };
    let written = match &cli.out {
        Some(path) => std::fs::write(path, payload.as_bytes()),
        None => std::io::stdout().write_all(payload.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(outcome.code)
}
