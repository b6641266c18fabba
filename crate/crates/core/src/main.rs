use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use rpe_core::cli::{parse, run, RunOptions, ORACLE_BOUND_VAR};
use rpe_core::oracle::DEFAULT_BOUND;
use rpe_core::rpe::TieBreak;

#[derive(Parser)]
#[command(
    name = "rpe",
    version,
    about = "Generalized prime ideal factorizations of submodules"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a session file (`-` reads standard input).
    Run {
        file: String,
        /// Emit one JSON object per command.
        #[arg(long)]
        json: bool,
        /// Cross-check results of finite Z-modules against brute force.
        #[arg(long)]
        oracle: bool,
        /// Seed for random tie-breaking; implies `--tie-break random` unless given.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum)]
        tie_break: Option<TieBreakArg>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum TieBreakArg {
    Canonical,
    Random,
}

fn oracle_bound() -> Result<usize, String> {
    match std::env::var(ORACLE_BOUND_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| format!("{ORACLE_BOUND_VAR} must be a positive integer, got `{v}`")),
        Err(_) => Ok(DEFAULT_BOUND),
    }
}

fn main() -> ExitCode {
    let Cmd::Run {
        file,
        json,
        oracle,
        seed,
        tie_break,
    } = Cli::parse().command;

    let (text, base_dir) = if file == "-" {
        let mut s = String::new();
        if let Err(e) = std::io::stdin().read_to_string(&mut s) {
            eprintln!("error: cannot read standard input: {e}");
            return ExitCode::from(1);
        }
        (s, PathBuf::from("."))
    } else {
        match std::fs::read_to_string(&file) {
            Ok(s) => (
                s,
                Path::new(&file)
                    .parent()
                    .map(Path::to_path_buf)
                    .unwrap_or_default(),
            ),
            Err(e) => {
                eprintln!("error: cannot read {file}: {e}");
                return ExitCode::from(1);
            }
        }
    };
    let oracle_bound = match oracle_bound() {
        Ok(b) => b,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let tie_break = match (tie_break, seed) {
        (Some(TieBreakArg::Canonical), _) => TieBreak::Canonical,
        (Some(TieBreakArg::Random), s) => TieBreak::Random(s.unwrap_or(0)),
        (None, Some(s)) => TieBreak::Random(s),
        (None, None) => TieBreak::Canonical,
    };
    let opts = RunOptions {
        oracle,
        oracle_bound,
        tie_break,
        base_dir: if base_dir.as_os_str().is_empty() {
            PathBuf::from(".")
        } else {
            base_dir
        },
    };
    let session = match parse(&text) {
        Ok(s) => s,
        Err(e) => {
            let source = if file == "-" {
                "<stdin>"
            } else {
                file.as_str()
            };
            eprintln!("error: {source}:{e}");
            return ExitCode::from(1);
        }
    };
    let report = run(&session, &opts);
    if json {
        print!("{}", report.json_lines());
    } else {
        print!("{}", report.text());
    }
    ExitCode::from(report.status().code() as u8)
}
