//! The `flipcut` command-line tool.
//!
//! Exit codes: 0 success, 1 a verification failed, 2 invalid input,
//! 3 a resource budget was exceeded.

use std::fmt;
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;

mod commands;
pub mod config;
mod output;

use config::{parse_pairs, pairs_to_args, Command};

pub const EXIT_VERIFY: u8 = 1;
pub const EXIT_INVALID: u8 = 2;
pub const EXIT_RESOURCE: u8 = 3;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub msg: String,
}

impl CliError {
    pub fn invalid(msg: impl Into<String>) -> Self {
        CliError { code: EXIT_INVALID, msg: msg.into() }
    }

    pub fn verification(msg: impl Into<String>) -> Self {
        CliError { code: EXIT_VERIFY, msg: msg.into() }
    }

    fn io(path: &Path, e: std::io::Error) -> Self {
        CliError::invalid(format!("{}: {e}", path.display()))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.msg)
    }
}

impl From<flipcut::Error> for CliError {
    fn from(e: flipcut::Error) -> Self {
        let code = match e {
            flipcut::Error::Verification(_) => EXIT_VERIFY,
            flipcut::Error::Resource(_) => EXIT_RESOURCE,
            flipcut::Error::InvalidInput(_) | flipcut::Error::Parse { .. } | flipcut::Error::Io(_) => EXIT_INVALID,
        };
        CliError { code, msg: e.to_string() }
    }
}

/// Splices a `--config` file into the arguments: its pairs go right after
/// the subcommand, so flags given on the command line take precedence.
fn expand_config(argv: Vec<String>) -> Result<Vec<String>, CliError> {
    let mut rest = Vec::with_capacity(argv.len());
    let mut file = None;
    let mut it = argv.into_iter();
    let bin = it.next().unwrap_or_else(|| "flipcut".into());
    while let Some(a) = it.next() {
        if a == "--config" {
            file = Some(it.next().ok_or_else(|| CliError::invalid("--config needs a file"))?);
        } else if let Some(f) = a.strip_prefix("--config=") {
            file = Some(f.to_string());
        } else {
            rest.push(a);
        }
    }
    let Some(file) = file else {
        return Ok(std::iter::once(bin).chain(rest).collect());
    };
    let text = std::fs::read_to_string(&file).map_err(|e| CliError::io(Path::new(&file), e))?;
    let pairs = parse_pairs(&text)?;
    let from_file = pairs.iter().rev().find(|(k, _)| k == "command").map(|(_, v)| v.parse::<Command>()).transpose()?;
    let given = rest.first().and_then(|a| a.parse::<Command>().ok());
    let command = match (given, from_file) {
        (Some(g), Some(f)) if g != f => {
            return Err(CliError::invalid(format!("config file is for `{}`, not `{}`", f.name(), g.name())))
        }
        (Some(g), _) => {
            rest.remove(0);
            g
        }
        (None, Some(f)) => f,
        (None, None) => return Err(CliError::invalid("no subcommand given and the config file names none")),
    };
    let mut out = vec![bin, command.name().to_string()];
    out.extend(pairs_to_args(&pairs));
    out.extend(rest);
    Ok(out)
}

pub fn run(argv: Vec<String>) -> ExitCode {
    let argv = match expand_config(argv) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.code);
        }
    };
    let cli = match commands::Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INVALID } else { 0 });
        }
    };
    match commands::dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code)
        }
    }
}
