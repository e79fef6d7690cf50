//! The resolved experiment configuration and its `key = value` file format.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Gen,
    RunFlip,
    VerifyGn,
    SmoothHk,
    EpsilonStudy,
    TwoFlipBound,
}

impl Command {
    pub const ALL: [Command; 6] =
        [Command::Gen, Command::RunFlip, Command::VerifyGn, Command::SmoothHk, Command::EpsilonStudy, Command::TwoFlipBound];

    pub fn name(self) -> &'static str {
        match self {
            Command::Gen => "gen",
            Command::RunFlip => "run-flip",
            Command::VerifyGn => "verify-gn",
            Command::SmoothHk => "smooth-hk",
            Command::EpsilonStudy => "epsilon-study",
            Command::TwoFlipBound => "two-flip-bound",
        }
    }
}

impl FromStr for Command {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| CliError::invalid(format!("unknown command `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// Everything that determines a command's output.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExperimentConfig {
    pub command: Command,
    /// Command-specific settings, keyed by flag name.
    pub params: BTreeMap<String, String>,
    pub master_seed: u64,
    pub output_dir: String,
    pub format: Format,
}

/// Keys of the file format that are not command parameters.
const RESERVED: [&str; 4] = ["command", "master_seed", "output_dir", "format"];

impl fmt::Display for ExperimentConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "command = {}", self.command.name())?;
        writeln!(f, "master_seed = {}", self.master_seed)?;
        writeln!(f, "output_dir = {}", self.output_dir)?;
        writeln!(f, "format = {}", self.format.name())?;
        for (k, v) in &self.params {
            writeln!(f, "{k} = {v}")?;
        }
        Ok(())
    }
}

/// Raw `key = value` pairs in file order. Keys use `_` or `-` interchangeably.
pub fn parse_pairs(text: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::invalid(format!("config line {}: expected `key = value`", i + 1)))?;
        let key = k.trim().replace('-', "_");
        if key.is_empty() {
            return Err(CliError::invalid(format!("config line {}: empty key", i + 1)));
        }
        out.push((key, v.trim().to_string()));
    }
    Ok(out)
}

impl FromStr for ExperimentConfig {
    type Err = CliError;

    fn from_str(text: &str) -> Result<Self, CliError> {
        let pairs = parse_pairs(text)?;
        let get = |key: &str| pairs.iter().rev().find(|(k, _)| k == key).map(|(_, v)| v.as_str());
        let command = get("command").ok_or_else(|| CliError::invalid("config has no `command`"))?.parse()?;
        let master_seed = match get("master_seed") {
            Some(s) => s.parse().map_err(|_| CliError::invalid(format!("bad master_seed `{s}`")))?,
            None => 0,
        };
        let format = match get("format") {
            None | Some("csv") => Format::Csv,
            Some("json") => Format::Json,
            Some(other) => return Err(CliError::invalid(format!("unknown format `{other}`"))),
        };
        let params = pairs.iter().filter(|(k, _)| !RESERVED.contains(&k.as_str())).cloned().collect();
        Ok(ExperimentConfig {
            command,
            params,
            master_seed,
            output_dir: get("output_dir").unwrap_or(".").to_string(),
            format,
        })
    }
}

/// Turns config pairs into command-line arguments placed before the user's,
/// so explicit flags override the file.
pub fn pairs_to_args(pairs: &[(String, String)]) -> Vec<String> {
    let mut args = Vec::new();
    for (k, v) in pairs {
        let flag = match k.as_str() {
            "command" => continue,
            "master_seed" => "seed".to_string(),
            other => other.replace('_', "-"),
        };
        match v.as_str() {
            "true" => args.push(format!("--{flag}")),
            "false" => {}
            _ => args.push(format!("--{flag}={v}")),
        }
    }
    args
}
