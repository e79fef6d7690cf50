//! Output files. Every file starts with the tool version and the resolved
//! configuration, and is written to a temporary name first, then renamed.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::CliError;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, bytes).map_err(|e| CliError::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| CliError::io(path, e))
}

/// `#` comment lines naming the tool version and the configuration.
pub fn comment_header(cfg: &ExperimentConfig) -> String {
    let mut out = format!("# flipcut {TOOL_VERSION}\n");
    for line in cfg.to_string().lines() {
        out.push_str("# ");
        out.push_str(line);
        out.push('\n');
    }
    out
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    tool_version: &'static str,
    config: &'a ExperimentConfig,
    #[serde(flatten)]
    body: &'a T,
}

pub fn json<T: Serialize>(cfg: &ExperimentConfig, body: &T) -> Result<Vec<u8>, CliError> {
    let mut bytes = serde_json::to_vec_pretty(&Envelope { tool_version: TOOL_VERSION, config: cfg, body })
        .map_err(|e| CliError::invalid(format!("cannot serialize output: {e}")))?;
    bytes.push(b'\n');
    Ok(bytes)
}

/// CSV with the comment header; `rows` must all have `header.len()` fields.
pub fn csv(cfg: &ExperimentConfig, header: &[&str], rows: &[Vec<String>]) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(comment_header(cfg).into_bytes());
    let fail = |e: csv::Error| CliError::invalid(format!("cannot write CSV: {e}"));
    w.write_record(header).map_err(fail)?;
    for row in rows {
        w.write_record(row).map_err(fail)?;
    }
    w.into_inner().map_err(|e| CliError::invalid(format!("cannot write CSV: {e}")))
}

pub fn in_dir(cfg: &ExperimentConfig, file: &str) -> PathBuf {
    Path::new(&cfg.output_dir).join(file)
}
