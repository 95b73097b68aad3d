use clap::ValueEnum;
use serde::Serialize;
use ttstar_core::Error;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(Error::InvalidArgument(_)) => 2,
            _ => 1,
        }
    }
}

/// Rendered output and whether the command's checks passed.
pub struct Output {
    pub text: String,
    pub passed: bool,
}

impl Output {
    pub fn new(text: String, passed: bool) -> Self {
        Output { text, passed }
    }
}

pub fn json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn csv(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut s = header.join(",");
    s.push('\n');
    for r in rows {
        s.push_str(&r.join(","));
        s.push('\n');
    }
    s
}

pub fn no_csv(command: &str) -> CliError {
    CliError::Usage(format!("{command} has no CSV output; use --format json or pretty"))
}
