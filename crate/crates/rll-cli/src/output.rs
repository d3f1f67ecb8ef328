//! Output plumbing: format selection and stdout-or-file emission.

use std::io::Write;

use clap::ValueEnum;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub(crate) enum Format {
    Json,
    Csv,
}

/// Writes `body` to stdout or to a file. `structured` bodies already carry
/// their own trailing shape; scalars get a single newline.
pub(crate) fn emit(
    body: &str,
    _format: Format,
    output: Option<&str>,
    structured: bool,
) -> Result<(), CliError> {
    let mut text = body.to_string();
    if !text.ends_with('\n') && (!structured || !text.is_empty()) {
        text.push('\n');
    }
    match output {
        None => {
            print!("{text}");
            std::io::stdout()
                .flush()
                .map_err(|e| CliError::Compute(e.to_string()))
        }
        Some(path) => {
            std::fs::write(path, text).map_err(|e| CliError::Compute(format!("{path}: {e}")))
        }
    }
}
