//! Output plumbing: the config-echoing envelope, CSV projections, and the
//! error-to-exit-code mapping.

use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::RunConfig;

#[derive(Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
}

/// Writer for stdout or a file.
pub struct Sink {
    inner: Box<dyn Write>,
}

impl Sink {
    pub fn open(path: Option<&Path>) -> io::Result<Sink> {
        let inner: Box<dyn Write> = match path {
            Some(p) => Box::new(BufWriter::new(File::create(p)?)),
            None => Box::new(io::stdout().lock()),
        };
        Ok(Sink { inner })
    }

    pub fn line(&mut self, s: &str) -> Result<(), CliError> {
        writeln!(self.inner, "{s}").map_err(CliError::io)
    }
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    config: &'a RunConfig,
    result: T,
}

/// Emits the canonical JSON envelope.
pub fn emit_json<T: Serialize>(
    sink: &mut Sink,
    config: &RunConfig,
    result: T,
) -> Result<(), CliError> {
    let body = serde_json::to_string_pretty(&Envelope { config, result })
        .map_err(|e| CliError::internal(format!("serialization: {e}")))?;
    sink.line(&body)
}

/// Emits a CSV projection: a config header comment, the column row, then rows.
pub fn emit_csv(
    sink: &mut Sink,
    config: &RunConfig,
    columns: &[&str],
    rows: &[Vec<String>],
) -> Result<(), CliError> {
    let header = serde_json::to_string(config)
        .map_err(|e| CliError::internal(format!("serialization: {e}")))?;
    sink.line(&format!("# config {header}"))?;
    sink.line(&columns.join(","))?;
    for row in rows {
        sink.line(&row.join(","))?;
    }
    Ok(())
}

/// Error with its process exit code: 2 usage, 3 caps, 4 invariant violation.
#[derive(Debug)]
pub struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> CliError {
        CliError { code: 2, message: message.into() }
    }

    pub fn invariant(message: impl Into<String>) -> CliError {
        CliError { code: 4, message: message.into() }
    }

    pub fn internal(message: impl Into<String>) -> CliError {
        CliError { code: 2, message: message.into() }
    }

    pub fn io(e: io::Error) -> CliError {
        CliError { code: 2, message: format!("io: {e}") }
    }

    pub fn exit_code(&self) -> u8 {
        self.code
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.message)
    }
}

impl From<qekr::Error> for CliError {
    fn from(e: qekr::Error) -> CliError {
        let code = match &e {
            qekr::Error::EnumerationCap { .. } | qekr::Error::VertexCap { .. } => 3,
            _ => 2,
        };
        CliError { code, message: e.to_string() }
    }
}
