//! Report envelope, output and exit codes.

use std::fmt;
use std::fs;
use std::process::ExitCode;

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub const TOOL: &str = "crshadow";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Why a command stopped; each kind maps to one exit code.
#[derive(Debug)]
pub enum Failure {
    /// Bad arguments or unreadable input (exit 1).
    Input(String),
    /// The system's legal set is empty (exit 2).
    Flagged(String),
}

impl Failure {
    pub fn code(&self) -> ExitCode {
        match self {
            Failure::Input(_) => ExitCode::from(1),
            Failure::Flagged(_) => ExitCode::from(2),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Input(m) => write!(f, "error: {m}"),
            Failure::Flagged(m) => write!(f, "flagged: {m}"),
        }
    }
}

impl From<crshadow::Error> for Failure {
    fn from(e: crshadow::Error) -> Self {
        match e {
            crshadow::Error::Flagged => Failure::Flagged(e.to_string()),
            e => Failure::Input(e.to_string()),
        }
    }
}

pub type CmdResult<T> = Result<T, Failure>;

/// What a command produced: the report body and whether every check passed.
pub struct Outcome {
    pub body: Value,
    pub markdown: Option<String>,
    pub ok: bool,
}

impl Outcome {
    pub fn ok(body: Value) -> Self {
        Outcome { body, markdown: None, ok: true }
    }

    pub fn code(&self) -> ExitCode {
        if self.ok {
            ExitCode::SUCCESS
        } else {
            ExitCode::from(3)
        }
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Reads an input file and returns its text with the content hash.
pub fn read_input(path: &str) -> CmdResult<(String, String)> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("cannot read `{path}`: {e}")))?;
    let hash = sha256_hex(text.as_bytes());
    Ok((text, hash))
}

/// Wraps a body with the tool version, the config and its hash. Object keys
/// serialize sorted, so equal configs give equal bytes.
pub fn envelope(config: &Value, body: Value) -> Value {
    let canonical = serde_json::to_string(config).expect("config serializes");
    json!({
        "tool": TOOL,
        "version": VERSION,
        "config": config,
        "configHash": sha256_hex(canonical.as_bytes()),
        "report": body,
    })
}

pub fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

pub fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("values serialize")
}

/// Markdown header with the same provenance fields as the JSON envelope.
pub fn markdown_header(config: &Value) -> String {
    let canonical = serde_json::to_string(config).expect("config serializes");
    format!("<!-- {TOOL} {VERSION} config {} -->\n", sha256_hex(canonical.as_bytes()))
}
