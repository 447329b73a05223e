use std::fs;
use std::io::{self, Read, Write};
use std::path::Path;

use cliquesys::io::{parse_document, Envelope};
use serde_json::{json, Map, Value};

/// Process exit status of a command that produced output.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok = 0,
    CheckFailed = 1,
    BudgetExhausted = 4,
}

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn params(message: impl ToString) -> Self {
        Failure { code: 2, message: message.to_string() }
    }

    pub fn input(message: impl ToString) -> Self {
        Failure { code: 3, message: message.to_string() }
    }
}

impl From<cliquesys::Error> for Failure {
    fn from(e: cliquesys::Error) -> Self {
        use cliquesys::Error::*;
        match e {
            MalformedClique { .. } | MalformedEdge { .. } | InvalidElement { .. } | UncoloredVertex(_) => {
                Failure::input(e)
            }
            _ => Failure::params(e),
        }
    }
}

pub type CmdResult<T> = std::result::Result<T, Failure>;

pub fn read_document(path: Option<&Path>) -> CmdResult<Envelope> {
    let text = match path {
        Some(p) => fs::read_to_string(p).map_err(|e| Failure::input(format!("{}: {e}", p.display())))?,
        None => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s).map_err(|e| Failure::input(format!("stdin: {e}")))?;
            s
        }
    };
    let doc = parse_document(&text).map_err(|e| Failure::input(format!("malformed document: {e}")))?;
    if doc.version != cliquesys::io::FORMAT_VERSION {
        return Err(Failure::input(format!("unsupported document version {}", doc.version)));
    }
    Ok(doc)
}

/// Tool name, version and the exact arguments, merged into provenance.
pub fn run_provenance(argv: &[String], seed: u64) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("tool".into(), json!("cliquesys"));
    m.insert("tool_version".into(), json!(cliquesys::VERSION));
    m.insert("config".into(), json!({ "argv": argv, "seed": seed }));
    m
}

pub fn emit(out: Option<&Path>, text: &str) -> CmdResult<()> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::params(format!("{}: {e}", p.display()))),
        None => {
            let mut stdout = io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Failure::params(format!("stdout: {e}")))
        }
    }
}

pub fn emit_json(out: Option<&Path>, envelope: &Envelope, extra: &Map<String, Value>) -> CmdResult<()> {
    let value = envelope.to_value_with(extra).map_err(|e| Failure::params(e.to_string()))?;
    let mut text = serde_json::to_string(&value).map_err(|e| Failure::params(e.to_string()))?;
    text.push('\n');
    emit(out, &text)
}

pub fn csv_text<R: serde::Serialize>(rows: impl IntoIterator<Item = R>) -> CmdResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row).map_err(|e| Failure::params(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::params(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Failure::params(e.to_string()))
}
