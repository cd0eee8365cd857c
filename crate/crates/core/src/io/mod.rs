//! File formats: plain-text bit matrices, JSON, and ASCII gate arrays.
//!
//! Readers accept either the text or the JSON form of a value and report
//! malformed input with a 1-based line and column.

mod diagram;
mod text;

use serde::de::DeserializeOwned;
use serde::Serialize;
use thiserror::Error;

use crate::bell::DesignationMatrix;
use crate::gate::GateSequence;
use crate::gf2::Mat10;
use crate::record::SolutionRecord;

pub use diagram::{parse_diagram, render_sequence, FOOTER};
pub use text::{
    format_bitvec, format_designation, format_matrix, parse_bitvec, parse_designation, parse_gate_list,
    parse_matrix,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        Self { line, column, message: message.into() }
    }
}

impl From<serde_json::Error> for ParseError {
    fn from(e: serde_json::Error) -> Self {
        // serde_json reports column 0 for errors at end of input
        Self::new(e.line().max(1), e.column().max(1), e.to_string())
    }
}

fn is_json(text: &str) -> bool {
    matches!(text.trim_start().chars().next(), Some('[' | '{'))
}

pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T, ParseError> {
    Ok(serde_json::from_str(text)?)
}

/// Pretty JSON with a final newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

/// A matrix as 10 text rows, a JSON array of row strings, or a
/// [`SolutionRecord`] whose `m_w` is taken.
pub fn read_matrix(text: &str) -> Result<Mat10, ParseError> {
    if !is_json(text) {
        return parse_matrix(text);
    }
    if text.trim_start().starts_with('{') {
        return Ok(from_json::<SolutionRecord>(text)?.m_w);
    }
    from_json(text)
}

/// A designation as 4 text rows, a JSON array of row strings, or a
/// [`SolutionRecord`] whose designation is taken.
pub fn read_designation(text: &str) -> Result<DesignationMatrix, ParseError> {
    if !is_json(text) {
        return parse_designation(text);
    }
    if text.trim_start().starts_with('{') {
        return Ok(from_json::<SolutionRecord>(text)?.designation);
    }
    from_json(text)
}

/// A sequence as JSON (the sequence object or a record), an ASCII gate
/// array, or a whitespace-separated gate list in reduction order.
pub fn read_sequence(text: &str) -> Result<GateSequence, ParseError> {
    if is_json(text) {
        let value: serde_json::Value = from_json(text)?;
        let seq = value.get("sequence").cloned().unwrap_or(value);
        return Ok(serde_json::from_value(seq)?);
    }
    if text.lines().any(|l| l.starts_with("1 -")) {
        return parse_diagram(text);
    }
    parse_gate_list(text)
}

/// One record, a JSON array of records, or one record per line (JSONL).
pub fn read_records(text: &str) -> Result<Vec<SolutionRecord>, ParseError> {
    if text.trim_start().starts_with('[') {
        return from_json(text);
    }
    if let Ok(one) = from_json::<SolutionRecord>(text) {
        return Ok(vec![one]);
    }
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        out.push(from_json(line).map_err(|e: ParseError| ParseError { line: i + 1, ..e })?);
    }
    if out.is_empty() {
        return Err(ParseError::new(1, 1, "no records"));
    }
    Ok(out)
}

/// Records one per line, each compact JSON.
pub fn to_jsonl(records: &[SolutionRecord]) -> String {
    let mut s = String::new();
    for r in records {
        s.push_str(&serde_json::to_string(r).expect("plain data serializes"));
        s.push('\n');
    }
    s
}
