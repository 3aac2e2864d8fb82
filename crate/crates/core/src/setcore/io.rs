//! Set file format.
//!
//! Either plain text with one base-10 integer per line (blank lines and
//! lines starting with `#` are skipped) or a JSON array of integers. The
//! reader picks the format from the first non-whitespace byte.

use std::path::Path;

use super::IntegerSet;
use crate::error::{Error, Result};

pub fn parse_set(input: &str) -> Result<IntegerSet> {
    let trimmed = input.trim_start();
    if trimmed.starts_with('[') {
        let values: Vec<i64> =
            serde_json::from_str(trimmed).map_err(|e| Error::Parse(format!("JSON set: {e}")))?;
        return IntegerSet::new(values);
    }
    let mut values = Vec::new();
    for (lineno, line) in input.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let v: i64 = line
            .parse()
            .map_err(|e| Error::Parse(format!("line {}: {line:?}: {e}", lineno + 1)))?;
        values.push(v);
    }
    IntegerSet::new(values)
}

pub fn read_set_file(path: impl AsRef<Path>) -> Result<IntegerSet> {
    let text = std::fs::read_to_string(path)?;
    parse_set(&text)
}

/// One integer per line, trailing newline included.
pub fn format_set_text(set: &IntegerSet) -> String {
    let mut out = String::with_capacity(set.len() * 8);
    for x in set.iter() {
        out.push_str(&x.to_string());
        out.push('\n');
    }
    out
}

pub fn format_set_json(set: &IntegerSet) -> String {
    serde_json::to_string(set.elements()).expect("integers always serialize")
}
