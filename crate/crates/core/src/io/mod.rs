//! Text formats, run reports and the benchmark table.

mod family;
mod instance;
mod report;

use std::fmt;

pub use family::{read_family, write_family};
pub use instance::{read_instance, write_instance};
pub use report::{
    bench_csv, run_bench, write_solution, BenchRow, RunReport, SolutionSummary, BENCH_HEADER,
};

/// A malformed input file. `line` and `column` are 1-based; column 0 means
/// the whole line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn at(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.column == 0 {
            write!(f, "line {}: {}", self.line, self.message)
        } else {
            write!(
                f,
                "line {}, column {}: {}",
                self.line, self.column, self.message
            )
        }
    }
}

impl std::error::Error for ParseError {}

/// Whitespace-separated tokens with their 1-based columns.
pub(crate) fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        match (ch.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((s + 1, &line[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

pub(crate) fn parse_num<T: std::str::FromStr>(
    line: usize,
    (column, text): (usize, &str),
    what: &str,
) -> Result<T, ParseError> {
    text.parse()
        .map_err(|_| ParseError::at(line, column, format!("expected {what}, found '{text}'")))
}

/// Parses `key=value` at the given token.
pub(crate) fn parse_field<T: std::str::FromStr>(
    line: usize,
    token: Option<(usize, &str)>,
    key: &str,
) -> Result<T, ParseError> {
    let Some((column, text)) = token else {
        return Err(ParseError::at(line, 0, format!("missing field {key}=")));
    };
    let Some(value) = text.strip_prefix(key).and_then(|r| r.strip_prefix('=')) else {
        return Err(ParseError::at(
            line,
            column,
            format!("expected {key}=<value>, found '{text}'"),
        ));
    };
    parse_num(line, (column + key.len() + 1, value), key)
}
