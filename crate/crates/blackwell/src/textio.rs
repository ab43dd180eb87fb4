//! Plain-text file formats: matrices with one row per line, entries either
//! integers or `p/q` fractions, `#` starting a comment. Printing and parsing
//! round-trip exactly.

use crate::channel::{Channel, ChannelError, Prior, RewardMatrix};
use crate::exact_linear::{Mat, Rat};
use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ParseError {
    #[error("line {line}, column {column}: cannot parse `{token}` as an exact fraction")]
    BadToken {
        line: usize,
        column: usize,
        token: String,
    },
    #[error("line {line}, column {column}: zero denominator in `{token}`")]
    ZeroDenominator {
        line: usize,
        column: usize,
        token: String,
    },
    #[error("line {line}: expected {expected} entries, found {found}")]
    RaggedRow {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("no matrix rows found")]
    Empty,
    #[error(transparent)]
    Channel(#[from] ChannelError),
}

fn parse_entry(token: &str, line: usize, column: usize) -> Result<Rat, ParseError> {
    let bad = || ParseError::BadToken {
        line,
        column,
        token: token.to_string(),
    };
    let (num_s, den_s) = match token.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (token, None),
    };
    let numer: BigInt = num_s.parse().map_err(|_| bad())?;
    let denom: BigInt = match den_s {
        Some(d) => d.parse().map_err(|_| bad())?,
        None => BigInt::from(1),
    };
    if denom.is_zero() {
        return Err(ParseError::ZeroDenominator {
            line,
            column,
            token: token.to_string(),
        });
    }
    Ok(Rat::new(numer, denom))
}

/// Parse a whitespace-separated matrix. Blank lines and `#` comments are
/// skipped; a trailing `#` comment on a data line is allowed.
pub fn parse_matrix(text: &str) -> Result<Mat, ParseError> {
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let data = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        };
        let mut row = Vec::new();
        for token in data.split_whitespace() {
            // column = 1-based byte offset of the token within the line
            let column = data
                .find(token)
                .map(|i| i + 1)
                .unwrap_or(1);
            row.push(parse_entry(token, line, column)?);
        }
        if row.is_empty() {
            continue;
        }
        if let Some(first) = rows.first() {
            if row.len() != first.len() {
                return Err(ParseError::RaggedRow {
                    line,
                    expected: first.len(),
                    found: row.len(),
                });
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(ParseError::Empty);
    }
    Ok(Mat::from_rows(rows))
}

pub fn parse_channel(text: &str) -> Result<Channel, ParseError> {
    Ok(Channel::new(parse_matrix(text)?)?)
}

/// A prior is a matrix with a single row (or a single column).
pub fn parse_prior(text: &str) -> Result<Prior, ParseError> {
    let m = parse_matrix(text)?;
    let probs: Vec<Rat> = if m.rows() == 1 {
        m.row(0).to_vec()
    } else if m.cols() == 1 {
        m.col(0)
    } else {
        (0..m.rows()).flat_map(|i| m.row(i).to_vec()).collect()
    };
    Ok(Prior::new(probs)?)
}

pub fn parse_reward(text: &str) -> Result<RewardMatrix, ParseError> {
    Ok(RewardMatrix::new(parse_matrix(text)?))
}

/// One row per line, entries separated by single spaces. `Rat` displays as
/// `p/q` when the denominator isn't 1, so the output re-parses exactly.
pub fn matrix_to_text(m: &Mat) -> String {
    let mut out = String::new();
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(|v| v.to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn channel_to_text(c: &Channel) -> String {
    matrix_to_text(c.matrix())
}

pub fn vector_to_text(v: &[Rat]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    parts.join(" ")
}
