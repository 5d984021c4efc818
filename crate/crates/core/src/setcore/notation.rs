//! Set literals: roster form `{3,2,15}` and gap form `(2|1,6,1,5)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::set::{FiniteSet, MAX_ELEMENT};
use crate::error::{Error, Result};

/// A set given by its minimum and its consecutive gaps.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GapForm {
    pub base: u64,
    pub gaps: Vec<u64>,
}

impl GapForm {
    pub fn new(base: u64, gaps: Vec<u64>) -> Result<Self> {
        if let Some(i) = gaps.iter().position(|&g| g == 0) {
            return Err(Error::NonPositiveGap {
                position: i,
                token: "0".into(),
            });
        }
        Ok(GapForm { base, gaps })
    }

    pub fn to_set(&self) -> Result<FiniteSet> {
        let mut v = Vec::with_capacity(self.gaps.len() + 1);
        let mut cur = self.base as u128;
        v.push(self.base);
        for &g in &self.gaps {
            cur += g as u128;
            if cur > MAX_ELEMENT as u128 {
                return Err(Error::ElementTooLarge(cur));
            }
            v.push(cur as u64);
        }
        FiniteSet::from_sorted(v)
    }
}

impl fmt::Display for GapForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}|", self.base)?;
        for (i, g) in self.gaps.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{g}")?;
        }
        f.write_str(")")
    }
}

impl FromStr for GapForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (base, gaps) = parse_spohn_parts(s)?;
        Ok(GapForm { base, gaps })
    }
}

pub fn to_spohn(set: &FiniteSet) -> GapForm {
    GapForm {
        base: set.min(),
        gaps: set.gaps(),
    }
}

/// Result of parsing a set literal. Duplicate roster entries are dropped
/// and reported here rather than rejected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParsedSet {
    pub set: FiniteSet,
    pub duplicates: Vec<u64>,
}

impl ParsedSet {
    pub fn has_duplicates(&self) -> bool {
        !self.duplicates.is_empty()
    }
}

fn parse_err(position: usize, token: &str, message: impl Into<String>) -> Error {
    Error::Parse {
        position,
        token: token.to_string(),
        message: message.into(),
    }
}

/// Locates `open ... close` in `text`, returning the inner slice and its offset.
fn delimited(text: &str, open: char, close: char) -> Result<(&str, usize)> {
    let start = text.len() - text.trim_start().len();
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Err(parse_err(0, "", "empty input"));
    }
    if !trimmed.starts_with(open) {
        let tok: String = trimmed.chars().take(1).collect();
        return Err(parse_err(start, &tok, format!("expected `{open}`")));
    }
    if !trimmed.ends_with(close) || trimmed.len() < 2 {
        let end = start + trimmed.len();
        let tok: String = trimmed.chars().last().into_iter().collect();
        return Err(parse_err(
            end - tok.len(),
            &tok,
            format!("expected `{close}`"),
        ));
    }
    let inner = &trimmed[open.len_utf8()..trimmed.len() - close.len_utf8()];
    Ok((inner, start + open.len_utf8()))
}

/// Splits on commas, yielding trimmed tokens with their absolute positions.
fn tokens(inner: &str, offset: usize) -> impl Iterator<Item = (&str, usize)> {
    let mut pos = offset;
    inner.split(',').map(move |piece| {
        let lead = piece.len() - piece.trim_start().len();
        let at = pos + lead;
        pos += piece.len() + 1;
        (piece.trim(), at)
    })
}

enum Int {
    Value(u64),
    NonPositive,
}

fn parse_int(token: &str, position: usize) -> Result<Int> {
    if token.is_empty() {
        return Err(parse_err(position, token, "missing value"));
    }
    let body = token.strip_prefix(['-', '+']).unwrap_or(token);
    if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
        return Err(parse_err(position, token, "malformed integer"));
    }
    if token.starts_with('-') {
        return if body.bytes().all(|b| b == b'0') {
            Ok(Int::NonPositive)
        } else {
            Err(parse_err(position, token, "negative value"))
        };
    }
    match body.parse::<u64>() {
        Ok(0) => Ok(Int::NonPositive),
        Ok(v) if v <= MAX_ELEMENT => Ok(Int::Value(v)),
        _ => Err(parse_err(position, token, "value exceeds 2^62-1")),
    }
}

fn parse_nonneg(token: &str, position: usize) -> Result<u64> {
    match parse_int(token, position) {
        Ok(Int::Value(v)) => Ok(v),
        Ok(Int::NonPositive) => Ok(0),
        Err(e) => Err(e),
    }
}

pub fn parse_roster(text: &str) -> Result<ParsedSet> {
    let (inner, offset) = delimited(text, '{', '}')?;
    if inner.trim().is_empty() {
        return Err(parse_err(offset - 1, "{}", "empty list"));
    }
    let mut values = tokens(inner, offset)
        .map(|(tok, at)| parse_nonneg(tok, at))
        .collect::<Result<Vec<_>>>()?;
    values.sort_unstable();
    let mut duplicates: Vec<u64> = values
        .windows(2)
        .filter(|w| w[0] == w[1])
        .map(|w| w[0])
        .collect();
    duplicates.dedup();
    values.dedup();
    Ok(ParsedSet {
        set: FiniteSet::from_sorted_unchecked(values),
        duplicates,
    })
}

fn parse_spohn_parts(text: &str) -> Result<(u64, Vec<u64>)> {
    let (inner, offset) = delimited(text, '(', ')')?;
    let Some(bar) = inner.find('|') else {
        return Err(parse_err(
            offset,
            inner.trim(),
            "expected `|` after the base",
        ));
    };
    let base_piece = &inner[..bar];
    let lead = base_piece.len() - base_piece.trim_start().len();
    let base = parse_nonneg(base_piece.trim(), offset + lead)?;
    let rest = &inner[bar + 1..];
    let mut gaps = Vec::new();
    if !rest.trim().is_empty() {
        for (tok, at) in tokens(rest, offset + bar + 1) {
            match parse_int(tok, at) {
                Ok(Int::Value(g)) => gaps.push(g),
                Ok(Int::NonPositive) => {
                    return Err(Error::NonPositiveGap {
                        position: at,
                        token: tok.to_string(),
                    })
                }
                // "-3" is a gap <= 0 rather than a malformed token
                Err(Error::Parse { message, .. }) if message == "negative value" => {
                    return Err(Error::NonPositiveGap {
                        position: at,
                        token: tok.to_string(),
                    })
                }
                Err(e) => return Err(e),
            }
        }
    }
    Ok((base, gaps))
}

pub fn parse_spohn(text: &str) -> Result<FiniteSet> {
    let (base, gaps) = parse_spohn_parts(text)?;
    GapForm { base, gaps }.to_set()
}

/// Parses either notation, chosen by the first non-blank character.
pub fn parse_set(text: &str) -> Result<ParsedSet> {
    match text.trim_start().chars().next() {
        Some('{') => parse_roster(text),
        Some('(') => Ok(ParsedSet {
            set: parse_spohn(text)?,
            duplicates: Vec::new(),
        }),
        Some(c) => Err(parse_err(
            text.len() - text.trim_start().len(),
            &c.to_string(),
            "expected a set literal `{a,b,...}` or `(base|g1,g2,...)`",
        )),
        None => Err(parse_err(0, "", "empty input")),
    }
}
