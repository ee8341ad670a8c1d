use std::fmt;

use serde::{Deserialize, Serialize};

/// Parse failure with a byte offset into the original input.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, thiserror::Error)]
#[error("parse error at {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

impl ParseError {
    pub fn new(pos: usize, msg: impl fmt::Display) -> Self {
        Self { pos, msg: msg.to_string() }
    }

    pub fn shifted(self, by: usize) -> Self {
        Self { pos: self.pos + by, ..self }
    }
}

/// Splits on commas outside brackets; returns `(offset, trimmed piece)`.
pub fn split_top_level(s: &str) -> Result<Vec<(usize, &str)>, ParseError> {
    let mut out = Vec::new();
    let mut stack = Vec::new();
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' | '{' => stack.push((c, i)),
            ')' | ']' | '}' => {
                let open = match c {
                    ')' => '(',
                    ']' => '[',
                    _ => '{',
                };
                match stack.pop() {
                    Some((o, _)) if o == open => {}
                    _ => return Err(ParseError::new(i, format!("unbalanced '{c}'"))),
                }
            }
            ',' if stack.is_empty() => {
                out.push(trimmed(s, start, i)?);
                start = i + 1;
            }
            _ => {}
        }
    }
    if let Some((c, i)) = stack.pop() {
        return Err(ParseError::new(i, format!("unclosed '{c}'")));
    }
    if !s.trim().is_empty() {
        out.push(trimmed(s, start, s.len())?);
    }
    Ok(out)
}

fn trimmed(s: &str, start: usize, end: usize) -> Result<(usize, &str), ParseError> {
    let piece = &s[start..end];
    let lead = piece.len() - piece.trim_start().len();
    let t = piece.trim();
    if t.is_empty() {
        return Err(ParseError::new(start, "empty item"));
    }
    Ok((start + lead, t))
}

pub(crate) fn parse_i64(s: &str, at: usize) -> Result<i64, ParseError> {
    let t = s.trim().trim_start_matches('+');
    t.parse().map_err(|_| ParseError::new(at, format!("expected an integer, found '{}'", s.trim())))
}

/// `[1, -2, 3]`, `(1, -2, 3)` or a bare integer.
pub(crate) fn parse_int_tuple(s: &str) -> Result<Vec<i64>, ParseError> {
    let t = s.trim();
    let lead = s.len() - s.trim_start().len();
    let inner = match (t.chars().next(), t.chars().last()) {
        (Some('['), Some(']')) | (Some('('), Some(')')) => &t[1..t.len() - 1],
        _ => return Ok(vec![parse_i64(t, lead)?]),
    };
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    split_top_level(inner)
        .map_err(|e| e.shifted(lead + 1))?
        .into_iter()
        .map(|(off, p)| parse_i64(p, lead + 1 + off))
        .collect()
}

/// Word over single-letter generators, uppercase meaning inverse, with
/// optional integer exponents (`a^3`, `B^-2`). `e` or `1` alone is the empty
/// word. Returns `(generator index, exponent)` pairs.
pub(crate) fn parse_word(s: &str, letters: &[char]) -> Result<Vec<(usize, i64)>, ParseError> {
    let t = s.trim();
    if t == "e" || t == "1" || t.is_empty() {
        return Ok(Vec::new());
    }
    let bytes: Vec<(usize, char)> = s.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let (pos, c) = bytes[i];
        i += 1;
        if c.is_whitespace() {
            continue;
        }
        let Some(idx) = letters.iter().position(|l| *l == c.to_ascii_lowercase()) else {
            return Err(ParseError::new(pos, format!("unexpected '{c}'")));
        };
        let mut exp: i64 = if c.is_ascii_uppercase() { -1 } else { 1 };
        if i < bytes.len() && bytes[i].1 == '^' {
            let start = bytes[i].0 + 1;
            i += 1;
            let mut end = start;
            while i < bytes.len() && (bytes[i].1.is_ascii_digit() || (end == start && matches!(bytes[i].1, '-' | '+'))) {
                end = bytes[i].0 + bytes[i].1.len_utf8();
                i += 1;
            }
            exp *= parse_i64(&s[start..end], start)?;
        }
        out.push((idx, exp));
    }
    Ok(out)
}
