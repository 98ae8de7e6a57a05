//! Step sequences `[a_1, ..., a_m]` naming classes, zero removal and the
//! repetition notation `(1, a)^p`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A zero-free integer sequence. Construction always normalizes.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StepSequence(Vec<i64>);

impl StepSequence {
    pub fn new(entries: impl Into<Vec<i64>>) -> Self {
        seq_normalize(&entries.into())
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `a_1, ..., a_m, a_m, ..., a_1`
    pub fn full(&self) -> Vec<i64> {
        self.0.iter().chain(self.0.iter().rev()).copied().collect()
    }

    pub fn is_positive(&self) -> bool {
        self.0.iter().all(|&a| a > 0)
    }

    pub fn is_negative(&self) -> bool {
        !self.0.is_empty() && self.0.iter().all(|&a| a < 0)
    }

    pub fn negated(&self) -> Self {
        Self(self.0.iter().map(|a| -a).collect())
    }

    /// Sum of the entries, which is tau of the class.
    pub fn tau(&self) -> i64 {
        self.0.iter().sum()
    }

    /// Sign of the first entry.
    pub fn epsilon(&self) -> i64 {
        self.0.first().map_or(0, |a| a.signum())
    }

    /// Concatenation, normalized.
    pub fn concat(&self, other: &Self) -> Self {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        seq_normalize(&v)
    }
}

impl From<StepSequence> for Vec<i64> {
    fn from(s: StepSequence) -> Self {
        s.0
    }
}

impl fmt::Display for StepSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (k, a) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str("]")
    }
}

/// Removes zeros from the symmetrized sequence: an interior zero merges its
/// neighbours, `[.., x, 0, y, ..] = [.., x + y, ..]`; a zero at either end is
/// dropped together with its single neighbour.
pub fn seq_normalize(s: &[i64]) -> StepSequence {
    let mut full: Vec<i64> = s.iter().chain(s.iter().rev()).copied().collect();
    while let Some(k) = full.iter().position(|&a| a == 0) {
        let len = full.len();
        if k == 0 {
            full.drain(0..2);
        } else if k == len - 1 {
            full.truncate(len - 2);
        } else {
            let merged = full[k - 1] + full[k + 1];
            full.splice(k - 1..=k + 1, [merged]);
        }
    }
    full.truncate(full.len() / 2);
    StepSequence(full)
}

/// One item of the repetition notation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PatternItem {
    Lit(i64),
    Repeat(Vec<PatternItem>, usize),
}

/// Unrolls a pattern into a flat (unnormalized) sequence.
pub fn unroll(items: &[PatternItem]) -> Vec<i64> {
    let mut out = Vec::new();
    for item in items {
        match item {
            PatternItem::Lit(a) => out.push(*a),
            PatternItem::Repeat(block, k) => {
                let inner = unroll(block);
                for _ in 0..*k {
                    out.extend_from_slice(&inner);
                }
            }
        }
    }
    out
}

/// Parses and unrolls text such as `(1,1)^2, 1, 3` or `(1,2)_1^0, 1, 3`, then
/// normalizes.
pub fn expand_notation(text: &str) -> Result<StepSequence> {
    Ok(seq_normalize(&unroll(&parse_pattern(text)?)))
}

pub fn parse_pattern(text: &str) -> Result<Vec<PatternItem>> {
    let mut p = PatternParser { src: text.as_bytes(), pos: 0 };
    p.ws();
    if p.peek().is_none() {
        return Ok(Vec::new());
    }
    let items = p.items()?;
    p.ws();
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(items)
}

struct PatternParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl PatternParser<'_> {
    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Pattern { offset: self.pos, msg: msg.into() })
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn ws(&mut self) {
        while self.peek().is_some_and(|b| b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, b: u8) -> bool {
        self.ws();
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn int(&mut self) -> Result<i64> {
        self.ws();
        let start = self.pos;
        if self.peek() == Some(b'-') {
            self.pos += 1;
        }
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        match s.parse() {
            Ok(v) => Ok(v),
            Err(_) => {
                self.pos = start;
                self.err("expected integer")
            }
        }
    }

    fn items(&mut self) -> Result<Vec<PatternItem>> {
        let mut items = vec![self.item()?];
        while self.eat(b',') {
            items.push(self.item()?);
        }
        Ok(items)
    }

    fn item(&mut self) -> Result<PatternItem> {
        if !self.eat(b'(') {
            return Ok(PatternItem::Lit(self.int()?));
        }
        let block = self.items()?;
        if !self.eat(b')') {
            return self.err("expected ')'");
        }
        if self.eat(b'_') && self.int()? != 1 {
            return self.err("only unit steps are supported in (..)_1^k");
        }
        if !self.eat(b'^') {
            return self.err("expected '^' after block");
        }
        let k = self.int()?;
        if k < 0 {
            return self.err("negative repetition count");
        }
        Ok(PatternItem::Repeat(block, k as usize))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalize_examples() {
        assert_eq!(seq_normalize(&[1, 0, 2]).entries(), &[3]);
        assert_eq!(seq_normalize(&[1, 1, 0, 2, 0, 2, 1, 1, 1, 1, 0, 2]).entries(), &[1, 5, 1, 1, 1, 3]);
        assert!(seq_normalize(&[]).is_empty());
        assert!(seq_normalize(&[0, 3]).is_empty());
        assert_eq!(seq_normalize(&[2, 0]).entries(), &[2]);
    }

    #[test]
    fn normalize_idempotent() {
        for s in [vec![1, 0, 0, 2], vec![0, 1, 0], vec![3, -1, 0, 2], vec![1, 2, 0]] {
            let once = seq_normalize(&s);
            assert_eq!(seq_normalize(once.entries()), once);
        }
    }

    #[test]
    fn notation() {
        assert_eq!(expand_notation("(1,1)^2, 1, 3").unwrap().entries(), &[1, 1, 1, 1, 1, 3]);
        assert_eq!(expand_notation("(1,1)_1^0, 1, 1").unwrap().entries(), &[1, 1]);
        assert_eq!(expand_notation("((1,2)^2, 0, 1)^1").unwrap().entries(), &[1, 2, 1, 3]);
        assert_eq!(expand_notation("").unwrap(), StepSequence::empty());
        assert!(expand_notation("(1,1").is_err());
        assert!(expand_notation("(1,1)^-1").is_err());
    }

    #[test]
    fn display() {
        assert_eq!(StepSequence::new(vec![3, -1, -2, 2]).to_string(), "[3, -1, -2, 2]");
        assert_eq!(StepSequence::empty().to_string(), "[]");
    }
}
