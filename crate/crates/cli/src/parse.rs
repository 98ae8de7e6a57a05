//! Recursive-descent parser for knot expressions.
//!
//! ```text
//! Expr := Term (('+'|'-') Term)*
//! Term := INT '*' Atom | Atom
//! Atom := 'T(' INT ',' INT ')' | 'C(' Atom ';' INT ',' INT ')' | 'S[' INT-list ']'
//!       | 'K(' INT ',' INT ')' | '-' Atom | '(' Expr ')'
//! ```
//!
//! `n*X` expands to a sum of `|n|` copies of `X` (mirrored when `n < 0`), and
//! `A - B` to `A + -B`. Leaves are validated as they are read.

use std::fmt;

use staircase::knots::KnotExpr;
use staircase::StepSequence;

#[derive(Debug)]
pub enum ParseError {
    Syntax { offset: usize, message: String },
    Semantic { offset: usize, leaf: String, source: staircase::Error },
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Syntax { offset, .. } | ParseError::Semantic { offset, .. } => *offset,
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseError::Syntax { offset, message } => write!(f, "syntax error at offset {offset}: {message}"),
            ParseError::Semantic { offset, leaf, source } => {
                write!(f, "invalid knot {leaf} at offset {offset}: {source}")
            }
        }
    }
}

impl std::error::Error for ParseError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            ParseError::Semantic { source, .. } => Some(source),
            ParseError::Syntax { .. } => None,
        }
    }
}

type PResult<T> = Result<T, ParseError>;

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn error<T>(&self, message: impl Into<String>) -> PResult<T> {
        Err(ParseError::Syntax { offset: self.pos, message: message.into() })
    }

    fn expect(&mut self, c: char) -> PResult<()> {
        match self.peek() {
            Some(d) if d == c => {
                self.pos += 1;
                Ok(())
            }
            Some(d) => self.error(format!("expected '{c}', found '{d}'")),
            None => self.error(format!("expected '{c}', found end of input")),
        }
    }

    fn int(&mut self) -> PResult<i64> {
        self.skip_ws();
        let start = self.pos;
        let bytes = self.src.as_bytes();
        let mut end = start;
        if bytes.get(end) == Some(&b'-') {
            end += 1;
        }
        let digits = bytes[end..].iter().take_while(|b| b.is_ascii_digit()).count();
        if digits == 0 {
            return self.error("expected an integer");
        }
        end += digits;
        match self.src[start..end].parse() {
            Ok(v) => {
                self.pos = end;
                Ok(v)
            }
            Err(_) => self.error("integer out of range"),
        }
    }

    fn expr(&mut self) -> PResult<KnotExpr> {
        let mut terms = vec![self.term()?];
        loop {
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    terms.push(self.term()?);
                }
                Some('-') => {
                    self.pos += 1;
                    terms.push(KnotExpr::mirror(self.term()?));
                }
                _ => break,
            }
        }
        Ok(if terms.len() == 1 { terms.pop().unwrap() } else { KnotExpr::sum(terms) })
    }

    fn term(&mut self) -> PResult<KnotExpr> {
        self.skip_ws();
        let save = self.pos;
        if let Ok(n) = self.int() {
            if self.peek() == Some('*') {
                self.pos += 1;
                let atom = self.atom()?;
                return Ok(repeat(n, atom));
            }
        }
        self.pos = save;
        self.atom()
    }

    fn atom(&mut self) -> PResult<KnotExpr> {
        let start = {
            self.skip_ws();
            self.pos
        };
        let e = match self.peek() {
            Some('-') => {
                self.pos += 1;
                return Ok(KnotExpr::mirror(self.atom()?));
            }
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                return Ok(e);
            }
            Some('T') => {
                self.pos += 1;
                let (p, q) = self.pair()?;
                KnotExpr::torus(p, q)
            }
            Some('K') => {
                self.pos += 1;
                let (i, j) = self.pair()?;
                KnotExpr::Family { i, j }
            }
            Some('C') => {
                self.pos += 1;
                self.expect('(')?;
                let child = self.atom()?;
                self.expect(';')?;
                let m = self.int()?;
                self.expect(',')?;
                let l = self.int()?;
                self.expect(')')?;
                KnotExpr::cable(child, m, l)
            }
            Some('S') => {
                self.pos += 1;
                self.expect('[')?;
                let mut v = Vec::new();
                if self.peek() != Some(']') {
                    v.push(self.int()?);
                    while self.peek() == Some(',') {
                        self.pos += 1;
                        v.push(self.int()?);
                    }
                }
                self.expect(']')?;
                KnotExpr::Raw { steps: StepSequence::new(v) }
            }
            Some(c) => return self.error(format!("unexpected '{c}'")),
            None => return self.error("unexpected end of input"),
        };
        e.validate().map_err(|source| ParseError::Semantic {
            offset: start,
            leaf: self.src[start..self.pos].to_string(),
            source,
        })?;
        Ok(e)
    }

    fn pair(&mut self) -> PResult<(i64, i64)> {
        self.expect('(')?;
        let a = self.int()?;
        self.expect(',')?;
        let b = self.int()?;
        self.expect(')')?;
        Ok((a, b))
    }
}

fn repeat(n: i64, atom: KnotExpr) -> KnotExpr {
    let one = if n < 0 { KnotExpr::mirror(atom) } else { atom };
    match n.unsigned_abs() {
        0 => KnotExpr::Raw { steps: StepSequence::empty() },
        1 => one,
        k => KnotExpr::sum(vec![one; k as usize]),
    }
}

pub fn parse_expr(text: &str) -> Result<KnotExpr, ParseError> {
    let mut p = Parser { src: text, pos: 0 };
    let e = p.expr()?;
    match p.peek() {
        None => Ok(e),
        Some(c) => p.error(format!("unexpected '{c}' after expression")),
    }
}
