//! Text format for atom systems.
//!
//! ```text
//! # comment
//! var x1, x2, x3, x4          (optional; fixes the variable order)
//! x3 <= -10 + x1
//! x4 <= -1 + max(x2, x3)
//! x2 <= x4
//! ```
//!
//! Without `var` lines, variables are numbered in order of first appearance.

use std::collections::HashMap;

use thiserror::Error;

use super::atom::{Atom, MapSystem, Targets};
use crate::maxplus::{parse_rational, Rational};

/// Offsets larger than this in magnitude are rejected so that sums along
/// paths stay far inside the 64-bit rational range.
const MAX_OFFSET: i64 = 1_000_000_000;
const MAX_FRACTION_DIGITS: usize = 6;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    #[error("unknown token `{0}`")]
    UnknownToken(char),
    #[error("expected {expected}, found `{found}`")]
    Unexpected {
        expected: &'static str,
        found: String,
    },
    #[error("expected {expected}, found end of line")]
    UnexpectedEnd { expected: &'static str },
    #[error("invalid number `{0}`")]
    InvalidNumber(String),
    #[error("number `{0}` is out of range (|a| <= 1e9, at most 6 decimals)")]
    NumberOutOfRange(String),
    #[error("variable `{0}` is declared twice")]
    DuplicateDeclaration(String),
    #[error("variable `{0}` is used but not declared")]
    UndeclaredVariable(String),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Number(String),
    Le,
    Plus,
    LParen,
    RParen,
    Comma,
}

impl Tok {
    fn text(&self) -> String {
        match self {
            Tok::Ident(s) | Tok::Number(s) => s.clone(),
            Tok::Le => "<=".into(),
            Tok::Plus => "+".into(),
            Tok::LParen => "(".into(),
            Tok::RParen => ")".into(),
            Tok::Comma => ",".into(),
        }
    }
}

/// Token with its 1-based column.
type Spanned = (Tok, usize);

fn lex(line_no: usize, line: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = line.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |column: usize, kind| ParseError {
        line: line_no,
        column,
        kind,
    };
    while i < chars.len() {
        let c = chars[i];
        let column = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let starts_number = c.is_ascii_digit()
            || ((c == '-' || c == '+') && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit()));
        if starts_number {
            let start = i;
            i += 1;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            out.push((Tok::Number(chars[start..i].iter().collect()), column));
            continue;
        }
        if c.is_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), column));
            continue;
        }
        let tok = match c {
            '<' if chars.get(i + 1) == Some(&'=') => {
                i += 1;
                Tok::Le
            }
            '+' => Tok::Plus,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            other => return Err(err(column, ParseErrorKind::UnknownToken(other))),
        };
        i += 1;
        out.push((tok, column));
    }
    Ok(out)
}

struct Cursor<'a> {
    line: usize,
    toks: &'a [Spanned],
    pos: usize,
    end_column: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<&'a Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn column(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_column, |(_, c)| *c)
    }

    fn error(&self, kind: ParseErrorKind) -> ParseError {
        ParseError {
            line: self.line,
            column: self.column(),
            kind,
        }
    }

    fn unexpected(&self, expected: &'static str) -> ParseError {
        match self.peek() {
            Some(t) => self.error(ParseErrorKind::Unexpected {
                expected,
                found: t.text(),
            }),
            None => self.error(ParseErrorKind::UnexpectedEnd { expected }),
        }
    }

    fn expect(&mut self, tok: Tok, expected: &'static str) -> Result<(), ParseError> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.unexpected(expected))
        }
    }

    fn ident(&mut self, expected: &'static str) -> Result<(String, usize), ParseError> {
        match self.peek() {
            Some(Tok::Ident(name)) => {
                let col = self.column();
                self.pos += 1;
                Ok((name.clone(), col))
            }
            _ => Err(self.unexpected(expected)),
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(_) => Err(self.unexpected("end of line")),
        }
    }
}

fn parse_offset(text: &str, line: usize, column: usize) -> Result<Rational, ParseError> {
    let err = |kind| ParseError { line, column, kind };
    let value =
        parse_rational(text).map_err(|_| err(ParseErrorKind::InvalidNumber(text.to_string())))?;
    let digits = text.split_once('.').map_or(0, |(_, f)| f.len());
    let magnitude = if value < Rational::from_integer(0) {
        -value
    } else {
        value
    };
    if digits > MAX_FRACTION_DIGITS || magnitude > Rational::from_integer(MAX_OFFSET) {
        return Err(err(ParseErrorKind::NumberOutOfRange(text.to_string())));
    }
    Ok(value)
}

struct Registry {
    names: Vec<String>,
    index: HashMap<String, usize>,
    declared: bool,
}

impl Registry {
    fn resolve(&mut self, name: &str, line: usize, column: usize) -> Result<usize, ParseError> {
        if let Some(&i) = self.index.get(name) {
            return Ok(i);
        }
        if self.declared {
            return Err(ParseError {
                line,
                column,
                kind: ParseErrorKind::UndeclaredVariable(name.to_string()),
            });
        }
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), self.names.len() - 1);
        Ok(self.names.len() - 1)
    }
}

fn is_declaration(toks: &[Spanned]) -> bool {
    matches!(toks, [(Tok::Ident(kw), _), (Tok::Ident(_), _), ..] if kw == "var")
}

/// Parses an atom file into a [`MapSystem`].
pub fn parse_atoms(text: &str) -> Result<MapSystem, ParseError> {
    let mut lines = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let body = raw.split('#').next().unwrap_or("");
        let toks = lex(idx + 1, body)?;
        if !toks.is_empty() {
            lines.push((idx + 1, body.chars().count() + 1, toks));
        }
    }

    let mut registry = Registry {
        names: Vec::new(),
        index: HashMap::new(),
        declared: false,
    };
    for (line, end_column, toks) in lines.iter().filter(|(_, _, t)| is_declaration(t)) {
        let mut cur = Cursor {
            line: *line,
            toks,
            pos: 1,
            end_column: *end_column,
        };
        loop {
            let (name, column) = cur.ident("a variable name")?;
            if registry.index.contains_key(&name) {
                return Err(ParseError {
                    line: *line,
                    column,
                    kind: ParseErrorKind::DuplicateDeclaration(name),
                });
            }
            registry.names.push(name.clone());
            registry.index.insert(name, registry.names.len() - 1);
            if cur.peek() == Some(&Tok::Comma) {
                cur.pos += 1;
            }
            if cur.peek().is_none() {
                break;
            }
        }
        registry.declared = true;
    }

    let mut atoms = Vec::new();
    for (line, end_column, toks) in lines.iter().filter(|(_, _, t)| !is_declaration(t)) {
        let mut cur = Cursor {
            line: *line,
            toks,
            pos: 0,
            end_column: *end_column,
        };
        let (lhs_name, lhs_col) = cur.ident("a variable name")?;
        let lhs = registry.resolve(&lhs_name, *line, lhs_col)?;
        cur.expect(Tok::Le, "`<=`")?;

        let mut offset = Rational::from_integer(0);
        if let Some(Tok::Number(text)) = cur.peek() {
            offset = parse_offset(text, *line, cur.column())?;
            cur.pos += 1;
            cur.expect(Tok::Plus, "`+`")?;
        }

        let is_max = matches!(cur.peek(), Some(Tok::Ident(kw)) if kw == "max")
            && matches!(cur.toks.get(cur.pos + 1), Some((Tok::LParen, _)));
        let rhs = if is_max {
            cur.pos += 2;
            let (first, c1) = cur.ident("a variable name")?;
            let j = registry.resolve(&first, *line, c1)?;
            let k = if cur.peek() == Some(&Tok::Comma) {
                cur.pos += 1;
                let (second, c2) = cur.ident("a variable name")?;
                registry.resolve(&second, *line, c2)?
            } else {
                j
            };
            cur.expect(Tok::RParen, "`)`")?;
            Targets::new(j, k)
        } else {
            let (name, col) = cur.ident("a variable, a number or `max(`")?;
            Targets::Single(registry.resolve(&name, *line, col)?)
        };
        cur.finish()?;
        atoms.push(Atom::new(lhs, offset, rhs));
    }
    Ok(MapSystem::new(registry.names, atoms))
}
