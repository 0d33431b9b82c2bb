//! Text syntax for terms and `term(<term>).` fact files.

use std::fmt;

use crate::symbol::Symbol;
use crate::term::Term;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax(String),
    /// `[H|T]` style lists; only proper lists are accepted.
    PartialList,
    /// `f()`.
    ZeroArity,
    IntOutOfRange,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    /// Byte offset into the parsed text.
    pub pos: usize,
    /// 1-based line, set when parsing a fact file.
    pub line: Option<usize>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(line) = self.line {
            write!(f, "line {line}, ")?;
        }
        write!(f, "offset {}: ", self.pos)?;
        match &self.kind {
            ParseErrorKind::Syntax(msg) => f.write_str(msg),
            ParseErrorKind::PartialList => f.write_str("partial lists are not supported"),
            ParseErrorKind::ZeroArity => f.write_str("compound term with zero arguments"),
            ParseErrorKind::IntOutOfRange => f.write_str("integer does not fit in 64 bits"),
        }
    }
}

impl std::error::Error for ParseError {}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser { src, pos: 0 }
    }

    fn error<T>(&self, kind: ParseErrorKind) -> Result<T, ParseError> {
        Err(ParseError { kind, pos: self.pos, line: None })
    }

    fn syntax<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        self.error(ParseErrorKind::Syntax(msg.into()))
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn eat(&mut self, expected: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(expected) {
            self.pos += expected.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, expected: char) -> Result<(), ParseError> {
        if self.eat(expected) {
            Ok(())
        } else {
            match self.peek() {
                Some(c) => self.syntax(format!("expected '{expected}', found '{c}'")),
                None => self.syntax(format!("expected '{expected}', found end of input")),
            }
        }
    }

    fn ident(&mut self) -> &'a str {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == '_' {
                self.pos += 1;
            } else {
                break;
            }
        }
        &self.src[start..self.pos]
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            Some('[') => {
                self.pos += 1;
                self.list()
            }
            Some(c) if c == '-' || c.is_ascii_digit() => {
                if c == '-' {
                    self.pos += 1;
                }
                let digits = self.pos;
                while matches!(self.peek(), Some(d) if d.is_ascii_digit()) {
                    self.pos += 1;
                }
                if self.pos == digits {
                    return self.syntax("expected digits after '-'");
                }
                match self.src[start..self.pos].parse::<i64>() {
                    Ok(v) => Ok(Term::Int(v)),
                    Err(_) => {
                        self.pos = start;
                        self.error(ParseErrorKind::IntOutOfRange)
                    }
                }
            }
            Some(c) if c.is_ascii_uppercase() || c == '_' => Ok(Term::Var(Symbol::intern(self.ident()))),
            Some(c) if c.is_ascii_lowercase() => {
                let name = self.ident();
                if self.peek() != Some('(') {
                    return Ok(Term::Atom(Symbol::intern(name)));
                }
                self.pos += 1;
                if self.eat(')') {
                    self.pos = start;
                    return self.error(ParseErrorKind::ZeroArity);
                }
                let mut args = vec![self.term()?];
                while self.eat(',') {
                    args.push(self.term()?);
                }
                self.expect(')')?;
                Ok(Term::Compound(Symbol::intern(name), args))
            }
            Some(c) => self.syntax(format!("unexpected character '{c}'")),
            None => self.syntax("unexpected end of input"),
        }
    }

    fn list(&mut self) -> Result<Term, ParseError> {
        if self.eat(']') {
            return Ok(Term::List(Vec::new()));
        }
        let mut elems = vec![self.term()?];
        loop {
            if self.eat(',') {
                elems.push(self.term()?);
            } else if self.eat('|') {
                return self.error(ParseErrorKind::PartialList);
            } else {
                self.expect(']')?;
                return Ok(Term::List(elems));
            }
        }
    }

    fn finish(&mut self) -> Result<(), ParseError> {
        self.skip_ws();
        match self.peek() {
            None => Ok(()),
            Some(c) => self.syntax(format!("trailing input starting at '{c}'")),
        }
    }
}

/// Parses a single term. Variables with the same name map to the same `Var`.
pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    let mut p = Parser::new(text);
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

/// Parses one `term(<term>).` clause.
pub fn parse_fact(text: &str) -> Result<Term, ParseError> {
    let mut p = Parser::new(text);
    p.skip_ws();
    if p.ident() != "term" {
        p.pos = 0;
        return p.syntax("expected a term/1 fact");
    }
    p.expect('(')?;
    let t = p.term()?;
    p.expect(')')?;
    p.expect('.')?;
    p.finish()?;
    Ok(t)
}

/// Parses a fact file: one `term(<term>).` per line, `%` comment lines and
/// blank lines ignored.
pub fn parse_fact_file(text: &str) -> Result<Vec<Term>, ParseError> {
    let mut facts = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let trimmed = line.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        let fact = parse_fact(line).map_err(|e| ParseError { line: Some(i + 1), ..e })?;
        facts.push(fact);
    }
    Ok(facts)
}
