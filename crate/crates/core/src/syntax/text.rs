//! Line-oriented text format for knowledge bases.
//!
//! ```text
//! # comment
//! Tamoxifen SubClassOf Anti-oestrogen.
//! ((some hasGene. CYP2D6) and (some TreatBy. Tamoxifen)) SubClassOf Bottom.
//! assert (some hasGene. CYP2D6)(Mary).
//! assert TreatBy(Mary, y).
//! ```
//!
//! Conjunctions with more than two operands are read right-associated.
//! Variables (`?x1`, `?x2`, …) are accepted so that internal dumps can be
//! read back; callers decide whether to allow them.

use std::fmt;

use thiserror::Error;

use super::concept::{Assertion, Concept, Gci, Name, NodeId};
use super::kb::KnowledgeBase;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

const KEYWORDS: &[&str] = &["Top", "Bottom", "and", "some", "assert", "SubClassOf"];

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    LParen,
    RParen,
    Dot,
    Comma,
    Question,
    Ident(String),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::LParen => f.write_str("'('"),
            Tok::RParen => f.write_str("')'"),
            Tok::Dot => f.write_str("'.'"),
            Tok::Comma => f.write_str("','"),
            Tok::Question => f.write_str("'?'"),
            Tok::Ident(s) => write!(f, "'{s}'"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let mut line = 1;
    let mut column = 1;
    let mut chars = text.chars().peekable();
    while let Some(&ch) = chars.peek() {
        let (l, c) = (line, column);
        let single = match ch {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '.' => Some(Tok::Dot),
            ',' => Some(Tok::Comma),
            '?' => Some(Tok::Question),
            _ => None,
        };
        if let Some(tok) = single {
            chars.next();
            column += 1;
            out.push(Spanned { tok, line: l, column: c });
            continue;
        }
        if ch == '\n' {
            chars.next();
            line += 1;
            column = 1;
        } else if ch.is_whitespace() {
            chars.next();
            column += 1;
        } else if ch == '#' {
            while let Some(&c2) = chars.peek() {
                if c2 == '\n' {
                    break;
                }
                chars.next();
            }
        } else if ch.is_ascii_alphabetic() {
            let mut s = String::new();
            while let Some(&c2) = chars.peek() {
                if c2.is_ascii_alphanumeric() || c2 == '_' || c2 == '-' {
                    s.push(c2);
                    chars.next();
                    column += 1;
                } else {
                    break;
                }
            }
            out.push(Spanned { tok: Tok::Ident(s), line: l, column: c });
        } else {
            return Err(ParseError { line: l, column: c, message: format!("unexpected character {ch:?}") });
        }
    }
    out.push(Spanned { tok: Tok::Eof, line, column });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

enum Statement {
    Gci(Gci),
    Assertion(Assertion),
}

impl Parser {
    fn new(text: &str) -> Result<Self, ParseError> {
        Ok(Parser { toks: lex(text)?, pos: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, offset: usize) -> &Tok {
        let i = (self.pos + offset).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn next(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        let s = &self.toks[self.pos];
        ParseError { line: s.line, column: s.column, message: message.into() }
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.next();
            Ok(())
        } else {
            Err(self.error(format!("expected {tok}, found {}", self.peek())))
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn name(&mut self, what: &str) -> Result<Name, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                self.next();
                Ok(Name::new(s))
            }
            other => Err(self.error(format!("expected {what}, found {other}"))),
        }
    }

    fn concept(&mut self) -> Result<Concept, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) if s == "Top" => {
                self.next();
                Ok(Concept::Top)
            }
            Tok::Ident(s) if s == "Bottom" => {
                self.next();
                Ok(Concept::Bottom)
            }
            Tok::Ident(_) => Ok(Concept::Name(self.name("concept name")?)),
            Tok::LParen => {
                self.next();
                if self.is_keyword("some") {
                    self.next();
                    let role = self.name("role name")?;
                    self.expect(Tok::Dot)?;
                    let filler = self.concept()?;
                    self.expect(Tok::RParen)?;
                    return Ok(Concept::Exists(role, Box::new(filler)));
                }
                let mut parts = vec![self.concept()?];
                while self.is_keyword("and") {
                    self.next();
                    parts.push(self.concept()?);
                }
                self.expect(Tok::RParen)?;
                Ok(Concept::conjunction(parts))
            }
            other => Err(self.error(format!("expected concept, found {other}"))),
        }
    }

    fn node(&mut self) -> Result<NodeId, ParseError> {
        if *self.peek() == Tok::Question {
            self.next();
            let err = self.error("variables are written ?x<number>");
            let name = self.name("variable name").map_err(|_| err.clone())?;
            let index = name
                .as_str()
                .strip_prefix('x')
                .and_then(|d| d.parse::<u32>().ok())
                .ok_or(err)?;
            Ok(NodeId::Variable(index))
        } else {
            Ok(NodeId::Individual(self.name("individual name")?))
        }
    }

    /// Body of an assertion after the optional `assert` keyword.
    fn assertion_body(&mut self) -> Result<Assertion, ParseError> {
        let role_like = matches!(self.peek(), Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()))
            && *self.peek_at(1) == Tok::LParen;
        if role_like {
            let name = self.name("name")?;
            self.expect(Tok::LParen)?;
            let subject = self.node()?;
            if *self.peek() == Tok::Comma {
                self.next();
                let object = self.node()?;
                self.expect(Tok::RParen)?;
                return Ok(Assertion::Role(name, subject, object));
            }
            self.expect(Tok::RParen)?;
            return Ok(Assertion::Concept(Concept::Name(name), subject));
        }
        let c = self.concept()?;
        self.expect(Tok::LParen)?;
        let subject = self.node()?;
        self.expect(Tok::RParen)?;
        Ok(Assertion::Concept(c, subject))
    }

    fn statement(&mut self) -> Result<Statement, ParseError> {
        if self.is_keyword("assert") {
            self.next();
            let a = self.assertion_body()?;
            self.expect(Tok::Dot)?;
            return Ok(Statement::Assertion(a));
        }
        let lhs = self.concept()?;
        if !self.is_keyword("SubClassOf") {
            return Err(self.error(format!("expected 'SubClassOf', found {}", self.peek())));
        }
        self.next();
        let rhs = self.concept()?;
        self.expect(Tok::Dot)?;
        Ok(Statement::Gci(Gci::new(lhs, rhs)))
    }
}

/// Parses a knowledge-base document. Duplicate statements collapse.
pub fn parse_kb(text: &str) -> Result<KnowledgeBase, ParseError> {
    let mut p = Parser::new(text)?;
    let mut kb = KnowledgeBase::default();
    while *p.peek() != Tok::Eof {
        match p.statement()? {
            Statement::Gci(g) => {
                kb.tbox.insert(g);
            }
            Statement::Assertion(a) => {
                kb.abox.insert(a);
            }
        }
    }
    Ok(kb)
}

/// Parses a single concept such as `(some R. (C and A))`.
pub fn parse_concept(text: &str) -> Result<Concept, ParseError> {
    let mut p = Parser::new(text)?;
    let c = p.concept()?;
    p.expect(Tok::Eof)?;
    Ok(c)
}

/// Parses a single assertion, e.g. `C(a)` or `R(a, b)`. A leading `assert`
/// and a trailing `.` are optional.
pub fn parse_assertion(text: &str) -> Result<Assertion, ParseError> {
    let mut p = Parser::new(text)?;
    if p.is_keyword("assert") {
        p.next();
    }
    let a = p.assertion_body()?;
    if *p.peek() == Tok::Dot {
        p.next();
    }
    p.expect(Tok::Eof)?;
    Ok(a)
}

pub fn format_gci(g: &Gci) -> String {
    format!("{g}.")
}

pub fn format_assertion(a: &Assertion) -> String {
    format!("assert {a}.")
}

/// Prints TBox axioms then ABox assertions, one per line, each group sorted
/// by its printed form.
pub fn print_kb(kb: &KnowledgeBase) -> String {
    let mut gcis: Vec<String> = kb.tbox.iter().map(format_gci).collect();
    let mut asserts: Vec<String> = kb.abox.iter().map(format_assertion).collect();
    gcis.sort();
    asserts.sort();
    let mut out = String::new();
    for line in gcis.into_iter().chain(asserts) {
        out.push_str(&line);
        out.push('\n');
    }
    out
}
