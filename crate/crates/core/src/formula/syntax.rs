//! Canonical ASCII syntax.
//!
//! ```text
//! φ ::= x<binary> | !φ | (φ & φ) | Kφ | []φ
//!     | Lφ | <>φ | (φ | φ) | (φ -> φ) | (φ <-> φ) | T | F | (φ)
//! ```
//!
//! The second line is sugar and expands into core constructors while parsing.

use super::{AtomId, Formula, Kind};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax(String),
    AtomNumeral,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{}", match &self.kind {
    ParseErrorKind::Syntax(m) => format!("syntax error at byte {}: {}", self.offset, m),
    ParseErrorKind::AtomNumeral => format!("expected a binary numeral after `x` at byte {}", self.offset),
})]
pub struct ParseError {
    pub offset: usize,
    pub kind: ParseErrorKind,
}

pub fn render(f: &Formula) -> String {
    enum Task<'a> {
        Visit(&'a Formula),
        Text(&'static str),
    }
    let mut out = String::with_capacity(f.symbol_count() as usize);
    let mut stack = vec![Task::Visit(f)];
    while let Some(task) = stack.pop() {
        match task {
            Task::Text(s) => out.push_str(s),
            Task::Visit(g) => match g.kind() {
                Kind::Atom(i) => {
                    out.push('x');
                    out.push_str(&format!("{:b}", i));
                }
                Kind::Not(a) => {
                    out.push('!');
                    stack.push(Task::Visit(a));
                }
                Kind::K(a) => {
                    out.push('K');
                    stack.push(Task::Visit(a));
                }
                Kind::Box(a) => {
                    out.push_str("[]");
                    stack.push(Task::Visit(a));
                }
                Kind::And(a, b) => {
                    out.push('(');
                    stack.push(Task::Text(")"));
                    stack.push(Task::Visit(b));
                    stack.push(Task::Text(" & "));
                    stack.push(Task::Visit(a));
                }
            },
        }
    }
    out
}

pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let f = p.formula()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.syntax("trailing input"));
    }
    Ok(f)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

enum Infix {
    And,
    Or,
    Implies,
    Iff,
}

impl Parser<'_> {
    fn syntax(&self, msg: &str) -> ParseError {
        ParseError {
            offset: self.pos,
            kind: ParseErrorKind::Syntax(msg.to_string()),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, lit: &str) -> bool {
        if self.src[self.pos..].starts_with(lit.as_bytes()) {
            self.pos += lit.len();
            true
        } else {
            false
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        self.skip_ws();
        let Some(&c) = self.src.get(self.pos) else {
            return Err(self.syntax("unexpected end of input"));
        };
        match c {
            b'!' => {
                self.pos += 1;
                Ok(self.formula()?.not())
            }
            b'K' => {
                self.pos += 1;
                Ok(self.formula()?.k())
            }
            b'L' => {
                self.pos += 1;
                Ok(self.formula()?.l())
            }
            b'T' => {
                self.pos += 1;
                Ok(Formula::top())
            }
            b'F' => {
                self.pos += 1;
                Ok(Formula::bottom())
            }
            b'[' => {
                if !self.eat("[]") {
                    return Err(self.syntax("expected `[]`"));
                }
                Ok(self.formula()?.boxed())
            }
            b'<' => {
                if !self.eat("<>") {
                    return Err(self.syntax("expected `<>`"));
                }
                Ok(self.formula()?.diamond())
            }
            b'x' => self.atom(),
            b'(' => {
                self.pos += 1;
                let left = self.formula()?;
                self.skip_ws();
                let op = if self.eat("&") {
                    Infix::And
                } else if self.eat("|") {
                    Infix::Or
                } else if self.eat("->") {
                    Infix::Implies
                } else if self.eat("<->") {
                    Infix::Iff
                } else if self.eat(")") {
                    return Ok(left);
                } else {
                    return Err(self.syntax("expected `&`, `|`, `->`, `<->` or `)`"));
                };
                let right = self.formula()?;
                self.skip_ws();
                if !self.eat(")") {
                    return Err(self.syntax("expected `)`"));
                }
                Ok(match op {
                    Infix::And => left.and(&right),
                    Infix::Or => left.or(&right),
                    Infix::Implies => left.implies(&right),
                    Infix::Iff => left.iff(&right),
                })
            }
            _ => Err(self.syntax("unexpected character")),
        }
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        let start = self.pos;
        self.pos += 1;
        let digits_start = self.pos;
        while self.pos < self.src.len() && matches!(self.src[self.pos], b'0' | b'1') {
            self.pos += 1;
        }
        let digits = &self.src[digits_start..self.pos];
        let numeral_error = ParseError {
            offset: start,
            kind: ParseErrorKind::AtomNumeral,
        };
        if digits.is_empty() || (digits.len() > 1 && digits[0] == b'0') || digits.len() > 32 {
            return Err(numeral_error);
        }
        let mut id: AtomId = 0;
        for &d in digits {
            id = (id << 1) | AtomId::from(d - b'0');
        }
        Ok(Formula::atom(id))
    }
}
