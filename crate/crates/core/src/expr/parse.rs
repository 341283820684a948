//! Recursive-descent parser for the expression grammar.
//!
//! ```text
//! expr   := term (("+" | "-") term)*
//! term   := factor (("*" | "/") factor)*
//! factor := "-" factor | atom ("^" ["-"] int)?
//! atom   := number | ident | func "(" expr ")" | "(" expr ")"
//! ```
//!
//! `^` binds tighter than unary minus, so `-x1^2` is `-(x1^2)`.

use num_bigint::BigInt;
use num_traits::Num;

use super::{limit_denominator, Func, Node, Rational, ScalarExpr, Var};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(String),
    Decimal(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn tokens(src: &'a str) -> Result<Vec<(Tok, usize)>> {
        let mut lx = Lexer { src, pos: 0 };
        let mut out = Vec::new();
        loop {
            let (t, at) = lx.next()?;
            let end = t == Tok::End;
            out.push((t, at));
            if end {
                return Ok(out);
            }
        }
    }

    fn next(&mut self) -> Result<(Tok, usize)> {
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() && bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        let start = self.pos;
        let Some(&c) = bytes.get(self.pos) else {
            return Ok((Tok::End, start));
        };
        let single = match c {
            b'+' => Some(Tok::Plus),
            b'-' => Some(Tok::Minus),
            b'*' => Some(Tok::Star),
            b'/' => Some(Tok::Slash),
            b'^' => Some(Tok::Caret),
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(t) = single {
            self.pos += 1;
            return Ok((t, start));
        }
        if c.is_ascii_digit() || c == b'.' {
            while self.pos < bytes.len() && bytes[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let mut decimal = false;
            if self.pos < bytes.len() && bytes[self.pos] == b'.' {
                decimal = true;
                self.pos += 1;
                while self.pos < bytes.len() && bytes[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
            }
            let text = &self.src[start..self.pos];
            if text == "." {
                return Err(Error::Syntax {
                    offset: start,
                    message: "expected a number".into(),
                });
            }
            let tok = if decimal {
                Tok::Decimal(text.to_string())
            } else {
                Tok::Int(text.to_string())
            };
            return Ok((tok, start));
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            while self.pos < bytes.len()
                && (bytes[self.pos].is_ascii_alphanumeric() || bytes[self.pos] == b'_')
            {
                self.pos += 1;
            }
            return Ok((Tok::Ident(self.src[start..self.pos].to_string()), start));
        }
        let ch = self.src[start..].chars().next().unwrap();
        Err(Error::Syntax {
            offset: start,
            message: format!("unexpected character `{ch}`"),
        })
    }
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    i: usize,
}

/// Parse `text` into an expression tree.
pub fn parse(text: &str) -> Result<ScalarExpr> {
    let mut p = Parser {
        toks: Lexer::tokens(text)?,
        i: 0,
    };
    let e = p.expr()?;
    match p.peek() {
        Tok::End => Ok(e),
        t => Err(p.unexpected(&t.clone())),
    }
}

fn decimal_value(text: &str) -> Rational {
    let (int, frac) = text.split_once('.').unwrap_or((text, ""));
    let digits = format!("{int}{frac}");
    let digits = if digits.is_empty() { "0" } else { &digits };
    let num = BigInt::from_str_radix(digits, 10).unwrap();
    let den = num_traits::pow(BigInt::from(10), frac.len());
    limit_denominator(&Rational::new(num, den), &BigInt::from(1_000_000))
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.i].0
    }

    fn offset(&self) -> usize {
        self.toks[self.i].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.i].0.clone();
        if t != Tok::End {
            self.i += 1;
        }
        t
    }

    fn unexpected(&self, t: &Tok) -> Error {
        let message = match t {
            Tok::End => "unexpected end of input".to_string(),
            other => format!("unexpected token {other:?}"),
        };
        Error::Syntax {
            offset: self.offset(),
            message,
        }
    }

    fn expr(&mut self) -> Result<ScalarExpr> {
        let mut terms = vec![self.term()?];
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    terms.push(self.term()?);
                }
                Tok::Minus => {
                    self.bump();
                    let t = self.term()?;
                    terms.push(ScalarExpr::from_node(Node::Neg(t)));
                }
                _ => break,
            }
        }
        Ok(ScalarExpr::add_all(terms))
    }

    fn term(&mut self) -> Result<ScalarExpr> {
        let mut acc = self.factor()?;
        let mut factors: Vec<ScalarExpr> = Vec::new();
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    let f = self.factor()?;
                    if factors.is_empty() {
                        factors.push(acc.clone());
                    }
                    factors.push(f);
                    acc = ScalarExpr::from_node(Node::Mul(factors.clone()));
                }
                Tok::Slash => {
                    self.bump();
                    let f = self.factor()?;
                    acc = ScalarExpr::div(acc, f);
                    factors.clear();
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<ScalarExpr> {
        if *self.peek() == Tok::Minus {
            self.bump();
            let inner = self.factor()?;
            return Ok(ScalarExpr::from_node(Node::Neg(inner)));
        }
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let negative = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let at = self.offset();
        match self.bump() {
            Tok::Int(text) => {
                let n: i32 = text.parse().map_err(|_| Error::Syntax {
                    offset: at,
                    message: format!("exponent `{text}` is too large"),
                })?;
                Ok(base.pow(if negative { -n } else { n }))
            }
            Tok::Decimal(text) => Err(Error::NonIntegerExponent { text, offset: at }),
            Tok::Ident(text) => Err(Error::NonIntegerExponent { text, offset: at }),
            t => {
                self.i -= usize::from(t != Tok::End);
                Err(self.unexpected(&t))
            }
        }
    }

    fn atom(&mut self) -> Result<ScalarExpr> {
        let at = self.offset();
        match self.bump() {
            Tok::Int(text) => {
                let n = BigInt::from_str_radix(&text, 10).unwrap();
                Ok(ScalarExpr::constant(Rational::from_integer(n)))
            }
            Tok::Decimal(text) => Ok(ScalarExpr::constant(decimal_value(&text))),
            Tok::Ident(name) => {
                if let Some(v) = Var::from_name(&name) {
                    return Ok(ScalarExpr::var(v));
                }
                if let Some(f) = Func::from_name(&name) {
                    self.expect(Tok::LParen)?;
                    let arg = self.expr()?;
                    self.expect(Tok::RParen)?;
                    return Ok(ScalarExpr::apply(f, arg));
                }
                Err(Error::UnknownIdentifier { name, offset: at })
            }
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            t => {
                self.i -= usize::from(t != Tok::End);
                Err(self.unexpected(&t))
            }
        }
    }

    fn expect(&mut self, want: Tok) -> Result<()> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            let t = self.peek().clone();
            Err(self.unexpected(&t))
        }
    }
}
