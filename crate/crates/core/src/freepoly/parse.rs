//! Recursive-descent parser for polynomial text.
//!
//! ```text
//! expr    := ['+'|'-'] term (('+'|'-') term)*
//! term    := factor ('*' factor)*
//! factor  := atom ('^' uint)?
//! atom    := complex | float | var | '(' expr ')'
//! complex := '(' ['+'|'-'] float ('+'|'-') float 'i' ')'
//! var     := 'z' uint | 'x' | 'y'
//! ```
//!
//! Juxtaposition is not multiplication; `2z1` is a syntax error.

use super::FreePolynomial;
use crate::error::{Error, Result};
use crate::linalg::c;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64, bool),
    Var(usize),
    Alias(char),
    I,
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    End,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    pos: usize,
}

fn syntax(pos: usize, msg: impl Into<String>) -> Error {
    Error::Syntax { pos, msg: msg.into() }
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let ch = bytes[i] as char;
        let start = i;
        match ch {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
                continue;
            }
            '+' => out.push(Token { tok: Tok::Plus, pos: start }),
            '-' => out.push(Token { tok: Tok::Minus, pos: start }),
            '*' => out.push(Token { tok: Tok::Star, pos: start }),
            '^' => out.push(Token { tok: Tok::Caret, pos: start }),
            '(' => out.push(Token { tok: Tok::LParen, pos: start }),
            ')' => out.push(Token { tok: Tok::RParen, pos: start }),
            'i' => out.push(Token { tok: Tok::I, pos: start }),
            'x' | 'y' => out.push(Token { tok: Tok::Alias(ch), pos: start }),
            'z' => {
                i += 1;
                let s = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if s == i {
                    return Err(syntax(start, "expected variable index after 'z'"));
                }
                let idx: usize = text[s..i]
                    .parse()
                    .map_err(|_| syntax(s, "variable index too large"))?;
                if idx == 0 {
                    return Err(syntax(start, "variables are numbered from z1"));
                }
                out.push(Token { tok: Tok::Var(idx - 1), pos: start });
                continue;
            }
            '0'..='9' | '.' => {
                let mut integral = true;
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    if bytes[i] == b'.' {
                        integral = false;
                    }
                    i += 1;
                }
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    integral = false;
                    i += 1;
                    if i < bytes.len() && (bytes[i] == b'+' || bytes[i] == b'-') {
                        i += 1;
                    }
                    let s = i;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    if s == i {
                        return Err(syntax(s, "malformed exponent"));
                    }
                }
                let v: f64 = text[start..i]
                    .parse()
                    .map_err(|_| syntax(start, format!("malformed number {:?}", &text[start..i])))?;
                out.push(Token { tok: Tok::Num(v, integral), pos: start });
                continue;
            }
            _ => return Err(syntax(start, format!("unexpected character {ch:?}"))),
        }
        i += 1;
    }
    out.push(Token { tok: Tok::End, pos: text.len() });
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    at: usize,
    d: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.at + k).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn pos(&self) -> usize {
        self.toks[self.at].pos
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].tok.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<FreePolynomial> {
        let mut acc = match self.peek() {
            Tok::Minus => {
                self.bump();
                self.term()?.scale(c(-1.0, 0.0))
            }
            Tok::Plus => {
                self.bump();
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = acc.add(&self.term()?)?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = acc.sub(&self.term()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<FreePolynomial> {
        let mut acc = self.factor()?;
        while *self.peek() == Tok::Star {
            self.bump();
            acc = acc.mul(&self.factor()?)?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<FreePolynomial> {
        let base = self.atom()?;
        if *self.peek() == Tok::Caret {
            self.bump();
            let pos = self.pos();
            match self.bump() {
                Tok::Num(v, true) if v <= u32::MAX as f64 => return Ok(base.pow(v as u32)),
                _ => return Err(syntax(pos, "expected unsigned integer exponent")),
            }
        }
        Ok(base)
    }

    /// Lookahead for `( [sign] float sign float i )`.
    fn complex_literal_ahead(&self) -> bool {
        let mut k = 1;
        if matches!(self.peek_at(k), Tok::Plus | Tok::Minus) {
            k += 1;
        }
        matches!(self.peek_at(k), Tok::Num(..))
            && matches!(self.peek_at(k + 1), Tok::Plus | Tok::Minus)
            && matches!(self.peek_at(k + 2), Tok::Num(..))
            && matches!(self.peek_at(k + 3), Tok::I)
            && matches!(self.peek_at(k + 4), Tok::RParen)
    }

    fn atom(&mut self) -> Result<FreePolynomial> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Num(v, _) => {
                self.bump();
                Ok(FreePolynomial::constant(self.d, c(v, 0.0)))
            }
            Tok::Var(idx) => {
                self.bump();
                if idx >= self.d {
                    return Err(Error::VariableOutOfRange { index: idx, d: self.d });
                }
                FreePolynomial::var(self.d, idx)
            }
            Tok::Alias(ch) => {
                self.bump();
                if self.d != 2 {
                    return Err(syntax(pos, format!("alias '{ch}' needs exactly two variables")));
                }
                FreePolynomial::var(self.d, if ch == 'x' { 0 } else { 1 })
            }
            Tok::LParen if self.complex_literal_ahead() => {
                self.bump();
                let mut re_sign = 1.0;
                match self.peek() {
                    Tok::Minus => {
                        re_sign = -1.0;
                        self.bump();
                    }
                    Tok::Plus => {
                        self.bump();
                    }
                    _ => {}
                }
                let Tok::Num(re, _) = self.bump() else { unreachable!() };
                let im_sign = if self.bump() == Tok::Minus { -1.0 } else { 1.0 };
                let Tok::Num(im, _) = self.bump() else { unreachable!() };
                self.bump(); // i
                self.bump(); // )
                Ok(FreePolynomial::constant(self.d, c(re_sign * re, im_sign * im)))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return Err(syntax(self.pos(), "expected ')'"));
                }
                self.bump();
                Ok(inner)
            }
            Tok::End => Err(syntax(pos, "unexpected end of input")),
            other => Err(syntax(pos, format!("unexpected token {other:?}"))),
        }
    }
}

/// Parses polynomial text in `d` variables into canonical form.
pub fn parse(text: &str, d: usize) -> Result<FreePolynomial> {
    let toks = lex(text)?;
    let mut p = Parser { toks, at: 0, d };
    let out = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(syntax(p.pos(), "expected operator or end of input"));
    }
    Ok(out)
}
