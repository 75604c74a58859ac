//! Text grammar for polynomials and 1-forms.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' uint)?
//! atom   := int | 'x' | 'y' | 'dx' | 'dy' | const | 'sqrt' '(' int ')' | '(' expr ')'
//! ```
//!
//! Division is only allowed by a nonzero constant. Named constants are
//! bound by the caller.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::forms::OneForm;
use super::poly::Poly2;
use super::SymError;
use crate::exactnum::{NumError, QuadraticNumber as QN, Rational};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>, SymError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((Tok::Int(text[start..i].parse().expect("digits")), start));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(text[start..i].to_string()), start));
                continue;
            }
            _ => {
                return Err(SymError::Syntax { pos: i, msg: format!("unexpected character '{}'", c as char) })
            }
        };
        out.push((tok, start));
        i += 1;
    }
    Ok(out)
}

/// Scalar part plus `dx` and `dy` parts.
#[derive(Clone)]
struct Val {
    s: Poly2,
    dx: Poly2,
    dy: Poly2,
}

impl Val {
    fn scalar(p: Poly2) -> Self {
        Self { s: p, dx: Poly2::zero(), dy: Poly2::zero() }
    }

    fn has_diff(&self) -> bool {
        !self.dx.is_zero() || !self.dy.is_zero()
    }

    fn add(&self, o: &Val) -> Result<Val, SymError> {
        Ok(Val { s: self.s.try_add(&o.s)?, dx: self.dx.try_add(&o.dx)?, dy: self.dy.try_add(&o.dy)? })
    }

    fn neg(&self) -> Val {
        Val { s: -&self.s, dx: -&self.dx, dy: -&self.dy }
    }

    fn mul(&self, o: &Val) -> Option<Result<Val, SymError>> {
        let (p, v) = match (self.has_diff(), o.has_diff()) {
            (true, true) => return None,
            (false, _) => (&self.s, o),
            (true, false) => (&o.s, self),
        };
        Some((|| Ok(Val { s: p.try_mul(&v.s)?, dx: p.try_mul(&v.dx)?, dy: p.try_mul(&v.dy)? }))())
    }
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    i: usize,
    end: usize,
    consts: &'a HashMap<String, QN>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|t| &t.0)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.i).map(|t| t.1).unwrap_or(self.end)
    }

    fn err(&self, msg: impl Into<String>) -> SymError {
        SymError::Syntax { pos: self.pos(), msg: msg.into() }
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.i).map(|t| t.0.clone());
        self.i += 1;
        t
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), SymError> {
        if self.peek() == Some(&t) {
            self.i += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected {what}")))
        }
    }

    fn expr(&mut self) -> Result<Val, SymError> {
        let mut v = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.i += 1;
                    v = v.add(&self.term()?)?;
                }
                Some(Tok::Minus) => {
                    self.i += 1;
                    v = v.add(&self.term()?.neg())?;
                }
                _ => return Ok(v),
            }
        }
    }

    fn term(&mut self) -> Result<Val, SymError> {
        let mut v = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    let pos = self.pos();
                    self.i += 1;
                    let rhs = self.unary()?;
                    v = v.mul(&rhs).ok_or(SymError::Syntax { pos, msg: "product of two differentials".into() })??;
                }
                Some(Tok::Slash) => {
                    let pos = self.pos();
                    self.i += 1;
                    let rhs = self.unary()?;
                    if rhs.has_diff() || !rhs.s.is_constant() || rhs.s.is_zero() {
                        return Err(SymError::Syntax { pos, msg: "division only by a nonzero constant".into() });
                    }
                    let inv = rhs.s.constant_term().inv()?;
                    v = v.mul(&Val::scalar(Poly2::constant(inv))).expect("scalar")?;
                }
                _ => return Ok(v),
            }
        }
    }

    fn unary(&mut self) -> Result<Val, SymError> {
        if self.peek() == Some(&Tok::Minus) {
            self.i += 1;
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<Val, SymError> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.i += 1;
        let pos = self.pos();
        let e = match self.bump() {
            Some(Tok::Int(n)) => n.to_u32().ok_or(SymError::Syntax { pos, msg: "exponent too large".into() })?,
            _ => return Err(SymError::Syntax { pos, msg: "expected exponent".into() }),
        };
        if base.has_diff() {
            return Err(SymError::Syntax { pos, msg: "power of a differential".into() });
        }
        Ok(Val::scalar(base.s.pow(e)))
    }

    fn atom(&mut self) -> Result<Val, SymError> {
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Int(n)) => Ok(Val::scalar(Poly2::constant(QN::rational(Rational::from_integer(n))))),
            Some(Tok::LParen) => {
                let v = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(v)
            }
            Some(Tok::Ident(name)) => match name.as_str() {
                "x" => Ok(Val::scalar(Poly2::x())),
                "y" => Ok(Val::scalar(Poly2::y())),
                "dx" => Ok(Val { s: Poly2::zero(), dx: Poly2::one(), dy: Poly2::zero() }),
                "dy" => Ok(Val { s: Poly2::zero(), dx: Poly2::zero(), dy: Poly2::one() }),
                "sqrt" => {
                    self.expect(Tok::LParen, "'(' after sqrt")?;
                    let neg = if self.peek() == Some(&Tok::Minus) {
                        self.i += 1;
                        true
                    } else {
                        false
                    };
                    let p = self.pos();
                    let d = match self.bump() {
                        Some(Tok::Int(n)) => n,
                        _ => return Err(SymError::Syntax { pos: p, msg: "expected integer radicand".into() }),
                    };
                    self.expect(Tok::RParen, "')'")?;
                    let d = if neg { -d } else { d };
                    if d.is_zero() {
                        return Ok(Val::scalar(Poly2::zero()));
                    }
                    let d = d.to_i64().ok_or(SymError::Syntax { pos: p, msg: "radicand too large".into() })?;
                    Ok(Val::scalar(Poly2::constant(QN::sqrt_of(d).map_err(SymError::from)?)))
                }
                other => match self.consts.get(other) {
                    Some(c) => Ok(Val::scalar(Poly2::constant(c.clone()))),
                    None => Err(SymError::Syntax { pos, msg: format!("unknown identifier '{other}'") }),
                },
            },
            Some(_) => Err(SymError::Syntax { pos, msg: "unexpected token".into() }),
            None => Err(SymError::Syntax { pos, msg: "unexpected end of input".into() }),
        }
    }
}

fn parse_val(text: &str, consts: &HashMap<String, QN>) -> Result<Val, SymError> {
    let toks = tokenize(text)?;
    let mut p = Parser { toks, i: 0, end: text.len(), consts };
    let v = p.expr()?;
    if p.i < p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(v)
}

pub fn parse_poly_with(text: &str, consts: &HashMap<String, QN>) -> Result<Poly2, SymError> {
    let v = parse_val(text, consts)?;
    if v.has_diff() {
        return Err(SymError::Syntax { pos: 0, msg: "differential in polynomial".into() });
    }
    Ok(v.s)
}

pub fn parse_poly(text: &str) -> Result<Poly2, SymError> {
    parse_poly_with(text, &HashMap::new())
}

pub fn parse_form_with(
    text: &str,
    consts: &HashMap<String, QN>,
    chart: &str,
) -> Result<OneForm, SymError> {
    let v = parse_val(text, consts)?;
    if !v.s.is_zero() {
        return Err(SymError::Syntax { pos: 0, msg: "term without dx or dy".into() });
    }
    OneForm::new(v.dx, v.dy, chart)
}

pub fn parse_form(text: &str, chart: &str) -> Result<OneForm, SymError> {
    parse_form_with(text, &HashMap::new(), chart)
}

impl From<NumError> for SymError {
    fn from(e: NumError) -> Self {
        SymError::Num(e)
    }
}
