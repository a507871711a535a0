//! A small recursive-descent parser for scalar and polynomial expressions.
//!
//! The same grammar serves scalars (`3/2+1/2*i`), commutative polynomials
//! (`y0*y2 - y1^2`), univariate path entries (`t^2 - 1/3*t`) and
//! noncommutative words (`g1*g2 - g2*g1`); a [`Builder`] decides what the
//! atoms and operations mean. `i` is always the imaginary unit.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::scalar::GaussianRational;

pub trait Builder {
    type Value: Clone;
    fn scalar(&self, c: GaussianRational) -> Self::Value;
    fn variable(&self, name: &str) -> Option<Self::Value>;
    fn add(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn mul(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn as_scalar(&self, a: &Self::Value) -> Option<GaussianRational>;

    fn neg(&self, a: &Self::Value) -> Self::Value {
        self.mul(&self.scalar(-GaussianRational::one()), a)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Sym(char),
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut k = 0;
    while k < chars.len() {
        let c = chars[k];
        let col = k + 1;
        if c.is_whitespace() {
            k += 1;
        } else if c.is_ascii_digit() {
            let start = k;
            while k < chars.len() && chars[k].is_ascii_digit() {
                k += 1;
            }
            let s: String = chars[start..k].iter().collect();
            out.push((Tok::Num(s.parse().expect("digits")), col));
        } else if c.is_alphabetic() || c == '_' {
            let start = k;
            while k < chars.len() && (chars[k].is_alphanumeric() || chars[k] == '_') {
                k += 1;
            }
            out.push((Tok::Ident(chars[start..k].iter().collect()), col));
        } else if "+-*/^()".contains(c) {
            out.push((Tok::Sym(c), col));
            k += 1;
        } else {
            return Err(Error::Parse(format!("column {col}: unexpected character '{c}'")));
        }
    }
    Ok(out)
}

struct Parser<'a, B: Builder> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    b: &'a B,
    end_col: usize,
}

impl<'a, B: Builder> Parser<'a, B> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |t| t.1)
    }

    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Parse(format!("column {}: {msg}", self.col())))
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<B::Value> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                let t = self.term()?;
                acc = self.b.add(&acc, &t);
            } else if self.eat('-') {
                let t = self.term()?;
                acc = self.b.add(&acc, &self.b.neg(&t));
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<B::Value> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                let f = self.unary()?;
                acc = self.b.mul(&acc, &f);
            } else if self.eat('/') {
                let col = self.col();
                let f = self.unary()?;
                let inv = self
                    .b
                    .as_scalar(&f)
                    .and_then(|s| s.inv().ok())
                    .ok_or_else(|| Error::Parse(format!("column {col}: can only divide by a nonzero constant")))?;
                acc = self.b.mul(&acc, &self.b.scalar(inv));
            } else if matches!(self.peek(), Some(Tok::Num(_) | Tok::Ident(_) | Tok::Sym('('))) {
                let f = self.power()?;
                acc = self.b.mul(&acc, &f);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<B::Value> {
        if self.eat('-') {
            let v = self.unary()?;
            Ok(self.b.neg(&v))
        } else if self.eat('+') {
            self.unary()
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<B::Value> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let e = match self.peek() {
            Some(Tok::Num(n)) => n.to_u32(),
            _ => None,
        };
        let Some(e) = e else { return self.err("expected a small nonnegative exponent") };
        self.pos += 1;
        let mut acc = self.b.scalar(GaussianRational::one());
        for _ in 0..e {
            acc = self.b.mul(&acc, &base);
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<B::Value> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(self.b.scalar(GaussianRational::real(BigRational::from_integer(n))))
            }
            Some(Tok::Ident(name)) => {
                if name == "i" {
                    self.pos += 1;
                    return Ok(self.b.scalar(GaussianRational::i()));
                }
                match self.b.variable(&name) {
                    Some(v) => {
                        self.pos += 1;
                        Ok(v)
                    }
                    None => self.err(&format!("unknown symbol '{name}'")),
                }
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let v = self.expr()?;
                if !self.eat(')') {
                    return self.err("expected ')'");
                }
                Ok(v)
            }
            _ => self.err("expected a number, symbol or '('"),
        }
    }
}

pub fn parse_with<B: Builder>(b: &B, text: &str) -> Result<B::Value> {
    let toks = tokenize(text)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut p = Parser { toks, pos: 0, b, end_col: text.chars().count() + 1 };
    let v = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("unexpected trailing input");
    }
    Ok(v)
}

struct ScalarBuilder;

impl Builder for ScalarBuilder {
    type Value = GaussianRational;
    fn scalar(&self, c: GaussianRational) -> GaussianRational {
        c
    }
    fn variable(&self, _: &str) -> Option<GaussianRational> {
        None
    }
    fn add(&self, a: &GaussianRational, b: &GaussianRational) -> GaussianRational {
        a + b
    }
    fn mul(&self, a: &GaussianRational, b: &GaussianRational) -> GaussianRational {
        a * b
    }
    fn as_scalar(&self, a: &GaussianRational) -> Option<GaussianRational> {
        Some(a.clone())
    }
}

/// Parses a constant expression such as `3/2+1/2*i` or `-i`.
pub fn parse_scalar(text: &str) -> Result<GaussianRational> {
    parse_with(&ScalarBuilder, text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_forms() {
        assert_eq!(parse_scalar("i").unwrap(), GaussianRational::i());
        assert_eq!(parse_scalar("-i").unwrap(), -GaussianRational::i());
        assert_eq!(parse_scalar("1/2").unwrap(), GaussianRational::ratio(1, 2));
        assert_eq!(parse_scalar("(1+i)^2").unwrap(), GaussianRational::from_ints(0, 2));
        assert_eq!(parse_scalar("2i").unwrap(), GaussianRational::from_ints(0, 2));
        assert_eq!(parse_scalar("1/(1+i)").unwrap(), "1/2-1/2*i".parse().unwrap());
    }

    #[test]
    fn errors_carry_columns() {
        let e = parse_scalar("1 + x").unwrap_err();
        assert_eq!(e, Error::Parse("column 5: unknown symbol 'x'".into()));
        assert!(parse_scalar("1/0").is_err());
        assert!(parse_scalar("").is_err());
        assert!(parse_scalar("(1").is_err());
    }
}
