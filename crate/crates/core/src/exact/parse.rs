//! Parser for the canonical text form of rational functions in `t1`, `t2`, `q`.
//!
//! Grammar (the same one the `Display` impls emit):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' integer)?
//! atom   := integer | 't1' | 't2' | 'q' | '(' expr ')'
//! ```

use num_bigint::BigInt;

use super::frac::{QRat, TRat};
use super::ring::{Rational, Ring};
use super::ExactError;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Var(&'static str),
    Op(char),
}

fn lex(s: &str) -> Result<Vec<Tok>, ExactError> {
    let bytes = s.as_bytes();
    let mut i = 0;
    let mut out = Vec::new();
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' => i += 1,
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push(Tok::Int(s[start..i].parse().expect("digits")));
            }
            '+' | '-' | '*' | '/' | '^' | '(' | ')' => {
                out.push(Tok::Op(c));
                i += 1;
            }
            't' if s[i..].starts_with("t1") => {
                out.push(Tok::Var("t1"));
                i += 2;
            }
            't' if s[i..].starts_with("t2") => {
                out.push(Tok::Var("t2"));
                i += 2;
            }
            'q' => {
                out.push(Tok::Var("q"));
                i += 1;
            }
            _ => return Err(ExactError::Parse(format!("unexpected character '{c}' at {i}"))),
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<QRat, ExactError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc + self.term()?;
            } else if self.eat('-') {
                acc = acc - self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<QRat, ExactError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc * self.unary()?;
            } else if self.eat('/') {
                let d = self.unary()?;
                if d.is_zero() {
                    return Err(ExactError::Parse("division by zero".into()));
                }
                acc = acc / d;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<QRat, ExactError> {
        if self.eat('-') {
            return Ok(-self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<QRat, ExactError> {
        let base = self.atom()?;
        if self.eat('^') {
            match self.peek().cloned() {
                Some(Tok::Int(e)) => {
                    self.pos += 1;
                    let e: u32 = e.try_into().map_err(|_| ExactError::Parse("exponent too large".into()))?;
                    Ok(base.pow(e))
                }
                _ => Err(ExactError::Parse("expected a nonnegative integer exponent".into())),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<QRat, ExactError> {
        match self.peek().cloned() {
            Some(Tok::Int(v)) => {
                self.pos += 1;
                Ok(QRat::from_rational(Rational::from_integer(v)))
            }
            Some(Tok::Var(name)) => {
                self.pos += 1;
                Ok(match name {
                    "t1" => QRat::from_trat(&TRat::t1()),
                    "t2" => QRat::from_trat(&TRat::t2()),
                    _ => QRat::q(),
                })
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(ExactError::Parse("missing ')'".into()));
                }
                Ok(e)
            }
            other => Err(ExactError::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

/// Parse a rational function of `t1`, `t2`, `q`.
pub fn parse_qrat(s: &str) -> Result<QRat, ExactError> {
    let toks = lex(s)?;
    if toks.is_empty() {
        return Err(ExactError::Parse("empty expression".into()));
    }
    let mut p = Parser { toks, pos: 0 };
    let v = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(ExactError::Parse(format!("trailing input at token {}", p.pos)));
    }
    Ok(v)
}

/// Parse a rational function of `t1`, `t2` only.
pub fn parse_trat(s: &str) -> Result<TRat, ExactError> {
    parse_qrat(s)?.as_trat().ok_or_else(|| ExactError::Parse(format!("'{s}' depends on q")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::tpoly::TPoly;

    #[test]
    fn parses_canonical_polynomial() {
        let p = parse_trat("3*t1^2*t2 - 1/2").unwrap();
        assert_eq!(p.to_string(), "3*t1^2*t2 - 1/2");
        assert_eq!(p, TRat::from_poly(TPoly::t1() * TPoly::t1() * TPoly::t2() * TPoly::int(3)) - TRat::rational(crate::exact::rat(1, 2)));
    }

    #[test]
    fn parses_rational_functions() {
        let x = parse_trat("-1/(2*t1*t2)").unwrap();
        assert_eq!(x.to_string(), "-1/(2*t1*t2)");
        let y = parse_qrat("(-q - 1)/(q - 1)").unwrap();
        assert_eq!(y.to_string(), "(-q - 1)/(q - 1)");
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_qrat("t3").is_err());
        assert!(parse_qrat("(t1").is_err());
        assert!(parse_qrat("1/0").is_err());
        assert!(parse_trat("q").is_err());
    }
}
