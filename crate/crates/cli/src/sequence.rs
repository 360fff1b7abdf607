//! Sequences for the `newton` command: either a comma-separated list of
//! rationals or an expression in `n`.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' unary)?
//! atom  := integer | 'n' | '(' expr ')' | 'binom(' expr ',' expr ')'
//! ```

use newtonva::newton::binomial;
use newtonva::scalars::{Rational, Scalar};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SequenceError {
    #[error("at position {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("at n = {n}: {message}")]
    Eval { n: i64, message: String },
}

#[derive(Debug, Clone, PartialEq)]
enum Expr {
    Int(i64),
    N,
    Neg(Box<Expr>),
    Bin(char, Box<Expr>, Box<Expr>),
    Binom(Box<Expr>, Box<Expr>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Sequence {
    List(Vec<Scalar>),
    Formula { text: String, expr: ExprBox },
}

/// Opaque parsed formula.
#[derive(Debug, Clone, PartialEq)]
pub struct ExprBox(Expr);

impl Sequence {
    pub fn parse(text: &str) -> Result<Sequence, SequenceError> {
        if text.contains(',') && !text.contains(|c: char| c.is_ascii_alphabetic() || c == '(') {
            let values = text
                .split(',')
                .enumerate()
                .map(|(i, part)| {
                    part.trim().parse::<Rational>().map(Scalar::from).map_err(|e| SequenceError::Parse {
                        position: i,
                        message: format!("list entry `{}`: {e}", part.trim()),
                    })
                })
                .collect::<Result<_, _>>()?;
            return Ok(Sequence::List(values));
        }
        let mut p = Parser { src: text.as_bytes(), pos: 0 };
        let expr = p.expr()?;
        p.skip_ws();
        if p.pos < p.src.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(Sequence::Formula { text: text.to_string(), expr: ExprBox(expr) })
    }

    pub fn describe(&self) -> String {
        match self {
            Sequence::List(v) => v.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(","),
            Sequence::Formula { text, .. } => text.clone(),
        }
    }

    /// Values on `lo..=hi`; a list must have exactly that many entries.
    pub fn sample(&self, lo: i64, hi: i64) -> Result<Vec<Scalar>, SequenceError> {
        match self {
            Sequence::List(values) => {
                let len = (hi - lo + 1) as usize;
                if values.len() != len {
                    return Err(SequenceError::Parse {
                        position: 0,
                        message: format!("list has {} entries but the window {lo}..{hi} has {len}", values.len()),
                    });
                }
                Ok(values.clone())
            }
            Sequence::Formula { expr, .. } => (lo..=hi).map(|n| eval(&expr.0, n).map(Scalar::from)).collect(),
        }
    }
}

fn eval(e: &Expr, n: i64) -> Result<Rational, SequenceError> {
    let fail = |message: &str| SequenceError::Eval { n, message: message.to_string() };
    Ok(match e {
        Expr::Int(k) => Rational::from_integer(*k),
        Expr::N => Rational::from_integer(n),
        Expr::Neg(a) => -eval(a, n)?,
        Expr::Bin(op, a, b) => {
            let (x, y) = (eval(a, n)?, eval(b, n)?);
            match op {
                '+' => &x + &y,
                '-' => &x - &y,
                '*' => &x * &y,
                '/' => {
                    if y.is_zero() {
                        return Err(fail("division by zero"));
                    }
                    &x / &y
                }
                '^' => {
                    let k = y.to_i64().filter(|_| y.is_integer()).ok_or_else(|| fail("exponent must be an integer"))?;
                    if k < 0 {
                        if x.is_zero() {
                            return Err(fail("zero to a negative power"));
                        }
                        x.recip().pow(k.unsigned_abs() as u32)
                    } else {
                        x.pow(k as u32)
                    }
                }
                _ => unreachable!(),
            }
        }
        Expr::Binom(a, b) => {
            let top = eval(a, n)?;
            let bottom = eval(b, n)?;
            let t = top.to_i64().filter(|_| top.is_integer()).ok_or_else(|| fail("binom needs an integer top"))?;
            let k = bottom
                .to_i64()
                .filter(|k| bottom.is_integer() && *k >= 0)
                .ok_or_else(|| fail("binom needs a nonnegative integer bottom"))?;
            binomial(t, k as u32)
        }
    })
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> SequenceError {
        SequenceError::Parse { position: self.pos, message: message.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), SequenceError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected `{}`", c as char)))
        }
    }

    fn expr(&mut self) -> Result<Expr, SequenceError> {
        let mut lhs = self.term()?;
        while let Some(op @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            lhs = Expr::Bin(op as char, Box::new(lhs), Box::new(self.term()?));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, SequenceError> {
        let mut lhs = self.unary()?;
        while let Some(op @ (b'*' | b'/')) = self.peek() {
            self.pos += 1;
            lhs = Expr::Bin(op as char, Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, SequenceError> {
        if self.eat(b'-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        let base = self.atom()?;
        if self.eat(b'^') {
            return Ok(Expr::Bin('^', Box::new(base), Box::new(self.unary()?)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, SequenceError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
                    self.pos += 1;
                }
                let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                digits.parse().map(Expr::Int).map_err(|_| SequenceError::Parse { position: start, message: "integer too large".into() })
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.src.get(self.pos).is_some_and(u8::is_ascii_alphanumeric) {
                    self.pos += 1;
                }
                match &self.src[start..self.pos] {
                    b"n" => Ok(Expr::N),
                    b"binom" => {
                        self.expect(b'(')?;
                        let top = self.expr()?;
                        self.expect(b',')?;
                        let bottom = self.expr()?;
                        self.expect(b')')?;
                        Ok(Expr::Binom(Box::new(top), Box::new(bottom)))
                    }
                    _ => Err(SequenceError::Parse { position: start, message: "unknown name (expected `n` or `binom`)".into() }),
                }
            }
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn values(text: &str, lo: i64, hi: i64) -> Vec<Scalar> {
        Sequence::parse(text).unwrap().sample(lo, hi).unwrap()
    }

    fn ints(xs: &[i64]) -> Vec<Scalar> {
        xs.iter().map(|&x| Scalar::from(x)).collect()
    }

    #[test]
    fn formulas() {
        assert_eq!(values("n^2", -2, 2), ints(&[4, 1, 0, 1, 4]));
        assert_eq!(values("binom(n,3)", 0, 5), ints(&[0, 0, 0, 1, 4, 10]));
        assert_eq!(values("2^n", 0, 4), ints(&[1, 2, 4, 8, 16]));
        assert_eq!(values("-n^2 + 3*n - 1", 1, 2), ints(&[1, 1]));
        assert_eq!(values("2^-n", 1, 1), vec![Scalar::from(Rational::new(1, 2))]);
        assert_eq!(values("n/2", 1, 1), vec![Scalar::from(Rational::new(1, 2))]);
    }

    #[test]
    fn lists() {
        assert_eq!(values("1,1,1,1", 0, 3), ints(&[1, 1, 1, 1]));
        assert_eq!(values("1/2, -3", 0, 1), vec![Scalar::from(Rational::new(1, 2)), Scalar::from(-3)]);
        assert_eq!(values("7", 0, 2), ints(&[7, 7, 7]));
        assert!(Sequence::parse("1,1").unwrap().sample(0, 3).is_err());
    }

    #[test]
    fn errors() {
        assert!(matches!(Sequence::parse("n^"), Err(SequenceError::Parse { position: 2, .. })));
        assert!(matches!(Sequence::parse("m + 1"), Err(SequenceError::Parse { position: 0, .. })));
        assert!(matches!(Sequence::parse("(n"), Err(SequenceError::Parse { .. })));
        assert!(matches!(Sequence::parse("1/n").unwrap().sample(0, 1), Err(SequenceError::Eval { n: 0, .. })));
        assert!(Sequence::parse("n^(1/2)").unwrap().sample(1, 1).is_err());
    }
}
