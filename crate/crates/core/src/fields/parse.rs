use thiserror::Error;

use crate::liealg::AlgebraSpec;
use crate::scalars::{Rational, Scalar};

use super::FieldExpr;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("field parse error at {position}: {message}")]
pub struct ParseFieldError {
    pub position: usize,
    pub message: String,
}

/// Grammar:
///
/// ```text
/// expr  := term (('+' | '-') term)*
/// term  := [ratio '*'] prod
/// prod  := unary ('*' int unary)*        left-associative residue products
/// unary := 'd' [digits] unary | atom     d2h is ∂²h
/// atom  := label | 'id' | '(' expr ')' | ':' unary unary ':'
/// ```
///
/// `:a b:` is `(a *-1 b)`.
impl FieldExpr {
    pub fn parse(spec: &AlgebraSpec, text: &str) -> Result<FieldExpr, ParseFieldError> {
        let mut p = Parser { spec, src: text.as_bytes(), pos: 0 };
        let f = p.expr()?;
        p.skip_ws();
        if p.pos < p.src.len() {
            return Err(p.err("unexpected trailing input"));
        }
        Ok(f)
    }
}

struct Parser<'a> {
    spec: &'a AlgebraSpec,
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, message: impl Into<String>) -> ParseFieldError {
        ParseFieldError { position: self.pos, message: message.into() }
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

    fn digits(&mut self) -> Option<u64> {
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).ok()?.parse().ok()
    }

    fn expr(&mut self) -> Result<FieldExpr, ParseFieldError> {
        let mut terms = Vec::new();
        let mut negative = self.eat(b'-');
        loop {
            let t = self.term()?;
            terms.push((Scalar::from(if negative { -1 } else { 1 }), t));
            if self.eat(b'+') {
                negative = false;
            } else if self.eat(b'-') {
                negative = true;
            } else {
                break;
            }
        }
        Ok(FieldExpr::linear(terms))
    }

    fn term(&mut self) -> Result<FieldExpr, ParseFieldError> {
        let coeff = if self.peek().is_some_and(|c| c.is_ascii_digit()) {
            let n = self.digits().ok_or_else(|| self.err("coefficient too large"))?;
            let mut r = Rational::from_integer(n as i64);
            if self.eat(b'/') {
                self.skip_ws();
                let d = self.digits().ok_or_else(|| self.err("expected a denominator"))?;
                if d == 0 {
                    return Err(self.err("zero denominator"));
                }
                r = &r / &Rational::from_integer(d as i64);
            }
            if !self.eat(b'*') {
                return Err(self.err("expected `*` after coefficient"));
            }
            Some(r)
        } else {
            None
        };
        let f = self.product()?;
        Ok(match coeff {
            Some(r) => f.scale(&Scalar::from(r)),
            None => f,
        })
    }

    fn product(&mut self) -> Result<FieldExpr, ParseFieldError> {
        let mut left = self.unary()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let negative = self.eat(b'-');
            self.skip_ws();
            let n = self.digits().ok_or_else(|| self.err("expected a residue-product index after `*`"))? as i64;
            let right = self.unary()?;
            left = FieldExpr::residue_product(if negative { -n } else { n }, &left, &right);
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<FieldExpr, ParseFieldError> {
        if self.peek() == Some(b'd') {
            self.pos += 1;
            let k = if self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
                self.digits().ok_or_else(|| self.err("derivative order too large"))? as u32
            } else {
                1
            };
            let inner = self.unary()?;
            return Ok(FieldExpr::derivative(k, &inner));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<FieldExpr, ParseFieldError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let f = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(f)
            }
            Some(b':') => {
                self.pos += 1;
                let a = self.unary()?;
                let b = self.unary()?;
                if !self.eat(b':') {
                    return Err(self.err("expected closing `:`"));
                }
                Ok(FieldExpr::normal_ordered(0, &a, &b))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.src.get(self.pos).is_some_and(u8::is_ascii_alphabetic) {
                    self.pos += 1;
                }
                let label = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or_default();
                if label == "id" {
                    return Ok(FieldExpr::identity());
                }
                match self.spec.gen_by_field_label(label) {
                    Some(g) => Ok(FieldExpr::generator(self.spec, g)),
                    None => {
                        self.pos = start;
                        Err(self.err(format!("unknown generator `{label}` for {}", self.spec)))
                    }
                }
            }
            Some(_) => Err(self.err("expected a field")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}
