//! Recursive-descent parser for scalar expressions such as `3/2`,
//! `(1/2)*C`, `2*K*C - K^2`.

use super::{Degree, ParseScalarError, Rational, Scalar};

pub(super) fn parse_scalar(text: &str) -> Result<Scalar, ParseScalarError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let value = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(value)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> ParseScalarError {
        ParseScalarError::new(self.pos, msg.to_string())
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Scalar, ParseScalarError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc += &self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc -= &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Scalar, ParseScalarError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let divisor = self.unary()?;
                    let r = divisor
                        .as_rational()
                        .filter(|r| !r.is_zero())
                        .ok_or_else(|| self.error("can only divide by a nonzero rational"))?;
                    acc = acc.scale(&r.recip());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Scalar, ParseScalarError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Scalar, ParseScalarError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let exp = self.integer()?;
            let exp = u32::try_from(exp).map_err(|_| self.error("exponent must be a nonnegative integer"))?;
            let mut acc = Scalar::one();
            for _ in 0..exp {
                acc = &acc * &base;
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<i64, ParseScalarError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected digits"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| ParseScalarError::new(start, "integer too large".to_string()))
    }

    fn atom(&mut self) -> Result<Scalar, ParseScalarError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(b'K') => {
                self.pos += 1;
                Ok(Scalar::k())
            }
            Some(b'C') => {
                self.pos += 1;
                Ok(Scalar::c())
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                let r: Rational = digits.parse().map_err(|e: ParseScalarError| ParseScalarError::new(start, e.message))?;
                Ok(Scalar::monomial(Degree::ONE, r))
            }
            Some(_) => Err(self.error("expected a number, `K`, `C` or `(`")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grammar() {
        assert_eq!(parse_scalar("(1/2)*C").unwrap(), Scalar::c().scale(&Rational::new(1, 2)));
        assert_eq!(parse_scalar("K^2").unwrap(), &Scalar::k() * &Scalar::k());
        assert_eq!(parse_scalar(" 2 * K * C ").unwrap(), (&Scalar::k() * &Scalar::c()).scale(&Rational::from_integer(2)));
        assert_eq!(parse_scalar("-3/4").unwrap(), Scalar::ratio(-3, 4));
    }

    #[test]
    fn errors_carry_position() {
        let err = parse_scalar("1 + x").unwrap_err();
        assert_eq!(err.position, 4);
        assert!(parse_scalar("K/0").is_err());
        assert!(parse_scalar("(1").is_err());
        assert!(parse_scalar("").is_err());
        assert!(parse_scalar("1/K").is_err());
    }
}
