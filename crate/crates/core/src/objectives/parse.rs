//! Reader for integer polynomial expressions in `s` and `u`.
//!
//! Accepts sums of products with implicit multiplication, parentheses,
//! integer exponents and unary signs, e.g.
//! `96(s-1)(246s^4+306s^3-142s^2-187s-3)u^2 - 192s(1-s^2)`.
//! The letter `x` is read as `s`.

use thiserror::Error;

use super::poly::BivariatePoly;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("unexpected character `{ch}` at offset {pos}")]
    Unexpected { ch: char, pos: usize },
    #[error("unexpected end of input")]
    Eof,
    #[error("integer literal too large at offset {0}")]
    Overflow(usize),
}

pub fn parse_poly(src: &str) -> Result<BivariatePoly, ParseError> {
    let mut p = Parser { chars: src.chars().filter(|c| !c.is_whitespace()).collect(), pos: 0 };
    let out = p.expr()?;
    match p.peek() {
        None => Ok(out),
        Some(ch) => Err(ParseError::Unexpected { ch, pos: p.pos }),
    }
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        self.pos += 1;
        c
    }

    fn expr(&mut self) -> Result<BivariatePoly, ParseError> {
        let mut acc = BivariatePoly::zero();
        let mut first = true;
        loop {
            let sign = match self.peek() {
                Some('+') => {
                    self.bump();
                    1
                }
                Some('-') => {
                    self.bump();
                    -1
                }
                _ if first => 1,
                _ => return Ok(acc),
            };
            first = false;
            let t = self.term()?;
            acc = if sign > 0 { acc + t } else { acc - t };
        }
    }

    fn term(&mut self) -> Result<BivariatePoly, ParseError> {
        let mut acc = self.factor()?;
        while let Some(c) = self.peek() {
            match c {
                '*' => {
                    self.bump();
                    acc = acc * self.factor()?;
                }
                '(' | 's' | 'u' | 'x' | '0'..='9' => acc = acc * self.factor()?,
                _ => break,
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<BivariatePoly, ParseError> {
        let base = self.primary()?;
        if self.peek() == Some('^') {
            self.bump();
            let e = self.integer()?;
            return Ok(base.pow(e as u32));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<BivariatePoly, ParseError> {
        match self.peek() {
            Some('(') => {
                self.bump();
                let inner = self.expr()?;
                match self.bump() {
                    Some(')') => Ok(inner),
                    Some(ch) => Err(ParseError::Unexpected { ch, pos: self.pos - 1 }),
                    None => Err(ParseError::Eof),
                }
            }
            Some('s') | Some('x') => {
                self.bump();
                Ok(BivariatePoly::s())
            }
            Some('u') => {
                self.bump();
                Ok(BivariatePoly::u())
            }
            Some('0'..='9') => Ok(BivariatePoly::constant(self.integer()?)),
            Some(ch) => Err(ParseError::Unexpected { ch, pos: self.pos }),
            None => Err(ParseError::Eof),
        }
    }

    fn integer(&mut self) -> Result<i64, ParseError> {
        let start = self.pos;
        let mut v: i64 = 0;
        while let Some(d) = self.peek().and_then(|c| c.to_digit(10)) {
            self.bump();
            v = v.checked_mul(10).and_then(|v| v.checked_add(d as i64)).ok_or(ParseError::Overflow(start))?;
        }
        if self.pos == start {
            return match self.peek() {
                Some(ch) => Err(ParseError::Unexpected { ch, pos: self.pos }),
                None => Err(ParseError::Eof),
            };
        }
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn implicit_products_and_powers() {
        let p = parse_poly("3s^2u - (1-u)^2 + 2").unwrap();
        let expect = BivariatePoly::from_terms([(2, 1, 3), (0, 0, 1), (0, 1, 2), (0, 2, -1)]);
        assert_eq!(p, expect);
        assert_eq!(parse_poly("x^2").unwrap(), parse_poly("s*s").unwrap());
        assert_eq!(parse_poly("-768(+870s)").unwrap(), BivariatePoly::monomial(-768 * 870, 1, 0));
    }

    #[test]
    fn malformed_inputs() {
        assert!(matches!(parse_poly("2(s+1"), Err(ParseError::Eof)));
        assert!(matches!(parse_poly("2(s+1))"), Err(ParseError::Unexpected { ch: ')', .. })));
        assert!(matches!(parse_poly("2y"), Err(ParseError::Unexpected { ch: 'y', .. })));
        assert!(parse_poly("99999999999999999999").is_err());
    }
}
