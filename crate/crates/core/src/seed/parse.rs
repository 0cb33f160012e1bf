//! Recursive-descent parser for seed expressions.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' integer)?
//! atom   := 'z' | number | '(' expr ')'
//! number := digits ('.' digits)?
//! ```
//!
//! Positions in errors are 0-based character offsets.

use num_bigint::BigInt;
use num_traits::{Pow, ToPrimitive};

use super::poly::{Rational, RealPoly};
use super::RationalSeed;
use crate::error::{Error, Result};

pub fn parse_seed(text: &str) -> Result<RationalSeed> {
    let mut p = Parser { chars: text.chars().collect(), pos: 0 };
    let seed = p.expr()?;
    p.skip_ws();
    if let Some(c) = p.peek() {
        return Err(p.error(format!("unexpected '{c}'")));
    }
    Ok(seed)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn error(&self, message: impl Into<String>) -> Error {
        Error::Syntax { position: self.pos, message: message.into() }
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    /// Next non-whitespace character, without consuming it.
    fn lookahead(&mut self) -> Option<char> {
        self.skip_ws();
        self.peek()
    }

    fn expr(&mut self) -> Result<RationalSeed> {
        let mut acc = self.term()?;
        while let Some(op @ ('+' | '-')) = self.lookahead() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == '+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RationalSeed> {
        let mut acc = self.unary()?;
        while let Some(op @ ('*' | '/')) = self.lookahead() {
            self.pos += 1;
            let at = self.pos;
            let rhs = self.unary()?;
            acc = if op == '*' {
                &acc * &rhs
            } else {
                acc.checked_div(&rhs).map_err(|e| match e {
                    Error::ZeroElement => Error::ZeroDenominator,
                    other => other,
                }).inspect_err(|_| self.pos = at)?
            };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<RationalSeed> {
        if self.lookahead() == Some('-') {
            self.pos += 1;
            return Ok(-self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<RationalSeed> {
        let base = self.atom()?;
        if self.lookahead() != Some('^') {
            return Ok(base);
        }
        self.pos += 1;
        self.skip_ws();
        let start = self.pos;
        let digits = self.digits();
        if digits.is_empty() {
            return Err(self.error("expected a nonnegative integer exponent"));
        }
        if self.peek() == Some('.') {
            return Err(self.error("exponent must be an integer"));
        }
        let exp = digits
            .parse::<u32>()
            .map_err(|_| Error::Syntax { position: start, message: "exponent too large".into() })?;
        if self.lookahead() == Some('^') {
            return Err(self.error("chained exponents are ambiguous; use parentheses"));
        }
        Ok(base.pow(exp))
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn atom(&mut self) -> Result<RationalSeed> {
        match self.lookahead() {
            Some('z') => {
                self.pos += 1;
                Ok(RationalSeed::var())
            }
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.lookahead() != Some(')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => self.number(),
            Some(c) => Err(self.error(format!("unexpected '{c}'"))),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn number(&mut self) -> Result<RationalSeed> {
        let int_part = self.digits();
        let mut value = Rational::from_integer(int_part.parse::<BigInt>().expect("digits"));
        if self.peek() == Some('.') {
            self.pos += 1;
            let frac = self.digits();
            if frac.is_empty() {
                return Err(self.error("expected digits after '.'"));
            }
            let scale = BigInt::from(10).pow(frac.len().to_u32().unwrap_or(u32::MAX));
            value += Rational::new(frac.parse::<BigInt>().expect("digits"), scale);
        }
        Ok(RationalSeed::polynomial(RealPoly::constant(value)))
    }
}
