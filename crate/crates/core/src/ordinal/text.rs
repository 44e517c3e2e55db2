//! Text syntax for ordinals: `w^2*3 + w + 5`, terms in descending order.
//!
//! Grammar (whitespace-tolerant on input, canonical on output):
//!
//! ```text
//! ordinal  :=  "0" | term (" + " term)*
//! term     :=  "w" ("^" exponent)? ("*" nat)? | nat
//! exponent :=  nat | "w" | "(" ordinal ")"
//! ```
//!
//! The printer emits the unique canonical spelling, and the parser accepts
//! exactly descending, coefficient-collected normal forms, so
//! `parse(print(x)) == x` and `print(parse(s))` normalises whitespace only.

use super::{depth_cap, Ordinal, OrdinalError};
use num::bigint::BigUint;
use num::One;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrdinalParseError {
    /// Byte offset of the offending token.
    pub position: usize,
    pub message: String,
}

impl std::fmt::Display for OrdinalParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ordinal syntax error at byte {}: {}", self.position, self.message)
    }
}

impl std::error::Error for OrdinalParseError {}

pub fn print(o: &Ordinal) -> String {
    if o.is_zero() {
        return "0".to_string();
    }
    let mut parts = Vec::with_capacity(o.terms().len());
    for (e, c) in o.terms() {
        let mut s = if e.is_zero() {
            c.to_string()
        } else if *e == Ordinal::one() {
            "w".to_string()
        } else if e.is_finite() || *e == Ordinal::omega() {
            format!("w^{e}")
        } else {
            format!("w^({e})")
        };
        if !e.is_zero() && !c.is_one() {
            s.push_str(&format!("*{c}"));
        }
        parts.push(s);
    }
    parts.join(" + ")
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, OrdinalParseError> {
        Err(OrdinalParseError {
            position: self.pos,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(|b| b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn nat(&mut self) -> Result<BigUint, OrdinalParseError> {
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return self.err("expected a number");
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        if digits.len() > 1 && digits.starts_with('0') {
            return self.err("leading zeros are not allowed");
        }
        Ok(digits.parse().unwrap())
    }

    fn exponent(&mut self) -> Result<Ordinal, OrdinalParseError> {
        match self.peek() {
            Some(b'w') => {
                self.pos += 1;
                Ok(Ordinal::omega())
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.ordinal()?;
                self.skip_ws();
                if !self.eat(b')') {
                    return self.err("expected ')'");
                }
                Ok(inner)
            }
            Some(b) if b.is_ascii_digit() => Ok(Ordinal::from_nat(self.nat()?)),
            _ => self.err("expected an exponent: a number, 'w' or '(...)'"),
        }
    }

    fn term(&mut self) -> Result<(Ordinal, BigUint), OrdinalParseError> {
        match self.peek() {
            Some(b'w') => {
                self.pos += 1;
                let exp = if self.eat(b'^') {
                    self.exponent()?
                } else {
                    Ordinal::one()
                };
                let coeff = if self.eat(b'*') {
                    let c = self.nat()?;
                    if c.is_one() {
                        return self.err("coefficient 1 is written without '*1'");
                    }
                    c
                } else {
                    BigUint::one()
                };
                Ok((exp, coeff))
            }
            Some(b) if b.is_ascii_digit() => {
                let c = self.nat()?;
                if num::Zero::is_zero(&c) {
                    return self.err("zero may only stand alone");
                }
                Ok((Ordinal::zero(), c))
            }
            _ => self.err("expected a term: 'w...' or a number"),
        }
    }

    fn ordinal(&mut self) -> Result<Ordinal, OrdinalParseError> {
        self.skip_ws();
        if self.peek() == Some(b'0') {
            // Lone zero; a leading zero digit of a larger number is not valid.
            let save = self.pos;
            self.pos += 1;
            if !self.peek().is_some_and(|b| b.is_ascii_digit()) {
                return Ok(Ordinal::zero());
            }
            self.pos = save;
        }
        let mut terms = vec![self.term()?];
        loop {
            let save = self.pos;
            self.skip_ws();
            if !self.eat(b'+') {
                self.pos = save;
                break;
            }
            self.skip_ws();
            terms.push(self.term()?);
        }
        match Ordinal::from_terms(terms) {
            Ok(o) => Ok(o),
            Err(OrdinalError::MalformedNormalForm) => {
                self.err("terms must have strictly descending exponents")
            }
            Err(e @ OrdinalError::DepthExceeded { .. }) => self.err(e.to_string()),
            Err(e) => self.err(e.to_string()),
        }
    }
}

pub fn parse(s: &str) -> Result<Ordinal, OrdinalParseError> {
    let mut p = Parser {
        src: s.as_bytes(),
        pos: 0,
    };
    let o = p.ordinal()?;
    p.skip_ws();
    if p.pos != s.len() {
        return p.err("trailing input");
    }
    // from_terms checked the depth of each nesting level, but not the whole.
    let depth = o.depth();
    if depth > depth_cap() {
        return Err(OrdinalParseError {
            position: 0,
            message: OrdinalError::DepthExceeded {
                depth,
                cap: depth_cap(),
            }
            .to_string(),
        });
    }
    Ok(o)
}
