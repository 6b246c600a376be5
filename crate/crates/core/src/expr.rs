//! Parser for rational-function expressions: integer literals, named
//! variables, `+ - * / ^`, unary minus and parentheses. `^` takes an integer
//! exponent (negative exponents invert) and binds tighter than unary minus.

use num_bigint::BigInt;
use thiserror::Error;

use crate::poly::{DivisionByZero, Rational, RationalFunction};

/// Largest exponent magnitude accepted by the parser; the field enforces its
/// own (smaller) degree limit afterwards.
const MAX_EXPONENT: u32 = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("unexpected character {ch:?} at byte {pos}")]
    UnexpectedChar { ch: char, pos: usize },
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("unexpected token {token:?} at byte {pos}")]
    UnexpectedToken { token: String, pos: usize },
    #[error("unknown variable {0:?}")]
    UnknownVariable(String),
    #[error("exponent {0} out of range")]
    ExponentOutOfRange(String),
    #[error("division by zero in expression")]
    DivisionByZero,
}

impl From<DivisionByZero> for ParseError {
    fn from(_: DivisionByZero) -> Self {
        ParseError::DivisionByZero
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Op(char),
}

fn tokenize(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let mut out = Vec::new();
    let bytes = src.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let ch = src[i..].chars().next().unwrap();
        if ch.is_whitespace() {
            i += ch.len_utf8();
        } else if ch.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n: BigInt = src[start..i].parse().expect("digits");
            out.push((Tok::Int(n), start));
        } else if ch.is_ascii_alphabetic() || ch == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((Tok::Ident(src[start..i].to_string()), start));
        } else if "+-*/^()".contains(ch) {
            out.push((Tok::Op(ch), i));
            i += 1;
        } else {
            return Err(ParseError::UnexpectedChar { ch, pos: i });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    resolve: &'a dyn Fn(&str) -> Option<usize>,
}

impl Parser<'_> {
    fn peek_op(&self) -> Option<char> {
        match self.toks.get(self.pos) {
            Some((Tok::Op(c), _)) => Some(*c),
            _ => None,
        }
    }

    fn unexpected(&self) -> ParseError {
        match self.toks.get(self.pos) {
            None => ParseError::UnexpectedEnd,
            Some((t, p)) => ParseError::UnexpectedToken {
                token: match t {
                    Tok::Int(n) => n.to_string(),
                    Tok::Ident(s) => s.clone(),
                    Tok::Op(c) => c.to_string(),
                },
                pos: *p,
            },
        }
    }

    fn expect_op(&mut self, c: char) -> Result<(), ParseError> {
        if self.peek_op() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.unexpected())
        }
    }

    fn expr(&mut self) -> Result<RationalFunction, ParseError> {
        let mut acc = self.term()?;
        while let Some(op @ ('+' | '-')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == '+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RationalFunction, ParseError> {
        let mut acc = self.unary()?;
        while let Some(op @ ('*' | '/')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.unary()?;
            acc = if op == '*' { &acc * &rhs } else { acc.checked_div(&rhs)? };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<RationalFunction, ParseError> {
        match self.peek_op() {
            Some('-') => {
                self.pos += 1;
                Ok(-&self.unary()?)
            }
            Some('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<RationalFunction, ParseError> {
        let base = self.atom()?;
        if self.peek_op() != Some('^') {
            return Ok(base);
        }
        self.pos += 1;
        let e = self.exponent()?;
        Ok(base.pow(e)?)
    }

    fn exponent(&mut self) -> Result<i32, ParseError> {
        let paren = self.peek_op() == Some('(');
        if paren {
            self.pos += 1;
        }
        let neg = self.peek_op() == Some('-');
        if neg {
            self.pos += 1;
        }
        let n = match self.toks.get(self.pos) {
            Some((Tok::Int(n), _)) => n.clone(),
            _ => return Err(self.unexpected()),
        };
        self.pos += 1;
        if paren {
            self.expect_op(')')?;
        }
        let mag: u32 = u32::try_from(&n)
            .ok()
            .filter(|&m| m <= MAX_EXPONENT)
            .ok_or_else(|| ParseError::ExponentOutOfRange(n.to_string()))?;
        Ok(if neg { -(mag as i32) } else { mag as i32 })
    }

    fn atom(&mut self) -> Result<RationalFunction, ParseError> {
        let (tok, _) = self.toks.get(self.pos).cloned().ok_or(ParseError::UnexpectedEnd)?;
        match tok {
            Tok::Int(n) => {
                self.pos += 1;
                Ok(RationalFunction::constant(Rational::from_integer(n)))
            }
            Tok::Ident(name) => {
                self.pos += 1;
                let j = (self.resolve)(&name).ok_or(ParseError::UnknownVariable(name))?;
                Ok(RationalFunction::var(j))
            }
            Tok::Op('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect_op(')')?;
                Ok(inner)
            }
            Tok::Op(_) => Err(self.unexpected()),
        }
    }
}

/// Parses `src` into a reduced rational function. `resolve` maps a variable
/// name to its index, or `None` if the name is not a variable.
pub fn parse_rational_function(
    src: &str,
    resolve: &dyn Fn(&str) -> Option<usize>,
) -> Result<RationalFunction, ParseError> {
    let toks = tokenize(src)?;
    let mut p = Parser { toks, pos: 0, resolve };
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.unexpected());
    }
    Ok(out)
}

/// Parses a plain rational such as `-3/4` or `7`.
pub fn parse_rational(src: &str) -> Result<Rational, ParseError> {
    let r = parse_rational_function(src, &|_| None)?;
    r.constant_value().ok_or_else(|| ParseError::UnknownVariable(src.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n_var(s: &str) -> Option<usize> {
        (s == "n").then_some(0)
    }

    #[test]
    fn precedence_and_unary_minus() {
        let a = parse_rational_function("-n^2 + 3*n/2", &n_var).unwrap();
        let x = Rational::from_integer(4.into());
        assert_eq!(a.eval(&[x]).unwrap(), Rational::from_integer((-10).into()));
        let b = parse_rational_function("2^-2", &n_var).unwrap();
        assert_eq!(b.constant_value().unwrap(), Rational::new(1.into(), 4.into()));
    }

    #[test]
    fn errors_are_reported() {
        assert_eq!(parse_rational_function("1/0", &n_var), Err(ParseError::DivisionByZero));
        assert!(matches!(parse_rational_function("m", &n_var), Err(ParseError::UnknownVariable(_))));
        assert_eq!(parse_rational_function("(1", &n_var), Err(ParseError::UnexpectedEnd));
        assert!(matches!(parse_rational_function("1 $", &n_var), Err(ParseError::UnexpectedChar { .. })));
        assert!(parse_rational_function("n^99999", &n_var).is_err());
    }

    #[test]
    fn parses_plain_rationals() {
        assert_eq!(parse_rational("-3/4").unwrap(), Rational::new((-3).into(), 4.into()));
        assert!(parse_rational("n").is_err());
    }
}
