//! Text syntax for [`ParamField`] values.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' exponent)?
//! exponent := int | '-' int | '(' '-'? int ('/' '2')? ')'
//! atom   := int | ident | 'sqrt(' ident ')' | '(' expr ')'
//! ```
//!
//! `q` is the quantum parameter; `q^(k/2)` is allowed. Any other identifier
//! is a free parameter. A parameter declared as a square is stored through
//! its root, so both `x` and `sqrt(x)` are available for it.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::field::ParamField;
use crate::symbol::Symbol;

/// Names that cannot be used as parameters.
pub const RESERVED: [&str; 4] = ["q", "s", "z", "w"];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("unexpected end of input in {0:?}")]
    UnexpectedEnd(String),
    #[error("unexpected character {found:?} at position {pos} in {input:?}")]
    Unexpected { input: String, pos: usize, found: char },
    #[error("parameter name {0:?} is reserved")]
    Reserved(String),
    #[error("sqrt({0}) requires {0} to be declared as a square parameter")]
    NotSquare(String),
    #[error("fractional exponent is only allowed on q, or on square parameters as k/2")]
    FractionalExponent,
    #[error("division by zero in {0:?}")]
    DivisionByZero(String),
    #[error("exponent out of range")]
    ExponentRange,
}

/// Parameter declarations for parsing.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ParamDecls {
    squares: BTreeSet<String>,
}

impl ParamDecls {
    pub fn new() -> Self {
        ParamDecls::default()
    }

    /// Declares `name` as a square parameter.
    pub fn with_square(mut self, name: &str) -> Result<Self, ParseError> {
        check_name(name)?;
        self.squares.insert(name.to_string());
        Ok(self)
    }

    pub fn is_square(&self, name: &str) -> bool {
        self.squares.contains(name)
    }

    pub fn squares(&self) -> impl Iterator<Item = &str> {
        self.squares.iter().map(|s| s.as_str())
    }

    /// Value of a parameter by name.
    pub fn param(&self, name: &str) -> ParamField {
        if self.is_square(name) {
            let r = ParamField::symbol(&Symbol::sqrt_of(name));
            &r * &r
        } else {
            ParamField::param(name)
        }
    }
}

fn check_name(name: &str) -> Result<(), ParseError> {
    if RESERVED.contains(&name) {
        return Err(ParseError::Reserved(name.to_string()));
    }
    Ok(())
}

/// Parses a scalar expression.
pub fn parse_field(input: &str, decls: &ParamDecls) -> Result<ParamField, ParseError> {
    let mut p = Parser {
        input,
        chars: input.char_indices().collect(),
        pos: 0,
        decls,
    };
    let v = p.expr()?;
    p.skip_ws();
    if let Some(&(i, c)) = p.chars.get(p.pos) {
        return Err(p.unexpected(i, c));
    }
    Ok(v)
}

struct Parser<'a> {
    input: &'a str,
    chars: Vec<(usize, char)>,
    pos: usize,
    decls: &'a ParamDecls,
}

enum Base {
    Value(ParamField),
    /// root generator and the name of its square
    Root(ParamField),
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|(_, c)| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn unexpected(&self, pos: usize, found: char) -> ParseError {
        ParseError::Unexpected {
            input: self.input.to_string(),
            pos,
            found,
        }
    }

    fn expect(&mut self, want: char) -> Result<(), ParseError> {
        self.skip_ws();
        match self.chars.get(self.pos) {
            Some(&(_, c)) if c == want => {
                self.pos += 1;
                Ok(())
            }
            Some(&(i, c)) => Err(self.unexpected(i, c)),
            None => Err(ParseError::UnexpectedEnd(self.input.to_string())),
        }
    }

    fn expr(&mut self) -> Result<ParamField, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some('-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<ParamField, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                Some('/') => {
                    self.pos += 1;
                    let d = self.unary()?;
                    acc = acc
                        .checked_div(&d)
                        .map_err(|_| ParseError::DivisionByZero(self.input.to_string()))?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<ParamField, ParseError> {
        if self.peek() == Some('-') {
            self.pos += 1;
            return Ok(-&self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<ParamField, ParseError> {
        let base = self.atom()?;
        if self.peek() != Some('^') {
            return Ok(match base {
                Base::Value(v) => v,
                Base::Root(r) => &r * &r,
            });
        }
        self.pos += 1;
        let (num, half) = self.exponent()?;
        let pow = |x: &ParamField, k: i64| {
            x.pow(k)
                .map_err(|_| ParseError::DivisionByZero(self.input.to_string()))
        };
        match base {
            Base::Root(r) => {
                let k = if half { num } else { num.checked_mul(2).ok_or(ParseError::ExponentRange)? };
                pow(&r, k)
            }
            Base::Value(v) => {
                if half {
                    return Err(ParseError::FractionalExponent);
                }
                pow(&v, num)
            }
        }
    }

    fn int(&mut self) -> Result<i64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|(_, c)| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return match self.chars.get(self.pos) {
                Some(&(i, c)) => Err(self.unexpected(i, c)),
                None => Err(ParseError::UnexpectedEnd(self.input.to_string())),
            };
        }
        let s: String = self.chars[start..self.pos].iter().map(|&(_, c)| c).collect();
        s.parse::<i64>().map_err(|_| ParseError::ExponentRange)
    }

    /// Returns (numerator, is_half).
    fn exponent(&mut self) -> Result<(i64, bool), ParseError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let neg = if self.peek() == Some('-') {
                    self.pos += 1;
                    true
                } else {
                    false
                };
                let n = self.int()?;
                let n = if neg { -n } else { n };
                let half = if self.peek() == Some('/') {
                    self.pos += 1;
                    let d = self.int()?;
                    if d != 2 {
                        return Err(ParseError::FractionalExponent);
                    }
                    true
                } else {
                    false
                };
                self.expect(')')?;
                Ok((n, half))
            }
            Some('-') => {
                self.pos += 1;
                Ok((-self.int()?, false))
            }
            _ => Ok((self.int()?, false)),
        }
    }

    fn ident(&mut self) -> String {
        let start = self.pos;
        while self
            .chars
            .get(self.pos)
            .is_some_and(|(_, c)| c.is_alphanumeric() || *c == '_')
        {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().map(|&(_, c)| c).collect()
    }

    fn atom(&mut self) -> Result<Base, ParseError> {
        match self.peek() {
            None => Err(ParseError::UnexpectedEnd(self.input.to_string())),
            Some('(') => {
                self.pos += 1;
                let v = self.expr()?;
                self.expect(')')?;
                Ok(Base::Value(v))
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.chars.get(self.pos).is_some_and(|(_, c)| c.is_ascii_digit()) {
                    self.pos += 1;
                }
                let s: String = self.chars[start..self.pos].iter().map(|&(_, c)| c).collect();
                let n: num_bigint::BigInt = s.parse().expect("digits");
                Ok(Base::Value(ParamField::from_bigint(n)))
            }
            Some(c) if c.is_alphabetic() || c == '_' => {
                let name = self.ident();
                if name == "sqrt" && self.peek() == Some('(') {
                    self.pos += 1;
                    self.skip_ws();
                    let inner = self.ident();
                    self.expect(')')?;
                    if inner == "q" {
                        return Ok(Base::Value(ParamField::s()));
                    }
                    if !self.decls.is_square(&inner) {
                        return Err(ParseError::NotSquare(inner));
                    }
                    return Ok(Base::Value(ParamField::symbol(&Symbol::sqrt_of(&inner))));
                }
                if name == "q" {
                    return Ok(Base::Root(ParamField::s()));
                }
                check_name(&name)?;
                if self.decls.is_square(&name) {
                    return Ok(Base::Root(ParamField::symbol(&Symbol::sqrt_of(&name))));
                }
                Ok(Base::Value(ParamField::param(&name)))
            }
            Some(c) => {
                let (i, _) = self.chars[self.pos];
                Err(self.unexpected(i, c))
            }
        }
    }
}
