//! Text syntax for equations.
//!
//! Grammar (whitespace insignificant):
//!
//! ```text
//! equation := expr "=" expr
//! expr     := ["-"] term { ("+"|"-") term }
//! term     := integer [ "*" powprod ] | powprod
//! powprod  := power { "*" power }
//! power    := base "^" ident
//! base     := integer | "(" "-" integer ")"
//! integer  := digit {digit}
//! ident    := letter {letter|digit}
//! ```
//!
//! A leading "-" binds to the coefficient; negative bases must be
//! parenthesized. "^" is always followed by a variable, never a numeric
//! exponent. The right side is negated and folded into the left, so
//! `2^x = 3^y` and `2^x - 3^y = 0` produce the same equation.
//!
//! A side consisting of the single literal `0` stands for the empty sum
//! (that is how the canonical `... = 0` form parses); everywhere else an
//! explicit zero coefficient is an error.

use crate::equation::{Equation, Factor, FamilyPattern, Term};
use serde::Serialize;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ParseErrorKind {
    Syntax,
    BadBase,
    ZeroCoefficient,
    DuplicateVariable,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ParseErrorKind::Syntax => "syntax",
            ParseErrorKind::BadBase => "bad-base",
            ParseErrorKind::ZeroCoefficient => "zero-coefficient",
            ParseErrorKind::DuplicateVariable => "duplicate-variable",
        };
        f.write_str(s)
    }
}

/// Parse failure at a character offset of the input.
#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[error("{kind} error at character {position}")]
pub struct ParseError {
    pub position: usize,
    pub kind: ParseErrorKind,
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn new(text: &str) -> Self {
        Parser {
            chars: text.chars().collect(),
            pos: 0,
        }
    }

    fn err<T>(&self, position: usize, kind: ParseErrorKind) -> Result<T, ParseError> {
        Err(ParseError { position, kind })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(self.pos, ParseErrorKind::Syntax)
        }
    }

    /// Unsigned digit run. Magnitudes above 2^63 are out of the model's
    /// integer range and rejected as syntax.
    fn integer(&mut self) -> Result<(u64, usize), ParseError> {
        let start = self.pos;
        if !matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            return self.err(self.pos, ParseErrorKind::Syntax);
        }
        let mut value: u128 = 0;
        while let Some(c) = self.peek() {
            if let Some(d) = c.to_digit(10) {
                value = value * 10 + d as u128;
                if value > 1 << 63 {
                    return self.err(start, ParseErrorKind::Syntax);
                }
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok((value as u64, start))
    }

    fn signed_to_i64(&self, mag: u64, negative: bool, at: usize) -> Result<i64, ParseError> {
        if negative {
            if mag > 1 << 63 {
                return self.err(at, ParseErrorKind::Syntax);
            }
            Ok((mag as i128).checked_neg().unwrap() as i64)
        } else {
            i64::try_from(mag).or(self.err(at, ParseErrorKind::Syntax))
        }
    }

    fn ident(&mut self) -> Result<(String, usize), ParseError> {
        self.skip_ws();
        let start = self.pos;
        if !matches!(self.peek(), Some(c) if c.is_ascii_alphabetic()) {
            return self.err(self.pos, ParseErrorKind::Syntax);
        }
        let mut name = String::new();
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() {
                name.push(c);
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok((name, start))
    }

    /// base "^" ident, starting at a digit or "(".
    fn power(&mut self) -> Result<(Factor, usize), ParseError> {
        self.skip_ws();
        let start = self.pos;
        let base = if self.peek() == Some('(') {
            self.bump();
            self.skip_ws();
            self.expect('-')?;
            self.skip_ws();
            let (mag, at) = self.integer()?;
            self.skip_ws();
            self.expect(')')?;
            self.signed_to_i64(mag, true, at)?
        } else {
            let (mag, at) = self.integer()?;
            self.signed_to_i64(mag, false, at)?
        };
        if base == 0 || base == 1 {
            return self.err(start, ParseErrorKind::BadBase);
        }
        self.skip_ws();
        self.expect('^')?;
        let (variable, var_at) = self.ident()?;
        Ok((Factor { base, variable }, var_at))
    }

    fn powprod(&mut self) -> Result<Vec<(Factor, usize)>, ParseError> {
        let mut factors = vec![self.power()?];
        loop {
            self.skip_ws();
            if self.peek() == Some('*') {
                self.bump();
                factors.push(self.power()?);
            } else {
                return Ok(factors);
            }
        }
    }

    /// One term; `sign` is -1 under a preceding minus.
    fn term(&mut self, sign: i64) -> Result<(Term, Vec<usize>), ParseError> {
        self.skip_ws();
        match self.peek() {
            Some('(') => {
                let factors = self.powprod()?;
                Ok(split_positions(sign, factors))
            }
            Some(c) if c.is_ascii_digit() => {
                let (mag, at) = self.integer()?;
                self.skip_ws();
                match self.peek() {
                    Some('^') => {
                        // the integer was a base after all
                        let base = self.signed_to_i64(mag, false, at)?;
                        if base == 0 || base == 1 {
                            return self.err(at, ParseErrorKind::BadBase);
                        }
                        self.bump();
                        let (variable, var_at) = self.ident()?;
                        let mut factors = vec![(Factor { base, variable }, var_at)];
                        loop {
                            self.skip_ws();
                            if self.peek() == Some('*') {
                                self.bump();
                                factors.push(self.power()?);
                            } else {
                                break;
                            }
                        }
                        Ok(split_positions(sign, factors))
                    }
                    Some('*') => {
                        if mag == 0 {
                            return self.err(at, ParseErrorKind::ZeroCoefficient);
                        }
                        let coefficient = self.signed_to_i64(mag, sign < 0, at)?;
                        self.bump();
                        let factors = self.powprod()?;
                        let (mut term, positions) = split_positions(1, factors);
                        term.coefficient = coefficient;
                        Ok((term, positions))
                    }
                    _ => {
                        if mag == 0 {
                            // a bare zero that fails to end the sum is a
                            // syntax problem, not a zero term
                            return match self.peek() {
                                None | Some('+') | Some('-') | Some('=') => {
                                    self.err(at, ParseErrorKind::ZeroCoefficient)
                                }
                                Some(_) => self.err(self.pos, ParseErrorKind::Syntax),
                            };
                        }
                        let coefficient = self.signed_to_i64(mag, sign < 0, at)?;
                        Ok((Term::constant(coefficient), Vec::new()))
                    }
                }
            }
            _ => self.err(self.pos, ParseErrorKind::Syntax),
        }
    }

    /// One side of the equation. `negate` flips every coefficient (used for
    /// the right side). A side that is exactly the literal `0` yields no
    /// terms.
    fn expr(&mut self, negate: bool) -> Result<Vec<(Term, Vec<usize>)>, ParseError> {
        self.skip_ws();
        let mut sign: i64 = if negate { -1 } else { 1 };
        let explicit_minus = self.peek() == Some('-');
        if explicit_minus {
            self.bump();
            sign = -sign;
        } else if self.peek() == Some('0') {
            // possibly the empty-sum literal
            let save = self.pos;
            let (mag, _) = self.integer()?;
            self.skip_ws();
            let at_end = self.peek().is_none() || self.peek() == Some('=');
            if mag == 0 && at_end {
                return Ok(Vec::new());
            }
            self.pos = save;
        }
        let mut terms = vec![self.term(sign)?];
        loop {
            self.skip_ws();
            match self.peek() {
                Some('+') => {
                    self.bump();
                    terms.push(self.term(if negate { -1 } else { 1 })?);
                }
                Some('-') => {
                    self.bump();
                    terms.push(self.term(if negate { 1 } else { -1 })?);
                }
                _ => return Ok(terms),
            }
        }
    }
}

fn split_positions(sign: i64, factors: Vec<(Factor, usize)>) -> (Term, Vec<usize>) {
    let mut fs = Vec::with_capacity(factors.len());
    let mut positions = Vec::with_capacity(factors.len());
    for (f, p) in factors {
        fs.push(f);
        positions.push(p);
    }
    (
        Term {
            coefficient: sign,
            factors: fs,
        },
        positions,
    )
}

/// Parses one equation. See the module docs for the grammar.
pub fn parse_equation(text: &str) -> Result<Equation, ParseError> {
    let mut p = Parser::new(text);
    let left = p.expr(false)?;
    p.skip_ws();
    p.expect('=')?;
    let right = p.expr(true)?;
    p.skip_ws();
    if p.peek().is_some() {
        return p.err(p.pos, ParseErrorKind::Syntax);
    }

    let mut terms = Vec::new();
    let mut positions = Vec::new();
    for (t, ps) in left.into_iter().chain(right) {
        terms.push(t);
        positions.push(ps);
    }
    if terms.is_empty() {
        // both sides were the zero literal
        return Err(ParseError {
            position: 0,
            kind: ParseErrorKind::ZeroCoefficient,
        });
    }
    let mut seen = std::collections::HashSet::new();
    for (t, ps) in terms.iter().zip(&positions) {
        for (f, &at) in t.factors.iter().zip(ps) {
            if !seen.insert(f.variable.clone()) {
                return Err(ParseError {
                    position: at,
                    kind: ParseErrorKind::DuplicateVariable,
                });
            }
        }
    }
    Ok(Equation::new(terms).expect("parser enforces all model invariants"))
}

/// Canonical text form: every term on the left, `= 0` on the right,
/// coefficient magnitudes printed only when they carry information.
pub fn format_equation(eq: &Equation) -> String {
    let mut s = String::new();
    for (i, t) in eq.terms().iter().enumerate() {
        let neg = t.coefficient < 0;
        if i == 0 {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        let mag = t.coefficient.unsigned_abs();
        let mut parts = Vec::new();
        if t.factors.is_empty() || mag != 1 {
            parts.push(mag.to_string());
        }
        for f in &t.factors {
            if f.base < 0 {
                parts.push(format!("({})^{}", f.base, f.variable));
            } else {
                parts.push(format!("{}^{}", f.base, f.variable));
            }
        }
        s.push_str(&parts.join("*"));
    }
    s.push_str(" = 0");
    s
}

/// The display form of a family member: positive terms on the left,
/// negated terms on the right, e.g. `2^x + 4^z = 3^y + 5^w`.
pub fn family_display(pattern: FamilyPattern) -> String {
    let n = pattern.n;
    let signs = [1, pattern.delta.0, pattern.delta.1, pattern.delta.2];
    let names = ["x", "y", "z", "w"];
    let mut left = Vec::new();
    let mut right = Vec::new();
    for (i, (&d, name)) in signs.iter().zip(names).enumerate() {
        let part = format!("{}^{}", n + i as u64, name);
        if d == 1 {
            left.push(part);
        } else {
            right.push(part);
        }
    }
    format!("{} = {}", left.join(" + "), right.join(" + "))
}
