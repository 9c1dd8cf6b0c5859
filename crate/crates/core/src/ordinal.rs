//! Countable ordinals below ε₀ in Cantor normal form.
//!
//! An ordinal is a finite sum `ω^e₁·c₁ + … + ω^eₖ·cₖ` with strictly decreasing
//! exponents and positive coefficients. The representation is canonical, so
//! structural equality is ordinal equality and the derived lexicographic
//! order on the term list is the ordinal order.
//!
//! Text syntax: `w^2*3 + w + 4`, `w^w`, `w^(w+1)*2`. `ω` is accepted for `w`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Maximum nesting depth of exponents.
pub const MAX_DEPTH: usize = 8;
/// Maximum value of a single CNF coefficient.
pub const MAX_COEFFICIENT: u64 = 1 << 31;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Ordinal {
    // (exponent, coefficient), exponents strictly decreasing, coefficients >= 1.
    terms: Vec<(Ordinal, u64)>,
}

/// Zero / successor / limit trichotomy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrdinalKind {
    Zero,
    Successor(Ordinal),
    Limit,
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from(1u64)
    }

    pub fn omega() -> Self {
        Ordinal {
            terms: vec![(Self::one(), 1)],
        }
    }

    /// `ω^exp`.
    pub fn omega_pow(exp: Ordinal) -> Result<Self> {
        Self::omega_pow_mul(exp, 1)
    }

    /// `ω^exp · coeff`.
    pub fn omega_pow_mul(exp: Ordinal, coeff: u64) -> Result<Self> {
        if coeff == 0 {
            return Ok(Self::zero());
        }
        Self::from_terms(vec![(exp, coeff)])
    }

    /// Builds an ordinal from CNF terms, validating canonical form and caps.
    pub fn from_terms(terms: Vec<(Ordinal, u64)>) -> Result<Self> {
        for w in terms.windows(2) {
            if w[0].0 <= w[1].0 {
                return Err(Error::Parse {
                    pos: 0,
                    msg: "exponents must be strictly decreasing".into(),
                });
            }
        }
        for (_, c) in &terms {
            if *c == 0 {
                return Err(Error::Parse {
                    pos: 0,
                    msg: "coefficients must be positive".into(),
                });
            }
            if *c > MAX_COEFFICIENT {
                return Err(Error::CoefficientCap {
                    value: *c,
                    cap: MAX_COEFFICIENT,
                });
            }
        }
        let o = Ordinal { terms };
        if o.depth() > MAX_DEPTH {
            return Err(Error::DepthCap { cap: MAX_DEPTH });
        }
        Ok(o)
    }

    pub fn terms(&self) -> &[(Ordinal, u64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.terms.iter().all(|(e, _)| e.is_zero())
    }

    /// The natural number this ordinal equals, if finite.
    pub fn as_u64(&self) -> Option<u64> {
        match self.terms.as_slice() {
            [] => Some(0),
            [(e, c)] if e.is_zero() => Some(*c),
            _ => None,
        }
    }

    /// Nesting depth: 0 for zero, 1 for nonzero naturals, 1 + max exponent depth otherwise.
    pub fn depth(&self) -> usize {
        self.terms
            .iter()
            .map(|(e, _)| 1 + e.depth())
            .max()
            .unwrap_or(0)
    }

    pub fn compare(&self, other: &Ordinal) -> Ordering {
        self.cmp(other)
    }

    /// Ordinal addition; low terms of `self` are absorbed by the leading term of `other`.
    pub fn checked_add(&self, other: &Ordinal) -> Result<Ordinal> {
        let Some((lead_exp, lead_coeff)) = other.terms.first() else {
            return Ok(self.clone());
        };
        let mut terms: Vec<(Ordinal, u64)> = self
            .terms
            .iter()
            .take_while(|(e, _)| e >= lead_exp)
            .cloned()
            .collect();
        match terms.last_mut() {
            Some((e, c)) if e == lead_exp => {
                let sum = *c + *lead_coeff;
                if sum > MAX_COEFFICIENT {
                    return Err(Error::CoefficientCap {
                        value: sum,
                        cap: MAX_COEFFICIENT,
                    });
                }
                *c = sum;
            }
            _ => terms.push((lead_exp.clone(), *lead_coeff)),
        }
        terms.extend(other.terms[1..].iter().cloned());
        Ok(Ordinal { terms })
    }

    pub fn succ(&self) -> Result<Ordinal> {
        self.checked_add(&Ordinal::one())
    }

    pub fn classify(&self) -> OrdinalKind {
        match self.terms.last() {
            None => OrdinalKind::Zero,
            Some((e, c)) if e.is_zero() => {
                let mut pred = self.clone();
                if *c == 1 {
                    pred.terms.pop();
                } else {
                    pred.terms.last_mut().unwrap().1 -= 1;
                }
                OrdinalKind::Successor(pred)
            }
            Some(_) => OrdinalKind::Limit,
        }
    }

    pub fn is_limit(&self) -> bool {
        matches!(self.classify(), OrdinalKind::Limit)
    }

    pub fn is_successor(&self) -> bool {
        matches!(self.classify(), OrdinalKind::Successor(_))
    }

    /// Exponent of the final CNF term.
    pub fn last_exponent(&self) -> Result<&Ordinal> {
        self.terms
            .last()
            .map(|(e, _)| e)
            .ok_or(Error::ZeroHasNoTerms)
    }

    /// Coefficient of `ω^exp` (0 when absent).
    pub fn coefficient(&self, exp: &Ordinal) -> u64 {
        self.terms
            .iter()
            .find(|(e, _)| e == exp)
            .map(|(_, c)| *c)
            .unwrap_or(0)
    }

    /// Largest multiple of `ω^exp` that is `<= self`: the terms with exponent `>= exp`.
    pub fn floor_to(&self, exp: &Ordinal) -> Ordinal {
        Ordinal {
            terms: self
                .terms
                .iter()
                .take_while(|(e, _)| e >= exp)
                .cloned()
                .collect(),
        }
    }
}

impl From<u64> for Ordinal {
    fn from(n: u64) -> Self {
        if n == 0 {
            Ordinal::zero()
        } else {
            Ordinal {
                terms: vec![(Ordinal::zero(), n)],
            }
        }
    }
}

impl std::ops::Add for &Ordinal {
    type Output = Ordinal;

    /// Panics when the sum exceeds the coefficient cap; use `checked_add` otherwise.
    fn add(self, rhs: &Ordinal) -> Ordinal {
        self.checked_add(rhs).expect("ordinal coefficient cap exceeded")
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if e.is_zero() {
                write!(f, "{c}")?;
                continue;
            }
            write!(f, "w")?;
            match e.as_u64() {
                Some(1) => {}
                Some(n) => write!(f, "^{n}")?,
                None if *e == Ordinal::omega() => write!(f, "^w")?,
                None => write!(f, "^({e})")?,
            }
            if *c != 1 {
                write!(f, "*{c}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ordinal({self})")
    }
}

impl FromStr for Ordinal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser::new(s);
        let o = p.ordinal()?;
        p.skip_ws();
        if p.pos < p.src.len() {
            return Err(p.err("unexpected trailing input"));
        }
        Ok(o)
    }
}

impl Serialize for Ordinal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Ordinal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Recursive-descent parser over the ordinal text syntax. Shared with the
/// element literal parser, which embeds ordinals inside `e(...)`.
pub(crate) struct Parser<'a> {
    pub(crate) src: &'a [u8],
    pub(crate) pos: usize,
    text: &'a str,
}

impl<'a> Parser<'a> {
    pub(crate) fn new(text: &'a str) -> Self {
        Parser {
            src: text.as_bytes(),
            pos: 0,
            text,
        }
    }

    pub(crate) fn err(&self, msg: &str) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    pub(crate) fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    pub(crate) fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.text[self.pos..].chars().next()
    }

    pub(crate) fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    pub(crate) fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected `{c}`")))
        }
    }

    pub(crate) fn natural(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a natural number"));
        }
        self.text[start..self.pos].parse().map_err(|_| Error::Parse {
            pos: start,
            msg: "number too large".into(),
        })
    }

    fn eat_omega(&mut self) -> bool {
        self.eat('w') || self.eat('ω')
    }

    pub(crate) fn ordinal(&mut self) -> Result<Ordinal> {
        let mut acc = self.ordinal_term()?;
        while self.eat('+') {
            let t = self.ordinal_term()?;
            acc = acc.checked_add(&t)?;
        }
        Ok(acc)
    }

    fn ordinal_term(&mut self) -> Result<Ordinal> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let n = self.natural()?;
                check_coeff(n)?;
                Ok(Ordinal::from(n))
            }
            Some('(') => {
                self.expect('(')?;
                let o = self.ordinal()?;
                self.expect(')')?;
                Ok(o)
            }
            _ => {
                if !self.eat_omega() {
                    return Err(self.err("expected `w` or a natural number"));
                }
                let exp = if self.eat('^') {
                    match self.peek() {
                        Some('(') => {
                            self.expect('(')?;
                            let e = self.ordinal()?;
                            self.expect(')')?;
                            e
                        }
                        Some(c) if c.is_ascii_digit() => {
                            let n = self.natural()?;
                            check_coeff(n)?;
                            Ordinal::from(n)
                        }
                        _ if self.eat_omega() => Ordinal::omega(),
                        _ => return Err(self.err("expected an exponent")),
                    }
                } else {
                    Ordinal::one()
                };
                let coeff = if self.eat('*') { self.natural()? } else { 1 };
                check_coeff(coeff)?;
                Ordinal::omega_pow_mul(exp, coeff)
            }
        }
    }
}

fn check_coeff(n: u64) -> Result<()> {
    if n > MAX_COEFFICIENT {
        Err(Error::CoefficientCap {
            value: n,
            cap: MAX_COEFFICIENT,
        })
    } else {
        Ok(())
    }
}
