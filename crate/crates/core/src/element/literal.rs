//! Element literals: `2*e(3) - e(w) + tail(ladder=main, r=1/2, start=2)`.
//!
//! Atoms are `e(<ordinal>)`, `tail(ladder=ID, r=P/Q, start=N[, label=L])`,
//! `0`, or a parenthesized literal. Each atom takes an optional `N*` factor.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{Ambient, Element};
use crate::error::{Error, Result};
use crate::ordinal::Parser;

impl Element {
    pub fn parse(ambient: &Arc<Ambient>, text: &str) -> Result<Element> {
        let mut p = Parser::new(text);
        let e = expr(&mut p, ambient)?;
        p.skip_ws();
        if p.pos < p.src.len() {
            return Err(p.err("unexpected trailing input"));
        }
        Ok(e)
    }
}

fn expr(p: &mut Parser, amb: &Arc<Ambient>) -> Result<Element> {
    let mut acc = if p.eat('-') {
        -&term(p, amb)?
    } else {
        term(p, amb)?
    };
    loop {
        if p.eat('+') {
            acc = acc.checked_add(&term(p, amb)?)?;
        } else if p.eat('-') {
            acc = acc.checked_sub(&term(p, amb)?)?;
        } else {
            return Ok(acc);
        }
    }
}

fn term(p: &mut Parser, amb: &Arc<Ambient>) -> Result<Element> {
    if p.peek().is_some_and(|c| c.is_ascii_digit()) {
        let at = p.pos;
        let n = big_natural(p)?;
        if p.eat('*') {
            return Ok(atom(p, amb)?.scale(&n));
        }
        if n.is_zero() {
            return Ok(Element::zero(amb));
        }
        p.pos = at;
        return Err(p.err("bare integers other than 0 are not elements; write N*e(x)"));
    }
    atom(p, amb)
}

fn atom(p: &mut Parser, amb: &Arc<Ambient>) -> Result<Element> {
    if p.eat('(') {
        let e = expr(p, amb)?;
        p.expect(')')?;
        return Ok(e);
    }
    let at = p.pos;
    let word = ident(p);
    match word.as_str() {
        "e" => {
            p.expect('(')?;
            let x = p.ordinal()?;
            p.expect(')')?;
            Element::basis(amb, &x).map_err(|e| locate(e, at))
        }
        "tail" => tail(p, amb, at),
        _ => {
            p.pos = at;
            Err(p.err("expected `e(...)`, `tail(...)`, `0` or `(`"))
        }
    }
}

fn tail(p: &mut Parser, amb: &Arc<Ambient>, at: usize) -> Result<Element> {
    p.expect('(')?;
    let (mut ladder, mut r, mut start, mut label) = (None, None, None, None);
    loop {
        let key_at = p.pos;
        let key = ident(p);
        p.expect('=')?;
        match key.as_str() {
            "ladder" => ladder = Some(ident(p)),
            "label" => label = Some(ident(p)),
            "start" => start = Some(p.natural()?),
            "r" => r = Some(rational(p)?),
            _ => {
                p.pos = key_at;
                return Err(p.err("unknown tail field"));
            }
        }
        if !p.eat(',') {
            break;
        }
    }
    p.expect(')')?;
    let missing = |f: &str| Error::Parse {
        pos: at,
        msg: format!("tail is missing `{f}`"),
    };
    let ladder = ladder.ok_or_else(|| missing("ladder"))?;
    let r = r.ok_or_else(|| missing("r"))?;
    let start = start.ok_or_else(|| missing("start"))?;
    Element::tail_term(amb, &ladder, label.as_deref(), r, start).map_err(|e| locate(e, at))
}

fn locate(e: Error, pos: usize) -> Error {
    match e {
        Error::Parse { .. } => e,
        other => Error::Parse {
            pos,
            msg: other.to_string(),
        },
    }
}

fn ident(p: &mut Parser) -> String {
    p.skip_ws();
    let start = p.pos;
    while p.pos < p.src.len() && (p.src[p.pos].is_ascii_alphanumeric() || matches!(p.src[p.pos], b'_' | b'.')) {
        p.pos += 1;
    }
    String::from_utf8_lossy(&p.src[start..p.pos]).into_owned()
}

fn big_natural(p: &mut Parser) -> Result<BigInt> {
    p.skip_ws();
    let start = p.pos;
    while p.pos < p.src.len() && p.src[p.pos].is_ascii_digit() {
        p.pos += 1;
    }
    if start == p.pos {
        return Err(p.err("expected a natural number"));
    }
    Ok(std::str::from_utf8(&p.src[start..p.pos])
        .expect("ascii digits")
        .parse()
        .expect("digits parse"))
}

fn rational(p: &mut Parser) -> Result<BigRational> {
    let neg = p.eat('-');
    let n = big_natural(p)?;
    let d = if p.eat('/') { big_natural(p)? } else { BigInt::one() };
    if d.is_zero() {
        return Err(p.err("zero denominator"));
    }
    let r = BigRational::new(n, d);
    Ok(if neg { -r } else { r })
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (p, v) in &self.prefix {
            let sign = if v.is_negative() { "-" } else { "+" };
            match (first, sign) {
                (true, "-") => write!(f, "-")?,
                (true, _) => {}
                (false, s) => write!(f, " {s} ")?,
            }
            let a = v.abs();
            if a.is_one() {
                write!(f, "e({p})")?;
            } else {
                write!(f, "{a}*e({p})")?;
            }
            first = false;
        }
        for (li, t) in &self.tails {
            let l = &self.ambient.ladders[*li];
            for (spec, r) in l.labels.iter().zip(&t.coeffs) {
                if r.is_zero() {
                    continue;
                }
                if !first {
                    write!(f, " + ")?;
                }
                write!(f, "tail(ladder={}, r={r}, start={}", l.id, t.start)?;
                if l.labels.len() > 1 {
                    write!(f, ", label={}", spec.label)?;
                }
                write!(f, ")")?;
                first = false;
            }
        }
        Ok(())
    }
}
