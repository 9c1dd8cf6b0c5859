//! Probe windows: finite coordinate systems that separate a family of elements.
//!
//! Coordinates are the values at the window's points followed by one column
//! per (ladder, label) holding the tail coefficient times a common scale.
//! When every element of a family is covered by the window (its explicit
//! points are in the window and its tail coefficients become integers after
//! scaling), the coordinate map is injective on the subgroup they generate.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::element::Element;
use crate::error::{Error, Result};
use crate::hnf::Matrix;
use crate::ordinal::Ordinal;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TailColumn {
    pub ladder: String,
    pub label: String,
    #[serde(with = "bigint_str")]
    pub scale: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ProbeWindow {
    pub points: Vec<Ordinal>,
    pub tail_columns: Vec<TailColumn>,
}

impl ProbeWindow {
    /// The smallest window covering every element given.
    pub fn covering<'a>(elements: impl IntoIterator<Item = &'a Element>) -> ProbeWindow {
        let mut points = BTreeSet::new();
        let mut cols: Vec<(usize, usize, BigInt)> = Vec::new();
        let mut ambient = None;
        for f in elements {
            points.extend(f.explicit_points());
            for (li, t) in f.tails() {
                for (lab, r) in t.coeffs.iter().enumerate() {
                    let d = r.denom().clone();
                    match cols.iter_mut().find(|(a, b, _)| *a == *li && *b == lab) {
                        Some((_, _, s)) => *s = s.lcm(&d),
                        None => cols.push((*li, lab, d)),
                    }
                }
            }
            ambient.get_or_insert_with(|| f.ambient().clone());
        }
        cols.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        let tail_columns = match ambient {
            None => Vec::new(),
            Some(amb) => cols
                .into_iter()
                .map(|(li, lab, scale)| TailColumn {
                    ladder: amb.ladders[li].id.clone(),
                    label: amb.ladders[li].labels[lab].label.clone(),
                    scale,
                })
                .collect(),
        };
        ProbeWindow {
            points: points.into_iter().collect(),
            tail_columns,
        }
    }

    /// Window covering both `self` and `other`.
    pub fn union(&self, other: &ProbeWindow) -> ProbeWindow {
        let points: BTreeSet<Ordinal> = self.points.iter().chain(&other.points).cloned().collect();
        let mut tail_columns = self.tail_columns.clone();
        for c in &other.tail_columns {
            match tail_columns
                .iter_mut()
                .find(|d| d.ladder == c.ladder && d.label == c.label)
            {
                Some(d) => d.scale = d.scale.lcm(&c.scale),
                None => tail_columns.push(c.clone()),
            }
        }
        tail_columns.sort_by(|a, b| (&a.ladder, &a.label).cmp(&(&b.ladder, &b.label)));
        ProbeWindow {
            points: points.into_iter().collect(),
            tail_columns,
        }
    }

    pub fn width(&self) -> usize {
        self.points.len() + self.tail_columns.len()
    }

    /// Whether `f` is determined by its coordinates in this window.
    pub fn covers(&self, f: &Element) -> bool {
        self.uncovered_reason(f).is_none()
    }

    fn uncovered_reason(&self, f: &Element) -> Option<String> {
        if let Some(p) = f
            .explicit_points()
            .into_iter()
            .find(|p| self.points.binary_search(p).is_err())
        {
            return Some(format!("point {p} of {f} is outside the window"));
        }
        let amb = f.ambient();
        for (li, t) in f.tails() {
            let l = &amb.ladders[*li];
            for (spec, r) in l.labels.iter().zip(&t.coeffs) {
                if r.is_zero() {
                    continue;
                }
                let col = self
                    .tail_columns
                    .iter()
                    .find(|c| c.ladder == l.id && c.label == spec.label);
                match col {
                    Some(c) if (r * BigRational::from_integer(c.scale.clone())).is_integer() => {}
                    _ => return Some(format!("tail `{}`/`{}` of {f} has no column", l.id, spec.label)),
                }
            }
        }
        None
    }

    pub fn check_covers<'a>(&self, elements: impl IntoIterator<Item = &'a Element>) -> Result<()> {
        for f in elements {
            if let Some(why) = self.uncovered_reason(f) {
                return Err(Error::AmbiguousProbe(why));
            }
        }
        Ok(())
    }

    /// Coordinate vector of `f`. Meaningful for any `f`; injective only on covered families.
    pub fn coords(&self, f: &Element) -> Result<Vec<BigInt>> {
        let amb = f.ambient();
        let mut out = Vec::with_capacity(self.width());
        for p in &self.points {
            out.push(f.eval(p)?);
        }
        for c in &self.tail_columns {
            let li = amb.ladder_index(&c.ladder)?;
            let lab = amb.ladders[li].label_index(&c.label)?;
            let r = &f.residue(li)[lab] * BigRational::from_integer(c.scale.clone());
            if !r.is_integer() {
                return Err(Error::AmbiguousProbe(format!(
                    "tail coefficient of {f} is not a multiple of 1/{}",
                    c.scale
                )));
            }
            out.push(r.to_integer());
        }
        Ok(out)
    }

    pub fn matrix<'a>(&self, elements: impl IntoIterator<Item = &'a Element>) -> Result<Matrix> {
        elements.into_iter().map(|f| self.coords(f)).collect()
    }
}

/// Combination `Σ c_i·f_i`.
pub fn combine(coefficients: &[BigInt], elements: &[Element], zero: &Element) -> Element {
    coefficients
        .iter()
        .zip(elements)
        .filter(|(c, _)| !c.is_zero())
        .fold(zero.clone(), |acc, (c, f)| {
            if c.is_one() {
                &acc + f
            } else {
                &acc + &f.scale(c)
            }
        })
}

/// Serde adapter storing big integers as decimal strings.
pub mod bigint_str {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::{limit_q_a, limit_q_ambient, limit_q_e};

    #[test]
    fn covering_window_is_injective_on_limit_q() {
        let amb = limit_q_ambient();
        let gens: Vec<Element> = (0..5).map(|n| limit_q_a(&amb, n)).collect();
        let w = ProbeWindow::covering(&gens);
        assert_eq!(w.points.len(), 4);
        assert_eq!(w.tail_columns[0].scale, BigInt::from(24));
        let m = w.matrix(&gens).unwrap();
        assert_eq!(crate::hnf::rank(&m, w.width()), 5);
        assert!(w.covers(&limit_q_e(&amb, 2)));
        assert!(!w.covers(&limit_q_e(&amb, 9)));
        assert!(w.check_covers([&limit_q_a(&amb, 6)]).is_err());
    }
}
