//! Ladders: cofinal ℕ-indexed sequences of finite primes below an infinite prime.

use serde::{Deserialize, Serialize};

use super::weight::WeightFamily;
use crate::error::{Error, Result};
use crate::ordinal::Ordinal;

/// How ladder index `k` maps to a point of the space.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LadderShape {
    /// `base + ω^exp·(first + k)`, converging to `base + ω^(exp+1)`.
    Linear { base: Ordinal, exp: Ordinal, first: u64 },
    /// `base + ω^(exp_base + first + step·k)`, converging to `base + ω^(exp_base + ω)`.
    Powers {
        base: Ordinal,
        #[serde(default)]
        exp_base: Ordinal,
        first: u64,
        step: u64,
    },
}

impl LadderShape {
    /// The natural shape for a limit target `ρ + ω^e·c`.
    pub fn default_for(target: &Ordinal) -> Result<Self> {
        let invalid = |msg: &str| Error::InvalidLadder {
            id: target.to_string(),
            msg: msg.to_string(),
        };
        if !target.is_limit() {
            return Err(invalid("target is not a limit ordinal"));
        }
        let e = target.last_exponent()?.clone();
        let c = target.coefficient(&e);
        let base = target
            .floor_to(&e.succ()?)
            .checked_add(&Ordinal::omega_pow_mul(e.clone(), c - 1)?)?;
        match e.classify() {
            crate::ordinal::OrdinalKind::Successor(exp) => {
                let first = u64::from(!(base.is_zero() && exp.is_zero()));
                Ok(LadderShape::Linear { base, exp, first })
            }
            _ => {
                // Only exponents ending in a plain ω term have a default.
                let le = e.last_exponent()?;
                if *le != Ordinal::one() {
                    return Err(invalid("no default shape; give one explicitly"));
                }
                let m = e.coefficient(le);
                let exp_base = e
                    .floor_to(&Ordinal::from(2))
                    .checked_add(&Ordinal::omega_pow_mul(Ordinal::one(), m - 1)?)?;
                Ok(LadderShape::Powers {
                    base,
                    exp_base,
                    first: 1,
                    step: 1,
                })
            }
        }
    }

    pub fn point(&self, k: u64) -> Result<Ordinal> {
        match self {
            LadderShape::Linear { base, exp, first } => {
                base.checked_add(&Ordinal::omega_pow_mul(exp.clone(), first + k)?)
            }
            LadderShape::Powers {
                base,
                exp_base,
                first,
                step,
            } => {
                let e = exp_base.checked_add(&Ordinal::from(first + step * k))?;
                base.checked_add(&Ordinal::omega_pow(e)?)
            }
        }
    }

    pub fn target(&self) -> Result<Ordinal> {
        match self {
            LadderShape::Linear { base, exp, .. } => {
                base.checked_add(&Ordinal::omega_pow(exp.succ()?)?)
            }
            LadderShape::Powers { base, exp_base, .. } => {
                base.checked_add(&Ordinal::omega_pow(exp_base.checked_add(&Ordinal::omega())?)?)
            }
        }
    }

    /// Inverse of `point`.
    pub fn index_of(&self, p: &Ordinal) -> Option<u64> {
        let k = match self {
            LadderShape::Linear { base, exp, first } => {
                let m = p.coefficient(exp).checked_sub(base.coefficient(exp))?;
                m.checked_sub(*first)?
            }
            LadderShape::Powers {
                exp_base,
                first,
                step,
                ..
            } => {
                let (e, _) = p.terms().last()?;
                let n = e.coefficient(&Ordinal::zero()).checked_sub(exp_base.coefficient(&Ordinal::zero()))?;
                let n = n.checked_sub(*first)?;
                if *step == 0 || n % step != 0 {
                    return None;
                }
                n / step
            }
        };
        (self.point(k).ok()? == *p).then_some(k)
    }

    /// Whether the ladder has points of rank at least `gamma`.
    /// Point ranks along a `Powers` ladder are unbounded below the target's rank.
    pub fn reaches_rank(&self, gamma: &Ordinal) -> bool {
        match self {
            LadderShape::Linear { exp, .. } => exp >= gamma,
            LadderShape::Powers { .. } => self
                .target()
                .is_ok_and(|t| t.last_exponent().is_ok_and(|r| r > gamma)),
        }
    }
}

/// A residue label and its weight family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelSpec {
    pub label: String,
    pub weight: WeightFamily,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ladder {
    pub id: String,
    pub target: Ordinal,
    pub shape: LadderShape,
    /// Residue labels; weight families pairwise distinct.
    pub labels: Vec<LabelSpec>,
}

impl Ladder {
    pub fn new(id: impl Into<String>, target: Ordinal, shape: Option<LadderShape>, labels: Vec<LabelSpec>) -> Result<Self> {
        let id = id.into();
        let invalid = |msg: String| Error::InvalidLadder { id: id.clone(), msg };
        let shape = match shape {
            Some(s) => s,
            None => LadderShape::default_for(&target)?,
        };
        if shape.target()? != target {
            return Err(invalid(format!(
                "shape converges to {}, not {target}",
                shape.target()?
            )));
        }
        if labels.is_empty() {
            return Err(invalid("at least one residue label is required".into()));
        }
        for (i, a) in labels.iter().enumerate() {
            for b in &labels[..i] {
                if a.label == b.label || a.weight == b.weight {
                    return Err(invalid(format!(
                        "labels `{}` and `{}` must have distinct names and weights",
                        b.label, a.label
                    )));
                }
            }
        }
        Ok(Ladder {
            id,
            target,
            shape,
            labels,
        })
    }

    /// Single label `b` with factorial weights.
    pub fn with_default_weights(id: impl Into<String>, target: Ordinal) -> Result<Self> {
        Self::new(
            id,
            target,
            None,
            vec![LabelSpec {
                label: "b".into(),
                weight: WeightFamily::factorial(),
            }],
        )
    }

    pub fn point(&self, k: u64) -> Ordinal {
        self.shape
            .point(k)
            .expect("ladder points stay within the ordinal caps")
    }

    pub fn index_of(&self, p: &Ordinal) -> Option<u64> {
        self.shape.index_of(p)
    }

    pub fn families(&self) -> Vec<WeightFamily> {
        self.labels.iter().map(|l| l.weight).collect()
    }

    pub fn label_index(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l.label == label)
            .ok_or_else(|| Error::UnknownLabel {
                ladder: self.id.clone(),
                label: label.to_string(),
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    #[test]
    fn default_shapes() {
        let l = Ladder::with_default_weights("m", o("w")).unwrap();
        assert_eq!(l.point(0), o("0"));
        assert_eq!(l.point(7), o("7"));
        let l2 = Ladder::with_default_weights("m", o("w*2")).unwrap();
        assert_eq!(l2.point(0), o("w + 1"));
        let l3 = Ladder::with_default_weights("m", o("w^2 + w^2")).unwrap();
        assert_eq!(l3.point(2), o("w^2 + w*3"));
        let l4 = Ladder::with_default_weights("m", o("w^w")).unwrap();
        assert_eq!(l4.point(0), o("w"));
        assert_eq!(l4.point(3), o("w^4"));
        let l5 = Ladder::with_default_weights("m", o("w^(w*2)")).unwrap();
        assert_eq!(l5.point(1), o("w^(w + 2)"));
    }

    #[test]
    fn index_inverts_point() {
        for t in ["w", "w*3", "w^2", "w^3 + w^2*2", "w^w", "w^(w + 1)", "w^(w*2)"] {
            let l = Ladder::with_default_weights("m", o(t)).unwrap();
            for k in 0..30 {
                assert_eq!(l.index_of(&l.point(k)), Some(k), "{t} at {k}");
                assert!(l.point(k) < l.point(k + 1));
                assert!(l.point(k) < l.target);
            }
            assert_eq!(l.index_of(&l.target), None);
        }
    }

    #[test]
    fn mismatched_shape_rejected() {
        let s = LadderShape::Linear {
            base: o("0"),
            exp: o("0"),
            first: 0,
        };
        assert!(Ladder::new("m", o("w*2"), Some(s), vec![]).is_err());
    }

    #[test]
    fn ranks_reached() {
        let l = Ladder::with_default_weights("m", o("w^2")).unwrap();
        assert!(l.shape.reaches_rank(&o("1")));
        assert!(!l.shape.reaches_rank(&o("2")));
        let p = Ladder::with_default_weights("m", o("w^w")).unwrap();
        assert!(p.shape.reaches_rank(&o("17")));
    }
}
