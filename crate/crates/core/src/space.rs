//! Compact scattered ordinal intervals `[0, top]` with designated infinite primes.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ordinal::Ordinal;

/// The interval `[0, top]` under the order topology. Every point not listed in
/// `infinite_primes` is a finite prime.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SpaceSpec", into = "SpaceSpec")]
pub struct ScatteredSpace {
    top: Ordinal,
    infinite_primes: BTreeSet<Ordinal>,
}

#[derive(Serialize, Deserialize)]
struct SpaceSpec {
    top: Ordinal,
    #[serde(default)]
    infinite_primes: Vec<Ordinal>,
}

impl TryFrom<SpaceSpec> for ScatteredSpace {
    type Error = Error;
    fn try_from(s: SpaceSpec) -> Result<Self> {
        ScatteredSpace::new(s.top, s.infinite_primes)
    }
}

impl From<ScatteredSpace> for SpaceSpec {
    fn from(s: ScatteredSpace) -> Self {
        SpaceSpec {
            top: s.top,
            infinite_primes: s.infinite_primes.into_iter().collect(),
        }
    }
}

/// Half-open interval `(low, high]`; clopen in any ordinal interval.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ClopenBlock {
    pub low: Ordinal,
    pub high: Ordinal,
}

impl ClopenBlock {
    pub fn new(low: Ordinal, high: Ordinal) -> Result<Self> {
        if low >= high {
            return Err(Error::InvalidBlock { low, high });
        }
        Ok(ClopenBlock { low, high })
    }

    pub fn contains(&self, p: &Ordinal) -> bool {
        &self.low < p && p <= &self.high
    }

    pub fn overlaps(&self, other: &ClopenBlock) -> bool {
        self.low < other.high && other.low < self.high
    }
}

impl std::fmt::Display for ClopenBlock {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}]", self.low, self.high)
    }
}

impl ScatteredSpace {
    /// Infinite primes must be limit ordinals `<= top`: isolated points are always finite primes.
    pub fn new(top: Ordinal, infinite_primes: impl IntoIterator<Item = Ordinal>) -> Result<Self> {
        let infinite_primes: BTreeSet<Ordinal> = infinite_primes.into_iter().collect();
        for p in &infinite_primes {
            if !p.is_limit() {
                return Err(Error::InvalidSpace(format!(
                    "infinite prime {p} is not a limit ordinal"
                )));
            }
            if p > &top {
                return Err(Error::InvalidSpace(format!("infinite prime {p} exceeds top {top}")));
            }
        }
        Ok(ScatteredSpace { top, infinite_primes })
    }

    pub fn top(&self) -> &Ordinal {
        &self.top
    }

    pub fn infinite_primes(&self) -> &BTreeSet<Ordinal> {
        &self.infinite_primes
    }

    pub fn contains(&self, p: &Ordinal) -> bool {
        p <= &self.top
    }

    pub fn is_infinite_prime(&self, p: &Ordinal) -> bool {
        self.infinite_primes.contains(p)
    }

    pub fn is_finite_prime(&self, p: &Ordinal) -> bool {
        self.contains(p) && !self.is_infinite_prime(p)
    }

    fn check(&self, p: &Ordinal) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(Error::PointOutOfSpace {
                point: p.clone(),
                top: self.top.clone(),
            })
        }
    }

    /// Membership of `point` in the `gamma`-th derived set of `[0, top]`.
    pub fn in_derived_set(&self, point: &Ordinal, gamma: &Ordinal) -> Result<bool> {
        self.check(point)?;
        if gamma.is_zero() {
            return Ok(true);
        }
        Ok(!point.is_zero() && point.last_exponent()? >= gamma)
    }

    pub fn cb_rank(&self, point: &Ordinal) -> Result<Ordinal> {
        self.check(point)?;
        Ok(cb_rank_of(point))
    }

    /// Least `α` with `D^α = ∅`. The highest rank is carried by `ω^e` for
    /// the leading exponent `e` of `top`, which need not be `top` itself.
    pub fn cb_rank_space(&self) -> Ordinal {
        self.top
            .terms()
            .first()
            .map_or_else(Ordinal::zero, |(e, _)| e.clone())
            .succ()
            .expect("exponents stay far below the coefficient cap")
    }

    /// Points of rank exactly `gamma` in `block`, in increasing order.
    ///
    /// Every such point has the shape `M + ω^γ·c`. The slice is finite exactly
    /// when the block does not reach below `M = floor_{γ+1}(high)`.
    pub fn rank_slice(&self, gamma: &Ordinal, block: &ClopenBlock) -> Result<Vec<Ordinal>> {
        self.check(&block.high)?;
        let above = gamma.succ()?;
        let base = block.high.floor_to(&above);
        if base > block.low {
            return Err(Error::InfiniteSlice {
                rank: gamma.clone(),
                low: block.low.clone(),
                high: block.high.clone(),
            });
        }
        let c_low = block.low.coefficient(gamma);
        let c_high = block.high.coefficient(gamma);
        ((c_low + 1)..=c_high)
            .map(|c| base.checked_add(&Ordinal::omega_pow_mul(gamma.clone(), c)?))
            .collect()
    }

    /// A block `(low, point]` in which `point` is the only point of its rank.
    pub fn isolating_block(&self, point: &Ordinal) -> Result<ClopenBlock> {
        self.check(point)?;
        let gamma = point.last_exponent()?.clone();
        let c = point.coefficient(&gamma);
        let base = point.floor_to(&gamma.succ()?);
        let low = base.checked_add(&Ordinal::omega_pow_mul(gamma, c - 1)?)?;
        ClopenBlock::new(low, point.clone())
    }

    /// Smallest finite prime of rank `rank` inside `block`.
    pub fn smallest_finite_prime_of_rank(
        &self,
        rank: &Ordinal,
        block: &ClopenBlock,
    ) -> Result<Ordinal> {
        let base = block.low.floor_to(&rank.succ()?);
        let mut c = block.low.coefficient(rank) + 1;
        loop {
            let p = base.checked_add(&Ordinal::omega_pow_mul(rank.clone(), c)?)?;
            if p > block.high || !self.contains(&p) {
                return Err(Error::NoPaddingPoint {
                    rank: rank.clone(),
                    low: block.low.clone(),
                    high: block.high.clone(),
                });
            }
            if self.is_finite_prime(&p) {
                return Ok(p);
            }
            c += 1;
        }
    }

    /// The whole space minus the point 0, as a block.
    pub fn full_block(&self) -> Result<ClopenBlock> {
        ClopenBlock::new(Ordinal::zero(), self.top.clone())
    }
}

/// CB rank of a point in any ordinal interval containing it.
pub fn cb_rank_of(point: &Ordinal) -> Ordinal {
    point.last_exponent().cloned().unwrap_or_default()
}
