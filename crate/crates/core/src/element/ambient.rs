use serde::{Deserialize, Serialize};

use super::ladder::Ladder;
use crate::error::{Error, Result};
use crate::ordinal::Ordinal;
use crate::space::ScatteredSpace;

/// How many leading points of each ladder are checked against the others.
const LADDER_OVERLAP_PROBE: u64 = 256;

/// A space together with its ladders; shared by every element built over it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ambient {
    pub space: ScatteredSpace,
    pub ladders: Vec<Ladder>,
}

impl Ambient {
    pub fn new(space: ScatteredSpace, ladders: Vec<Ladder>) -> Result<Self> {
        for (i, l) in ladders.iter().enumerate() {
            let invalid = |msg: String| Error::InvalidLadder {
                id: l.id.clone(),
                msg,
            };
            if !space.is_infinite_prime(&l.target) {
                return Err(invalid(format!("target {} is not an infinite prime", l.target)));
            }
            for p in space.infinite_primes() {
                if l.index_of(p).is_some() {
                    return Err(invalid(format!("infinite prime {p} lies on the ladder")));
                }
            }
            for other in &ladders[..i] {
                if other.id == l.id {
                    return Err(invalid("duplicate ladder id".into()));
                }
                if other.target == l.target {
                    return Err(invalid(format!("target {} already has a ladder", l.target)));
                }
                for k in 0..LADDER_OVERLAP_PROBE {
                    if other.index_of(&l.point(k)).is_some() {
                        return Err(invalid(format!(
                            "shares point {} with ladder `{}`",
                            l.point(k),
                            other.id
                        )));
                    }
                }
            }
        }
        Ok(Ambient { space, ladders })
    }

    /// A space whose every infinite prime gets a default ladder named by position (`l0`, `l1`, …).
    pub fn with_default_ladders(space: ScatteredSpace) -> Result<Self> {
        let ladders = space
            .infinite_primes()
            .iter()
            .enumerate()
            .map(|(i, t)| Ladder::with_default_weights(format!("l{i}"), t.clone()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(space, ladders)
    }

    pub fn ladder_index(&self, id: &str) -> Result<usize> {
        self.ladders
            .iter()
            .position(|l| l.id == id)
            .ok_or_else(|| Error::UnknownLadder(id.to_string()))
    }

    pub fn ladder_for_target(&self, target: &Ordinal) -> Result<usize> {
        self.ladders
            .iter()
            .position(|l| &l.target == target)
            .ok_or_else(|| Error::NoLadder(target.clone()))
    }

    /// The ladder carrying `p` and its index along it.
    pub fn locate(&self, p: &Ordinal) -> Option<(usize, u64)> {
        self.ladders
            .iter()
            .enumerate()
            .find_map(|(i, l)| l.index_of(p).map(|k| (i, k)))
    }

    /// Validates that `p` is a finite prime of the space.
    pub fn check_finite_prime(&self, p: &Ordinal) -> Result<()> {
        if !self.space.contains(p) {
            return Err(Error::PointOutOfSpace {
                point: p.clone(),
                top: self.space.top().clone(),
            });
        }
        if self.space.is_infinite_prime(p) {
            return Err(Error::InfinitePrime(p.clone()));
        }
        Ok(())
    }
}
