//! Staircase bases on a single ladder: verification and construction.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::coords::combine;
use crate::element::Element;
use crate::error::{Error, Result};
use crate::group::GroupPresentation;
use crate::hnf;
use crate::presets::factorial;
use crate::space::ClopenBlock;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StaircaseBase {
    pub ladder: String,
    /// Label whose coefficient is used as the scalar residue.
    pub label: String,
    pub elements: Vec<Element>,
    pub divisors: Vec<BigInt>,
    pub residue_targets: Vec<BigRational>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StaircaseAxiom {
    Positive,
    ResidueGeneration,
    StrictlyIncreasing,
    Vanishing,
    Divisibility,
}

impl fmt::Display for StaircaseAxiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StaircaseAxiom::Positive => "positive members",
            StaircaseAxiom::ResidueGeneration => "residues generate",
            StaircaseAxiom::StrictlyIncreasing => "mu strictly increasing",
            StaircaseAxiom::Vanishing => "d_n*a_n - a_0 vanishes from mu(a_n)",
            StaircaseAxiom::Divisibility => "d_n divides n!",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub index: usize,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomOutcome {
    pub axiom: StaircaseAxiom,
    pub violation: Option<Violation>,
}

impl AxiomOutcome {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StaircaseReport {
    pub mu: Vec<Option<u64>>,
    pub outcomes: Vec<AxiomOutcome>,
}

impl StaircaseReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(AxiomOutcome::passed)
    }

    pub fn outcome(&self, axiom: StaircaseAxiom) -> &AxiomOutcome {
        self.outcomes
            .iter()
            .find(|o| o.axiom == axiom)
            .expect("every axiom is reported")
    }
}

pub(crate) fn rat_gcd(a: &BigRational, b: &BigRational) -> BigRational {
    BigRational::new(a.numer().gcd(b.numer()), a.denom().lcm(b.denom()))
}

pub(crate) fn rat_lcm(a: &BigRational, b: &BigRational) -> BigRational {
    BigRational::new(a.numer().abs().lcm(b.numer()), a.denom().gcd(b.denom()))
}

/// Residue vectors of `fs` on every ladder, scaled to a common integer matrix.
fn residue_matrix(fs: &[&Element]) -> (hnf::Matrix, usize) {
    let Some(first) = fs.first() else {
        return (Vec::new(), 0);
    };
    let amb = first.ambient();
    let rows: Vec<Vec<BigRational>> = fs
        .iter()
        .map(|f| (0..amb.ladders.len()).flat_map(|li| f.residue(li)).collect())
        .collect();
    let den = rows.iter().flatten().fold(BigInt::one(), |a, r| a.lcm(r.denom()));
    let scale = BigRational::from_integer(den);
    let width = rows.first().map_or(0, Vec::len);
    let m = rows
        .iter()
        .map(|r| r.iter().map(|x| (x * &scale).to_integer()).collect())
        .collect();
    (m, width)
}

/// First member of `of` whose residue is outside the residue span of `over`.
fn residue_escape(of: &[&Element], over: &[&Element]) -> Option<usize> {
    let all: Vec<&Element> = over.iter().chain(of).copied().collect();
    let (m, width) = residue_matrix(&all);
    let (basis, targets) = m.split_at(over.len());
    let hf = hnf::hermite(&basis.to_vec(), width);
    targets
        .iter()
        .position(|v| hnf::solve_with(&hf, basis.len(), v).is_none())
}

/// Checks each axiom independently and reports the first violation of each.
pub fn verify_staircase(candidate: &StaircaseBase, group: &GroupPresentation) -> Result<StaircaseReport> {
    let amb = &group.ambient;
    let li = amb.ladder_index(&candidate.ladder)?;
    let els = &candidate.elements;
    let mu: Vec<Option<u64>> = els.iter().map(|a| a.mu_at(li).ok()).collect();

    let mut positive = None;
    let membership = group.member_decompose_many(els)?;
    for (n, (a, d)) in els.iter().zip(&membership).enumerate() {
        if !a.is_positive() {
            positive = Some(Violation {
                index: n,
                detail: format!("{a} takes a negative value"),
            });
            break;
        }
        if d.is_none() {
            positive = Some(Violation {
                index: n,
                detail: format!("{a} is not in the group"),
            });
            break;
        }
    }

    let gens: Vec<&Element> = group.generators.iter().collect();
    let members: Vec<&Element> = els.iter().collect();
    let residue = residue_escape(&gens, &members)
        .map(|i| Violation {
            index: i,
            detail: format!("residue of generator {} is not reached", group.generators[i]),
        })
        .or_else(|| {
            residue_escape(&members, &gens).map(|i| Violation {
                index: i,
                detail: format!("residue of {} lies outside the group's residues", els[i]),
            })
        });

    let mut increasing = None;
    for n in 0..els.len() {
        let bad = match (n.checked_sub(1).map(|m| mu[m]), mu[n]) {
            (_, None) => true,
            (Some(Some(prev)), Some(cur)) => cur <= prev,
            (Some(None), _) => true,
            (None, _) => false,
        };
        if bad {
            increasing = Some(Violation {
                index: n,
                detail: format!(
                    "mu values {} then {}",
                    n.checked_sub(1).and_then(|m| mu[m]).map_or("-".into(), |v| v.to_string()),
                    mu[n].map_or("undefined".into(), |v| v.to_string())
                ),
            });
            break;
        }
    }

    let mut vanishing = None;
    let mut divisibility = None;
    for (n, (a, d)) in els.iter().zip(&candidate.divisors).enumerate() {
        if vanishing.is_none() {
            let h = &a.scale(d) - &els[0];
            let from = mu[n].unwrap_or(0);
            if let Some((k, v)) = first_nonzero_from(&h, li, from) {
                vanishing = Some(Violation {
                    index: n,
                    detail: format!("value {v} at ladder index {k}"),
                });
            }
        }
        if divisibility.is_none() && (!d.is_positive() || !factorial(n as u64).is_multiple_of(d)) {
            divisibility = Some(Violation {
                index: n,
                detail: format!("{d} does not divide {n}!"),
            });
        }
    }
    if els.len() != candidate.divisors.len() && divisibility.is_none() {
        divisibility = Some(Violation {
            index: els.len().min(candidate.divisors.len()),
            detail: "divisor count differs from element count".into(),
        });
    }

    let outcomes = [
        (StaircaseAxiom::Positive, positive),
        (StaircaseAxiom::ResidueGeneration, residue),
        (StaircaseAxiom::StrictlyIncreasing, increasing),
        (StaircaseAxiom::Vanishing, vanishing),
        (StaircaseAxiom::Divisibility, divisibility),
    ]
    .into_iter()
    .map(|(axiom, violation)| AxiomOutcome { axiom, violation })
    .collect();
    Ok(StaircaseReport { mu, outcomes })
}

/// First ladder index `k >= from` where `h` is nonzero on ladder `li`.
fn first_nonzero_from(h: &Element, li: usize, from: u64) -> Option<(u64, BigInt)> {
    let l = &h.ambient().ladders[li];
    let last_prefix = h.prefix().keys().filter_map(|p| l.index_of(p)).max();
    let end = match h.tail_on(li) {
        // A nonzero tail is eventually nonzero; its start bounds the search.
        Some(t) => {
            let (_, settle) = crate::element::settle(&l.families(), &t.coeffs);
            t.start.max(settle).max(last_prefix.map_or(0, |k| k + 1)).max(from) + 1
        }
        None => last_prefix.map_or(from, |k| k + 1),
    };
    (from..end).find_map(|k| {
        let v = h.ladder_value(li, k);
        (!v.is_zero()).then_some((k, v))
    })
}

/// Scalar residue of `f`: its coefficient on label `j` of ladder `li`.
fn scalar_residue(f: &Element, li: usize, j: usize) -> BigRational {
    f.residue(li)[j].clone()
}

/// Builds `count` terms of a staircase base starting from `a0`.
///
/// The group must have a single infinite prime whose residues are all
/// proportional to the residue of `a0`, and must contain the basis element of
/// every ladder point it is asked to clear.
pub fn construct_staircase(group: &GroupPresentation, a0: &Element, count: usize) -> Result<StaircaseBase> {
    let amb = &group.ambient;
    if amb.ladders.len() != 1 {
        return Err(Error::Precondition(format!(
            "staircase construction needs a single ladder, found {}",
            amb.ladders.len()
        )));
    }
    let li = 0;
    let ladder = &amb.ladders[li];
    let v = a0.residue(li);
    let Some(j) = v.iter().position(|r| !r.is_zero()) else {
        return Err(Error::Precondition(format!("{a0} has zero residue")));
    };
    if !a0.is_positive() || !group.contains(a0)? {
        return Err(Error::Precondition(format!("{a0} is not a positive member")));
    }
    for g in &group.generators {
        let r = g.residue(li);
        if r.iter().zip(&v).any(|(ri, vi)| ri * &v[j] != &r[j] * vi) {
            return Err(Error::ResidueNotRankOne(format!("{g} is not proportional to {a0}")));
        }
    }
    for p in a0.explicit_points().iter().chain(group.generators.iter().flat_map(|g| g.prefix().keys())) {
        if ladder.index_of(p).is_none() {
            return Err(Error::Precondition(format!("{p} is off the ladder `{}`", ladder.id)));
        }
    }

    let alpha0 = scalar_residue(a0, li, j);
    let residues: Vec<BigRational> = group.generators.iter().map(|g| scalar_residue(g, li, j)).collect();
    let gamma = residues
        .iter()
        .fold(BigRational::zero(), |acc, r| if acc.is_zero() { r.abs() } else { rat_gcd(&acc, r) });
    let sign = BigRational::from_integer(alpha0.numer().signum());
    let candidates: Vec<(&Element, BigRational)> =
        group.generators.iter().zip(residues.iter().cloned()).collect();

    let mut elements = vec![a0.clone()];
    let mut divisors = vec![BigInt::one()];
    let mut targets = vec![alpha0.clone()];
    let mut prev_mu = a0.mu_at(li)?;
    for n in 1..count as u64 {
        let step = alpha0.abs() / BigRational::from_integer(factorial(n));
        let alpha = &sign * rat_lcm(&step, &gamma);
        let d = (&alpha0 / &alpha).to_integer();
        let b = preimage(group, &residues, &candidates, &alpha)?;
        let h = &b.scale(&d) - a0;
        if !h.is_tail_free() {
            return Err(Error::ResidueNotRankOne(format!("{h} keeps a tail")));
        }
        let lambda = h
            .prefix()
            .keys()
            .filter_map(|p| ladder.index_of(p))
            .max()
            .map_or(0, |k| k + 1);
        // Smallest threshold from which a0 is divisible by d.
        let mut low = lambda;
        while low > 0 && a0.ladder_value(li, low - 1).is_multiple_of(&d) {
            low -= 1;
        }
        let thr = low.max(prev_mu + 1);
        let truncated = if thr == 0 {
            a0.clone()
        } else {
            a0.restrict(&ClopenBlock::new(ladder.point(thr - 1), amb.space.top().clone())?)
        };
        let a = truncated.div_exact(&d)?;
        if !group.contains(&a)? {
            return Err(Error::Precondition(format!(
                "{a} is not in the group; the group lacks basis elements below index {thr}"
            )));
        }
        prev_mu = a.mu_at(li)?;
        elements.push(a);
        divisors.push(d);
        targets.push(alpha);
    }
    Ok(StaircaseBase {
        ladder: ladder.id.clone(),
        label: ladder.labels[j].label.clone(),
        elements,
        divisors,
        residue_targets: targets,
    })
}

/// An element with scalar residue `alpha`: a single `±candidate` when one
/// matches exactly, otherwise a generator combination found by Hermite solve.
pub(crate) fn preimage(
    group: &GroupPresentation,
    residues: &[BigRational],
    candidates: &[(&Element, BigRational)],
    alpha: &BigRational,
) -> Result<Element> {
    for (c, r) in candidates {
        if r == alpha {
            return Ok((*c).clone());
        }
        if &-r == alpha {
            return Ok(-*c);
        }
    }
    let den = residues
        .iter()
        .chain(std::iter::once(alpha))
        .fold(BigInt::one(), |a, r| a.lcm(r.denom()));
    let scale = BigRational::from_integer(den);
    let m: hnf::Matrix = residues.iter().map(|r| vec![(r * &scale).to_integer()]).collect();
    let target = vec![(alpha * &scale).to_integer()];
    let sol = hnf::solve_left(&m, &target).ok_or_else(|| Error::PreimageExhausted(alpha.to_string()))?;
    Ok(combine(&sol.x, &group.generators, &group.zero()))
}
