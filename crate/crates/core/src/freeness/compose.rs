//! Global certificates for groups with finitely many infinite primes, one
//! clopen block per prime plus a discrete remainder.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;

use crate::element::{Ambient, Element};
use crate::error::{Error, Result};
use crate::group::GroupPresentation;
use crate::ordinal::{Ordinal, OrdinalKind};
use crate::space::{cb_rank_of, ClopenBlock, ScatteredSpace};

use super::certificate::{StepPlan, FreenessCertificate};
use super::chain::{cofinal_sequence, plan_chain_limit, plan_chain_successor, ChainPlan};

/// Rank bound used for every block chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ComposeOptions {
    /// Successor blocks: last chain index. Limit blocks: last family index.
    pub depth: u64,
}

impl Default for ComposeOptions {
    fn default() -> Self {
        ComposeOptions { depth: 4 }
    }
}

fn check_blocks(space: &ScatteredSpace, blocks: &[ClopenBlock]) -> Result<Vec<Ordinal>> {
    for (i, a) in blocks.iter().enumerate() {
        if a.high > *space.top() {
            return Err(Error::InvalidBlock {
                low: a.low.clone(),
                high: a.high.clone(),
            });
        }
        if let Some(b) = blocks[i + 1..].iter().find(|b| a.overlaps(b)) {
            return Err(Error::BlockOverlap(format!("{a} and {b}")));
        }
    }
    let mut owners = Vec::with_capacity(blocks.len());
    for b in blocks {
        let inside: Vec<&Ordinal> = space.infinite_primes().iter().filter(|p| b.contains(p)).collect();
        match inside.as_slice() {
            [p] => owners.push((*p).clone()),
            _ => {
                return Err(Error::Precondition(format!(
                    "block {b} contains {} infinite primes, expected one",
                    inside.len()
                )))
            }
        }
    }
    if let Some(p) = space.infinite_primes().iter().find(|p| !owners.contains(p)) {
        return Err(Error::UncoveredInfinitePrime(p.clone()));
    }
    Ok(owners)
}

/// The block's prime with only its own ladder.
fn block_ambient(ambient: &Ambient, prime: &Ordinal) -> Result<Arc<Ambient>> {
    let space = ScatteredSpace::new(ambient.space.top().clone(), [prime.clone()])?;
    let ladder = ambient.ladders[ambient.ladder_for_target(prime)?].clone();
    Ok(Arc::new(Ambient::new(space, vec![ladder])?))
}

fn transfer_plan(plan: ChainPlan, target: &Arc<Ambient>) -> Result<ChainPlan> {
    let move_all = |v: Vec<Element>| v.iter().map(|e| e.transfer(target)).collect::<Result<Vec<_>>>();
    Ok(ChainPlan {
        steps: plan
            .steps
            .into_iter()
            .map(|s| {
                Ok(StepPlan {
                    index: s.index,
                    extension: move_all(s.extension)?,
                    extra: move_all(s.extra)?,
                    torsion_bound: s.torsion_bound,
                })
            })
            .collect::<Result<_>>()?,
        targets: move_all(plan.targets)?,
    })
}

/// Concatenates a discrete step for points outside every block with the chain
/// of each block's restricted presentation.
pub fn multi_prime_compose(
    group: &GroupPresentation,
    blocks: &[ClopenBlock],
    options: ComposeOptions,
) -> Result<FreenessCertificate> {
    let amb = &group.ambient;
    let owners = check_blocks(&amb.space, blocks)?;

    let outside: BTreeSet<Ordinal> = group
        .generators
        .iter()
        .flat_map(Element::explicit_points)
        .filter(|p| !blocks.iter().any(|b| b.contains(p)))
        .collect();
    let discrete: Vec<Element> = outside
        .iter()
        .map(|p| Element::basis(amb, p))
        .collect::<Result<_>>()?;
    for (e, d) in discrete.iter().zip(group.member_decompose_many(&discrete)?) {
        if d.is_none() {
            return Err(Error::WitnessNotFound(format!("{e} is not in the group")));
        }
    }
    let mut steps = Vec::new();
    if !discrete.is_empty() {
        steps.push(StepPlan {
            index: Ordinal::zero(),
            extension: discrete.clone(),
            extra: Vec::new(),
            torsion_bound: BigInt::one(),
        });
    }
    let mut targets = discrete;

    for (block, prime) in blocks.iter().zip(&owners) {
        let local = block_ambient(amb, prime)?;
        let gens = group
            .generators
            .iter()
            .map(|g| g.restrict(block))
            .filter(|g| !g.is_zero())
            .map(|g| g.transfer(&local))
            .collect::<Result<Vec<_>>>()?;
        let sub = GroupPresentation::new(local, gens)?;
        let rank = cb_rank_of(prime);
        let plan = match rank.classify() {
            OrdinalKind::Limit => {
                let r = options.depth as usize;
                let alphas = cofinal_sequence(&rank, r + 1)?;
                plan_chain_limit(&sub, &alphas, r)?
            }
            _ => plan_chain_successor(&sub, options.depth)?,
        };
        let plan = transfer_plan(plan, amb)?;
        steps.extend(plan.steps);
        targets.extend(plan.targets);
    }
    ChainPlan { steps, targets }.into_certificate(group)
}
