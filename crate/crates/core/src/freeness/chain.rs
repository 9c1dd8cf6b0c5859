//! Chain builders for groups with one infinite prime.
//!
//! Each builder first plans the steps (which elements enter `A` and `B` at
//! each rank, and the torsion bound) and then hands the plan to
//! [`assemble`], which computes witnesses and bases.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::element::Element;
use crate::error::{Error, Result};
use crate::group::GroupPresentation;
use crate::ordinal::{Ordinal, OrdinalKind};
use crate::presets::factorial;
use crate::space::cb_rank_of;

use super::certificate::{assemble, in_span, FreenessCertificate, StepPlan};
use super::staircase::{construct_staircase, preimage, rat_gcd, rat_lcm, StaircaseBase};

/// A planned chain together with the elements it should decompose.
#[derive(Debug, Clone)]
pub struct ChainPlan {
    pub steps: Vec<StepPlan>,
    pub targets: Vec<Element>,
}

impl ChainPlan {
    pub fn into_certificate(self, group: &GroupPresentation) -> Result<FreenessCertificate> {
        let mut cert = assemble(&group.ambient, Vec::new(), self.steps, Vec::new())?;
        let candidates: Vec<Element> = self.targets.into_iter().chain(group.generators.iter().cloned()).collect();
        cert.targets = in_span(&cert.final_basis, &candidates)?;
        cert.window = crate::coords::ProbeWindow::covering(cert.elements());
        Ok(cert)
    }
}

fn single_prime(group: &GroupPresentation) -> Result<Ordinal> {
    let amb = &group.ambient;
    let primes = amb.space.infinite_primes();
    if primes.len() != 1 || amb.ladders.len() != 1 {
        return Err(Error::Precondition(format!(
            "expected one infinite prime with one ladder, found {} and {}",
            primes.len(),
            amb.ladders.len()
        )));
    }
    Ok(primes.iter().next().expect("one prime").clone())
}

/// Label subgroups with a nonzero residue: `(label index, generators)`.
fn label_groups(group: &GroupPresentation) -> Result<Vec<(usize, GroupPresentation)>> {
    let ladder = &group.ambient.ladders[0];
    let mut out = Vec::new();
    for j in 0..ladder.labels.len() {
        let gens = group.label_subgroup(0, j)?;
        if gens.iter().any(|g| !g.residue(0)[j].is_zero()) {
            out.push((j, GroupPresentation::new(group.ambient.clone(), gens)?));
        }
    }
    Ok(out)
}

/// First original generator whose residue sits on label `j` alone, else the
/// first label-group generator with a residue there.
fn label_leader<'a>(group: &'a GroupPresentation, sub: &'a GroupPresentation, j: usize) -> &'a Element {
    let pure = |g: &&Element| {
        let r = g.residue(0);
        !r[j].is_zero() && r.iter().enumerate().all(|(i, x)| i == j || x.is_zero())
    };
    group
        .generators
        .iter()
        .find(pure)
        .or_else(|| sub.generators.iter().find(pure))
        .expect("label group has a residue")
}

/// Staircase per label, each long enough to reach `mu > r_max`.
pub fn label_staircases(group: &GroupPresentation, r_max: u64) -> Result<Vec<StaircaseBase>> {
    single_prime(group)?;
    let mut out = Vec::new();
    for (j, sub) in label_groups(group)? {
        let h = label_leader(group, &sub, j);
        let oriented = if h.residue(0)[j].is_negative() { -h } else { h.clone() };
        let a0 = oriented.pos_part();
        if !sub.contains(&a0)? {
            return Err(Error::Precondition(format!(
                "{a0} is not in the group; basis elements are missing"
            )));
        }
        out.push(construct_staircase(&sub, &a0, r_max as usize + 1)?);
    }
    Ok(out)
}

/// Plan of the successor-rank chain `B_0 ⊆ … ⊆ B_R`.
pub fn plan_chain_successor(group: &GroupPresentation, r_max: u64) -> Result<ChainPlan> {
    let prime = single_prime(group)?;
    if !matches!(cb_rank_of(&prime).classify(), OrdinalKind::Successor(_)) {
        return Err(Error::Precondition(format!("rank of {prime} is not a successor")));
    }
    let ladder = &group.ambient.ladders[0];
    for p in group.generators.iter().flat_map(|g| g.prefix().keys()) {
        if ladder.index_of(p).is_none() {
            return Err(Error::Precondition(format!("{p} is off the ladder `{}`", ladder.id)));
        }
    }
    let stairs = label_staircases(group, r_max)?;
    let mu: Vec<Vec<u64>> = stairs
        .iter()
        .map(|s| s.elements.iter().map(|a| a.mu_at(0)).collect::<Result<_>>())
        .collect::<Result<_>>()?;
    let basis_elements: Vec<Element> = (0..=r_max)
        .map(|r| Element::basis(&group.ambient, &ladder.point(r)))
        .collect::<Result<_>>()?;
    let present = group.member_decompose_many(&basis_elements)?;

    let mut steps = Vec::new();
    let mut targets = Vec::new();
    for r in 0..=r_max {
        let mut extension = Vec::new();
        if present[r as usize].is_some() {
            extension.push(basis_elements[r as usize].clone());
        }
        let mut extra = Vec::new();
        for (s, m) in stairs.iter().zip(&mu) {
            for (k, a) in s.elements.iter().enumerate() {
                if m[k] != r {
                    continue;
                }
                if k == 0 {
                    extension.push(a.clone());
                } else {
                    extra.push(a.clone());
                }
            }
        }
        if extension.is_empty() && extra.is_empty() {
            continue;
        }
        targets.extend(extension.iter().chain(&extra).cloned());
        steps.push(StepPlan {
            index: Ordinal::from(r),
            extension,
            extra,
            torsion_bound: factorial(r),
        });
    }
    Ok(ChainPlan { steps, targets })
}

pub fn build_chain_successor(group: &GroupPresentation, r_max: u64) -> Result<FreenessCertificate> {
    plan_chain_successor(group, r_max)?.into_certificate(group)
}

/// One `f_{λ,n}` of the limit construction with its bookkeeping.
#[derive(Debug, Clone)]
pub struct LimitFamilyMember {
    pub label: usize,
    pub n: usize,
    pub f_tilde: Element,
    pub f: Element,
    /// `n!·π(f̃_n) = t·π(f_0)`.
    pub t: BigInt,
    /// `n!·f_n − t·f_0`.
    pub g: Element,
    pub padding: Option<Ordinal>,
}

/// `count` increasing ordinals with limit `target`, starting above 0.
pub fn cofinal_sequence(target: &Ordinal, count: usize) -> Result<Vec<Ordinal>> {
    if !target.is_limit() {
        return Err(Error::Precondition(format!("{target} is not a limit ordinal")));
    }
    let (e, c) = target.terms().last().cloned().expect("limits are nonzero");
    let mut head: Vec<(Ordinal, u64)> = target.terms()[..target.terms().len() - 1].to_vec();
    if c > 1 {
        head.push((e.clone(), c - 1));
    }
    let base = Ordinal::from_terms(head)?;
    match e.classify() {
        OrdinalKind::Successor(pred) => (1..=count as u64)
            .map(|k| base.checked_add(&Ordinal::omega_pow_mul(pred.clone(), k)?))
            .collect(),
        OrdinalKind::Limit => cofinal_sequence(&e, count)?
            .into_iter()
            .map(|x| base.checked_add(&Ordinal::omega_pow(x)?))
            .collect(),
        OrdinalKind::Zero => unreachable!("limit ordinals have a positive last exponent"),
    }
}

/// The padded families `f_{λ,n}` for `n <= r`.
pub fn limit_families(
    group: &GroupPresentation,
    alphas: &[Ordinal],
    r: usize,
) -> Result<Vec<LimitFamilyMember>> {
    let prime = single_prime(group)?;
    let cb_p = cb_rank_of(&prime);
    if !cb_p.is_limit() {
        return Err(Error::Precondition(format!("rank of {prime} is not a limit")));
    }
    if alphas.len() <= r {
        return Err(Error::Precondition(format!("need {} thresholds, got {}", r + 1, alphas.len())));
    }
    if alphas[0].is_zero() || alphas.windows(2).any(|w| w[0] >= w[1]) || alphas[r] >= cb_p {
        return Err(Error::Precondition("thresholds must increase from above 0 and stay below the rank".into()));
    }
    let block = group.ambient.space.isolating_block(&prime)?;
    let mut out = Vec::new();
    for (j, sub) in label_groups(group)? {
        let residues: Vec<BigRational> = sub.generators.iter().map(|g| g.residue(0)[j].clone()).collect();
        let f0 = label_leader(group, &sub, j).clone();
        let alpha0 = f0.residue(0)[j].clone();
        let gamma = residues
            .iter()
            .fold(BigRational::zero(), |acc, x| if acc.is_zero() { x.abs() } else { rat_gcd(&acc, x) });
        let sign = BigRational::from_integer(alpha0.numer().signum());
        let candidates: Vec<(&Element, BigRational)> = group
            .generators
            .iter()
            .filter(|g| g.residue(0).iter().enumerate().all(|(i, x)| i == j || x.is_zero()))
            .map(|g| (g, g.residue(0)[j].clone()))
            .collect();
        out.push(LimitFamilyMember {
            label: j,
            n: 0,
            f_tilde: f0.clone(),
            f: f0.clone(),
            t: BigInt::one(),
            g: Element::zero(&group.ambient),
            padding: None,
        });
        for n in 1..=r {
            let nf = factorial(n as u64);
            let alpha = &sign * rat_lcm(&(alpha0.abs() / BigRational::from_integer(nf.clone())), &gamma);
            let f_tilde = preimage(&sub, &residues, &candidates, &alpha)?;
            let t = (BigRational::from_integer(nf.clone()) * &alpha / &alpha0).to_integer();
            let g_tilde = &f_tilde.scale(&nf) - &f0.scale(&t);
            if !g_tilde.is_tail_free() {
                return Err(Error::ResidueNotRankOne(format!("{g_tilde} keeps a tail")));
            }
            // Pad when the rank does not clear the threshold, equality included.
            let (f, g, padding) = if g_tilde.is_zero() || g_tilde.cb() <= alphas[n] {
                let rank = alphas[n].succ()?;
                let x = group.ambient.space.smallest_finite_prime_of_rank(&rank, &block)?;
                let q = group.semibasic_construct(&x)?;
                (&f_tilde + &q, &g_tilde + &q.scale(&nf), Some(x))
            } else {
                (f_tilde.clone(), g_tilde, None)
            };
            out.push(LimitFamilyMember {
                label: j,
                n,
                f_tilde,
                f,
                t,
                g,
                padding,
            });
        }
    }
    Ok(out)
}

/// Plan of the chain over ranks, truncated to the points the families touch.
pub fn plan_chain_limit(group: &GroupPresentation, alphas: &[Ordinal], r: usize) -> Result<ChainPlan> {
    let fams = limit_families(group, alphas, r)?;
    // Points whose semibasic elements are needed, closed under their supports.
    let mut pending: Vec<Ordinal> = fams.iter().flat_map(|m| m.g.prefix().keys().cloned()).collect();
    let mut q: BTreeMap<Ordinal, Element> = BTreeMap::new();
    while let Some(x) = pending.pop() {
        if q.contains_key(&x) {
            continue;
        }
        let qx = group.semibasic_construct(&x)?;
        if !qx.is_tail_free() {
            return Err(Error::Precondition(format!("semibasic element at {x} has a tail")));
        }
        pending.extend(qx.prefix().keys().filter(|p| !q.contains_key(*p)).cloned());
        q.insert(x, qx);
    }
    let mut ranks: BTreeSet<Ordinal> = q.keys().map(cb_rank_of).collect();
    ranks.insert(Ordinal::zero());
    ranks.extend(fams.iter().filter(|m| m.n > 0).map(|m| m.g.cb()));

    let mut steps = Vec::new();
    for beta in &ranks {
        let mut extension: Vec<Element> = q
            .iter()
            .filter(|(x, _)| cb_rank_of(x) == *beta)
            .map(|(_, e)| e.clone())
            .collect();
        if beta.is_zero() {
            extension.extend(fams.iter().filter(|m| m.n == 0).map(|m| m.f.clone()));
        }
        let extra: Vec<Element> = fams
            .iter()
            .filter(|m| m.n > 0 && m.g.cb() == *beta)
            .map(|m| m.f.clone())
            .collect();
        let n = alphas[..=r].iter().position(|a| beta <= a).unwrap_or(r);
        steps.push(StepPlan {
            index: beta.clone(),
            extension,
            extra,
            torsion_bound: factorial(n as u64),
        });
    }
    let targets = fams
        .iter()
        .flat_map(|m| [m.f.clone(), m.f_tilde.clone()])
        .chain(q.into_values())
        .collect();
    Ok(ChainPlan { steps, targets })
}

pub fn build_chain_limit(group: &GroupPresentation, alphas: &[Ordinal], r: usize) -> Result<FreenessCertificate> {
    plan_chain_limit(group, alphas, r)?.into_certificate(group)
}
