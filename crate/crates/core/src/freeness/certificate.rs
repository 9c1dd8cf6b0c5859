//! Finite chain certificates and the pieces shared by every chain builder.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::coords::{combine, ProbeWindow};
use crate::element::{Ambient, Element};
use crate::error::{Error, Result};
use crate::hnf;
use crate::ordinal::Ordinal;

/// One step `B_prev ⊆ A ⊆ B` of a chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainStep {
    pub index: Ordinal,
    /// Added to the previous basis to form `A`; their images are a basis of `A/B_prev`.
    pub extension: Vec<Element>,
    /// Extra generators with `B = A + ⟨extra⟩`.
    pub extra: Vec<Element>,
    /// `torsion_bound · B ⊆ A`.
    pub torsion_bound: BigInt,
    /// Coordinates of `torsion_bound · extra[i]` over `previous basis ++ extension`.
    pub torsion_witnesses: Vec<Vec<BigInt>>,
    /// A basis of `B`.
    pub basis: Vec<Element>,
}

impl ChainStep {
    /// `previous ++ extension`: the basis of `A` the witnesses refer to.
    pub fn a_basis(&self, previous: &[Element]) -> Vec<Element> {
        previous.iter().chain(&self.extension).cloned().collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreenessCertificate {
    pub ambient: Arc<Ambient>,
    pub steps: Vec<ChainStep>,
    pub final_basis: Vec<Element>,
    /// Elements asserted to decompose uniquely over the final basis.
    pub targets: Vec<Element>,
    pub window: ProbeWindow,
}

impl FreenessCertificate {
    /// Every element mentioned anywhere in the certificate.
    pub fn elements(&self) -> impl Iterator<Item = &Element> {
        self.steps
            .iter()
            .flat_map(|s| s.extension.iter().chain(&s.extra).chain(&s.basis))
            .chain(&self.final_basis)
            .chain(&self.targets)
    }
}

/// A step before witnesses and bases are computed.
#[derive(Debug, Clone)]
pub struct StepPlan {
    pub index: Ordinal,
    pub extension: Vec<Element>,
    pub extra: Vec<Element>,
    pub torsion_bound: BigInt,
}

/// A basis of `⟨a_basis ∪ b_gens⟩` when `n · b_gens ⊆ ⟨a_basis⟩`.
///
/// Multiplication by `n` embeds the bigger group into `⟨a_basis⟩`; the Hermite
/// form of the image coordinates is pulled back through the same unimodular
/// transform applied to the original generators.
pub fn free_from_bounded_torsion(a_basis: &[Element], b_gens: &[Element], n: &BigInt) -> Result<Vec<Element>> {
    if a_basis.is_empty() && b_gens.is_empty() {
        return Ok(Vec::new());
    }
    let zero = Element::zero(a_basis.iter().chain(b_gens).next().expect("nonempty").ambient());
    let window = ProbeWindow::covering(a_basis.iter().chain(b_gens));
    let a_m = window.matrix(a_basis)?;
    let a_hf = hnf::hermite(&a_m, window.width());
    if a_hf.rank() != a_basis.len() {
        return Err(Error::Precondition("the first family is not independent".into()));
    }
    let k = a_basis.len();
    let mut rows: hnf::Matrix = (0..k)
        .map(|i| (0..k).map(|j| if i == j { n.clone() } else { BigInt::zero() }).collect())
        .collect();
    for g in b_gens {
        let v = window.coords(&g.scale(n))?;
        let sol = hnf::solve_with(&a_hf, k, &v)
            .ok_or_else(|| Error::WitnessNotFound(format!("{n}·{g} is not in the first group")))?;
        rows.push(sol.x);
    }
    let hf = hnf::hermite(&rows, k);
    let gens: Vec<Element> = a_basis.iter().chain(b_gens).cloned().collect();
    Ok(hf.u[..hf.rank()]
        .iter()
        .map(|u| combine(u, &gens, &zero))
        .collect())
}

/// Computes witnesses and bases for a list of planned steps on top of `initial`.
pub fn assemble(
    ambient: &Arc<Ambient>,
    initial: Vec<Element>,
    plans: Vec<StepPlan>,
    targets: Vec<Element>,
) -> Result<FreenessCertificate> {
    let mut basis = initial;
    let mut steps = Vec::with_capacity(plans.len());
    for plan in plans {
        let a_basis: Vec<Element> = basis.iter().chain(&plan.extension).cloned().collect();
        let window = ProbeWindow::covering(a_basis.iter().chain(&plan.extra));
        let hf = hnf::hermite(&window.matrix(&a_basis)?, window.width());
        if hf.rank() != a_basis.len() {
            return Err(Error::WitnessNotFound(format!(
                "extension at step {} is dependent on the previous basis",
                plan.index
            )));
        }
        let torsion_witnesses = plan
            .extra
            .iter()
            .map(|g| {
                let v = window.coords(&g.scale(&plan.torsion_bound))?;
                hnf::solve_with(&hf, a_basis.len(), &v).map(|s| s.x).ok_or_else(|| {
                    Error::WitnessNotFound(format!(
                        "{}·{g} is not in A at step {}",
                        plan.torsion_bound, plan.index
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let next = free_from_bounded_torsion(&a_basis, &plan.extra, &plan.torsion_bound)?;
        steps.push(ChainStep {
            index: plan.index,
            extension: plan.extension,
            extra: plan.extra,
            torsion_bound: plan.torsion_bound,
            torsion_witnesses,
            basis: next.clone(),
        });
        basis = next;
    }
    let mut cert = FreenessCertificate {
        ambient: ambient.clone(),
        steps,
        final_basis: basis,
        targets: Vec::new(),
        window: ProbeWindow::default(),
    };
    cert.targets = targets;
    cert.window = ProbeWindow::covering(cert.elements());
    Ok(cert)
}

/// Members of `candidates` in the span of `basis`, in order, without repeats.
pub fn in_span(basis: &[Element], candidates: &[Element]) -> Result<Vec<Element>> {
    let window = ProbeWindow::covering(basis.iter().chain(candidates));
    let hf = hnf::hermite(&window.matrix(basis)?, window.width());
    let mut out: Vec<Element> = Vec::new();
    for c in candidates {
        if out.contains(c) || c.is_zero() {
            continue;
        }
        if hnf::solve_with(&hf, basis.len(), &window.coords(c)?).is_some() {
            out.push(c.clone());
        }
    }
    Ok(out)
}
