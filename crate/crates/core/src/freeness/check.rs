//! Independent re-verification of a chain certificate.
//!
//! Only evaluation (through probe-window coordinates) and Hermite solving are
//! used; nothing computed by a builder is trusted.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Signed;

use crate::coords::ProbeWindow;
use crate::element::Element;
use crate::hnf::{self, Hermite};

use super::certificate::FreenessCertificate;

/// Where a certificate failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckSite {
    Step(usize),
    Final,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckFailure {
    pub site: CheckSite,
    pub reason: String,
}

impl fmt::Display for CheckFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.site {
            CheckSite::Step(i) => write!(f, "step {i}: {}", self.reason),
            CheckSite::Final => write!(f, "final basis: {}", self.reason),
        }
    }
}

impl std::error::Error for CheckFailure {}

struct Coords {
    window: ProbeWindow,
}

impl Coords {
    fn rows(&self, fs: &[Element]) -> Result<hnf::Matrix, String> {
        self.window.matrix(fs).map_err(|e| e.to_string())
    }

    fn row(&self, f: &Element) -> Result<Vec<BigInt>, String> {
        self.window.coords(f).map_err(|e| e.to_string())
    }

    fn hermite(&self, fs: &[Element]) -> Result<Hermite, String> {
        Ok(hnf::hermite(&self.rows(fs)?, self.window.width()))
    }

    /// First member of `of` outside the span of `over`.
    fn first_outside(&self, of: &[Element], over: &[Element]) -> Result<Option<usize>, String> {
        let hf = self.hermite(over)?;
        for (i, f) in of.iter().enumerate() {
            if hnf::solve_with(&hf, over.len(), &self.row(f)?).is_none() {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }
}

/// Re-verifies every step and the final decompositions; `Ok` means the
/// certificate is valid.
pub fn smooth_chain_check(cert: &FreenessCertificate) -> Result<(), CheckFailure> {
    let c = Coords {
        window: ProbeWindow::covering(cert.elements()),
    };
    let width = c.window.width();
    let mut previous: Vec<Element> = Vec::new();
    for (i, step) in cert.steps.iter().enumerate() {
        let fail = |reason: String| CheckFailure {
            site: CheckSite::Step(i),
            reason,
        };
        let a_basis = step.a_basis(&previous);
        let a_m = c.rows(&a_basis).map_err(fail)?;
        let a_hf = hnf::hermite(&a_m, width);
        if a_hf.rank() != a_basis.len() {
            return Err(fail(format!(
                "quotient basis is dependent: Hermite rank {} for {} elements",
                a_hf.rank(),
                a_basis.len()
            )));
        }
        if !step.torsion_bound.is_positive() {
            return Err(fail(format!("torsion bound {} is not positive", step.torsion_bound)));
        }
        if step.torsion_witnesses.len() != step.extra.len() {
            return Err(fail(format!(
                "{} torsion witnesses for {} extra generators",
                step.torsion_witnesses.len(),
                step.extra.len()
            )));
        }
        for (j, (g, w)) in step.extra.iter().zip(&step.torsion_witnesses).enumerate() {
            if w.len() != a_basis.len() {
                return Err(fail(format!("torsion witness {j} has the wrong length")));
            }
            let lhs = c.row(&g.scale(&step.torsion_bound)).map_err(fail)?;
            if hnf::mul_row(w, &a_m, width) != lhs {
                return Err(fail(format!(
                    "torsion witness {j} does not reproduce {}·{g}",
                    step.torsion_bound
                )));
            }
        }
        let b_hf = c.hermite(&step.basis).map_err(fail)?;
        if b_hf.rank() != step.basis.len() {
            return Err(fail(format!(
                "basis is dependent: Hermite rank {} for {} elements",
                b_hf.rank(),
                step.basis.len()
            )));
        }
        let generators: Vec<Element> = a_basis.iter().chain(&step.extra).cloned().collect();
        if let Some(j) = c.first_outside(&generators, &step.basis).map_err(fail)? {
            return Err(fail(format!("{} is not spanned by the basis", generators[j])));
        }
        if let Some(j) = c.first_outside(&step.basis, &generators).map_err(fail)? {
            return Err(fail(format!("basis element {} is outside the step group", step.basis[j])));
        }
        previous = step.basis.clone();
    }
    let fail = |reason: String| CheckFailure {
        site: CheckSite::Final,
        reason,
    };
    if cert.final_basis != previous {
        return Err(fail("final basis differs from the last step's basis".into()));
    }
    let hf = c.hermite(&cert.final_basis).map_err(fail)?;
    if hf.rank() != cert.final_basis.len() {
        return Err(fail("final basis is dependent".into()));
    }
    if let Some(j) = c.first_outside(&cert.targets, &cert.final_basis).map_err(fail)? {
        return Err(fail(format!("target {} does not decompose", cert.targets[j])));
    }
    Ok(())
}
