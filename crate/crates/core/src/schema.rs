//! Versioned JSON files: group presentations and freeness certificates.
//! Elements travel as literals, big integers as decimal strings.

use std::sync::Arc;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::coords::ProbeWindow;
use crate::element::{Ambient, Element, Ladder};
use crate::error::{Error, Result};
use crate::freeness::{ChainStep, FreenessCertificate};
use crate::group::GroupPresentation;
use crate::ordinal::Ordinal;
use crate::space::ScatteredSpace;

pub const PRESENTATION_SCHEMA: &str = "lgroup-presentation/1";
pub const CERTIFICATE_SCHEMA: &str = "lgroup-cert/1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationFile {
    pub schema: String,
    pub space: ScatteredSpace,
    /// Omitted: one default ladder per infinite prime.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ladders: Option<Vec<Ladder>>,
    pub generators: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<ProbeWindow>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepFile {
    pub index: Ordinal,
    pub extension: Vec<String>,
    pub extra: Vec<String>,
    pub torsion_bound: String,
    pub torsion_witnesses: Vec<Vec<String>>,
    pub basis: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateFile {
    pub schema: String,
    /// Free-form provenance of the run, e.g. the rank bound used.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub run: Option<serde_json::Value>,
    pub space: ScatteredSpace,
    pub ladders: Vec<Ladder>,
    pub steps: Vec<StepFile>,
    pub final_basis: Vec<String>,
    pub targets: Vec<String>,
    pub window: ProbeWindow,
}

fn check_schema(found: &str, want: &str) -> Result<()> {
    if found == want {
        Ok(())
    } else {
        Err(Error::Schema(format!("expected schema `{want}`, found `{found}`")))
    }
}

fn json_err(e: serde_json::Error) -> Error {
    Error::Schema(e.to_string())
}

fn literals(v: &[Element]) -> Vec<String> {
    v.iter().map(Element::to_string).collect()
}

fn parse_all(amb: &Arc<Ambient>, v: &[String]) -> Result<Vec<Element>> {
    v.iter().map(|s| Element::parse(amb, s)).collect()
}

fn int(s: &str) -> Result<BigInt> {
    s.parse()
        .map_err(|_| Error::Schema(format!("`{s}` is not an integer")))
}

fn ambient_of(space: ScatteredSpace, ladders: Option<Vec<Ladder>>) -> Result<Arc<Ambient>> {
    Ok(Arc::new(match ladders {
        Some(l) => Ambient::new(space, l)?,
        None => Ambient::with_default_ladders(space)?,
    }))
}

impl PresentationFile {
    pub fn from_group(group: &GroupPresentation) -> Self {
        PresentationFile {
            schema: PRESENTATION_SCHEMA.into(),
            space: group.ambient.space.clone(),
            ladders: Some(group.ambient.ladders.clone()),
            generators: literals(&group.generators),
            window: group.window.clone(),
        }
    }

    pub fn into_group(self) -> Result<GroupPresentation> {
        check_schema(&self.schema, PRESENTATION_SCHEMA)?;
        let amb = ambient_of(self.space, self.ladders)?;
        let gens = parse_all(&amb, &self.generators)?;
        let g = GroupPresentation::new(amb, gens)?;
        Ok(match self.window {
            Some(w) => g.with_window(w),
            None => g,
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(json_err)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }
}

impl CertificateFile {
    pub fn from_certificate(cert: &FreenessCertificate, run: Option<serde_json::Value>) -> Self {
        let strs = |v: &[BigInt]| v.iter().map(BigInt::to_string).collect();
        CertificateFile {
            schema: CERTIFICATE_SCHEMA.into(),
            run,
            space: cert.ambient.space.clone(),
            ladders: cert.ambient.ladders.clone(),
            steps: cert
                .steps
                .iter()
                .map(|s| StepFile {
                    index: s.index.clone(),
                    extension: literals(&s.extension),
                    extra: literals(&s.extra),
                    torsion_bound: s.torsion_bound.to_string(),
                    torsion_witnesses: s.torsion_witnesses.iter().map(|w| strs(w)).collect(),
                    basis: literals(&s.basis),
                })
                .collect(),
            final_basis: literals(&cert.final_basis),
            targets: literals(&cert.targets),
            window: cert.window.clone(),
        }
    }

    pub fn into_certificate(self) -> Result<FreenessCertificate> {
        check_schema(&self.schema, CERTIFICATE_SCHEMA)?;
        let amb = ambient_of(self.space, Some(self.ladders))?;
        let steps = self
            .steps
            .iter()
            .map(|s| {
                Ok(ChainStep {
                    index: s.index.clone(),
                    extension: parse_all(&amb, &s.extension)?,
                    extra: parse_all(&amb, &s.extra)?,
                    torsion_bound: int(&s.torsion_bound)?,
                    torsion_witnesses: s
                        .torsion_witnesses
                        .iter()
                        .map(|w| w.iter().map(|c| int(c)).collect())
                        .collect::<Result<_>>()?,
                    basis: parse_all(&amb, &s.basis)?,
                })
            })
            .collect::<Result<_>>()?;
        Ok(FreenessCertificate {
            steps,
            final_basis: parse_all(&amb, &self.final_basis)?,
            targets: parse_all(&amb, &self.targets)?,
            window: self.window,
            ambient: amb,
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(json_err)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freeness::{build_chain_successor, smooth_chain_check};
    use crate::presets::{limit_q_group, two_prime_group};

    #[test]
    fn presentation_round_trip() {
        for g in [limit_q_group(4), two_prime_group(3)] {
            let text = PresentationFile::from_group(&g).to_json();
            let back = PresentationFile::from_json(&text).unwrap().into_group().unwrap();
            assert_eq!(back.generators.len(), g.generators.len());
            for (a, b) in back.generators.iter().zip(&g.generators) {
                assert_eq!(a.to_string(), b.to_string());
            }
        }
    }

    #[test]
    fn certificate_round_trip() {
        let cert = build_chain_successor(&limit_q_group(6), 3).unwrap();
        let file = CertificateFile::from_certificate(&cert, None);
        let back = CertificateFile::from_json(&file.to_json()).unwrap().into_certificate().unwrap();
        assert_eq!(smooth_chain_check(&back), Ok(()));
        assert_eq!(CertificateFile::from_certificate(&back, None), file);
    }

    #[test]
    fn wrong_schema_is_rejected() {
        let mut file = PresentationFile::from_group(&limit_q_group(2));
        file.schema = "lgroup-presentation/0".into();
        assert!(matches!(file.into_group(), Err(Error::Schema(_))));
    }
}
