//! Scene files: JSON documents with optional sections, one per module.

use corkkit::certify::FactInput;
use corkkit::knot::{CrossingCensus, SeifertMatrix};
use corkkit::legendrian::FrontDiagram;
use corkkit::palf::{PalfInput, PalfPresentation};
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scene {
    pub seifert: Option<SeifertSection>,
    pub surgery: Option<SurgerySection>,
    pub census: Option<CrossingCensus>,
    pub front: Option<FrontDiagram>,
    pub admissibility: Option<AdmissibilitySection>,
    pub palf: Option<PalfInput>,
    pub family: Option<FamilySection>,
    pub certify: Option<CertifySection>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeifertSection {
    pub matrix: Vec<Vec<i64>>,
    #[serde(default)]
    pub strict: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurgerySection {
    pub n: Vec<i64>,
}

/// Trusted inputs for the admissibility check; the crossing census and the
/// front come from their own sections.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AdmissibilitySection {
    pub unknotted: [bool; 2],
    pub involution: bool,
    /// Optional Seifert matrices of the two components for the Alexander screen.
    #[serde(default)]
    pub screens: Option<[Vec<Vec<i64>>; 2]>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySection {
    #[serde(default = "one")]
    pub n_min: u32,
    pub n_max: u32,
}

fn one() -> u32 {
    1
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertifySection {
    pub facts: Vec<FactInput>,
}

impl Scene {
    pub fn parse(bytes: &[u8]) -> Result<Self, CliError> {
        let de = &mut serde_json::Deserializer::from_slice(bytes);
        let scene: Scene = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            if path == "." {
                CliError::Schema(format!("scene: {inner}"))
            } else {
                CliError::Schema(format!("{path}: {inner}"))
            }
        })?;
        if scene.is_empty() {
            return Err(CliError::Schema(
                "scene: no sections present (expected at least one of seifert, surgery, census, front, admissibility, palf, family, certify)".into(),
            ));
        }
        Ok(scene)
    }

    fn is_empty(&self) -> bool {
        self.seifert.is_none()
            && self.surgery.is_none()
            && self.census.is_none()
            && self.front.is_none()
            && self.admissibility.is_none()
            && self.palf.is_none()
            && self.family.is_none()
            && self.certify.is_none()
    }

    pub fn seifert_matrix(&self, force_strict: bool) -> Result<SeifertMatrix, CliError> {
        let s = require(&self.seifert, "seifert")?;
        SeifertMatrix::from_rows(&s.matrix, s.strict || force_strict)
            .map_err(|e| CliError::Schema(format!("seifert.matrix: {e}")))
    }

    pub fn front(&self) -> Result<FrontDiagram, CliError> {
        let f = *require(&self.front, "front")?;
        f.validate()
            .map_err(|e| CliError::Schema(format!("front: {e}")))?;
        Ok(f)
    }

    pub fn palf(&self) -> Result<PalfPresentation, CliError> {
        let p = require(&self.palf, "palf")?.clone();
        PalfPresentation::try_from(p).map_err(|e| CliError::Schema(format!("palf: {e}")))
    }
}

pub fn require<'a, T>(section: &'a Option<T>, name: &str) -> Result<&'a T, CliError> {
    section
        .as_ref()
        .ok_or_else(|| CliError::Schema(format!("{name}: section required by this subcommand")))
}
