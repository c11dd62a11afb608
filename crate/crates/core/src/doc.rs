//! JSON document schemas for the command-line front end.
//!
//! A `ProblemDocument` carries one problem instance; its `kind` selects
//! the payload. Rationals appear as "p/q" strings (never floats) so that
//! exact values survive round-trips; floats occur only inside
//! volume-experiment outputs. Unknown fields are rejected.

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, CoreResult};
use crate::exponent::ExponentVector;
use crate::ideal::MonomialIdeal;
use crate::kiselman::ToricPsh;
use crate::polyhedron::NewtonPolyhedron;
use crate::rational::Rational;
use crate::sequences::{GradedSequence, SubadditiveSequence};
use crate::valuation::MonomialValuation;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProblemDocument {
    Ideal(IdealPayload),
    Valuation(ValuationPayload),
    GradedSequence(GradedSequencePayload),
    SubadditiveSequence(SubadditiveSequencePayload),
    ToricPsh(ToricPshPayload),
    Experiment(ExperimentPayload),
}

/// generators as rows of exponents; an empty list is the zero ideal and
/// a single all-zero row is the unit ideal
pub type Rows = Vec<Vec<Rational>>;

fn ideal_from_rows(dim: usize, rows: &Rows) -> CoreResult<MonomialIdeal> {
    let gens = rows
        .iter()
        .map(|r| ExponentVector::new(r.clone()))
        .collect::<CoreResult<Vec<_>>>()?;
    MonomialIdeal::new(dim, gens)
}

fn vector(dim: usize, entries: &[Rational]) -> CoreResult<ExponentVector> {
    let v = ExponentVector::new(entries.to_vec())?;
    if v.dim() != dim {
        return Err(CoreError::DimensionMismatch(dim, v.dim()));
    }
    Ok(v)
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct IdealPayload {
    pub dim: usize,
    pub generators: Rows,
    /// generators of the twisting ideal q (jumping numbers); unit when absent
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q_generators: Option<Rows>,
    /// exponent for the multiplier-ideal operation
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<Rational>,
}

impl IdealPayload {
    pub fn ideal(&self) -> CoreResult<MonomialIdeal> {
        ideal_from_rows(self.dim, &self.generators)
    }

    pub fn q(&self) -> CoreResult<MonomialIdeal> {
        match &self.q_generators {
            Some(rows) => ideal_from_rows(self.dim, rows),
            None => Ok(MonomialIdeal::unit(self.dim)),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ValuationPayload {
    pub dim: usize,
    pub weights: Vec<Rational>,
    /// ideal to evaluate the valuation on
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ideal: Option<Rows>,
    /// threshold for the valuation-ideal operation
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<Rational>,
}

impl ValuationPayload {
    pub fn valuation(&self) -> CoreResult<MonomialValuation> {
        MonomialValuation::new(vector(self.dim, &self.weights)?)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum PresentationDoc {
    PowerFamily { generators: Rows },
    ValuationFamily { weights: Vec<Rational>, threshold: Rational },
    Explicit { terms: Vec<Rows> },
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct GradedSequencePayload {
    pub dim: usize,
    pub presentation: PresentationDoc,
    /// twisting ideal for witness search; unit when absent
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q_generators: Option<Rows>,
}

impl GradedSequencePayload {
    pub fn sequence(&self) -> CoreResult<GradedSequence> {
        match &self.presentation {
            PresentationDoc::PowerFamily { generators } => {
                GradedSequence::power_family(ideal_from_rows(self.dim, generators)?)
            }
            PresentationDoc::ValuationFamily { weights, threshold } => {
                GradedSequence::valuation_family(vector(self.dim, weights)?, threshold.clone())
            }
            PresentationDoc::Explicit { terms } => GradedSequence::explicit(
                terms
                    .iter()
                    .map(|rows| ideal_from_rows(self.dim, rows))
                    .collect::<CoreResult<Vec<_>>>()?,
            ),
        }
    }

    pub fn q(&self) -> CoreResult<MonomialIdeal> {
        match &self.q_generators {
            Some(rows) => ideal_from_rows(self.dim, rows),
            None => Ok(MonomialIdeal::unit(self.dim)),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum SubadditivePresentationDoc {
    /// multiplier ideals of integer multiples of the region
    /// conv(points) + orthant
    MultiplierFamily { points: Rows },
    /// multiplier ideals attached to a graded sequence
    Graded { presentation: PresentationDoc },
    Explicit { terms: Vec<Rows> },
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SubadditiveSequencePayload {
    pub dim: usize,
    pub presentation: SubadditivePresentationDoc,
}

impl SubadditiveSequencePayload {
    pub fn sequence(&self) -> CoreResult<SubadditiveSequence> {
        match &self.presentation {
            SubadditivePresentationDoc::MultiplierFamily { points } => {
                let pts = points
                    .iter()
                    .map(|r| vector(self.dim, r))
                    .collect::<CoreResult<Vec<_>>>()?;
                Ok(SubadditiveSequence::from_region(NewtonPolyhedron::new(
                    self.dim, pts,
                )?))
            }
            SubadditivePresentationDoc::Graded { presentation } => {
                let graded = GradedSequencePayload {
                    dim: self.dim,
                    presentation: presentation.clone(),
                    q_generators: None,
                }
                .sequence()?;
                SubadditiveSequence::from_graded(&graded)
            }
            SubadditivePresentationDoc::Explicit { terms } => SubadditiveSequence::explicit(
                terms
                    .iter()
                    .map(|rows| ideal_from_rows(self.dim, rows))
                    .collect::<CoreResult<Vec<_>>>()?,
            ),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct PieceDoc {
    pub c: Vec<Rational>,
    #[serde(default = "Rational::zero")]
    pub d: Rational,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ToricPshPayload {
    pub dim: usize,
    pub pieces: Vec<PieceDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q_generators: Option<Rows>,
    /// weights at which to evaluate the Kiselman number
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Vec<Rational>>,
}

impl ToricPshPayload {
    pub fn psh(&self) -> CoreResult<ToricPsh> {
        let pieces = self
            .pieces
            .iter()
            .map(|p| Ok((vector(self.dim, &p.c)?, p.d.clone())))
            .collect::<CoreResult<Vec<_>>>()?;
        ToricPsh::new(self.dim, pieces)
    }

    pub fn q(&self) -> CoreResult<MonomialIdeal> {
        match &self.q_generators {
            Some(rows) => ideal_from_rows(self.dim, rows),
            None => Ok(MonomialIdeal::unit(self.dim)),
        }
    }

    pub fn alpha(&self) -> CoreResult<Option<MonomialValuation>> {
        match &self.alpha {
            Some(w) => Ok(Some(MonomialValuation::new(vector(self.dim, w)?)?)),
            None => Ok(None),
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum MethodDoc {
    Quadrature,
    MonteCarlo,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ExperimentPayload {
    pub phi: ToricPshPayload,
    pub method: MethodDoc,
    /// normalization; the singularity exponent when absent
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Rational>,
    /// radii to probe; a default logarithmic grid when absent
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radii: Option<Vec<f64>>,
}

impl ProblemDocument {
    pub fn from_json(text: &str) -> CoreResult<Self> {
        serde_json::from_str(text)
            .map_err(|e| CoreError::InvalidInput(format!("invalid problem document: {e}")))
    }
}

/// The envelope written to stdout: stable key order (struct order here,
/// sorted maps inside `result`), so identical inputs and seed produce
/// byte-identical output. Timing goes to stderr only.
#[derive(Clone, Debug, Serialize)]
pub struct ResultDocument {
    pub version: &'static str,
    pub operation: String,
    pub input_sha256: String,
    pub seed: u64,
    pub result: serde_json::Value,
}

impl ResultDocument {
    pub fn new(operation: &str, input: &[u8], seed: u64, result: serde_json::Value) -> Self {
        use sha2::Digest;
        let mut h = sha2::Sha256::new();
        h.update(input);
        ResultDocument {
            version: TOOL_VERSION,
            operation: operation.to_string(),
            input_sha256: format!("{:x}", h.finalize()),
            seed,
            result,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("result documents always serialize")
    }
}
