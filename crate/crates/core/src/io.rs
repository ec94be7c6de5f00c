//! JSON file formats for models and permutation groups.
//!
//! Model files look like
//!
//! ```json
//! {"kind": "qubo", "n": 2, "offset": "1", "linear": ["-1", "-1"],
//!  "quadratic": [{"i": 0, "j": 1, "value": "2"}]}
//! ```
//!
//! with every rational written as a lowest-terms `p/q` string. Quadratic
//! entries need `i < j < n`; zero values are accepted on read and never
//! written. Group files are `{"n": 4, "generators": [[1, 0, 2, 3]]}` in
//! one-line notation, with `"S_n"` in place of the list (or as the whole
//! document) meaning the full symmetric group. Bounds files are
//! `{"kind": "qubo", "B": "1", "C": "4"}` or
//! `{"kind": "ising", "h_min": "1", "h_max": "10", "J_max": "1"}`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analysis::{AnalysisError, PermutationGroup};
use crate::builders::CoefficientBounds;
use crate::model::{Coefficients, IsingModel, Model, ModelError, ModelKind, PenaltyModel, Qubo};
use crate::rational::Rational;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid model: {0}")]
    Model(#[from] ModelError),
    #[error("invalid group: {0}")]
    Group(#[from] AnalysisError),
    #[error("invalid group: {0}")]
    GroupShape(String),
}

/// How external Ising files map spins to bits. Internally bit 1 is spin +1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SpinConvention {
    /// Bit 1 is spin +1.
    #[default]
    Plus,
    /// Bit 1 is spin -1; biases change sign, couplings do not.
    Minus,
}

impl SpinConvention {
    /// Maps a model between this convention and the internal one. The map is
    /// its own inverse, so it serves for both import and export.
    pub fn translate(self, model: Model) -> Model {
        match (self, model) {
            (SpinConvention::Minus, Model::Ising(m)) => {
                let c = m.coefficients();
                let flipped = Coefficients::new(
                    c.n(),
                    c.offset().clone(),
                    c.linear().iter().map(|h| -h).collect(),
                    c.quadratic().iter().map(|(&p, v)| (p, v.clone())),
                )
                .expect("shape preserved");
                Model::Ising(IsingModel::from_coefficients(flipped))
            }
            (_, model) => model,
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelRepr {
    kind: ModelKind,
    n: usize,
    offset: Rational,
    linear: Vec<Rational>,
    quadratic: Vec<TermRepr>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermRepr {
    i: usize,
    j: usize,
    value: Rational,
}

pub fn parse_model(text: &str, convention: SpinConvention) -> Result<Model, FormatError> {
    let repr: ModelRepr = serde_json::from_str(text)?;
    let coefficients = Coefficients::new(
        repr.n,
        repr.offset,
        repr.linear,
        repr.quadratic.into_iter().map(|t| ((t.i, t.j), t.value)),
    )?;
    let model = match repr.kind {
        ModelKind::Qubo => Model::Qubo(Qubo::from_coefficients(coefficients)),
        ModelKind::Ising => Model::Ising(IsingModel::from_coefficients(coefficients)),
    };
    Ok(convention.translate(model))
}

/// Canonical text of a model file (pretty JSON, trailing newline).
pub fn render_model(model: &Model, convention: SpinConvention) -> String {
    let model = convention.translate(model.clone());
    let c = model.coefficients();
    let repr = ModelRepr {
        kind: model.kind(),
        n: c.n(),
        offset: c.offset().clone(),
        linear: c.linear().to_vec(),
        quadratic: c
            .quadratic()
            .iter()
            .map(|(&(i, j), value)| TermRepr {
                i,
                j,
                value: value.clone(),
            })
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&repr).expect("model serializes");
    text.push('\n');
    text
}

pub fn parse_bounds(text: &str) -> Result<CoefficientBounds, FormatError> {
    Ok(serde_json::from_str(text)?)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum GroupRepr {
    Shorthand(String),
    Explicit { n: usize, generators: Generators },
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Generators {
    Shorthand(String),
    List(Vec<Vec<usize>>),
}

fn is_symmetric_shorthand(text: &str) -> bool {
    text == "S_n"
}

/// Reads a group file; the bare `"S_n"` document takes its degree from
/// `degree_hint`.
pub fn parse_group(text: &str, degree_hint: usize) -> Result<PermutationGroup, FormatError> {
    match serde_json::from_str::<GroupRepr>(text)? {
        GroupRepr::Shorthand(s) if is_symmetric_shorthand(&s) => {
            Ok(PermutationGroup::symmetric(degree_hint))
        }
        GroupRepr::Explicit {
            n,
            generators: Generators::Shorthand(s),
        } if is_symmetric_shorthand(&s) => Ok(PermutationGroup::symmetric(n)),
        GroupRepr::Explicit {
            n,
            generators: Generators::List(list),
        } => Ok(PermutationGroup::from_generators(n, list)?),
        GroupRepr::Shorthand(s)
        | GroupRepr::Explicit {
            generators: Generators::Shorthand(s),
            ..
        } => Err(FormatError::GroupShape(format!(
            "unknown group shorthand {s:?} (expected \"S_n\")"
        ))),
    }
}

pub fn render_group(group: &PermutationGroup) -> String {
    let value = if group.is_full_symmetric() && group.degree() > 1 {
        serde_json::json!({"n": group.degree(), "generators": "S_n"})
    } else {
        let generators: Vec<&[usize]> = group.generators().iter().map(|g| g.images()).collect();
        serde_json::json!({"n": group.degree(), "generators": generators})
    };
    let mut text = serde_json::to_string(&value).expect("group serializes");
    text.push('\n');
    text
}
