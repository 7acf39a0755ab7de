//! The problem document format: one JSON file carrying either a fixed model
//! with its quality record or an architecture space, plus the platform and
//! objective weights.
//!
//! Parsing reports problems in three grades: `Syntax` for malformed JSON,
//! `Schema` for well-formed JSON that violates the shape or bounds of a
//! section, and `Semantic` for documents whose sections disagree.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::arch::ArchitectureSpace;
use crate::model::graph::{validate_graph, ModelGraph};
use crate::model::mapping::Mapping;
use crate::model::platform::Platform;
use crate::model::quality::{ObjectiveParams, QualityRecord};
use crate::optim::{Problem, ProblemInstance};

/// On-disk shape of a problem file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelGraph>,
    pub platform: Platform,
    #[serde(default)]
    pub objective: ObjectiveParams,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quality: Option<QualityRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub architecture_space: Option<ArchitectureSpace>,
}

pub(crate) fn classify_json(e: serde_json::Error, section: &str) -> Error {
    match e.classify() {
        serde_json::error::Category::Data => Error::Schema {
            location: format!("{section} (line {}, column {})", e.line(), e.column()),
            message: e.to_string(),
        },
        _ => Error::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        },
    }
}

/// Parses and fully validates a problem document.
pub fn parse_problem(text: &str) -> Result<Problem> {
    let doc: ProblemDoc =
        serde_json::from_str(text).map_err(|e| classify_json(e, "problem document"))?;
    problem_of(doc)
}

/// Validates a parsed document and assembles the problem.
pub fn problem_of(doc: ProblemDoc) -> Result<Problem> {
    let platform_issues = doc.platform.validate();
    if !platform_issues.is_empty() {
        return Err(Error::Schema {
            location: "platform".to_string(),
            message: platform_issues.join("; "),
        });
    }
    if let Err(e) = doc.objective.validate() {
        return Err(Error::Schema {
            location: "objective".to_string(),
            message: e.to_string(),
        });
    }

    match (doc.model, doc.quality, doc.architecture_space) {
        (Some(_), _, Some(_)) => Err(Error::Semantic {
            message: "provide either `model` with `quality` or `architecture_space`, not both"
                .to_string(),
        }),
        (None, _, None) => Err(Error::Semantic {
            message: "provide either `model` with `quality` or `architecture_space`".to_string(),
        }),
        (Some(model), quality, None) => {
            let report = validate_graph(&model);
            if !report.is_ok() {
                return Err(Error::Schema {
                    location: "model".to_string(),
                    message: report
                        .violations
                        .iter()
                        .map(|v| v.to_string())
                        .collect::<Vec<_>>()
                        .join("; "),
                });
            }
            let quality = quality.ok_or_else(|| Error::Semantic {
                message: "a fixed `model` requires a `quality` record".to_string(),
            })?;
            Problem::fixed(model, quality, doc.platform, doc.objective)
        }
        (None, quality, Some(space)) => {
            if quality.is_some() {
                return Err(Error::Semantic {
                    message: "an `architecture_space` carries per-variant quality; drop the \
                              top-level `quality` record"
                        .to_string(),
                });
            }
            let issues = space.validate();
            if !issues.is_empty() {
                return Err(Error::Schema {
                    location: "architecture_space".to_string(),
                    message: issues.join("; "),
                });
            }
            Problem::over_space(space, doc.platform, doc.objective)
        }
    }
}

/// Document form of a problem, for serialization.
pub fn doc_of(problem: &Problem) -> ProblemDoc {
    match &problem.instance {
        ProblemInstance::Fixed { graph, quality } => ProblemDoc {
            model: Some(graph.clone()),
            platform: problem.platform.clone(),
            objective: problem.params,
            quality: Some(quality.clone()),
            architecture_space: None,
        },
        ProblemInstance::Space(space) => ProblemDoc {
            model: None,
            platform: problem.platform.clone(),
            objective: problem.params,
            quality: None,
            architecture_space: Some(space.clone()),
        },
    }
}

/// Pretty JSON for a problem; parsing it back yields an equal problem.
pub fn serialize_problem(problem: &Problem) -> String {
    let mut text = serde_json::to_string_pretty(&doc_of(problem)).expect("problem docs serialize");
    text.push('\n');
    text
}

pub fn parse_problem_file(path: &Path) -> Result<Problem> {
    parse_problem(&std::fs::read_to_string(path)?)
}

/// Parses a mapping file: a bare `{"component": "device"}` object.
pub fn parse_mapping(text: &str) -> Result<Mapping> {
    serde_json::from_str(text).map_err(|e| classify_json(e, "mapping"))
}

pub fn parse_mapping_file(path: &Path) -> Result<Mapping> {
    parse_mapping(&std::fs::read_to_string(path)?)
}
