//! Measured model quality and the objective's trade-off weights.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::graph::{ModelGraph, SinkKind};

/// Pre-measured loss values for every control and task output of a graph.
/// Quality is an input to the search, not something this crate estimates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct QualityRecord {
    #[serde(default)]
    pub control_losses: BTreeMap<String, f64>,
    #[serde(default)]
    pub task_losses: BTreeMap<String, f64>,
}

impl QualityRecord {
    /// Checks the record keys match `graph`'s sinks exactly: every control
    /// sink under `control_losses`, every task sink under `task_losses`,
    /// nothing extra, and no negative losses.
    pub fn validate_for(&self, graph: &ModelGraph) -> Result<()> {
        for (sink_id, sink) in &graph.sinks {
            let table = match sink.kind {
                SinkKind::Control => &self.control_losses,
                SinkKind::Task => &self.task_losses,
            };
            if !table.contains_key(sink_id) {
                return Err(Error::QualityKeyMissing {
                    key: sink_id.clone(),
                });
            }
        }
        for (key, losses) in [
            ("control", &self.control_losses),
            ("task", &self.task_losses),
        ] {
            for (sink_id, loss) in losses {
                let matches_kind = graph.sinks.get(sink_id).map(|s| match s.kind {
                    SinkKind::Control => "control",
                    SinkKind::Task => "task",
                });
                if matches_kind != Some(key) {
                    return Err(Error::QualityKeyUnknown {
                        key: sink_id.clone(),
                    });
                }
                if !(*loss >= 0.0 && loss.is_finite()) {
                    return Err(Error::Semantic {
                        message: format!("loss for `{sink_id}` must be >= 0 and finite, got {loss}"),
                    });
                }
            }
        }
        Ok(())
    }
}

/// Scalarization weights for the joint objective:
/// total = sw_loss + gamma1 * hw_loss, with
/// hw_loss = max pair latency + gamma2 * total active power and
/// sw_loss = sum of control losses + lambda * sum of task losses.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObjectiveParams {
    pub gamma1: f64,
    pub gamma2: f64,
    pub lambda: f64,
}

impl ObjectiveParams {
    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("gamma1", self.gamma1),
            ("gamma2", self.gamma2),
            ("lambda", self.lambda),
        ] {
            if !(value >= 0.0 && value.is_finite()) {
                return Err(Error::Semantic {
                    message: format!("{name} must be >= 0 and finite, got {value}"),
                });
            }
        }
        Ok(())
    }
}

impl Default for ObjectiveParams {
    fn default() -> Self {
        ObjectiveParams {
            gamma1: 1.0,
            gamma2: 0.1,
            lambda: 0.1,
        }
    }
}
