//! Continuous relaxation of the discrete mapping problem: soft mappings,
//! smooth maxima, Gumbel-softmax sampling, the expected-cost surrogate, and
//! its analytic gradient.

mod grad;
mod gumbel;
mod smooth;
mod surrogate;

pub use grad::grad_relaxed_objective;
pub(crate) use grad::{mc_hw_grad, surrogate_hw_grad};
pub use gumbel::{gumbel_softmax_sample, LOG_PROB_FLOOR};
pub(crate) use gumbel::softmax;
pub use smooth::{smooth_max, Beta};
pub use surrogate::{mc_hw_loss, relaxed_hw_loss, relaxed_objective};

use crate::cost::Evaluator;
use crate::error::{Error, Result};
use crate::model::graph::ModelGraph;
use crate::model::mapping::Mapping;
use crate::model::platform::Platform;

/// A point in the relaxed mapping space: one probability row over devices per
/// component. Components and devices are kept in ascending id order, the same
/// order every evaluator and solver in this crate uses.
#[derive(Debug, Clone, PartialEq)]
pub struct SoftMapping {
    components: Vec<String>,
    devices: Vec<String>,
    rows: Vec<Vec<f64>>,
}

impl SoftMapping {
    /// Uniform rows: every component equally likely on every device.
    pub fn uniform(graph: &ModelGraph, platform: &Platform) -> Self {
        let (components, devices) = id_axes(graph, platform);
        let p = 1.0 / devices.len() as f64;
        let rows = vec![vec![p; devices.len()]; components.len()];
        SoftMapping {
            components,
            devices,
            rows,
        }
    }

    /// Exact one-hot rows matching a discrete mapping.
    pub fn one_hot(graph: &ModelGraph, platform: &Platform, mapping: &Mapping) -> Result<Self> {
        let (components, devices) = id_axes(graph, platform);
        let rows = components
            .iter()
            .map(|c| {
                let device = mapping
                    .device_of(c)
                    .ok_or_else(|| Error::UnmappedComponent { id: c.clone() })?;
                let d = devices
                    .iter()
                    .position(|x| x == device)
                    .ok_or_else(|| Error::UnknownDevice {
                        id: device.to_string(),
                    })?;
                let mut row = vec![0.0; devices.len()];
                row[d] = 1.0;
                Ok(row)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SoftMapping {
            components,
            devices,
            rows,
        })
    }

    /// Rows given directly; each must be a finite probability vector.
    pub fn from_rows(graph: &ModelGraph, platform: &Platform, rows: Vec<Vec<f64>>) -> Result<Self> {
        let (components, devices) = id_axes(graph, platform);
        check_shape(&rows, components.len(), devices.len())?;
        for (i, row) in rows.iter().enumerate() {
            let mut sum = 0.0;
            for &p in row {
                if !(p >= 0.0 && p.is_finite()) {
                    return Err(Error::NonFinite {
                        context: format!("soft mapping row for `{}`", components[i]),
                    });
                }
                sum += p;
            }
            if (sum - 1.0).abs() > 1e-9 {
                return Err(Error::Semantic {
                    message: format!(
                        "soft mapping row for `{}` sums to {sum}, expected 1",
                        components[i]
                    ),
                });
            }
        }
        Ok(SoftMapping {
            components,
            devices,
            rows,
        })
    }

    /// Rows from unnormalized logits via a row-wise softmax.
    pub fn from_logits(
        graph: &ModelGraph,
        platform: &Platform,
        logits: &[Vec<f64>],
    ) -> Result<Self> {
        let (components, devices) = id_axes(graph, platform);
        check_shape(logits, components.len(), devices.len())?;
        for (i, row) in logits.iter().enumerate() {
            if row.iter().any(|z| !z.is_finite()) {
                return Err(Error::NonFinite {
                    context: format!("soft mapping logits for `{}`", components[i]),
                });
            }
        }
        let rows = logits.iter().map(|z| softmax(z)).collect();
        Ok(SoftMapping {
            components,
            devices,
            rows,
        })
    }

    /// Component ids in row order.
    pub fn components(&self) -> &[String] {
        &self.components
    }

    /// Device ids in column order.
    pub fn devices(&self) -> &[String] {
        &self.devices
    }

    /// Probability rows, `rows()[component][device]`.
    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    /// Hardens each row to its most likely device; ties pick the first.
    pub fn argmax_mapping(&self) -> Mapping {
        self.components
            .iter()
            .zip(&self.rows)
            .map(|(c, row)| {
                let mut best = 0;
                for (d, &p) in row.iter().enumerate().skip(1) {
                    if p > row[best] {
                        best = d;
                    }
                }
                (c.clone(), self.devices[best].clone())
            })
            .collect()
    }

    /// One Gumbel-softmax draw per row.
    pub fn sample(&self, tau: f64, rng: &mut impl rand::Rng) -> Result<Vec<Vec<f64>>> {
        self.rows
            .iter()
            .map(|row| gumbel_softmax_sample(row, tau, rng))
            .collect()
    }

    /// Consistency with an evaluator built from the same graph and platform.
    pub(crate) fn check_axes(&self, ev: &Evaluator) -> Result<()> {
        if self.components != ev.comp_ids {
            return Err(Error::Semantic {
                message: "soft mapping components disagree with the model graph".to_string(),
            });
        }
        if self.devices != ev.dev_ids {
            return Err(Error::Semantic {
                message: "soft mapping devices disagree with the platform".to_string(),
            });
        }
        Ok(())
    }
}

fn id_axes(graph: &ModelGraph, platform: &Platform) -> (Vec<String>, Vec<String>) {
    let mut components: Vec<String> = graph.components.iter().map(|c| c.id.clone()).collect();
    components.sort();
    let mut devices: Vec<String> = platform.devices.iter().map(|d| d.id.clone()).collect();
    devices.sort();
    (components, devices)
}

fn check_shape(rows: &[Vec<f64>], n_comp: usize, n_dev: usize) -> Result<()> {
    if rows.len() != n_comp || rows.iter().any(|r| r.len() != n_dev) {
        return Err(Error::Semantic {
            message: format!(
                "soft mapping must be {n_comp} rows of {n_dev} entries, got {} rows",
                rows.len()
            ),
        });
    }
    Ok(())
}
