//! Expected-cost surrogate of the hardware loss over a soft mapping, and a
//! Monte Carlo estimate of the true expectation for calibration.
//!
//! The surrogate replaces every latency with its expectation under the rows
//! and every `max` with a smooth max; the power term is the exact expected
//! active power. At exact one-hot rows with `Beta::Exact` it reproduces the
//! discrete hardware loss bit for bit.

use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;

use crate::cost::Evaluator;
use crate::error::{Error, Result};
use crate::model::graph::ModelGraph;
use crate::model::platform::Platform;
use crate::model::quality::{ObjectiveParams, QualityRecord};
use crate::relax::smooth::{smax_arg_coeffs, smooth_max_weights, Beta};
use crate::relax::SoftMapping;

/// Inner smooth-max record for one component with predecessors.
pub(crate) struct NodeTape {
    /// (predecessor component, edge index) per argument.
    pub(crate) args: Vec<(usize, usize)>,
    /// d inner_smax / d argument.
    pub(crate) coeffs: Vec<f64>,
}

pub(crate) struct ModTape {
    pub(crate) nodes: Vec<Option<NodeTape>>,
}

/// Everything the backward pass needs from one surrogate evaluation.
pub(crate) struct Tape {
    pub(crate) mods: Vec<ModTape>,
    /// (modality index, sink component) per outer argument.
    pub(crate) pairs: Vec<(usize, usize)>,
    pub(crate) pair_coeffs: Vec<f64>,
}

/// Surrogate forward pass. The arithmetic mirrors the discrete evaluator
/// shape for shape so that one-hot rows with `Beta::Exact` reproduce it
/// exactly; edit both together.
pub(crate) fn forward_with_tape(
    ev: &Evaluator,
    rows: &[Vec<f64>],
    beta: Beta,
    gamma2: f64,
) -> Result<(f64, Tape)> {
    let n = ev.n_components();
    let nd = ev.n_devices();

    let mut enode = vec![0.0; n];
    for v in 0..n {
        let mut acc = 0.0;
        for (d, &p) in rows[v].iter().enumerate().take(nd) {
            if p != 0.0 {
                acc += p * ev.lat[v][d];
            }
        }
        enode[v] = acc;
    }

    let mut eedge = vec![0.0; ev.edges.len()];
    for (e, &(u, v, volume)) in ev.edges.iter().enumerate() {
        let mut acc = 0.0;
        for d in 0..nd {
            for d2 in 0..nd {
                if d == d2 {
                    continue;
                }
                let w = rows[u][d] * rows[v][d2];
                if w != 0.0 {
                    acc += w * (volume * ev.inv_bw[d][d2] + ev.hop[d][d2]);
                }
            }
        }
        eedge[e] = acc;
    }

    let mut mods = Vec::with_capacity(ev.modality_entries.len());
    let mut pairs = Vec::new();
    let mut pair_vals = Vec::new();
    for (mi, &(_, entry)) in ev.modality_entries.iter().enumerate() {
        let reach = &ev.reachable[mi];
        let mut sdist = vec![f64::NEG_INFINITY; n];
        let mut nodes: Vec<Option<NodeTape>> = (0..n).map(|_| None).collect();
        sdist[entry] = enode[entry];
        for &v in &ev.topo {
            if v == entry || !reach[v] {
                continue;
            }
            let mut args = Vec::new();
            let mut vals = Vec::new();
            for &(u, e) in &ev.incoming[v] {
                if reach[u] {
                    args.push((u, e));
                    vals.push(sdist[u] + eedge[e]);
                }
            }
            let (s, w) = smooth_max_weights(&vals, beta)?;
            let coeffs = smax_arg_coeffs(s, &vals, &w, beta);
            sdist[v] = enode[v] + s;
            nodes[v] = Some(NodeTape { args, coeffs });
        }
        for &(_, node) in &ev.sink_nodes {
            if reach[node] {
                pairs.push((mi, node));
                pair_vals.push(sdist[node]);
            }
        }
        mods.push(ModTape { nodes });
    }
    if pair_vals.is_empty() {
        return Err(Error::NoReachablePair);
    }
    let (s_out, w_out) = smooth_max_weights(&pair_vals, beta)?;
    let pair_coeffs = smax_arg_coeffs(s_out, &pair_vals, &w_out, beta);

    let mut rpower = 0.0;
    for d in 0..nd {
        let mut prod = 1.0;
        for row in rows.iter().take(n) {
            prod *= 1.0 - row[d];
        }
        rpower += ev.power[d] * (1.0 - prod);
    }

    let value = s_out + gamma2 * rpower;
    Ok((
        value,
        Tape {
            mods,
            pairs,
            pair_coeffs,
        },
    ))
}

/// Smooth surrogate of the hardware loss at a soft mapping.
pub fn relaxed_hw_loss(
    graph: &ModelGraph,
    platform: &Platform,
    soft: &SoftMapping,
    params: &ObjectiveParams,
    beta: Beta,
) -> Result<f64> {
    params.validate()?;
    let ev = Evaluator::new(graph, platform)?;
    soft.check_axes(&ev)?;
    forward_with_tape(&ev, soft.rows(), beta, params.gamma2).map(|(v, _)| v)
}

/// Full relaxed objective `sw_loss + gamma1 * relaxed_hw_loss`.
pub fn relaxed_objective(
    graph: &ModelGraph,
    platform: &Platform,
    soft: &SoftMapping,
    quality: &QualityRecord,
    params: &ObjectiveParams,
    beta: Beta,
) -> Result<f64> {
    quality.validate_for(graph)?;
    let hw = relaxed_hw_loss(graph, platform, soft, params, beta)?;
    Ok(crate::cost::sw_loss(quality, params) + params.gamma1 * hw)
}

/// Monte Carlo estimate of the expected discrete hardware loss under the
/// soft mapping: (mean, standard error). Rows are sampled independently.
pub fn mc_hw_loss(
    graph: &ModelGraph,
    platform: &Platform,
    soft: &SoftMapping,
    params: &ObjectiveParams,
    n_samples: usize,
    rng: &mut impl Rng,
) -> Result<(f64, f64)> {
    if n_samples == 0 {
        return Err(Error::ZeroSamples);
    }
    params.validate()?;
    let ev = Evaluator::new(graph, platform)?;
    soft.check_axes(&ev)?;
    let choosers: Vec<WeightedIndex<f64>> = soft
        .rows()
        .iter()
        .map(|row| {
            WeightedIndex::new(row.iter().copied()).map_err(|e| Error::Semantic {
                message: format!("soft mapping row is not sampleable: {e}"),
            })
        })
        .collect::<Result<_>>()?;

    let mut assign = vec![0usize; ev.n_components()];
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..n_samples {
        for (v, chooser) in choosers.iter().enumerate() {
            assign[v] = chooser.sample(rng);
        }
        let x = ev.hw_value(&assign, params.gamma2)?;
        sum += x;
        sum_sq += x * x;
    }
    let n = n_samples as f64;
    let mean = sum / n;
    let se = if n_samples == 1 {
        0.0
    } else {
        let var = ((sum_sq - n * mean * mean) / (n - 1.0)).max(0.0);
        (var / n).sqrt()
    };
    Ok((mean, se))
}
