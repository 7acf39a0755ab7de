//! Analytic gradients of the relaxed objective with respect to row logits,
//! by reverse sweep over the surrogate tape, plus a pathwise Monte Carlo
//! gradient through Gumbel-softmax samples.

use rand::Rng;

use crate::cost::Evaluator;
use crate::error::{Error, Result};
use crate::model::graph::ModelGraph;
use crate::model::platform::Platform;
use crate::model::quality::{ObjectiveParams, QualityRecord};
use crate::relax::gumbel::{gumbel, softmax};
use crate::relax::smooth::Beta;
use crate::relax::surrogate::forward_with_tape;
use crate::relax::SoftMapping;

/// d surrogate / d rows, via one reverse sweep per modality.
fn backward_phi(
    ev: &Evaluator,
    rows: &[Vec<f64>],
    tape: &crate::relax::surrogate::Tape,
    gamma2: f64,
) -> Vec<Vec<f64>> {
    let n = ev.n_components();
    let nd = ev.n_devices();
    let mut g_enode = vec![0.0; n];
    let mut g_eedge = vec![0.0; ev.edges.len()];

    for (mi, mt) in tape.mods.iter().enumerate() {
        let mut dbar = vec![0.0; n];
        for (pi, &(pmi, node)) in tape.pairs.iter().enumerate() {
            if pmi == mi {
                dbar[node] += tape.pair_coeffs[pi];
            }
        }
        for &v in ev.topo.iter().rev() {
            if dbar[v] == 0.0 {
                continue;
            }
            g_enode[v] += dbar[v];
            if let Some(nt) = &mt.nodes[v] {
                for (&(u, e), &c) in nt.args.iter().zip(&nt.coeffs) {
                    let contribution = dbar[v] * c;
                    dbar[u] += contribution;
                    g_eedge[e] += contribution;
                }
            }
        }
    }

    let mut g = vec![vec![0.0; nd]; n];
    for v in 0..n {
        if g_enode[v] != 0.0 {
            for (d, gd) in g[v].iter_mut().enumerate() {
                *gd += g_enode[v] * ev.lat[v][d];
            }
        }
    }
    for (e, &(u, v, volume)) in ev.edges.iter().enumerate() {
        if g_eedge[e] == 0.0 {
            continue;
        }
        for d in 0..nd {
            for d2 in 0..nd {
                if d == d2 {
                    continue;
                }
                let cost = volume * ev.inv_bw[d][d2] + ev.hop[d][d2];
                g[u][d] += g_eedge[e] * rows[v][d2] * cost;
                g[v][d2] += g_eedge[e] * rows[u][d] * cost;
            }
        }
    }

    // Expected power is multilinear: d/d rows[v][d] = prod of the other
    // components' miss probabilities on d.
    let mut prefix = vec![0.0; n + 1];
    let mut suffix = vec![0.0; n + 1];
    for d in 0..nd {
        prefix[0] = 1.0;
        for v in 0..n {
            prefix[v + 1] = prefix[v] * (1.0 - rows[v][d]);
        }
        suffix[n] = 1.0;
        for v in (0..n).rev() {
            suffix[v] = suffix[v + 1] * (1.0 - rows[v][d]);
        }
        let pw = gamma2 * ev.power[d];
        for v in 0..n {
            g[v][d] += pw * prefix[v] * suffix[v + 1];
        }
    }

    g
}

/// Surrogate hardware loss and its gradient with respect to the row logits
/// of `rows = softmax(logits)`. The softmax chain rule only needs the rows.
pub(crate) fn surrogate_hw_grad(
    ev: &Evaluator,
    rows: &[Vec<f64>],
    beta: Beta,
    gamma2: f64,
) -> Result<(f64, Vec<Vec<f64>>)> {
    let (value, tape) = forward_with_tape(ev, rows, beta, gamma2)?;
    let g_phi = backward_phi(ev, rows, &tape, gamma2);
    Ok((value, logit_grad(rows, &g_phi)))
}

/// Chain rule through a row-wise softmax: rows .* (g - <rows, g>).
fn logit_grad(rows: &[Vec<f64>], g_phi: &[Vec<f64>]) -> Vec<Vec<f64>> {
    rows.iter()
        .zip(g_phi)
        .map(|(row, g)| {
            let dot: f64 = row.iter().zip(g).map(|(&p, &x)| p * x).sum();
            row.iter().zip(g).map(|(&p, &x)| p * (x - dot)).collect()
        })
        .collect()
}

/// Value and gradient of the relaxed objective at `soft`, with respect to
/// the logits whose softmax equals the soft mapping's rows.
pub fn grad_relaxed_objective(
    graph: &ModelGraph,
    platform: &Platform,
    soft: &SoftMapping,
    quality: &QualityRecord,
    params: &ObjectiveParams,
    beta: Beta,
) -> Result<(f64, Vec<Vec<f64>>)> {
    params.validate()?;
    quality.validate_for(graph)?;
    let ev = Evaluator::new(graph, platform)?;
    soft.check_axes(&ev)?;
    let (hw, g_hw) = surrogate_hw_grad(&ev, soft.rows(), beta, params.gamma2)?;
    let value = crate::cost::sw_loss(quality, params) + params.gamma1 * hw;
    let grad: Vec<Vec<f64>> = g_hw
        .iter()
        .map(|row| row.iter().map(|&g| params.gamma1 * g).collect())
        .collect();
    if !value.is_finite() || grad.iter().flatten().any(|g| !g.is_finite()) {
        return Err(Error::NonFinite {
            context: "relaxed objective gradient".to_string(),
        });
    }
    Ok((value, grad))
}

/// Pathwise Monte Carlo estimate of the expected surrogate under
/// Gumbel-softmax samples `y = softmax((logits + G) / tau)`, and its exact
/// gradient with respect to the logits for those same draws.
pub(crate) fn mc_hw_grad(
    ev: &Evaluator,
    logits: &[Vec<f64>],
    tau: f64,
    beta: Beta,
    gamma2: f64,
    n_samples: usize,
    rng: &mut impl Rng,
) -> Result<(f64, Vec<Vec<f64>>)> {
    if n_samples == 0 {
        return Err(Error::ZeroSamples);
    }
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(Error::Semantic {
            message: format!("temperature must be positive and finite, got {tau}"),
        });
    }
    let n = ev.n_components();
    let nd = ev.n_devices();
    let mut value = 0.0;
    let mut grad = vec![vec![0.0; nd]; n];
    let mut y = vec![vec![0.0; nd]; n];
    for _ in 0..n_samples {
        for v in 0..n {
            let scores: Vec<f64> = logits[v]
                .iter()
                .map(|&z| (z + gumbel(rng)) / tau)
                .collect();
            y[v] = softmax(&scores);
        }
        let (hw, tape) = forward_with_tape(ev, &y, beta, gamma2)?;
        value += hw;
        let g_y = backward_phi(ev, &y, &tape, gamma2);
        for v in 0..n {
            let dot: f64 = y[v].iter().zip(&g_y[v]).map(|(&p, &g)| p * g).sum();
            for d in 0..nd {
                grad[v][d] += y[v][d] * (g_y[v][d] - dot) / tau;
            }
        }
    }
    let scale = 1.0 / n_samples as f64;
    value *= scale;
    for row in &mut grad {
        for g in row.iter_mut() {
            *g *= scale;
        }
    }
    if !value.is_finite() || grad.iter().flatten().any(|g| !g.is_finite()) {
        return Err(Error::NonFinite {
            context: "pathwise gradient".to_string(),
        });
    }
    Ok((value, grad))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::relax::surrogate::relaxed_objective;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_logits(n: usize, nd: usize, seed: u64) -> Vec<Vec<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| (0..nd).map(|_| rng.gen_range(-1.5..1.5)).collect())
            .collect()
    }

    #[test]
    fn analytic_gradient_matches_central_differences() {
        let (graph, platform, quality, params) = fixtures::toy2x2();
        let h = 1e-5;
        for beta in [Beta::Finite(0.5), Beta::Finite(5.0)] {
            let logits = random_logits(5, 2, 17);
            let soft = SoftMapping::from_logits(&graph, &platform, &logits).unwrap();
            let (value, grad) =
                grad_relaxed_objective(&graph, &platform, &soft, &quality, &params, beta)
                    .unwrap();
            assert_eq!(
                value,
                relaxed_objective(&graph, &platform, &soft, &quality, &params, beta).unwrap()
            );
            for v in 0..5 {
                for d in 0..2 {
                    let eval_at = |delta: f64| {
                        let mut z = logits.clone();
                        z[v][d] += delta;
                        let s = SoftMapping::from_logits(&graph, &platform, &z).unwrap();
                        relaxed_objective(&graph, &platform, &s, &quality, &params, beta)
                            .unwrap()
                    };
                    let fd = (eval_at(h) - eval_at(-h)) / (2.0 * h);
                    let denom = grad[v][d].abs().max(1.0);
                    assert!(
                        (grad[v][d] - fd).abs() / denom < 1e-4,
                        "{beta} logit ({v},{d}): analytic {} vs fd {fd}",
                        grad[v][d]
                    );
                }
            }
        }
    }

    #[test]
    fn exact_sharpness_gradient_matches_differences_away_from_ties() {
        let (graph, platform, quality, params) = fixtures::toy2x2();
        let logits = random_logits(5, 2, 23);
        let soft = SoftMapping::from_logits(&graph, &platform, &logits).unwrap();
        let (_, grad) =
            grad_relaxed_objective(&graph, &platform, &soft, &quality, &params, Beta::Exact)
                .unwrap();
        let h = 1e-6;
        for v in 0..5 {
            for d in 0..2 {
                let eval_at = |delta: f64| {
                    let mut z = logits.clone();
                    z[v][d] += delta;
                    let s = SoftMapping::from_logits(&graph, &platform, &z).unwrap();
                    relaxed_objective(&graph, &platform, &s, &quality, &params, Beta::Exact)
                        .unwrap()
                };
                let fd = (eval_at(h) - eval_at(-h)) / (2.0 * h);
                let denom = grad[v][d].abs().max(1.0);
                assert!(
                    (grad[v][d] - fd).abs() / denom < 1e-3,
                    "logit ({v},{d}): analytic {} vs fd {fd}",
                    grad[v][d]
                );
            }
        }
    }

    #[test]
    fn gradient_vanishes_at_exact_one_hot() {
        // Softmax saturates at a vertex: every logit direction is flat.
        let (graph, platform, quality, params) = fixtures::toy2x2();
        let mapping = graph
            .components
            .iter()
            .map(|c| (c.id.clone(), "d0".to_string()))
            .collect();
        let soft = SoftMapping::one_hot(&graph, &platform, &mapping).unwrap();
        let (_, grad) =
            grad_relaxed_objective(&graph, &platform, &soft, &quality, &params, Beta::Finite(5.0))
                .unwrap();
        assert!(grad.iter().flatten().all(|&g| g == 0.0), "{grad:?}");
    }

    #[test]
    fn gamma1_scales_the_gradient_linearly() {
        let (graph, platform, quality, params) = fixtures::toy2x2();
        let logits = random_logits(5, 2, 31);
        let soft = SoftMapping::from_logits(&graph, &platform, &logits).unwrap();
        let g1 = grad_relaxed_objective(&graph, &platform, &soft, &quality, &params, Beta::Finite(2.0))
            .unwrap()
            .1;
        let heavy = ObjectiveParams {
            gamma1: 10.0,
            ..params
        };
        let g10 =
            grad_relaxed_objective(&graph, &platform, &soft, &quality, &heavy, Beta::Finite(2.0))
                .unwrap()
                .1;
        for (a, b) in g1.iter().flatten().zip(g10.iter().flatten()) {
            assert!((10.0 * a - b).abs() < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn pathwise_gradient_differentiates_its_own_estimator() {
        // With common random numbers the estimator is a deterministic smooth
        // function of the logits, so central differences must agree.
        let (graph, platform, _, _) = fixtures::toy2x2();
        let ev = Evaluator::new(&graph, &platform).unwrap();
        let logits = random_logits(5, 2, 41);
        let beta = Beta::Finite(4.0);
        let (tau, gamma2, n) = (0.8, 0.1, 3);
        let run = |z: &[Vec<f64>]| {
            let mut rng = ChaCha8Rng::seed_from_u64(99);
            mc_hw_grad(&ev, z, tau, beta, gamma2, n, &mut rng).unwrap()
        };
        let (_, grad) = run(&logits);
        let h = 1e-5;
        for v in 0..5 {
            for d in 0..2 {
                let eval_at = |delta: f64| {
                    let mut z = logits.clone();
                    z[v][d] += delta;
                    run(&z).0
                };
                let fd = (eval_at(h) - eval_at(-h)) / (2.0 * h);
                let denom = grad[v][d].abs().max(1.0);
                assert!(
                    (grad[v][d] - fd).abs() / denom < 1e-4,
                    "logit ({v},{d}): analytic {} vs fd {fd}",
                    grad[v][d]
                );
            }
        }
    }

    #[test]
    fn pathwise_gradient_requires_samples() {
        let (graph, platform, _, _) = fixtures::toy2x2();
        let ev = Evaluator::new(&graph, &platform).unwrap();
        let logits = random_logits(5, 2, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(matches!(
            mc_hw_grad(&ev, &logits, 0.8, Beta::Finite(1.0), 0.1, 0, &mut rng),
            Err(Error::ZeroSamples)
        ));
    }
}
