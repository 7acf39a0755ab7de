//! Joint search over architecture variants and mappings: either enumerate
//! the variants with an inner mapping solver, or relax both choices and
//! descend on the expected objective.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cost::{sw_loss, total_objective, Evaluator};
use crate::error::{Error, Result};
use crate::model::arch::apply_architecture;
use crate::optim::{
    brute_force, evolutionary, gaussian, gradient_descent_relaxed, simulated_annealing,
    AnnealConfig, BruteConfig, EvolveConfig, GdConfig, Problem, SolveResult, TrajectoryPoint,
};
use crate::relax::{softmax, surrogate_hw_grad, Beta};

/// Mapping solver run per variant in enumeration mode.
#[derive(Debug, Clone, PartialEq)]
pub enum InnerSolver {
    Brute(BruteConfig),
    Anneal(AnnealConfig),
    Evolve(EvolveConfig),
    Grad(GdConfig),
}

impl InnerSolver {
    /// Re-seeds seeded solvers so each variant gets its own stream.
    fn with_seed_offset(&self, offset: u64) -> InnerSolver {
        match self {
            InnerSolver::Brute(c) => InnerSolver::Brute(*c),
            InnerSolver::Anneal(c) => InnerSolver::Anneal(AnnealConfig {
                seed: c.seed.wrapping_add(offset),
                ..*c
            }),
            InnerSolver::Evolve(c) => InnerSolver::Evolve(EvolveConfig {
                seed: c.seed.wrapping_add(offset),
                ..*c
            }),
            InnerSolver::Grad(c) => InnerSolver::Grad(GdConfig {
                seed: c.seed.wrapping_add(offset),
                ..*c
            }),
        }
    }

    fn solve(&self, problem: &Problem) -> Result<SolveResult> {
        match self {
            InnerSolver::Brute(c) => brute_force(problem, c),
            InnerSolver::Anneal(c) => simulated_annealing(problem, c),
            InnerSolver::Evolve(c) => evolutionary(problem, c),
            InnerSolver::Grad(c) => gradient_descent_relaxed(problem, c),
        }
    }

    fn seed(&self) -> Option<u64> {
        match self {
            InnerSolver::Brute(_) => None,
            InnerSolver::Anneal(c) => Some(c.seed),
            InnerSolver::Evolve(c) => Some(c.seed),
            InnerSolver::Grad(c) => Some(c.seed),
        }
    }
}

/// Relaxes the variant choice and all mapping rows together and descends on
/// the expected relaxed objective.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointConfig {
    pub steps: u64,
    pub learning_rate: f64,
    pub restarts: u32,
    pub beta_start: f64,
    pub beta_end: f64,
    pub jitter: f64,
    pub seed: u64,
}

impl Default for JointConfig {
    fn default() -> Self {
        JointConfig {
            steps: 300,
            learning_rate: 0.3,
            restarts: 3,
            beta_start: 1.0,
            beta_end: 50.0,
            jitter: 0.01,
            seed: 0,
        }
    }
}

impl JointConfig {
    fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        if self.steps == 0 {
            problems.push("steps must be at least 1".to_string());
        }
        if self.restarts == 0 {
            problems.push("restarts must be at least 1".to_string());
        }
        if !(self.learning_rate >= 0.0 && self.learning_rate.is_finite()) {
            problems.push(format!("learning_rate must be >= 0, got {}", self.learning_rate));
        }
        for (name, v) in [("beta_start", self.beta_start), ("beta_end", self.beta_end)] {
            if !(v > 0.0 && v.is_finite()) {
                problems.push(format!("{name} must be > 0, got {v}"));
            }
        }
        if !(self.jitter >= 0.0 && self.jitter.is_finite()) {
            problems.push(format!("jitter must be >= 0, got {}", self.jitter));
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::Semantic {
                message: problems.join("; "),
            })
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CosearchMode {
    Enumerate(InnerSolver),
    Joint(JointConfig),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CosearchConfig {
    /// Refuse to search spaces with more variants than this.
    pub variant_cap: u128,
    pub mode: CosearchMode,
}

impl Default for CosearchConfig {
    fn default() -> Self {
        CosearchConfig {
            variant_cap: 1000,
            mode: CosearchMode::Enumerate(InnerSolver::Brute(BruteConfig::default())),
        }
    }
}

pub fn co_search(problem: &Problem, config: &CosearchConfig) -> Result<SolveResult> {
    let space = problem.space()?;
    let count = space.variant_count();
    if count > config.variant_cap {
        return Err(Error::VariantCapExceeded {
            count,
            cap: config.variant_cap,
        });
    }
    match &config.mode {
        CosearchMode::Enumerate(inner) => enumerate(problem, inner),
        CosearchMode::Joint(joint) => joint_descent(problem, joint),
    }
}

fn enumerate(problem: &Problem, inner: &InnerSolver) -> Result<SolveResult> {
    let start = Instant::now();
    let space = problem.space()?;
    let mut best: Option<(SolveResult, Vec<usize>)> = None;
    let mut evaluations = 0u64;
    let mut trajectory = Vec::new();
    let mut diagnostics = Vec::new();

    for (vi, alpha) in space.alphas().into_iter().enumerate() {
        let (graph, quality) = apply_architecture(space, &alpha)?;
        let sub = Problem::fixed(
            graph,
            quality,
            problem.platform.clone(),
            problem.params,
        )?;
        let result = inner.with_seed_offset(vi as u64).solve(&sub)?;
        evaluations += result.evaluations;
        diagnostics.extend(result.diagnostics.iter().cloned());
        let improved = best
            .as_ref()
            .map(|(b, _)| result.objective < b.objective)
            .unwrap_or(true);
        if improved {
            best = Some((result, alpha));
        }
        trajectory.push(TrajectoryPoint {
            iteration: evaluations,
            best_objective: best.as_ref().map(|(b, _)| b.objective).unwrap(),
            relaxed_objective: None,
        });
    }

    let (winner, alpha) = best.expect("validated spaces have at least one variant");
    let labels = space.choice_labels(&alpha)?;
    Ok(SolveResult {
        method: "cosearch-enum".to_string(),
        mapping: winner.mapping,
        alpha: Some(alpha),
        alpha_labels: Some(labels),
        objective: winner.objective,
        breakdown: winner.breakdown,
        evaluations,
        wall_time_s: start.elapsed().as_secs_f64(),
        trajectory,
        seed: inner.seed(),
        diagnostics,
    })
}

struct VariantCtx {
    alpha: Vec<usize>,
    graph: crate::model::graph::ModelGraph,
    quality: crate::model::quality::QualityRecord,
    ev: Evaluator,
    sw: f64,
    /// Union row index per local component row.
    sel: Vec<usize>,
}

fn joint_descent(problem: &Problem, config: &JointConfig) -> Result<SolveResult> {
    config.validate()?;
    let start = Instant::now();
    let space = problem.space()?;
    let params = &problem.params;

    let mut variants = Vec::new();
    let mut union: BTreeMap<String, usize> = BTreeMap::new();
    for alpha in space.alphas() {
        let (graph, quality) = apply_architecture(space, &alpha)?;
        let ev = Evaluator::new(&graph, &problem.platform)?;
        for id in &ev.comp_ids {
            let next = union.len();
            union.entry(id.clone()).or_insert(next);
        }
        let sw = sw_loss(&quality, params);
        variants.push((alpha, graph, quality, ev, sw));
    }
    let variants: Vec<VariantCtx> = variants
        .into_iter()
        .map(|(alpha, graph, quality, ev, sw)| {
            let sel = ev.comp_ids.iter().map(|id| union[id]).collect();
            VariantCtx {
                alpha,
                graph,
                quality,
                ev,
                sw,
                sel,
            }
        })
        .collect();

    let n_variants = variants.len();
    let n_union = union.len();
    let nd = variants[0].ev.n_devices();

    let mut best: Option<(usize, Vec<usize>, f64)> = None;
    let mut evaluations = 0u64;
    let mut global_steps = 0u64;
    let mut trajectory = Vec::new();
    let mut diagnostics = Vec::new();

    for restart in 0..config.restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(restart as u64);
        let mut z_alpha = vec![0.0f64; n_variants];
        let mut z_phi = vec![vec![0.0f64; nd]; n_union];
        if restart > 0 {
            for z in z_alpha.iter_mut() {
                *z += config.jitter * gaussian(&mut rng);
            }
            for row in &mut z_phi {
                for z in row.iter_mut() {
                    *z += config.jitter * gaussian(&mut rng);
                }
            }
        }

        let mut last_relaxed = f64::NAN;
        'steps: for step in 0..config.steps {
            let beta = Beta::Finite(super::grad_descent::schedule(
                config.beta_start,
                config.beta_end,
                step,
                config.steps,
            ));
            let w = softmax(&z_alpha);
            let union_rows: Vec<Vec<f64>> = z_phi.iter().map(|z| softmax(z)).collect();

            let mut value = 0.0;
            let mut g_w = vec![0.0; n_variants];
            let mut g_union = vec![vec![0.0; nd]; n_union];
            for (a, ctx) in variants.iter().enumerate() {
                let rows: Vec<Vec<f64>> = ctx.sel.iter().map(|&i| union_rows[i].clone()).collect();
                let (hw, gz) = match surrogate_hw_grad(&ctx.ev, &rows, beta, params.gamma2) {
                    Ok(ok) => ok,
                    Err(e) => {
                        diagnostics.push(format!(
                            "restart {restart} stopped at step {step}: {e}"
                        ));
                        break 'steps;
                    }
                };
                evaluations += 1;
                let objective_a = ctx.sw + params.gamma1 * hw;
                value += w[a] * objective_a;
                g_w[a] = objective_a;
                for (local, &ui) in ctx.sel.iter().enumerate() {
                    for d in 0..nd {
                        g_union[ui][d] += w[a] * params.gamma1 * gz[local][d];
                    }
                }
            }
            if !value.is_finite() {
                diagnostics.push(format!(
                    "restart {restart} stopped at step {step}: non-finite objective"
                ));
                break 'steps;
            }
            last_relaxed = value;

            let dot: f64 = w.iter().zip(&g_w).map(|(&p, &g)| p * g).sum();
            for (a, z) in z_alpha.iter_mut().enumerate() {
                *z -= config.learning_rate * w[a] * (g_w[a] - dot);
            }
            for (row, grow) in z_phi.iter_mut().zip(&g_union) {
                for (z, g) in row.iter_mut().zip(grow) {
                    *z -= config.learning_rate * g;
                }
            }
            global_steps += 1;
        }

        // Harden the variant choice, then its component rows.
        let mut a_star = 0;
        for (a, &z) in z_alpha.iter().enumerate().skip(1) {
            if z > z_alpha[a_star] {
                a_star = a;
            }
        }
        let ctx = &variants[a_star];
        let assign: Vec<usize> = ctx
            .sel
            .iter()
            .map(|&ui| {
                let row = &z_phi[ui];
                let mut best_d = 0;
                for (d, &v) in row.iter().enumerate().skip(1) {
                    if v > row[best_d] {
                        best_d = d;
                    }
                }
                best_d
            })
            .collect();
        let mapping = ctx.ev.mapping_of(&assign);
        let exact = total_objective(&ctx.graph, &problem.platform, &mapping, &ctx.quality, params)?
            .total;
        evaluations += 1;

        let improved = best.as_ref().map(|&(_, _, b)| exact < b).unwrap_or(true);
        if improved {
            best = Some((a_star, assign, exact));
        }
        trajectory.push(TrajectoryPoint {
            iteration: global_steps,
            best_objective: best.as_ref().unwrap().2,
            relaxed_objective: if last_relaxed.is_finite() {
                Some(last_relaxed)
            } else {
                None
            },
        });
    }

    let (a_star, assign, _) = best.ok_or(Error::NonFinite {
        context: "every restart failed".to_string(),
    })?;
    let ctx = &variants[a_star];
    let mapping = ctx.ev.mapping_of(&assign);
    let breakdown =
        total_objective(&ctx.graph, &problem.platform, &mapping, &ctx.quality, params)?;
    let labels = space.choice_labels(&ctx.alpha)?;
    Ok(SolveResult {
        method: "cosearch-joint".to_string(),
        mapping,
        alpha: Some(ctx.alpha.clone()),
        alpha_labels: Some(labels),
        objective: breakdown.total,
        breakdown,
        evaluations,
        wall_time_s: start.elapsed().as_secs_f64(),
        trajectory,
        seed: Some(config.seed),
        diagnostics,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn space_problem() -> Problem {
        let (space, platform, params) = fixtures::demo_space();
        Problem::over_space(space, platform, params).unwrap()
    }

    #[test]
    fn enumeration_with_brute_matches_a_manual_sweep() {
        let problem = space_problem();
        let space = problem.space().unwrap().clone();

        let mut expected_best = f64::INFINITY;
        let mut expected_alpha = Vec::new();
        for alpha in space.alphas() {
            let (graph, quality) = apply_architecture(&space, &alpha).unwrap();
            let sub = Problem::fixed(
                graph,
                quality,
                problem.platform.clone(),
                problem.params,
            )
            .unwrap();
            let r = brute_force(&sub, &BruteConfig::default()).unwrap();
            if r.objective < expected_best {
                expected_best = r.objective;
                expected_alpha = alpha;
            }
        }

        let result = co_search(&problem, &CosearchConfig::default()).unwrap();
        assert!((result.objective - expected_best).abs() < 1e-12);
        assert_eq!(result.alpha, Some(expected_alpha));
        assert!(result.alpha_labels.is_some());
        assert_eq!(result.method, "cosearch-enum");
    }

    #[test]
    fn joint_descent_matches_enumeration_on_the_demo_space() {
        let problem = space_problem();
        let exact = co_search(&problem, &CosearchConfig::default()).unwrap();
        let joint = co_search(
            &problem,
            &CosearchConfig {
                variant_cap: 1000,
                mode: CosearchMode::Joint(JointConfig::default()),
            },
        )
        .unwrap();
        assert!(
            (joint.objective - exact.objective).abs() < 1e-9,
            "joint {} vs exact {}",
            joint.objective,
            exact.objective
        );
        assert_eq!(joint.alpha, exact.alpha);
    }

    #[test]
    fn variant_cap_is_enforced() {
        let problem = space_problem();
        let err = co_search(
            &problem,
            &CosearchConfig {
                variant_cap: 2,
                mode: CosearchMode::Enumerate(InnerSolver::Brute(BruteConfig::default())),
            },
        )
        .unwrap_err();
        assert!(matches!(
            err,
            Error::VariantCapExceeded { count: 3, cap: 2 }
        ));
    }

    #[test]
    fn fixed_problems_are_rejected() {
        let (graph, platform, quality, params) = fixtures::toy2x2();
        let problem = Problem::fixed(graph, quality, platform, params).unwrap();
        assert!(matches!(
            co_search(&problem, &CosearchConfig::default()),
            Err(Error::NeedsSpace)
        ));
    }

    #[test]
    fn single_variant_spaces_work_in_both_modes() {
        let (mut space, platform, params) = fixtures::demo_space();
        space.decision_points.clear();
        space.quality = vec![crate::model::arch::VariantQuality {
            alpha: vec![],
            quality: fixtures::demo_quality(0.4, 0.3),
        }];
        let problem = Problem::over_space(space, platform, params).unwrap();
        let enumerated = co_search(&problem, &CosearchConfig::default()).unwrap();
        assert_eq!(enumerated.alpha, Some(vec![]));
        let joint = co_search(
            &problem,
            &CosearchConfig {
                variant_cap: 10,
                mode: CosearchMode::Joint(JointConfig {
                    steps: 100,
                    ..JointConfig::default()
                }),
            },
        )
        .unwrap();
        assert_eq!(joint.alpha, Some(vec![]));
        assert!(joint.objective.is_finite());
    }

    #[test]
    fn seeded_runs_are_reproducible() {
        let problem = space_problem();
        let config = CosearchConfig {
            variant_cap: 1000,
            mode: CosearchMode::Joint(JointConfig::default()),
        };
        let a = co_search(&problem, &config).unwrap();
        let b = co_search(&problem, &config).unwrap();
        assert_eq!(a.mapping, b.mapping);
        assert_eq!(a.objective, b.objective);
        assert_eq!(a.alpha, b.alpha);
    }

    #[test]
    fn enumeration_with_stochastic_inner_solver_runs() {
        let problem = space_problem();
        let result = co_search(
            &problem,
            &CosearchConfig {
                variant_cap: 1000,
                mode: CosearchMode::Enumerate(InnerSolver::Anneal(AnnealConfig {
                    iterations: 2000,
                    ..AnnealConfig::default()
                })),
            },
        )
        .unwrap();
        let exact = co_search(&problem, &CosearchConfig::default()).unwrap();
        assert!(
            (result.objective - exact.objective).abs() < 1e-9,
            "anneal inner {} vs exact {}",
            result.objective,
            exact.objective
        );
    }
}
