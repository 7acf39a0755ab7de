//! Gradient descent on the relaxed objective over row logits, with random
//! restarts, annealed sharpness and temperature, and argmax discretization.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::optim::{finish_fixed, gaussian, FixedEval, Problem, SolveResult, TrajectoryPoint};
use crate::relax::{mc_hw_grad, softmax, surrogate_hw_grad, Beta};

/// Which differentiable objective the descent follows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GradTarget {
    /// Expected-cost surrogate; deterministic, temperature has no effect.
    Surrogate,
    /// Pathwise Monte Carlo through Gumbel-softmax samples per step.
    MonteCarlo { samples: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GdConfig {
    pub steps: u64,
    pub learning_rate: f64,
    pub restarts: u32,
    /// Gumbel-softmax temperature schedule (geometric), Monte Carlo only.
    pub tau_start: f64,
    pub tau_end: f64,
    /// Smooth-max sharpness schedule (geometric).
    pub beta_start: f64,
    pub beta_end: f64,
    pub target: GradTarget,
    /// Logit noise scale for restarts after the first, which starts uniform.
    pub jitter: f64,
    /// Greedy single-component polish of each discretized restart.
    pub polish: bool,
    pub seed: u64,
}

impl Default for GdConfig {
    fn default() -> Self {
        GdConfig {
            steps: 400,
            learning_rate: 0.3,
            restarts: 5,
            tau_start: 1.0,
            tau_end: 0.05,
            beta_start: 1.0,
            beta_end: 50.0,
            target: GradTarget::Surrogate,
            jitter: 0.01,
            polish: false,
            seed: 0,
        }
    }
}

impl GdConfig {
    fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        if self.steps == 0 {
            problems.push("steps must be at least 1".to_string());
        }
        if !(self.learning_rate >= 0.0 && self.learning_rate.is_finite()) {
            problems.push(format!("learning_rate must be >= 0, got {}", self.learning_rate));
        }
        if self.restarts == 0 {
            problems.push("restarts must be at least 1".to_string());
        }
        for (name, v) in [
            ("tau_start", self.tau_start),
            ("tau_end", self.tau_end),
            ("beta_start", self.beta_start),
            ("beta_end", self.beta_end),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                problems.push(format!("{name} must be > 0, got {v}"));
            }
        }
        if !(self.jitter >= 0.0 && self.jitter.is_finite()) {
            problems.push(format!("jitter must be >= 0, got {}", self.jitter));
        }
        if let GradTarget::MonteCarlo { samples } = self.target {
            if samples == 0 {
                problems.push("MonteCarlo samples must be at least 1".to_string());
            }
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

/// Geometric interpolation from `start` to `end` across `steps` steps.
pub(crate) fn schedule(start: f64, end: f64, step: u64, steps: u64) -> f64 {
    if steps <= 1 {
        start
    } else {
        start * (end / start).powf(step as f64 / (steps - 1) as f64)
    }
}

pub fn gradient_descent_relaxed(problem: &Problem, config: &GdConfig) -> Result<SolveResult> {
    config.validate()?;
    let start = Instant::now();
    let fixed = FixedEval::new(problem)?;
    let n = fixed.ev.n_components();
    let nd = fixed.ev.n_devices();

    let mut best_assign: Option<Vec<usize>> = None;
    let mut best_obj = f64::INFINITY;
    let mut evaluations = 0u64;
    let mut trajectory = Vec::new();
    let mut diagnostics = Vec::new();
    let mut global_steps = 0u64;

    for restart in 0..config.restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(restart as u64);
        let mut logits = vec![vec![0.0f64; nd]; n];
        if restart > 0 {
            for row in &mut logits {
                for z in row.iter_mut() {
                    *z += config.jitter * gaussian(&mut rng);
                }
            }
        }

        let mut last_relaxed = f64::NAN;
        for step in 0..config.steps {
            let beta = Beta::Finite(schedule(
                config.beta_start,
                config.beta_end,
                step,
                config.steps,
            ));
            let step_result = match config.target {
                GradTarget::Surrogate => {
                    let rows: Vec<Vec<f64>> = logits.iter().map(|z| softmax(z)).collect();
                    evaluations += 1;
                    surrogate_hw_grad(&fixed.ev, &rows, beta, fixed.gamma2)
                }
                GradTarget::MonteCarlo { samples } => {
                    let tau = schedule(config.tau_start, config.tau_end, step, config.steps);
                    evaluations += samples as u64;
                    mc_hw_grad(
                        &fixed.ev,
                        &logits,
                        tau,
                        beta,
                        fixed.gamma2,
                        samples,
                        &mut rng,
                    )
                }
            };
            let (hw, grad) = match step_result {
                Ok(ok) => ok,
                Err(e) => {
                    diagnostics.push(format!(
                        "restart {restart} stopped at step {step}: {e}"
                    ));
                    break;
                }
            };
            last_relaxed = fixed.sw + fixed.gamma1 * hw;
            if !last_relaxed.is_finite() || grad.iter().flatten().any(|g| !g.is_finite()) {
                diagnostics.push(format!(
                    "restart {restart} stopped at step {step}: non-finite objective or gradient"
                ));
                break;
            }
            for (zrow, grow) in logits.iter_mut().zip(&grad) {
                for (z, g) in zrow.iter_mut().zip(grow) {
                    *z -= config.learning_rate * fixed.gamma1 * g;
                }
            }
            global_steps += 1;
        }

        // Harden: most likely device per component, first on ties.
        let mut assign: Vec<usize> = logits
            .iter()
            .map(|z| {
                let mut best_d = 0;
                for (d, &v) in z.iter().enumerate().skip(1) {
                    if v > z[best_d] {
                        best_d = d;
                    }
                }
                best_d
            })
            .collect();
        let mut exact = fixed.total(&assign)?;
        evaluations += 1;

        if config.polish {
            let (polished, extra) = hill_climb(&fixed, &mut assign, exact)?;
            exact = polished;
            evaluations += extra;
        }

        if exact < best_obj {
            best_obj = exact;
            best_assign = Some(assign);
        }
        trajectory.push(TrajectoryPoint {
            iteration: global_steps,
            best_objective: best_obj,
            relaxed_objective: if last_relaxed.is_finite() {
                Some(last_relaxed)
            } else {
                None
            },
        });
    }

    let best_assign = best_assign.ok_or(Error::NonFinite {
        context: "every restart failed".to_string(),
    })?;
    finish_fixed(
        problem,
        "grad",
        fixed.ev.mapping_of(&best_assign),
        evaluations,
        start.elapsed().as_secs_f64(),
        trajectory,
        Some(config.seed),
        diagnostics,
    )
}

/// First-improvement descent over single-component moves. Returns the final
/// objective and the number of evaluations spent.
fn hill_climb(fixed: &FixedEval, assign: &mut [usize], mut current: f64) -> Result<(f64, u64)> {
    let nd = fixed.ev.n_devices();
    let mut evaluations = 0u64;
    for _pass in 0..100 {
        let mut improved = false;
        for v in 0..assign.len() {
            let old = assign[v];
            for d in 0..nd {
                if d == old {
                    continue;
                }
                assign[v] = d;
                let cand = fixed.total(assign)?;
                evaluations += 1;
                if cand < current {
                    current = cand;
                    improved = true;
                } else {
                    assign[v] = old;
                }
                if assign[v] != old {
                    break;
                }
            }
        }
        if !improved {
            break;
        }
    }
    Ok((current, evaluations))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::optim::{brute_force, BruteConfig};

    fn toy_problem() -> Problem {
        let (graph, platform, quality, params) = fixtures::toy2x2();
        Problem::fixed(graph, quality, platform, params).unwrap()
    }

    #[test]
    fn zero_learning_rate_hardens_to_the_first_device() {
        let config = GdConfig {
            learning_rate: 0.0,
            restarts: 1,
            steps: 5,
            ..GdConfig::default()
        };
        let result = gradient_descent_relaxed(&toy_problem(), &config).unwrap();
        assert!(result.mapping.assignment.values().all(|d| d == "d0"));
        assert_eq!(result.trajectory.len(), 1);
        assert!(result.trajectory[0].relaxed_objective.is_some());
    }

    #[test]
    fn reaches_the_toy_optimum() {
        let problem = toy_problem();
        let exact = brute_force(&problem, &BruteConfig::default()).unwrap();
        let result = gradient_descent_relaxed(&problem, &GdConfig::default()).unwrap();
        assert!(
            (result.objective - exact.objective).abs() < 1e-9,
            "{} vs {}",
            result.objective,
            exact.objective
        );
    }

    #[test]
    fn monte_carlo_target_runs_and_is_seeded() {
        let problem = toy_problem();
        let config = GdConfig {
            target: GradTarget::MonteCarlo { samples: 4 },
            steps: 60,
            restarts: 2,
            ..GdConfig::default()
        };
        let a = gradient_descent_relaxed(&problem, &config).unwrap();
        let b = gradient_descent_relaxed(&problem, &config).unwrap();
        assert!(a.objective.is_finite());
        assert_eq!(a.mapping, b.mapping);
        assert_eq!(a.objective, b.objective);
    }

    #[test]
    fn more_restarts_never_hurt() {
        // Restart 0 is identical in both runs, so the five-restart best can
        // only match or beat it.
        let problem = toy_problem();
        let one = gradient_descent_relaxed(
            &problem,
            &GdConfig {
                restarts: 1,
                ..GdConfig::default()
            },
        )
        .unwrap();
        let five = gradient_descent_relaxed(&problem, &GdConfig::default()).unwrap();
        assert!(five.objective <= one.objective + 1e-15);
    }

    #[test]
    fn polish_only_improves() {
        let problem = toy_problem();
        let base = GdConfig {
            steps: 30,
            restarts: 2,
            ..GdConfig::default()
        };
        let plain = gradient_descent_relaxed(&problem, &base).unwrap();
        let polished = gradient_descent_relaxed(
            &problem,
            &GdConfig {
                polish: true,
                ..base
            },
        )
        .unwrap();
        assert!(polished.objective <= plain.objective + 1e-15);
    }

    #[test]
    fn seeded_runs_are_reproducible() {
        let problem = toy_problem();
        let a = gradient_descent_relaxed(&problem, &GdConfig::default()).unwrap();
        let b = gradient_descent_relaxed(&problem, &GdConfig::default()).unwrap();
        assert_eq!(a.mapping, b.mapping);
        assert_eq!(a.trajectory, b.trajectory);
    }

    #[test]
    fn bad_configs_are_rejected() {
        let problem = toy_problem();
        for config in [
            GdConfig {
                steps: 0,
                ..GdConfig::default()
            },
            GdConfig {
                restarts: 0,
                ..GdConfig::default()
            },
            GdConfig {
                learning_rate: -0.1,
                ..GdConfig::default()
            },
            GdConfig {
                tau_end: 0.0,
                ..GdConfig::default()
            },
            GdConfig {
                beta_start: -2.0,
                ..GdConfig::default()
            },
            GdConfig {
                target: GradTarget::MonteCarlo { samples: 0 },
                ..GdConfig::default()
            },
        ] {
            assert!(gradient_descent_relaxed(&problem, &config).is_err(), "{config:?}");
        }
    }
}
