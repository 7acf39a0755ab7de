//! Simulated annealing over device assignments with single-component moves
//! and a geometric cooling schedule.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::optim::{finish_fixed, FixedEval, Problem, SolveResult, TrajectoryPoint};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnnealConfig {
    pub iterations: u64,
    pub initial_temp: f64,
    /// Multiplied into the temperature after every iteration.
    pub cooling_rate: f64,
    pub seed: u64,
}

impl Default for AnnealConfig {
    fn default() -> Self {
        AnnealConfig {
            iterations: 10_000,
            initial_temp: 1.5,
            cooling_rate: 0.999,
            seed: 0,
        }
    }
}

impl AnnealConfig {
    fn validate(&self) -> Result<()> {
        if self.iterations == 0 {
            return Err(Error::Semantic {
                message: "iterations must be at least 1".to_string(),
            });
        }
        if !(self.initial_temp >= 0.0 && self.initial_temp.is_finite()) {
            return Err(Error::Semantic {
                message: format!("initial_temp must be >= 0, got {}", self.initial_temp),
            });
        }
        if !(self.cooling_rate > 0.0 && self.cooling_rate <= 1.0) {
            return Err(Error::Semantic {
                message: format!("cooling_rate must be in (0, 1], got {}", self.cooling_rate),
            });
        }
        Ok(())
    }
}

/// Metropolis search: downhill moves always accepted, uphill moves accepted
/// with probability `exp(-delta / temperature)`. Temperature zero degrades
/// to pure hill climbing.
pub fn simulated_annealing(problem: &Problem, config: &AnnealConfig) -> Result<SolveResult> {
    config.validate()?;
    let start = Instant::now();
    let fixed = FixedEval::new(problem)?;
    let n = fixed.ev.n_components();
    let nd = fixed.ev.n_devices();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    let mut current: Vec<usize> = (0..n).map(|_| rng.gen_range(0..nd)).collect();
    let mut current_obj = fixed.total(&current)?;
    let mut best = current.clone();
    let mut best_obj = current_obj;
    let mut evaluations = 1u64;
    let mut trajectory = vec![TrajectoryPoint {
        iteration: 0,
        best_objective: best_obj,
        relaxed_objective: None,
    }];

    let mut temperature = config.initial_temp;
    for iteration in 1..=config.iterations {
        if nd > 1 {
            let v = rng.gen_range(0..n);
            let old = current[v];
            // Uniform over the other devices.
            let new = (old + 1 + rng.gen_range(0..nd - 1)) % nd;
            current[v] = new;
            let cand_obj = fixed.total(&current)?;
            evaluations += 1;
            let delta = cand_obj - current_obj;
            let accept = delta <= 0.0
                || (temperature > 0.0 && rng.gen::<f64>() < (-delta / temperature).exp());
            if accept {
                current_obj = cand_obj;
                if cand_obj < best_obj {
                    best_obj = cand_obj;
                    best.copy_from_slice(&current);
                    trajectory.push(TrajectoryPoint {
                        iteration,
                        best_objective: best_obj,
                        relaxed_objective: None,
                    });
                }
            } else {
                current[v] = old;
            }
        }
        temperature *= config.cooling_rate;
    }

    finish_fixed(
        problem,
        "anneal",
        fixed.ev.mapping_of(&best),
        evaluations,
        start.elapsed().as_secs_f64(),
        trajectory,
        Some(config.seed),
        Vec::new(),
    )
}
