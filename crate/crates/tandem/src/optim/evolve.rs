//! Evolutionary search over device assignments: tournament selection,
//! uniform crossover, per-gene mutation, and elitism.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::optim::{finish_fixed, FixedEval, Problem, SolveResult, TrajectoryPoint};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolveConfig {
    pub population: usize,
    pub generations: u64,
    /// Per-gene probability of resampling the device uniformly.
    pub mutation_rate: f64,
    /// Tournament size for parent selection.
    pub tournament: usize,
    /// Top individuals copied unchanged into the next generation.
    pub elites: usize,
    pub seed: u64,
}

impl Default for EvolveConfig {
    fn default() -> Self {
        EvolveConfig {
            population: 48,
            generations: 120,
            mutation_rate: 0.48,
            tournament: 8,
            elites: 1,
            seed: 0,
        }
    }
}

impl EvolveConfig {
    fn validate(&self) -> Result<()> {
        if self.population < 2 {
            return Err(Error::Semantic {
                message: format!("population must be at least 2, got {}", self.population),
            });
        }
        if !(0.0..=1.0).contains(&self.mutation_rate) {
            return Err(Error::Semantic {
                message: format!("mutation_rate must be in [0, 1], got {}", self.mutation_rate),
            });
        }
        if self.tournament == 0 || self.tournament > self.population {
            return Err(Error::Semantic {
                message: format!(
                    "tournament must be in 1..={}, got {}",
                    self.population, self.tournament
                ),
            });
        }
        if self.elites >= self.population {
            return Err(Error::Semantic {
                message: format!(
                    "elites must be below the population size, got {}",
                    self.elites
                ),
            });
        }
        Ok(())
    }
}

pub fn evolutionary(problem: &Problem, config: &EvolveConfig) -> Result<SolveResult> {
    config.validate()?;
    let start = Instant::now();
    let fixed = FixedEval::new(problem)?;
    let n = fixed.ev.n_components();
    let nd = fixed.ev.n_devices();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    let mut population: Vec<Vec<usize>> = (0..config.population)
        .map(|_| (0..n).map(|_| rng.gen_range(0..nd)).collect())
        .collect();
    let mut fitness = Vec::with_capacity(config.population);
    for genome in &population {
        fitness.push(fixed.total(genome)?);
    }
    let mut evaluations = config.population as u64;

    let best_index = |fit: &[f64]| {
        let mut b = 0;
        for (i, &f) in fit.iter().enumerate().skip(1) {
            if f < fit[b] {
                b = i;
            }
        }
        b
    };
    let mut best = population[best_index(&fitness)].clone();
    let mut best_obj = fitness[best_index(&fitness)];
    let mut trajectory = vec![TrajectoryPoint {
        iteration: 0,
        best_objective: best_obj,
        relaxed_objective: None,
    }];

    for generation in 1..=config.generations {
        // Rank ascending; index ties keep the earlier individual.
        let mut order: Vec<usize> = (0..population.len()).collect();
        order.sort_by(|&a, &b| fitness[a].total_cmp(&fitness[b]).then(a.cmp(&b)));

        let mut next: Vec<Vec<usize>> = order[..config.elites]
            .iter()
            .map(|&i| population[i].clone())
            .collect();
        while next.len() < config.population {
            let (pa, pb) = {
                let mut pick = || {
                    let mut winner = rng.gen_range(0..population.len());
                    for _ in 1..config.tournament {
                        let challenger = rng.gen_range(0..population.len());
                        if fitness[challenger] < fitness[winner] {
                            winner = challenger;
                        }
                    }
                    winner
                };
                (pick(), pick())
            };
            let mut child: Vec<usize> = (0..n)
                .map(|v| {
                    if rng.gen::<bool>() {
                        population[pa][v]
                    } else {
                        population[pb][v]
                    }
                })
                .collect();
            for gene in child.iter_mut() {
                if rng.gen::<f64>() < config.mutation_rate {
                    *gene = rng.gen_range(0..nd);
                }
            }
            next.push(child);
        }

        population = next;
        fitness.clear();
        for genome in &population {
            fitness.push(fixed.total(genome)?);
        }
        evaluations += population.len() as u64;

        let gi = best_index(&fitness);
        if fitness[gi] < best_obj {
            best_obj = fitness[gi];
            best = population[gi].clone();
            trajectory.push(TrajectoryPoint {
                iteration: generation,
                best_objective: best_obj,
                relaxed_objective: None,
            });
        }
    }

    finish_fixed(
        problem,
        "evolve",
        fixed.ev.mapping_of(&best),
        evaluations,
        start.elapsed().as_secs_f64(),
        trajectory,
        Some(config.seed),
        Vec::new(),
    )
}
