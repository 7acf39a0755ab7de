//! Evolutionary mapping search: tournament selection, uniform crossover,
//! per-gene mutation, and elitism, checked against the exhaustive optimum.
//!
//! Run with: cargo run --example evolutionary

use tandem::io::{gen_instance, GenSpec};
use tandem::optim::{brute_force, evolutionary, BruteConfig, EvolveConfig};

fn main() -> tandem::Result<()> {
    let problem = gen_instance(&GenSpec::default(), 42)?;
    let exact = brute_force(&problem, &BruteConfig::default())?;

    let config = EvolveConfig {
        seed: 3,
        ..EvolveConfig::default()
    };
    let evolved = evolutionary(&problem, &config)?;
    println!(
        "population {} for {} generations: {:.4} vs exact {:.4} (gap {:.2e})",
        config.population,
        config.generations,
        evolved.objective,
        exact.objective,
        evolved.objective - exact.objective
    );

    // The best objective per generation never worsens thanks to elitism.
    let monotone = evolved
        .trajectory
        .windows(2)
        .all(|w| w[1].best_objective <= w[0].best_objective);
    println!(
        "trajectory has {} points, monotone: {monotone}",
        evolved.trajectory.len()
    );

    let greedy = evolutionary(
        &problem,
        &EvolveConfig {
            mutation_rate: 0.0,
            seed: 3,
            ..EvolveConfig::default()
        },
    )?;
    println!(
        "without mutation the search still reaches {:.4} on this instance",
        greedy.objective
    );
    Ok(())
}
