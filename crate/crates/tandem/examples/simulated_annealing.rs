//! Simulated annealing on a randomly generated instance, checked against the
//! exhaustive optimum. Same seed, same answer, every run.
//!
//! Run with: cargo run --example simulated_annealing

use tandem::io::{gen_instance, GenSpec};
use tandem::optim::{brute_force, simulated_annealing, AnnealConfig, BruteConfig};

fn main() -> tandem::Result<()> {
    let spec = GenSpec::default();
    let problem = gen_instance(&spec, 42)?;
    println!(
        "generated instance: {} components on {} devices",
        spec.components, spec.devices
    );

    let exact = brute_force(&problem, &BruteConfig::default())?;
    println!(
        "exact optimum {:.4} ({} evaluations)",
        exact.objective, exact.evaluations
    );

    let config = AnnealConfig {
        seed: 7,
        ..AnnealConfig::default()
    };
    let annealed = simulated_annealing(&problem, &config)?;
    println!(
        "annealed       {:.4} ({} evaluations, gap {:.2e})",
        annealed.objective,
        annealed.evaluations,
        annealed.objective - exact.objective
    );

    let again = simulated_annealing(&problem, &config)?;
    assert_eq!(annealed.mapping, again.mapping);
    println!("same seed reproduces the same mapping");

    let hot = simulated_annealing(
        &problem,
        &AnnealConfig {
            initial_temp: 50.0,
            cooling_rate: 0.99,
            iterations: 2_000,
            seed: 7,
        },
    )?;
    println!(
        "hotter, shorter schedule lands at {:.4} (gap {:.2e})",
        hot.objective,
        hot.objective - exact.objective
    );
    Ok(())
}
