//! Mapping search by descending the relaxed objective: soft assignments,
//! a sharpness schedule, restarts, and hardening back to a real mapping.
//!
//! Run with: cargo run --example gradient_descent

use std::path::Path;

use tandem::io::parse_problem_file;
use tandem::optim::{
    brute_force, gradient_descent_relaxed, BruteConfig, GdConfig, GradTarget,
};

fn main() -> tandem::Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/toy2x2.json");
    let problem = parse_problem_file(Path::new(path))?;
    let exact = brute_force(&problem, &BruteConfig::default())?;

    let config = GdConfig::default();
    let result = gradient_descent_relaxed(&problem, &config)?;
    println!(
        "surrogate descent: {:.4} vs exact {:.4} after {} forward passes",
        result.objective, exact.objective, result.evaluations
    );
    println!("hardened mapping: {:?}", result.mapping.assignment);
    println!("last trajectory points (relaxed value tracks the soft state):");
    for point in result.trajectory.iter().rev().take(3).rev() {
        println!(
            "  step {:>4}: best {:.4}, relaxed {:?}",
            point.iteration, point.best_objective, point.relaxed_objective
        );
    }

    // The Monte Carlo estimator descends through sampled hard assignments
    // instead of the deterministic surrogate.
    let mc = gradient_descent_relaxed(
        &problem,
        &GdConfig {
            target: GradTarget::MonteCarlo { samples: 8 },
            steps: 200,
            ..GdConfig::default()
        },
    )?;
    println!("monte carlo target lands at {:.4}", mc.objective);

    // A hill-climbing polish pass can only improve the hardened mapping.
    let polished = gradient_descent_relaxed(
        &problem,
        &GdConfig {
            polish: true,
            ..GdConfig::default()
        },
    )?;
    println!("with polish: {:.4}", polished.objective);
    Ok(())
}
