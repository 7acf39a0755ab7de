//! Exhaustive mapping search: the exact optimum on a small instance, and the
//! guard that refuses spaces too large to enumerate.
//!
//! Run with: cargo run --example brute_force

use std::path::Path;

use tandem::io::parse_problem_file;
use tandem::optim::{brute_force, BruteConfig};

fn main() -> tandem::Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/toy2x2.json");
    let problem = parse_problem_file(Path::new(path))?;

    let result = brute_force(&problem, &BruteConfig::default())?;
    println!(
        "optimum {:.4} after {} evaluations in {:.1}ms",
        result.objective,
        result.evaluations,
        result.wall_time_s * 1e3
    );
    println!("mapping: {:?}", result.mapping.assignment);
    println!("improvements along the way:");
    for point in &result.trajectory {
        println!("  evaluation {:>3}: best {:.4}", point.iteration, point.best_objective);
    }

    // 5 components on 2 devices is 32 mappings; a limit of 10 refuses to run.
    let err = brute_force(&problem, &BruteConfig { limit: 10 }).unwrap_err();
    println!("with limit 10 -> {err}");
    Ok(())
}
