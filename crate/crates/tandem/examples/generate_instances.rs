//! Random instance generation: layered DAGs with repair, written out as
//! problem files any other command or example can consume.
//!
//! Run with: cargo run --example generate_instances

use tandem::io::{gen_instance, serialize_problem, GenSpec, Span};
use tandem::optim::{brute_force, BruteConfig, ProblemInstance};

fn main() -> tandem::Result<()> {
    let spec = GenSpec {
        components: 7,
        devices: 2,
        density: 0.4,
        ..GenSpec::default()
    };

    let dir = std::env::temp_dir().join("tandem_generated");
    std::fs::create_dir_all(&dir)?;

    println!("seed  components  edges  optimum");
    for seed in 0..5 {
        let problem = gen_instance(&spec, seed)?;
        let ProblemInstance::Fixed { graph, .. } = &problem.instance else {
            unreachable!("generated instances are fixed models");
        };
        let best = brute_force(&problem, &BruteConfig::default())?;
        println!(
            "{seed:>4}  {:>10}  {:>5}  {:.4}",
            graph.components.len(),
            graph.edges.len(),
            best.objective
        );
        let path = dir.join(format!("instance_{seed}.json"));
        std::fs::write(&path, serialize_problem(&problem))?;
    }
    println!("problem files written under {}", dir.display());

    // Denser graphs carry more traffic; a fully dense spec joins every pair
    // of adjacent layers completely.
    let dense = GenSpec {
        density: 1.0,
        volume: Span::new(4.0, 4.0),
        ..spec
    };
    let problem = gen_instance(&dense, 0)?;
    let ProblemInstance::Fixed { graph, .. } = &problem.instance else {
        unreachable!();
    };
    println!("dense variant has {} edges", graph.edges.len());
    Ok(())
}
