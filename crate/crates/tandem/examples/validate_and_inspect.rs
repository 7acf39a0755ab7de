//! Parses a problem file, validates it, and prints what is inside.
//!
//! Run with: cargo run --example validate_and_inspect

use std::path::Path;

use tandem::io::{parse_problem, parse_problem_file};
use tandem::model::graph::topological_order;
use tandem::optim::ProblemInstance;

fn main() -> tandem::Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/toy2x2.json");
    let problem = parse_problem_file(Path::new(path))?;

    let ProblemInstance::Fixed { graph, quality } = &problem.instance else {
        unreachable!("the bundled toy problem is a fixed model");
    };
    println!(
        "{} components, {} edges, {} modalities, {} sinks",
        graph.components.len(),
        graph.edges.len(),
        graph.modalities.len(),
        graph.sinks.len()
    );
    for c in &graph.components {
        println!("  component {:<3} kind {:?} work {}", c.id, c.kind, c.work);
    }
    println!("execution order: {:?}", topological_order(graph)?);
    println!(
        "devices: {:?}",
        problem
            .platform
            .devices
            .iter()
            .map(|d| d.id.as_str())
            .collect::<Vec<_>>()
    );
    println!(
        "measured losses: control {:?}, task {:?}",
        quality.control_losses, quality.task_losses
    );

    // Malformed and inconsistent documents fail with graded errors.
    for (label, text) in [
        ("syntax", "{oops"),
        (
            "semantic",
            r#"{"platform": {"devices": [{"id": "d0", "throughput": 1.0, "power_active": 1.0}]}}"#,
        ),
    ] {
        let err = parse_problem(text).unwrap_err();
        println!("{label} example -> {err}");
    }
    Ok(())
}
