//! Evaluates two concrete mappings of the same model and prints the full
//! objective breakdown for each: per-pair latencies, active power, totals.
//!
//! Run with: cargo run --example evaluate_mapping

use std::path::Path;

use tandem::cost::total_objective;
use tandem::io::{parse_mapping_file, parse_problem_file};
use tandem::model::mapping::Mapping;
use tandem::optim::ProblemInstance;

fn main() -> tandem::Result<()> {
    let root = Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/../../data"));
    let problem = parse_problem_file(&root.join("toy2x2.json"))?;
    let ProblemInstance::Fixed { graph, quality } = &problem.instance else {
        unreachable!("the bundled toy problem is a fixed model");
    };

    let split = parse_mapping_file(&root.join("toy2x2_split_mapping.json"))?;
    let all_fast: Mapping = graph
        .components
        .iter()
        .map(|c| (c.id.clone(), "d0".to_string()))
        .collect();

    for (name, mapping) in [("split across devices", &split), ("all on d0", &all_fast)] {
        let breakdown = total_objective(graph, &problem.platform, mapping, quality, &problem.params)?;
        println!("{name}:");
        for pair in &breakdown.hw.pair_latencies {
            match pair.latency {
                Some(latency) => {
                    println!("  {} -> {}: {latency:.3}s", pair.modality, pair.sink)
                }
                None => println!("  {} -> {}: unreachable", pair.modality, pair.sink),
            }
        }
        println!(
            "  max latency {:.3}s, active {:?} drawing {}W",
            breakdown.hw.max_latency, breakdown.hw.active_devices, breakdown.hw.total_power
        );
        println!(
            "  sw {:.3} + gamma1 {} * hw {:.3} = {:.4}\n",
            breakdown.sw_loss, breakdown.gamma1, breakdown.hw.hw_loss, breakdown.total
        );
    }
    Ok(())
}
