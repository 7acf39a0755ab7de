//! Sweeps the objective weights to show the latency/power/quality trade-off:
//! raising the power weight pushes the optimum from the fast, hungry device
//! onto the slow, frugal one.
//!
//! Run with: cargo run --example gamma_sweep

use std::path::Path;

use tandem::io::parse_problem_file;
use tandem::optim::{brute_force, BruteConfig};

fn main() -> tandem::Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/toy2x2.json");
    let base = parse_problem_file(Path::new(path))?;

    println!("gamma2  objective  max_latency  power  active devices");
    for gamma2 in [0.0, 0.5, 1.0, 2.0, 3.0, 5.0] {
        let mut problem = base.clone();
        problem.params.gamma2 = gamma2;
        let best = brute_force(&problem, &BruteConfig::default())?;
        println!(
            "{gamma2:>6}  {:>9.4}  {:>11.3}  {:>5}  {:?}",
            best.objective,
            best.breakdown.hw.max_latency,
            best.breakdown.hw.total_power,
            best.breakdown.hw.active_devices
        );
    }

    // gamma1 scales how much the hardware term matters at all.
    println!("\ngamma1  objective  sw_loss  hw_loss");
    for gamma1 in [0.0, 1.0, 10.0, 100.0] {
        let mut problem = base.clone();
        problem.params.gamma1 = gamma1;
        let best = brute_force(&problem, &BruteConfig::default())?;
        println!(
            "{gamma1:>6}  {:>9.4}  {:>7.3}  {:>7.3}",
            best.objective, best.breakdown.sw_loss, best.breakdown.hw.hw_loss
        );
    }
    Ok(())
}
