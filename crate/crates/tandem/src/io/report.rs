//! Solver run reports: a solution document plus CSVs for the trajectory,
//! per-pair latencies, and per-device power. All writes are atomic
//! (temp file then rename) so a crash never leaves a half-written report.

use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::Result;
use crate::io::schema::{doc_of, ProblemDoc};
use crate::optim::{Problem, SolveResult};

#[derive(Serialize)]
struct SolutionDoc<'a> {
    problem: ProblemDoc,
    result: &'a SolveResult,
}

/// Quotes a CSV field only when it needs it.
fn csv_field(value: &str) -> String {
    if value.contains([',', '"', '\n']) {
        format!("\"{}\"", value.replace('"', "\"\""))
    } else {
        value.to_string()
    }
}

fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, contents)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

/// Writes `solution.json`, `trajectory.csv`, `pairs.csv`, and `devices.csv`
/// into `dir` (created if missing). Returns the paths written.
pub fn write_report(dir: &Path, problem: &Problem, result: &SolveResult) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::new();

    let solution = SolutionDoc {
        problem: doc_of(problem),
        result,
    };
    let mut json = serde_json::to_string_pretty(&solution).expect("results serialize");
    json.push('\n');
    let path = dir.join("solution.json");
    write_atomic(&path, &json)?;
    written.push(path);

    let mut trajectory = String::from("iteration,best_objective,relaxed_objective\n");
    for point in &result.trajectory {
        let relaxed = point
            .relaxed_objective
            .map(|v| v.to_string())
            .unwrap_or_default();
        trajectory.push_str(&format!(
            "{},{},{}\n",
            point.iteration, point.best_objective, relaxed
        ));
    }
    let path = dir.join("trajectory.csv");
    write_atomic(&path, &trajectory)?;
    written.push(path);

    let mut pairs = String::from("modality,sink,latency\n");
    for pair in &result.breakdown.hw.pair_latencies {
        let latency = pair
            .latency
            .map(|v| v.to_string())
            .unwrap_or_else(|| "unreachable".to_string());
        pairs.push_str(&format!(
            "{},{},{}\n",
            csv_field(&pair.modality),
            csv_field(&pair.sink),
            latency
        ));
    }
    let path = dir.join("pairs.csv");
    write_atomic(&path, &pairs)?;
    written.push(path);

    let mut devices = String::from("device,active,power_active\n");
    for device in &problem.platform.devices {
        let active = result.breakdown.hw.active_devices.contains(&device.id);
        devices.push_str(&format!(
            "{},{},{}\n",
            csv_field(&device.id),
            active,
            device.power_active
        ));
    }
    let path = dir.join("devices.csv");
    write_atomic(&path, &devices)?;
    written.push(path);

    Ok(written)
}
