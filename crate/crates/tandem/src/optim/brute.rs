//! Exhaustive search over all device assignments, in lexicographic order so
//! ties resolve to the first-enumerated mapping.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::optim::{finish_fixed, FixedEval, Problem, SolveResult, TrajectoryPoint};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BruteConfig {
    /// Refuse to enumerate more assignments than this.
    pub limit: u64,
}

impl Default for BruteConfig {
    fn default() -> Self {
        BruteConfig { limit: 10_000_000 }
    }
}

/// Evaluates every mapping and returns the exact optimum. Errors out before
/// starting when the space exceeds `config.limit`.
pub fn brute_force(problem: &Problem, config: &BruteConfig) -> Result<SolveResult> {
    let start = Instant::now();
    let fixed = FixedEval::new(problem)?;
    let n = fixed.ev.n_components();
    let nd = fixed.ev.n_devices();

    let size = (nd as f64).powi(n as i32);
    if size > config.limit as f64 {
        return Err(Error::BruteForceLimit {
            size,
            limit: config.limit,
        });
    }

    let mut assign = vec![0usize; n];
    let mut best_assign = assign.clone();
    let mut best = f64::INFINITY;
    let mut evaluations = 0u64;
    let mut trajectory = Vec::new();
    loop {
        let total = fixed.total(&assign)?;
        evaluations += 1;
        if total < best {
            best = total;
            best_assign.copy_from_slice(&assign);
            trajectory.push(TrajectoryPoint {
                iteration: evaluations,
                best_objective: best,
                relaxed_objective: None,
            });
        }
        // Odometer increment on the last component keeps the enumeration
        // lexicographic in (component asc, device asc) order.
        let mut pos = n;
        loop {
            if pos == 0 {
                break;
            }
            pos -= 1;
            assign[pos] += 1;
            if assign[pos] < nd {
                break;
            }
            assign[pos] = 0;
        }
        if assign.iter().all(|&d| d == 0) {
            break;
        }
    }

    finish_fixed(
        problem,
        "brute",
        fixed.ev.mapping_of(&best_assign),
        evaluations,
        start.elapsed().as_secs_f64(),
        trajectory,
        None,
        Vec::new(),
    )
}
