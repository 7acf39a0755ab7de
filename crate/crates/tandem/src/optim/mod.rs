//! Mapping and co-search solvers: exhaustive enumeration, simulated
//! annealing, an evolutionary search, relaxed gradient descent, and joint
//! variant-plus-mapping search.
//!
//! Every solver is deterministic given its seed and returns the same
//! `SolveResult` shape.

mod anneal;
mod brute;
mod cosearch;
mod evolve;
mod grad_descent;

pub use anneal::{simulated_annealing, AnnealConfig};
pub use brute::{brute_force, BruteConfig};
pub use cosearch::{co_search, CosearchConfig, CosearchMode, InnerSolver, JointConfig};
pub use evolve::{evolutionary, EvolveConfig};
pub use grad_descent::{gradient_descent_relaxed, GdConfig, GradTarget};

use rand::Rng;
use serde::Serialize;

use crate::cost::{sw_loss, total_objective, Evaluator, ObjectiveBreakdown};
use crate::error::{Error, Result};
use crate::model::arch::ArchitectureSpace;
use crate::model::graph::{validate_graph, ModelGraph};
use crate::model::mapping::Mapping;
use crate::model::platform::Platform;
use crate::model::quality::{ObjectiveParams, QualityRecord};

/// What is being searched: one concrete model, or a family of variants.
#[derive(Debug, Clone, PartialEq)]
pub enum ProblemInstance {
    Fixed {
        graph: ModelGraph,
        quality: QualityRecord,
    },
    Space(ArchitectureSpace),
}

/// A fully validated search problem.
#[derive(Debug, Clone, PartialEq)]
pub struct Problem {
    pub instance: ProblemInstance,
    pub platform: Platform,
    pub params: ObjectiveParams,
}

impl Problem {
    /// One concrete model with measured quality.
    pub fn fixed(
        graph: ModelGraph,
        quality: QualityRecord,
        platform: Platform,
        params: ObjectiveParams,
    ) -> Result<Self> {
        let report = validate_graph(&graph);
        if !report.is_ok() {
            return Err(Error::Semantic {
                message: join_issues(report.violations.iter().map(|v| v.to_string())),
            });
        }
        check_platform(&platform)?;
        params.validate()?;
        quality.validate_for(&graph)?;
        Ok(Problem {
            instance: ProblemInstance::Fixed { graph, quality },
            platform,
            params,
        })
    }

    /// A variant family; every variant's generated graph is checked.
    pub fn over_space(
        space: ArchitectureSpace,
        platform: Platform,
        params: ObjectiveParams,
    ) -> Result<Self> {
        let issues = space.validate();
        if !issues.is_empty() {
            return Err(Error::Semantic {
                message: join_issues(issues.into_iter()),
            });
        }
        for alpha in space.alphas() {
            let (graph, _) = crate::model::arch::apply_architecture(&space, &alpha)?;
            let report = validate_graph(&graph);
            if !report.is_ok() {
                return Err(Error::InfeasibleSpec {
                    reason: format!(
                        "variant {alpha:?} generates an invalid graph: {}",
                        join_issues(report.violations.iter().map(|v| v.to_string()))
                    ),
                });
            }
        }
        check_platform(&platform)?;
        params.validate()?;
        Ok(Problem {
            instance: ProblemInstance::Space(space),
            platform,
            params,
        })
    }

    pub(crate) fn fixed_parts(&self) -> Result<(&ModelGraph, &QualityRecord)> {
        match &self.instance {
            ProblemInstance::Fixed { graph, quality } => Ok((graph, quality)),
            ProblemInstance::Space(_) => Err(Error::NeedsFixedProblem),
        }
    }

    pub(crate) fn space(&self) -> Result<&ArchitectureSpace> {
        match &self.instance {
            ProblemInstance::Space(space) => Ok(space),
            ProblemInstance::Fixed { .. } => Err(Error::NeedsSpace),
        }
    }
}

fn check_platform(platform: &Platform) -> Result<()> {
    let issues = platform.validate();
    if issues.is_empty() {
        Ok(())
    } else {
        Err(Error::Semantic {
            message: join_issues(issues.into_iter()),
        })
    }
}

fn join_issues(issues: impl Iterator<Item = String>) -> String {
    issues.collect::<Vec<_>>().join("; ")
}

/// One point on a solver's progress curve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectoryPoint {
    pub iteration: u64,
    pub best_objective: f64,
    /// Present only for relaxation-based solvers.
    pub relaxed_objective: Option<f64>,
}

/// Outcome of one solver run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveResult {
    pub method: String,
    pub mapping: Mapping,
    /// Variant choice indices when the problem is a space.
    pub alpha: Option<Vec<usize>>,
    /// Human-readable labels for `alpha`, in decision order.
    pub alpha_labels: Option<Vec<String>>,
    pub objective: f64,
    pub breakdown: ObjectiveBreakdown,
    /// Objective evaluations of any kind, discrete or relaxed forward.
    pub evaluations: u64,
    pub wall_time_s: f64,
    pub trajectory: Vec<TrajectoryPoint>,
    pub seed: Option<u64>,
    pub diagnostics: Vec<String>,
}

/// Uniformly random device per component.
pub fn random_mapping(graph: &ModelGraph, platform: &Platform, rng: &mut impl Rng) -> Mapping {
    let mut devices: Vec<&str> = platform.devices.iter().map(|d| d.id.as_str()).collect();
    devices.sort();
    graph
        .components
        .iter()
        .map(|c| {
            let d = devices[rng.gen_range(0..devices.len())];
            (c.id.clone(), d.to_string())
        })
        .collect()
}

/// Standard normal draw via the Box-Muller transform.
pub(crate) fn gaussian(rng: &mut impl Rng) -> f64 {
    let u1: f64 = rng.gen::<f64>().max(f64::MIN_POSITIVE);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Fast repeated evaluation of a fixed problem's total objective.
pub(crate) struct FixedEval {
    pub(crate) ev: Evaluator,
    pub(crate) sw: f64,
    pub(crate) gamma1: f64,
    pub(crate) gamma2: f64,
}

impl FixedEval {
    pub(crate) fn new(problem: &Problem) -> Result<Self> {
        let (graph, quality) = problem.fixed_parts()?;
        Ok(FixedEval {
            ev: Evaluator::new(graph, &problem.platform)?,
            sw: sw_loss(quality, &problem.params),
            gamma1: problem.params.gamma1,
            gamma2: problem.params.gamma2,
        })
    }

    pub(crate) fn total(&self, assign: &[usize]) -> Result<f64> {
        Ok(self.sw + self.gamma1 * self.ev.hw_value(assign, self.gamma2)?)
    }
}

/// Builds the uniform `SolveResult` tail for a fixed-problem solver.
#[allow(clippy::too_many_arguments)]
pub(crate) fn finish_fixed(
    problem: &Problem,
    method: &str,
    mapping: Mapping,
    evaluations: u64,
    wall_time_s: f64,
    trajectory: Vec<TrajectoryPoint>,
    seed: Option<u64>,
    diagnostics: Vec<String>,
) -> Result<SolveResult> {
    let (graph, quality) = problem.fixed_parts()?;
    let breakdown = total_objective(graph, &problem.platform, &mapping, quality, &problem.params)?;
    Ok(SolveResult {
        method: method.to_string(),
        mapping,
        alpha: None,
        alpha_labels: None,
        objective: breakdown.total,
        breakdown,
        evaluations,
        wall_time_s,
        trajectory,
        seed,
        diagnostics,
    })
}
