//! Shared bench-suite construction and independent oracles.
//!
//! The oracles recompute everything from first principles (explicit path
//! enumeration, odometer-order exhaustive search) and share no code with the
//! crate's evaluator, so agreement is evidence rather than tautology.
#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tandem::io::{gen_instance, GenSpec};
use tandem::model::{Mapping, ModelGraph, ObjectiveParams, Platform, QualityRecord};
use tandem::optim::{random_mapping, Problem, ProblemInstance};

/// The five instance shapes the bench suite cycles through.
pub fn suite_specs() -> Vec<GenSpec> {
    [(6, 2), (7, 2), (8, 3), (6, 3), (7, 3)]
        .iter()
        .map(|&(components, devices)| GenSpec {
            components,
            devices,
            ..GenSpec::default()
        })
        .collect()
}

/// The 50-instance bench suite: spec shape cycles with the seed.
pub fn suite() -> Vec<Problem> {
    let specs = suite_specs();
    (0..50u64)
        .map(|seed| gen_instance(&specs[seed as usize % specs.len()], seed).unwrap())
        .collect()
}

/// Graph and quality record of a fixed problem.
pub fn fixed_parts(problem: &Problem) -> (&ModelGraph, &QualityRecord) {
    match &problem.instance {
        ProblemInstance::Fixed { graph, quality } => (graph, quality),
        ProblemInstance::Space(_) => panic!("expected a fixed problem"),
    }
}

/// Component and device ids in ascending order, the axes shared by soft
/// mappings and the odometer enumeration below.
pub fn axes(graph: &ModelGraph, platform: &Platform) -> (Vec<String>, Vec<String>) {
    let mut comps: Vec<String> = graph.components.iter().map(|c| c.id.clone()).collect();
    comps.sort();
    let mut devs: Vec<String> = platform.devices.iter().map(|d| d.id.clone()).collect();
    devs.sort();
    (comps, devs)
}

fn comp_latency_of(graph: &ModelGraph, platform: &Platform, mapping: &Mapping, id: &str) -> f64 {
    let comp = graph.components.iter().find(|c| c.id == id).unwrap();
    let dev = platform.device(mapping.device_of(id).unwrap()).unwrap();
    comp.work / dev.throughput
}

fn comm_latency_of(
    platform: &Platform,
    mapping: &Mapping,
    src: &str,
    dst: &str,
    volume: f64,
) -> f64 {
    let (a, b) = (mapping.device_of(src).unwrap(), mapping.device_of(dst).unwrap());
    if a == b {
        return 0.0;
    }
    let link = platform.link(a, b).unwrap();
    volume / link.bandwidth + link.hop_latency
}

/// All complete path latencies from `from` to `to` by explicit recursion,
/// each including both endpoint compute latencies. Empty when unreachable.
fn path_latencies(
    graph: &ModelGraph,
    platform: &Platform,
    mapping: &Mapping,
    from: &str,
    to: &str,
) -> Vec<f64> {
    let here = comp_latency_of(graph, platform, mapping, from);
    if from == to {
        return vec![here];
    }
    let mut out = Vec::new();
    for e in graph.edges.iter().filter(|e| e.src == from) {
        for tail in path_latencies(graph, platform, mapping, &e.dst, to) {
            out.push(here + comm_latency_of(platform, mapping, &e.src, &e.dst, e.volume) + tail);
        }
    }
    out
}

/// Critical-path latency of one (modality, sink) pair, or `None` when the
/// sink is unreachable from the modality's entry component.
pub fn oracle_pair_latency(
    graph: &ModelGraph,
    platform: &Platform,
    mapping: &Mapping,
    modality: &str,
    sink: &str,
) -> Option<f64> {
    let entry = graph.modalities.get(modality).unwrap();
    let target = &graph.sinks.get(sink).unwrap().component;
    path_latencies(graph, platform, mapping, entry, target)
        .into_iter()
        .fold(None, |acc, l| Some(acc.map_or(l, |a: f64| a.max(l))))
}

/// Summed power of devices hosting at least one component.
pub fn oracle_power(graph: &ModelGraph, platform: &Platform, mapping: &Mapping) -> f64 {
    let mut used: Vec<&str> = graph
        .components
        .iter()
        .map(|c| mapping.device_of(&c.id).unwrap())
        .collect();
    used.sort();
    used.dedup();
    used.iter()
        .map(|d| platform.device(d).unwrap().power_active)
        .sum()
}

/// Hardware loss from path enumeration; `None` when no pair is reachable.
pub fn oracle_hw(
    graph: &ModelGraph,
    platform: &Platform,
    mapping: &Mapping,
    gamma2: f64,
) -> Option<f64> {
    let mut max = None;
    for modality in graph.modalities.keys() {
        for sink in graph.sinks.keys() {
            if let Some(l) = oracle_pair_latency(graph, platform, mapping, modality, sink) {
                max = Some(max.map_or(l, |m: f64| m.max(l)));
            }
        }
    }
    max.map(|m| m + gamma2 * oracle_power(graph, platform, mapping))
}

pub fn oracle_sw(quality: &QualityRecord, params: &ObjectiveParams) -> f64 {
    let control: f64 = quality.control_losses.values().sum();
    let task: f64 = quality.task_losses.values().sum();
    control + params.lambda * task
}

pub fn oracle_total(
    graph: &ModelGraph,
    platform: &Platform,
    mapping: &Mapping,
    quality: &QualityRecord,
    params: &ObjectiveParams,
) -> Option<f64> {
    oracle_hw(graph, platform, mapping, params.gamma2)
        .map(|hw| oracle_sw(quality, params) + params.gamma1 * hw)
}

fn mapping_of(comps: &[String], devs: &[String], digits: &[usize]) -> Mapping {
    comps
        .iter()
        .zip(digits)
        .map(|(c, &d)| (c.clone(), devs[d].clone()))
        .collect()
}

/// Walks every assignment in lexicographic order (first component most
/// significant, devices ascending) and calls `visit(mapping, weightless)`.
pub fn for_each_mapping(
    graph: &ModelGraph,
    platform: &Platform,
    mut visit: impl FnMut(&Mapping, &[usize]),
) {
    let (comps, devs) = axes(graph, platform);
    let mut digits = vec![0usize; comps.len()];
    loop {
        let mapping = mapping_of(&comps, &devs, &digits);
        visit(&mapping, &digits);
        let mut pos = digits.len();
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < devs.len() {
                break;
            }
            digits[pos] = 0;
        }
    }
}

/// Independent exhaustive optimum: strict improvement keeps the earlier
/// (lexicographically smallest) assignment on ties.
pub fn oracle_brute(problem: &Problem) -> (Mapping, f64) {
    let (graph, quality) = fixed_parts(problem);
    let mut best: Option<(Mapping, f64)> = None;
    for_each_mapping(graph, &problem.platform, |mapping, _| {
        let total = oracle_total(graph, &problem.platform, mapping, quality, &problem.params)
            .expect("suite instances have reachable pairs");
        match &best {
            Some((_, b)) if total >= *b => {}
            _ => best = Some((mapping.clone(), total)),
        }
    });
    best.unwrap()
}

/// Exact probability-weighted expectation of the discrete hardware loss when
/// every component draws its device independently from its `rows` entry.
pub fn oracle_expected_hw(
    graph: &ModelGraph,
    platform: &Platform,
    rows: &[Vec<f64>],
    gamma2: f64,
) -> f64 {
    let mut expectation = 0.0;
    for_each_mapping(graph, platform, |mapping, digits| {
        let weight: f64 = digits.iter().enumerate().map(|(i, &d)| rows[i][d]).product();
        if weight > 0.0 {
            let hw = oracle_hw(graph, platform, mapping, gamma2)
                .expect("instances used here have reachable pairs");
            expectation += weight * hw;
        }
    });
    expectation
}

/// `count` mappings drawn uniformly per component, seeded.
pub fn seeded_random_mappings(
    graph: &ModelGraph,
    platform: &Platform,
    seed: u64,
    count: usize,
) -> Vec<Mapping> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| random_mapping(graph, platform, &mut rng))
        .collect()
}

/// Relative gap of `value` above `baseline` (positive baseline expected).
pub fn rel_gap(value: f64, baseline: f64) -> f64 {
    (value - baseline) / baseline.abs().max(1e-12)
}

pub fn assert_close(a: f64, b: f64, rel: f64, context: &str) {
    let tol = rel * a.abs().max(b.abs()).max(1e-12);
    assert!((a - b).abs() <= tol, "{context}: {a} vs {b} (tol {tol:e})");
}

/// Median with the usual even-length average of the two middle values.
pub fn median(values: &mut [f64]) -> f64 {
    values.sort_by(|a, b| a.total_cmp(b));
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

/// BTreeMap helper for hand-built quality records.
pub fn to_losses(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}
