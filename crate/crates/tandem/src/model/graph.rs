//! Model graphs: components, data edges, and the modality/sink registry.
//!
//! A graph is plain data and may be constructed in any state; `validate_graph`
//! reports every invariant violation as data rather than failing fast, so
//! callers can surface complete diagnostics.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Role of a component inside the model. Descriptive only; the cost model
/// treats all kinds identically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComponentKind {
    ModalityNet,
    Fusion,
    SharedBackbone,
    TaskHead,
    ControlHead,
}

/// A schedulable unit of computation with a fixed amount of work.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Component {
    pub id: String,
    pub kind: ComponentKind,
    /// Work in operations; latency on a device is work / throughput.
    pub work: f64,
}

/// A directed data dependency carrying `volume` MB from `src` to `dst`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Edge {
    pub src: String,
    pub dst: String,
    pub volume: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SinkKind {
    Task,
    Control,
}

/// An output of the model: the component that produces it and whether it is a
/// task output or a control output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sink {
    pub component: String,
    pub kind: SinkKind,
}

/// A multi-modal multi-task model as a DAG of components.
///
/// `modalities` maps each input modality to its entry component (in-degree 0);
/// `sinks` maps each output to its producing component (out-degree 0).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelGraph {
    pub components: Vec<Component>,
    #[serde(default)]
    pub edges: Vec<Edge>,
    pub modalities: BTreeMap<String, String>,
    pub sinks: BTreeMap<String, Sink>,
}

/// A single invariant violation found by [`validate_graph`].
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    DuplicateComponentId { id: String },
    NegativeWork { id: String, work: f64 },
    NegativeVolume { src: String, dst: String, volume: f64 },
    UnknownEdgeEndpoint { src: String, dst: String, missing: String },
    UnknownModalityComponent { modality: String, component: String },
    UnknownSinkComponent { sink: String, component: String },
    ModalityEntryHasInputs { modality: String, component: String },
    SinkHasOutputs { sink: String, component: String },
    Cycle { component: String },
    DeadComponent { id: String },
    NoModalities,
    NoSinks,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateComponentId { id } => {
                write!(f, "duplicate component id `{id}`")
            }
            Violation::NegativeWork { id, work } => {
                write!(f, "component `{id}` has negative work {work}")
            }
            Violation::NegativeVolume { src, dst, volume } => {
                write!(f, "edge `{src}` -> `{dst}` has negative volume {volume}")
            }
            Violation::UnknownEdgeEndpoint { src, dst, missing } => {
                write!(f, "edge `{src}` -> `{dst}` references unknown component `{missing}`")
            }
            Violation::UnknownModalityComponent { modality, component } => {
                write!(f, "modality `{modality}` references unknown component `{component}`")
            }
            Violation::UnknownSinkComponent { sink, component } => {
                write!(f, "sink `{sink}` references unknown component `{component}`")
            }
            Violation::ModalityEntryHasInputs { modality, component } => {
                write!(f, "modality `{modality}` entry `{component}` has incoming edges")
            }
            Violation::SinkHasOutputs { sink, component } => {
                write!(f, "sink `{sink}` component `{component}` has outgoing edges")
            }
            Violation::Cycle { component } => {
                write!(f, "cycle detected involving component `{component}`")
            }
            Violation::DeadComponent { id } => {
                write!(f, "component `{id}` lies on no modality-to-sink path")
            }
            Violation::NoModalities => write!(f, "graph declares no modalities"),
            Violation::NoSinks => write!(f, "graph declares no sinks"),
        }
    }
}

/// Outcome of [`validate_graph`]: empty means every invariant holds.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl ModelGraph {
    pub fn component(&self, id: &str) -> Option<&Component> {
        self.components.iter().find(|c| c.id == id)
    }
}

/// Checks every `ModelGraph` invariant and reports each violation with the
/// offending element. Never panics on malformed input.
pub fn validate_graph(graph: &ModelGraph) -> ValidationReport {
    let mut violations = Vec::new();

    let mut ids = BTreeSet::new();
    for c in &graph.components {
        if !ids.insert(c.id.as_str()) {
            violations.push(Violation::DuplicateComponentId { id: c.id.clone() });
        }
        // NaN must be rejected too, so the comparison cannot be `< 0.0`.
        if c.work.is_nan() || c.work < 0.0 {
            violations.push(Violation::NegativeWork {
                id: c.id.clone(),
                work: c.work,
            });
        }
    }

    for e in &graph.edges {
        if e.volume.is_nan() || e.volume < 0.0 {
            violations.push(Violation::NegativeVolume {
                src: e.src.clone(),
                dst: e.dst.clone(),
                volume: e.volume,
            });
        }
        for endpoint in [&e.src, &e.dst] {
            if !ids.contains(endpoint.as_str()) {
                violations.push(Violation::UnknownEdgeEndpoint {
                    src: e.src.clone(),
                    dst: e.dst.clone(),
                    missing: endpoint.clone(),
                });
            }
        }
    }

    // Degree counts over edges whose endpoints both exist.
    let mut in_degree: BTreeMap<&str, usize> = ids.iter().map(|&id| (id, 0)).collect();
    let mut out_degree: BTreeMap<&str, usize> = ids.iter().map(|&id| (id, 0)).collect();
    for e in &graph.edges {
        if ids.contains(e.src.as_str()) && ids.contains(e.dst.as_str()) {
            *out_degree.get_mut(e.src.as_str()).unwrap() += 1;
            *in_degree.get_mut(e.dst.as_str()).unwrap() += 1;
        }
    }

    if graph.modalities.is_empty() {
        violations.push(Violation::NoModalities);
    }
    if graph.sinks.is_empty() {
        violations.push(Violation::NoSinks);
    }

    for (m, comp) in &graph.modalities {
        if !ids.contains(comp.as_str()) {
            violations.push(Violation::UnknownModalityComponent {
                modality: m.clone(),
                component: comp.clone(),
            });
        } else if in_degree[comp.as_str()] > 0 {
            violations.push(Violation::ModalityEntryHasInputs {
                modality: m.clone(),
                component: comp.clone(),
            });
        }
    }

    for (s, sink) in &graph.sinks {
        if !ids.contains(sink.component.as_str()) {
            violations.push(Violation::UnknownSinkComponent {
                sink: s.clone(),
                component: sink.component.clone(),
            });
        } else if out_degree[sink.component.as_str()] > 0 {
            violations.push(Violation::SinkHasOutputs {
                sink: s.clone(),
                component: sink.component.clone(),
            });
        }
    }

    if let Err(cycle_member) = kahn_order(graph) {
        violations.push(Violation::Cycle {
            component: cycle_member,
        });
    } else {
        // Liveness is only meaningful on acyclic graphs: a component must sit
        // on at least one modality-to-sink path.
        let forward = reachable_from(
            graph,
            graph.modalities.values().map(String::as_str),
            Direction::Forward,
        );
        let backward = reachable_from(
            graph,
            graph.sinks.values().map(|s| s.component.as_str()),
            Direction::Backward,
        );
        for c in &graph.components {
            let live = forward.contains(c.id.as_str()) && backward.contains(c.id.as_str());
            if !live && ids.contains(c.id.as_str()) {
                violations.push(Violation::DeadComponent { id: c.id.clone() });
            }
        }
    }

    ValidationReport { violations }
}

/// Deterministic topological order: ready components are emitted in ascending
/// id order. Fails on cycles, naming a component inside one.
pub fn topological_order(graph: &ModelGraph) -> Result<Vec<String>> {
    kahn_order(graph).map_err(|component| Error::Cycle { component })
}

/// Kahn's algorithm with a sorted ready set. Err carries the smallest id left
/// unprocessed, which is always a member of some cycle's reachability closure.
fn kahn_order(graph: &ModelGraph) -> std::result::Result<Vec<String>, String> {
    let ids: BTreeSet<&str> = graph.components.iter().map(|c| c.id.as_str()).collect();
    let mut in_degree: BTreeMap<&str, usize> = ids.iter().map(|&id| (id, 0)).collect();
    let mut successors: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for e in &graph.edges {
        if ids.contains(e.src.as_str()) && ids.contains(e.dst.as_str()) {
            *in_degree.get_mut(e.dst.as_str()).unwrap() += 1;
            successors.entry(e.src.as_str()).or_default().push(e.dst.as_str());
        }
    }

    let mut ready: BTreeSet<&str> = in_degree
        .iter()
        .filter(|(_, &d)| d == 0)
        .map(|(&id, _)| id)
        .collect();
    let mut order = Vec::with_capacity(ids.len());
    while let Some(&next) = ready.iter().next() {
        ready.remove(next);
        order.push(next.to_string());
        if let Some(succ) = successors.get(next) {
            for &v in succ {
                let d = in_degree.get_mut(v).unwrap();
                *d -= 1;
                if *d == 0 {
                    ready.insert(v);
                }
            }
        }
    }

    if order.len() == ids.len() {
        Ok(order)
    } else {
        let leftover = in_degree
            .iter()
            .filter(|(_, &d)| d > 0)
            .map(|(&id, _)| id)
            .next()
            .expect("leftover node must exist when order is incomplete");
        Err(leftover.to_string())
    }
}

enum Direction {
    Forward,
    Backward,
}

fn reachable_from<'g>(
    graph: &'g ModelGraph,
    roots: impl Iterator<Item = &'g str>,
    direction: Direction,
) -> BTreeSet<&'g str> {
    let ids: BTreeSet<&str> = graph.components.iter().map(|c| c.id.as_str()).collect();
    let mut adjacency: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for e in &graph.edges {
        if ids.contains(e.src.as_str()) && ids.contains(e.dst.as_str()) {
            let (from, to) = match direction {
                Direction::Forward => (e.src.as_str(), e.dst.as_str()),
                Direction::Backward => (e.dst.as_str(), e.src.as_str()),
            };
            adjacency.entry(from).or_default().push(to);
        }
    }

    let mut seen = BTreeSet::new();
    let mut queue: VecDeque<&str> = roots.filter(|r| ids.contains(r)).collect();
    while let Some(node) = queue.pop_front() {
        if !seen.insert(node) {
            continue;
        }
        if let Some(next) = adjacency.get(node) {
            for &v in next {
                if !seen.contains(v) {
                    queue.push_back(v);
                }
            }
        }
    }
    seen
}
