//! The hardware/software cost model: per-component latency, link transfer
//! latency, critical-path latency per (modality, sink) pair, active power,
//! and the scalarized joint objective.
//!
//! Path latencies are computed with a single topological pass per modality,
//! never by enumerating paths.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::graph::ModelGraph;
use crate::model::mapping::Mapping;
use crate::model::platform::Platform;
use crate::model::quality::{ObjectiveParams, QualityRecord};
use crate::model::topological_order;

/// Seconds to run `work` operations at `throughput` operations per second.
pub fn comp_latency(work: f64, throughput: f64) -> f64 {
    work / throughput
}

/// Seconds to move `volume` MB from `src` to `dst`. Zero when both are the
/// same device; otherwise volume / bandwidth + hop latency of their link.
pub fn comm_latency(platform: &Platform, volume: f64, src: &str, dst: &str) -> Result<f64> {
    if src == dst {
        return Ok(0.0);
    }
    let link = platform.link(src, dst).ok_or_else(|| Error::MissingLink {
        a: src.to_string(),
        b: dst.to_string(),
    })?;
    Ok(volume / link.bandwidth + link.hop_latency)
}

/// Latency of one (modality, sink) pair: `None` when the sink's component is
/// unreachable from the modality's entry.
pub fn path_latency(
    graph: &ModelGraph,
    platform: &Platform,
    mapping: &Mapping,
    modality: &str,
    sink: &str,
) -> Result<Option<f64>> {
    let ev = Evaluator::new(graph, platform)?;
    let assign = ev.assignment_of(mapping)?;
    let mi = ev
        .modality_entries
        .iter()
        .position(|(id, _)| id == modality)
        .ok_or_else(|| Error::UnknownModality {
            id: modality.to_string(),
        })?;
    let si = ev
        .sink_nodes
        .iter()
        .position(|(id, _)| id == sink)
        .ok_or_else(|| Error::UnknownSink {
            id: sink.to_string(),
        })?;
    let mut dist = vec![f64::NEG_INFINITY; ev.comp_ids.len()];
    ev.dist_from(mi, &assign, &mut dist);
    let node = ev.sink_nodes[si].1;
    Ok(if ev.reachable[mi][node] {
        Some(dist[node])
    } else {
        None
    })
}

/// Critical-path latency of one (modality, sink) pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairLatency {
    pub modality: String,
    pub sink: String,
    /// `None` marks an unreachable pair, which the max ignores.
    pub latency: Option<f64>,
}

/// Full decomposition of the hardware loss for one mapping.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HwLossBreakdown {
    pub pair_latencies: Vec<PairLatency>,
    pub max_latency: f64,
    pub active_devices: Vec<String>,
    pub total_power: f64,
    pub gamma2: f64,
    pub hw_loss: f64,
}

/// Hardware loss: max critical-path latency over all reachable
/// (modality, sink) pairs plus `gamma2` times the summed power of devices
/// hosting at least one component. Control sinks take part in the max.
pub fn hw_loss(
    graph: &ModelGraph,
    platform: &Platform,
    mapping: &Mapping,
    params: &ObjectiveParams,
) -> Result<HwLossBreakdown> {
    let ev = Evaluator::new(graph, platform)?;
    let assign = ev.assignment_of(mapping)?;
    ev.hw_breakdown(&assign, params.gamma2)
}

/// Software loss: sum of control losses plus `lambda` times the sum of task
/// losses. Quality/sink key agreement is checked where the graph is in scope
/// (`total_objective`, problem construction).
pub fn sw_loss(quality: &QualityRecord, params: &ObjectiveParams) -> f64 {
    let control: f64 = quality.control_losses.values().sum();
    let task: f64 = quality.task_losses.values().sum();
    control + params.lambda * task
}

/// The joint objective for one concrete variant and mapping.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ObjectiveBreakdown {
    pub sw_loss: f64,
    pub hw: HwLossBreakdown,
    pub gamma1: f64,
    pub total: f64,
}

/// total = sw_loss + gamma1 * hw_loss, with every term reported.
pub fn total_objective(
    graph: &ModelGraph,
    platform: &Platform,
    mapping: &Mapping,
    quality: &QualityRecord,
    params: &ObjectiveParams,
) -> Result<ObjectiveBreakdown> {
    params.validate()?;
    quality.validate_for(graph)?;
    mapping.validate_for(graph, platform)?;
    let hw = hw_loss(graph, platform, mapping, params)?;
    let sw = sw_loss(quality, params);
    Ok(ObjectiveBreakdown {
        sw_loss: sw,
        gamma1: params.gamma1,
        total: sw + params.gamma1 * hw.hw_loss,
        hw,
    })
}

/// Precomputed index structures for repeated objective evaluation of one
/// (graph, platform) pair. Components and devices are indexed in ascending id
/// order; that ordering is shared with soft mappings and brute-force
/// enumeration.
pub(crate) struct Evaluator {
    pub(crate) comp_ids: Vec<String>,
    pub(crate) dev_ids: Vec<String>,
    /// Topological order over component indices.
    pub(crate) topo: Vec<usize>,
    /// Per component: (source component, edge index) of each incoming edge.
    pub(crate) incoming: Vec<Vec<(usize, usize)>>,
    /// (src, dst, volume) per edge, indexed as in the input graph.
    pub(crate) edges: Vec<(usize, usize, f64)>,
    /// [component][device] compute latency.
    pub(crate) lat: Vec<Vec<f64>>,
    /// [device][device] reciprocal bandwidth; diagonal zero.
    pub(crate) inv_bw: Vec<Vec<f64>>,
    /// [device][device] hop latency; diagonal zero.
    pub(crate) hop: Vec<Vec<f64>>,
    pub(crate) power: Vec<f64>,
    /// (modality id, entry component) in ascending modality order.
    pub(crate) modality_entries: Vec<(String, usize)>,
    /// (sink id, component) in ascending sink order; includes control sinks.
    pub(crate) sink_nodes: Vec<(String, usize)>,
    /// [modality][component] structural reachability from the entry.
    pub(crate) reachable: Vec<Vec<bool>>,
}

impl Evaluator {
    pub(crate) fn new(graph: &ModelGraph, platform: &Platform) -> Result<Self> {
        let mut comp_ids: Vec<String> = graph.components.iter().map(|c| c.id.clone()).collect();
        comp_ids.sort();
        let comp_index: BTreeMap<String, usize> = comp_ids
            .iter()
            .enumerate()
            .map(|(i, id)| (id.clone(), i))
            .collect();
        let mut works = vec![0.0; comp_ids.len()];
        for c in &graph.components {
            works[comp_index[&c.id]] = c.work;
        }

        let mut dev_ids: Vec<String> = platform.devices.iter().map(|d| d.id.clone()).collect();
        dev_ids.sort();
        let mut throughput = vec![0.0; dev_ids.len()];
        let mut power = vec![0.0; dev_ids.len()];
        for d in &platform.devices {
            let di = dev_ids.binary_search(&d.id).expect("sorted device ids");
            throughput[di] = d.throughput;
            power[di] = d.power_active;
        }

        let lat: Vec<Vec<f64>> = works
            .iter()
            .map(|w| throughput.iter().map(|t| w / t).collect())
            .collect();

        let n_dev = dev_ids.len();
        let mut inv_bw = vec![vec![0.0; n_dev]; n_dev];
        let mut hop = vec![vec![0.0; n_dev]; n_dev];
        for i in 0..n_dev {
            for j in 0..n_dev {
                if i != j {
                    let link = platform.link(&dev_ids[i], &dev_ids[j]).ok_or_else(|| {
                        Error::MissingLink {
                            a: dev_ids[i].clone(),
                            b: dev_ids[j].clone(),
                        }
                    })?;
                    inv_bw[i][j] = 1.0 / link.bandwidth;
                    hop[i][j] = link.hop_latency;
                }
            }
        }

        let mut edges = Vec::with_capacity(graph.edges.len());
        let mut incoming = vec![Vec::new(); comp_ids.len()];
        for e in &graph.edges {
            let src = *comp_index
                .get(&e.src)
                .ok_or_else(|| Error::UnknownComponent { id: e.src.clone() })?;
            let dst = *comp_index
                .get(&e.dst)
                .ok_or_else(|| Error::UnknownComponent { id: e.dst.clone() })?;
            incoming[dst].push((src, edges.len()));
            edges.push((src, dst, e.volume));
        }

        let topo: Vec<usize> = topological_order(graph)?
            .iter()
            .map(|id| comp_index[id])
            .collect();

        let mut modality_entries = Vec::new();
        for (m, comp) in &graph.modalities {
            let node = *comp_index
                .get(comp)
                .ok_or_else(|| Error::UnknownComponent { id: comp.clone() })?;
            modality_entries.push((m.clone(), node));
        }
        let mut sink_nodes = Vec::new();
        for (s, sink) in &graph.sinks {
            let node = *comp_index
                .get(&sink.component)
                .ok_or_else(|| Error::UnknownComponent {
                    id: sink.component.clone(),
                })?;
            sink_nodes.push((s.clone(), node));
        }

        let mut reachable = Vec::with_capacity(modality_entries.len());
        for (_, entry) in &modality_entries {
            let mut seen = vec![false; comp_ids.len()];
            seen[*entry] = true;
            // Topological sweep doubles as BFS on a DAG.
            for &v in &topo {
                if !seen[v] {
                    seen[v] = incoming[v].iter().any(|&(u, _)| seen[u]);
                }
            }
            reachable.push(seen);
        }

        Ok(Evaluator {
            comp_ids,
            dev_ids,
            topo,
            incoming,
            edges,
            lat,
            inv_bw,
            hop,
            power,
            modality_entries,
            sink_nodes,
            reachable,
        })
    }

    pub(crate) fn n_components(&self) -> usize {
        self.comp_ids.len()
    }

    pub(crate) fn n_devices(&self) -> usize {
        self.dev_ids.len()
    }

    /// Dense device assignment for `mapping`, ordered like `comp_ids`.
    pub(crate) fn assignment_of(&self, mapping: &Mapping) -> Result<Vec<usize>> {
        self.comp_ids
            .iter()
            .map(|id| {
                let device = mapping
                    .device_of(id)
                    .ok_or_else(|| Error::UnmappedComponent { id: id.clone() })?;
                self.dev_ids
                    .binary_search_by(|d| d.as_str().cmp(device))
                    .map_err(|_| Error::UnknownDevice {
                        id: device.to_string(),
                    })
            })
            .collect()
    }

    pub(crate) fn mapping_of(&self, assign: &[usize]) -> Mapping {
        self.comp_ids
            .iter()
            .zip(assign)
            .map(|(c, &d)| (c.clone(), self.dev_ids[d].clone()))
            .collect()
    }

    #[inline]
    pub(crate) fn edge_cost(&self, edge: usize, assign: &[usize]) -> f64 {
        let (src, dst, volume) = self.edges[edge];
        let (du, dv) = (assign[src], assign[dst]);
        if du == dv {
            0.0
        } else {
            volume * self.inv_bw[du][dv] + self.hop[du][dv]
        }
    }

    /// Longest-path distances from modality `mi`'s entry; `dist` entries for
    /// unreachable components are left at negative infinity.
    pub(crate) fn dist_from(&self, mi: usize, assign: &[usize], dist: &mut [f64]) {
        dist.fill(f64::NEG_INFINITY);
        let entry = self.modality_entries[mi].1;
        let reach = &self.reachable[mi];
        dist[entry] = self.lat[entry][assign[entry]];
        for &v in &self.topo {
            if v == entry || !reach[v] {
                continue;
            }
            let mut best = f64::NEG_INFINITY;
            for &(u, e) in &self.incoming[v] {
                if reach[u] {
                    let cand = dist[u] + self.edge_cost(e, assign);
                    if cand > best {
                        best = cand;
                    }
                }
            }
            dist[v] = self.lat[v][assign[v]] + best;
        }
    }

    /// Max pair latency and total active power; the scalar fast path used by
    /// the solvers.
    pub(crate) fn hw_value(&self, assign: &[usize], gamma2: f64) -> Result<f64> {
        let mut dist = vec![f64::NEG_INFINITY; self.n_components()];
        let mut max_latency = f64::NEG_INFINITY;
        let mut any = false;
        for mi in 0..self.modality_entries.len() {
            self.dist_from(mi, assign, &mut dist);
            for (si, (_, node)) in self.sink_nodes.iter().enumerate() {
                let _ = si;
                if self.reachable[mi][*node] {
                    any = true;
                    if dist[*node] > max_latency {
                        max_latency = dist[*node];
                    }
                }
            }
        }
        if !any {
            return Err(Error::NoReachablePair);
        }
        Ok(max_latency + gamma2 * self.active_power(assign))
    }

    pub(crate) fn active_power(&self, assign: &[usize]) -> f64 {
        let mut active = vec![false; self.n_devices()];
        for &d in assign {
            active[d] = true;
        }
        let mut total = 0.0;
        for (d, &on) in active.iter().enumerate() {
            if on {
                total += self.power[d];
            }
        }
        total
    }

    pub(crate) fn hw_breakdown(&self, assign: &[usize], gamma2: f64) -> Result<HwLossBreakdown> {
        let mut dist = vec![f64::NEG_INFINITY; self.n_components()];
        let mut pair_latencies = Vec::new();
        let mut max_latency = f64::NEG_INFINITY;
        let mut any = false;
        for (mi, (modality, _)) in self.modality_entries.iter().enumerate() {
            self.dist_from(mi, assign, &mut dist);
            for (sink, node) in &self.sink_nodes {
                let latency = if self.reachable[mi][*node] {
                    any = true;
                    if dist[*node] > max_latency {
                        max_latency = dist[*node];
                    }
                    Some(dist[*node])
                } else {
                    None
                };
                pair_latencies.push(PairLatency {
                    modality: modality.clone(),
                    sink: sink.clone(),
                    latency,
                });
            }
        }
        if !any {
            return Err(Error::NoReachablePair);
        }

        let mut active = vec![false; self.n_devices()];
        for &d in assign {
            active[d] = true;
        }
        let active_devices: Vec<String> = self
            .dev_ids
            .iter()
            .zip(&active)
            .filter(|(_, &on)| on)
            .map(|(id, _)| id.clone())
            .collect();
        let total_power = self.active_power(assign);

        Ok(HwLossBreakdown {
            pair_latencies,
            max_latency,
            active_devices,
            total_power,
            gamma2,
            hw_loss: max_latency + gamma2 * total_power,
        })
    }
}
