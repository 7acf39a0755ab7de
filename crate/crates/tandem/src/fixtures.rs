//! Ready-made miniature instances shared by the examples and the test-suite.
//!
//! Both are small enough to check against by hand: the fixed instance has
//! 32 possible mappings, the space has at most a few dozen variants.

use std::collections::BTreeMap;

use crate::model::arch::{
    ArchitectureSpace, BranchedSpec, CrossSpec, DecisionPoint, HeadSpec, ModalitySpec,
    SharingChoice, SharingDecision, StageSpec, VariantQuality,
};
use crate::model::graph::{Component, ComponentKind, Edge, ModelGraph, Sink, SinkKind};
use crate::model::platform::{Device, Link, Platform};
use crate::model::quality::{ObjectiveParams, QualityRecord};

/// Two modalities, a fusion stage, one task head, one control head, on a
/// two-device platform (one fast and hungry, one slow and frugal).
pub fn toy2x2() -> (ModelGraph, Platform, QualityRecord, ObjectiveParams) {
    let graph = ModelGraph {
        components: vec![
            Component {
                id: "A".into(),
                kind: ComponentKind::ModalityNet,
                work: 4.0,
            },
            Component {
                id: "B".into(),
                kind: ComponentKind::ModalityNet,
                work: 2.0,
            },
            Component {
                id: "F".into(),
                kind: ComponentKind::Fusion,
                work: 6.0,
            },
            Component {
                id: "T1".into(),
                kind: ComponentKind::TaskHead,
                work: 2.0,
            },
            Component {
                id: "T2".into(),
                kind: ComponentKind::ControlHead,
                work: 2.0,
            },
        ],
        edges: vec![
            Edge {
                src: "A".into(),
                dst: "F".into(),
                volume: 8.0,
            },
            Edge {
                src: "B".into(),
                dst: "F".into(),
                volume: 8.0,
            },
            Edge {
                src: "F".into(),
                dst: "T1".into(),
                volume: 4.0,
            },
            Edge {
                src: "F".into(),
                dst: "T2".into(),
                volume: 4.0,
            },
        ],
        modalities: [
            ("M1".to_string(), "A".to_string()),
            ("M2".to_string(), "B".to_string()),
        ]
        .into(),
        sinks: [
            (
                "T1".to_string(),
                Sink {
                    component: "T1".into(),
                    kind: SinkKind::Task,
                },
            ),
            (
                "T2".to_string(),
                Sink {
                    component: "T2".into(),
                    kind: SinkKind::Control,
                },
            ),
        ]
        .into(),
    };
    let platform = toy_platform();
    let quality = QualityRecord {
        control_losses: [("T2".to_string(), 0.5)].into(),
        task_losses: [("T1".to_string(), 0.5)].into(),
    };
    (graph, platform, quality, ObjectiveParams::default())
}

/// The two-device platform from `toy2x2`, reusable on its own.
pub fn toy_platform() -> Platform {
    Platform {
        devices: vec![
            Device {
                id: "d0".into(),
                throughput: 2.0,
                power_active: 5.0,
            },
            Device {
                id: "d1".into(),
                throughput: 1.0,
                power_active: 2.0,
            },
        ],
        links: vec![Link {
            a: "d0".into(),
            b: "d1".into(),
            bandwidth: 4.0,
            hop_latency: 0.5,
        }],
    }
}

/// A three-variant architecture space (hard / branched / cross parameter
/// sharing) with one task head and one control head, plus a quality table.
pub fn demo_space() -> (ArchitectureSpace, Platform, ObjectiveParams) {
    let space = ArchitectureSpace {
        modalities: vec![
            ModalitySpec {
                id: "M0".into(),
                work: 4.0,
                volume: 4.0,
            },
            ModalitySpec {
                id: "M1".into(),
                work: 2.0,
                volume: 4.0,
            },
        ],
        fusion: StageSpec {
            work: 6.0,
            volume: 4.0,
        },
        blocks: vec![
            StageSpec {
                work: 5.0,
                volume: 4.0,
            },
            StageSpec {
                work: 5.0,
                volume: 4.0,
            },
        ],
        heads: vec![
            HeadSpec {
                id: "T0".into(),
                kind: SinkKind::Task,
                work: 2.0,
            },
            HeadSpec {
                id: "K0".into(),
                kind: SinkKind::Control,
                work: 2.0,
            },
        ],
        fusion_depth: 0,
        sharing: SharingChoice::Hard,
        decision_points: vec![DecisionPoint::SharingScheme(SharingDecision {
            id: "share".into(),
            choices: vec![
                SharingChoice::Hard,
                SharingChoice::Branched(BranchedSpec { split: 1 }),
                SharingChoice::Cross(CrossSpec {
                    split: 1,
                    extra_volume: 2.0,
                    extra_work: 1.0,
                }),
            ],
        })],
        quality: demo_quality_table(),
    };
    (space, toy_platform(), ObjectiveParams::default())
}

fn demo_quality_table() -> Vec<VariantQuality> {
    // Hard sharing computes least and loses most; cross computes most and
    // loses least.
    let rows = [
        ("hard", 0.60, 0.50),
        ("branched@1", 0.45, 0.40),
        ("cross@1", 0.30, 0.25),
    ];
    rows.iter()
        .map(|(label, task, control)| VariantQuality {
            alpha: vec![label.to_string()],
            quality: QualityRecord {
                control_losses: [("K0".to_string(), *control)].into(),
                task_losses: [("T0".to_string(), *task)].into(),
            },
        })
        .collect()
}

/// Per-sink quality table for a two-head graph, convenient when evaluating a
/// space variant whose heads are named `T0` and `K0`.
pub fn demo_quality(task: f64, control: f64) -> QualityRecord {
    QualityRecord {
        control_losses: [("K0".to_string(), control)].into(),
        task_losses: [("T0".to_string(), task)].into(),
    }
}

/// Quality records keyed by anything, for hand-built graphs.
pub fn quality_of(
    tasks: &[(&str, f64)],
    controls: &[(&str, f64)],
) -> QualityRecord {
    QualityRecord {
        task_losses: to_map(tasks),
        control_losses: to_map(controls),
    }
}

fn to_map(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
    pairs
        .iter()
        .map(|(k, v)| (k.to_string(), *v))
        .collect()
}
