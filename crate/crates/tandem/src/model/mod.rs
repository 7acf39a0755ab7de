//! Core domain types: model graphs, platforms, mappings, architecture spaces,
//! quality records, and objective weights.

pub mod arch;
pub mod graph;
pub mod mapping;
pub mod platform;
pub mod quality;

pub use arch::{
    apply_architecture, ArchitectureSpace, BranchedSpec, CrossSpec, DecisionPoint,
    FusionDepthDecision, HeadSpec, ModalitySpec, SharingChoice, SharingDecision, StageSpec,
    VariantQuality,
};
pub use graph::{
    topological_order, validate_graph, Component, ComponentKind, Edge, ModelGraph, Sink, SinkKind,
    ValidationReport, Violation,
};
pub use mapping::Mapping;
pub use platform::{Device, Link, Platform};
pub use quality::{ObjectiveParams, QualityRecord};
