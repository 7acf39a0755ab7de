//! Error type shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cycle detected involving component `{component}`")]
    Cycle { component: String },

    #[error("no link between devices `{a}` and `{b}`")]
    MissingLink { a: String, b: String },

    #[error("unknown component `{id}`")]
    UnknownComponent { id: String },

    #[error("unknown device `{id}`")]
    UnknownDevice { id: String },

    #[error("unknown modality `{id}`")]
    UnknownModality { id: String },

    #[error("unknown sink `{id}`")]
    UnknownSink { id: String },

    #[error("mapping is missing an assignment for component `{id}`")]
    UnmappedComponent { id: String },

    #[error("quality key missing: {key}")]
    QualityKeyMissing { key: String },

    #[error("quality entry `{key}` matches no sink")]
    QualityKeyUnknown { key: String },

    #[error("alpha has {got} entries but the space has {expected} decision points")]
    AlphaLength { expected: usize, got: usize },

    #[error("alpha[{index}] = {got} is out of range: decision `{decision}` has {available} choices")]
    AlphaOutOfRange {
        index: usize,
        decision: String,
        got: usize,
        available: usize,
    },

    #[error("unknown choice label `{label}` for decision `{decision}`")]
    UnknownChoiceLabel { decision: String, label: String },

    #[error("decision `{decision}` uses unsupported sharing scheme `{scheme}`")]
    UnsupportedScheme { decision: String, scheme: String },

    #[error("smooth_max over an empty value list")]
    EmptyValues,

    #[error("n_samples must be >= 1")]
    ZeroSamples,

    #[error("non-finite value encountered in {context}")]
    NonFinite { context: String },

    #[error("search space has {size:.0} mappings, above the limit of {limit}; use a heuristic solver")]
    BruteForceLimit { size: f64, limit: u64 },

    #[error("architecture space has {count} variants, above the enumerate cap of {cap}; use joint-relaxed co-search")]
    VariantCapExceeded { count: u128, cap: u128 },

    #[error("this solver needs a fixed-graph problem; use co-search for architecture spaces")]
    NeedsFixedProblem,

    #[error("co-search needs a problem with an architecture space")]
    NeedsSpace,

    #[error("no modality/sink pair is reachable; the latency objective is undefined")]
    NoReachablePair,

    #[error("JSON syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("schema violation at {location}: {message}")]
    Schema { location: String, message: String },

    #[error("semantic violation: {message}")]
    Semantic { message: String },

    #[error("infeasible generator spec: {reason}")]
    InfeasibleSpec { reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
