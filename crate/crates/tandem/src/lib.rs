//! Joint search over multi-modal multi-task model variants and their mapping
//! onto heterogeneous hardware.
//!
//! The library models a variant as a DAG of components with per-device
//! compute latency and per-link transfer latency, scores a (variant, mapping)
//! pair with `sw_loss + gamma1 * hw_loss`, and searches the mapping space with
//! exact enumeration, annealing, an evolutionary solver, and a differentiable
//! relaxation. See the `examples/` directory for one runnable entry point per
//! capability.

pub mod cli;
pub mod cost;
pub mod error;
pub mod fixtures;
pub mod io;
pub mod model;
pub mod optim;
pub mod relax;

pub use error::{Error, Result};
