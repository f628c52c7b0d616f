//! Reversible prime event structures and their two transition-system
//! semantics.
//!
//! - [`kernel`]: structures, axiom validation, classification, conversions.
//! - [`stepsem`]: step semantics over configurations and traces, and the
//!   configuration transition system.
//! - [`residual`]: the trace-indexed removal operator and the residual
//!   transition system.
//! - [`equiv`]: bisimulation and isomorphism of transition systems, and a
//!   semantic audit tying the pieces together.
//! - [`tooling`]: text format, DOT export, random generation and the CLI.

pub mod equiv;
pub mod kernel;
pub mod residual;
pub mod stepsem;
pub mod tooling;
