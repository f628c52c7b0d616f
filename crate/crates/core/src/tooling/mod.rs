//! Text format, DOT export, random generation and the command line.

pub mod cli;
pub mod dot;
pub mod format;
pub mod gen;

pub use dot::export_dot;
pub use format::{
    parse_configuration, parse_raw, parse_rpes, parse_step, parse_trace, serialize_rpes,
    ParseError, RpesDocument,
};
pub use gen::{gen_causal, gen_pes, gen_pes_with_subset, gen_rpes, GenError, GenMode, GenParams};
