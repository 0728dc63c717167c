// Checks such as `!(x > 0.0)` are written that way so NaN fails them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod attribution;
pub mod blink;
pub mod cull;
pub mod eda;
pub mod eog;
pub mod error;
pub mod pipeline;
pub mod signal;
pub mod surveys;
pub mod synth;

/// Library version, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
