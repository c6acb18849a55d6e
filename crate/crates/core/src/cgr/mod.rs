//! Canonical graphics representation: the trace document a stepper replays.
//!
//! A document holds the program source, the options used to run it and one
//! frame per execution step. Each frame is self-contained: it carries the
//! full call stack, a snapshot of every live container and the accesses made
//! during that step.

mod check;
mod codec;
mod model;
mod view;

pub use check::{validate_document, TraceDiagnostic, TraceDiagnosticKind};
pub use codec::{deserialize, serialize, version_supported, CgrError, StreamWriter};
pub use model::*;
pub use view::{peek_usage, window};
