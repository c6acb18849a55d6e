//! Instrumented interpreter for a C++ teaching subset.
//!
//! Source text is compiled to the canonical code representation ([`ccr`]),
//! executed by the [`interp`] module, and recorded as a frame-by-frame trace
//! document ([`cgr`]) that a stepper can replay.

pub mod ccr;
pub mod containers;
pub mod diag;
pub mod frontend;
pub mod span;
pub mod value;
pub mod cgr;
pub mod interp;
