//! The trace document and its frames.

use serde::{Deserialize, Serialize};

use crate::containers::{AccessEvent, ContainerId, ContainerState};
use crate::interp::InterpreterOptions;
use crate::span::SourceSpan;
use crate::value::Value;

/// Version written into every document.
pub const FORMAT_VERSION: &str = "1.0.0";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct TraceDocument {
    pub format_version: String,
    /// Full program text; frame spans index into it.
    pub source: String,
    /// Options the trace was produced with.
    pub options: InterpreterOptions,
    pub frames: Vec<TraceFrame>,
}

impl TraceDocument {
    pub fn new(source: impl Into<String>, options: InterpreterOptions, frames: Vec<TraceFrame>) -> Self {
        Self {
            format_version: FORMAT_VERSION.to_string(),
            source: source.into(),
            options,
            frames,
        }
    }

    pub fn last_frame(&self) -> Option<&TraceFrame> {
        self.frames.last()
    }

    pub fn termination(&self) -> Option<&Termination> {
        self.last_frame().and_then(|f| f.termination.as_ref())
    }

    /// Program output as of the last frame.
    pub fn stdout(&self) -> &str {
        self.last_frame().map_or("", |f| f.stdout_so_far.as_str())
    }
}

/// One step of execution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct TraceFrame {
    pub index: usize,
    /// The statement (or loop/branch header) being executed.
    pub span: SourceSpan,
    pub explanation: String,
    /// Live function frames, outermost first.
    pub stacks: Vec<FunctionFrame>,
    /// Every live container, ordered by id.
    pub containers: Vec<ContainerEntry>,
    pub events: Vec<AccessEvent>,
    pub stdout_so_far: String,
    /// Set on the last frame only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub termination: Option<Termination>,
}

impl TraceFrame {
    pub fn container(&self, id: ContainerId) -> Option<&ContainerEntry> {
        self.containers.iter().find(|c| c.id == id)
    }

    /// The innermost function frame, which is the active one.
    pub fn active_frame(&self) -> Option<&FunctionFrame> {
        self.stacks.last()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct FunctionFrame {
    pub function: String,
    /// Span of the call expression; absent for the entry function.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub call_site: Option<SourceSpan>,
    pub active: bool,
    /// Lexical scopes, outermost (the parameters) first.
    pub scopes: Vec<ScopeBlock>,
}

impl FunctionFrame {
    /// Innermost binding of `name` in this frame.
    pub fn lookup(&self, name: &str) -> Option<&Value> {
        self.scopes.iter().rev().find_map(|s| s.get(name))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScopeBlock {
    /// Bindings in declaration order.
    pub variables: Vec<Binding>,
}

impl ScopeBlock {
    pub fn get(&self, name: &str) -> Option<&Value> {
        self.variables.iter().find(|b| b.name == name).map(|b| &b.value)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Binding {
    pub name: String,
    pub value: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContainerEntry {
    pub id: ContainerId,
    /// Name of the variable that declared the container.
    pub name: String,
    pub state: ContainerState,
}

/// How the trace ended.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "camelCase", rename_all_fields = "camelCase")]
pub enum Termination {
    /// `main` returned.
    Finished { exit_code: i64 },
    RuntimeError {
        kind: RuntimeErrorKind,
        message: String,
        span: SourceSpan,
    },
    /// The frame limit was reached before the program ended.
    Truncated { max_frames: usize },
    /// The document is a window that stops before the end of its trace.
    Partial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RuntimeErrorKind {
    IndexOutOfBounds,
    DivisionByZero,
    IntegerOverflow,
    NonFiniteDouble,
    InputExhausted,
    InvalidInput,
    RecursionDepthExceeded,
    EmptyContainer,
    InvalidSize,
    MissingReturn,
}

impl std::fmt::Display for RuntimeErrorKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        std::fmt::Debug::fmt(self, f)
    }
}
