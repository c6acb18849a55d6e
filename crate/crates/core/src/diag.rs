//! Compile-time diagnostics shared by the lexer, parser and validator.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::span::SourceSpan;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

/// Machine-readable diagnostic code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DiagnosticKind {
    // lexer
    UnterminatedString,
    UnterminatedChar,
    UnterminatedComment,
    UnknownCharacter,
    InvalidLiteral,
    UnsupportedDirective,
    // parser
    SyntaxError,
    // validator
    MissingEntry,
    BadEntrySignature,
    DuplicateFunction,
    DuplicateParameter,
    Redeclaration,
    UnresolvedName,
    UnresolvedFunction,
    TypeMismatch,
    IllegalMethod,
    ArityMismatch,
    NestedContainer,
    IllegalKeyType,
    ContainerByValue,
    ScalarByReference,
    ContainerReturn,
    InvalidAssignTarget,
    SpanOutOfBounds,
}

impl fmt::Display for DiagnosticKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub kind: DiagnosticKind,
    pub message: String,
    pub span: SourceSpan,
    /// Tokens that would have been accepted; only filled for syntax errors.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub expected: Vec<String>,
}

impl Diagnostic {
    pub fn error(kind: DiagnosticKind, span: SourceSpan, message: impl Into<String>) -> Self {
        Self {
            severity: Severity::Error,
            kind,
            message: message.into(),
            span,
            expected: Vec::new(),
        }
    }

    pub fn with_expected(mut self, expected: Vec<String>) -> Self {
        self.expected = expected;
        self
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let severity = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(
            f,
            "{}:{}: {}[{}]: {}",
            self.span.start_line, self.span.start_col, severity, self.kind, self.message
        )
    }
}
