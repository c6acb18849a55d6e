//! Source text to CCR: lexing, parsing and validation.

pub mod lexer;
pub mod parser;

pub use lexer::{tokenize, Lexed, Token, TokenKind};
pub use parser::{parse, parse_expression};

use crate::ccr::{validate, CcrProgram};
use crate::diag::Diagnostic;

/// Runs the whole frontend. The program is returned only when no stage
/// reported an error.
pub fn compile(source: &str) -> Result<CcrProgram, Vec<Diagnostic>> {
    let lexed = tokenize(source).map_err(|d| vec![d])?;
    let program = parse(&lexed, source).map_err(|d| vec![d])?;
    let diags = validate(&program);
    if diags.iter().any(Diagnostic::is_error) {
        Err(diags)
    } else {
        Ok(program)
    }
}
