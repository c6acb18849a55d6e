//! Maximal-munch tokenizer.
//!
//! Whitespace, comments and `#include` lines are kept as trivia attached to
//! the following token, so the token stream reproduces the source exactly.

use serde::{Deserialize, Serialize};

use crate::diag::{Diagnostic, DiagnosticKind};
use crate::span::SourceSpan;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TokenKind {
    Keyword,
    Identifier,
    IntLiteral,
    DoubleLiteral,
    CharLiteral,
    StringLiteral,
    Operator,
    Punctuation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub kind: TokenKind,
    pub lexeme: String,
    pub span: SourceSpan,
    /// Whitespace, comments and directives between the previous token and
    /// this one.
    pub trivia: String,
}

impl Token {
    pub fn is(&self, kind: TokenKind, lexeme: &str) -> bool {
        self.kind == kind && self.lexeme == lexeme
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Lexed {
    pub tokens: Vec<Token>,
    /// Trivia after the last token.
    pub trailing_trivia: String,
}

impl Lexed {
    /// Reassembles the source text.
    pub fn reconstruct(&self) -> String {
        let mut out = String::new();
        for t in &self.tokens {
            out.push_str(&t.trivia);
            out.push_str(&t.lexeme);
        }
        out.push_str(&self.trailing_trivia);
        out
    }
}

pub const KEYWORDS: &[&str] = &[
    "int",
    "long",
    "bool",
    "char",
    "double",
    "string",
    "void",
    "const",
    "if",
    "else",
    "while",
    "for",
    "return",
    "true",
    "false",
    "cout",
    "cin",
    "endl",
    "using",
    "namespace",
    "vector",
    "stack",
    "queue",
    "deque",
    "map",
    "unordered_map",
];

const OPERATORS_2: &[&str] = &[
    "<=", ">=", "==", "!=", "&&", "||", "+=", "-=", "*=", "/=", "%=", "++", "--", "<<", ">>", "::",
];
const OPERATORS_1: &[char] = &['+', '-', '*', '/', '%', '<', '>', '!', '=', '.', '&'];
const PUNCTUATION: &[char] = &['(', ')', '{', '}', '[', ']', ';', ','];

pub fn tokenize(source: &str) -> Result<Lexed, Diagnostic> {
    Lexer::new(source).run()
}

struct Lexer {
    chars: Vec<char>,
    pos: usize,
    line: u32,
    col: u32,
    /// Only whitespace seen since the last newline.
    at_line_start: bool,
}

impl Lexer {
    fn new(source: &str) -> Self {
        Self {
            chars: source.chars().collect(),
            pos: 0,
            line: 1,
            col: 1,
            at_line_start: true,
        }
    }

    fn peek(&self, ahead: usize) -> Option<char> {
        self.chars.get(self.pos + ahead).copied()
    }

    fn bump(&mut self) -> char {
        let c = self.chars[self.pos];
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
            self.at_line_start = true;
        } else {
            self.col += 1;
            if !c.is_whitespace() {
                self.at_line_start = false;
            }
        }
        c
    }

    fn here(&self) -> (u32, u32) {
        (self.line, self.col)
    }

    fn span_from(&self, start: (u32, u32)) -> SourceSpan {
        // The last consumed character ends the span.
        let (end_line, end_col) = if self.col > 1 {
            (self.line, self.col - 1)
        } else {
            let prev_line_len = self.chars[..self.pos - 1]
                .iter()
                .rev()
                .take_while(|&&c| c != '\n')
                .count() as u32;
            (self.line - 1, prev_line_len + 1)
        };
        SourceSpan::new(start.0, start.1, end_line, end_col)
    }

    fn point(&self) -> SourceSpan {
        SourceSpan::new(self.line, self.col, self.line, self.col)
    }

    fn error(&self, kind: DiagnosticKind, span: SourceSpan, message: impl Into<String>) -> Diagnostic {
        Diagnostic::error(kind, span, message)
    }

    fn run(mut self) -> Result<Lexed, Diagnostic> {
        let mut tokens = Vec::new();
        loop {
            let trivia = self.trivia()?;
            if self.pos >= self.chars.len() {
                return Ok(Lexed {
                    tokens,
                    trailing_trivia: trivia,
                });
            }
            let start = self.here();
            let start_pos = self.pos;
            let kind = self.token()?;
            let lexeme: String = self.chars[start_pos..self.pos].iter().collect();
            tokens.push(Token {
                kind,
                lexeme,
                span: self.span_from(start),
                trivia,
            });
        }
    }

    fn trivia(&mut self) -> Result<String, Diagnostic> {
        let start_pos = self.pos;
        while let Some(c) = self.peek(0) {
            if c.is_whitespace() {
                self.bump();
            } else if c == '/' && self.peek(1) == Some('/') {
                while self.peek(0).is_some_and(|c| c != '\n') {
                    self.bump();
                }
            } else if c == '/' && self.peek(1) == Some('*') {
                let start = self.here();
                self.bump();
                self.bump();
                loop {
                    match self.peek(0) {
                        None => {
                            return Err(self.error(
                                DiagnosticKind::UnterminatedComment,
                                SourceSpan::new(start.0, start.1, start.0, start.1 + 1),
                                "unterminated block comment",
                            ))
                        }
                        Some('*') if self.peek(1) == Some('/') => {
                            self.bump();
                            self.bump();
                            break;
                        }
                        Some(_) => {
                            self.bump();
                        }
                    }
                }
            } else if c == '#' && self.at_line_start {
                let start = self.here();
                let line_start = self.pos;
                while self.peek(0).is_some_and(|c| c != '\n') {
                    self.bump();
                }
                let directive: String = self.chars[line_start..self.pos].iter().collect();
                let name = directive[1..].trim_start();
                if !name.starts_with("include") {
                    return Err(self.error(
                        DiagnosticKind::UnsupportedDirective,
                        self.span_from(start),
                        format!("unsupported preprocessor directive `{}`", directive.trim_end()),
                    ));
                }
            } else {
                break;
            }
        }
        Ok(self.chars[start_pos..self.pos].iter().collect())
    }

    fn token(&mut self) -> Result<TokenKind, Diagnostic> {
        let c = self.peek(0).expect("not at end");
        if c.is_ascii_alphabetic() || c == '_' {
            let start = self.pos;
            while self.peek(0).is_some_and(|c| c.is_ascii_alphanumeric() || c == '_') {
                self.bump();
            }
            let word: String = self.chars[start..self.pos].iter().collect();
            return Ok(if KEYWORDS.contains(&word.as_str()) {
                TokenKind::Keyword
            } else {
                TokenKind::Identifier
            });
        }
        if c.is_ascii_digit() || (c == '.' && self.peek(1).is_some_and(|d| d.is_ascii_digit())) {
            return self.number();
        }
        if c == '\'' {
            return self.char_literal();
        }
        if c == '"' {
            return self.string_literal();
        }
        if let Some(next) = self.peek(1) {
            let pair: String = [c, next].iter().collect();
            if OPERATORS_2.contains(&pair.as_str()) {
                self.bump();
                self.bump();
                return Ok(TokenKind::Operator);
            }
        }
        if OPERATORS_1.contains(&c) {
            self.bump();
            return Ok(TokenKind::Operator);
        }
        if PUNCTUATION.contains(&c) {
            self.bump();
            return Ok(TokenKind::Punctuation);
        }
        Err(self.error(
            DiagnosticKind::UnknownCharacter,
            self.point(),
            format!("unexpected character {c:?}"),
        ))
    }

    fn digits(&mut self) -> usize {
        let start = self.pos;
        while self.peek(0).is_some_and(|c| c.is_ascii_digit()) {
            self.bump();
        }
        self.pos - start
    }

    fn number(&mut self) -> Result<TokenKind, Diagnostic> {
        let start = self.here();
        let start_pos = self.pos;
        let mut is_double = false;
        self.digits();
        if self.peek(0) == Some('.') {
            is_double = true;
            self.bump();
            self.digits();
        }
        if matches!(self.peek(0), Some('e' | 'E')) {
            let sign = usize::from(matches!(self.peek(1), Some('+' | '-')));
            if self.peek(1 + sign).is_some_and(|c| c.is_ascii_digit()) {
                is_double = true;
                self.bump();
                if sign == 1 {
                    self.bump();
                }
                self.digits();
            }
        }
        if self.peek(0).is_some_and(|c| c.is_ascii_alphanumeric() || c == '_') {
            while self.peek(0).is_some_and(|c| c.is_ascii_alphanumeric() || c == '_') {
                self.bump();
            }
            let text: String = self.chars[start_pos..self.pos].iter().collect();
            return Err(self.error(
                DiagnosticKind::InvalidLiteral,
                self.span_from(start),
                format!("invalid numeric literal `{text}`"),
            ));
        }
        let text: String = self.chars[start_pos..self.pos].iter().collect();
        if is_double {
            if text.parse::<f64>().map_or(true, |v| !v.is_finite()) {
                return Err(self.error(
                    DiagnosticKind::InvalidLiteral,
                    self.span_from(start),
                    format!("floating literal `{text}` is out of range"),
                ));
            }
            Ok(TokenKind::DoubleLiteral)
        } else {
            if text.parse::<i64>().is_err() {
                return Err(self.error(
                    DiagnosticKind::InvalidLiteral,
                    self.span_from(start),
                    format!("integer literal `{text}` does not fit in 64 bits"),
                ));
            }
            Ok(TokenKind::IntLiteral)
        }
    }

    /// Consumes one possibly-escaped character inside a quoted literal.
    fn quoted_char(&mut self, quote: char, kind: DiagnosticKind, start: (u32, u32)) -> Result<char, Diagnostic> {
        let what = if quote == '"' { "string" } else { "character" };
        match self.peek(0) {
            None | Some('\n') => Err(self.error(
                kind,
                SourceSpan::new(start.0, start.1, start.0, start.1),
                format!("unterminated {what} literal"),
            )),
            Some('\\') => {
                let esc_start = self.here();
                self.bump();
                let Some(e) = self.peek(0).filter(|&c| c != '\n') else {
                    return Err(self.error(
                        kind,
                        SourceSpan::new(start.0, start.1, start.0, start.1),
                        format!("unterminated {what} literal"),
                    ));
                };
                self.bump();
                unescape(e).ok_or_else(|| {
                    self.error(
                        DiagnosticKind::InvalidLiteral,
                        self.span_from(esc_start),
                        format!("unknown escape sequence `\\{e}`"),
                    )
                })
            }
            Some(c) => {
                self.bump();
                Ok(c)
            }
        }
    }

    fn char_literal(&mut self) -> Result<TokenKind, Diagnostic> {
        let start = self.here();
        self.bump();
        if self.peek(0) == Some('\'') {
            self.bump();
            return Err(self.error(
                DiagnosticKind::InvalidLiteral,
                self.span_from(start),
                "empty character literal",
            ));
        }
        let c = self.quoted_char('\'', DiagnosticKind::UnterminatedChar, start)?;
        if self.peek(0) != Some('\'') {
            return Err(self.error(
                DiagnosticKind::UnterminatedChar,
                SourceSpan::new(start.0, start.1, start.0, start.1),
                "unterminated character literal",
            ));
        }
        self.bump();
        if !c.is_ascii() {
            return Err(self.error(
                DiagnosticKind::InvalidLiteral,
                self.span_from(start),
                "character literals must be ASCII",
            ));
        }
        Ok(TokenKind::CharLiteral)
    }

    fn string_literal(&mut self) -> Result<TokenKind, Diagnostic> {
        let start = self.here();
        self.bump();
        while self.peek(0) != Some('"') {
            self.quoted_char('"', DiagnosticKind::UnterminatedString, start)?;
        }
        self.bump();
        Ok(TokenKind::StringLiteral)
    }
}

fn unescape(c: char) -> Option<char> {
    Some(match c {
        'n' => '\n',
        't' => '\t',
        'r' => '\r',
        '0' => '\0',
        '\\' => '\\',
        '\'' => '\'',
        '"' => '"',
        _ => return None,
    })
}

/// Decodes the body of a char or string literal lexeme (quotes included).
/// The lexer has already checked it.
pub fn decode_quoted(lexeme: &str) -> String {
    let body = &lexeme[1..lexeme.len() - 1];
    let mut out = String::with_capacity(body.len());
    let mut chars = body.chars();
    while let Some(c) = chars.next() {
        if c == '\\' {
            out.extend(chars.next().and_then(unescape));
        } else {
            out.push(c);
        }
    }
    out
}
