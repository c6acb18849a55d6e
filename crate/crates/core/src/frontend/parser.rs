//! Recursive-descent parser producing the CCR.
//!
//! The grammar is published in `docs/grammar.ebnf`. Parsing stops at the
//! first syntax error.

use crate::ccr::*;
use crate::containers::ContainerKind;
use crate::diag::{Diagnostic, DiagnosticKind};
use crate::span::SourceSpan;

use super::lexer::{decode_quoted, Lexed, Token, TokenKind};

type PResult<T> = Result<T, Diagnostic>;

/// Parses a whole translation unit.
pub fn parse(lexed: &Lexed, source_text: &str) -> PResult<CcrProgram> {
    let mut parser = Parser::new(lexed.tokens.clone(), source_text);
    parser.program(source_text)
}

/// Parses a single expression; the whole token stream must be consumed.
pub fn parse_expression(lexed: &Lexed) -> PResult<Expr> {
    let mut parser = Parser::new(lexed.tokens.clone(), "");
    let expr = parser.expr()?;
    parser.expect_end()?;
    Ok(expr)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    /// Span of the most recently consumed token.
    last: SourceSpan,
    /// Position just past the end of input, for end-of-file errors.
    eof: SourceSpan,
}

fn binary(op: BinaryOp, lhs: Expr, rhs: Expr) -> Expr {
    let span = lhs.span.to(rhs.span);
    Expr::new(
        ExprKind::Binary {
            op,
            lhs: Box::new(lhs),
            rhs: Box::new(rhs),
        },
        span,
    )
}

const SCALAR_TYPE_WORDS: &[&str] = &["int", "long", "bool", "char", "double", "string"];

impl Parser {
    fn new(tokens: Vec<Token>, source: &str) -> Self {
        let lines = crate::span::line_count(source).max(1) as u32;
        let last_len = source.lines().last().map_or(0, |l| l.chars().count()) as u32;
        let eof = match tokens.last() {
            Some(t) if source.is_empty() => {
                SourceSpan::new(t.span.end_line, t.span.end_col + 1, t.span.end_line, t.span.end_col + 1)
            }
            _ => SourceSpan::new(lines, last_len + 1, lines, last_len + 1),
        };
        Self {
            tokens,
            pos: 0,
            last: SourceSpan::new(1, 1, 1, 1),
            eof,
        }
    }

    // ---- token helpers ----

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn peek_at(&self, ahead: usize) -> Option<&Token> {
        self.tokens.get(self.pos + ahead)
    }

    fn check(&self, lexeme: &str) -> bool {
        self.peek().is_some_and(|t| {
            t.lexeme == lexeme
                && !matches!(
                    t.kind,
                    TokenKind::StringLiteral | TokenKind::CharLiteral | TokenKind::Identifier
                )
        })
    }

    fn check_at(&self, ahead: usize, lexeme: &str) -> bool {
        self.peek_at(ahead).is_some_and(|t| {
            t.lexeme == lexeme && matches!(t.kind, TokenKind::Keyword | TokenKind::Operator | TokenKind::Punctuation)
        })
    }

    fn advance(&mut self) -> Token {
        let tok = self.tokens[self.pos].clone();
        self.pos += 1;
        self.last = tok.span;
        tok
    }

    fn eat(&mut self, lexeme: &str) -> bool {
        if self.check(lexeme) {
            self.advance();
            true
        } else {
            false
        }
    }

    fn here(&self) -> SourceSpan {
        self.peek().map_or(self.eof, |t| t.span)
    }

    fn unexpected(&self, expected: &[&str]) -> Diagnostic {
        let found = self
            .peek()
            .map_or_else(|| "end of input".to_string(), |t| format!("`{}`", t.lexeme));
        let list = expected
            .iter()
            .map(|e| if e.chars().all(|c| c.is_alphanumeric() || c == '_') && !is_word(e) {
                (*e).to_string()
            } else {
                format!("`{e}`")
            })
            .collect::<Vec<_>>()
            .join(" or ");
        Diagnostic::error(
            DiagnosticKind::SyntaxError,
            self.here(),
            format!("expected {list}, found {found}"),
        )
        .with_expected(expected.iter().map(|e| e.to_string()).collect())
    }

    fn expect(&mut self, lexeme: &str) -> PResult<SourceSpan> {
        if self.eat(lexeme) {
            Ok(self.last)
        } else {
            Err(self.unexpected(&[lexeme]))
        }
    }

    fn expect_ident(&mut self) -> PResult<Ident> {
        match self.peek() {
            Some(t) if t.kind == TokenKind::Identifier => {
                let t = self.advance();
                Ok(Ident::new(t.lexeme, t.span))
            }
            _ => Err(self.unexpected(&["identifier"])),
        }
    }

    fn expect_end(&self) -> PResult<()> {
        match self.peek() {
            None => Ok(()),
            Some(_) => Err(self.unexpected(&["end of input"])),
        }
    }

    /// Skips an optional `std::` qualifier.
    fn skip_std(&mut self) -> PResult<()> {
        if self.peek().is_some_and(|t| t.is(TokenKind::Identifier, "std")) && self.check_at(1, "::") {
            self.advance();
            self.advance();
        }
        Ok(())
    }

    fn std_then(&self, lexeme: &str) -> bool {
        self.check(lexeme)
            || (self.peek().is_some_and(|t| t.is(TokenKind::Identifier, "std"))
                && self.check_at(1, "::")
                && self.check_at(2, lexeme))
    }

    // ---- program structure ----

    fn program(&mut self, source_text: &str) -> PResult<CcrProgram> {
        let mut functions = Vec::new();
        while self.peek().is_some() {
            if self.eat("using") {
                self.expect("namespace")?;
                self.expect_ident()?;
                self.expect(";")?;
                continue;
            }
            functions.push(self.function()?);
        }
        Ok(CcrProgram {
            functions,
            entry: ENTRY.to_string(),
            source_text: source_text.to_string(),
        })
    }

    fn starts_type(&self) -> bool {
        let offset = if self.peek().is_some_and(|t| t.is(TokenKind::Identifier, "std")) && self.check_at(1, "::") {
            2
        } else {
            0
        };
        self.peek_at(offset).is_some_and(|t| {
            t.kind == TokenKind::Keyword
                && (SCALAR_TYPE_WORDS.contains(&t.lexeme.as_str())
                    || ContainerKind::from_name(&t.lexeme).is_some()
                    || t.lexeme == "const")
        })
    }

    fn function(&mut self) -> PResult<FunctionDef> {
        let start = self.here();
        self.eat("const");
        let return_type = if self.eat("void") {
            None
        } else if self.starts_type() {
            Some(self.type_tag()?)
        } else {
            return Err(self.unexpected(&["type", "using"]));
        };
        let name = self.expect_ident()?;
        self.expect("(")?;
        let mut params = Vec::new();
        if !self.check(")") {
            loop {
                params.push(self.param()?);
                if !self.eat(",") {
                    break;
                }
            }
        }
        self.expect(")")?;
        let body = self.block(BlockOrigin::Source)?;
        Ok(FunctionDef {
            name,
            params,
            return_type,
            span: start.to(self.last),
            body,
        })
    }

    fn param(&mut self) -> PResult<Param> {
        let start = self.here();
        self.eat("const");
        if !self.starts_type() {
            return Err(self.unexpected(&["type"]));
        }
        let ty = self.type_tag()?;
        let by_ref = self.eat("&");
        let name = self.expect_ident()?;
        Ok(Param {
            name,
            ty,
            by_ref,
            span: start.to(self.last),
        })
    }

    fn type_tag(&mut self) -> PResult<TypeTag> {
        self.skip_std()?;
        let Some(tok) = self.peek().filter(|t| t.kind == TokenKind::Keyword).cloned() else {
            return Err(self.unexpected(&["type"]));
        };
        let scalar = match tok.lexeme.as_str() {
            "int" => Some(TypeTag::Int),
            "long" => {
                self.advance();
                self.eat("long");
                self.eat("int");
                return Ok(TypeTag::Int);
            }
            "bool" => Some(TypeTag::Bool),
            "char" => Some(TypeTag::Char),
            "double" => Some(TypeTag::Double),
            "string" => Some(TypeTag::String),
            _ => None,
        };
        if let Some(ty) = scalar {
            self.advance();
            return Ok(ty);
        }
        let Some(kind) = ContainerKind::from_name(&tok.lexeme) else {
            return Err(self.unexpected(&["type"]));
        };
        self.advance();
        self.expect("<")?;
        let first = self.type_tag()?;
        let (key, elem) = if kind.is_keyed() {
            self.expect(",")?;
            (Some(first), self.type_tag()?)
        } else {
            (None, first)
        };
        self.close_angle()?;
        Ok(TypeTag::container(kind, key, elem))
    }

    /// Accepts `>`, splitting a `>>` token in nested template arguments.
    fn close_angle(&mut self) -> PResult<()> {
        if self.check(">>") {
            let tok = &mut self.tokens[self.pos];
            let first = SourceSpan::new(tok.span.start_line, tok.span.start_col, tok.span.start_line, tok.span.start_col);
            tok.lexeme = ">".into();
            tok.span = SourceSpan::new(
                tok.span.end_line,
                tok.span.end_col,
                tok.span.end_line,
                tok.span.end_col,
            );
            tok.trivia.clear();
            self.last = first;
            return Ok(());
        }
        self.expect(">").map(|_| ())
    }

    fn block(&mut self, origin: BlockOrigin) -> PResult<Block> {
        let open = self.expect("{")?;
        let mut stmts = Vec::new();
        while !self.check("}") {
            if self.peek().is_none() {
                return Err(self.unexpected(&["}"]));
            }
            self.statement_into(&mut stmts)?;
        }
        let close = self.expect("}")?;
        Ok(Block {
            stmts,
            origin,
            span: open.to(close),
        })
    }

    // ---- statements ----

    /// Parses one source statement, which may declare several variables.
    fn statement_into(&mut self, out: &mut Vec<Stmt>) -> PResult<()> {
        if self.starts_type() {
            let start = self.here();
            let decls = self.declaration()?;
            self.expect(";")?;
            let span = start.to(self.last);
            out.extend(decls.into_iter().map(|kind| Stmt { kind, span }));
            Ok(())
        } else {
            out.push(self.statement()?);
            Ok(())
        }
    }

    fn statement(&mut self) -> PResult<Stmt> {
        let start = self.here();
        if self.check("{") {
            let block = self.block(BlockOrigin::Source)?;
            let span = block.span;
            return Ok(Stmt {
                kind: StmtKind::Block(block),
                span,
            });
        }
        if self.check("if") {
            return self.if_statement();
        }
        if self.check("while") {
            self.advance();
            self.expect("(")?;
            let cond = self.expr()?;
            self.expect(")")?;
            let header = start.to(self.last);
            let body = self.statement()?;
            return Ok(Stmt {
                span: start.to(self.last),
                kind: StmtKind::While {
                    cond,
                    body: Box::new(body),
                    header,
                },
            });
        }
        if self.check("for") {
            return self.for_statement();
        }
        if self.starts_type() {
            let mut decls = self.declaration()?;
            self.expect(";")?;
            if decls.len() != 1 {
                return Err(Diagnostic::error(
                    DiagnosticKind::SyntaxError,
                    start.to(self.last),
                    "a declaration of several variables must appear directly inside a block",
                ));
            }
            return Ok(Stmt {
                kind: decls.pop().expect("one declaration"),
                span: start.to(self.last),
            });
        }
        let kind = if self.eat("return") {
            let value = if self.check(";") { None } else { Some(self.expr()?) };
            StmtKind::Return(value)
        } else if self.std_then("cout") {
            self.print()?
        } else if self.std_then("cin") {
            self.read()?
        } else {
            self.simple()?
        };
        self.expect(";")?;
        Ok(Stmt {
            kind,
            span: start.to(self.last),
        })
    }

    fn if_statement(&mut self) -> PResult<Stmt> {
        let start = self.expect("if")?;
        self.expect("(")?;
        let cond = self.expr()?;
        self.expect(")")?;
        let header = start.to(self.last);
        let then_branch = Box::new(self.statement()?);
        let else_branch = if self.eat("else") {
            Some(Box::new(self.statement()?))
        } else {
            None
        };
        Ok(Stmt {
            span: start.to(self.last),
            kind: StmtKind::If {
                cond,
                then_branch,
                else_branch,
                header,
            },
        })
    }

    /// Lowers `for (init; cond; step) body` into a scope block holding the
    /// init and a while loop whose body ends with the step.
    fn for_statement(&mut self) -> PResult<Stmt> {
        let start = self.expect("for")?;
        self.expect("(")?;
        let init = if self.check(";") {
            None
        } else if self.starts_type() {
            let init_start = self.here();
            let mut decls = self.declaration()?;
            if decls.len() != 1 {
                return Err(Diagnostic::error(
                    DiagnosticKind::SyntaxError,
                    init_start.to(self.last),
                    "a for-loop initializer may declare only one variable",
                ));
            }
            Some(Stmt {
                kind: decls.pop().expect("one declaration"),
                span: init_start.to(self.last),
            })
        } else {
            let init_start = self.here();
            let kind = self.simple()?;
            Some(Stmt {
                kind,
                span: init_start.to(self.last),
            })
        };
        self.expect(";")?;
        let cond = if self.check(";") {
            None
        } else {
            Some(self.expr()?)
        };
        self.expect(";")?;
        let step = if self.check(")") {
            None
        } else {
            let step_start = self.here();
            let kind = self.simple()?;
            Some(Stmt {
                kind,
                span: step_start.to(self.last),
            })
        };
        self.expect(")")?;
        let header = start.to(self.last);
        let body = self.statement()?;
        let span = start.to(self.last);

        let cond = cond.unwrap_or_else(|| Expr::new(ExprKind::Literal(Literal::Bool(true)), header));
        let has_step = step.is_some();
        let (mut body_stmts, body_span) = match body.kind {
            StmtKind::Block(b) if b.origin == BlockOrigin::Source => (b.stmts, b.span),
            other => (
                vec![Stmt {
                    kind: other,
                    span: body.span,
                }],
                body.span,
            ),
        };
        body_stmts.extend(step);
        let body_block = Stmt {
            kind: StmtKind::Block(Block {
                stmts: body_stmts,
                origin: BlockOrigin::ForBody { step: has_step },
                span: body_span,
            }),
            span: body_span,
        };
        let looped = Stmt {
            kind: StmtKind::While {
                cond,
                body: Box::new(body_block),
                header,
            },
            span,
        };
        let mut stmts: Vec<Stmt> = init.into_iter().collect();
        stmts.push(looped);
        Ok(Stmt {
            kind: StmtKind::Block(Block {
                stmts,
                origin: BlockOrigin::ForScope,
                span,
            }),
            span,
        })
    }

    /// `type name [= e | (n [, fill])] {, name [= e]}` without the `;`.
    fn declaration(&mut self) -> PResult<Vec<StmtKind>> {
        self.eat("const");
        let ty = self.type_tag()?;
        let mut decls = Vec::new();
        loop {
            let name = self.expect_ident()?;
            let init = if self.eat("=") {
                Some(Initializer::Value(self.expr()?))
            } else if self.eat("(") {
                let count = self.expr()?;
                let fill = if self.eat(",") { Some(self.expr()?) } else { None };
                self.expect(")")?;
                Some(Initializer::Sized { count, fill })
            } else {
                None
            };
            decls.push(StmtKind::VarDecl {
                name,
                ty: ty.clone(),
                init,
            });
            if !self.eat(",") {
                break;
            }
        }
        Ok(decls)
    }

    fn print(&mut self) -> PResult<StmtKind> {
        self.skip_std()?;
        self.expect("cout")?;
        let mut items = Vec::new();
        while self.eat("<<") {
            if self.std_then("endl") {
                self.skip_std()?;
                let span = self.expect("endl")?;
                items.push(PrintItem::Endl(span));
            } else {
                items.push(PrintItem::Value(self.additive()?));
            }
        }
        if items.is_empty() {
            return Err(self.unexpected(&["<<"]));
        }
        Ok(StmtKind::Print(items))
    }

    fn read(&mut self) -> PResult<StmtKind> {
        self.skip_std()?;
        self.expect("cin")?;
        let mut targets = Vec::new();
        while self.eat(">>") {
            targets.push(self.additive()?);
        }
        if targets.is_empty() {
            return Err(self.unexpected(&[">>"]));
        }
        Ok(StmtKind::Read(targets))
    }

    /// Assignment, increment/decrement, or expression statement, without the
    /// terminating `;`.
    fn simple(&mut self) -> PResult<StmtKind> {
        let start = self.here();
        for (prefix, op) in [("++", AssignOp::Add), ("--", AssignOp::Sub)] {
            if self.eat(prefix) {
                let target = self.postfix()?;
                return Ok(StmtKind::Assign {
                    target,
                    op,
                    value: Expr::new(ExprKind::Literal(Literal::Int(1)), start),
                });
            }
        }
        let target = self.expr()?;
        for (suffix, op) in [("++", AssignOp::Add), ("--", AssignOp::Sub)] {
            if self.eat(suffix) {
                return Ok(StmtKind::Assign {
                    target,
                    op,
                    value: Expr::new(ExprKind::Literal(Literal::Int(1)), self.last),
                });
            }
        }
        let assign_ops = [
            ("=", AssignOp::Set),
            ("+=", AssignOp::Add),
            ("-=", AssignOp::Sub),
            ("*=", AssignOp::Mul),
            ("/=", AssignOp::Div),
            ("%=", AssignOp::Rem),
        ];
        for (symbol, op) in assign_ops {
            if self.eat(symbol) {
                let value = self.expr()?;
                return Ok(StmtKind::Assign { target, op, value });
            }
        }
        Ok(StmtKind::Expr(target))
    }

    // ---- expressions ----

    pub(super) fn expr(&mut self) -> PResult<Expr> {
        self.logical_or()
    }

    fn binary_level(
        &mut self,
        ops: &[(&str, BinaryOp)],
        next: fn(&mut Self) -> PResult<Expr>,
    ) -> PResult<Expr> {
        let mut lhs = next(self)?;
        'outer: loop {
            for (symbol, op) in ops {
                if self.check(symbol) {
                    self.advance();
                    let rhs = next(self)?;
                    lhs = binary(*op, lhs, rhs);
                    continue 'outer;
                }
            }
            return Ok(lhs);
        }
    }

    fn logical_or(&mut self) -> PResult<Expr> {
        self.binary_level(&[("||", BinaryOp::Or)], Self::logical_and)
    }

    fn logical_and(&mut self) -> PResult<Expr> {
        self.binary_level(&[("&&", BinaryOp::And)], Self::equality)
    }

    fn equality(&mut self) -> PResult<Expr> {
        self.binary_level(&[("==", BinaryOp::Eq), ("!=", BinaryOp::Ne)], Self::relational)
    }

    fn relational(&mut self) -> PResult<Expr> {
        self.binary_level(
            &[
                ("<=", BinaryOp::Le),
                (">=", BinaryOp::Ge),
                ("<", BinaryOp::Lt),
                (">", BinaryOp::Gt),
            ],
            Self::additive,
        )
    }

    fn additive(&mut self) -> PResult<Expr> {
        self.binary_level(&[("+", BinaryOp::Add), ("-", BinaryOp::Sub)], Self::multiplicative)
    }

    fn multiplicative(&mut self) -> PResult<Expr> {
        self.binary_level(
            &[("*", BinaryOp::Mul), ("/", BinaryOp::Div), ("%", BinaryOp::Rem)],
            Self::unary,
        )
    }

    fn unary(&mut self) -> PResult<Expr> {
        let start = self.here();
        for (symbol, op) in [("-", UnaryOp::Neg), ("!", UnaryOp::Not)] {
            if self.eat(symbol) {
                let operand = self.unary()?;
                return Ok(Expr::new(
                    ExprKind::Unary {
                        op,
                        operand: Box::new(operand),
                    },
                    start.to(self.last),
                ));
            }
        }
        self.postfix()
    }

    fn postfix(&mut self) -> PResult<Expr> {
        let mut expr = self.primary()?;
        loop {
            if self.eat(".") {
                let method = self.expect_ident()?;
                self.expect("(")?;
                let args = self.arguments(true)?;
                let span = expr.span.to(self.last);
                expr = Expr::new(
                    ExprKind::Method {
                        receiver: Box::new(expr),
                        method,
                        args,
                    },
                    span,
                );
            } else if self.eat("[") {
                let index = self.expr()?;
                self.expect("]")?;
                let span = expr.span.to(self.last);
                expr = Expr::new(
                    ExprKind::Index {
                        receiver: Box::new(expr),
                        index: Box::new(index),
                    },
                    span,
                );
            } else {
                return Ok(expr);
            }
        }
    }

    /// Arguments after `(` through `)`. Method calls may pass a braced pair
    /// (`m.insert({k, v})`), which is flattened into the argument list.
    fn arguments(&mut self, allow_braces: bool) -> PResult<Vec<Expr>> {
        let mut args = Vec::new();
        if self.eat(")") {
            return Ok(args);
        }
        loop {
            if allow_braces && self.eat("{") {
                loop {
                    args.push(self.expr()?);
                    if !self.eat(",") {
                        break;
                    }
                }
                self.expect("}")?;
            } else {
                args.push(self.expr()?);
            }
            if self.eat(")") {
                return Ok(args);
            }
            if !self.check(",") {
                return Err(self.unexpected(&[",", ")"]));
            }
            self.advance();
        }
    }

    fn primary(&mut self) -> PResult<Expr> {
        let Some(tok) = self.peek().cloned() else {
            return Err(self.unexpected(&["expression"]));
        };
        let literal = match tok.kind {
            TokenKind::IntLiteral => Some(Literal::Int(tok.lexeme.parse().map_err(|_| {
                Diagnostic::error(DiagnosticKind::InvalidLiteral, tok.span, "integer literal out of range")
            })?)),
            TokenKind::DoubleLiteral => Some(Literal::Double(tok.lexeme.parse().map_err(|_| {
                Diagnostic::error(DiagnosticKind::InvalidLiteral, tok.span, "invalid floating literal")
            })?)),
            TokenKind::CharLiteral => Some(Literal::Char(
                decode_quoted(&tok.lexeme).chars().next().unwrap_or('\0'),
            )),
            TokenKind::StringLiteral => Some(Literal::String(decode_quoted(&tok.lexeme))),
            TokenKind::Keyword if tok.lexeme == "true" => Some(Literal::Bool(true)),
            TokenKind::Keyword if tok.lexeme == "false" => Some(Literal::Bool(false)),
            _ => None,
        };
        if let Some(lit) = literal {
            self.advance();
            return Ok(Expr::new(ExprKind::Literal(lit), tok.span));
        }
        if tok.kind == TokenKind::Identifier {
            let ident = self.expect_ident()?;
            if self.eat("(") {
                let args = self.arguments(false)?;
                let span = ident.span.to(self.last);
                return Ok(Expr::new(ExprKind::Call { callee: ident, args }, span));
            }
            return Ok(Expr::new(ExprKind::Var(ident.name), ident.span));
        }
        if self.eat("(") {
            let inner = self.expr()?;
            self.expect(")")?;
            return Ok(inner);
        }
        Err(self.unexpected(&["expression"]))
    }
}

fn is_word(text: &str) -> bool {
    super::lexer::KEYWORDS.contains(&text)
}
