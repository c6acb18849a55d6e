//! Canonical code representation: the language-independent syntax tree that
//! frontends produce and the interpreter consumes.
//!
//! The tree is plain data. Every node carries the source span it was parsed
//! from. `for` loops have no node of their own; the frontend lowers
//! `for (init; cond; step) body` to
//! `Block[ForScope]{ init; While(cond) Block[ForBody]{ body...; step } }`
//! where the lowered block and loop keep the span of the whole `for`.

mod pretty;
mod validate;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::containers::ContainerKind;
use crate::span::SourceSpan;

pub use pretty::{print_expr, print_program, print_type};
pub use validate::validate;

/// Name of the entry function.
pub const ENTRY: &str = "main";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CcrProgram {
    /// Function definitions in source order; names are unique in a valid
    /// program.
    pub functions: Vec<FunctionDef>,
    pub entry: String,
    pub source_text: String,
}

impl CcrProgram {
    pub fn function(&self, name: &str) -> Option<&FunctionDef> {
        self.functions.iter().find(|f| f.name.name == name)
    }

    pub fn entry_function(&self) -> Option<&FunctionDef> {
        self.function(&self.entry)
    }

    pub fn line_count(&self) -> usize {
        crate::span::line_count(&self.source_text)
    }

    /// Visits every span in the program, in tree order.
    pub fn visit_spans_mut(&mut self, f: &mut dyn FnMut(&mut SourceSpan)) {
        for func in &mut self.functions {
            f(&mut func.span);
            f(&mut func.name.span);
            for p in &mut func.params {
                f(&mut p.span);
                f(&mut p.name.span);
            }
            visit_block(&mut func.body, f);
        }
    }

    /// Every span in the program, in tree order.
    pub fn spans(&self) -> Vec<SourceSpan> {
        let mut copy = self.clone();
        let mut out = Vec::new();
        copy.visit_spans_mut(&mut |s| out.push(*s));
        out
    }

    /// Copy with every span zeroed and the source text dropped, for
    /// structural comparison.
    pub fn without_spans(&self) -> CcrProgram {
        let mut copy = self.clone();
        copy.visit_spans_mut(&mut |s| *s = SourceSpan::default());
        copy.source_text.clear();
        copy
    }
}

fn visit_block(block: &mut Block, f: &mut dyn FnMut(&mut SourceSpan)) {
    f(&mut block.span);
    for stmt in &mut block.stmts {
        visit_stmt(stmt, f);
    }
}

fn visit_stmt(stmt: &mut Stmt, f: &mut dyn FnMut(&mut SourceSpan)) {
    f(&mut stmt.span);
    match &mut stmt.kind {
        StmtKind::Block(b) => visit_block(b, f),
        StmtKind::VarDecl { name, init, .. } => {
            f(&mut name.span);
            match init {
                Some(Initializer::Value(e)) => visit_expr(e, f),
                Some(Initializer::Sized { count, fill }) => {
                    visit_expr(count, f);
                    if let Some(fill) = fill {
                        visit_expr(fill, f);
                    }
                }
                None => {}
            }
        }
        StmtKind::Assign { target, value, .. } => {
            visit_expr(target, f);
            visit_expr(value, f);
        }
        StmtKind::If {
            cond,
            then_branch,
            else_branch,
            header,
        } => {
            f(header);
            visit_expr(cond, f);
            visit_stmt(then_branch, f);
            if let Some(e) = else_branch {
                visit_stmt(e, f);
            }
        }
        StmtKind::While { cond, body, header } => {
            f(header);
            visit_expr(cond, f);
            visit_stmt(body, f);
        }
        StmtKind::Return(value) => {
            if let Some(v) = value {
                visit_expr(v, f);
            }
        }
        StmtKind::Expr(e) => visit_expr(e, f),
        StmtKind::Print(items) => {
            for item in items {
                match item {
                    PrintItem::Value(e) => visit_expr(e, f),
                    PrintItem::Endl(span) => f(span),
                }
            }
        }
        StmtKind::Read(targets) => {
            for t in targets {
                visit_expr(t, f);
            }
        }
    }
}

fn visit_expr(expr: &mut Expr, f: &mut dyn FnMut(&mut SourceSpan)) {
    f(&mut expr.span);
    match &mut expr.kind {
        ExprKind::Literal(_) | ExprKind::Var(_) => {}
        ExprKind::Binary { lhs, rhs, .. } => {
            visit_expr(lhs, f);
            visit_expr(rhs, f);
        }
        ExprKind::Unary { operand, .. } => visit_expr(operand, f),
        ExprKind::Call { callee, args } => {
            f(&mut callee.span);
            args.iter_mut().for_each(|a| visit_expr(a, f));
        }
        ExprKind::Method { receiver, method, args } => {
            visit_expr(receiver, f);
            f(&mut method.span);
            args.iter_mut().for_each(|a| visit_expr(a, f));
        }
        ExprKind::Index { receiver, index } => {
            visit_expr(receiver, f);
            visit_expr(index, f);
        }
    }
}

/// Anything with a source span.
pub trait Spanned {
    fn span(&self) -> SourceSpan;
}

/// Span of a node: 1-based, inclusive at both ends.
pub fn span_of(node: &impl Spanned) -> SourceSpan {
    node.span()
}

macro_rules! spanned {
    ($($ty:ty),*) => {
        $(impl Spanned for $ty {
            fn span(&self) -> SourceSpan {
                self.span
            }
        })*
    };
}

spanned!(Ident, FunctionDef, Param, Block, Stmt, Expr);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ident {
    pub name: String,
    pub span: SourceSpan,
}

impl Ident {
    pub fn new(name: impl Into<String>, span: SourceSpan) -> Self {
        Self {
            name: name.into(),
            span,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TypeTag {
    Int,
    Bool,
    Char,
    Double,
    String,
    Container {
        kind: ContainerKind,
        key: Option<Box<TypeTag>>,
        elem: Box<TypeTag>,
    },
}

impl TypeTag {
    pub fn container(kind: ContainerKind, key: Option<TypeTag>, elem: TypeTag) -> Self {
        TypeTag::Container {
            kind,
            key: key.map(Box::new),
            elem: Box::new(elem),
        }
    }

    pub fn is_scalar(&self) -> bool {
        !matches!(self, TypeTag::Container { .. })
    }

    pub fn is_numeric(&self) -> bool {
        matches!(self, TypeTag::Int | TypeTag::Char | TypeTag::Double)
    }

    pub fn container_kind(&self) -> Option<ContainerKind> {
        match self {
            TypeTag::Container { kind, .. } => Some(*kind),
            _ => None,
        }
    }
}

impl fmt::Display for TypeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_type(self))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionDef {
    pub name: Ident,
    pub params: Vec<Param>,
    /// `None` for `void`.
    pub return_type: Option<TypeTag>,
    pub body: Block,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Param {
    pub name: Ident,
    pub ty: TypeTag,
    pub by_ref: bool,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BlockOrigin {
    /// A brace-delimited block written in the source.
    Source,
    /// Scope holding the init clause of a lowered `for`.
    ForScope,
    /// Body of a lowered `for`; `step` is set when the last statement is the
    /// loop's step clause.
    ForBody { step: bool },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Block {
    pub stmts: Vec<Stmt>,
    pub origin: BlockOrigin,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stmt {
    pub kind: StmtKind,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum StmtKind {
    Block(Block),
    VarDecl {
        name: Ident,
        ty: TypeTag,
        init: Option<Initializer>,
    },
    Assign {
        target: Expr,
        op: AssignOp,
        value: Expr,
    },
    If {
        cond: Expr,
        then_branch: Box<Stmt>,
        else_branch: Option<Box<Stmt>>,
        /// `if (cond)`.
        header: SourceSpan,
    },
    While {
        cond: Expr,
        body: Box<Stmt>,
        /// `while (cond)`, or the `for (...)` header of a lowered loop.
        header: SourceSpan,
    },
    Return(Option<Expr>),
    Expr(Expr),
    Print(Vec<PrintItem>),
    Read(Vec<Expr>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Initializer {
    /// `T x = expr;`
    Value(Expr),
    /// `vector<T> v(count)` or `vector<T> v(count, fill)`.
    Sized { count: Expr, fill: Option<Expr> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum PrintItem {
    Value(Expr),
    Endl(SourceSpan),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AssignOp {
    Set,
    Add,
    Sub,
    Mul,
    Div,
    Rem,
}

impl AssignOp {
    pub fn symbol(self) -> &'static str {
        match self {
            AssignOp::Set => "=",
            AssignOp::Add => "+=",
            AssignOp::Sub => "-=",
            AssignOp::Mul => "*=",
            AssignOp::Div => "/=",
            AssignOp::Rem => "%=",
        }
    }

    /// The binary operator a compound assignment applies.
    pub fn binary(self) -> Option<BinaryOp> {
        match self {
            AssignOp::Set => None,
            AssignOp::Add => Some(BinaryOp::Add),
            AssignOp::Sub => Some(BinaryOp::Sub),
            AssignOp::Mul => Some(BinaryOp::Mul),
            AssignOp::Div => Some(BinaryOp::Div),
            AssignOp::Rem => Some(BinaryOp::Rem),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: SourceSpan,
}

impl Expr {
    pub fn new(kind: ExprKind, span: SourceSpan) -> Self {
        Self { kind, span }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ExprKind {
    Literal(Literal),
    Var(String),
    Binary {
        op: BinaryOp,
        lhs: Box<Expr>,
        rhs: Box<Expr>,
    },
    Unary {
        op: UnaryOp,
        operand: Box<Expr>,
    },
    Call {
        callee: Ident,
        args: Vec<Expr>,
    },
    Method {
        receiver: Box<Expr>,
        method: Ident,
        args: Vec<Expr>,
    },
    Index {
        receiver: Box<Expr>,
        index: Box<Expr>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Literal {
    Int(i64),
    Double(f64),
    Bool(bool),
    Char(char),
    String(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
    Rem,
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
    And,
    Or,
}

impl BinaryOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinaryOp::Add => "+",
            BinaryOp::Sub => "-",
            BinaryOp::Mul => "*",
            BinaryOp::Div => "/",
            BinaryOp::Rem => "%",
            BinaryOp::Lt => "<",
            BinaryOp::Le => "<=",
            BinaryOp::Gt => ">",
            BinaryOp::Ge => ">=",
            BinaryOp::Eq => "==",
            BinaryOp::Ne => "!=",
            BinaryOp::And => "&&",
            BinaryOp::Or => "||",
        }
    }

    /// Binding strength; higher binds tighter. All binary operators are
    /// left-associative.
    pub fn precedence(self) -> u8 {
        match self {
            BinaryOp::Or => 1,
            BinaryOp::And => 2,
            BinaryOp::Eq | BinaryOp::Ne => 3,
            BinaryOp::Lt | BinaryOp::Le | BinaryOp::Gt | BinaryOp::Ge => 4,
            BinaryOp::Add | BinaryOp::Sub => 5,
            BinaryOp::Mul | BinaryOp::Div | BinaryOp::Rem => 6,
        }
    }

    pub fn is_arithmetic(self) -> bool {
        matches!(
            self,
            BinaryOp::Add | BinaryOp::Sub | BinaryOp::Mul | BinaryOp::Div | BinaryOp::Rem
        )
    }

    pub fn is_comparison(self) -> bool {
        matches!(
            self,
            BinaryOp::Lt | BinaryOp::Le | BinaryOp::Gt | BinaryOp::Ge | BinaryOp::Eq | BinaryOp::Ne
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum UnaryOp {
    Neg,
    Not,
}

impl UnaryOp {
    pub fn symbol(self) -> &'static str {
        match self {
            UnaryOp::Neg => "-",
            UnaryOp::Not => "!",
        }
    }
}
