//! Structural validation, name resolution and static type checking.

use std::collections::{HashMap, HashSet};

use super::*;
use crate::containers::{index_access, method_signature, methods, Operand};
use crate::diag::{Diagnostic, DiagnosticKind};

/// Checks a parsed program. An empty result means the program may be run.
pub fn validate(program: &CcrProgram) -> Vec<Diagnostic> {
    let mut v = Validator {
        diags: Vec::new(),
        scopes: Vec::new(),
        signatures: HashMap::new(),
        return_type: None,
    };
    v.program(program);
    let lines = program.line_count();
    for span in program.spans() {
        if !span.within_lines(lines) {
            v.diags.push(Diagnostic::error(
                DiagnosticKind::SpanOutOfBounds,
                span,
                format!("span lines {}..{} outside the source (1..{lines})", span.start_line, span.end_line),
            ));
            break;
        }
    }
    v.diags
}

/// Static type of an expression.
#[derive(Debug, Clone, PartialEq)]
enum Ty {
    Value(TypeTag),
    Void,
    /// An error has already been reported for this expression.
    Unknown,
}

struct Signature {
    params: Vec<(TypeTag, bool)>,
    returns: Option<TypeTag>,
}

struct Scope {
    vars: HashMap<String, TypeTag>,
    origin: BlockOrigin,
}

struct Validator {
    diags: Vec<Diagnostic>,
    scopes: Vec<Scope>,
    /// Functions visible so far: each function sees itself and earlier ones.
    signatures: HashMap<String, Signature>,
    return_type: Option<TypeTag>,
}

fn is_condition(ty: &TypeTag) -> bool {
    matches!(ty, TypeTag::Bool | TypeTag::Int)
}

/// Whether a value of type `from` may be stored where `to` is expected.
fn assignable(to: &TypeTag, from: &TypeTag) -> bool {
    to == from || (*to == TypeTag::Double && *from == TypeTag::Int)
}

impl Validator {
    fn error(&mut self, kind: DiagnosticKind, span: SourceSpan, message: impl Into<String>) {
        self.diags.push(Diagnostic::error(kind, span, message));
    }

    fn program(&mut self, program: &CcrProgram) {
        let mut seen = HashSet::new();
        for func in &program.functions {
            if !seen.insert(func.name.name.as_str()) {
                self.error(
                    DiagnosticKind::DuplicateFunction,
                    func.name.span,
                    format!("function `{}` is defined more than once", func.name.name),
                );
            }
        }
        match program.entry_function() {
            None => self.error(
                DiagnosticKind::MissingEntry,
                SourceSpan::new(1, 1, 1, 1),
                format!("no `{}` function is defined", program.entry),
            ),
            Some(main) => {
                if !main.params.is_empty() || main.return_type != Some(TypeTag::Int) {
                    self.error(
                        DiagnosticKind::BadEntrySignature,
                        main.name.span,
                        format!("`{}` must be declared as `int {}()`", program.entry, program.entry),
                    );
                }
            }
        }
        for func in &program.functions {
            self.signatures.entry(func.name.name.clone()).or_insert_with(|| Signature {
                params: func.params.iter().map(|p| (p.ty.clone(), p.by_ref)).collect(),
                returns: func.return_type.clone(),
            });
            self.function(func);
        }
    }

    fn check_type(&mut self, ty: &TypeTag, span: SourceSpan) {
        let TypeTag::Container { kind, key, elem } = ty else {
            return;
        };
        for inner in key.iter().map(|k| k.as_ref()).chain([elem.as_ref()]) {
            if !inner.is_scalar() {
                self.error(
                    DiagnosticKind::NestedContainer,
                    span,
                    format!("`{ty}` nests a container; elements and keys must be scalars"),
                );
                return;
            }
        }
        if let Some(key) = key {
            let ok = match kind {
                ContainerKind::UnorderedMap => **key == TypeTag::Int,
                _ => **key != TypeTag::Double,
            };
            if !ok {
                let allowed = if *kind == ContainerKind::UnorderedMap {
                    "int"
                } else {
                    "int, bool, char or string"
                };
                self.error(
                    DiagnosticKind::IllegalKeyType,
                    span,
                    format!("`{}` keys must be {allowed}, not {key}", kind.name()),
                );
            }
        }
    }

    fn function(&mut self, func: &FunctionDef) {
        if let Some(ret) = &func.return_type {
            self.check_type(ret, func.span);
            if !ret.is_scalar() {
                self.error(
                    DiagnosticKind::ContainerReturn,
                    func.name.span,
                    format!("function `{}` cannot return a container", func.name.name),
                );
            }
        }
        self.return_type = func.return_type.clone();
        self.scopes.push(Scope {
            vars: HashMap::new(),
            origin: BlockOrigin::Source,
        });
        for param in &func.params {
            self.check_type(&param.ty, param.span);
            if param.ty.is_scalar() && param.by_ref {
                self.error(
                    DiagnosticKind::ScalarByReference,
                    param.span,
                    format!("scalar parameter `{}` must be passed by value", param.name.name),
                );
            }
            if !param.ty.is_scalar() && !param.by_ref {
                self.error(
                    DiagnosticKind::ContainerByValue,
                    param.span,
                    format!("container parameter `{}` must be passed by reference (`{}&`)", param.name.name, param.ty),
                );
            }
            let scope = self.scopes.last_mut().expect("parameter scope");
            if scope.vars.insert(param.name.name.clone(), param.ty.clone()).is_some() {
                self.error(
                    DiagnosticKind::DuplicateParameter,
                    param.name.span,
                    format!("parameter `{}` is declared more than once", param.name.name),
                );
            }
        }
        for stmt in &func.body.stmts {
            self.stmt(stmt);
        }
        self.scopes.pop();
    }

    fn lookup(&self, name: &str) -> Option<&TypeTag> {
        self.scopes.iter().rev().find_map(|s| s.vars.get(name))
    }

    fn declare(&mut self, name: &Ident, ty: TypeTag) {
        let n = self.scopes.len();
        let scope = &self.scopes[n - 1];
        // The body of a `for` shares a scope with its init clause.
        let clash = scope.vars.contains_key(&name.name)
            || (matches!(scope.origin, BlockOrigin::ForBody { .. })
                && n >= 2
                && self.scopes[n - 2].vars.contains_key(&name.name));
        if clash {
            self.error(
                DiagnosticKind::Redeclaration,
                name.span,
                format!("`{}` is already declared in this scope", name.name),
            );
            return;
        }
        self.scopes[n - 1].vars.insert(name.name.clone(), ty);
    }

    fn block(&mut self, block: &Block) {
        self.scopes.push(Scope {
            vars: HashMap::new(),
            origin: block.origin,
        });
        for stmt in &block.stmts {
            self.stmt(stmt);
        }
        self.scopes.pop();
    }

    /// Statement in a position where C++ would give it its own scope, such
    /// as an unbraced `if` branch.
    fn nested(&mut self, stmt: &Stmt) {
        if let StmtKind::Block(b) = &stmt.kind {
            self.block(b);
        } else {
            self.scopes.push(Scope {
                vars: HashMap::new(),
                origin: BlockOrigin::Source,
            });
            self.stmt(stmt);
            self.scopes.pop();
        }
    }

    fn condition(&mut self, cond: &Expr) {
        if let Ty::Value(ty) = self.expr(cond) {
            if !is_condition(&ty) {
                self.error(
                    DiagnosticKind::TypeMismatch,
                    cond.span,
                    format!("condition must be bool or int, found {ty}"),
                );
            }
        } else {
            self.void_check(cond, &Ty::Void);
        }
    }

    fn stmt(&mut self, stmt: &Stmt) {
        match &stmt.kind {
            StmtKind::Block(b) => self.block(b),
            StmtKind::VarDecl { name, ty, init } => {
                self.check_type(ty, stmt.span);
                match init {
                    None => {}
                    Some(Initializer::Value(e)) => {
                        if !ty.is_scalar() {
                            self.expr(e);
                            self.error(
                                DiagnosticKind::TypeMismatch,
                                e.span,
                                format!("container `{}` cannot be initialized from a value", name.name),
                            );
                        } else {
                            self.expect_value(e, ty);
                        }
                    }
                    Some(Initializer::Sized { count, fill }) => {
                        self.expect_value(count, &TypeTag::Int);
                        match ty {
                            TypeTag::Container {
                                kind: ContainerKind::Vector,
                                elem,
                                ..
                            } => {
                                if let Some(fill) = fill {
                                    self.expect_value(fill, elem);
                                }
                            }
                            _ => {
                                if let Some(fill) = fill {
                                    self.expr(fill);
                                }
                                self.error(
                                    DiagnosticKind::TypeMismatch,
                                    stmt.span,
                                    format!("only a vector can be declared with a size, not `{ty}`"),
                                );
                            }
                        }
                    }
                }
                self.declare(name, ty.clone());
            }
            StmtKind::Assign { target, op, value } => self.assign(target, *op, value),
            StmtKind::If {
                cond,
                then_branch,
                else_branch,
                ..
            } => {
                self.condition(cond);
                self.nested(then_branch);
                if let Some(e) = else_branch {
                    self.nested(e);
                }
            }
            StmtKind::While { cond, body, .. } => {
                self.condition(cond);
                self.nested(body);
            }
            StmtKind::Return(value) => {
                let expected = self.return_type.clone();
                match (value, expected) {
                    (None, None) => {}
                    (Some(e), None) => {
                        self.expr(e);
                        self.error(DiagnosticKind::TypeMismatch, e.span, "a void function cannot return a value");
                    }
                    (None, Some(ty)) => self.error(
                        DiagnosticKind::TypeMismatch,
                        stmt.span,
                        format!("missing return value of type {ty}"),
                    ),
                    (Some(e), Some(ty)) => self.expect_value(e, &ty),
                }
            }
            StmtKind::Expr(e) => {
                self.expr(e);
            }
            StmtKind::Print(items) => {
                for item in items {
                    if let PrintItem::Value(e) = item {
                        self.scalar_value(e, "printed");
                    }
                }
            }
            StmtKind::Read(targets) => {
                for t in targets {
                    if let Some(ty) = self.lvalue(t) {
                        if !ty.is_scalar() {
                            self.error(DiagnosticKind::TypeMismatch, t.span, "a container cannot be read from input");
                        }
                    }
                }
            }
        }
    }

    fn assign(&mut self, target: &Expr, op: AssignOp, value: &Expr) {
        let target_ty = self.lvalue(target);
        let value_ty = self.expr(value);
        let (Some(target_ty), Ty::Value(value_ty)) = (target_ty, value_ty.clone()) else {
            self.void_check(value, &value_ty);
            return;
        };
        if !target_ty.is_scalar() {
            self.error(
                DiagnosticKind::TypeMismatch,
                target.span,
                "containers cannot be assigned",
            );
            return;
        }
        let result = match op.binary() {
            None => Some(value_ty.clone()),
            Some(bin) => self.binary_type(bin, &target_ty, &value_ty),
        };
        match result {
            Some(result) if assignable(&target_ty, &result) => {}
            Some(result) => self.error(
                DiagnosticKind::TypeMismatch,
                value.span,
                format!("cannot assign {result} to {target_ty}"),
            ),
            None => self.error(
                DiagnosticKind::TypeMismatch,
                value.span,
                format!("operator `{}` cannot combine {target_ty} and {value_ty}", op.symbol()),
            ),
        }
    }

    /// Checks an assignable place and returns its type.
    fn lvalue(&mut self, target: &Expr) -> Option<TypeTag> {
        match &target.kind {
            ExprKind::Var(_) => match self.expr(target) {
                Ty::Value(ty) => Some(ty),
                _ => None,
            },
            ExprKind::Index { receiver, index } => {
                let (kind, key, elem) = self.container_of(receiver)?;
                let Some(access) = index_access(kind) else {
                    self.expr(index);
                    self.error(
                        DiagnosticKind::IllegalMethod,
                        target.span,
                        format!("`{}` does not support indexing", kind.name()),
                    );
                    return None;
                };
                self.subscript(index, access.subscript, key.as_ref());
                if !access.set {
                    self.error(
                        DiagnosticKind::InvalidAssignTarget,
                        target.span,
                        format!("elements of a `{}` cannot be assigned through `[]` here", kind.name()),
                    );
                    return None;
                }
                Some(elem)
            }
            _ => {
                self.expr(target);
                self.error(
                    DiagnosticKind::InvalidAssignTarget,
                    target.span,
                    "the left side must be a variable or an indexed element",
                );
                None
            }
        }
    }

    /// Resolves a method or index receiver, which must name a container.
    fn container_of(&mut self, receiver: &Expr) -> Option<(ContainerKind, Option<TypeTag>, TypeTag)> {
        match self.expr(receiver) {
            Ty::Value(TypeTag::Container { kind, key, elem }) => Some((kind, key.map(|k| *k), *elem)),
            Ty::Value(ty) => {
                self.error(
                    DiagnosticKind::TypeMismatch,
                    receiver.span,
                    format!("expected a container, found {ty}"),
                );
                None
            }
            Ty::Void => {
                self.void_check(receiver, &Ty::Void);
                None
            }
            Ty::Unknown => None,
        }
    }

    fn subscript(&mut self, index: &Expr, operand: Operand, key: Option<&TypeTag>) {
        let expected = match (operand, key) {
            (Operand::Key, Some(key)) => key.clone(),
            _ => TypeTag::Int,
        };
        self.expect_value(index, &expected);
    }

    fn void_check(&mut self, expr: &Expr, ty: &Ty) {
        if *ty == Ty::Void {
            self.error(
                DiagnosticKind::TypeMismatch,
                expr.span,
                "a void call has no value",
            );
        }
    }

    fn expect_value(&mut self, expr: &Expr, expected: &TypeTag) {
        match self.expr(expr) {
            Ty::Value(ty) if assignable(expected, &ty) => {}
            Ty::Value(ty) => self.error(
                DiagnosticKind::TypeMismatch,
                expr.span,
                format!("expected {expected}, found {ty}"),
            ),
            other => self.void_check(expr, &other),
        }
    }

    fn scalar_value(&mut self, expr: &Expr, role: &str) -> Option<TypeTag> {
        match self.expr(expr) {
            Ty::Value(ty) if ty.is_scalar() => Some(ty),
            Ty::Value(ty) => {
                self.error(
                    DiagnosticKind::TypeMismatch,
                    expr.span,
                    format!("a {ty} cannot be {role}"),
                );
                None
            }
            other => {
                self.void_check(expr, &other);
                None
            }
        }
    }

    fn binary_type(&self, op: BinaryOp, lhs: &TypeTag, rhs: &TypeTag) -> Option<TypeTag> {
        use TypeTag::*;
        match op {
            BinaryOp::Add if *lhs == String && *rhs == String => Some(String),
            _ if op.is_arithmetic() => {
                if !lhs.is_numeric() || !rhs.is_numeric() {
                    return None;
                }
                let double = *lhs == Double || *rhs == Double;
                match (op, double) {
                    (BinaryOp::Rem, true) => None,
                    (_, true) => Some(Double),
                    (_, false) => Some(Int),
                }
            }
            BinaryOp::Eq | BinaryOp::Ne if *lhs == Bool && *rhs == Bool => Some(Bool),
            _ if op.is_comparison() => {
                let ok = (lhs.is_numeric() && rhs.is_numeric()) || (*lhs == String && *rhs == String);
                ok.then_some(Bool)
            }
            _ => (is_condition(lhs) && is_condition(rhs)).then_some(Bool),
        }
    }

    fn expr(&mut self, expr: &Expr) -> Ty {
        match &expr.kind {
            ExprKind::Literal(lit) => Ty::Value(match lit {
                Literal::Int(_) => TypeTag::Int,
                Literal::Double(_) => TypeTag::Double,
                Literal::Bool(_) => TypeTag::Bool,
                Literal::Char(_) => TypeTag::Char,
                Literal::String(_) => TypeTag::String,
            }),
            ExprKind::Var(name) => match self.lookup(name) {
                Some(ty) => Ty::Value(ty.clone()),
                None => {
                    let hint = if self.signatures.contains_key(name) {
                        " (functions must be called)"
                    } else {
                        ""
                    };
                    self.error(
                        DiagnosticKind::UnresolvedName,
                        expr.span,
                        format!("`{name}` is not declared in this scope{hint}"),
                    );
                    Ty::Unknown
                }
            },
            ExprKind::Binary { op, lhs, rhs } => {
                let l = self.scalar_value(lhs, "an operand");
                let r = self.scalar_value(rhs, "an operand");
                let (Some(l), Some(r)) = (l, r) else {
                    return Ty::Unknown;
                };
                match self.binary_type(*op, &l, &r) {
                    Some(ty) => Ty::Value(ty),
                    None => {
                        self.error(
                            DiagnosticKind::TypeMismatch,
                            expr.span,
                            format!("operator `{}` cannot combine {l} and {r}", op.symbol()),
                        );
                        Ty::Unknown
                    }
                }
            }
            ExprKind::Unary { op, operand } => {
                let Some(ty) = self.scalar_value(operand, "an operand") else {
                    return Ty::Unknown;
                };
                let result = match op {
                    UnaryOp::Neg if ty == TypeTag::Double => Some(TypeTag::Double),
                    UnaryOp::Neg if ty.is_numeric() => Some(TypeTag::Int),
                    UnaryOp::Not if is_condition(&ty) => Some(TypeTag::Bool),
                    _ => None,
                };
                match result {
                    Some(r) => Ty::Value(r),
                    None => {
                        self.error(
                            DiagnosticKind::TypeMismatch,
                            expr.span,
                            format!("operator `{}` cannot apply to {ty}", op.symbol()),
                        );
                        Ty::Unknown
                    }
                }
            }
            ExprKind::Call { callee, args } => self.call(callee, args, expr.span),
            ExprKind::Method { receiver, method, args } => self.method(receiver, method, args, expr.span),
            ExprKind::Index { receiver, index } => {
                let Some((kind, key, elem)) = self.container_of(receiver) else {
                    self.expr(index);
                    return Ty::Unknown;
                };
                match index_access(kind) {
                    Some(access) if access.get => {
                        self.subscript(index, access.subscript, key.as_ref());
                        Ty::Value(elem)
                    }
                    _ => {
                        self.expr(index);
                        self.error(
                            DiagnosticKind::IllegalMethod,
                            expr.span,
                            format!("`{}` does not support indexing", kind.name()),
                        );
                        Ty::Unknown
                    }
                }
            }
        }
    }

    fn call(&mut self, callee: &Ident, args: &[Expr], span: SourceSpan) -> Ty {
        let Some(sig) = self.signatures.get(&callee.name) else {
            for a in args {
                self.expr(a);
            }
            self.error(
                DiagnosticKind::UnresolvedFunction,
                callee.span,
                format!("function `{}` is not defined before this call", callee.name),
            );
            return Ty::Unknown;
        };
        let params = sig.params.clone();
        let returns = sig.returns.clone();
        if params.len() != args.len() {
            for a in args {
                self.expr(a);
            }
            self.error(
                DiagnosticKind::ArityMismatch,
                span,
                format!(
                    "`{}` takes {} argument(s) but {} were given",
                    callee.name,
                    params.len(),
                    args.len()
                ),
            );
        } else {
            for (arg, (ty, _)) in args.iter().zip(&params) {
                if ty.is_scalar() {
                    self.expect_value(arg, ty);
                    continue;
                }
                // Containers bind by reference and need a variable of the same type.
                match (&arg.kind, self.expr(arg)) {
                    (ExprKind::Var(_), Ty::Value(found)) if found == *ty => {}
                    (_, Ty::Unknown) => {}
                    (_, found) => {
                        let found = match found {
                            Ty::Value(t) => t.to_string(),
                            _ => "void".to_string(),
                        };
                        self.error(
                            DiagnosticKind::TypeMismatch,
                            arg.span,
                            format!("expected a variable of type {ty}, found {found}"),
                        );
                    }
                }
            }
        }
        match returns {
            Some(ty) => Ty::Value(ty),
            None => Ty::Void,
        }
    }

    fn method(&mut self, receiver: &Expr, method: &Ident, args: &[Expr], span: SourceSpan) -> Ty {
        let Some((kind, key, elem)) = self.container_of(receiver) else {
            for a in args {
                self.expr(a);
            }
            return Ty::Unknown;
        };
        let Some(sig) = method_signature(kind, &method.name) else {
            let available: Vec<&str> = methods(kind).iter().map(|m| m.name).collect();
            self.error(
                DiagnosticKind::IllegalMethod,
                method.span,
                format!(
                    "`{}` has no method `{}` (available: {})",
                    kind.name(),
                    method.name,
                    available.join(", ")
                ),
            );
            for a in args {
                self.expr(a);
            }
            return Ty::Unknown;
        };
        let resolve = |op: Operand| -> Option<TypeTag> {
            match op {
                Operand::Key => key.clone(),
                Operand::Elem => Some(elem.clone()),
                Operand::Int => Some(TypeTag::Int),
                Operand::Bool => Some(TypeTag::Bool),
                Operand::Void => None,
            }
        };
        if sig.params.len() != args.len() {
            for a in args {
                self.expr(a);
            }
            self.error(
                DiagnosticKind::ArityMismatch,
                span,
                format!(
                    "`{}` takes {} argument(s) but {} were given",
                    method.name,
                    sig.params.len(),
                    args.len()
                ),
            );
        } else {
            for (arg, op) in args.iter().zip(sig.params) {
                let expected = resolve(*op).expect("method parameters have a type");
                self.expect_value(arg, &expected);
            }
        }
        match resolve(sig.returns) {
            Some(ty) => Ty::Value(ty),
            None => Ty::Void,
        }
    }
}
