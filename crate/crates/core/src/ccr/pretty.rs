//! Source printer for the CCR. Output re-parses to the same tree (spans
//! aside) and compiles natively.

use std::fmt::Write;

use super::*;

const UNARY_PRECEDENCE: u8 = 7;
/// Operands of `<<` in a print statement bind at additive level.
const SHIFT_OPERAND_PRECEDENCE: u8 = 5;

pub fn print_type(ty: &TypeTag) -> String {
    match ty {
        TypeTag::Int => "int".into(),
        TypeTag::Bool => "bool".into(),
        TypeTag::Char => "char".into(),
        TypeTag::Double => "double".into(),
        TypeTag::String => "string".into(),
        TypeTag::Container { kind, key, elem } => match key {
            Some(key) => format!("{}<{}, {}>", kind.name(), print_type(key), print_type(elem)),
            None => format!("{}<{}>", kind.name(), print_type(elem)),
        },
    }
}

pub fn print_program(program: &CcrProgram) -> String {
    let mut out = String::new();
    for header in ["iostream", "string", "vector", "stack", "queue", "deque", "map", "unordered_map"] {
        let _ = writeln!(out, "#include <{header}>");
    }
    out.push_str("using namespace std;\n");
    for func in &program.functions {
        out.push('\n');
        let ret = func.return_type.as_ref().map_or("void".to_string(), print_type);
        let params: Vec<String> = func
            .params
            .iter()
            .map(|p| {
                let amp = if p.by_ref { "&" } else { "" };
                format!("{}{amp} {}", print_type(&p.ty), p.name.name)
            })
            .collect();
        let _ = write!(out, "{ret} {}({}) ", func.name.name, params.join(", "));
        let mut printer = Printer { out: &mut out, indent: 0 };
        printer.block_body(&func.body.stmts);
        out.push('\n');
    }
    out
}

pub fn print_expr(expr: &Expr) -> String {
    expr_prec(expr, 0)
}

fn expr_prec(expr: &Expr, min: u8) -> String {
    match &expr.kind {
        ExprKind::Literal(lit) => literal(lit),
        ExprKind::Var(name) => name.clone(),
        ExprKind::Binary { op, lhs, rhs } => {
            let p = op.precedence();
            let text = format!("{} {} {}", expr_prec(lhs, p), op.symbol(), expr_prec(rhs, p + 1));
            if p < min {
                format!("({text})")
            } else {
                text
            }
        }
        ExprKind::Unary { op, operand } => {
            let inner = expr_prec(operand, UNARY_PRECEDENCE);
            // `- -x` must not print as `--x`.
            if *op == UnaryOp::Neg && inner.starts_with('-') {
                format!("{}({inner})", op.symbol())
            } else {
                format!("{}{inner}", op.symbol())
            }
        }
        ExprKind::Call { callee, args } => format!("{}({})", callee.name, args_text(args)),
        ExprKind::Method { receiver, method, args } => {
            let recv = expr_prec(receiver, u8::MAX);
            if method.name == "insert" && args.len() == 2 {
                format!("{recv}.insert({{{}}})", args_text(args))
            } else {
                format!("{recv}.{}({})", method.name, args_text(args))
            }
        }
        ExprKind::Index { receiver, index } => {
            format!("{}[{}]", expr_prec(receiver, u8::MAX), expr_prec(index, 0))
        }
    }
}

fn args_text(args: &[Expr]) -> String {
    args.iter().map(|a| expr_prec(a, 0)).collect::<Vec<_>>().join(", ")
}

fn literal(lit: &Literal) -> String {
    match lit {
        Literal::Int(v) => v.to_string(),
        Literal::Double(v) => format!("{v:?}"),
        Literal::Bool(v) => v.to_string(),
        Literal::Char(c) => format!("'{}'", escape_char(*c, '\'')),
        Literal::String(s) => {
            let body: String = s.chars().map(|c| escape_char(c, '"')).collect();
            format!("\"{body}\"")
        }
    }
}

fn escape_char(c: char, quote: char) -> String {
    match c {
        '\n' => "\\n".into(),
        '\t' => "\\t".into(),
        '\r' => "\\r".into(),
        '\0' => "\\0".into(),
        '\\' => "\\\\".into(),
        c if c == quote => format!("\\{c}"),
        c => c.to_string(),
    }
}

struct Printer<'o> {
    out: &'o mut String,
    indent: usize,
}

impl Printer<'_> {
    fn line(&mut self, text: &str) {
        for _ in 0..self.indent {
            self.out.push_str("    ");
        }
        self.out.push_str(text);
        self.out.push('\n');
    }

    /// Writes `{ ... }` starting at the current cursor position.
    fn block_body(&mut self, stmts: &[Stmt]) {
        self.out.push_str("{\n");
        self.indent += 1;
        for s in stmts {
            self.stmt(s);
        }
        self.indent -= 1;
        for _ in 0..self.indent {
            self.out.push_str("    ");
        }
        self.out.push('}');
    }

    fn pad(&mut self) {
        for _ in 0..self.indent {
            self.out.push_str("    ");
        }
    }

    fn stmt(&mut self, stmt: &Stmt) {
        match &stmt.kind {
            StmtKind::Block(block) => {
                if let Some((init, cond, step, body)) = as_for(block) {
                    self.for_loop(init, cond, step, body);
                } else {
                    self.pad();
                    self.block_body(&block.stmts);
                    self.out.push('\n');
                }
            }
            StmtKind::If {
                cond,
                then_branch,
                else_branch,
                ..
            } => {
                self.pad();
                let _ = write!(self.out, "if ({}) ", print_expr(cond));
                self.branch(then_branch);
                if let Some(e) = else_branch {
                    self.pad();
                    self.out.push_str("else ");
                    self.branch(e);
                }
            }
            StmtKind::While { cond, body, .. } => {
                self.pad();
                let _ = write!(self.out, "while ({}) ", print_expr(cond));
                self.branch(body);
            }
            _ => {
                let text = format!("{};", simple(stmt).expect("simple statement"));
                self.line(&text);
            }
        }
    }

    /// Body of a control statement, starting after its header.
    fn branch(&mut self, stmt: &Stmt) {
        match &stmt.kind {
            StmtKind::Block(b) if b.origin == BlockOrigin::Source => {
                self.block_body(&b.stmts);
                self.out.push('\n');
            }
            _ => {
                self.out.push('\n');
                self.indent += 1;
                self.stmt(stmt);
                self.indent -= 1;
            }
        }
    }

    fn for_loop(&mut self, init: Option<&Stmt>, cond: &Expr, step: Option<&Stmt>, body: &[Stmt]) {
        let init = init.and_then(simple).unwrap_or_default();
        let step = step.and_then(simple).unwrap_or_default();
        self.pad();
        let _ = write!(self.out, "for ({init}; {}; {step}) ", print_expr(cond));
        self.block_body(body);
        self.out.push('\n');
    }
}

/// Parts of a lowered `for`: init, cond, step, body statements.
type ForParts<'a> = (Option<&'a Stmt>, &'a Expr, Option<&'a Stmt>, &'a [Stmt]);

/// Recognizes a lowered `for`.
fn as_for(block: &Block) -> Option<ForParts<'_>> {
    if block.origin != BlockOrigin::ForScope {
        return None;
    }
    let (init, looped) = match block.stmts.as_slice() {
        [init, looped] => (Some(init), looped),
        [looped] => (None, looped),
        _ => return None,
    };
    let StmtKind::While { cond, body, .. } = &looped.kind else {
        return None;
    };
    let StmtKind::Block(body) = &body.kind else {
        return None;
    };
    match body.origin {
        BlockOrigin::ForBody { step: true } => {
            let (step, rest) = body.stmts.split_last()?;
            Some((init, cond, Some(step), rest))
        }
        BlockOrigin::ForBody { step: false } => Some((init, cond, None, &body.stmts)),
        _ => None,
    }
}

/// Text of a statement that fits on one line, without the semicolon.
fn simple(stmt: &Stmt) -> Option<String> {
    Some(match &stmt.kind {
        StmtKind::VarDecl { name, ty, init } => match init {
            None => format!("{} {}", print_type(ty), name.name),
            Some(Initializer::Value(e)) => format!("{} {} = {}", print_type(ty), name.name, print_expr(e)),
            Some(Initializer::Sized { count, fill }) => match fill {
                Some(fill) => format!(
                    "{} {}({}, {})",
                    print_type(ty),
                    name.name,
                    print_expr(count),
                    print_expr(fill)
                ),
                None => format!("{} {}({})", print_type(ty), name.name, print_expr(count)),
            },
        },
        StmtKind::Assign { target, op, value } => {
            format!("{} {} {}", print_expr(target), op.symbol(), print_expr(value))
        }
        StmtKind::Return(None) => "return".into(),
        StmtKind::Return(Some(e)) => format!("return {}", print_expr(e)),
        StmtKind::Expr(e) => print_expr(e),
        StmtKind::Print(items) => {
            let mut text = String::from("cout");
            for item in items {
                match item {
                    PrintItem::Value(e) => {
                        let _ = write!(text, " << {}", expr_prec(e, SHIFT_OPERAND_PRECEDENCE));
                    }
                    PrintItem::Endl(_) => text.push_str(" << endl"),
                }
            }
            text
        }
        StmtKind::Read(targets) => {
            let mut text = String::from("cin");
            for t in targets {
                let _ = write!(text, " >> {}", expr_prec(t, SHIFT_OPERAND_PRECEDENCE));
            }
            text
        }
        StmtKind::Block(_) | StmtKind::If { .. } | StmtKind::While { .. } => return None,
    })
}
