//! The committed differential corpus: `NAME.cpp` with the native program's
//! stdout in `NAME.out`, its input in `NAME.in` when it reads any, and its
//! exit status in `NAME.exit` when nonzero.

#![allow(dead_code)]

use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};

use vistrace::ccr::{BlockOrigin, Stmt, StmtKind};
use vistrace::cgr::TraceDocument;
use vistrace::frontend::compile;
use vistrace::interp::{run, InterpreterOptions};

pub struct Case {
    pub name: String,
    pub path: PathBuf,
    pub source: String,
    pub stdin: Option<String>,
    pub expected_stdout: String,
    pub expected_exit: i64,
}

pub fn dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/corpus")
}

pub fn cases_in(dir: &Path) -> Vec<Case> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .expect("corpus directory")
        .map(|e| e.expect("corpus entry").path())
        .filter(|p| p.extension().is_some_and(|x| x == "cpp"))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|path| {
            let read = |ext: &str| fs::read_to_string(path.with_extension(ext)).ok();
            Case {
                name: path.file_stem().unwrap().to_string_lossy().into_owned(),
                source: fs::read_to_string(&path).expect("corpus source"),
                stdin: read("in"),
                expected_stdout: read("out").unwrap_or_else(|| panic!("{} has no .out file", path.display())),
                expected_exit: read("exit").map_or(0, |s| s.trim().parse().expect("exit status")),
                path,
            }
        })
        .collect()
}

pub fn cases() -> Vec<Case> {
    cases_in(&dir())
}

impl Case {
    pub fn options(&self) -> InterpreterOptions {
        InterpreterOptions {
            stdin_text: self.stdin.clone().unwrap_or_default(),
            ..InterpreterOptions::default()
        }
    }

    pub fn trace_with(&self, options: &InterpreterOptions) -> TraceDocument {
        let program = compile(&self.source)
            .unwrap_or_else(|d| panic!("{} does not compile: {d:?}", self.name));
        run(&program, options).expect("valid options")
    }

    pub fn trace(&self) -> TraceDocument {
        self.trace_with(&self.options())
    }
}

fn statement_forms(stmt: &Stmt, seen: &mut HashSet<&'static str>) {
    let tag = match &stmt.kind {
        StmtKind::Block(b) => {
            for s in &b.stmts {
                statement_forms(s, seen);
            }
            match b.origin {
                BlockOrigin::Source if b.stmts.is_empty() => "empty block",
                BlockOrigin::Source => "block",
                BlockOrigin::ForScope | BlockOrigin::ForBody { .. } => "for",
            }
        }
        StmtKind::VarDecl { .. } => "declaration",
        StmtKind::Assign { .. } => "assignment",
        StmtKind::If {
            then_branch,
            else_branch,
            ..
        } => {
            statement_forms(then_branch, seen);
            if let Some(e) = else_branch {
                statement_forms(e, seen);
                seen.insert("else");
            }
            "if"
        }
        StmtKind::While { body, .. } => {
            statement_forms(body, seen);
            "while"
        }
        StmtKind::Return(_) => "return",
        StmtKind::Expr(_) => "expression",
        StmtKind::Print(_) => "print",
        StmtKind::Read(_) => "read",
    };
    seen.insert(tag);
}

pub const STATEMENT_FORMS: [&str; 12] = [
    "block",
    "empty block",
    "for",
    "declaration",
    "assignment",
    "if",
    "else",
    "while",
    "return",
    "expression",
    "print",
    "read",
];

/// Checks that `cases`, traced as `docs`, cover every statement form, all six
/// container kinds, a recursive call and a shadowed variable.
pub fn coverage(cases: &[Case], docs: &[TraceDocument]) -> Result<(), String> {
    let mut statements = HashSet::new();
    let mut containers = HashSet::new();
    let mut recursive = false;
    let mut shadowed = false;
    for (case, doc) in cases.iter().zip(docs) {
        let program = compile(&case.source).map_err(|d| format!("{}: {d:?}", case.name))?;
        for f in &program.functions {
            for s in &f.body.stmts {
                statement_forms(s, &mut statements);
            }
        }
        for frame in &doc.frames {
            containers.extend(frame.containers.iter().map(|c| c.state.kind()));
            let names: HashSet<&str> = frame.stacks.iter().map(|f| f.function.as_str()).collect();
            recursive |= names.len() < frame.stacks.len();
            for call in &frame.stacks {
                let mut bound = HashSet::new();
                for scope in &call.scopes {
                    for b in &scope.variables {
                        shadowed |= !bound.insert(b.name.as_str());
                    }
                }
            }
        }
    }
    if let Some(missing) = STATEMENT_FORMS.iter().find(|t| !statements.contains(*t)) {
        return Err(format!("no {missing} statement in the corpus"));
    }
    if containers.len() != 6 {
        return Err(format!("only these containers are exercised: {containers:?}"));
    }
    if !recursive {
        return Err("no recursive call in the corpus".into());
    }
    if !shadowed {
        return Err("no shadowed variable in the corpus".into());
    }
    Ok(())
}
