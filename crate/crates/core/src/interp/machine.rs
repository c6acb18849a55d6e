//! The tree-walking executor and its frame recorder.

use std::collections::BTreeMap;

use super::explain;
use super::input::{Input, InputError};
use super::ops;
use super::InterpreterOptions;
use crate::ccr::*;
use crate::cgr::{
    Binding, ContainerEntry, FunctionFrame, RuntimeErrorKind, ScopeBlock, Termination, TraceFrame,
};
use crate::containers::{
    AccessEvent, ContainerError, ContainerId, ContainerState, EventLog, EventTarget, Step,
    VectorState,
};
use crate::span::SourceSpan;
use crate::value::{Scalar, Value};

/// Receives frames as they are produced. Returning `false` asks the
/// machine to stop.
pub(crate) trait FrameSink {
    fn push(&mut self, frame: TraceFrame) -> bool;
}

impl FrameSink for Vec<TraceFrame> {
    fn push(&mut self, frame: TraceFrame) -> bool {
        Vec::push(self, frame);
        true
    }
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Fault {
    pub kind: RuntimeErrorKind,
    pub message: String,
    pub span: SourceSpan,
}

/// Why execution stopped early.
#[derive(Debug)]
pub(crate) enum Stop {
    Fault(Fault),
    /// The frame limit was hit; the final frame has been emitted.
    Truncated,
    /// The sink refused a frame.
    Cancelled,
}

type Exec<T> = Result<T, Stop>;

enum Flow {
    Normal,
    Return(Option<Value>),
}

struct Slot {
    name: String,
    elem: TypeTag,
    state: ContainerState,
}

#[derive(Default)]
struct Scope {
    vars: Vec<(String, Value)>,
    /// Containers declared in this scope, freed when it ends.
    owned: Vec<ContainerId>,
}

struct CallFrame {
    function: String,
    call_site: Option<SourceSpan>,
    scopes: Vec<Scope>,
}

/// An assignable location.
enum Place {
    Var(String),
    Element { id: ContainerId, key: Scalar },
}

fn header_span(func: &FunctionDef) -> SourceSpan {
    SourceSpan::new(
        func.span.start_line,
        func.span.start_col,
        func.body.span.start_line,
        func.body.span.start_col,
    )
}

fn closing_brace(block: &Block) -> SourceSpan {
    SourceSpan::new(block.span.end_line, block.span.end_col, block.span.end_line, block.span.end_col)
}

fn container_fault(err: ContainerError) -> (RuntimeErrorKind, String) {
    let kind = match err {
        ContainerError::IndexOutOfBounds { .. } => RuntimeErrorKind::IndexOutOfBounds,
        ContainerError::Empty { .. } => RuntimeErrorKind::EmptyContainer,
    };
    (kind, err.to_string())
}

fn hash_key(key: &Scalar) -> i64 {
    match key {
        Scalar::Int(k) => *k,
        other => unreachable!("hash keys are ints, found {other:?}"),
    }
}

fn index_of(key: &Scalar) -> i64 {
    match key {
        Scalar::Int(i) => *i,
        Scalar::Char(c) => *c as i64,
        other => unreachable!("indices are ints, found {other:?}"),
    }
}

/// Runs one container method. `default` is the element default used when a
/// lookup inserts.
fn apply_method(
    state: &mut ContainerState,
    name: &str,
    args: &[Scalar],
    log: &mut EventLog,
) -> Result<Option<Scalar>, ContainerError> {
    use ContainerState as S;
    let arg = |i: usize| args[i].clone();
    Ok(match (state, name) {
        (s, "size") => Some(Scalar::Int(s.len() as i64)),
        (s, "empty") => Some(Scalar::Bool(s.is_empty())),
        (S::Vector(v), "push_back") => {
            v.push_back(arg(0), log);
            None
        }
        (S::Vector(v), "pop_back") => {
            v.pop_back(log)?;
            None
        }
        (S::Stack(s), "push") => {
            s.push(arg(0), log);
            None
        }
        (S::Stack(s), "pop") => {
            s.pop(log)?;
            None
        }
        (S::Stack(s), "top") => Some(s.top(log)?),
        (S::Queue(q), "push") => {
            q.push(arg(0), log);
            None
        }
        (S::Queue(q), "pop") => {
            q.pop(log)?;
            None
        }
        (S::Queue(q), "front") => Some(q.front(log)?),
        (S::Queue(q), "back") => Some(q.back(log)?),
        (S::Deque(d), "push_back") => {
            d.push_back(arg(0), log);
            None
        }
        (S::Deque(d), "push_front") => {
            d.push_front(arg(0), log);
            None
        }
        (S::Deque(d), "pop_back") => {
            d.pop_back(log)?;
            None
        }
        (S::Deque(d), "pop_front") => {
            d.pop_front(log)?;
            None
        }
        (S::Deque(d), "front") => Some(d.front(log)?),
        (S::Deque(d), "back") => Some(d.back(log)?),
        (S::Map(m), "insert") => {
            m.insert(arg(0), arg(1), log);
            None
        }
        (S::Map(m), "erase") => Some(Scalar::Int(m.erase(&args[0], log) as i64)),
        (S::Map(m), "find") => Some(Scalar::Bool(m.find(&args[0], log).is_some())),
        (S::Map(m), "count") => Some(Scalar::Int(m.count(&args[0], log) as i64)),
        (S::UnorderedMap(h), "insert") => {
            h.insert(hash_key(&args[0]), arg(1), log);
            None
        }
        (S::UnorderedMap(h), "erase") => Some(Scalar::Int(h.erase(hash_key(&args[0]), log) as i64)),
        (S::UnorderedMap(h), "find") => Some(Scalar::Bool(h.find(hash_key(&args[0]), log).is_some())),
        (S::UnorderedMap(h), "count") => Some(Scalar::Int(h.count(hash_key(&args[0]), log) as i64)),
        (s, name) => unreachable!("validated program calls {name} on {}", s.kind()),
    })
}

fn read_element(
    state: &mut ContainerState,
    key: &Scalar,
    default: Scalar,
    log: &mut EventLog,
) -> Result<Scalar, ContainerError> {
    match state {
        ContainerState::Vector(v) => v.get(index_of(key), log),
        ContainerState::Deque(d) => d.get(index_of(key), log),
        ContainerState::Map(m) => Ok(m.get_or_insert_default(key.clone(), default, log)),
        ContainerState::UnorderedMap(h) => Ok(h.get_or_insert_default(hash_key(key), default, log)),
        other => unreachable!("validated program indexes a {}", other.kind()),
    }
}

fn write_element(state: &mut ContainerState, key: &Scalar, value: Scalar, log: &mut EventLog) -> Result<(), ContainerError> {
    match state {
        ContainerState::Vector(v) => v.set(index_of(key), value, log),
        ContainerState::Map(m) => {
            m.insert_or_assign(key.clone(), value, log);
            Ok(())
        }
        ContainerState::UnorderedMap(h) => {
            h.insert_or_assign(hash_key(key), value, log);
            Ok(())
        }
        other => unreachable!("validated program assigns into a {}", other.kind()),
    }
}

/// Explanation noun for an event target, resolved against the snapshot
/// taken when the event happened.
fn describe_target(target: &EventTarget, state: Option<&ContainerState>) -> String {
    match target {
        EventTarget::Index(i) => format!("element {i}"),
        EventTarget::Key(k) => format!("entry with key {k}"),
        EventTarget::Bucket(b) => format!("bucket {b}"),
        EventTarget::Node(id) => match state {
            Some(ContainerState::Map(m)) => match m.node(*id) {
                Some(node) => format!("node with key {}", node.key),
                None => format!("node {}", id.0),
            },
            _ => format!("node {}", id.0),
        },
    }
}

pub(crate) struct Machine<'a, S: FrameSink> {
    program: &'a CcrProgram,
    options: &'a InterpreterOptions,
    sink: S,
    calls: Vec<CallFrame>,
    heap: BTreeMap<ContainerId, Slot>,
    next_container: u32,
    stdout: String,
    input: Input,
    emitted: usize,
    /// Span of the statement or header being executed.
    span: SourceSpan,
}

impl<'a, S: FrameSink> Machine<'a, S> {
    pub fn new(program: &'a CcrProgram, options: &'a InterpreterOptions, sink: S) -> Self {
        Self {
            program,
            options,
            sink,
            calls: Vec::new(),
            heap: BTreeMap::new(),
            next_container: 0,
            stdout: String::new(),
            input: Input::new(&options.stdin_text),
            emitted: 0,
            span: SourceSpan::new(1, 1, 1, 1),
        }
    }

    pub fn into_sink(self) -> S {
        self.sink
    }

    /// Runs the entry function to completion and records the final frame.
    pub fn run(&mut self) {
        let main = self.program.entry_function().expect("validated program has an entry function");
        match self.run_entry(main) {
            Ok(exit_code) => {
                let frame = self.frame(explain::finished(exit_code), Vec::new(), None, false);
                self.push_final(frame, Termination::Finished { exit_code });
            }
            Err(Stop::Fault(fault)) => {
                self.span = fault.span;
                let frame = self.frame(explain::runtime_error(&fault.message), Vec::new(), None, true);
                self.push_final(
                    frame,
                    Termination::RuntimeError {
                        kind: fault.kind,
                        message: fault.message,
                        span: fault.span,
                    },
                );
            }
            Err(Stop::Truncated | Stop::Cancelled) => {}
        }
    }

    fn run_entry(&mut self, main: &'a FunctionDef) -> Exec<i64> {
        self.span = header_span(main);
        self.emit(explain::start(&main.name.name), Vec::new(), None)?;
        self.calls.push(CallFrame {
            function: main.name.name.clone(),
            call_site: None,
            scopes: vec![Scope::default()],
        });
        let flow = self.exec_stmts(&main.body.stmts)?;
        let exit = match flow {
            Flow::Return(Some(Value::Int(code))) => code,
            Flow::Return(other) => unreachable!("main returned {other:?}"),
            Flow::Normal => 0,
        };
        self.pop_call();
        Ok(exit)
    }

    // ---- frames ----

    fn frame(
        &self,
        explanation: String,
        events: Vec<AccessEvent>,
        replaced: Option<(ContainerId, &ContainerState)>,
        with_stack: bool,
    ) -> TraceFrame {
        let depth = self.calls.len();
        let stacks = if with_stack {
            self.calls
                .iter()
                .enumerate()
                .map(|(i, call)| FunctionFrame {
                    function: call.function.clone(),
                    call_site: call.call_site,
                    active: i + 1 == depth,
                    scopes: call
                        .scopes
                        .iter()
                        .map(|s| ScopeBlock {
                            variables: s
                                .vars
                                .iter()
                                .map(|(name, value)| Binding {
                                    name: name.clone(),
                                    value: value.clone(),
                                })
                                .collect(),
                        })
                        .collect(),
                })
                .collect()
        } else {
            Vec::new()
        };
        let containers = self
            .heap
            .iter()
            .map(|(id, slot)| ContainerEntry {
                id: *id,
                name: slot.name.clone(),
                state: match replaced {
                    Some((rid, state)) if rid == *id => state.clone(),
                    _ => slot.state.clone(),
                },
            })
            .collect();
        TraceFrame {
            index: self.emitted,
            span: self.span,
            explanation,
            stacks,
            containers,
            events,
            stdout_so_far: self.stdout.clone(),
            termination: None,
        }
    }

    fn push_final(&mut self, mut frame: TraceFrame, termination: Termination) {
        frame.termination = Some(termination);
        self.emitted += 1;
        self.sink.push(frame);
    }

    /// Records a non-final frame, or the truncation frame when only one slot
    /// is left.
    fn emit(
        &mut self,
        explanation: String,
        events: Vec<AccessEvent>,
        replaced: Option<(ContainerId, &ContainerState)>,
    ) -> Exec<()> {
        let max = self.options.max_frames;
        let with_stack = !self.calls.is_empty();
        if self.emitted + 1 >= max {
            let frame = self.frame(explain::truncated(max), Vec::new(), None, with_stack);
            self.push_final(frame, Termination::Truncated { max_frames: max });
            return Err(Stop::Truncated);
        }
        let frame = self.frame(explanation, events, replaced, with_stack);
        self.emitted += 1;
        if self.sink.push(frame) {
            Ok(())
        } else {
            Err(Stop::Cancelled)
        }
    }

    fn fault(&self, kind: RuntimeErrorKind, message: impl Into<String>) -> Stop {
        Stop::Fault(Fault {
            kind,
            message: message.into(),
            span: self.span,
        })
    }

    // ---- environment ----

    fn current(&mut self) -> &mut CallFrame {
        self.calls.last_mut().expect("a function is executing")
    }

    fn push_scope(&mut self) {
        self.current().scopes.push(Scope::default());
    }

    fn pop_scope(&mut self) {
        let scope = self.current().scopes.pop().expect("open scope");
        for id in scope.owned {
            self.heap.remove(&id);
        }
    }

    fn pop_call(&mut self) {
        let call = self.calls.pop().expect("active call");
        for scope in call.scopes {
            for id in scope.owned {
                self.heap.remove(&id);
            }
        }
    }

    fn bind(&mut self, name: &str, value: Value) {
        let scope = self.current().scopes.last_mut().expect("open scope");
        scope.vars.push((name.to_string(), value));
    }

    fn lookup(&self, name: &str) -> &Value {
        let call = self.calls.last().expect("a function is executing");
        call.scopes
            .iter()
            .rev()
            .find_map(|s| s.vars.iter().rev().find(|(n, _)| n == name).map(|(_, v)| v))
            .unwrap_or_else(|| unreachable!("validated program binds `{name}`"))
    }

    fn lookup_mut(&mut self, name: &str) -> &mut Value {
        let call = self.current();
        call.scopes
            .iter_mut()
            .rev()
            .find_map(|s| s.vars.iter_mut().rev().find(|(n, _)| n == name).map(|(_, v)| v))
            .unwrap_or_else(|| unreachable!("validated program binds `{name}`"))
    }

    fn container_id(&self, receiver: &Expr) -> ContainerId {
        match &receiver.kind {
            ExprKind::Var(name) => self
                .lookup(name)
                .container()
                .unwrap_or_else(|| unreachable!("`{name}` is a container")),
            _ => unreachable!("container receivers are variables"),
        }
    }

    fn allocate(&mut self, name: &str, ty: &TypeTag, state: ContainerState) -> ContainerId {
        let TypeTag::Container { elem, .. } = ty else {
            unreachable!("allocating a scalar");
        };
        let id = ContainerId(self.next_container);
        self.next_container += 1;
        self.heap.insert(
            id,
            Slot {
                name: name.to_string(),
                elem: (**elem).clone(),
                state,
            },
        );
        let scope = self.current().scopes.last_mut().expect("open scope");
        scope.owned.push(id);
        id
    }

    /// Runs one container operation, then emits a frame per recorded access
    /// when substeps are enabled.
    fn container_op<R>(
        &mut self,
        id: ContainerId,
        op: impl FnOnce(&mut ContainerState, Scalar, &mut EventLog) -> Result<R, ContainerError>,
    ) -> Exec<R> {
        let mut log = if self.options.substeps {
            EventLog::capturing(id)
        } else {
            EventLog::new(id)
        };
        let slot = self.heap.get_mut(&id).expect("live container");
        let default = ops::default_value(&slot.elem);
        let result = op(&mut slot.state, default, &mut log);
        if self.options.substeps {
            let name = slot.name.clone();
            for Step { event, snapshot } in log.into_steps() {
                let snapshot = snapshot.expect("capturing log stores snapshots");
                let what = describe_target(&event.target, Some(&snapshot));
                self.emit(explain::access(event.kind, &what, &name), vec![event], Some((id, &snapshot)))?;
            }
        }
        result.map_err(|e| {
            let (kind, message) = container_fault(e);
            self.fault(kind, message)
        })
    }

    fn container_name(&self, id: ContainerId) -> String {
        self.heap[&id].name.clone()
    }

    // ---- statements ----

    fn exec_stmts(&mut self, stmts: &'a [Stmt]) -> Exec<Flow> {
        for stmt in stmts {
            if let Flow::Return(v) = self.exec(stmt)? {
                return Ok(Flow::Return(v));
            }
        }
        Ok(Flow::Normal)
    }

    fn exec_block(&mut self, block: &'a Block, announce: bool) -> Exec<Flow> {
        self.push_scope();
        if announce {
            self.span = block.span;
            self.emit(explain::enter_block(), Vec::new(), None)?;
        }
        let flow = self.exec_stmts(&block.stmts)?;
        self.pop_scope();
        Ok(flow)
    }

    /// Body of an `if` or a loop.
    fn exec_branch(&mut self, stmt: &'a Stmt) -> Exec<Flow> {
        match &stmt.kind {
            StmtKind::Block(block) => self.exec_block(block, false),
            StmtKind::VarDecl { .. } => {
                self.push_scope();
                let flow = self.exec(stmt)?;
                self.pop_scope();
                Ok(flow)
            }
            _ => self.exec(stmt),
        }
    }

    fn exec(&mut self, stmt: &'a Stmt) -> Exec<Flow> {
        self.span = stmt.span;
        match &stmt.kind {
            StmtKind::Block(block) => return self.exec_block(block, block.origin == BlockOrigin::Source),
            StmtKind::VarDecl { name, ty, init } => self.exec_decl(&name.name, ty, init.as_ref())?,
            StmtKind::Assign { target, op, value } => self.exec_assign(target, *op, value)?,
            StmtKind::If {
                cond,
                then_branch,
                else_branch,
                header,
            } => {
                let holds = self.condition(cond)?;
                self.span = *header;
                let text = print_expr(cond);
                self.emit(explain::if_condition(&text, holds, else_branch.is_some()), Vec::new(), None)?;
                if holds {
                    return self.exec_branch(then_branch);
                }
                if let Some(e) = else_branch {
                    return self.exec_branch(e);
                }
            }
            StmtKind::While { cond, body, header } => loop {
                self.span = *header;
                let holds = self.condition(cond)?;
                self.span = *header;
                self.emit(explain::loop_condition(&print_expr(cond), holds), Vec::new(), None)?;
                if !holds {
                    break;
                }
                if let Flow::Return(v) = self.exec_branch(body)? {
                    return Ok(Flow::Return(v));
                }
            },
            StmtKind::Return(value) => return self.exec_return(value.as_ref()),
            StmtKind::Expr(expr) => self.exec_expr_stmt(expr)?,
            StmtKind::Print(items) => {
                let mut text = String::new();
                for item in items {
                    match item {
                        PrintItem::Value(e) => {
                            let v = self.eval_scalar(e)?;
                            text.push_str(&v.to_stream_text());
                        }
                        PrintItem::Endl(_) => text.push('\n'),
                    }
                }
                self.span = stmt.span;
                self.emit(explain::print(&text), Vec::new(), None)?;
                self.stdout.push_str(&text);
            }
            StmtKind::Read(targets) => {
                for target in targets {
                    self.exec_read(target, stmt.span)?;
                }
            }
        }
        Ok(Flow::Normal)
    }

    fn condition(&mut self, cond: &'a Expr) -> Exec<bool> {
        Ok(ops::truthy(&self.eval_scalar(cond)?))
    }

    fn exec_decl(&mut self, name: &str, ty: &TypeTag, init: Option<&'a Initializer>) -> Exec<()> {
        let span = self.span;
        if ty.is_scalar() {
            let (value, explanation) = match init {
                Some(Initializer::Value(e)) => {
                    let v = ops::coerce(self.eval_scalar(e)?, ty);
                    let text = explain::declare_init(name, &v);
                    (v, text)
                }
                _ => {
                    let v = ops::default_value(ty);
                    let text = explain::declare_default(name, &v);
                    (v, text)
                }
            };
            self.span = span;
            self.emit(explanation, Vec::new(), None)?;
            self.bind(name, value.into());
            return Ok(());
        }
        let kind = ty.container_kind().expect("container type");
        let TypeTag::Container { elem, .. } = ty else { unreachable!() };
        let (state, explanation) = match init {
            Some(Initializer::Sized { count, fill }) => {
                let n = match self.eval_scalar(count)? {
                    Scalar::Int(n) => n,
                    other => unreachable!("vector size is an int, found {other:?}"),
                };
                let fill = match fill {
                    Some(f) => ops::coerce(self.eval_scalar(f)?, elem),
                    None => ops::default_value(elem),
                };
                self.span = span;
                let n = usize::try_from(n)
                    .map_err(|_| self.fault(RuntimeErrorKind::InvalidSize, format!("vector size {n} is negative")))?;
                let text = explain::create_sized(name, n, &fill);
                (ContainerState::Vector(VectorState::filled(n, fill)), text)
            }
            _ => (
                ContainerState::empty(kind, self.options.hash_buckets),
                explain::create_container(kind, name),
            ),
        };
        self.span = span;
        self.emit(explanation, Vec::new(), None)?;
        let id = self.allocate(name, ty, state);
        self.bind(name, Value::Container(id));
        Ok(())
    }

    fn resolve_place(&mut self, target: &'a Expr) -> Exec<(Place, String)> {
        match &target.kind {
            ExprKind::Var(name) => Ok((Place::Var(name.clone()), explain::variable(name))),
            ExprKind::Index { receiver, index } => {
                let id = self.container_id(receiver);
                let key = self.eval_scalar(index)?;
                let key = match &self.heap[&id].state {
                    ContainerState::Map(_) | ContainerState::UnorderedMap(_) => key,
                    _ => Scalar::Int(index_of(&key)),
                };
                let text = format!("{}[{}]", self.container_name(id), key);
                Ok((Place::Element { id, key }, text))
            }
            _ => unreachable!("validated assignment target"),
        }
    }

    /// Static type of a place, taken from its current contents.
    fn place_type(&self, place: &Place) -> TypeTag {
        match place {
            Place::Var(name) => match self.lookup(name) {
                Value::Int(_) => TypeTag::Int,
                Value::Bool(_) => TypeTag::Bool,
                Value::Char(_) => TypeTag::Char,
                Value::Double(_) => TypeTag::Double,
                Value::String(_) => TypeTag::String,
                Value::Container(_) => unreachable!("containers are not assignable"),
            },
            Place::Element { id, .. } => self.heap[id].elem.clone(),
        }
    }

    fn read_place(&mut self, place: &Place) -> Exec<Scalar> {
        match place {
            Place::Var(name) => Ok(self.lookup(name).as_scalar().expect("scalar variable")),
            Place::Element { id, key } => {
                let key = key.clone();
                self.container_op(*id, |state, default, log| read_element(state, &key, default, log))
            }
        }
    }

    fn write_place(&mut self, place: &Place, value: Scalar) -> Exec<()> {
        match place {
            Place::Var(name) => {
                *self.lookup_mut(name) = value.into();
                Ok(())
            }
            Place::Element { id, key } => {
                let key = key.clone();
                self.container_op(*id, |state, _, log| write_element(state, &key, value, log))
            }
        }
    }

    fn exec_assign(&mut self, target: &'a Expr, op: AssignOp, value: &'a Expr) -> Exec<()> {
        let span = self.span;
        let operand = self.eval_scalar(value)?;
        let (place, text) = self.resolve_place(target)?;
        let ty = self.place_type(&place);
        let result = match op.binary() {
            None => ops::coerce(operand.clone(), &ty),
            Some(bin) => {
                let current = self.read_place(&place)?;
                self.span = span;
                let r = ops::binary(bin, &current, &operand).map_err(|(k, m)| self.fault(k, m))?;
                ops::coerce(r, &ty)
            }
        };
        self.span = span;
        self.emit(explain::assign(&text, op, &operand, &result), Vec::new(), None)?;
        self.write_place(&place, result)
    }

    fn exec_read(&mut self, target: &'a Expr, span: SourceSpan) -> Exec<()> {
        let (place, text) = self.resolve_place(target)?;
        let ty = self.place_type(&place);
        self.span = span;
        let value = self.input.read(&ty).map_err(|e| match e {
            InputError::Exhausted => self.fault(
                RuntimeErrorKind::InputExhausted,
                format!("no input left to read into {}", print_expr(target)),
            ),
            InputError::Invalid(message) => self.fault(RuntimeErrorKind::InvalidInput, message),
        })?;
        let display = match &place {
            Place::Var(name) => name.clone(),
            Place::Element { .. } => text,
        };
        self.emit(explain::read(&value, &display), Vec::new(), None)?;
        self.write_place(&place, value)
    }

    fn exec_return(&mut self, value: Option<&'a Expr>) -> Exec<Flow> {
        let span = self.span;
        let function = self.calls.last().expect("active call").function.clone();
        let def = self.program.function(&function).expect("executing function exists");
        let value = match value {
            Some(e) => {
                let v = self.eval_scalar(e)?;
                Some(match &def.return_type {
                    Some(ty) => ops::coerce(v, ty),
                    None => v,
                })
            }
            None => None,
        };
        self.span = span;
        self.emit(explain::return_value(&function, value.as_ref()), Vec::new(), None)?;
        Ok(Flow::Return(value.map(Value::from)))
    }

    fn exec_expr_stmt(&mut self, expr: &'a Expr) -> Exec<()> {
        let span = self.span;
        match &expr.kind {
            // The callee's entry frame stands for the statement.
            ExprKind::Call { .. } => {
                self.eval(expr)?;
            }
            ExprKind::Method { receiver, method, args } if self.is_mutator(receiver, &method.name) => {
                let id = self.container_id(receiver);
                let mut values = Vec::with_capacity(args.len());
                for a in args {
                    values.push(self.eval_scalar(a)?);
                }
                self.span = span;
                let name = self.container_name(id);
                let kind = self.heap[&id].state.kind();
                let explanation = mutator_explanation(kind, &method.name, &name, &values);
                self.emit(explanation, Vec::new(), None)?;
                let method_name = method.name.clone();
                self.container_op(id, |state, _, log| apply_method(state, &method_name, &values, log))?;
            }
            _ => {
                self.eval(expr)?;
                self.span = span;
                self.emit(explain::evaluate(&print_expr(expr)), Vec::new(), None)?;
            }
        }
        Ok(())
    }

    fn is_mutator(&self, receiver: &Expr, method: &str) -> bool {
        let id = self.container_id(receiver);
        let kind = self.heap[&id].state.kind();
        crate::containers::method_signature(kind, method).is_some_and(|m| m.mutates)
    }

    // ---- expressions ----

    fn eval_scalar(&mut self, expr: &'a Expr) -> Exec<Scalar> {
        match self.eval(expr)? {
            Some(v) => Ok(v.as_scalar().unwrap_or_else(|| unreachable!("scalar expected"))),
            None => unreachable!("void value used"),
        }
    }

    /// Evaluates an expression; `None` is the result of a void call.
    fn eval(&mut self, expr: &'a Expr) -> Exec<Option<Value>> {
        let span = self.span;
        let value = match &expr.kind {
            ExprKind::Literal(lit) => Value::from(match lit {
                Literal::Int(v) => Scalar::Int(*v),
                Literal::Double(v) => Scalar::Double(*v),
                Literal::Bool(v) => Scalar::Bool(*v),
                Literal::Char(v) => Scalar::Char(*v),
                Literal::String(v) => Scalar::String(v.clone()),
            }),
            ExprKind::Var(name) => self.lookup(name).clone(),
            ExprKind::Binary { op: BinaryOp::And, lhs, rhs } => {
                let v = self.condition(lhs)? && self.condition(rhs)?;
                Value::Bool(v)
            }
            ExprKind::Binary { op: BinaryOp::Or, lhs, rhs } => {
                let v = self.condition(lhs)? || self.condition(rhs)?;
                Value::Bool(v)
            }
            ExprKind::Binary { op, lhs, rhs } => {
                let a = self.eval_scalar(lhs)?;
                let b = self.eval_scalar(rhs)?;
                self.span = span;
                ops::binary(*op, &a, &b).map_err(|(k, m)| self.fault(k, m))?.into()
            }
            ExprKind::Unary { op, operand } => {
                let a = self.eval_scalar(operand)?;
                self.span = span;
                ops::unary(*op, &a).map_err(|(k, m)| self.fault(k, m))?.into()
            }
            ExprKind::Call { callee, args } => {
                let def = self.program.function(&callee.name).expect("validated callee");
                let mut values = Vec::with_capacity(args.len());
                for a in args {
                    values.push(self.eval(a)?.expect("argument has a value"));
                }
                self.span = span;
                let result = self.call(def, values, expr.span)?;
                self.span = span;
                return Ok(result);
            }
            ExprKind::Method { receiver, method, args } => {
                let id = self.container_id(receiver);
                let mut values = Vec::with_capacity(args.len());
                for a in args {
                    values.push(self.eval_scalar(a)?);
                }
                self.span = span;
                let name = method.name.clone();
                let result = self.container_op(id, |state, _, log| apply_method(state, &name, &values, log))?;
                return Ok(result.map(Value::from));
            }
            ExprKind::Index { receiver, index } => {
                let id = self.container_id(receiver);
                let key = self.eval_scalar(index)?;
                self.span = span;
                self.container_op(id, |state, default, log| read_element(state, &key, default, log))?
                    .into()
            }
        };
        Ok(Some(value))
    }

    fn call(&mut self, def: &'a FunctionDef, args: Vec<Value>, site: SourceSpan) -> Exec<Option<Value>> {
        if self.calls.len() >= self.options.max_depth {
            return Err(self.fault(
                RuntimeErrorKind::RecursionDepthExceeded,
                format!(
                    "calling {} would exceed the maximum call depth of {}",
                    def.name.name, self.options.max_depth
                ),
            ));
        }
        let mut scope = Scope::default();
        let mut shown = Vec::with_capacity(args.len());
        for (param, arg) in def.params.iter().zip(args) {
            let arg = match arg {
                Value::Container(id) => {
                    shown.push(self.container_name(id));
                    Value::Container(id)
                }
                other => {
                    let v = ops::coerce(other.as_scalar().expect("scalar argument"), &param.ty);
                    shown.push(v.to_string());
                    v.into()
                }
            };
            scope.vars.push((param.name.name.clone(), arg));
        }
        self.calls.push(CallFrame {
            function: def.name.name.clone(),
            call_site: Some(site),
            scopes: vec![scope],
        });
        self.span = site;
        self.emit(explain::call(&def.name.name, &shown), Vec::new(), None)?;
        let result = match self.exec_stmts(&def.body.stmts)? {
            Flow::Return(v) => v,
            Flow::Normal if def.return_type.is_none() => None,
            Flow::Normal => {
                self.span = closing_brace(&def.body);
                return Err(self.fault(
                    RuntimeErrorKind::MissingReturn,
                    format!("{} reached its end without returning a value", def.name.name),
                ));
            }
        };
        self.pop_call();
        Ok(result)
    }
}

fn mutator_explanation(kind: crate::containers::ContainerKind, method: &str, name: &str, args: &[Scalar]) -> String {
    use crate::containers::ContainerKind as K;
    match (kind, method) {
        (K::Vector | K::Deque, "push_back") => explain::push_back(name, &args[0]),
        (K::Deque, "push_front") => explain::push_front(name, &args[0]),
        (K::Stack, "push") => explain::push_stack(name, &args[0]),
        (K::Queue, "push") => explain::push_queue(name, &args[0]),
        (K::Vector | K::Deque, "pop_back") => explain::pop_back(name),
        (K::Deque, "pop_front") => explain::pop_front(name),
        (K::Stack, "pop") => explain::pop_stack(name),
        (K::Queue, "pop") => explain::pop_queue(name),
        (_, "insert") => explain::insert(name, &args[0], &args[1]),
        (_, "erase") => explain::erase(name, &args[0]),
        (_, other) => explain::evaluate(&format!("{name}.{other}()")),
    }
}
