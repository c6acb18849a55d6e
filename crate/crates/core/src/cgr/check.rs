//! Structural checks over a whole trace document.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::codec::version_supported;
use super::model::{FunctionFrame, Termination, TraceDocument, TraceFrame};
use crate::containers::ContainerState;
use crate::value::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TraceDiagnosticKind {
    EmptyDocument,
    VersionMismatch,
    ContiguityViolation,
    SpanOutOfBounds,
    MisplacedTermination,
    ActiveFrameViolation,
    DuplicateContainer,
    DanglingContainer,
    DanglingEventTarget,
    ContainerInvariant,
    ScopeNesting,
    OutputRegression,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceDiagnostic {
    pub kind: TraceDiagnosticKind,
    /// Position of the offending frame in the document.
    pub frame: Option<usize>,
    pub message: String,
}

impl fmt::Display for TraceDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.frame {
            Some(i) => write!(f, "frame {i}: {:?}: {}", self.kind, self.message),
            None => write!(f, "{:?}: {}", self.kind, self.message),
        }
    }
}

struct Checker {
    out: Vec<TraceDiagnostic>,
}

impl Checker {
    fn report(&mut self, kind: TraceDiagnosticKind, frame: Option<usize>, message: impl Into<String>) {
        self.out.push(TraceDiagnostic {
            kind,
            frame,
            message: message.into(),
        });
    }
}

/// Checks every document invariant. An empty result means the document is
/// valid.
pub fn validate_document(doc: &TraceDocument) -> Vec<TraceDiagnostic> {
    use TraceDiagnosticKind::*;
    let mut c = Checker { out: Vec::new() };
    match semver::Version::parse(&doc.format_version) {
        Ok(v) if version_supported(&v) => {}
        _ => c.report(
            VersionMismatch,
            None,
            format!("format version {} is not supported", doc.format_version),
        ),
    }
    if doc.frames.is_empty() {
        c.report(EmptyDocument, None, "the document has no frames");
        return c.out;
    }
    let lines = crate::span::line_count(&doc.source);
    let last = doc.frames.len() - 1;
    for (pos, frame) in doc.frames.iter().enumerate() {
        if frame.index != pos {
            c.report(
                ContiguityViolation,
                Some(pos),
                format!("frame at position {pos} has index {}", frame.index),
            );
        }
        if !frame.span.within_lines(lines) {
            c.report(
                SpanOutOfBounds,
                Some(pos),
                format!("span lines {}..{} outside 1..{lines}", frame.span.start_line, frame.span.end_line),
            );
        }
        match (&frame.termination, pos == last) {
            (Some(_), false) => c.report(MisplacedTermination, Some(pos), "termination on a frame that is not last"),
            (None, true) => c.report(MisplacedTermination, Some(pos), "the last frame has no termination"),
            _ => {}
        }
        if let Some(Termination::RuntimeError { span, .. }) = &frame.termination {
            if !span.within_lines(lines) {
                c.report(SpanOutOfBounds, Some(pos), "runtime error span outside the source");
            }
        }
        check_active(&mut c, pos, &frame.stacks);
        check_containers(&mut c, pos, frame, doc.options.hash_buckets);
        if pos > 0 {
            let prev = &doc.frames[pos - 1];
            if !frame.stdout_so_far.starts_with(&prev.stdout_so_far) {
                c.report(OutputRegression, Some(pos), "output does not extend the previous frame's output");
            }
            check_nesting(&mut c, pos, &prev.stacks, &frame.stacks);
        }
    }
    c.out
}

fn check_active(c: &mut Checker, pos: usize, stacks: &[FunctionFrame]) {
    if stacks.is_empty() {
        return;
    }
    let active: Vec<usize> = stacks.iter().enumerate().filter(|(_, f)| f.active).map(|(i, _)| i).collect();
    if active != [stacks.len() - 1] {
        c.report(
            TraceDiagnosticKind::ActiveFrameViolation,
            Some(pos),
            format!(
                "exactly the innermost of {} function frames must be active, found active {active:?}",
                stacks.len()
            ),
        );
    }
}

fn check_containers(c: &mut Checker, pos: usize, frame: &TraceFrame, buckets: usize) {
    use TraceDiagnosticKind::*;
    let mut ids = HashSet::new();
    for entry in &frame.containers {
        if !ids.insert(entry.id) {
            c.report(DuplicateContainer, Some(pos), format!("container {} listed twice", entry.id));
        }
        if let Err(why) = entry.state.check_invariants() {
            c.report(ContainerInvariant, Some(pos), format!("container {} ({}): {why}", entry.id, entry.name));
        }
        if let ContainerState::UnorderedMap(h) = &entry.state {
            if h.bucket_count() != buckets {
                c.report(
                    ContainerInvariant,
                    Some(pos),
                    format!("container {} has {} buckets, options say {buckets}", entry.id, h.bucket_count()),
                );
            }
        }
    }
    for call in &frame.stacks {
        for scope in &call.scopes {
            for binding in &scope.variables {
                if let Value::Container(id) = binding.value {
                    if !ids.contains(&id) {
                        c.report(
                            DanglingContainer,
                            Some(pos),
                            format!("variable {} refers to missing container {id}", binding.name),
                        );
                    }
                }
            }
        }
    }
    for event in &frame.events {
        match frame.container(event.container) {
            None => c.report(
                DanglingContainer,
                Some(pos),
                format!("event on missing container {}", event.container),
            ),
            Some(entry) if !entry.state.has_target(&event.target) => c.report(
                DanglingEventTarget,
                Some(pos),
                format!("event target {:?} does not exist in container {}", event.target, event.container),
            ),
            Some(_) => {}
        }
    }
}

fn names(frame: &FunctionFrame, scope: usize) -> Vec<&str> {
    frame.scopes[scope].variables.iter().map(|b| b.name.as_str()).collect()
}

/// Between consecutive frames, function frames are pushed and popped at the
/// top, and within a surviving function frame scopes only grow or shrink at
/// the tail, each scope gaining bindings at its end.
fn check_nesting(c: &mut Checker, pos: usize, prev: &[FunctionFrame], next: &[FunctionFrame]) {
    for (depth, (a, b)) in prev.iter().zip(next).enumerate() {
        if a.function != b.function || a.call_site != b.call_site {
            // Everything from here up was popped and re-pushed.
            return;
        }
        for scope in 0..a.scopes.len().min(b.scopes.len()) {
            let (x, y) = (names(a, scope), names(b, scope));
            let n = x.len().min(y.len());
            if x[..n] != y[..n] {
                c.report(
                    TraceDiagnosticKind::ScopeNesting,
                    Some(pos),
                    format!(
                        "scope {scope} of {} (depth {depth}) changed from {x:?} to {y:?} without being exited",
                        a.function
                    ),
                );
                return;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::TraceDiagnosticKind::*;
    use super::*;
    use crate::cgr::ContainerEntry;
    use crate::containers::{AccessEvent, AccessKind, ContainerId, EventTarget};
    use crate::frontend::compile;
    use crate::interp::{run, InterpreterOptions};

    const PROGRAM: &str = "#include <vector>
using namespace std;
int main() {
    vector<int> v;
    v.push_back(4);
    int x = v[0];
    cout << x << endl;
    return 0;
}
";

    fn doc() -> TraceDocument {
        run(&compile(PROGRAM).unwrap(), &InterpreterOptions::default()).unwrap()
    }

    fn kinds(doc: &TraceDocument) -> Vec<TraceDiagnosticKind> {
        validate_document(doc).into_iter().map(|d| d.kind).collect()
    }

    fn with_vector(doc: &TraceDocument) -> usize {
        doc.frames.iter().position(|f| !f.containers.is_empty() && !f.stacks.is_empty()).unwrap()
    }

    #[test]
    fn fresh_trace_is_clean() {
        assert_eq!(kinds(&doc()), []);
    }

    #[test]
    fn gap_in_indices() {
        let mut d = doc();
        d.frames.truncate(2);
        d.frames[1].index = 2;
        d.frames[1].termination = Some(Termination::Partial);
        assert_eq!(kinds(&d), [ContiguityViolation]);
    }

    #[test]
    fn no_frames() {
        let mut d = doc();
        d.frames.clear();
        assert_eq!(kinds(&d), [EmptyDocument]);
    }

    #[test]
    fn version_outside_range() {
        let mut d = doc();
        d.format_version = "2.0.0".into();
        assert_eq!(kinds(&d), [VersionMismatch]);
    }

    #[test]
    fn termination_only_on_last() {
        let mut d = doc();
        d.frames.last_mut().unwrap().termination = None;
        assert_eq!(kinds(&d), [MisplacedTermination]);
        let mut d = doc();
        d.frames[0].termination = Some(Termination::Partial);
        assert_eq!(kinds(&d), [MisplacedTermination]);
    }

    #[test]
    fn span_past_the_source() {
        let mut d = doc();
        d.frames[1].span.end_line = 99;
        assert_eq!(kinds(&d), [SpanOutOfBounds]);
    }

    #[test]
    fn event_target_missing_from_snapshot() {
        let mut d = doc();
        let i = with_vector(&d);
        let id = d.frames[i].containers[0].id;
        d.frames[i].events.push(AccessEvent {
            container: id,
            target: EventTarget::Index(5),
            kind: AccessKind::Read,
            step: 0,
        });
        assert_eq!(kinds(&d), [DanglingEventTarget]);
        d.frames[i].events[0].container = ContainerId(77);
        assert_eq!(kinds(&d), [DanglingContainer]);
    }

    #[test]
    fn variable_pointing_at_missing_container() {
        let mut d = doc();
        let i = d
            .frames
            .iter()
            .position(|f| f.events.is_empty() && f.active_frame().is_some_and(|m| m.lookup("v").is_some()))
            .unwrap();
        d.frames[i].containers.clear();
        assert_eq!(kinds(&d), [DanglingContainer]);
    }

    #[test]
    fn container_listed_twice() {
        let mut d = doc();
        let i = with_vector(&d);
        let entry: ContainerEntry = d.frames[i].containers[0].clone();
        d.frames[i].containers.push(entry);
        assert_eq!(kinds(&d), [DuplicateContainer]);
    }

    #[test]
    fn inactive_innermost_frame() {
        let mut d = doc();
        d.frames[1].stacks[0].active = false;
        assert_eq!(kinds(&d), [ActiveFrameViolation]);
    }

    #[test]
    fn output_shrinks() {
        let mut d = doc();
        let last = d.frames.len() - 1;
        d.frames[last].stdout_so_far.clear();
        assert_eq!(kinds(&d), [OutputRegression]);
    }

    #[test]
    fn binding_renamed_in_place() {
        let mut d = doc();
        let i = with_vector(&d) + 1;
        d.frames[i].stacks[0].scopes[0].variables[0].name = "w".into();
        assert!(kinds(&d).contains(&ScopeNesting));
    }

    #[test]
    fn wrong_bucket_count() {
        let source = "#include <unordered_map>
using namespace std;
int main() {
    unordered_map<int, int> h;
    return 0;
}
";
        let mut d = run(&compile(source).unwrap(), &InterpreterOptions::default()).unwrap();
        assert_eq!(kinds(&d), []);
        d.options.hash_buckets = 7;
        assert_eq!(kinds(&d), [ContainerInvariant]);
    }
}
