//! Explanation templates. Each function fills one row of the table in
//! `docs/templates.md`; the IDs in the doc comments match that table.

use crate::ccr::AssignOp;
use crate::containers::ContainerKind;
use crate::value::Scalar;

/// T1
pub fn declare_init(name: &str, value: &Scalar) -> String {
    format!("Declaring variable {name} and initializing it to {value}")
}

/// T2
pub fn declare_default(name: &str, value: &Scalar) -> String {
    format!("Declaring variable {name} with default value {value}")
}

/// T3
pub fn create_container(kind: ContainerKind, name: &str) -> String {
    format!("Creating empty {kind} {name}")
}

/// T3b
pub fn create_sized(name: &str, count: usize, fill: &Scalar) -> String {
    let noun = if count == 1 { "element" } else { "elements" };
    format!("Creating vector {name} with {count} {noun} equal to {fill}")
}

/// T4
pub fn loop_condition(cond: &str, holds: bool) -> String {
    if holds {
        format!("Condition {cond} is true, entering loop")
    } else {
        format!("Condition {cond} is false, exiting loop")
    }
}

/// T5
pub fn if_condition(cond: &str, holds: bool, has_else: bool) -> String {
    match (holds, has_else) {
        (true, _) => format!("Condition {cond} is true, entering the if branch"),
        (false, true) => format!("Condition {cond} is false, entering the else branch"),
        (false, false) => format!("Condition {cond} is false, skipping the if branch"),
    }
}

/// T6
pub fn assign(target: &str, op: AssignOp, operand: &Scalar, result: &Scalar) -> String {
    match op {
        AssignOp::Set => format!("Assigning {result} to {target}"),
        AssignOp::Add => format!("Adding {operand} to {target}, giving {result}"),
        AssignOp::Sub => format!("Subtracting {operand} from {target}, giving {result}"),
        AssignOp::Mul => format!("Multiplying {target} by {operand}, giving {result}"),
        AssignOp::Div => format!("Dividing {target} by {operand}, giving {result}"),
        AssignOp::Rem => format!("Taking {target} modulo {operand}, giving {result}"),
    }
}

/// Description of an assignment target: `variable x` or `v[2]`.
pub fn variable(name: &str) -> String {
    format!("variable {name}")
}

/// T7
pub fn push_back(container: &str, value: &Scalar) -> String {
    format!("Appending {value} to the back of {container}")
}

/// T8
pub fn push_front(container: &str, value: &Scalar) -> String {
    format!("Prepending {value} to the front of {container}")
}

/// T9
pub fn push_stack(container: &str, value: &Scalar) -> String {
    format!("Pushing {value} onto stack {container}")
}

/// T10
pub fn push_queue(container: &str, value: &Scalar) -> String {
    format!("Adding {value} to the back of queue {container}")
}

/// T11
pub fn pop_back(container: &str) -> String {
    format!("Removing the last element of {container}")
}

/// T12
pub fn pop_front(container: &str) -> String {
    format!("Removing the first element of {container}")
}

/// T13
pub fn pop_stack(container: &str) -> String {
    format!("Popping the top element of stack {container}")
}

/// T14
pub fn pop_queue(container: &str) -> String {
    format!("Removing the front element of queue {container}")
}

/// T15
pub fn insert(container: &str, key: &Scalar, value: &Scalar) -> String {
    format!("Inserting key {key} with value {value} into {container}")
}

/// T16
pub fn erase(container: &str, key: &Scalar) -> String {
    format!("Erasing key {key} from {container}")
}

/// T17
pub fn return_value(function: &str, value: Option<&Scalar>) -> String {
    match value {
        Some(v) => format!("Returning {v} from {function}"),
        None => format!("Returning from {function}"),
    }
}

/// T18
pub fn print(text: &str) -> String {
    format!("Printing {text:?}")
}

/// T19
pub fn read(value: &Scalar, target: &str) -> String {
    format!("Reading {value} into {target}")
}

/// T20
pub fn call(function: &str, args: &[String]) -> String {
    format!("Calling {function}({})", args.join(", "))
}

/// T21
pub fn enter_block() -> String {
    "Entering a new block scope".to_string()
}

/// T22
pub fn evaluate(expr: &str) -> String {
    format!("Evaluating {expr}")
}

/// T23
pub fn start(entry: &str) -> String {
    format!("Starting execution of {entry}")
}

/// T24
pub fn finished(exit_code: i64) -> String {
    format!("Program finished with exit code {exit_code}")
}

/// T25
pub fn runtime_error(message: &str) -> String {
    format!("Runtime error: {message}")
}

/// T26
pub fn truncated(max_frames: usize) -> String {
    format!("Execution stopped after reaching the limit of {max_frames} frames")
}

/// S1, S2, S3: one container access inside a larger operation.
pub fn access(kind: crate::containers::AccessKind, target: &str, container: &str) -> String {
    use crate::containers::AccessKind::*;
    match kind {
        Read => format!("Reading {target} of {container}"),
        Write => format!("Writing {target} of {container}"),
        Delete => format!("Deleting {target} of {container}"),
    }
}
