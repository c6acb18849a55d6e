use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::{AccessKind, ContainerError, ContainerKind, ContainerState, EventLog, EventTarget, Snapshot};
use crate::value::Scalar;

fn checked_index(index: i64, size: usize) -> Result<usize, ContainerError> {
    usize::try_from(index)
        .ok()
        .filter(|&i| i < size)
        .ok_or(ContainerError::IndexOutOfBounds { index, size })
}

fn empty(kind: ContainerKind, operation: &'static str) -> ContainerError {
    ContainerError::Empty { kind, operation }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct VectorState {
    pub elements: Vec<Scalar>,
}

impl Snapshot for VectorState {
    fn snapshot_state(&self) -> ContainerState {
        ContainerState::Vector(self.clone())
    }
}

impl VectorState {
    /// `vector<T> v(count, fill)`.
    pub fn filled(count: usize, fill: Scalar) -> Self {
        Self {
            elements: vec![fill; count],
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn get(&self, index: i64, log: &mut EventLog) -> Result<Scalar, ContainerError> {
        let i = checked_index(index, self.len())?;
        log.record(AccessKind::Read, EventTarget::Index(i), self);
        Ok(self.elements[i].clone())
    }

    pub fn set(&mut self, index: i64, value: Scalar, log: &mut EventLog) -> Result<(), ContainerError> {
        let i = checked_index(index, self.len())?;
        self.elements[i] = value;
        log.record(AccessKind::Write, EventTarget::Index(i), self);
        Ok(())
    }

    pub fn push_back(&mut self, value: Scalar, log: &mut EventLog) {
        self.elements.push(value);
        log.record(AccessKind::Write, EventTarget::Index(self.len() - 1), self);
    }

    pub fn pop_back(&mut self, log: &mut EventLog) -> Result<(), ContainerError> {
        if self.is_empty() {
            return Err(empty(ContainerKind::Vector, "pop_back"));
        }
        log.record(AccessKind::Delete, EventTarget::Index(self.len() - 1), self);
        self.elements.pop();
        Ok(())
    }
}

/// Stack; the top is the last element.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct StackState {
    pub elements: Vec<Scalar>,
}

impl Snapshot for StackState {
    fn snapshot_state(&self) -> ContainerState {
        ContainerState::Stack(self.clone())
    }
}

impl StackState {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn push(&mut self, value: Scalar, log: &mut EventLog) {
        self.elements.push(value);
        log.record(AccessKind::Write, EventTarget::Index(self.len() - 1), self);
    }

    pub fn pop(&mut self, log: &mut EventLog) -> Result<(), ContainerError> {
        if self.is_empty() {
            return Err(empty(ContainerKind::Stack, "pop"));
        }
        log.record(AccessKind::Delete, EventTarget::Index(self.len() - 1), self);
        self.elements.pop();
        Ok(())
    }

    pub fn top(&self, log: &mut EventLog) -> Result<Scalar, ContainerError> {
        let last = self.len().checked_sub(1).ok_or(empty(ContainerKind::Stack, "top"))?;
        log.record(AccessKind::Read, EventTarget::Index(last), self);
        Ok(self.elements[last].clone())
    }
}

/// FIFO queue; the front is index 0.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct QueueState {
    pub elements: VecDeque<Scalar>,
}

impl Snapshot for QueueState {
    fn snapshot_state(&self) -> ContainerState {
        ContainerState::Queue(self.clone())
    }
}

impl QueueState {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn push(&mut self, value: Scalar, log: &mut EventLog) {
        self.elements.push_back(value);
        log.record(AccessKind::Write, EventTarget::Index(self.len() - 1), self);
    }

    pub fn pop(&mut self, log: &mut EventLog) -> Result<(), ContainerError> {
        if self.is_empty() {
            return Err(empty(ContainerKind::Queue, "pop"));
        }
        log.record(AccessKind::Delete, EventTarget::Index(0), self);
        self.elements.pop_front();
        Ok(())
    }

    pub fn front(&self, log: &mut EventLog) -> Result<Scalar, ContainerError> {
        let value = self.elements.front().ok_or(empty(ContainerKind::Queue, "front"))?;
        log.record(AccessKind::Read, EventTarget::Index(0), self);
        Ok(value.clone())
    }

    pub fn back(&self, log: &mut EventLog) -> Result<Scalar, ContainerError> {
        let value = self.elements.back().ok_or(empty(ContainerKind::Queue, "back"))?;
        log.record(AccessKind::Read, EventTarget::Index(self.len() - 1), self);
        Ok(value.clone())
    }
}

/// Double-ended queue; the front is index 0.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DequeState {
    pub elements: VecDeque<Scalar>,
}

impl Snapshot for DequeState {
    fn snapshot_state(&self) -> ContainerState {
        ContainerState::Deque(self.clone())
    }
}

impl DequeState {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn push_back(&mut self, value: Scalar, log: &mut EventLog) {
        self.elements.push_back(value);
        log.record(AccessKind::Write, EventTarget::Index(self.len() - 1), self);
    }

    pub fn push_front(&mut self, value: Scalar, log: &mut EventLog) {
        self.elements.push_front(value);
        log.record(AccessKind::Write, EventTarget::Index(0), self);
    }

    pub fn pop_back(&mut self, log: &mut EventLog) -> Result<(), ContainerError> {
        if self.is_empty() {
            return Err(empty(ContainerKind::Deque, "pop_back"));
        }
        log.record(AccessKind::Delete, EventTarget::Index(self.len() - 1), self);
        self.elements.pop_back();
        Ok(())
    }

    pub fn pop_front(&mut self, log: &mut EventLog) -> Result<(), ContainerError> {
        if self.is_empty() {
            return Err(empty(ContainerKind::Deque, "pop_front"));
        }
        log.record(AccessKind::Delete, EventTarget::Index(0), self);
        self.elements.pop_front();
        Ok(())
    }

    pub fn front(&self, log: &mut EventLog) -> Result<Scalar, ContainerError> {
        let value = self.elements.front().ok_or(empty(ContainerKind::Deque, "front"))?;
        log.record(AccessKind::Read, EventTarget::Index(0), self);
        Ok(value.clone())
    }

    pub fn back(&self, log: &mut EventLog) -> Result<Scalar, ContainerError> {
        let value = self.elements.back().ok_or(empty(ContainerKind::Deque, "back"))?;
        log.record(AccessKind::Read, EventTarget::Index(self.len() - 1), self);
        Ok(value.clone())
    }

    pub fn get(&self, index: i64, log: &mut EventLog) -> Result<Scalar, ContainerError> {
        let i = checked_index(index, self.len())?;
        log.record(AccessKind::Read, EventTarget::Index(i), self);
        Ok(self.elements[i].clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::containers::ContainerId;

    fn ints(values: &[i64]) -> Vec<Scalar> {
        values.iter().map(|&v| Scalar::Int(v)).collect()
    }

    #[test]
    fn vector_read_fourth_element() {
        let v = VectorState { elements: ints(&[10, 20, 30, 40]) };
        let mut log = EventLog::new(ContainerId(0));
        assert_eq!(v.get(3, &mut log), Ok(Scalar::Int(40)));
        let events = log.events();
        assert_eq!(events.len(), 1);
        assert_eq!(events[0].kind, AccessKind::Read);
        assert_eq!(events[0].target, EventTarget::Index(3));
    }

    #[test]
    fn vector_index_errors() {
        let mut log = EventLog::new(ContainerId(0));
        let empty = VectorState::default();
        assert_eq!(
            empty.get(0, &mut log),
            Err(ContainerError::IndexOutOfBounds { index: 0, size: 0 })
        );
        let one = VectorState { elements: ints(&[7]) };
        assert_eq!(
            one.get(-1, &mut log),
            Err(ContainerError::IndexOutOfBounds { index: -1, size: 1 })
        );
        assert!(log.events().is_empty());
        assert_eq!(one.get(0, &mut log), Ok(Scalar::Int(7)));
        assert_eq!(log.events()[0].target, EventTarget::Index(0));
    }

    #[test]
    fn delete_is_recorded_before_removal() {
        let mut s = StackState { elements: ints(&[1, 2]) };
        let mut log = EventLog::capturing(ContainerId(1));
        s.pop(&mut log).unwrap();
        let step = &log.steps()[0];
        assert_eq!(step.event.kind, AccessKind::Delete);
        assert_eq!(step.event.target, EventTarget::Index(1));
        assert_eq!(step.snapshot.as_ref().unwrap().len(), 2);
        assert_eq!(s.len(), 1);
    }

    #[test]
    fn empty_pops_fail() {
        let mut log = EventLog::new(ContainerId(0));
        assert!(StackState::default().pop(&mut log).is_err());
        assert!(QueueState::default().pop(&mut log).is_err());
        assert!(DequeState::default().pop_front(&mut log).is_err());
        assert!(VectorState::default().pop_back(&mut log).is_err());
        assert!(QueueState::default().front(&mut log).is_err());
    }

    #[test]
    fn deque_both_ends() {
        let mut d = DequeState::default();
        let mut log = EventLog::new(ContainerId(0));
        d.push_back(Scalar::Int(2), &mut log);
        d.push_front(Scalar::Int(1), &mut log);
        d.push_back(Scalar::Int(3), &mut log);
        assert_eq!(d.elements, VecDeque::from(ints(&[1, 2, 3])));
        assert_eq!(d.get(1, &mut log), Ok(Scalar::Int(2)));
        d.pop_front(&mut log).unwrap();
        assert_eq!(d.front(&mut log), Ok(Scalar::Int(2)));
        let targets: Vec<_> = log.events().into_iter().map(|e| e.target).collect();
        assert_eq!(
            targets,
            vec![
                EventTarget::Index(0),
                EventTarget::Index(0),
                EventTarget::Index(2),
                EventTarget::Index(1),
                EventTarget::Index(0),
                EventTarget::Index(0),
            ]
        );
    }
}
