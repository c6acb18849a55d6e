//! Instrumented container models.
//!
//! Every operation mutates the container in place and reports the accesses it
//! made to an [`EventLog`]. An event is recorded at the moment its target
//! exists: reads and writes after the element is in place, deletes just
//! before the element is removed. A capturing log also stores a snapshot of
//! the container taken at each event, which the interpreter turns into
//! substep frames.

mod bst;
mod hash;
mod methods;
mod seq;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::value::Scalar;

pub use bst::{BstMap, BstNode};
pub use hash::{bucket_of, HashEntry, HashTable, DEFAULT_BUCKETS};
pub use methods::{index_access, method_signature, methods, IndexAccess, MethodSig, Operand};
pub use seq::{DequeState, QueueState, StackState, VectorState};

/// Identity of one container instance within a trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ContainerId(pub u32);

/// Identity of a node inside one map; assigned from a per-map counter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub u32);

impl fmt::Display for ContainerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ContainerKind {
    Vector,
    Stack,
    Queue,
    Deque,
    Map,
    UnorderedMap,
}

impl ContainerKind {
    pub const ALL: [ContainerKind; 6] = [
        ContainerKind::Vector,
        ContainerKind::Stack,
        ContainerKind::Queue,
        ContainerKind::Deque,
        ContainerKind::Map,
        ContainerKind::UnorderedMap,
    ];

    /// The source-level type name.
    pub fn name(self) -> &'static str {
        match self {
            ContainerKind::Vector => "vector",
            ContainerKind::Stack => "stack",
            ContainerKind::Queue => "queue",
            ContainerKind::Deque => "deque",
            ContainerKind::Map => "map",
            ContainerKind::UnorderedMap => "unordered_map",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }

    pub fn is_keyed(self) -> bool {
        matches!(self, ContainerKind::Map | ContainerKind::UnorderedMap)
    }
}

impl fmt::Display for ContainerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AccessKind {
    Read,
    Write,
    Delete,
}

/// What an access touched.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EventTarget {
    /// Position in a sequence container (front is 0, stack top is last).
    Index(usize),
    /// Entry of a hash map, identified by its key.
    Key(Scalar),
    /// Node of a tree map.
    Node(NodeId),
    /// Bucket of a hash map.
    Bucket(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AccessEvent {
    pub container: ContainerId,
    pub target: EventTarget,
    pub kind: AccessKind,
    /// Position of this event within its logical operation.
    pub step: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ContainerError {
    #[error("index {index} is out of bounds for size {size}")]
    IndexOutOfBounds { index: i64, size: usize },
    #[error("{operation} called on an empty {kind}")]
    Empty {
        kind: ContainerKind,
        operation: &'static str,
    },
}

/// Snapshot of a container, tagged by kind.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ContainerState {
    Vector(VectorState),
    Stack(StackState),
    Queue(QueueState),
    Deque(DequeState),
    Map(BstMap),
    UnorderedMap(HashTable),
}

impl ContainerState {
    /// An empty container of the given kind. `buckets` only matters for
    /// hash maps.
    pub fn empty(kind: ContainerKind, buckets: usize) -> Self {
        match kind {
            ContainerKind::Vector => ContainerState::Vector(VectorState::default()),
            ContainerKind::Stack => ContainerState::Stack(StackState::default()),
            ContainerKind::Queue => ContainerState::Queue(QueueState::default()),
            ContainerKind::Deque => ContainerState::Deque(DequeState::default()),
            ContainerKind::Map => ContainerState::Map(BstMap::default()),
            ContainerKind::UnorderedMap => ContainerState::UnorderedMap(HashTable::new(buckets)),
        }
    }

    pub fn kind(&self) -> ContainerKind {
        match self {
            ContainerState::Vector(_) => ContainerKind::Vector,
            ContainerState::Stack(_) => ContainerKind::Stack,
            ContainerState::Queue(_) => ContainerKind::Queue,
            ContainerState::Deque(_) => ContainerKind::Deque,
            ContainerState::Map(_) => ContainerKind::Map,
            ContainerState::UnorderedMap(_) => ContainerKind::UnorderedMap,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            ContainerState::Vector(s) => s.len(),
            ContainerState::Stack(s) => s.len(),
            ContainerState::Queue(s) => s.len(),
            ContainerState::Deque(s) => s.len(),
            ContainerState::Map(s) => s.len(),
            ContainerState::UnorderedMap(s) => s.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Deep copy for a trace frame. Later mutations of `self` do not affect
    /// the returned value.
    pub fn snapshot(&self) -> ContainerState {
        self.clone()
    }

    /// Whether `target` names something present in this state.
    pub fn has_target(&self, target: &EventTarget) -> bool {
        match (self, target) {
            (ContainerState::Vector(s), EventTarget::Index(i)) => *i < s.len(),
            (ContainerState::Stack(s), EventTarget::Index(i)) => *i < s.len(),
            (ContainerState::Queue(s), EventTarget::Index(i)) => *i < s.len(),
            (ContainerState::Deque(s), EventTarget::Index(i)) => *i < s.len(),
            (ContainerState::Map(s), EventTarget::Node(id)) => s.node(*id).is_some(),
            (ContainerState::UnorderedMap(s), EventTarget::Bucket(b)) => *b < s.bucket_count(),
            (ContainerState::UnorderedMap(s), EventTarget::Key(Scalar::Int(k))) => s.locate(*k).is_some(),
            _ => false,
        }
    }

    /// Checks the structural invariant of the kind: key order for tree maps,
    /// bucket residency for hash maps. Returns a description of the first
    /// violation.
    pub fn check_invariants(&self) -> Result<(), String> {
        match self {
            ContainerState::Map(m) => m.check_invariants(),
            ContainerState::UnorderedMap(h) => h.check_invariants(),
            _ => Ok(()),
        }
    }
}

/// Conversion of a concrete container into a tagged snapshot.
pub trait Snapshot {
    fn snapshot_state(&self) -> ContainerState;
}

/// One recorded access, with the container state at that moment when the
/// log is capturing.
#[derive(Debug, Clone, PartialEq)]
pub struct Step {
    pub event: AccessEvent,
    pub snapshot: Option<ContainerState>,
}

/// Collects the accesses made by container operations.
#[derive(Debug, Clone)]
pub struct EventLog {
    container: ContainerId,
    capture: bool,
    steps: Vec<Step>,
}

impl EventLog {
    pub fn new(container: ContainerId) -> Self {
        Self {
            container,
            capture: false,
            steps: Vec::new(),
        }
    }

    /// A log that also snapshots the container at every event.
    pub fn capturing(container: ContainerId) -> Self {
        Self {
            capture: true,
            ..Self::new(container)
        }
    }

    pub(crate) fn record(&mut self, kind: AccessKind, target: EventTarget, state: &dyn Snapshot) {
        let event = AccessEvent {
            container: self.container,
            target,
            kind,
            step: self.steps.len() as u32,
        };
        let snapshot = self.capture.then(|| state.snapshot_state());
        self.steps.push(Step { event, snapshot });
    }

    pub fn events(&self) -> Vec<AccessEvent> {
        self.steps.iter().map(|s| s.event.clone()).collect()
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn into_steps(self) -> Vec<Step> {
        self.steps
    }

    /// Drops everything recorded so far; the next event is step 0 again.
    pub fn clear(&mut self) {
        self.steps.clear();
    }
}
