//! Unbalanced binary search tree backing `map`.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::{AccessKind, ContainerState, EventLog, EventTarget, NodeId, Snapshot};
use crate::value::Scalar;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BstNode {
    pub id: NodeId,
    pub key: Scalar,
    pub value: Scalar,
    pub left: Option<NodeId>,
    pub right: Option<NodeId>,
}

/// Node storage is a vector ordered by id; ids come from a monotonic counter
/// so appends keep it sorted.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BstMap {
    pub root: Option<NodeId>,
    pub next_id: u32,
    pub nodes: Vec<BstNode>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    Left,
    Right,
}

type Link = Option<(NodeId, Side)>;

enum Search {
    Found { id: NodeId, parent: Link },
    Vacant { parent: Link },
}

impl Snapshot for BstMap {
    fn snapshot_state(&self) -> ContainerState {
        ContainerState::Map(self.clone())
    }
}

impl BstMap {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, id: NodeId) -> Option<&BstNode> {
        self.nodes
            .binary_search_by_key(&id, |n| n.id)
            .ok()
            .map(|i| &self.nodes[i])
    }

    fn node_mut(&mut self, id: NodeId) -> &mut BstNode {
        let i = self
            .nodes
            .binary_search_by_key(&id, |n| n.id)
            .expect("linked node exists");
        &mut self.nodes[i]
    }

    fn remove_node(&mut self, id: NodeId) -> BstNode {
        let i = self
            .nodes
            .binary_search_by_key(&id, |n| n.id)
            .expect("linked node exists");
        self.nodes.remove(i)
    }

    /// Key/value pairs in ascending key order.
    pub fn entries(&self) -> Vec<(Scalar, Scalar)> {
        let mut out = Vec::with_capacity(self.len());
        let mut pending = Vec::new();
        let mut cursor = self.root;
        loop {
            while let Some(id) = cursor {
                pending.push(id);
                cursor = self.node(id).and_then(|n| n.left);
            }
            let Some(id) = pending.pop() else { break };
            let Some(node) = self.node(id) else { break };
            out.push((node.key.clone(), node.value.clone()));
            cursor = node.right;
        }
        out
    }

    pub fn keys(&self) -> Vec<Scalar> {
        self.entries().into_iter().map(|(k, _)| k).collect()
    }

    /// Walks from the root towards `key`, recording a read per visited node.
    fn search(&self, key: &Scalar, log: &mut EventLog) -> Search {
        let mut parent: Link = None;
        let mut cursor = self.root;
        while let Some(id) = cursor {
            let node = self.node(id).expect("linked node exists");
            log.record(AccessKind::Read, EventTarget::Node(id), self);
            match key.key_cmp(&node.key) {
                Ordering::Equal => return Search::Found { id, parent },
                Ordering::Less => {
                    parent = Some((id, Side::Left));
                    cursor = node.left;
                }
                Ordering::Greater => {
                    parent = Some((id, Side::Right));
                    cursor = node.right;
                }
            }
        }
        Search::Vacant { parent }
    }

    fn set_link(&mut self, link: Link, child: Option<NodeId>) {
        match link {
            None => self.root = child,
            Some((parent, Side::Left)) => self.node_mut(parent).left = child,
            Some((parent, Side::Right)) => self.node_mut(parent).right = child,
        }
    }

    fn attach(&mut self, parent: Link, key: Scalar, value: Scalar, log: &mut EventLog) -> NodeId {
        let id = NodeId(self.next_id);
        self.next_id += 1;
        self.nodes.push(BstNode {
            id,
            key,
            value,
            left: None,
            right: None,
        });
        self.set_link(parent, Some(id));
        log.record(AccessKind::Write, EventTarget::Node(id), self);
        id
    }

    /// Insert-or-assign (`m[key] = value`).
    pub fn insert_or_assign(&mut self, key: Scalar, value: Scalar, log: &mut EventLog) {
        match self.search(&key, log) {
            Search::Found { id, .. } => {
                self.node_mut(id).value = value;
                log.record(AccessKind::Write, EventTarget::Node(id), self);
            }
            Search::Vacant { parent } => {
                self.attach(parent, key, value, log);
            }
        }
    }

    /// Insert only when the key is absent (`m.insert({key, value})`).
    /// Returns whether a node was created.
    pub fn insert(&mut self, key: Scalar, value: Scalar, log: &mut EventLog) -> bool {
        match self.search(&key, log) {
            Search::Found { .. } => false,
            Search::Vacant { parent } => {
                self.attach(parent, key, value, log);
                true
            }
        }
    }

    /// `m[key]` as an rvalue: absent keys are inserted with `default`.
    pub fn get_or_insert_default(&mut self, key: Scalar, default: Scalar, log: &mut EventLog) -> Scalar {
        match self.search(&key, log) {
            Search::Found { id, .. } => self.node(id).expect("found node").value.clone(),
            Search::Vacant { parent } => {
                self.attach(parent, key, default.clone(), log);
                default
            }
        }
    }

    pub fn find(&self, key: &Scalar, log: &mut EventLog) -> Option<Scalar> {
        match self.search(key, log) {
            Search::Found { id, .. } => self.node(id).map(|n| n.value.clone()),
            Search::Vacant { .. } => None,
        }
    }

    pub fn count(&self, key: &Scalar, log: &mut EventLog) -> usize {
        usize::from(self.find(key, log).is_some())
    }

    /// Removes `key`, replacing a two-child node by its in-order successor.
    /// Returns the number of removed entries.
    pub fn erase(&mut self, key: &Scalar, log: &mut EventLog) -> usize {
        let Search::Found { id, parent } = self.search(key, log) else {
            return 0;
        };
        let node = self.node(id).expect("found node").clone();
        match (node.left, node.right) {
            (Some(_), Some(right)) => {
                let mut succ_link = (id, Side::Right);
                let mut succ = right;
                log.record(AccessKind::Read, EventTarget::Node(succ), self);
                while let Some(left) = self.node(succ).expect("linked node").left {
                    succ_link = (succ, Side::Left);
                    succ = left;
                    log.record(AccessKind::Read, EventTarget::Node(succ), self);
                }
                log.record(AccessKind::Delete, EventTarget::Node(succ), self);
                let removed = self.remove_node(succ);
                self.set_link(Some(succ_link), removed.right);
                if succ_link.0 != id {
                    log.record(AccessKind::Write, EventTarget::Node(succ_link.0), self);
                }
                let target = self.node_mut(id);
                target.key = removed.key;
                target.value = removed.value;
                log.record(AccessKind::Write, EventTarget::Node(id), self);
            }
            (left, right) => {
                log.record(AccessKind::Delete, EventTarget::Node(id), self);
                self.remove_node(id);
                self.set_link(parent, left.or(right));
                if let Some((parent_id, _)) = parent {
                    log.record(AccessKind::Write, EventTarget::Node(parent_id), self);
                }
            }
        }
        1
    }

    pub fn check_invariants(&self) -> Result<(), String> {
        if self.nodes.windows(2).any(|w| w[0].id >= w[1].id) {
            return Err("node ids are not strictly increasing".into());
        }
        if let Some(last) = self.nodes.last() {
            if last.id.0 >= self.next_id {
                return Err(format!("node id {} is not below nextId {}", last.id.0, self.next_id));
            }
        }
        let mut seen = vec![false; self.nodes.len()];
        let mut pending: Vec<NodeId> = self.root.into_iter().collect();
        while let Some(id) = pending.pop() {
            let Ok(i) = self.nodes.binary_search_by_key(&id, |n| n.id) else {
                return Err(format!("link to missing node {}", id.0));
            };
            if std::mem::replace(&mut seen[i], true) {
                return Err(format!("node {} is linked more than once", id.0));
            }
            pending.extend(self.nodes[i].left);
            pending.extend(self.nodes[i].right);
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(format!("node {} is unreachable from the root", self.nodes[i].id.0));
        }
        let keys = self.keys();
        if keys.windows(2).any(|w| w[0].key_cmp(&w[1]) != Ordering::Less) {
            return Err("in-order keys are not strictly increasing".into());
        }
        Ok(())
    }
}
