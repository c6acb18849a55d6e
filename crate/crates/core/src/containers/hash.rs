//! Separate-chaining hash table backing `unordered_map<int, T>`.
//!
//! The bucket count is fixed at construction and never changes. The hash of
//! an integer key is its non-negative remainder modulo the bucket count, and
//! each chain keeps insertion order.

use serde::{Deserialize, Serialize};

use super::{AccessKind, ContainerState, EventLog, EventTarget, Snapshot};
use crate::value::Scalar;

pub const DEFAULT_BUCKETS: usize = 6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HashEntry {
    pub key: i64,
    pub value: Scalar,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HashTable {
    pub buckets: Vec<Vec<HashEntry>>,
}

impl Default for HashTable {
    fn default() -> Self {
        Self::new(DEFAULT_BUCKETS)
    }
}

impl Snapshot for HashTable {
    fn snapshot_state(&self) -> ContainerState {
        ContainerState::UnorderedMap(self.clone())
    }
}

/// `((key mod buckets) + buckets) mod buckets`.
pub fn bucket_of(key: i64, buckets: usize) -> usize {
    assert!(buckets > 0, "bucket count must be positive");
    key.rem_euclid(buckets as i64) as usize
}

fn key_target(key: i64) -> EventTarget {
    EventTarget::Key(Scalar::Int(key))
}

impl HashTable {
    pub fn new(buckets: usize) -> Self {
        assert!(buckets > 0, "bucket count must be positive");
        Self {
            buckets: vec![Vec::new(); buckets],
        }
    }

    pub fn bucket_count(&self) -> usize {
        self.buckets.len()
    }

    pub fn len(&self) -> usize {
        self.buckets.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.buckets.iter().all(Vec::is_empty)
    }

    /// (bucket, position in chain) of `key`, without recording anything.
    pub fn locate(&self, key: i64) -> Option<(usize, usize)> {
        let b = bucket_of(key, self.bucket_count());
        self.buckets[b].iter().position(|e| e.key == key).map(|p| (b, p))
    }

    /// Reads the bucket, then each chain entry until `key` matches.
    fn scan(&self, key: i64, log: &mut EventLog) -> (usize, Option<usize>) {
        let b = bucket_of(key, self.bucket_count());
        log.record(AccessKind::Read, EventTarget::Bucket(b), self);
        for (pos, entry) in self.buckets[b].iter().enumerate() {
            log.record(AccessKind::Read, key_target(entry.key), self);
            if entry.key == key {
                return (b, Some(pos));
            }
        }
        (b, None)
    }

    fn append(&mut self, bucket: usize, key: i64, value: Scalar, log: &mut EventLog) {
        self.buckets[bucket].push(HashEntry { key, value });
        log.record(AccessKind::Write, key_target(key), self);
    }

    /// Insert-or-assign (`h[key] = value`).
    pub fn insert_or_assign(&mut self, key: i64, value: Scalar, log: &mut EventLog) {
        match self.scan(key, log) {
            (b, Some(pos)) => {
                self.buckets[b][pos].value = value;
                log.record(AccessKind::Write, key_target(key), self);
            }
            (b, None) => self.append(b, key, value, log),
        }
    }

    /// Insert only when absent. Returns whether an entry was created.
    pub fn insert(&mut self, key: i64, value: Scalar, log: &mut EventLog) -> bool {
        match self.scan(key, log) {
            (_, Some(_)) => false,
            (b, None) => {
                self.append(b, key, value, log);
                true
            }
        }
    }

    pub fn get_or_insert_default(&mut self, key: i64, default: Scalar, log: &mut EventLog) -> Scalar {
        match self.scan(key, log) {
            (b, Some(pos)) => self.buckets[b][pos].value.clone(),
            (b, None) => {
                self.append(b, key, default.clone(), log);
                default
            }
        }
    }

    pub fn find(&self, key: i64, log: &mut EventLog) -> Option<Scalar> {
        match self.scan(key, log) {
            (b, Some(pos)) => Some(self.buckets[b][pos].value.clone()),
            (_, None) => None,
        }
    }

    pub fn count(&self, key: i64, log: &mut EventLog) -> usize {
        usize::from(self.find(key, log).is_some())
    }

    pub fn erase(&mut self, key: i64, log: &mut EventLog) -> usize {
        match self.scan(key, log) {
            (b, Some(pos)) => {
                log.record(AccessKind::Delete, key_target(key), self);
                self.buckets[b].remove(pos);
                1
            }
            (_, None) => 0,
        }
    }

    pub fn check_invariants(&self) -> Result<(), String> {
        if self.buckets.is_empty() {
            return Err("hash table has no buckets".into());
        }
        let mut keys = Vec::new();
        for (b, chain) in self.buckets.iter().enumerate() {
            for entry in chain {
                let want = bucket_of(entry.key, self.bucket_count());
                if want != b {
                    return Err(format!("key {} sits in bucket {b}, expected {want}", entry.key));
                }
                keys.push(entry.key);
            }
        }
        keys.sort_unstable();
        if keys.windows(2).any(|w| w[0] == w[1]) {
            return Err("duplicate key in hash table".into());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::containers::ContainerId;

    #[test]
    fn modulo_six_collisions() {
        let mut h = HashTable::new(6);
        let mut log = EventLog::new(ContainerId(0));
        h.insert_or_assign(8, Scalar::Int(1), &mut log);
        h.insert_or_assign(14, Scalar::Int(2), &mut log);
        let chain: Vec<i64> = h.buckets[2].iter().map(|e| e.key).collect();
        assert_eq!(chain, vec![8, 14]);
        h.insert_or_assign(-1, Scalar::Int(3), &mut log);
        assert_eq!(h.buckets[5][0].key, -1);
        h.check_invariants().unwrap();
    }

    #[test]
    fn bucket_formula() {
        assert_eq!(bucket_of(-1, 6), 5);
        assert_eq!(bucket_of(-6, 6), 0);
        assert_eq!(bucket_of(-7, 6), 5);
        assert_eq!(bucket_of(i64::MIN, 6), ((i64::MIN % 6) + 6) as usize % 6);
        assert_eq!(bucket_of(13, 6), 1);
    }

    #[test]
    fn insert_event_sequence() {
        let mut h = HashTable::new(6);
        let mut log = EventLog::new(ContainerId(4));
        h.insert_or_assign(8, Scalar::Int(1), &mut log);
        log.clear();
        h.insert_or_assign(14, Scalar::Int(2), &mut log);
        let got: Vec<_> = log.events().into_iter().map(|e| (e.kind, e.target)).collect();
        assert_eq!(
            got,
            vec![
                (AccessKind::Read, EventTarget::Bucket(2)),
                (AccessKind::Read, key_target(8)),
                (AccessKind::Write, key_target(14)),
            ]
        );
        log.clear();
        h.insert_or_assign(8, Scalar::Int(5), &mut log);
        let got: Vec<_> = log.events().into_iter().map(|e| (e.kind, e.target)).collect();
        assert_eq!(
            got,
            vec![
                (AccessKind::Read, EventTarget::Bucket(2)),
                (AccessKind::Read, key_target(8)),
                (AccessKind::Write, key_target(8)),
            ]
        );
    }

    #[test]
    fn erase_keeps_chain_order() {
        let mut h = HashTable::new(6);
        let mut log = EventLog::new(ContainerId(0));
        for k in [2, 8, 14, 20] {
            h.insert(k, Scalar::Int(k), &mut log);
        }
        assert_eq!(h.erase(8, &mut log), 1);
        assert_eq!(h.erase(8, &mut log), 0);
        let chain: Vec<i64> = h.buckets[2].iter().map(|e| e.key).collect();
        assert_eq!(chain, vec![2, 14, 20]);
    }
}
