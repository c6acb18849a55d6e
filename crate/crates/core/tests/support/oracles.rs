//! Randomized container runs checked step by step against plain reference
//! models.

use std::collections::{HashMap, VecDeque};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use vistrace::containers::{
    bucket_of, AccessEvent, AccessKind, BstMap, ContainerError, ContainerId, ContainerState, DequeState,
    EventLog, EventTarget, HashTable, QueueState, StackState, VectorState,
};
use vistrace::value::Scalar;

const ID: ContainerId = ContainerId(0);

fn int(v: i64) -> Scalar {
    Scalar::Int(v)
}

fn ensure(cond: bool, op: usize, what: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(format!("operation {op}: {}", what()))
    }
}

/// Steps must count up from zero within one operation.
fn steps_are_sequential(events: &[AccessEvent], op: usize) -> Result<(), String> {
    for (i, e) in events.iter().enumerate() {
        ensure(e.step as usize == i && e.container == ID, op, || format!("bad step numbering {events:?}"))?;
    }
    Ok(())
}

fn invariants(state: ContainerState, op: usize) -> Result<(), String> {
    state.check_invariants().map_err(|why| format!("operation {op}: {why}"))
}

fn result_matches<T: PartialEq + std::fmt::Debug>(
    got: Result<T, ContainerError>,
    want: Option<T>,
    op: usize,
) -> Result<(), String> {
    match (got, want) {
        (Ok(g), Some(w)) if g == w => Ok(()),
        (Err(_), None) => Ok(()),
        (g, w) => Err(format!("operation {op}: got {g:?}, model says {w:?}")),
    }
}

pub fn vector(ops: usize, seed: u64) -> Result<(), String> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut state = VectorState::default();
    let mut model: Vec<Scalar> = Vec::new();
    for op in 0..ops {
        let mut log = EventLog::new(ID);
        match rng.gen_range(0..4) {
            0 => {
                let v = int(rng.gen_range(-100..100));
                state.push_back(v.clone(), &mut log);
                model.push(v);
            }
            1 => {
                let got = state.pop_back(&mut log);
                result_matches(got, model.pop().map(|_| ()), op)?;
            }
            2 => {
                let i = rng.gen_range(-2..model.len() as i64 + 2);
                let want = usize::try_from(i).ok().and_then(|i| model.get(i).cloned());
                result_matches(state.get(i, &mut log), want, op)?;
            }
            _ => {
                let i = rng.gen_range(-2..model.len() as i64 + 2);
                let v = int(rng.gen_range(-100..100));
                let want = match usize::try_from(i).ok().filter(|&i| i < model.len()) {
                    Some(i) => {
                        model[i] = v.clone();
                        Some(())
                    }
                    None => None,
                };
                result_matches(state.set(i, v, &mut log), want, op)?;
            }
        }
        steps_are_sequential(&log.events(), op)?;
        ensure(state.elements == model, op, || "elements differ from the model".into())?;
        invariants(ContainerState::Vector(state.clone()), op)?;
    }
    Ok(())
}

pub fn stack(ops: usize, seed: u64) -> Result<(), String> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut state = StackState::default();
    let mut model: Vec<Scalar> = Vec::new();
    let mut pushes = 0usize;
    let mut pops = 0usize;
    for op in 0..ops {
        let mut log = EventLog::new(ID);
        match rng.gen_range(0..3) {
            0 => {
                let v = int(rng.gen_range(-100..100));
                state.push(v.clone(), &mut log);
                model.push(v);
                pushes += 1;
            }
            1 => {
                let want = model.pop().map(|_| ());
                pops += usize::from(want.is_some());
                result_matches(state.pop(&mut log), want, op)?;
            }
            _ => result_matches(state.top(&mut log), model.last().cloned(), op)?,
        }
        steps_are_sequential(&log.events(), op)?;
        ensure(state.len() == pushes - pops, op, || "size is not pushes minus pops".into())?;
        let mut log = EventLog::new(ID);
        result_matches(state.top(&mut log), model.last().cloned(), op)?;
        invariants(ContainerState::Stack(state.clone()), op)?;
    }
    Ok(())
}

pub fn queue(ops: usize, seed: u64) -> Result<(), String> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut state = QueueState::default();
    let mut model: VecDeque<Scalar> = VecDeque::new();
    for op in 0..ops {
        let mut log = EventLog::new(ID);
        match rng.gen_range(0..4) {
            0 | 1 => {
                let v = int(rng.gen_range(-100..100));
                state.push(v.clone(), &mut log);
                model.push_back(v);
            }
            2 => result_matches(state.pop(&mut log), model.pop_front().map(|_| ()), op)?,
            _ => result_matches(state.back(&mut log), model.back().cloned(), op)?,
        }
        steps_are_sequential(&log.events(), op)?;
        ensure(state.len() == model.len(), op, || "size differs from the model".into())?;
        let mut log = EventLog::new(ID);
        result_matches(state.front(&mut log), model.front().cloned(), op)?;
        invariants(ContainerState::Queue(state.clone()), op)?;
    }
    Ok(())
}

pub fn deque(ops: usize, seed: u64) -> Result<(), String> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut state = DequeState::default();
    let mut model: VecDeque<Scalar> = VecDeque::new();
    for op in 0..ops {
        let mut log = EventLog::new(ID);
        match rng.gen_range(0..7) {
            0 => {
                let v = int(rng.gen_range(-100..100));
                state.push_back(v.clone(), &mut log);
                model.push_back(v);
            }
            1 => {
                let v = int(rng.gen_range(-100..100));
                state.push_front(v.clone(), &mut log);
                model.push_front(v);
            }
            2 => result_matches(state.pop_back(&mut log), model.pop_back().map(|_| ()), op)?,
            3 => result_matches(state.pop_front(&mut log), model.pop_front().map(|_| ()), op)?,
            4 => result_matches(state.front(&mut log), model.front().cloned(), op)?,
            5 => result_matches(state.back(&mut log), model.back().cloned(), op)?,
            _ => {
                let i = rng.gen_range(-2..model.len() as i64 + 2);
                let want = usize::try_from(i).ok().and_then(|i| model.get(i).cloned());
                result_matches(state.get(i, &mut log), want, op)?;
            }
        }
        steps_are_sequential(&log.events(), op)?;
        ensure(state.len() == model.len(), op, || "size differs from the model".into())?;
        for (i, want) in model.iter().enumerate() {
            let mut log = EventLog::new(ID);
            result_matches(state.get(i as i64, &mut log), Some(want.clone()), op)?;
        }
        invariants(ContainerState::Deque(state.clone()), op)?;
    }
    Ok(())
}

/// Sorted association list.
#[derive(Default)]
struct SortedAssoc(Vec<(i64, i64)>);

impl SortedAssoc {
    fn get(&self, k: i64) -> Option<i64> {
        self.0.binary_search_by_key(&k, |e| e.0).ok().map(|i| self.0[i].1)
    }
    fn set(&mut self, k: i64, v: i64) {
        match self.0.binary_search_by_key(&k, |e| e.0) {
            Ok(i) => self.0[i].1 = v,
            Err(i) => self.0.insert(i, (k, v)),
        }
    }
    fn remove(&mut self, k: i64) -> usize {
        match self.0.binary_search_by_key(&k, |e| e.0) {
            Ok(i) => {
                self.0.remove(i);
                1
            }
            Err(_) => 0,
        }
    }
}

fn bst_key(map: &BstMap, target: &EventTarget) -> Option<i64> {
    match target {
        EventTarget::Node(id) => match map.node(*id)?.key {
            Scalar::Int(k) => Some(k),
            _ => None,
        },
        _ => None,
    }
}

/// Every operation reads a root-first search path; a mutation then touches
/// nodes that exist once it is done, except the one it deletes.
fn bst_events(before: &BstMap, after: &BstMap, events: &[AccessEvent], op: usize) -> Result<(), String> {
    let reads = events.iter().take_while(|e| e.kind == AccessKind::Read).count();
    if let (Some(first), Some(root)) = (events.first(), before.root) {
        if first.kind == AccessKind::Read {
            ensure(first.target == EventTarget::Node(root), op, || "search does not start at the root".into())?;
        }
    }
    for pair in events[..reads].windows(2) {
        let (EventTarget::Node(a), EventTarget::Node(b)) = (&pair[0].target, &pair[1].target) else {
            return Err(format!("operation {op}: read of a non-node target"));
        };
        let parent = before.node(*a).ok_or_else(|| format!("operation {op}: read of a missing node"))?;
        ensure(parent.left == Some(*b) || parent.right == Some(*b), op, || {
            "consecutive reads are not parent and child".into()
        })?;
    }
    for e in &events[reads..] {
        match e.kind {
            AccessKind::Read => return Err(format!("operation {op}: read after a mutation")),
            AccessKind::Delete => ensure(bst_key(before, &e.target).is_some(), op, || "deleted an unknown node".into())?,
            AccessKind::Write => ensure(bst_key(after, &e.target).is_some(), op, || "wrote a node that is gone".into())?,
        }
    }
    Ok(())
}

pub fn bst(ops: usize, seed: u64) -> Result<(), String> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut state = BstMap::default();
    let mut model = SortedAssoc::default();
    for op in 0..ops {
        let before = state.clone();
        let mut log = EventLog::new(ID);
        let k = rng.gen_range(-200..200);
        let v = rng.gen_range(-1000..1000);
        match rng.gen_range(0..6) {
            0 => {
                state.insert_or_assign(int(k), int(v), &mut log);
                model.set(k, v);
            }
            1 => {
                let fresh = model.get(k).is_none();
                ensure(state.insert(int(k), int(v), &mut log) == fresh, op, || "insert result".into())?;
                if fresh {
                    model.set(k, v);
                }
            }
            2 => {
                let want = model.get(k).unwrap_or(0);
                model.set(k, want);
                ensure(state.get_or_insert_default(int(k), int(0), &mut log) == int(want), op, || "index read".into())?;
            }
            3 | 4 => {
                let want = model.remove(k);
                ensure(state.erase(&int(k), &mut log) == want, op, || "erase count".into())?;
            }
            _ => {
                let want = model.get(k).map(int);
                ensure(state.find(&int(k), &mut log) == want, op, || "find".into())?;
                let mut log = EventLog::new(ID);
                ensure(state.count(&int(k), &mut log) == usize::from(want.is_some()), op, || "count".into())?;
            }
        }
        let events = log.events();
        steps_are_sequential(&events, op)?;
        bst_events(&before, &state, &events, op)?;
        let keys: Vec<Scalar> = state.keys();
        ensure(keys.windows(2).all(|w| w[0].key_cmp(&w[1]).is_lt()), op, || "in-order keys are not sorted".into())?;
        let entries: Vec<(i64, i64)> = state
            .entries()
            .into_iter()
            .map(|(k, v)| match (k, v) {
                (Scalar::Int(k), Scalar::Int(v)) => (k, v),
                other => panic!("non-int entry {other:?}"),
            })
            .collect();
        ensure(entries == model.0, op, || "entries differ from the model".into())?;
        invariants(ContainerState::Map(state.clone()), op)?;
    }
    Ok(())
}

pub fn hash(ops: usize, seed: u64) -> Result<(), String> {
    let mut rng = StdRng::seed_from_u64(seed);
    let buckets = rng.gen_range(1..=13);
    let mut state = HashTable::new(buckets);
    let mut model: Vec<(i64, i64)> = Vec::new();
    let find = |m: &Vec<(i64, i64)>, k: i64| m.iter().position(|e| e.0 == k);
    for op in 0..ops {
        let mut log = EventLog::new(ID);
        let k = rng.gen_range(-300..300);
        let v = rng.gen_range(-1000..1000);
        match rng.gen_range(0..6) {
            0 => {
                state.insert_or_assign(k, int(v), &mut log);
                match find(&model, k) {
                    Some(i) => model[i].1 = v,
                    None => model.push((k, v)),
                }
            }
            1 => {
                let fresh = find(&model, k).is_none();
                ensure(state.insert(k, int(v), &mut log) == fresh, op, || "insert result".into())?;
                if fresh {
                    model.push((k, v));
                }
            }
            2 => {
                let want = match find(&model, k) {
                    Some(i) => model[i].1,
                    None => {
                        model.push((k, 0));
                        0
                    }
                };
                ensure(state.get_or_insert_default(k, int(0), &mut log) == int(want), op, || "index read".into())?;
            }
            3 | 4 => {
                let want = match find(&model, k) {
                    Some(i) => {
                        model.remove(i);
                        1
                    }
                    None => 0,
                };
                ensure(state.erase(k, &mut log) == want, op, || "erase count".into())?;
            }
            _ => {
                let want = find(&model, k).map(|i| int(model[i].1));
                ensure(state.find(k, &mut log) == want, op, || "find".into())?;
            }
        }
        steps_are_sequential(&log.events(), op)?;
        ensure(state.len() == model.len(), op, || "size differs from the model".into())?;
        let lookup: HashMap<i64, i64> = model.iter().copied().collect();
        let mut model_chains = vec![Vec::new(); buckets];
        for &(k, _) in &model {
            model_chains[bucket_of(k, buckets)].push(k);
        }
        for (b, chain) in state.buckets.iter().enumerate() {
            for entry in chain {
                ensure(bucket_of(entry.key, buckets) == b, op, || {
                    format!("key {} resides in bucket {b}, not {}", entry.key, bucket_of(entry.key, buckets))
                })?;
                let want = lookup.get(&entry.key).copied();
                ensure(want == Some(match entry.value {
                    Scalar::Int(v) => v,
                    _ => i64::MIN,
                }), op, || format!("entry {} differs from the model", entry.key))?;
            }
            let order: Vec<i64> = chain.iter().map(|e| e.key).collect();
            let want = &model_chains[b];
            ensure(&order == want, op, || format!("bucket {b} chain order {order:?}, model {want:?}"))?;
        }
        invariants(ContainerState::UnorderedMap(state.clone()), op)?;
    }
    Ok(())
}

pub type Oracle = fn(usize, u64) -> Result<(), String>;

pub const KINDS: [(&str, Oracle); 6] = [
    ("vector", vector),
    ("stack", stack),
    ("queue", queue),
    ("deque", deque),
    ("map", bst),
    ("unordered_map", hash),
];
