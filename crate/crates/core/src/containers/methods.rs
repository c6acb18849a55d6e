//! The method surface of each container kind.

use super::ContainerKind;

/// Type of a method parameter or result, relative to the container's key
/// and element types.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Operand {
    Key,
    Elem,
    Int,
    Bool,
    Void,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MethodSig {
    pub name: &'static str,
    pub params: &'static [Operand],
    pub returns: Operand,
    /// Whether the call changes the container.
    pub mutates: bool,
}

const fn sig(name: &'static str, params: &'static [Operand], returns: Operand, mutates: bool) -> MethodSig {
    MethodSig {
        name,
        params,
        returns,
        mutates,
    }
}

use Operand::{Bool, Elem, Int, Key, Void};

const VECTOR: &[MethodSig] = &[
    sig("push_back", &[Elem], Void, true),
    sig("pop_back", &[], Void, true),
    sig("size", &[], Int, false),
    sig("empty", &[], Bool, false),
];

const STACK: &[MethodSig] = &[
    sig("push", &[Elem], Void, true),
    sig("pop", &[], Void, true),
    sig("top", &[], Elem, false),
    sig("size", &[], Int, false),
    sig("empty", &[], Bool, false),
];

const QUEUE: &[MethodSig] = &[
    sig("push", &[Elem], Void, true),
    sig("pop", &[], Void, true),
    sig("front", &[], Elem, false),
    sig("back", &[], Elem, false),
    sig("size", &[], Int, false),
    sig("empty", &[], Bool, false),
];

const DEQUE: &[MethodSig] = &[
    sig("push_back", &[Elem], Void, true),
    sig("push_front", &[Elem], Void, true),
    sig("pop_back", &[], Void, true),
    sig("pop_front", &[], Void, true),
    sig("front", &[], Elem, false),
    sig("back", &[], Elem, false),
    sig("size", &[], Int, false),
    sig("empty", &[], Bool, false),
];

// `insert` takes the `{key, value}` pair written as two arguments.
const KEYED: &[MethodSig] = &[
    sig("insert", &[Key, Elem], Void, true),
    sig("erase", &[Key], Int, true),
    sig("find", &[Key], Bool, false),
    sig("count", &[Key], Int, false),
    sig("size", &[], Int, false),
    sig("empty", &[], Bool, false),
];

pub fn methods(kind: ContainerKind) -> &'static [MethodSig] {
    match kind {
        ContainerKind::Vector => VECTOR,
        ContainerKind::Stack => STACK,
        ContainerKind::Queue => QUEUE,
        ContainerKind::Deque => DEQUE,
        ContainerKind::Map | ContainerKind::UnorderedMap => KEYED,
    }
}

pub fn method_signature(kind: ContainerKind, name: &str) -> Option<&'static MethodSig> {
    methods(kind).iter().find(|m| m.name == name)
}

/// Which forms of `c[i]` a kind supports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IndexAccess {
    /// Operand type of the subscript.
    pub subscript: Operand,
    pub get: bool,
    pub set: bool,
}

pub fn index_access(kind: ContainerKind) -> Option<IndexAccess> {
    match kind {
        ContainerKind::Vector => Some(IndexAccess {
            subscript: Int,
            get: true,
            set: true,
        }),
        ContainerKind::Deque => Some(IndexAccess {
            subscript: Int,
            get: true,
            set: false,
        }),
        ContainerKind::Map | ContainerKind::UnorderedMap => Some(IndexAccess {
            subscript: Key,
            get: true,
            set: true,
        }),
        ContainerKind::Stack | ContainerKind::Queue => None,
    }
}
