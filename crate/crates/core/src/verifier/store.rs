//! Provenance of every merged state pair, for witness reconstruction.

use std::collections::HashMap;

use arrayvec::ArrayVec;

use crate::model::{ActionId, StateId};

pub type Steps = ArrayVec<ActionId, 2>;

/// Why `(s, t)` was merged: it is `parent` extended by `x` on the left and
/// `y` on the right.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Entry {
    pub parent: (StateId, StateId),
    pub x: Steps,
    pub y: Steps,
}

#[derive(Clone, Debug, Default)]
pub struct WitnessStore {
    entries: HashMap<(StateId, StateId), Entry>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum StoreError {
    #[error("no store entry for pair ({}, {})", .0 .0, .1 .0)]
    Dangling(StateId, StateId),
    #[error("store entry for ({}, {}) already present", .0 .0, .1 .0)]
    Duplicate(StateId, StateId),
    #[error("parent links do not reach a diagonal pair")]
    Cycle,
}

impl WitnessStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn clear(&mut self) {
        self.entries.clear();
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn insert(&mut self, key: (StateId, StateId), entry: Entry) -> Result<(), StoreError> {
        if self.entries.contains_key(&key) {
            return Err(StoreError::Duplicate(key.0, key.1));
        }
        self.entries.insert(key, entry);
        Ok(())
    }

    pub fn get(&self, key: (StateId, StateId)) -> Option<&Entry> {
        self.entries.get(&key)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(StateId, StateId), &Entry)> {
        self.entries.iter()
    }

    /// Follows parent links from `(s, t)` to a diagonal pair `(r, r)`.
    /// Returns `r` and the two suffixes accumulated on the way.
    pub fn unwind(
        &self,
        s: StateId,
        t: StateId,
    ) -> Result<(StateId, Vec<ActionId>, Vec<ActionId>), StoreError> {
        let mut xs: Vec<&Steps> = Vec::new();
        let mut ys: Vec<&Steps> = Vec::new();
        let mut cur = (s, t);
        while cur.0 != cur.1 {
            if xs.len() > self.entries.len() {
                return Err(StoreError::Cycle);
            }
            let e = self.entries.get(&cur).ok_or(StoreError::Dangling(cur.0, cur.1))?;
            xs.push(&e.x);
            ys.push(&e.y);
            cur = e.parent;
        }
        let flatten = |v: Vec<&Steps>| v.into_iter().rev().flat_map(|s| s.iter().copied()).collect();
        Ok((cur.0, flatten(xs), flatten(ys)))
    }

    /// True when every entry reaches a diagonal root without cycles.
    pub fn is_forest(&self) -> bool {
        self.entries.keys().all(|(s, t)| self.unwind(*s, *t).is_ok())
    }
}
