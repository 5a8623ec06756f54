use std::collections::HashMap;
use std::hash::Hash;
use std::sync::{Arc, RwLock};

use crate::error::Result;

/// Read-mostly memo table. Lookups share a read lock; a miss computes
/// without holding any lock and then inserts under the write lock, keeping
/// the first value stored. No caller ever blocks on another's computation,
/// so a computation may itself fan out on the thread pool. Failures are
/// cached too.
pub(crate) struct Memo<K, V> {
    slots: RwLock<HashMap<K, Result<Arc<V>>>>,
}

impl<K: Eq + Hash + Clone, V> Memo<K, V> {
    pub(crate) fn new() -> Self {
        Self { slots: RwLock::new(HashMap::new()) }
    }

    pub(crate) fn get_or_compute(&self, key: &K, compute: impl FnOnce() -> Result<V>) -> Result<Arc<V>> {
        if let Some(hit) = self.slots.read().expect("memo lock poisoned").get(key) {
            return hit.clone();
        }
        let value = compute().map(Arc::new);
        let mut write = self.slots.write().expect("memo lock poisoned");
        write.entry(key.clone()).or_insert(value).clone()
    }

    pub(crate) fn len(&self) -> usize {
        self.slots.read().expect("memo lock poisoned").len()
    }

    pub(crate) fn clear(&self) {
        self.slots.write().expect("memo lock poisoned").clear();
    }
}
