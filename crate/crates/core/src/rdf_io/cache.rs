use std::num::NonZeroUsize;
use std::sync::atomic::{AtomicU64, Ordering};

use lru::LruCache;
use parking_lot::Mutex;

use super::sparql::HopList;
use crate::graph::Direction;

pub const DEFAULT_CACHE_CAPACITY: usize = 100_000;

pub type CacheKey = (String, Direction);

/// Thread-safe LRU cache of hop lists keyed by (subject IRI, direction).
///
/// Every [`get`](ConnectorCache::get) counts as exactly one hit or one miss.
pub struct ConnectorCache {
    entries: Mutex<LruCache<CacheKey, HopList>>,
    hits: AtomicU64,
    misses: AtomicU64,
}

impl ConnectorCache {
    /// A capacity of zero is bumped to one.
    pub fn new(capacity: usize) -> Self {
        let capacity = NonZeroUsize::new(capacity).unwrap_or(NonZeroUsize::MIN);
        ConnectorCache {
            entries: Mutex::new(LruCache::new(capacity)),
            hits: AtomicU64::new(0),
            misses: AtomicU64::new(0),
        }
    }

    pub fn get(&self, subject: &str, direction: Direction) -> Option<HopList> {
        let found = self.entries.lock().get(&(subject.to_owned(), direction)).cloned();
        let counter = if found.is_some() { &self.hits } else { &self.misses };
        counter.fetch_add(1, Ordering::Relaxed);
        found
    }

    pub fn insert(&self, subject: &str, direction: Direction, hops: HopList) {
        self.entries.lock().put((subject.to_owned(), direction), hops);
    }

    /// Presence check that leaves both counters and recency untouched.
    pub fn contains(&self, subject: &str, direction: Direction) -> bool {
        self.entries.lock().contains(&(subject.to_owned(), direction))
    }

    pub fn len(&self) -> usize {
        self.entries.lock().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn capacity(&self) -> usize {
        self.entries.lock().cap().get()
    }

    pub fn hit_count(&self) -> u64 {
        self.hits.load(Ordering::Relaxed)
    }

    pub fn miss_count(&self) -> u64 {
        self.misses.load(Ordering::Relaxed)
    }
}

impl Default for ConnectorCache {
    fn default() -> Self {
        ConnectorCache::new(DEFAULT_CACHE_CAPACITY)
    }
}
