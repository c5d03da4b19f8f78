//! Fixed-capacity LRU set of prefetched URLs. A HashMap from URL to a
//! monotonically increasing clock tick is all the bookkeeping needed at
//! the capacities involved; eviction scans for the smallest tick.

use std::collections::HashMap;

#[derive(Debug, Clone)]
pub struct PrefetchCache {
    capacity: usize,
    clock: u64,
    entries: HashMap<String, u64>,
}

impl PrefetchCache {
    /// A capacity of 0 yields a cache that stores nothing.
    pub fn new(capacity: usize) -> PrefetchCache {
        PrefetchCache {
            capacity,
            clock: 0,
            entries: HashMap::new(),
        }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Peek without touching recency.
    pub fn contains(&self, url: &str) -> bool {
        self.entries.contains_key(url)
    }

    /// Lookup that refreshes recency on a hit.
    pub fn get(&mut self, url: &str) -> bool {
        self.clock += 1;
        match self.entries.get_mut(url) {
            Some(tick) => {
                *tick = self.clock;
                true
            }
            None => false,
        }
    }

    /// Inserts a URL, returning the entry evicted to make room (if any).
    /// Re-inserting a present URL only refreshes its recency. The clock
    /// is strictly monotonic, so the least-recently-used entry is the
    /// unique minimum tick.
    pub fn insert(&mut self, url: String) -> Option<String> {
        self.clock += 1;
        if let Some(tick) = self.entries.get_mut(&url) {
            *tick = self.clock;
            return None;
        }
        if self.capacity == 0 {
            return None;
        }
        let mut evicted = None;
        if self.entries.len() >= self.capacity {
            let oldest = self
                .entries
                .iter()
                .min_by_key(|(_, tick)| **tick)
                .map(|(url, _)| url.clone())
                .expect("cache is non-empty when at capacity");
            self.entries.remove(&oldest);
            evicted = Some(oldest);
        }
        self.entries.insert(url, self.clock);
        evicted
    }

    /// URLs currently cached, in no particular order.
    pub fn urls(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evicts_least_recently_used() {
        let mut cache = PrefetchCache::new(3);
        assert_eq!(cache.insert("a".into()), None);
        assert_eq!(cache.insert("b".into()), None);
        assert_eq!(cache.insert("c".into()), None);
        // Touch a and b so c becomes the oldest.
        assert!(cache.get("a"));
        assert!(cache.get("b"));
        assert_eq!(cache.insert("d".into()), Some("c".into()));
        assert!(cache.contains("a"));
        assert!(cache.contains("b"));
        assert!(cache.contains("d"));
        assert!(!cache.contains("c"));
        assert_eq!(cache.len(), 3);
    }

    #[test]
    fn insertion_order_is_the_tiebreak_without_touches() {
        let mut cache = PrefetchCache::new(2);
        cache.insert("a".into());
        cache.insert("b".into());
        assert_eq!(cache.insert("c".into()), Some("a".into()));
        assert_eq!(cache.insert("d".into()), Some("b".into()));
    }

    #[test]
    fn reinserting_refreshes_recency_without_eviction() {
        let mut cache = PrefetchCache::new(2);
        cache.insert("a".into());
        cache.insert("b".into());
        assert_eq!(cache.insert("a".into()), None);
        assert_eq!(cache.len(), 2);
        // b is now the oldest.
        assert_eq!(cache.insert("c".into()), Some("b".into()));
    }

    #[test]
    fn contains_does_not_touch_recency() {
        let mut cache = PrefetchCache::new(2);
        cache.insert("a".into());
        cache.insert("b".into());
        assert!(cache.contains("a"));
        // a stays the oldest despite the peek.
        assert_eq!(cache.insert("c".into()), Some("a".into()));
    }

    #[test]
    fn get_misses_on_absent_and_evicted_entries() {
        let mut cache = PrefetchCache::new(1);
        assert!(!cache.get("a"));
        cache.insert("a".into());
        assert!(cache.get("a"));
        cache.insert("b".into());
        assert!(!cache.get("a"));
        assert!(cache.get("b"));
    }

    #[test]
    fn zero_capacity_stores_nothing() {
        let mut cache = PrefetchCache::new(0);
        assert_eq!(cache.insert("a".into()), None);
        assert!(!cache.contains("a"));
        assert_eq!(cache.len(), 0);
    }

    #[test]
    fn len_never_exceeds_capacity() {
        let mut cache = PrefetchCache::new(4);
        for i in 0..100 {
            cache.insert(format!("url{i}"));
            assert!(cache.len() <= 4);
        }
        assert_eq!(cache.len(), 4);
    }
}
