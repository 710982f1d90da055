use std::hash::Hash;

use rustc_hash::FxHashMap;

/// Finite nonnegative measure with a cached total.
///
/// Backed by a hash map with a fixed hasher, so iteration order is a pure
/// function of the insertion sequence and repeated runs are bit-identical.
#[derive(Clone, Debug)]
pub struct SparseMeasure<K> {
    entries: FxHashMap<K, f64>,
    total: f64,
    pruned: f64,
}

impl<K: Eq + Hash + Clone + Ord> SparseMeasure<K> {
    pub fn zero() -> Self {
        SparseMeasure { entries: FxHashMap::default(), total: 0.0, pruned: 0.0 }
    }

    pub fn point(key: K, mass: f64) -> Self {
        let mut m = Self::zero();
        m.add(key, mass);
        m
    }

    /// Adds mass to a key; zero contributions are not stored.
    pub fn add(&mut self, key: K, mass: f64) {
        debug_assert!(mass >= 0.0, "negative mass {mass}");
        if mass == 0.0 {
            return;
        }
        *self.entries.entry(key).or_insert(0.0) += mass;
        self.total += mass;
    }

    pub fn get(&self, key: &K) -> f64 {
        self.entries.get(key).copied().unwrap_or(0.0)
    }

    pub fn total(&self) -> f64 {
        self.total
    }

    /// Mass dropped by [`prune_below`](Self::prune_below) over this measure's history.
    pub fn pruned_mass(&self) -> f64 {
        self.pruned
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, f64)> {
        self.entries.iter().map(|(k, &v)| (k, v))
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.entries.keys()
    }

    /// Entries in key order.
    pub fn sorted(&self) -> Vec<(K, f64)> {
        let mut out: Vec<(K, f64)> = self.entries.iter().map(|(k, &v)| (k.clone(), v)).collect();
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }

    /// Drops entries below `eps` without renormalizing; the dropped mass is
    /// accumulated in [`pruned_mass`](Self::pruned_mass).
    pub fn prune_below(&mut self, eps: f64) {
        if eps <= 0.0 {
            return;
        }
        let mut dropped = 0.0;
        self.entries.retain(|_, v| {
            if *v < eps {
                dropped += *v;
                false
            } else {
                true
            }
        });
        self.pruned += dropped;
        self.recompute_total();
    }

    pub(crate) fn carry_pruned(&mut self, pruned: f64) {
        self.pruned += pruned;
    }

    /// Recomputes the cached total from the entries.
    pub fn recompute_total(&mut self) {
        self.total = self.entries.values().fold(0.0, |acc, m| acc + m);
    }
}

impl<K: Eq + Hash + Clone + Ord> FromIterator<(K, f64)> for SparseMeasure<K> {
    fn from_iter<I: IntoIterator<Item = (K, f64)>>(iter: I) -> Self {
        let mut m = Self::zero();
        for (k, v) in iter {
            m.add(k, v);
        }
        m
    }
}

impl<K: Eq + Hash + Clone + Ord> PartialEq for SparseMeasure<K> {
    fn eq(&self, other: &Self) -> bool {
        self.entries == other.entries
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_entries_are_not_stored() {
        let mut m: SparseMeasure<i32> = SparseMeasure::zero();
        m.add(1, 0.0);
        m.add(2, 0.5);
        assert_eq!(m.len(), 1);
        assert_eq!(m.total(), 0.5);
        assert_eq!(m.get(&1), 0.0);
    }

    #[test]
    fn pruning_reports_dropped_mass() {
        let mut m: SparseMeasure<i32> = [(1, 0.9), (2, 0.06), (3, 0.04)].into_iter().collect();
        m.prune_below(0.05);
        assert_eq!(m.len(), 2);
        assert!((m.pruned_mass() - 0.04).abs() < 1e-15);
        assert!((m.total() - 0.96).abs() < 1e-15);
    }
}
