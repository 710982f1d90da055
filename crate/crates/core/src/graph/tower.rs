use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported tree height; heap indices must fit in a `u64`.
pub const MAX_TREE_HEIGHT: u32 = 62;

/// Iterated exponential 2↑↑n, saturating at `u64::MAX`.
pub fn tower(n: u32) -> u64 {
    let mut value: u64 = 1;
    for _ in 0..n {
        if value >= 64 {
            return u64::MAX;
        }
        value = 1u64 << value;
    }
    value
}

/// Heights of the pendant binary trees, truncated at `h_max`, on a backbone
/// of `n_max` vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TowerSchedule {
    pub h_max: u32,
    pub n_max: u32,
}

impl TowerSchedule {
    pub const DEFAULT_H_MAX: u32 = 20;
    pub const DEFAULT_N_MAX: u32 = 64;

    pub fn new(h_max: u32, n_max: u32) -> Result<Self> {
        if h_max == 0 || h_max > MAX_TREE_HEIGHT {
            return Err(Error::InvalidArgument(format!(
                "tree height cap must be in [1, {MAX_TREE_HEIGHT}], got {h_max}"
            )));
        }
        if n_max == 0 {
            return Err(Error::InvalidArgument("backbone length must be at least 1".into()));
        }
        Ok(TowerSchedule { h_max, n_max })
    }

    /// Effective height of the tree hanging from backbone vertex `n` (1-based).
    pub fn height(&self, n: u32) -> u32 {
        tower(n).min(self.h_max as u64) as u32
    }

    pub fn heights(&self) -> Vec<u32> {
        (1..=self.n_max).map(|n| self.height(n)).collect()
    }

    /// Vertex count of the full binary tree at backbone vertex `n`.
    pub fn tree_size(&self, n: u32) -> u64 {
        (1u64 << (self.height(n) + 1)) - 1
    }

    pub fn vertex_count(&self) -> u128 {
        self.n_max as u128 + (1..=self.n_max).map(|n| self.tree_size(n) as u128).sum::<u128>()
    }

    /// Backbone vertex adjacent to the tallest tree; the rightmost one on ties.
    pub fn tallest_attachment(&self) -> u32 {
        (1..=self.n_max).max_by_key(|&n| (self.height(n), n)).unwrap_or(1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tower_values() {
        assert_eq!(tower(1), 2);
        assert_eq!(tower(2), 4);
        assert_eq!(tower(3), 16);
        assert_eq!(tower(4), 65536);
        assert_eq!(tower(5), u64::MAX);
    }

    #[test]
    fn heights_are_capped_and_nondecreasing() {
        let s = TowerSchedule::new(12, 8).unwrap();
        assert_eq!(s.heights(), vec![2, 4, 12, 12, 12, 12, 12, 12]);
        let hs = s.heights();
        assert!(hs.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn small_vertex_count() {
        let s = TowerSchedule::new(2, 2).unwrap();
        assert_eq!(s.vertex_count(), 16);
    }

    #[test]
    fn rejects_bad_caps() {
        assert!(TowerSchedule::new(0, 3).is_err());
        assert!(TowerSchedule::new(63, 3).is_err());
        assert!(TowerSchedule::new(3, 0).is_err());
    }
}
