//! Backbone with pendant binary trees of tower-function height.
//!
//! The walk enters a pendant tree of height h and drifts away from the
//! backbone, so entropy grows linearly for a while from every start, but the
//! time spent before reaching the first tall tree grows with the start's
//! position. Only truncations are built: heights are capped at `h_max` and
//! the backbone at `n_max` vertices, so the graph is finite and recurrent.
//! Everything here measures that mechanism on the truncation.

use std::collections::VecDeque;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{GraphFamily, TowerSchedule, VertexId};
use crate::report::{BoundReport, Direction};
use crate::rng::{run_trials, StreamRng};
use crate::stats::Estimate;
use crate::walk::{fmt_f64, green_partial_sum, mc_return_frequency, EntropySeries, ExactWalk};

/// Largest tree handled by [`max_hitting_time`].
pub const MAX_HITTING_TREE: usize = 1 << 24;

pub fn build_counterexample(h_max: u32, n_max: u32) -> Result<GraphFamily> {
    GraphFamily::pendant_tower(h_max, n_max)
}

fn schedule(g: &GraphFamily) -> Result<TowerSchedule> {
    g.schedule().copied().ok_or_else(|| Error::InvalidArgument(format!("{g} is not a pendant tower graph")))
}

/// Distance from the backbone: 0 on the backbone, depth + 1 in a pendant tree.
pub fn tree_depth(v: &VertexId) -> u32 {
    v.pendant_depth().map_or(0, |d| d + 1)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StartProfile {
    pub start: VertexId,
    #[serde(skip)]
    pub series: EntropySeries,
    pub window_lo: usize,
    pub window_hi: usize,
    /// min of E_n/n over the window.
    pub rate: f64,
    pub tree_depth: u32,
}

/// Entropy series from each start with the rate measured on `[n_max/2, n_max]`.
pub fn per_start_entropy_rates(g: &GraphFamily, starts: &[VertexId], n_max: usize) -> Result<Vec<StartProfile>> {
    if n_max < 2 {
        return Err(Error::InvalidArgument("rate window needs n_max >= 2".into()));
    }
    let (lo, hi) = (n_max / 2, n_max);
    starts
        .iter()
        .map(|x0| {
            let series = ExactWalk::centered(g, x0)?.entropy_series(x0, n_max)?;
            let rate =
                (lo..=hi).map(|n| series.rate(n).expect("series covers the window")).fold(f64::INFINITY, f64::min);
            Ok(StartProfile {
                start: x0.clone(),
                series,
                window_lo: lo,
                window_hi: hi,
                rate,
                tree_depth: tree_depth(x0),
            })
        })
        .collect()
}

/// Every backbone vertex, plus the vertex halfway down the leftmost branch
/// of the tallest tree.
pub fn default_starts(g: &GraphFamily) -> Result<Vec<VertexId>> {
    let s = schedule(g)?;
    let mut out: Vec<VertexId> = (1..=s.n_max).map(VertexId::Backbone).collect();
    let tallest = s.tallest_attachment();
    out.push(VertexId::Pendant { tree: tallest, heap: 1u64 << (s.height(tallest) / 2) });
    Ok(out)
}

/// Starts ordered by decreasing rate, ties broken by vertex order.
pub fn rate_ordering(profiles: &[StartProfile]) -> Vec<VertexId> {
    let mut sorted: Vec<&StartProfile> = profiles.iter().collect();
    sorted.sort_by(|a, b| b.rate.total_cmp(&a.rate).then_with(|| a.start.cmp(&b.start)));
    sorted.into_iter().map(|p| p.start.clone()).collect()
}

/// `start,window_lo,window_hi,rate,tree_depth`
pub fn profiles_to_csv(profiles: &[StartProfile]) -> String {
    let mut out = String::from("start,window_lo,window_hi,rate,tree_depth\n");
    for p in profiles {
        out.push_str(&format!("{},{},{},{},{}\n", p.start, p.window_lo, p.window_hi, fmt_f64(p.rate), p.tree_depth));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReturnPoint {
    pub horizon: usize,
    pub frequency: Estimate,
    /// Exact probability of a return within the horizon.
    pub exact: f64,
    /// Σ_{t≤horizon} p^t(x0, x0), when exact propagation is within reach.
    pub green_partial_sum: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BackboneSteps {
    /// Moves between interior backbone vertices, as seen on the backbone.
    pub up: usize,
    pub down: usize,
    pub up_fraction: Estimate,
    /// |up fraction − 1/2| ≤ 4σ.
    pub balanced: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RecurrenceDiagnostics {
    pub start: VertexId,
    pub returns: Vec<ReturnPoint>,
    pub backbone: BackboneSteps,
    /// Series resistance from backbone vertex 1 to vertex N; the pendant
    /// trees are dead ends and carry no current.
    pub backbone_resistance: f64,
}

/// Horizons up to this length also get an exact Green partial sum.
pub const EXACT_GREEN_HORIZON: usize = 10_000;

/// Return frequencies and Green sums at growing horizons, and a check that
/// the walk observed only on the backbone moves ±1 symmetrically.
pub fn recurrence_diagnostics(
    g: &GraphFamily,
    x0: &VertexId,
    horizons: &[usize],
    trials: usize,
    seed: u64,
) -> Result<RecurrenceDiagnostics> {
    let s = schedule(g)?;
    let mut returns = Vec::with_capacity(horizons.len());
    let exact_max = horizons.iter().copied().filter(|&h| h <= EXACT_GREEN_HORIZON).max();
    let green = match exact_max {
        Some(h) => Some(green_partial_sum(g, x0, h)?),
        None => None,
    };
    let exact = ExactWalk::centered(g, x0)?.return_probabilities(x0, horizons)?;
    for (k, &h) in horizons.iter().enumerate() {
        let frequency = mc_return_frequency(g, x0, h, trials, seed.wrapping_add(k as u64))?;
        let green_partial_sum = green.as_ref().and_then(|sums| sums.get(h).copied());
        returns.push(ReturnPoint { horizon: h, frequency, exact: exact[k], green_partial_sum });
    }
    let backbone = backbone_projection(g, trials, 2_000, seed)?;
    Ok(RecurrenceDiagnostics { start: x0.clone(), returns, backbone, backbone_resistance: (s.n_max - 1) as f64 })
}

/// Runs `trials` walks of `steps` steps from the middle of the backbone and
/// tallies the backbone moves out of interior backbone vertices.
pub fn backbone_projection(g: &GraphFamily, trials: usize, steps: usize, seed: u64) -> Result<BackboneSteps> {
    let s = schedule(g)?;
    if s.n_max < 3 {
        return Err(Error::InvalidArgument("backbone projection needs at least 3 backbone vertices".into()));
    }
    let start = VertexId::Backbone(s.n_max.div_ceil(2));
    let counts = run_trials(seed, trials, |_, rng: &mut StreamRng| -> Result<(usize, usize)> {
        let (mut up, mut down) = (0, 0);
        let mut v = start.clone();
        let mut last = s.n_max.div_ceil(2);
        for _ in 0..steps {
            v = random_neighbor(g, &v, rng)?;
            if let VertexId::Backbone(n) = v {
                if n != last {
                    if last > 1 && last < s.n_max {
                        if n > last {
                            up += 1;
                        } else {
                            down += 1;
                        }
                    }
                    last = n;
                }
            }
        }
        Ok((up, down))
    });
    let (mut up, mut down) = (0, 0);
    for c in counts {
        let (u, d) = c?;
        up += u;
        down += d;
    }
    let up_fraction = Estimate::proportion(up, (up + down).max(1));
    let sigma = (0.25 / (up + down).max(1) as f64).sqrt();
    let balanced = (up_fraction.mean - 0.5).abs() <= 4.0 * sigma;
    Ok(BackboneSteps { up, down, up_fraction, balanced })
}

fn random_neighbor<R: Rng + ?Sized>(g: &GraphFamily, v: &VertexId, rng: &mut R) -> Result<VertexId> {
    let mut ns = g.neighbors(v)?;
    let i = rng.random_range(0..ns.len());
    Ok(ns.swap_remove(i))
}

/// Expected hitting times `E_x τ_target` for every vertex of a finite tree.
///
/// Solving the hitting-time system by eliminating leaves towards the target
/// gives, for each edge from `x` to its neighbour `x'` on the way to the
/// target, `E_x τ_{x'} = 2·e(x) + 1` where `e(x)` counts the edges on `x`'s
/// side of that edge; hitting times add along the path.
pub fn tree_hitting_times(adjacency: &[Vec<usize>], target: usize) -> Result<Vec<f64>> {
    let n = adjacency.len();
    if target >= n {
        return Err(Error::InvalidArgument(format!("target {target} outside a tree of {n} vertices")));
    }
    let edges: usize = adjacency.iter().map(Vec::len).sum::<usize>() / 2;
    if edges + 1 != n {
        return Err(Error::InvalidArgument("adjacency is not a tree".into()));
    }
    let mut parent = vec![usize::MAX; n];
    let mut order = Vec::with_capacity(n);
    let mut queue = VecDeque::from([target]);
    parent[target] = target;
    while let Some(v) = queue.pop_front() {
        order.push(v);
        for &u in &adjacency[v] {
            if parent[u] == usize::MAX {
                parent[u] = v;
                queue.push_back(u);
            }
        }
    }
    if order.len() != n {
        return Err(Error::InvalidArgument("adjacency is not connected".into()));
    }
    let mut subtree = vec![1usize; n];
    for &v in order.iter().rev() {
        if v != target {
            subtree[parent[v]] += subtree[v];
        }
    }
    let mut h = vec![0.0; n];
    for &v in &order {
        if v != target {
            h[v] = h[parent[v]] + (2 * (subtree[v] - 1) + 1) as f64;
        }
    }
    Ok(h)
}

/// Adjacency of the full binary tree on `i = 2^k − 1` vertices in heap order
/// (vertex `j` has children `2j+1`, `2j+2`).
pub fn full_binary_tree(i: usize) -> Result<Vec<Vec<usize>>> {
    if i == 0 || !(i + 1).is_power_of_two() {
        return Err(Error::InvalidArgument(format!("a full binary tree has 2^k - 1 vertices, got {i}")));
    }
    if i > MAX_HITTING_TREE {
        return Err(Error::InvalidArgument(format!("tree of {i} vertices exceeds {MAX_HITTING_TREE}")));
    }
    let mut adj = vec![Vec::new(); i];
    for j in 1..i {
        let p = (j - 1) / 2;
        adj[j].push(p);
        adj[p].push(j);
    }
    Ok(adj)
}

pub fn path_graph(i: usize) -> Result<Vec<Vec<usize>>> {
    if i == 0 {
        return Err(Error::InvalidArgument("path needs at least one vertex".into()));
    }
    Ok((0..i)
        .map(|j| {
            let mut ns = Vec::new();
            if j > 0 {
                ns.push(j - 1);
            }
            if j + 1 < i {
                ns.push(j + 1);
            }
            ns
        })
        .collect())
}

/// max over (start, target) of `E_start τ_target` in the full binary tree on
/// `i` vertices.
///
/// Automorphisms act transitively on each depth, so one target per depth
/// suffices.
pub fn max_hitting_time(i: usize) -> Result<f64> {
    let adj = full_binary_tree(i)?;
    let mut best: f64 = 0.0;
    let mut target = 0;
    while target < i {
        let h = tree_hitting_times(&adj, target)?;
        best = h.iter().copied().fold(best, f64::max);
        target = 2 * target + 1;
    }
    Ok(best)
}

/// Max expected hitting time on full binary trees of the given sizes
/// against `2i²`.
pub fn check_hitting_time_bound(sizes: &[usize]) -> Result<Vec<BoundReport>> {
    sizes
        .iter()
        .map(|&i| {
            let lhs = max_hitting_time(i)?;
            let rhs = 2.0 * (i as f64).powi(2);
            Ok(BoundReport::new("hitting_time", lhs, rhs, Direction::AtMost, 0.0)
                .input("tree", "full_binary")
                .input("i", i)
                .provenance("max expected hitting time in a tree on i vertices is at most 2 i^2"))
        })
        .collect()
}

/// End-to-end hitting time of the path on `i` vertices against `2i²`.
pub fn check_path_hitting_time(i: usize) -> Result<BoundReport> {
    let h = tree_hitting_times(&path_graph(i)?, i - 1)?;
    Ok(BoundReport::new("hitting_time", h[0], 2.0 * (i as f64).powi(2), Direction::AtMost, 0.0)
        .input("tree", "path")
        .input("i", i)
        .provenance("gambler's ruin on a path, (i-1)^2")
        .extra("expected", ((i - 1) as f64).powi(2)))
}

/// Depth increments at degree-3 vertices of the pendant tree at backbone
/// vertex `attach`: up (away from the backbone) should have frequency 2/3.
///
/// Each trial is a walk of `steps` steps from the tree's root; leaf steps and
/// steps taken off the tree are not tallied.
pub fn drift_check(g: &GraphFamily, attach: u32, trials: usize, steps: usize, seed: u64) -> Result<BoundReport> {
    let s = schedule(g)?;
    if !(1..=s.n_max).contains(&attach) {
        return Err(Error::InvalidArgument(format!("backbone vertex {attach} outside 1..={}", s.n_max)));
    }
    if s.height(attach) < 1 {
        return Err(Error::InvalidArgument("tree has no interior vertices".into()));
    }
    let root = VertexId::Pendant { tree: attach, heap: 1 };
    let counts = run_trials(seed, trials, |_, rng: &mut StreamRng| -> Result<(usize, usize)> {
        let (mut up, mut down) = (0, 0);
        let mut v = root.clone();
        for _ in 0..steps {
            let next = random_neighbor(g, &v, rng)?;
            let interior = matches!(v, VertexId::Pendant { tree, .. } if tree == attach) && g.degree(&v)? == 3;
            if interior {
                if tree_depth(&next) > tree_depth(&v) {
                    up += 1;
                } else {
                    down += 1;
                }
            }
            v = next;
        }
        Ok((up, down))
    });
    let (mut up, mut down) = (0, 0);
    for c in counts {
        let (u, d) = c?;
        up += u;
        down += d;
    }
    let total = (up + down).max(1);
    let frac = up as f64 / total as f64;
    let sigma = (2.0 / 9.0 / total as f64).sqrt();
    Ok(BoundReport::new("drift", (frac - 2.0 / 3.0).abs(), 4.0 * sigma, Direction::AtMost, 0.0)
        .input("graph", g)
        .input("attach", attach)
        .input("trials", trials)
        .input("steps", steps)
        .input("seed", seed)
        .provenance("interior tree steps go away from the backbone with probability 2/3")
        .extra("up_fraction", frac)
        .extra("interior_steps", total as f64))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts() {
        let g = build_counterexample(2, 2).unwrap();
        assert_eq!(g.vertex_count(), Some(16));
        let g = build_counterexample(12, 8).unwrap();
        assert_eq!(g.vertex_count(), Some(8 + 7 + 31 + 6 * 8191));
        assert_eq!(g.degree(&VertexId::Backbone(1)).unwrap(), 2);
        assert_eq!(g.degree(&VertexId::Backbone(4)).unwrap(), 3);
        assert_eq!(g.degree(&VertexId::Pendant { tree: 1, heap: 7 }).unwrap(), 1);
    }

    #[test]
    fn hitting_time_examples() {
        assert_eq!(max_hitting_time(1).unwrap(), 0.0);
        let r = check_hitting_time_bound(&[7]).unwrap();
        assert!(r[0].pass && r[0].lhs <= 98.0);
        for i in 1..12 {
            assert_eq!(check_path_hitting_time(i).unwrap().lhs, ((i - 1) * (i - 1)) as f64);
        }
        assert!(full_binary_tree(6).is_err());
    }

    #[test]
    fn leaf_to_leaf_in_three_vertex_tree() {
        // Star with centre 0: leaf to leaf is 1 + (1 + 2·…) = 4.
        let adj = full_binary_tree(3).unwrap();
        let h = tree_hitting_times(&adj, 2).unwrap();
        assert_eq!(h, vec![3.0, 4.0, 0.0]);
    }

    #[test]
    fn tree_depth_descriptor() {
        assert_eq!(tree_depth(&VertexId::Backbone(3)), 0);
        assert_eq!(tree_depth(&VertexId::Pendant { tree: 3, heap: 1 }), 1);
        assert_eq!(tree_depth(&VertexId::Pendant { tree: 3, heap: 5 }), 3);
    }
}
