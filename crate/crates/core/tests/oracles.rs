//! Exact propagation against closed forms and independent solvers.

use std::collections::BTreeSet;

use evoset::counterexample::{full_binary_tree, max_hitting_time, path_graph, tree_hitting_times};
use evoset::evolving::{q_measure, EvolvingSetProcess};
use evoset::space::Space;
use evoset::walk::{distribution_at, entropy, entropy_series, escape_probability, ExactWalk};
use evoset::{GraphFamily, VertexId};
use nalgebra::{DMatrix, DVector};

fn ln_choose(n: u64, k: u64) -> f64 {
    (1..=k).map(|i| ((n - k + i) as f64 / i as f64).ln()).sum()
}

/// P(S_n = 2j − n) for the simple walk on ℤ.
fn binomial(n: u64) -> Vec<f64> {
    (0..=n).map(|j| (ln_choose(n, j) - n as f64 * 2f64.ln()).exp()).collect()
}

fn line_return(t: u64) -> f64 {
    if t % 2 == 1 {
        0.0
    } else {
        binomial(t)[(t / 2) as usize]
    }
}

/// p^{2n}(0,0) on ℤ³ = C(2n,n)/4^n · Σ_{j+k≤n} (n!/(j!k!(n−j−k)!))² / 9^n.
fn cubic_return(t: u64) -> f64 {
    if t % 2 == 1 {
        return 0.0;
    }
    let n = t / 2;
    let ln_fact = |m: u64| (1..=m).map(|i| (i as f64).ln()).sum::<f64>();
    let mut inner = 0.0;
    for j in 0..=n {
        for k in 0..=n - j {
            let ln_multi = ln_fact(n) - ln_fact(j) - ln_fact(k) - ln_fact(n - j - k);
            inner += (2.0 * ln_multi - n as f64 * 9f64.ln()).exp();
        }
    }
    line_return(t) * inner
}

/// Return probabilities of the walk on the d-regular tree via its distance
/// chain, written out independently of the library.
fn tree_returns(d: f64, horizon: usize) -> Vec<f64> {
    let mut p = vec![0.0; horizon + 2];
    p[0] = 1.0;
    let mut out = vec![1.0];
    for _ in 0..horizon {
        let mut q = vec![0.0; horizon + 2];
        q[1] += p[0];
        for k in 1..=horizon {
            q[k - 1] += p[k] / d;
            q[k + 1] += p[k] * (d - 1.0) / d;
        }
        p = q;
        out.push(p[0]);
    }
    out
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

#[test]
fn line_returns_match_central_binomial() {
    let g = GraphFamily::IntegerLine;
    let o = VertexId::Line(0);
    let series = ExactWalk::centered(&g, &o).unwrap().green_series(&o, &o, 300).unwrap();
    for p in &series.points {
        assert!(close(p.p, line_return(p.t as u64), 1e-12), "t = {}: {} vs {}", p.t, p.p, line_return(p.t as u64));
    }
}

#[test]
fn line_entropy_matches_binomial_entropy() {
    let g = GraphFamily::IntegerLine;
    let series = entropy_series(&g, &VertexId::Line(0), 120).unwrap();
    for n in 0..=120u64 {
        let h: f64 = binomial(n).iter().filter(|&&p| p > 0.0).map(|p| -p * p.ln()).sum();
        assert!(close(series.entropy(n as usize).unwrap(), h, 1e-11), "n = {n}");
    }
}

#[test]
fn plane_returns_are_squared_line_returns() {
    let g = GraphFamily::Lattice2D;
    let o = g.origin();
    let series = ExactWalk::centered(&g, &o).unwrap().green_series(&o, &o, 80).unwrap();
    for p in &series.points {
        let expected = line_return(p.t as u64).powi(2);
        assert!(close(p.p, expected, 1e-11), "t = {}: {} vs {expected}", p.t, p.p);
    }
}

#[test]
fn cubic_lattice_returns_match_trinomial_sum() {
    let g = GraphFamily::Lattice3D;
    let o = g.origin();
    let series = ExactWalk::centered(&g, &o).unwrap().green_series(&o, &o, 40).unwrap();
    for p in &series.points {
        let expected = cubic_return(p.t as u64);
        assert!(close(p.p, expected, 1e-10), "t = {}: {} vs {expected}", p.t, p.p);
    }
}

#[test]
fn tree_returns_match_distance_chain() {
    for d in [3u8, 4] {
        let g = GraphFamily::regular_tree(d).unwrap();
        let o = g.origin();
        let series = ExactWalk::centered(&g, &o).unwrap().green_series(&o, &o, 120).unwrap();
        let oracle = tree_returns(d as f64, 120);
        for p in &series.points {
            assert!(close(p.p, oracle[p.t], 1e-12), "d = {d}, t = {}", p.t);
        }
    }
}

#[test]
fn tree_green_function_approaches_its_closed_form() {
    // G(o,o) = (d−1)/(d−2) on the d-regular tree.
    let g = GraphFamily::regular_tree(3).unwrap();
    let o = g.origin();
    let series = ExactWalk::centered(&g, &o).unwrap().green_series(&o, &o, 400).unwrap();
    assert!((series.last() - 2.0).abs() < 1e-9);
}

#[test]
fn lumped_and_vertex_level_propagation_agree() {
    let cases = [
        (GraphFamily::regular_tree(3).unwrap(), 7),
        (GraphFamily::Lattice2D, 10),
        (GraphFamily::Lattice3D, 6),
        (GraphFamily::pendant_tower(4, 6).unwrap(), 9),
    ];
    for (g, n_max) in &cases {
        let x0 = g.origin();
        let lumped = entropy_series(g, &x0, *n_max).unwrap();
        for n in 0..=*n_max {
            let mu = distribution_at(g, &x0, n).unwrap();
            let h = entropy(&mu).unwrap();
            assert!(close(lumped.entropy(n).unwrap(), h, 1e-12), "{g} n = {n}");
        }
        let identity = ExactWalk::new(Space::identity(g), Default::default());
        let centered = ExactWalk::centered(g, &x0).unwrap();
        let a = identity.distribution(&x0, *n_max).unwrap();
        let b = centered.distribution(&x0, *n_max).unwrap();
        for v in g.ball(&x0, *n_max, 100_000).unwrap() {
            assert!(close(identity.mass_at(&a, &v).unwrap(), centered.mass_at(&b, &v).unwrap(), 1e-12), "{g} at {v}");
        }
    }
}

#[test]
fn line_escape_probability_is_a_binomial_tail() {
    let g = GraphFamily::IntegerLine;
    for (n, r) in [(10u64, 2i64), (15, 3), (20, 1)] {
        let ball: BTreeSet<VertexId> = (-r..=r).map(VertexId::Line).collect();
        let oracle: f64 =
            binomial(n).iter().enumerate().filter(|(j, _)| (2 * *j as i64 - n as i64).abs() > r).map(|(_, p)| p).sum();
        let got = escape_probability(&g, &VertexId::Line(0), n as usize, &ball).unwrap();
        assert!(close(got, oracle, 1e-12), "n = {n}, r = {r}");
    }
}

#[test]
fn q_measure_is_degree_weighted_transition_mass() {
    // Q_t(S, y) = Σ_{x∈S} π(x) p^t(x, y) checked vertex by vertex on ℤ.
    let g = GraphFamily::IntegerLine;
    let process = EvolvingSetProcess::new(ExactWalk::identity(&g), 1.0).unwrap();
    let members: BTreeSet<VertexId> = [-1, 0, 2].into_iter().map(VertexId::Line).collect();
    let set = process.space().cells_of(&members).unwrap();
    let t = 5;
    let q = q_measure(process.walk(), &set, t).unwrap();
    for y in -8..=8 {
        let mut oracle = 0.0;
        for x in [-1i64, 0, 2] {
            let d = y - x;
            if (d + t as i64) % 2 == 0 && d.abs() <= t as i64 {
                oracle += 2.0 * binomial(t as u64)[((d + t as i64) / 2) as usize];
            }
        }
        let got = q.at(process.space(), &VertexId::Line(y)).unwrap();
        assert!(close(got, oracle, 1e-12), "y = {y}: {got} vs {oracle}");
    }
}

/// E_x τ_target from the linear system (I − P̃) h = 1 with the target row
/// removed, solved by LU.
fn lu_hitting_times(adjacency: &[Vec<usize>], target: usize) -> Vec<f64> {
    let n = adjacency.len();
    let idx: Vec<usize> = (0..n).filter(|&v| v != target).collect();
    let pos = |v: usize| idx.iter().position(|&w| w == v);
    let m = idx.len();
    let mut a = DMatrix::<f64>::identity(m, m);
    for (r, &v) in idx.iter().enumerate() {
        let deg = adjacency[v].len() as f64;
        for &u in &adjacency[v] {
            if let Some(c) = pos(u) {
                a[(r, c)] -= 1.0 / deg;
            }
        }
    }
    let h = a.lu().solve(&DVector::from_element(m, 1.0)).expect("nonsingular hitting system");
    let mut out = vec![0.0; n];
    for (r, &v) in idx.iter().enumerate() {
        out[v] = h[r];
    }
    out
}

#[test]
fn tree_hitting_times_match_linear_solve() {
    for i in [3, 7, 15, 31, 63] {
        let adj = full_binary_tree(i).unwrap();
        let mut best: f64 = 0.0;
        for target in 0..i {
            let fast = tree_hitting_times(&adj, target).unwrap();
            let slow = lu_hitting_times(&adj, target);
            for v in 0..i {
                assert!(close(fast[v], slow[v], 1e-9), "i = {i}, {v} -> {target}");
            }
            best = best.max(slow.iter().cloned().fold(0.0, f64::max));
        }
        assert!(close(max_hitting_time(i).unwrap(), best, 1e-9), "i = {i}");
    }
}

#[test]
fn path_hitting_time_end_to_end_is_square() {
    for i in [2, 3, 5, 10, 40] {
        let adj = path_graph(i).unwrap();
        let slow = lu_hitting_times(&adj, i - 1);
        assert!(close(slow[0], ((i - 1) * (i - 1)) as f64, 1e-9));
        assert_eq!(tree_hitting_times(&adj, i - 1).unwrap()[0], ((i - 1) * (i - 1)) as f64);
        assert!(close(max_hitting_time_on(&adj), ((i - 1) * (i - 1)) as f64, 1e-9));
    }
}

fn max_hitting_time_on(adj: &[Vec<usize>]) -> f64 {
    (0..adj.len()).flat_map(|t| tree_hitting_times(adj, t).unwrap()).fold(0.0, f64::max)
}
