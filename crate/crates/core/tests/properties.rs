//! Invariants of the superstep, the process and the bound checks.

use std::collections::BTreeSet;

use evoset::bounds::{check_ceil_log_inequality, check_entropy_decomposition, check_rootdecay};
use evoset::evolving::{gap_length, q_measure, superstep_levels, superstep_sample, EvolvingSetProcess};
use evoset::rng::{run_trials, uniform_open};
use evoset::space::{CellSet, Space};
use evoset::walk::ExactWalk;
use evoset::{GraphFamily, VertexId};
use proptest::prelude::*;
use rand::Rng;

/// Which graph a generated case lives on; sets are drawn near the origin.
#[derive(Clone, Debug)]
enum Host {
    Line(Vec<i64>),
    Plane(Vec<(i64, i64)>),
    Tree(Vec<usize>),
}

fn host() -> impl Strategy<Value = Host> {
    prop_oneof![
        prop::collection::vec(-6i64..=6, 1..6).prop_map(Host::Line),
        prop::collection::vec((-3i64..=3, -3i64..=3), 1..5).prop_map(Host::Plane),
        prop::collection::vec(0usize..=4, 1..4).prop_map(Host::Tree),
    ]
}

fn graph_of(h: &Host) -> GraphFamily {
    match h {
        Host::Line(_) => GraphFamily::IntegerLine,
        Host::Plane(_) => GraphFamily::Lattice2D,
        Host::Tree(_) => GraphFamily::regular_tree(3).unwrap(),
    }
}

/// Identity space for the lattices; sphere lumping for the tree, where the
/// set is a union of spheres around the root.
fn walk_and_set<'g>(h: &Host, g: &'g GraphFamily) -> (ExactWalk<'g>, CellSet) {
    match h {
        Host::Line(xs) => {
            let vs: BTreeSet<VertexId> = xs.iter().map(|&x| VertexId::Line(x)).collect();
            let walk = ExactWalk::identity(g);
            let set = walk.space().cells_of(&vs).unwrap();
            (walk, set)
        }
        Host::Plane(ps) => {
            let vs: BTreeSet<VertexId> = ps.iter().map(|&(x, y)| VertexId::Lattice2([x, y])).collect();
            let walk = ExactWalk::identity(g);
            let set = walk.space().cells_of(&vs).unwrap();
            (walk, set)
        }
        Host::Tree(radii) => {
            let walk = ExactWalk::centered(g, &g.origin()).unwrap();
            let mut vs = BTreeSet::new();
            for &r in radii {
                vs.extend(g.sphere(&g.origin(), r, 10_000).unwrap());
            }
            let set = walk.space().cells_of(&vs).unwrap();
            (walk, set)
        }
    }
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn levels_are_nested_with_ratios_in_unit_interval(h in host(), steps in 0usize..14) {
        let g = graph_of(&h);
        let (walk, set) = walk_and_set(&h, &g);
        let levels = superstep_levels(&walk, &set, steps).unwrap();
        let r = levels.thresholds();
        prop_assert!(r.iter().all(|&x| x > 0.0 && x <= 1.0));
        prop_assert!(r.windows(2).all(|w| w[0] > w[1]));
        for j in 1..levels.levels.len() {
            prop_assert!(levels.set(j).is_subset(&levels.set(j + 1)));
        }
        let m = levels.masses();
        prop_assert!(m.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn superstep_preserves_expected_mass(h in host(), steps in 0usize..14) {
        let g = graph_of(&h);
        let (walk, set) = walk_and_set(&h, &g);
        let pi = walk.space().pi_of_set(&set).unwrap();
        let levels = superstep_levels(&walk, &set, steps).unwrap();
        prop_assert!(rel_close(levels.expected(|x| x), pi, 1e-10), "{} vs {}", levels.expected(|x| x), pi);
    }

    #[test]
    fn q_measure_total_is_set_mass(h in host(), steps in 0usize..14) {
        let g = graph_of(&h);
        let (walk, set) = walk_and_set(&h, &g);
        let q = q_measure(&walk, &set, steps).unwrap();
        prop_assert!(rel_close(q.measure.total(), walk.space().pi_of_set(&set).unwrap(), 1e-12));
    }

    #[test]
    fn sampled_set_matches_level_lookup(h in host(), steps in 0usize..14, u in 1e-9f64..1.0) {
        let g = graph_of(&h);
        let (walk, set) = walk_and_set(&h, &g);
        let levels = superstep_levels(&walk, &set, steps).unwrap();
        let near_tie = levels.thresholds().iter().any(|r| (r - u).abs() <= 1e-9 * r);
        prop_assume!(!near_tie);
        prop_assert_eq!(superstep_sample(&walk, &set, steps, u).unwrap(), levels.set_for(u));
    }

    #[test]
    fn gap_is_even_and_matches_formula(pi in 1.0f64..1e12, c in 0.01f64..3.0) {
        let l = gap_length(pi, c).unwrap();
        prop_assert_eq!(l % 2, 0);
        let half = (l / 2) as f64;
        let x = (8.0 * pi).ln() / c;
        prop_assert!(half >= x - 1e-9 && half < x + 1.0);
    }

    #[test]
    fn entropy_decomposition_always_holds(x0 in -4i64..=4, n in 0usize..30, r in 0i64..6, tree in any::<bool>()) {
        let (g, start, set) = if tree {
            let g = GraphFamily::regular_tree(3).unwrap();
            let o = g.origin();
            let set = g.ball(&o, r as usize, 10_000).unwrap();
            (g, o, set)
        } else {
            let set = (-r..=r).map(VertexId::Line).collect();
            (GraphFamily::IntegerLine, VertexId::Line(x0), set)
        };
        let report = check_entropy_decomposition(&g, &start, n, &set).unwrap();
        prop_assert!(report.pass, "{report:?}");
    }

    #[test]
    fn root_decay_holds_for_mean_one_laws(raw in prop::collection::vec((0.0f64..10.0, 0.01f64..1.0), 1..8)) {
        let total: f64 = raw.iter().map(|(_, p)| p).sum();
        let mean: f64 = raw.iter().map(|(v, p)| v * p / total).sum();
        prop_assume!(mean > 1e-6);
        let dist: Vec<(f64, f64)> = raw.iter().map(|&(v, p)| (v / mean, p / total)).collect();
        let report = check_rootdecay(&dist).unwrap();
        prop_assert!(report.pass, "{report:?}");
    }

    #[test]
    fn ceil_log_inequality_holds(x in 1.0f64..1e15) {
        prop_assert!(check_ceil_log_inequality(&[x]).unwrap()[0].pass);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn empty_set_is_absorbing(seed in any::<u64>(), c in 0.1f64..2.0) {
        let g = GraphFamily::IntegerLine;
        let process = EvolvingSetProcess::centered(&g, &VertexId::Line(0), c).unwrap();
        let mut rng = evoset::rng::seed_stream(seed, 0);
        let traj = process.simulate(&VertexId::Line(0), 30, &mut rng).unwrap();
        if let Some(k) = traj.records.iter().position(|r| r.set.is_empty()) {
            prop_assert_eq!(k, traj.records.len() - 1);
            prop_assert!(traj.absorbed());
        }
        let empty = process.simulate_from(CellSet::empty(), 5, &mut rng).unwrap();
        prop_assert_eq!(empty.records.len(), 1);
        prop_assert_eq!(process.state_at(CellSet::empty(), 100, &mut rng).unwrap(), (0, CellSet::empty()));
    }

    #[test]
    fn sampling_frequency_tracks_level_probability(seed in any::<u64>(), steps in 1usize..10) {
        let g = GraphFamily::regular_tree(3).unwrap();
        let walk = ExactWalk::centered(&g, &g.origin()).unwrap();
        let set = walk.space().cells_of(&g.ball(&g.origin(), 1, 100).unwrap()).unwrap();
        let levels = superstep_levels(&walk, &set, steps).unwrap();
        let target = levels.prob_mass_at_least(4.0 * levels.base_mass);
        let trials = 4_000;
        let hits = run_trials(seed, trials, |_, rng| {
            levels.pi_mass_for(uniform_open(rng)) >= 4.0 * levels.base_mass
        })
        .into_iter()
        .filter(|&b| b)
        .count();
        let freq = hits as f64 / trials as f64;
        let se = (target * (1.0 - target) / trials as f64).sqrt().max(1e-3);
        prop_assert!((freq - target).abs() <= 5.0 * se, "{freq} vs {target}");
    }
}

#[test]
fn trial_results_do_not_depend_on_worker_count() {
    let g = GraphFamily::regular_tree(3).unwrap();
    let process = EvolvingSetProcess::centered(&g, &g.origin(), 0.5).unwrap();
    let profile = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| process.decay_profile(&g.origin(), 4, 500, 11).unwrap())
    };
    let one = profile(1);
    let four = profile(4);
    for (a, b) in one.points.iter().zip(&four.points) {
        assert_eq!(a.estimate.mean.to_bits(), b.estimate.mean.to_bits());
        assert_eq!(a.estimate.stderr.to_bits(), b.estimate.stderr.to_bits());
    }
    let draws = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| run_trials(5, 200, |i, rng| (i, rng.random::<u64>())))
    };
    assert_eq!(draws(1), draws(3));
}

#[test]
fn lumped_superstep_agrees_with_identity_superstep() {
    let g = GraphFamily::regular_tree(3).unwrap();
    let o = g.origin();
    let lumped = ExactWalk::centered(&g, &o).unwrap();
    let identity = ExactWalk::new(Space::identity(&g), Default::default());
    let ball = g.ball(&o, 1, 100).unwrap();
    let (ls, is) = (lumped.space().cells_of(&ball).unwrap(), identity.space().cells_of(&ball).unwrap());
    for steps in [2, 4, 6] {
        let a = superstep_levels(&lumped, &ls, steps).unwrap();
        let b = superstep_levels(&identity, &is, steps).unwrap();
        assert_eq!(a.thresholds().len(), b.thresholds().len());
        for (x, y) in a.levels.iter().zip(&b.levels) {
            assert!((x.threshold - y.threshold).abs() < 1e-12);
            assert!((x.pi_mass - y.pi_mass).abs() < 1e-9);
        }
    }
}
