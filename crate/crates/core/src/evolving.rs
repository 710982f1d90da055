//! Intermittent evolving set process.
//!
//! Starting from a finite set S, the process jumps only at times
//! `T_m = T_{m-1} + L_m`, where the gap `L_m = 2⌈ln(8π(S_{T_{m-1}}))/C⌉`
//! depends on the current set, and the new set is
//! `{y : Q_{L_m}(S_{T_{m-1}}, y) ≥ U_m π(y)}` for a fresh uniform `U_m`,
//! with `π = degree` and `Q_t(S, y) = Σ_{x∈S} π(x) p^t(x, y)`.
//!
//! All set-valued computations run on the cells of a [`Space`]; sets are
//! unions of cells, which is exact because `Q_t(S, ·)/π` is constant on the
//! cells of an equitable partition whenever S is a union of cells.

use std::collections::BTreeSet;
use std::sync::{Arc, Mutex};

use rand::Rng;
use rustc_hash::FxHashMap;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{GraphFamily, VertexId};
use crate::measure::SparseMeasure;
use crate::report::{BoundReport, Direction};
use crate::rng::{run_trials, uniform_open, StreamRng};
use crate::space::{Cell, CellSet, Space};
use crate::stats::Estimate;
use crate::walk::{fmt_f64, ExactWalk};

/// Ratios within this relative distance are one level.
pub const RATIO_TIE_TOLERANCE: f64 = 1e-12;

/// `Q_t(S, ·)` on cells.
#[derive(Clone, Debug)]
pub struct QMeasure {
    pub measure: SparseMeasure<Cell>,
    pub origin: CellSet,
    pub steps: usize,
    /// π(S), which is also the total mass.
    pub origin_mass: f64,
}

impl QMeasure {
    /// Q_t(S, y) for a single vertex `y` of `cell`.
    pub fn per_vertex(&self, space: &Space, cell: &Cell) -> f64 {
        self.measure.get(cell) / space.multiplicity(cell)
    }

    /// Q_t(S, y)/π(y) for `y` in `cell`.
    pub fn ratio(&self, space: &Space, cell: &Cell) -> Result<f64> {
        Ok(self.per_vertex(space, cell) / space.degree(cell)? as f64)
    }

    pub fn at(&self, space: &Space, v: &VertexId) -> Result<f64> {
        Ok(self.per_vertex(space, &space.cell_of(v)?))
    }
}

/// Propagates the initial measure π·1_S for `t` steps. The empty set gives
/// the zero measure.
pub fn q_measure(walk: &ExactWalk, set: &CellSet, t: usize) -> Result<QMeasure> {
    let space = walk.space();
    let mut mu = SparseMeasure::zero();
    for cell in set {
        mu.add(cell.clone(), space.pi(cell)?);
    }
    let origin_mass = mu.total();
    let measure = walk.evolve(&mu, t)?;
    Ok(QMeasure { measure, origin: set.clone(), steps: t, origin_mass })
}

/// `L = 2⌈ln(8·π(S))/C⌉`.
pub fn gap_length(pi_mass: f64, c: f64) -> Result<usize> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::InvalidArgument(format!("entropy constant must be positive, got {c}")));
    }
    if pi_mass < 1.0 {
        return Err(Error::InvalidArgument(format!(
            "gap length needs a nonempty set (π(S) >= 1), got π(S) = {pi_mass}"
        )));
    }
    Ok(2 * ((8.0 * pi_mass).ln() / c).ceil() as usize)
}

/// `α = 1 − C/(16 ln d)`.
pub fn decay_constant(c: f64, max_degree: usize) -> f64 {
    1.0 - c / (16.0 * (max_degree as f64).ln())
}

/// `{y : Q_L(S, y) ≥ u π(y)}` by direct filtering.
pub fn superstep_sample(walk: &ExactWalk, set: &CellSet, steps: usize, u: f64) -> Result<CellSet> {
    if steps == 0 && set.is_empty() {
        return Ok(CellSet::empty());
    }
    let q = q_measure(walk, set, steps)?;
    let space = walk.space();
    let mut out = Vec::new();
    for (cell, mass) in q.measure.iter() {
        let per_vertex = mass / space.multiplicity(cell);
        if per_vertex >= u * space.degree(cell)? as f64 {
            out.push(cell.clone());
        }
    }
    Ok(out.into_iter().collect())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Level {
    /// Ratio Q_L(S, y)/π(y) shared by the cells entering at this level.
    pub threshold: f64,
    /// Cells entering at this level.
    pub added: Vec<Cell>,
    /// π of the cumulative set.
    pub pi_mass: f64,
    /// Vertex count of the cumulative set.
    pub vertex_count: f64,
}

/// Level-set decomposition of one superstep.
///
/// Thresholds `r_1 > … > r_k` and nested sets `A_1 ⊂ … ⊂ A_k`; a threshold
/// `u ∈ (r_{j+1}, r_j]` produces `A_j` and `u > r_1` produces ∅.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuperstepLevels {
    pub levels: Vec<Level>,
    /// π(S) of the set the superstep starts from.
    pub base_mass: f64,
    pub steps: usize,
}

impl SuperstepLevels {
    pub fn thresholds(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.threshold).collect()
    }

    pub fn masses(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.pi_mass).collect()
    }

    /// Number of levels whose threshold is at least `u`.
    pub fn level_count_for(&self, u: f64) -> usize {
        self.levels.partition_point(|l| l.threshold >= u)
    }

    /// Cumulative set `A_j` (1-based); `A_0 = ∅`.
    pub fn set(&self, j: usize) -> CellSet {
        self.levels[..j].iter().flat_map(|l| l.added.iter().cloned()).collect()
    }

    pub fn set_for(&self, u: f64) -> CellSet {
        self.set(self.level_count_for(u))
    }

    pub fn pi_mass_for(&self, u: f64) -> f64 {
        match self.level_count_for(u) {
            0 => 0.0,
            j => self.levels[j - 1].pi_mass,
        }
    }

    /// E f(π(S̃)) = Σ_j (r_j − r_{j+1}) f(π(A_j)) + (1 − r_1) f(0).
    pub fn expected<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        let first = self.levels.first().map_or(0.0, |l| l.threshold);
        let mut total = (1.0 - first) * f(0.0);
        for (j, level) in self.levels.iter().enumerate() {
            let next = self.levels.get(j + 1).map_or(0.0, |l| l.threshold);
            total += (level.threshold - next) * f(level.pi_mass);
        }
        total
    }

    /// Index (1-based) of `S_*`, the largest level with π < 4π(S); 0 when
    /// even `A_1` is that large.
    pub fn s_star(&self) -> usize {
        self.levels.partition_point(|l| l.pi_mass < 4.0 * self.base_mass)
    }

    /// Probability that π(S̃) ≥ `mass`.
    pub fn prob_mass_at_least(&self, mass: f64) -> f64 {
        match self.levels.iter().position(|l| l.pi_mass >= mass) {
            Some(j) => self.levels[j].threshold,
            None => 0.0,
        }
    }
}

/// Exact level-set decomposition of the superstep from `set` with gap `steps`.
pub fn superstep_levels(walk: &ExactWalk, set: &CellSet, steps: usize) -> Result<SuperstepLevels> {
    let space = walk.space();
    let q = q_measure(walk, set, steps)?;
    let mut ratios: Vec<(f64, Cell)> = Vec::with_capacity(q.measure.len());
    for (cell, mass) in q.measure.iter() {
        let ratio = mass / (space.multiplicity(cell) * space.degree(cell)? as f64);
        ratios.push((ratio, cell.clone()));
    }
    ratios.sort_by(|a, b| b.0.total_cmp(&a.0).then_with(|| a.1.cmp(&b.1)));
    let mut levels: Vec<Level> = Vec::new();
    let (mut pi_mass, mut count) = (0.0, 0.0);
    for (ratio, cell) in ratios {
        pi_mass += space.pi(&cell)?;
        count += space.multiplicity(&cell);
        match levels.last_mut() {
            Some(level) if level.threshold - ratio <= RATIO_TIE_TOLERANCE * level.threshold => {
                level.added.push(cell);
                level.pi_mass = pi_mass;
                level.vertex_count = count;
            }
            _ => levels.push(Level { threshold: ratio.min(1.0), added: vec![cell], pi_mass, vertex_count: count }),
        }
    }
    Ok(SuperstepLevels { levels, base_mass: q.origin_mass, steps })
}

/// E f(π(S̃)) over the uniform threshold.
pub fn expected_functional<F: Fn(f64) -> f64>(levels: &SuperstepLevels, f: F) -> f64 {
    levels.expected(f)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrajectoryRecord {
    pub m: usize,
    #[serde(rename = "T")]
    pub time: usize,
    #[serde(skip)]
    pub set: CellSet,
    #[serde(rename = "L")]
    pub gap: Option<usize>,
    #[serde(rename = "U")]
    pub uniform: Option<f64>,
    pub set_size: f64,
    pub pi_mass: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EvolvingTrajectory {
    pub records: Vec<TrajectoryRecord>,
    pub c: f64,
    /// Set when propagation hit the support cap before `m_max`.
    pub truncated: bool,
}

impl EvolvingTrajectory {
    /// a(t) = max{i : T_i ≤ t} over the recorded supersteps.
    pub fn a(&self, t: usize) -> usize {
        self.records.partition_point(|r| r.time <= t).saturating_sub(1)
    }

    pub fn absorbed(&self) -> bool {
        self.records.last().is_some_and(|r| r.set.is_empty())
    }

    pub fn sqrt_pi(&self, m: usize) -> f64 {
        self.records.get(m).map_or(0.0, |r| r.pi_mass.sqrt())
    }

    /// One JSON object per superstep; `vertices` adds the full vertex sets.
    pub fn to_jsonl(&self, trial: Option<usize>, vertices: Option<(&Space, usize)>) -> Result<String> {
        let mut out = String::new();
        for r in &self.records {
            let mut value = serde_json::to_value(r)?;
            let obj = value.as_object_mut().expect("record is an object");
            if let Some(trial) = trial {
                obj.insert("trial".into(), trial.into());
            }
            if let Some((space, cap)) = vertices {
                let labels: Vec<String> = space.vertices_of(&r.set, cap)?.iter().map(ToString::to_string).collect();
                obj.insert("vertices".into(), labels.into());
            }
            out.push_str(&serde_json::to_string(&value)?);
            out.push('\n');
        }
        Ok(out)
    }
}

type LevelCache = Mutex<FxHashMap<(CellSet, usize), Arc<SuperstepLevels>>>;

/// The process with the degree-based gap schedule for a fixed constant C.
///
/// Superstep decompositions are memoised per (set, gap); the cache is a pure
/// function of its key, so sharing it across trials and threads does not
/// change any result.
pub struct EvolvingSetProcess<'g> {
    walk: ExactWalk<'g>,
    c: f64,
    cache: LevelCache,
}

impl<'g> EvolvingSetProcess<'g> {
    pub fn new(walk: ExactWalk<'g>, c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::InvalidArgument(format!("entropy constant must be positive, got {c}")));
        }
        Ok(EvolvingSetProcess { walk, c, cache: Mutex::new(FxHashMap::default()) })
    }

    /// Process on the coarsest partition in which `x0` is a singleton.
    pub fn centered(graph: &'g GraphFamily, x0: &VertexId, c: f64) -> Result<Self> {
        Self::new(ExactWalk::centered(graph, x0)?, c)
    }

    pub fn walk(&self) -> &ExactWalk<'g> {
        &self.walk
    }

    pub fn space(&self) -> &Space<'g> {
        self.walk.space()
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn alpha(&self) -> f64 {
        decay_constant(self.c, self.space().max_degree())
    }

    pub fn start_set(&self, x0: &VertexId) -> Result<CellSet> {
        Ok(CellSet::single(self.walk.singleton_cell(x0)?))
    }

    pub fn pi_mass(&self, set: &CellSet) -> Result<f64> {
        self.space().pi_of_set(set)
    }

    pub fn gap(&self, set: &CellSet) -> Result<usize> {
        gap_length(self.pi_mass(set)?, self.c)
    }

    pub fn levels(&self, set: &CellSet, steps: usize) -> Result<Arc<SuperstepLevels>> {
        let key = (set.clone(), steps);
        if let Some(hit) = self.cache.lock().expect("cache lock").get(&key) {
            return Ok(hit.clone());
        }
        let levels = Arc::new(superstep_levels(&self.walk, set, steps)?);
        self.cache.lock().expect("cache lock").insert(key, levels.clone());
        Ok(levels)
    }

    /// Decomposition of the superstep from `set` with its scheduled gap.
    pub fn scheduled_levels(&self, set: &CellSet) -> Result<Arc<SuperstepLevels>> {
        self.levels(set, self.gap(set)?)
    }

    fn record(
        &self,
        m: usize,
        time: usize,
        set: CellSet,
        gap: Option<usize>,
        uniform: Option<f64>,
    ) -> Result<TrajectoryRecord> {
        Ok(TrajectoryRecord {
            m,
            time,
            set_size: self.space().vertex_count(&set),
            pi_mass: self.pi_mass(&set)?,
            set,
            gap,
            uniform,
        })
    }

    /// Runs up to `m_max` supersteps from an arbitrary set, stopping early at ∅.
    pub fn simulate_from<R: Rng + ?Sized>(
        &self,
        start: CellSet,
        m_max: usize,
        rng: &mut R,
    ) -> Result<EvolvingTrajectory> {
        let mut records = vec![self.record(0, 0, start, None, None)?];
        let mut truncated = false;
        for m in 1..=m_max {
            let prev = records.last().expect("nonempty");
            if prev.set.is_empty() {
                break;
            }
            let gap = gap_length(prev.pi_mass, self.c)?;
            let u = uniform_open(rng);
            let levels = match self.levels(&prev.set, gap) {
                Ok(l) => l,
                Err(Error::SupportCap { .. }) => {
                    truncated = true;
                    break;
                }
                Err(e) => return Err(e),
            };
            let time = prev.time + gap;
            records.push(self.record(m, time, levels.set_for(u), Some(gap), Some(u))?);
        }
        Ok(EvolvingTrajectory { records, c: self.c, truncated })
    }

    /// Trajectory from `{x0}`.
    pub fn simulate<R: Rng + ?Sized>(&self, x0: &VertexId, m_max: usize, rng: &mut R) -> Result<EvolvingTrajectory> {
        self.simulate_from(self.start_set(x0)?, m_max, rng)
    }

    /// `(T_{a(t)}, S_{T_{a(t)}})`, simulating only the supersteps that end by time `t`.
    pub fn state_at<R: Rng + ?Sized>(&self, start: CellSet, t: usize, rng: &mut R) -> Result<(usize, CellSet)> {
        let (mut time, mut set) = (0, start);
        loop {
            if set.is_empty() {
                return Ok((time, set));
            }
            let gap = self.gap(&set)?;
            if time + gap > t {
                return Ok((time, set));
            }
            let u = uniform_open(rng);
            set = self.levels(&set, gap)?.set_for(u);
            time += gap;
        }
    }

    /// Monte Carlo estimates of E√π(S_{T_m}) for m = 0..=m_max; trial `i`
    /// uses stream `i` of `seed`.
    pub fn decay_profile(&self, x0: &VertexId, m_max: usize, trials: usize, seed: u64) -> Result<DecayProfile> {
        if trials == 0 {
            return Err(Error::InvalidArgument("trials must be >= 1".into()));
        }
        let start = self.start_set(x0)?;
        let samples = run_trials(seed, trials, |_, rng: &mut StreamRng| -> Result<Vec<f64>> {
            let traj = self.simulate_from(start.clone(), m_max, rng)?;
            if traj.truncated {
                return Err(Error::SupportCap {
                    cap: self.walk.options().support_cap,
                    during: "simulating a trajectory".into(),
                });
            }
            Ok((0..=m_max).map(|m| traj.sqrt_pi(m)).collect())
        });
        let samples: Vec<Vec<f64>> = samples.into_iter().collect::<Result<_>>()?;
        let pi_x0 = self.pi_mass(&start)?;
        let alpha = self.alpha();
        let points = (0..=m_max)
            .map(|m| {
                let estimate = if m == 0 {
                    Estimate { mean: pi_x0.sqrt(), stderr: 0.0, samples: trials }
                } else {
                    let column: Vec<f64> = samples.iter().map(|s| s[m]).collect();
                    Estimate::from_samples(&column)
                };
                DecayPoint { m, estimate, bound: alpha.powi(m as i32) * pi_x0 }
            })
            .collect();
        Ok(DecayProfile { points, c: self.c, alpha, pi_x0 })
    }

    /// Compares p^t(x0, y) with the trajectory average of
    /// Q_{t−T_{a(t)}}(S_{T_{a(t)}}, y)/π(x0); passes when they agree within
    /// four standard errors.
    pub fn duality_check(
        &self,
        x0: &VertexId,
        y: &VertexId,
        t: usize,
        trials: usize,
        seed: u64,
    ) -> Result<BoundReport> {
        if trials == 0 {
            return Err(Error::InvalidArgument("trials must be >= 1".into()));
        }
        let space = self.space();
        let exact = self.walk.mass_at(&self.walk.distribution(x0, t)?, y)?;
        let start = self.start_set(x0)?;
        let pi_x0 = self.pi_mass(&start)?;
        let y_cell = space.cell_of(y)?;
        let states = run_trials(seed, trials, |_, rng: &mut StreamRng| self.state_at(start.clone(), t, rng));
        let mut memo: FxHashMap<(CellSet, usize), f64> = FxHashMap::default();
        let mut samples = Vec::with_capacity(trials);
        for state in states {
            let (time, set) = state?;
            let key = (set, t - time);
            let value = match memo.get(&key) {
                Some(v) => *v,
                None => {
                    let q = q_measure(&self.walk, &key.0, key.1)?;
                    let v = q.per_vertex(space, &y_cell) / pi_x0;
                    memo.insert(key, v);
                    v
                }
            };
            samples.push(value);
        }
        let est = Estimate::from_samples(&samples);
        let diff = (est.mean - exact).abs();
        Ok(BoundReport::new("duality", diff, 4.0 * est.stderr, Direction::AtMost, 1e-12)
            .input("graph", space.graph())
            .input("x0", x0)
            .input("y", y)
            .input("t", t)
            .input("c", self.c)
            .input("trials", trials)
            .input("seed", seed)
            .provenance("walk transition probability equals the evolving-set average of Q at the last update before t")
            .extra("exact", exact)
            .extra("estimate", est.mean)
            .extra("stderr", est.stderr))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DecayPoint {
    pub m: usize,
    pub estimate: Estimate,
    /// α^m π(x0).
    pub bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecayProfile {
    pub points: Vec<DecayPoint>,
    pub c: f64,
    pub alpha: f64,
    pub pi_x0: f64,
}

impl DecayProfile {
    /// `m,mean_sqrt_pi,stderr,bound`
    pub fn to_csv(&self) -> String {
        let mut out = String::from("m,mean_sqrt_pi,stderr,bound\n");
        for p in &self.points {
            out.push_str(&format!(
                "{},{},{},{}\n",
                p.m,
                fmt_f64(p.estimate.mean),
                fmt_f64(p.estimate.stderr),
                fmt_f64(p.bound)
            ));
        }
        out
    }
}

/// Vertex-set convenience wrapper around [`superstep_sample`] on the
/// identity partition.
pub fn superstep_sample_vertices(
    g: &GraphFamily,
    set: &BTreeSet<VertexId>,
    steps: usize,
    u: f64,
) -> Result<BTreeSet<VertexId>> {
    let walk = ExactWalk::identity(g);
    let cells = walk.space().cells_of(set)?;
    let out = superstep_sample(&walk, &cells, steps, u)?;
    walk.space().vertices_of(&out, usize::MAX)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seed_stream;

    fn line_setup(g: &GraphFamily) -> (ExactWalk<'_>, CellSet) {
        let walk = ExactWalk::identity(g);
        let s = CellSet::single(Cell::Vertex(VertexId::Line(0)));
        (walk, s)
    }

    fn vset(xs: &[i64]) -> CellSet {
        xs.iter().map(|&x| Cell::Vertex(VertexId::Line(x))).collect()
    }

    #[test]
    fn q_measure_examples() {
        let g = GraphFamily::IntegerLine;
        let (walk, s) = line_setup(&g);
        let q0 = q_measure(&walk, &s, 0).unwrap();
        assert_eq!(q0.measure.sorted(), vec![(Cell::Vertex(VertexId::Line(0)), 2.0)]);
        let q2 = q_measure(&walk, &s, 2).unwrap();
        assert_eq!(
            q2.measure.sorted(),
            vec![
                (Cell::Vertex(VertexId::Line(-2)), 0.5),
                (Cell::Vertex(VertexId::Line(0)), 1.0),
                (Cell::Vertex(VertexId::Line(2)), 0.5)
            ]
        );
        let empty = q_measure(&walk, &CellSet::empty(), 3).unwrap();
        assert!(empty.measure.is_empty());
        assert_eq!(empty.origin_mass, 0.0);
    }

    #[test]
    fn gap_examples() {
        assert_eq!(gap_length(1.0, 1.0).unwrap(), 6);
        assert_eq!(gap_length(2.0, 0.5).unwrap(), 12);
        assert_eq!(gap_length(2.0, 0.2).unwrap(), 28);
        assert!(gap_length(0.0, 1.0).is_err());
        assert!(gap_length(2.0, 0.0).is_err());
    }

    #[test]
    fn superstep_sample_examples() {
        let g = GraphFamily::IntegerLine;
        let (walk, s) = line_setup(&g);
        assert_eq!(superstep_sample(&walk, &s, 2, 0.3).unwrap(), vset(&[0]));
        assert_eq!(superstep_sample(&walk, &s, 2, 0.2).unwrap(), vset(&[-2, 0, 2]));
        assert_eq!(superstep_sample(&walk, &s, 2, 0.6).unwrap(), vset(&[]));
        assert_eq!(superstep_sample(&walk, &CellSet::empty(), 2, 0.1).unwrap(), vset(&[]));
    }

    #[test]
    fn levels_example() {
        let g = GraphFamily::IntegerLine;
        let (walk, s) = line_setup(&g);
        let levels = superstep_levels(&walk, &s, 2).unwrap();
        assert_eq!(levels.thresholds(), vec![0.5, 0.25]);
        assert_eq!(levels.masses(), vec![2.0, 6.0]);
        assert_eq!(levels.set(1), vset(&[0]));
        assert_eq!(levels.set(2), vset(&[-2, 0, 2]));
        assert_eq!(levels.expected(|x| x), 2.0);
        let sqrt = levels.expected(f64::sqrt);
        assert!((sqrt - (0.25 * 6f64.sqrt() + 0.25 * 2f64.sqrt())).abs() < 1e-15);
        assert!((sqrt - 0.965926).abs() < 1e-6);
        assert_eq!(levels.expected(|x| if x >= 8.0 { x } else { 0.0 }), 0.0);
        assert_eq!(levels.s_star(), 2);
        let zero = superstep_levels(&walk, &vset(&[3, 4]), 0).unwrap();
        assert_eq!(zero.thresholds(), vec![1.0]);
        assert_eq!(zero.set(1), vset(&[3, 4]));
    }

    #[test]
    fn sampling_through_levels_matches_direct_filter() {
        let g = GraphFamily::Lattice2D;
        let walk = ExactWalk::identity(&g);
        let s: CellSet = [[0, 0], [1, 0], [1, 1]].into_iter().map(|p| Cell::Vertex(VertexId::Lattice2(p))).collect();
        let levels = superstep_levels(&walk, &s, 4).unwrap();
        let mut rng = seed_stream(11, 0);
        for _ in 0..200 {
            let u = uniform_open(&mut rng);
            assert_eq!(levels.set_for(u), superstep_sample(&walk, &s, 4, u).unwrap());
        }
    }

    #[test]
    fn absorption_and_time_bookkeeping() {
        let g = GraphFamily::IntegerLine;
        let process = EvolvingSetProcess::new(ExactWalk::identity(&g), 0.5).unwrap();
        let mut rng = seed_stream(5, 0);
        let traj = process.simulate(&VertexId::Line(0), 1, &mut rng).unwrap();
        assert_eq!(traj.records[1].gap, Some(12));
        assert_eq!(traj.records[1].time, 12);
        let traj = process.simulate(&VertexId::Line(0), 30, &mut rng).unwrap();
        let mut t = 0;
        for r in &traj.records[1..] {
            t += r.gap.unwrap();
            assert_eq!(r.time, t);
            let gap = r.gap.unwrap();
            assert!(gap >= 2 && gap % 2 == 0);
        }
        if traj.absorbed() {
            assert!(traj.records.len() <= 31);
        }
        assert_eq!(traj.a(0), 0);
        assert_eq!(traj.a(11), 0);
    }

    #[test]
    fn forced_absorption() {
        // u close to 1 exceeds every ratio after 6 steps from {0}.
        let g = GraphFamily::IntegerLine;
        let (walk, s) = line_setup(&g);
        let levels = superstep_levels(&walk, &s, 6).unwrap();
        assert!(levels.thresholds()[0] < 0.999);
        assert!(levels.set_for(0.999).is_empty());
    }

    #[test]
    fn duality_is_exact_before_first_update() {
        let g = GraphFamily::IntegerLine;
        let process = EvolvingSetProcess::new(ExactWalk::identity(&g), 0.5).unwrap();
        let r = process.duality_check(&VertexId::Line(0), &VertexId::Line(0), 2, 100, 1).unwrap();
        assert_eq!(r.extras["exact"], 0.5);
        assert_eq!(r.extras["estimate"], 0.5);
        assert_eq!(r.extras["stderr"], 0.0);
        assert!(r.pass);
        let r0 = process.duality_check(&VertexId::Line(0), &VertexId::Line(1), 0, 10, 1).unwrap();
        assert_eq!(r0.extras.get("exact").copied().unwrap_or(0.0), 0.0);
        assert!(r0.pass);
    }

    #[test]
    fn decay_profile_starts_exactly() {
        let g = GraphFamily::IntegerLine;
        let process = EvolvingSetProcess::new(ExactWalk::identity(&g), 1.0).unwrap();
        let p = process.decay_profile(&VertexId::Line(0), 3, 50, 9).unwrap();
        assert_eq!(p.points[0].estimate.mean, 2f64.sqrt());
        assert_eq!(p.points[0].estimate.stderr, 0.0);
    }
}
