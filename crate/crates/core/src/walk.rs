//! Simple random walk distributions: exact sparse propagation, entropy,
//! escape probabilities, Green's-function partial sums, and Monte Carlo
//! walkers for horizons where exact propagation is out of reach.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rand::Rng;
use rustc_hash::FxHashMap;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{GraphFamily, VertexId};
use crate::measure::SparseMeasure;
use crate::rng::{run_trials, StreamRng};
use crate::space::{Cell, Space};
use crate::stats::Estimate;

pub const DEFAULT_SUPPORT_CAP: usize = 5_000_000;

/// Formats a float with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PropagationOptions {
    /// Maximum number of stored entries before propagation fails.
    pub support_cap: usize,
    /// Entries below this are dropped (without renormalization) after every
    /// step. Zero keeps everything.
    pub prune_below: f64,
}

impl Default for PropagationOptions {
    fn default() -> Self {
        PropagationOptions { support_cap: DEFAULT_SUPPORT_CAP, prune_below: 0.0 }
    }
}

/// Exact propagation of measures on the cells of a [`Space`].
#[derive(Clone, Debug)]
pub struct ExactWalk<'g> {
    space: Space<'g>,
    opts: PropagationOptions,
}

impl<'g> ExactWalk<'g> {
    pub fn new(space: Space<'g>, opts: PropagationOptions) -> Self {
        ExactWalk { space, opts }
    }

    /// Walk on the coarsest partition in which `x0` is a singleton.
    pub fn centered(graph: &'g GraphFamily, x0: &VertexId) -> Result<Self> {
        Ok(Self::new(Space::centered(graph, x0)?, PropagationOptions::default()))
    }

    pub fn identity(graph: &'g GraphFamily) -> Self {
        Self::new(Space::identity(graph), PropagationOptions::default())
    }

    pub fn with_options(mut self, opts: PropagationOptions) -> Self {
        self.opts = opts;
        self
    }

    pub fn space(&self) -> &Space<'g> {
        &self.space
    }

    pub fn options(&self) -> PropagationOptions {
        self.opts
    }

    /// Cell of `v`, which must be a singleton so that a point mass there is
    /// representable.
    pub fn singleton_cell(&self, v: &VertexId) -> Result<Cell> {
        let cell = self.space.cell_of(v)?;
        if !self.space.is_singleton(&cell) {
            return Err(Error::InvalidArgument(format!(
                "vertex {v} is not a singleton cell of {}",
                self.space.describe()
            )));
        }
        Ok(cell)
    }

    pub fn point(&self, x0: &VertexId) -> Result<SparseMeasure<Cell>> {
        Ok(SparseMeasure::point(self.singleton_cell(x0)?, 1.0))
    }

    /// One step: μ′(y) = Σ_{x∼y} μ(x)/deg(x), on cell totals.
    pub fn step(&self, mu: &SparseMeasure<Cell>) -> Result<SparseMeasure<Cell>> {
        let mut out = SparseMeasure::zero();
        out.carry_pruned(mu.pruned_mass());
        let mut buf = Vec::with_capacity(8);
        for (cell, mass) in mu.iter() {
            let deg = self.space.degree(cell)? as f64;
            self.space.transitions(cell, &mut buf)?;
            for (target, count) in buf.drain(..) {
                out.add(target, mass * count as f64 / deg);
            }
            if out.len() > self.opts.support_cap {
                return Err(Error::SupportCap { cap: self.opts.support_cap, during: "propagating".into() });
            }
        }
        out.prune_below(self.opts.prune_below);
        Ok(out)
    }

    pub fn evolve(&self, mu: &SparseMeasure<Cell>, steps: usize) -> Result<SparseMeasure<Cell>> {
        let mut cur = mu.clone();
        for _ in 0..steps {
            cur = self.step(&cur)?;
        }
        Ok(cur)
    }

    /// p^n(x0, ·) on cells.
    pub fn distribution(&self, x0: &VertexId, n: usize) -> Result<SparseMeasure<Cell>> {
        self.evolve(&self.point(x0)?, n)
    }

    /// Per-vertex mass at `v`.
    pub fn mass_at(&self, mu: &SparseMeasure<Cell>, v: &VertexId) -> Result<f64> {
        let cell = self.space.cell_of(v)?;
        Ok(mu.get(&cell) / self.space.multiplicity(&cell))
    }

    pub fn mass_on(&self, mu: &SparseMeasure<Cell>, set: &BTreeSet<VertexId>) -> Result<f64> {
        set.iter().try_fold(0.0, |acc, v| Ok(acc + self.mass_at(mu, v)?))
    }

    /// Mass and support count inside and outside `set`, cell by cell, so
    /// that mass outside is exactly zero when the support lies in `set`.
    pub fn split_on(&self, mu: &SparseMeasure<Cell>, set: &BTreeSet<VertexId>) -> Result<SetSplit> {
        let mut members_in: FxHashMap<Cell, f64> = FxHashMap::default();
        for v in set {
            *members_in.entry(self.space.cell_of(v)?).or_insert(0.0) += 1.0;
        }
        let mut split = SetSplit::default();
        for (cell, mass) in mu.sorted() {
            let mult = self.space.multiplicity(&cell);
            let k = members_in.get(&cell).copied().unwrap_or(0.0);
            let per_vertex = mass / mult;
            split.inside_mass += per_vertex * k;
            split.inside_support += k;
            if k < mult {
                split.outside_mass += per_vertex * (mult - k);
                split.outside_support += mult - k;
            }
        }
        Ok(split)
    }

    /// Number of vertices carrying positive mass.
    pub fn support_size(&self, mu: &SparseMeasure<Cell>) -> f64 {
        mu.keys().fold(0.0, |acc, c| acc + self.space.multiplicity(c))
    }

    /// Number of vertices of `set` carrying positive mass.
    pub fn support_count_in(&self, mu: &SparseMeasure<Cell>, set: &BTreeSet<VertexId>) -> Result<usize> {
        let mut n = 0;
        for v in set {
            if mu.get(&self.space.cell_of(v)?) > 0.0 {
                n += 1;
            }
        }
        Ok(n)
    }

    /// Shannon entropy in nats, with 0 ln 0 = 0.
    pub fn entropy(&self, mu: &SparseMeasure<Cell>) -> Result<f64> {
        check_normalized(mu.total())?;
        let mut h = 0.0;
        for (cell, mass) in mu.sorted() {
            let per_vertex = mass / self.space.multiplicity(&cell);
            h -= mass * per_vertex.ln();
        }
        Ok(h.max(0.0))
    }

    pub fn entropy_series(&self, x0: &VertexId, n_max: usize) -> Result<EntropySeries> {
        let mut mu = self.point(x0)?;
        let mut points = Vec::with_capacity(n_max + 1);
        for n in 0..=n_max {
            if n > 0 {
                mu = self.step(&mu)?;
            }
            points.push(EntropyPoint { n, entropy: self.entropy(&mu)?, support: self.support_size(&mu) });
        }
        Ok(EntropySeries { points })
    }

    /// Probability that the walk from `x0` revisits `x0` within `horizon`
    /// steps, by propagating the mass that has not yet returned.
    pub fn return_probability(&self, x0: &VertexId, horizon: usize) -> Result<f64> {
        Ok(self.return_probabilities(x0, &[horizon])?[0])
    }

    /// [`return_probability`](Self::return_probability) at several horizons in one pass.
    pub fn return_probabilities(&self, x0: &VertexId, horizons: &[usize]) -> Result<Vec<f64>> {
        let start = self.singleton_cell(x0)?;
        let last = horizons.iter().copied().max().unwrap_or(0);
        let mut at = vec![0.0; last + 1];
        let mut returned = 0.0;
        if self.space.graph().is_finite() {
            let chain = IndexedChain::build(&self.space, &start)?;
            let mut mu = vec![0.0; chain.rows.len()];
            let mut next = mu.clone();
            mu[0] = 1.0;
            for slot in at.iter_mut().skip(1) {
                chain.step_dense(&mu, &mut next);
                returned += next[0];
                next[0] = 0.0;
                std::mem::swap(&mut mu, &mut next);
                *slot = returned;
            }
        } else {
            let mut mu = self.point(x0)?;
            for slot in at.iter_mut().skip(1) {
                mu = self.step(&mu)?;
                let back = mu.get(&start);
                if back > 0.0 {
                    returned += back;
                    mu = mu.iter().filter(|(c, _)| **c != start).map(|(c, m)| (c.clone(), m)).collect();
                }
                *slot = returned;
            }
        }
        Ok(horizons.iter().map(|&h| at[h].min(1.0)).collect())
    }

    /// p^t(x0, y) and Σ_{s≤t} p^s(x0, y) for t = 0..=horizon.
    pub fn green_series(&self, x0: &VertexId, y: &VertexId, horizon: usize) -> Result<GreenSeries> {
        let mut mu = self.point(x0)?;
        let mut points = Vec::with_capacity(horizon + 1);
        let mut sum = 0.0;
        for t in 0..=horizon {
            if t > 0 {
                mu = self.step(&mu)?;
            }
            let p = self.mass_at(&mu, y)?;
            sum += p;
            points.push(GreenPoint { t, p, partial_sum: sum });
        }
        Ok(GreenSeries { points })
    }
}

fn check_normalized(total: f64) -> Result<()> {
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::NotNormalized { mass: total });
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EntropyPoint {
    pub n: usize,
    /// Nats.
    pub entropy: f64,
    /// Number of vertices with positive probability.
    pub support: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntropySeries {
    pub points: Vec<EntropyPoint>,
}

impl EntropySeries {
    pub fn entropy(&self, n: usize) -> Option<f64> {
        self.points.get(n).map(|p| p.entropy)
    }

    /// E_n / n; undefined at n = 0.
    pub fn rate(&self, n: usize) -> Option<f64> {
        (n > 0).then(|| self.entropy(n).map(|e| e / n as f64)).flatten()
    }

    /// Local slope E_n − E_{n−1}.
    pub fn increment(&self, n: usize) -> Option<f64> {
        (n > 0).then(|| Some(self.entropy(n)? - self.entropy(n - 1)?)).flatten()
    }

    pub fn values(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.entropy).collect()
    }

    /// `n,entropy_nats,support,entropy_rate`; the rate column is E_n/n and is
    /// empty at n = 0.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,entropy_nats,support,entropy_rate\n");
        for p in &self.points {
            let rate = self.rate(p.n).map(fmt_f64).unwrap_or_default();
            let _ = writeln!(out, "{},{},{},{}", p.n, fmt_f64(p.entropy), p.support, rate);
        }
        out
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct SetSplit {
    pub inside_mass: f64,
    pub outside_mass: f64,
    /// Vertices of the set carrying positive mass.
    pub inside_support: f64,
    /// Vertices outside the set carrying positive mass.
    pub outside_support: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GreenPoint {
    pub t: usize,
    pub p: f64,
    pub partial_sum: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GreenSeries {
    pub points: Vec<GreenPoint>,
}

impl GreenSeries {
    pub fn partial_sums(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.partial_sum).collect()
    }

    pub fn last(&self) -> f64 {
        self.points.last().map(|p| p.partial_sum).unwrap_or(0.0)
    }

    /// Limit of the partial sums assuming `p^t ≈ c·t^(−exponent)` beyond the
    /// horizon on the times `t ≡ T (mod period)`, with `c` fitted to the last
    /// such term. The tail sum uses the midpoint integral approximation.
    pub fn extrapolated_limit(&self, exponent: f64, period: usize) -> Option<f64> {
        if exponent <= 1.0 || period == 0 {
            return None;
        }
        let last = self.points.iter().rev().find(|p| p.p > 0.0 && p.t > 0)?;
        let t = last.t as f64;
        let step = period as f64;
        let c = last.p * t.powf(exponent);
        // Σ_{k≥1} (t + k·step)^(−e) ≈ ∫_{t+step/2}^∞ x^(−e) dx / step
        let tail = c * (t + step / 2.0).powf(1.0 - exponent) / ((exponent - 1.0) * step);
        Some(self.last() + tail)
    }

    /// `t,p_return,partial_sum`
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,p_return,partial_sum\n");
        for p in &self.points {
            let _ = writeln!(out, "{},{},{}", p.t, fmt_f64(p.p), fmt_f64(p.partial_sum));
        }
        out
    }
}

/// One step of the walk on vertex measures.
pub fn step_distribution(g: &GraphFamily, mu: &SparseMeasure<VertexId>) -> Result<SparseMeasure<VertexId>> {
    step_vertex_measure(g, mu, DEFAULT_SUPPORT_CAP)
}

fn step_vertex_measure(g: &GraphFamily, mu: &SparseMeasure<VertexId>, cap: usize) -> Result<SparseMeasure<VertexId>> {
    let mut out = SparseMeasure::zero();
    for (v, mass) in mu.iter() {
        let ns = g.neighbors(v)?;
        let share = mass / ns.len() as f64;
        for u in ns {
            out.add(u, share);
        }
        if out.len() > cap {
            return Err(Error::SupportCap { cap, during: "propagating".into() });
        }
    }
    Ok(out)
}

/// p^n(x0, ·) as an explicit vertex measure.
pub fn distribution_at(g: &GraphFamily, x0: &VertexId, n: usize) -> Result<SparseMeasure<VertexId>> {
    g.validate(x0)?;
    let mut mu = SparseMeasure::point(x0.clone(), 1.0);
    for _ in 0..n {
        mu = step_vertex_measure(g, &mu, DEFAULT_SUPPORT_CAP)?;
    }
    Ok(mu)
}

/// −Σ p ln p in nats.
pub fn entropy(mu: &SparseMeasure<VertexId>) -> Result<f64> {
    check_normalized(mu.total())?;
    let h = mu.sorted().iter().fold(0.0, |acc, (_, p)| acc - p * p.ln());
    Ok(h.max(0.0))
}

pub fn entropy_series(g: &GraphFamily, x0: &VertexId, n_max: usize) -> Result<EntropySeries> {
    ExactWalk::centered(g, x0)?.entropy_series(x0, n_max)
}

/// p^n(x0, Aᶜ) = 1 − p^n(x0, A).
pub fn escape_probability(g: &GraphFamily, x0: &VertexId, n: usize, set: &BTreeSet<VertexId>) -> Result<f64> {
    let walk = ExactWalk::centered(g, x0)?;
    let mu = walk.distribution(x0, n)?;
    Ok(walk.split_on(&mu, set)?.outside_mass.min(1.0))
}

/// Σ_{t≤τ} p^t(x0, x0) for τ = 0..=horizon.
pub fn green_partial_sum(g: &GraphFamily, x0: &VertexId, horizon: usize) -> Result<Vec<f64>> {
    Ok(ExactWalk::centered(g, x0)?.green_series(x0, x0, horizon)?.partial_sums())
}

/// Endpoint of one simulated n-step walk.
pub fn mc_walk_endpoint<R: Rng + ?Sized>(g: &GraphFamily, x0: &VertexId, n: usize, rng: &mut R) -> Result<VertexId> {
    g.validate(x0)?;
    let mut v = x0.clone();
    for _ in 0..n {
        let mut ns = g.neighbors(&v)?;
        let i = rng.random_range(0..ns.len());
        v = ns.swap_remove(i);
    }
    Ok(v)
}

/// Samples the next cell of the lumped walk.
pub(crate) fn sample_transition<R: Rng + ?Sized>(
    space: &Space,
    cell: &Cell,
    buf: &mut Vec<(Cell, u32)>,
    rng: &mut R,
) -> Result<Cell> {
    let deg = space.degree(cell)? as u32;
    space.transitions(cell, buf)?;
    let mut pick = rng.random_range(0..deg);
    for (target, count) in buf.drain(..) {
        if pick < count {
            return Ok(target);
        }
        pick -= count;
    }
    unreachable!("transition counts sum to the degree")
}

/// Fraction of walks from `x0` that revisit `x0` within `n_max` steps.
///
/// Walks run on the lumped chain of the centred partition, which has the
/// same law for the return time. Trial `i` uses stream `i` of `seed`.
pub fn mc_return_frequency(g: &GraphFamily, x0: &VertexId, n_max: usize, trials: usize, seed: u64) -> Result<Estimate> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be >= 1".into()));
    }
    let space = Space::centered(g, x0)?;
    let start = space.cell_of(x0)?;
    let outcomes = if g.is_finite() {
        let chain = IndexedChain::build(&space, &start)?;
        run_trials(seed, trials, |_, rng: &mut StreamRng| -> Result<bool> {
            let mut i = 0;
            for _ in 0..n_max {
                i = chain.sample(i, rng);
                if i == 0 {
                    return Ok(true);
                }
            }
            Ok(false)
        })
    } else {
        run_trials(seed, trials, |_, rng: &mut StreamRng| -> Result<bool> {
            let mut buf = Vec::with_capacity(8);
            let mut cell = start.clone();
            for _ in 0..n_max {
                cell = sample_transition(&space, &cell, &mut buf, rng)?;
                if cell == start {
                    return Ok(true);
                }
            }
            Ok(false)
        })
    };
    let mut returned = 0;
    for o in outcomes {
        if o? {
            returned += 1;
        }
    }
    Ok(Estimate::proportion(returned, trials))
}

/// Lumped chain of a finite space with cells numbered from the start
/// (index 0); each row lists (target, multiplicity) with the degree.
struct IndexedChain {
    rows: Vec<(u32, Vec<(usize, u32)>)>,
}

impl IndexedChain {
    fn build(space: &Space, start: &Cell) -> Result<Self> {
        let mut index: FxHashMap<Cell, usize> = FxHashMap::default();
        let mut cells = vec![start.clone()];
        index.insert(start.clone(), 0);
        let mut rows = Vec::new();
        let mut buf = Vec::with_capacity(8);
        let mut k = 0;
        while k < cells.len() {
            let cell = cells[k].clone();
            space.transitions(&cell, &mut buf)?;
            let mut row = Vec::with_capacity(buf.len());
            for (target, count) in buf.drain(..) {
                let next = cells.len();
                let j = *index.entry(target.clone()).or_insert_with(|| {
                    cells.push(target);
                    next
                });
                row.push((j, count));
            }
            rows.push((space.degree(&cell)? as u32, row));
            k += 1;
        }
        Ok(IndexedChain { rows })
    }

    fn step_dense(&self, mu: &[f64], out: &mut [f64]) {
        out.fill(0.0);
        for (i, (deg, row)) in self.rows.iter().enumerate() {
            if mu[i] == 0.0 {
                continue;
            }
            let share = mu[i] / *deg as f64;
            for &(j, count) in row {
                out[j] += share * count as f64;
            }
        }
    }

    fn sample<R: Rng + ?Sized>(&self, i: usize, rng: &mut R) -> usize {
        let (deg, row) = &self.rows[i];
        let mut pick = rng.random_range(0..*deg);
        for &(j, count) in row {
            if pick < count {
                return j;
            }
            pick -= count;
        }
        unreachable!("transition counts sum to the degree")
    }
}
