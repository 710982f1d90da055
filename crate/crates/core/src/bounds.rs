//! Executable inequalities, each producing a [`BoundReport`].
//!
//! Checks whose hypothesis is the linear entropy condition take an
//! [`EntropyConstant`] certificate instead of a bare constant, and refuse to
//! run when the certificate does not cover the horizon they need.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::evolving::{gap_length, EvolvingSetProcess};
use crate::graph::{GraphFamily, VertexId};
use crate::space::CellSet;
use crate::walk::ExactWalk;

pub use crate::report::{BoundReport, Direction};

/// Which starting vertices a certificate speaks for.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StartPolicy {
    /// Only the listed starts were checked.
    Fixed(Vec<VertexId>),
    /// One start was checked on a vertex-transitive graph, so every start has
    /// the same entropy series.
    VertexTransitive(VertexId),
}

/// A recorded verification that `E_n ≥ c·n` for every `n` in `n_lo..=n_hi`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntropyConstant {
    pub c: f64,
    pub n_lo: usize,
    pub n_hi: usize,
    pub graph: String,
    pub starts: StartPolicy,
    /// min over the checked (start, n) of `E_n − c·n`.
    pub min_slack: f64,
}

impl EntropyConstant {
    pub fn covers_start(&self, x: &VertexId) -> bool {
        match &self.starts {
            StartPolicy::VertexTransitive(_) => true,
            StartPolicy::Fixed(xs) => xs.contains(x),
        }
    }

    pub fn covers_n(&self, n: usize) -> bool {
        (self.n_lo..=self.n_hi).contains(&n)
    }

    /// Errors unless the certificate is for `g` and covers `n` from every start in `starts`.
    pub fn require<'a>(&self, g: &GraphFamily, n: usize, starts: impl IntoIterator<Item = &'a VertexId>) -> Result<()> {
        let graph = g.to_string();
        if graph != self.graph {
            return Err(Error::Uncertified(format!(
                "certificate is for graph {} but the check runs on {graph}; run entropy certification on {graph}",
                self.graph
            )));
        }
        if !self.covers_n(n) {
            return Err(Error::Uncertified(format!(
                "certificate covers n in [{}, {}] but the check needs n = {n}; rerun entropy certification over a range containing {n}",
                self.n_lo, self.n_hi
            )));
        }
        for x in starts {
            if !self.covers_start(x) {
                return Err(Error::Uncertified(format!(
                    "certificate does not cover start {x}; include it in the certified starts"
                )));
            }
        }
        Ok(())
    }
}

/// Verifies `E_n ≥ c·n` exactly for each start and each `n` in `n_lo..=n_hi`.
pub fn certify_entropy_constant(
    g: &GraphFamily,
    starts: &[VertexId],
    n_lo: usize,
    n_hi: usize,
    c: f64,
) -> Result<EntropyConstant> {
    if n_lo > n_hi || starts.is_empty() {
        return Err(Error::InvalidArgument(
            "an entropy certificate needs a nonempty range and at least one start".into(),
        ));
    }
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::InvalidArgument(format!("entropy constant must be positive, got {c}")));
    }
    let mut violations = Vec::new();
    let mut min_slack = f64::INFINITY;
    for x0 in starts {
        let series = ExactWalk::centered(g, x0)?.entropy_series(x0, n_hi)?;
        for n in n_lo..=n_hi {
            let e = series.entropy(n).expect("series covers n_hi");
            let slack = e - c * n as f64;
            min_slack = min_slack.min(slack);
            if slack < 0.0 {
                violations.push((x0.to_string(), n));
            }
        }
    }
    if !violations.is_empty() {
        return Err(Error::CertificationFailed { violations });
    }
    let starts = if g.is_vertex_transitive() {
        StartPolicy::VertexTransitive(starts[0].clone())
    } else {
        StartPolicy::Fixed(starts.to_vec())
    };
    Ok(EntropyConstant { c, n_lo, n_hi, graph: g.to_string(), starts, min_slack })
}

fn check_set(a: &BTreeSet<VertexId>) -> Result<()> {
    if a.is_empty() {
        return Err(Error::InvalidArgument("the set A must be nonempty".into()));
    }
    Ok(())
}

fn set_label(a: &BTreeSet<VertexId>) -> String {
    if a.len() <= 8 {
        let items: Vec<String> = a.iter().map(ToString::to_string).collect();
        format!("{{{}}}", items.join(" "))
    } else {
        format!("<{} vertices>", a.len())
    }
}

/// `(C n − ln(2|A|)) / (n ln d)`.
pub fn escape_lower_bound(c: f64, n: usize, set_size: usize, max_degree: usize) -> f64 {
    (c * n as f64 - (2.0 * set_size as f64).ln()) / (n as f64 * (max_degree as f64).ln())
}

/// p^n(x0, Aᶜ) against `(C n − ln(2|A|))/(n ln d)`.
///
/// The sharper intermediate bound `(C n − ln|A| − ln 2)/(ln|Aᶜ| − ln|A|)`,
/// with `|Aᶜ|` the number of reachable vertices outside A, is attached as the
/// `sharp_rhs` extra when its denominator is positive.
pub fn check_escape_bound(
    g: &GraphFamily,
    x0: &VertexId,
    n: usize,
    a: &BTreeSet<VertexId>,
    cert: &EntropyConstant,
) -> Result<BoundReport> {
    check_set(a)?;
    if n == 0 {
        return Err(Error::InvalidArgument("escape bound needs n >= 1".into()));
    }
    cert.require(g, n, [x0])?;
    let walk = ExactWalk::centered(g, x0)?;
    let mu = walk.distribution(x0, n)?;
    let split = walk.split_on(&mu, a)?;
    let lhs = split.outside_mass.min(1.0);
    let rhs = escape_lower_bound(cert.c, n, a.len(), g.max_degree());
    let outside_count = split.outside_support;
    let mut report = BoundReport::new("escape_bound", lhs, rhs, Direction::AtLeast, 1e-12)
        .input("graph", g)
        .input("x0", x0)
        .input("n", n)
        .input("A", set_label(a))
        .input("A_size", a.len())
        .input("c", cert.c)
        .provenance("escape probability from a set under linear entropy growth")
        .vacuous(rhs <= 0.0);
    let denom = outside_count.ln() - (a.len() as f64).ln();
    if denom > 0.0 {
        report = report.extra("sharp_rhs", (cert.c * n as f64 - (a.len() as f64).ln() - 2f64.ln()) / denom);
    }
    Ok(report)
}

/// Σ_{x∈S} π(x) p^n(x, A), one exact propagation per start.
fn q_mass_on(g: &GraphFamily, s: &BTreeSet<VertexId>, n: usize, a: &BTreeSet<VertexId>) -> Result<f64> {
    let mut total = 0.0;
    for x in s {
        let walk = ExactWalk::centered(g, x)?;
        let mu = walk.distribution(x, n)?;
        total += g.degree(x)? as f64 * walk.mass_on(&mu, a)?;
    }
    Ok(total)
}

/// Q_n(S, Aᶜ) against `π(S)(C n − ln(2|A|))/(n ln d)`.
///
/// The stated form puts A itself on the left; the averaged escape bound
/// controls the mass outside A. The report's lhs is the complement mass;
/// the literal reading Q_n(S, A) is attached as `literal_lhs` with its
/// margin as `literal_margin`.
pub fn check_q_escape_bound(
    g: &GraphFamily,
    s: &BTreeSet<VertexId>,
    n: usize,
    a: &BTreeSet<VertexId>,
    cert: &EntropyConstant,
) -> Result<BoundReport> {
    check_set(a)?;
    if s.is_empty() {
        return Err(Error::InvalidArgument("the set S must be nonempty".into()));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("escape bound needs n >= 1".into()));
    }
    cert.require(g, n, s)?;
    let pi_s: f64 = s.iter().map(|x| g.degree(x).map(|d| d as f64)).sum::<Result<f64>>()?;
    let inside = q_mass_on(g, s, n, a)?;
    let lhs = (pi_s - inside).max(0.0);
    let rhs = pi_s * escape_lower_bound(cert.c, n, a.len(), g.max_degree());
    Ok(BoundReport::new("q_escape_bound", lhs, rhs, Direction::AtLeast, 1e-12 * pi_s)
        .input("graph", g)
        .input("S", set_label(s))
        .input("n", n)
        .input("A", set_label(a))
        .input("A_size", a.len())
        .input("c", cert.c)
        .provenance("Q-mass escaping A, averaged over S; literal reading attached")
        .vacuous(rhs <= 0.0)
        .extra("pi_S", pi_s)
        .extra("literal_lhs", inside)
        .extra("literal_margin", inside - rhs))
}

fn xlogx(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// `E_n ≤ h(q) + (1 − q) ln|A| + q ln|Aᶜ|`, with q = p^n(x0, Aᶜ) and
/// `|Aᶜ|` the number of reachable vertices outside A.
pub fn check_entropy_decomposition(
    g: &GraphFamily,
    x0: &VertexId,
    n: usize,
    a: &BTreeSet<VertexId>,
) -> Result<BoundReport> {
    check_set(a)?;
    let walk = ExactWalk::centered(g, x0)?;
    let mu = walk.distribution(x0, n)?;
    let lhs = walk.entropy(&mu)?;
    let split = walk.split_on(&mu, a)?;
    let q = split.outside_mass.min(1.0);
    let outside = split.outside_support;
    let binary = -xlogx(1.0 - q) - xlogx(q);
    let outside_term = if q > 0.0 { q * outside.ln() } else { 0.0 };
    let rhs = binary + (1.0 - q) * (a.len() as f64).ln() + outside_term;
    Ok(BoundReport::new("entropy_decomposition", lhs, rhs, Direction::AtMost, 1e-12)
        .input("graph", g)
        .input("x0", x0)
        .input("n", n)
        .input("A", set_label(a))
        .input("A_size", a.len())
        .provenance("entropy split between A and its complement")
        .extra("q", q)
        .extra("outside_support", outside))
}

/// `4√x ≥ ⌈ln(8x)⌉` at each grid point.
pub fn check_ceil_log_inequality(xs: &[f64]) -> Result<Vec<BoundReport>> {
    xs.iter()
        .map(|&x| {
            if !(x >= 1.0 && x.is_finite()) {
                return Err(Error::InvalidArgument(format!("ceil-log inequality needs x >= 1, got {x}")));
            }
            Ok(BoundReport::new("ceil_log", 4.0 * x.sqrt(), (8.0 * x).ln().ceil(), Direction::AtLeast, 0.0)
                .input("x", x)
                .provenance("4 sqrt(x) >= ceil(ln 8x) for x >= 1"))
        })
        .collect()
}

/// `count` log-spaced points from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let (a, b) = (lo.ln(), hi.ln());
            (0..count)
                .map(|i| if i == count - 1 { hi } else { (a + (b - a) * i as f64 / (count - 1) as f64).exp().max(lo) })
                .collect()
        }
    }
}

/// `E√R ≤ 1 − E[R·1(R ≥ 4)]/8` for a finite distribution `(value, probability)`
/// with `E R = 1`.
pub fn check_rootdecay(dist: &[(f64, f64)]) -> Result<BoundReport> {
    if dist.is_empty() {
        return Err(Error::InvalidArgument("distribution is empty".into()));
    }
    let mut total = 0.0;
    let mut mean = 0.0;
    for &(r, p) in dist {
        if !(r >= 0.0 && p >= 0.0 && r.is_finite() && p.is_finite()) {
            return Err(Error::InvalidArgument(format!("invalid atom ({r}, {p})")));
        }
        total += p;
        mean += p * r;
    }
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::NotNormalized { mass: total });
    }
    if (mean - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidArgument(format!("root decay needs E R = 1, got {mean}")));
    }
    let lhs: f64 = dist.iter().map(|&(r, p)| p * r.sqrt()).sum();
    let tail: f64 = dist.iter().filter(|&&(r, _)| r >= 4.0).map(|&(r, p)| p * r).sum();
    let rhs = 1.0 - tail / 8.0;
    Ok(BoundReport::new("root_decay", lhs, rhs, Direction::AtMost, 1e-12)
        .input("atoms", dist.len())
        .provenance("concavity bound for E sqrt(R) with E R = 1")
        .extra("tail", tail))
}

/// Exact `E[√π(S̃) | S] ≤ α √π(S)` for one superstep from `set`.
pub fn check_conddecay(process: &EvolvingSetProcess, set: &CellSet, cert: &EntropyConstant) -> Result<BoundReport> {
    let space = process.space();
    let g = space.graph();
    if (cert.c - process.c()).abs() > 0.0 {
        return Err(Error::Uncertified(format!(
            "process uses C = {} but the certificate is for C = {}",
            process.c(),
            cert.c
        )));
    }
    let pi_s = process.pi_mass(set)?;
    let gap = gap_length(pi_s, cert.c)?;
    match &cert.starts {
        StartPolicy::VertexTransitive(_) => cert.require(g, gap, [])?,
        StartPolicy::Fixed(_) => {
            let members = space.vertices_of(set, usize::MAX)?;
            cert.require(g, gap, &members)?
        }
    }
    let levels = process.levels(set, gap)?;
    let lhs = levels.expected(f64::sqrt);
    let alpha = process.alpha();
    let rhs = alpha * pi_s.sqrt();
    Ok(BoundReport::new("cond_decay", lhs, rhs, Direction::AtMost, 1e-10)
        .input("graph", g)
        .input("set_size", space.vertex_count(set))
        .input("pi_S", pi_s)
        .input("L", gap)
        .input("c", cert.c)
        .provenance("one-superstep contraction of E sqrt(pi) with alpha = 1 - C/(16 ln d)")
        .extra("alpha", alpha)
        .extra("levels", levels.levels.len() as f64)
        .extra("p_grow4", levels.prob_mass_at_least(4.0 * pi_s))
        .extra("ratio", lhs / pi_s.sqrt()))
}

fn require_initial(process: &EvolvingSetProcess, x0: &VertexId, cert: &EntropyConstant) -> Result<usize> {
    let g = process.space().graph();
    let gap = gap_length(g.degree(x0)? as f64, cert.c)?;
    cert.require(g, gap, [x0])?;
    if cert.c != process.c() {
        return Err(Error::Uncertified(format!(
            "process uses C = {} but the certificate is for C = {}",
            process.c(),
            cert.c
        )));
    }
    Ok(gap)
}

/// Monte Carlo `E√π(S_{T_m}) ≤ α^m π(x0)` for m = 0..=m_max; a level passes
/// when `mean − 4·stderr ≤ α^m π(x0)`. The stronger `α^m √π(x0)` is attached
/// as `strong_rhs`.
pub fn check_maincor(
    process: &EvolvingSetProcess,
    x0: &VertexId,
    cert: &EntropyConstant,
    m_max: usize,
    trials: usize,
    seed: u64,
) -> Result<Vec<BoundReport>> {
    let first_gap = require_initial(process, x0, cert)?;
    let profile = process.decay_profile(x0, m_max, trials, seed)?;
    let g = process.space().graph();
    Ok(profile
        .points
        .iter()
        .map(|p| {
            let lhs = p.estimate.mean - 4.0 * p.estimate.stderr;
            BoundReport::new("main_cor", lhs, p.bound, Direction::AtMost, 0.0)
                .input("graph", g)
                .input("x0", x0)
                .input("m", p.m)
                .input("c", cert.c)
                .input("trials", trials)
                .input("seed", seed)
                .input("first_L", first_gap)
                .provenance("geometric decay of E sqrt(pi(S_Tm)); lhs is mean - 4 stderr")
                .extra("mean", p.estimate.mean)
                .extra("stderr", p.estimate.stderr)
                .extra("strong_rhs", profile.alpha.powi(p.m as i32) * profile.pi_x0.sqrt())
        })
        .collect())
}

/// `Σ_{t≤T} p^t(x0, y) ≤ 8d⌈1/C⌉ Σ_{i≤I} (E√π(S_{T_i}) + 4·stderr)`.
///
/// Both sides are truncations: the left side only grows with T and the
/// right side only grows with I, so a failure is indicative rather than a
/// refutation.
#[allow(clippy::too_many_arguments)]
pub fn check_transience_sum(
    process: &EvolvingSetProcess,
    x0: &VertexId,
    y: &VertexId,
    cert: &EntropyConstant,
    horizon: usize,
    supersteps: usize,
    trials: usize,
    seed: u64,
) -> Result<BoundReport> {
    require_initial(process, x0, cert)?;
    let g = process.space().graph();
    let lhs = ExactWalk::centered(g, x0)?.green_series(x0, y, horizon)?.last();
    let profile = process.decay_profile(x0, supersteps, trials, seed)?;
    let prefactor = transience_prefactor(g.max_degree(), cert.c);
    let sum: f64 = profile.points.iter().map(|p| p.estimate.mean + 4.0 * p.estimate.stderr).sum();
    Ok(BoundReport::new("transience_sum", lhs, prefactor * sum, Direction::AtMost, 0.0)
        .input("graph", g)
        .input("x0", x0)
        .input("y", y)
        .input("T", horizon)
        .input("I", supersteps)
        .input("c", cert.c)
        .input("trials", trials)
        .input("seed", seed)
        .provenance("Green partial sum against the evolving-set series; both sides truncated")
        .extra("prefactor", prefactor)
        .extra("series", sum))
}

/// `8 d ⌈1/C⌉`.
pub fn transience_prefactor(max_degree: usize, c: f64) -> f64 {
    8.0 * max_degree as f64 * (1.0 / c).ceil()
}
