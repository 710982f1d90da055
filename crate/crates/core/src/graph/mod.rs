//! Bounded-degree graph families.
//!
//! Infinite families are never enumerated; they answer local adjacency
//! queries only. Finite families (cycles, explicit edge lists and the
//! truncated pendant-tower graph) use the same interface.

mod explicit;
mod tower;
mod vertex;

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

pub use explicit::ExplicitGraph;
pub use tower::{tower, TowerSchedule, MAX_TREE_HEIGHT};
pub use vertex::{TreePath, VertexId};

use crate::error::{Error, Result};

/// Largest tree degree whose child digits fit in one hex character.
pub const MAX_TREE_DEGREE: u8 = 16;

/// Default vertex cap for [`GraphFamily::ball`].
pub const DEFAULT_BALL_CAP: usize = 5_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphFamily {
    /// ℤ
    IntegerLine,
    /// ℤ⁺ = {1, 2, ...}
    HalfLine,
    Lattice2D,
    Lattice3D,
    RegularTree {
        degree: u8,
    },
    Cycle {
        len: u32,
    },
    FiniteExplicit(Arc<ExplicitGraph>),
    /// Backbone ℤ⁺ truncated at `n_max`, with a full binary tree hanging from
    /// every backbone vertex.
    PendantTower(TowerSchedule),
}

impl GraphFamily {
    pub fn regular_tree(degree: u8) -> Result<Self> {
        if !(3..=MAX_TREE_DEGREE).contains(&degree) {
            return Err(Error::InvalidArgument(format!(
                "regular tree degree must be in [3, {MAX_TREE_DEGREE}], got {degree}"
            )));
        }
        Ok(GraphFamily::RegularTree { degree })
    }

    pub fn cycle(len: u32) -> Result<Self> {
        if len < 3 {
            return Err(Error::InvalidArgument(format!("cycle length must be >= 3, got {len}")));
        }
        Ok(GraphFamily::Cycle { len })
    }

    pub fn pendant_tower(h_max: u32, n_max: u32) -> Result<Self> {
        Ok(GraphFamily::PendantTower(TowerSchedule::new(h_max, n_max)?))
    }

    pub fn explicit(graph: ExplicitGraph) -> Self {
        GraphFamily::FiniteExplicit(Arc::new(graph))
    }

    /// Conventional start vertex of the family.
    pub fn origin(&self) -> VertexId {
        match self {
            GraphFamily::IntegerLine => VertexId::Line(0),
            GraphFamily::HalfLine => VertexId::HalfLine(1),
            GraphFamily::Lattice2D => VertexId::Lattice2([0, 0]),
            GraphFamily::Lattice3D => VertexId::Lattice3([0, 0, 0]),
            GraphFamily::RegularTree { degree } => VertexId::Tree(TreePath::root(*degree)),
            GraphFamily::Cycle { .. } => VertexId::Cycle(0),
            GraphFamily::FiniteExplicit(g) => g.vertices().next().expect("nonempty graph"),
            GraphFamily::PendantTower(_) => VertexId::Backbone(1),
        }
    }

    pub fn max_degree(&self) -> usize {
        match self {
            GraphFamily::IntegerLine | GraphFamily::HalfLine | GraphFamily::Cycle { .. } => 2,
            GraphFamily::Lattice2D => 4,
            GraphFamily::Lattice3D => 6,
            GraphFamily::RegularTree { degree } => *degree as usize,
            GraphFamily::FiniteExplicit(g) => g.max_degree(),
            GraphFamily::PendantTower(_) => 3,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, GraphFamily::Cycle { .. } | GraphFamily::FiniteExplicit(_) | GraphFamily::PendantTower(_))
    }

    pub fn vertex_count(&self) -> Option<u128> {
        match self {
            GraphFamily::Cycle { len } => Some(*len as u128),
            GraphFamily::FiniteExplicit(g) => Some(g.vertex_count() as u128),
            GraphFamily::PendantTower(s) => Some(s.vertex_count()),
            _ => None,
        }
    }

    /// Every vertex looks the same, so per-start quantities do not depend on
    /// the start.
    pub fn is_vertex_transitive(&self) -> bool {
        matches!(
            self,
            GraphFamily::IntegerLine
                | GraphFamily::Lattice2D
                | GraphFamily::Lattice3D
                | GraphFamily::RegularTree { .. }
                | GraphFamily::Cycle { .. }
        )
    }

    pub fn schedule(&self) -> Option<&TowerSchedule> {
        match self {
            GraphFamily::PendantTower(s) => Some(s),
            _ => None,
        }
    }

    fn invalid(&self, v: &VertexId) -> Error {
        Error::InvalidVertex { label: v.to_string(), family: self.to_string() }
    }

    pub fn contains(&self, v: &VertexId) -> bool {
        match (self, v) {
            (GraphFamily::IntegerLine, VertexId::Line(_)) => true,
            (GraphFamily::HalfLine, VertexId::HalfLine(n)) => *n >= 1,
            (GraphFamily::Lattice2D, VertexId::Lattice2(_)) => true,
            (GraphFamily::Lattice3D, VertexId::Lattice3(_)) => true,
            (GraphFamily::RegularTree { degree }, VertexId::Tree(p)) => {
                p.degree == *degree
                    && p.digits.iter().enumerate().all(|(i, &d)| if i == 0 { d < *degree } else { d < *degree - 1 })
            }
            (GraphFamily::Cycle { len }, VertexId::Cycle(i)) => i < len,
            (GraphFamily::FiniteExplicit(g), VertexId::Explicit(s)) => g.contains(s),
            (GraphFamily::PendantTower(s), VertexId::Backbone(n)) => (1..=s.n_max).contains(n),
            (GraphFamily::PendantTower(s), VertexId::Pendant { tree, heap }) => {
                (1..=s.n_max).contains(tree) && *heap >= 1 && 63 - heap.leading_zeros() <= s.height(*tree)
            }
            _ => false,
        }
    }

    pub fn validate(&self, v: &VertexId) -> Result<()> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(self.invalid(v))
        }
    }

    /// Adjacent vertices in canonical order.
    pub fn neighbors(&self, v: &VertexId) -> Result<Vec<VertexId>> {
        self.validate(v)?;
        let mut out = match (self, v) {
            (GraphFamily::IntegerLine, VertexId::Line(i)) => {
                vec![VertexId::Line(i - 1), VertexId::Line(i + 1)]
            }
            (GraphFamily::HalfLine, VertexId::HalfLine(n)) => {
                let mut out = Vec::with_capacity(2);
                if *n > 1 {
                    out.push(VertexId::HalfLine(n - 1));
                }
                out.push(VertexId::HalfLine(n + 1));
                out
            }
            (GraphFamily::Lattice2D, VertexId::Lattice2([x, y])) => vec![
                VertexId::Lattice2([x - 1, *y]),
                VertexId::Lattice2([*x, y - 1]),
                VertexId::Lattice2([*x, y + 1]),
                VertexId::Lattice2([x + 1, *y]),
            ],
            (GraphFamily::Lattice3D, VertexId::Lattice3(p)) => {
                let mut out = Vec::with_capacity(6);
                for axis in 0..3 {
                    for delta in [-1, 1] {
                        let mut q = *p;
                        q[axis] += delta;
                        out.push(VertexId::Lattice3(q));
                    }
                }
                out
            }
            (GraphFamily::RegularTree { degree }, VertexId::Tree(p)) => {
                let mut out = Vec::with_capacity(*degree as usize);
                if let Some(parent) = p.parent() {
                    out.push(VertexId::Tree(parent));
                }
                let children = if p.depth() == 0 { *degree } else { *degree - 1 };
                out.extend((0..children).map(|c| VertexId::Tree(p.child(c))));
                out
            }
            (GraphFamily::Cycle { len }, VertexId::Cycle(i)) => {
                vec![VertexId::Cycle((i + len - 1) % len), VertexId::Cycle((i + 1) % len)]
            }
            (GraphFamily::FiniteExplicit(g), VertexId::Explicit(s)) => {
                g.neighbors(s).map(<[VertexId]>::to_vec).unwrap_or_default()
            }
            (GraphFamily::PendantTower(s), VertexId::Backbone(n)) => {
                let mut out = Vec::with_capacity(3);
                if *n > 1 {
                    out.push(VertexId::Backbone(n - 1));
                }
                if *n < s.n_max {
                    out.push(VertexId::Backbone(n + 1));
                }
                out.push(VertexId::Pendant { tree: *n, heap: 1 });
                out
            }
            (GraphFamily::PendantTower(s), VertexId::Pendant { tree, heap }) => {
                let mut out = Vec::with_capacity(3);
                if *heap == 1 {
                    out.push(VertexId::Backbone(*tree));
                } else {
                    out.push(VertexId::Pendant { tree: *tree, heap: heap / 2 });
                }
                if 63 - heap.leading_zeros() < s.height(*tree) {
                    out.push(VertexId::Pendant { tree: *tree, heap: 2 * heap });
                    out.push(VertexId::Pendant { tree: *tree, heap: 2 * heap + 1 });
                }
                out
            }
            _ => unreachable!("validated above"),
        };
        out.sort();
        Ok(out)
    }

    pub fn degree(&self, v: &VertexId) -> Result<usize> {
        self.validate(v)?;
        Ok(match (self, v) {
            (GraphFamily::IntegerLine, _) | (GraphFamily::Cycle { .. }, _) => 2,
            (GraphFamily::HalfLine, VertexId::HalfLine(n)) => {
                if *n == 1 {
                    1
                } else {
                    2
                }
            }
            (GraphFamily::Lattice2D, _) => 4,
            (GraphFamily::Lattice3D, _) => 6,
            (GraphFamily::RegularTree { degree }, _) => *degree as usize,
            _ => self.neighbors(v)?.len(),
        })
    }

    /// Closed ball by breadth-first expansion.
    pub fn ball(&self, center: &VertexId, radius: usize, cap: usize) -> Result<BTreeSet<VertexId>> {
        self.validate(center)?;
        let mut seen = BTreeSet::from([center.clone()]);
        let mut frontier = VecDeque::from([(center.clone(), 0usize)]);
        while let Some((v, r)) = frontier.pop_front() {
            if r == radius {
                continue;
            }
            for u in self.neighbors(&v)? {
                if seen.insert(u.clone()) {
                    if seen.len() > cap {
                        return Err(Error::BallCap { cap });
                    }
                    frontier.push_back((u, r + 1));
                }
            }
        }
        Ok(seen)
    }

    /// Vertices at graph distance exactly `radius` from `center`.
    pub fn sphere(&self, center: &VertexId, radius: usize, cap: usize) -> Result<BTreeSet<VertexId>> {
        let ball = self.ball(center, radius, cap)?;
        if radius == 0 {
            return Ok(ball);
        }
        let inner = self.ball(center, radius - 1, cap)?;
        Ok(ball.difference(&inner).cloned().collect())
    }

    /// All vertices of a finite family, in canonical order.
    pub fn vertices(&self, cap: usize) -> Result<Vec<VertexId>> {
        match self {
            GraphFamily::Cycle { len } => Ok((0..*len).map(VertexId::Cycle).collect()),
            GraphFamily::FiniteExplicit(g) => Ok(g.vertices().collect()),
            GraphFamily::PendantTower(s) => {
                if s.vertex_count() > cap as u128 {
                    return Err(Error::BallCap { cap });
                }
                let mut out: Vec<VertexId> = (1..=s.n_max).map(VertexId::Backbone).collect();
                for n in 1..=s.n_max {
                    out.extend((1..=s.tree_size(n)).map(|heap| VertexId::Pendant { tree: n, heap }));
                }
                out.sort();
                Ok(out)
            }
            _ => Err(Error::InvalidArgument(format!("graph `{self}` is infinite"))),
        }
    }

    pub fn parse_vertex(&self, label: &str) -> Result<VertexId> {
        let bad = || Error::InvalidVertex { label: label.to_string(), family: self.to_string() };
        let v = match self {
            GraphFamily::FiniteExplicit(_) => VertexId::explicit(label),
            _ => {
                let (prefix, body) = label.split_once(':').ok_or_else(bad)?;
                parse_prefixed(prefix, body).ok_or_else(bad)?
            }
        };
        self.validate(&v)?;
        Ok(v)
    }
}

fn parse_ints<const N: usize>(body: &str) -> Option<[i64; N]> {
    let mut out = [0i64; N];
    let mut parts = body.split(',');
    for slot in out.iter_mut() {
        *slot = parts.next()?.trim().parse().ok()?;
    }
    parts.next().is_none().then_some(out)
}

fn parse_prefixed(prefix: &str, body: &str) -> Option<VertexId> {
    Some(match prefix {
        "z" => VertexId::Line(body.parse().ok()?),
        "zp" => VertexId::HalfLine(body.parse().ok()?),
        "z2" => VertexId::Lattice2(parse_ints::<2>(body)?),
        "z3" => VertexId::Lattice3(parse_ints::<3>(body)?),
        "c" => VertexId::Cycle(body.parse().ok()?),
        "pt" => match body.split_once('/') {
            None => VertexId::Backbone(body.parse().ok()?),
            Some((tree, bits)) => {
                if bits.len() > MAX_TREE_HEIGHT as usize {
                    return None;
                }
                let mut heap: u64 = 1;
                for b in bits.chars() {
                    heap = heap * 2
                        + match b {
                            '0' => 0,
                            '1' => 1,
                            _ => return None,
                        };
                }
                VertexId::Pendant { tree: tree.parse().ok()?, heap }
            }
        },
        p if p.starts_with('t') => {
            let degree: u8 = p[1..].parse().ok()?;
            let digits = body.chars().map(vertex::parse_hex_digit).collect::<Option<Vec<u8>>>()?;
            VertexId::Tree(TreePath { degree, digits })
        }
        _ => return None,
    })
}

impl fmt::Display for GraphFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphFamily::IntegerLine => f.write_str("z"),
            GraphFamily::HalfLine => f.write_str("zp"),
            GraphFamily::Lattice2D => f.write_str("z2"),
            GraphFamily::Lattice3D => f.write_str("z3"),
            GraphFamily::RegularTree { degree } => write!(f, "tree,d={degree}"),
            GraphFamily::Cycle { len } => write!(f, "cycle,n={len}"),
            GraphFamily::FiniteExplicit(g) => write!(f, "explicit,vertices={}", g.vertex_count()),
            GraphFamily::PendantTower(s) => write!(f, "pendant_tower,hmax={},nmax={}", s.h_max, s.n_max),
        }
    }
}

impl FromStr for GraphFamily {
    type Err = Error;

    /// Accepts `z`, `zp`, `z2`, `z3`, `tree3` / `tree,d=3`, `cycle7` /
    /// `cycle,n=7`, `pendant_tower,hmax=20,nmax=64` and
    /// `explicit,file=edges.txt`, optionally prefixed with `graph=`.
    fn from_str(spec: &str) -> Result<Self> {
        let err = |reason: &str| Error::GraphSpec { spec: spec.to_string(), reason: reason.to_string() };
        let mut tokens = spec.split(',').map(str::trim);
        let head = tokens.next().unwrap_or("");
        let name = head.strip_prefix("graph=").unwrap_or(head);
        let mut params = std::collections::BTreeMap::new();
        for tok in tokens {
            let (k, v) = tok.split_once('=').ok_or_else(|| err("parameters must be key=value"))?;
            params.insert(k.trim().to_string(), v.trim().to_string());
        }
        let int_param = |key: &str, default: Option<u64>| -> Result<u64> {
            match params.get(key) {
                Some(v) => v.parse().map_err(|_| err(&format!("`{key}` must be an integer"))),
                None => default.ok_or_else(|| err(&format!("missing `{key}`"))),
            }
        };
        let (base, suffix) = match name.find(|c: char| c.is_ascii_digit()) {
            Some(i) if name.starts_with("tree") || name.starts_with("cycle") => {
                let n: u64 = name[i..].parse().map_err(|_| err("bad numeric suffix"))?;
                (&name[..i], Some(n))
            }
            _ => (name, None),
        };
        let family = match base {
            "z" | "line" | "integer_line" => GraphFamily::IntegerLine,
            "zp" | "halfline" | "half_line" => GraphFamily::HalfLine,
            "z2" | "lattice2d" => GraphFamily::Lattice2D,
            "z3" | "lattice3d" => GraphFamily::Lattice3D,
            "tree" | "regular_tree" => {
                let d = int_param("d", suffix)?;
                GraphFamily::regular_tree(u8::try_from(d).map_err(|_| err("degree too large"))?)?
            }
            "cycle" => {
                let n = int_param("n", suffix)?;
                GraphFamily::cycle(u32::try_from(n).map_err(|_| err("cycle too long"))?)?
            }
            "pendant_tower" | "pt" => {
                let h = int_param("hmax", Some(TowerSchedule::DEFAULT_H_MAX as u64))?;
                let n = int_param("nmax", Some(TowerSchedule::DEFAULT_N_MAX as u64))?;
                GraphFamily::pendant_tower(
                    u32::try_from(h).map_err(|_| err("hmax too large"))?,
                    u32::try_from(n).map_err(|_| err("nmax too large"))?,
                )?
            }
            "explicit" => {
                let file = params.get("file").ok_or_else(|| err("missing `file`"))?;
                GraphFamily::explicit(ExplicitGraph::load(file)?)
            }
            _ => return Err(err("unknown graph family")),
        };
        Ok(family)
    }
}
