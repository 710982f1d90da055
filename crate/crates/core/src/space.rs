//! Exact lumping of simple random walk along equitable partitions.
//!
//! A partition of the vertices into cells is equitable when every vertex of
//! a cell has the same number of neighbours in every other cell. Measures
//! whose per-vertex density is constant on each cell then stay that way
//! under the walk, so distributions, Q-measures and evolving-set levels can
//! be propagated on cells (storing total mass per cell) with no loss of
//! exactness. Every vertex-level quantity is recovered by dividing a cell's
//! mass by its multiplicity.
//!
//! The partitions used here are orbits of the stabiliser of a start vertex
//! (spheres in regular trees, signed coordinate permutations in lattices)
//! and depth levels of the pendant trees in the tower graph. The identity
//! partition is always available.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{GraphFamily, TreePath, VertexId};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Cell {
    Vertex(VertexId),
    /// Lattice offsets from the centre up to signed coordinate permutation,
    /// stored as absolute values in descending order.
    Orbit([u64; 3]),
    /// Tree vertices at a fixed distance from the centre.
    Sphere(u32),
    /// Vertices of the pendant tree at backbone vertex `tree` at a fixed depth.
    Level {
        tree: u32,
        depth: u32,
    },
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Vertex(v) => write!(f, "{v}"),
            Cell::Orbit(o) => write!(f, "orbit({},{},{})", o[0], o[1], o[2]),
            Cell::Sphere(k) => write!(f, "sphere({k})"),
            Cell::Level { tree, depth } => write!(f, "level({tree},{depth})"),
        }
    }
}

/// Sorted, duplicate-free collection of cells.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CellSet(Vec<Cell>);

impl CellSet {
    pub fn empty() -> Self {
        CellSet(Vec::new())
    }

    pub fn single(cell: Cell) -> Self {
        CellSet(vec![cell])
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Cell> {
        self.0.iter()
    }

    pub fn contains(&self, cell: &Cell) -> bool {
        self.0.binary_search(cell).is_ok()
    }

    pub fn is_subset(&self, other: &CellSet) -> bool {
        self.0.iter().all(|c| other.contains(c))
    }
}

impl FromIterator<Cell> for CellSet {
    fn from_iter<I: IntoIterator<Item = Cell>>(iter: I) -> Self {
        let mut cells: Vec<Cell> = iter.into_iter().collect();
        cells.sort();
        cells.dedup();
        CellSet(cells)
    }
}

impl<'a> IntoIterator for &'a CellSet {
    type Item = &'a Cell;
    type IntoIter = std::slice::Iter<'a, Cell>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Quotient {
    Identity,
    LatticeOrbits { center: [i64; 3], dim: usize },
    TreeSpheres { center: TreePath },
    TowerLevels,
}

/// A graph together with an equitable partition of its vertices.
#[derive(Clone, Debug)]
pub struct Space<'g> {
    graph: &'g GraphFamily,
    quotient: Quotient,
}

fn lattice_coords(v: &VertexId) -> Option<([i64; 3], usize)> {
    match v {
        VertexId::Line(x) => Some(([*x, 0, 0], 1)),
        VertexId::Lattice2([x, y]) => Some(([*x, *y, 0], 2)),
        VertexId::Lattice3(p) => Some((*p, 3)),
        _ => None,
    }
}

fn canonical_offset(offset: [i64; 3], dim: usize) -> [u64; 3] {
    let mut abs = [0u64; 3];
    for i in 0..dim {
        abs[i] = offset[i].unsigned_abs();
    }
    abs[..dim].sort_unstable_by(|a, b| b.cmp(a));
    abs
}

fn orbit_size(abs: &[u64; 3], dim: usize) -> f64 {
    let vals = &abs[..dim];
    let factorial = |n: usize| (1..=n).product::<usize>() as f64;
    let mut perms = factorial(dim);
    let mut i = 0;
    while i < dim {
        let j = (i..dim).take_while(|&j| vals[j] == vals[i]).count();
        perms /= factorial(j);
        i += j;
    }
    let nonzero = vals.iter().filter(|&&v| v != 0).count();
    perms * (1u64 << nonzero) as f64
}

impl<'g> Space<'g> {
    /// One cell per vertex.
    pub fn identity(graph: &'g GraphFamily) -> Self {
        Space { graph, quotient: Quotient::Identity }
    }

    /// Coarsest available partition in which `x0` is a singleton cell, so
    /// point masses at `x0` (and the Q-measure of `{x0}`) are exactly
    /// representable.
    pub fn centered(graph: &'g GraphFamily, x0: &VertexId) -> Result<Self> {
        graph.validate(x0)?;
        let quotient = match (graph, x0) {
            (GraphFamily::IntegerLine | GraphFamily::Lattice2D | GraphFamily::Lattice3D, v) => {
                let (center, dim) = lattice_coords(v).expect("validated lattice vertex");
                Quotient::LatticeOrbits { center, dim }
            }
            (GraphFamily::RegularTree { .. }, VertexId::Tree(p)) => Quotient::TreeSpheres { center: p.clone() },
            (GraphFamily::PendantTower(_), VertexId::Backbone(_)) => Quotient::TowerLevels,
            _ => Quotient::Identity,
        };
        Ok(Space { graph, quotient })
    }

    pub fn graph(&self) -> &'g GraphFamily {
        self.graph
    }

    pub fn max_degree(&self) -> usize {
        self.graph.max_degree()
    }

    pub fn is_identity(&self) -> bool {
        self.quotient == Quotient::Identity
    }

    pub fn describe(&self) -> String {
        match &self.quotient {
            Quotient::Identity => "vertices".into(),
            Quotient::LatticeOrbits { dim, .. } => format!("lattice orbits (dim {dim})"),
            Quotient::TreeSpheres { center } => format!("tree spheres around {}", VertexId::Tree(center.clone())),
            Quotient::TowerLevels => "pendant tree levels".into(),
        }
    }

    pub fn cell_of(&self, v: &VertexId) -> Result<Cell> {
        self.graph.validate(v)?;
        Ok(match (&self.quotient, v) {
            (Quotient::Identity, v) => Cell::Vertex(v.clone()),
            (Quotient::LatticeOrbits { center, dim }, v) => {
                let (p, _) = lattice_coords(v).expect("validated lattice vertex");
                let offset = [p[0] - center[0], p[1] - center[1], p[2] - center[2]];
                Cell::Orbit(canonical_offset(offset, *dim))
            }
            (Quotient::TreeSpheres { center }, VertexId::Tree(p)) => Cell::Sphere(center.distance(p) as u32),
            (Quotient::TowerLevels, VertexId::Pendant { tree, .. }) => {
                Cell::Level { tree: *tree, depth: v.pendant_depth().expect("pendant vertex") }
            }
            (Quotient::TowerLevels, v) => Cell::Vertex(v.clone()),
            _ => unreachable!("quotient matches graph family"),
        })
    }

    /// Per-vertex degree, constant on every cell.
    pub fn degree(&self, cell: &Cell) -> Result<usize> {
        match cell {
            Cell::Vertex(v) => self.graph.degree(v),
            Cell::Orbit(_) | Cell::Sphere(_) => Ok(self.graph.max_degree()),
            Cell::Level { tree, depth } => {
                let s = self.graph.schedule().expect("tower graph");
                Ok(if *depth < s.height(*tree) { 3 } else { 1 })
            }
        }
    }

    /// Number of vertices in the cell.
    pub fn multiplicity(&self, cell: &Cell) -> f64 {
        match (&self.quotient, cell) {
            (Quotient::LatticeOrbits { dim, .. }, Cell::Orbit(o)) => orbit_size(o, *dim),
            (_, Cell::Sphere(0)) => 1.0,
            (_, Cell::Sphere(k)) => {
                let d = self.graph.max_degree() as f64;
                d * (d - 1.0).powi(*k as i32 - 1)
            }
            (_, Cell::Level { depth, .. }) => 2f64.powi(*depth as i32),
            _ => 1.0,
        }
    }

    /// Edges from one vertex of `cell` into each neighbouring cell, as
    /// `(cell, count)` pairs whose counts sum to the degree.
    pub fn transitions(&self, cell: &Cell, out: &mut Vec<(Cell, u32)>) -> Result<()> {
        out.clear();
        match (&self.quotient, cell) {
            (Quotient::LatticeOrbits { dim, .. }, Cell::Orbit(o)) => {
                let rep = [o[0] as i64, o[1] as i64, o[2] as i64];
                for axis in 0..*dim {
                    for delta in [-1i64, 1] {
                        let mut q = rep;
                        q[axis] += delta;
                        let c = Cell::Orbit(canonical_offset(q, *dim));
                        match out.iter_mut().find(|(x, _)| *x == c) {
                            Some((_, n)) => *n += 1,
                            None => out.push((c, 1)),
                        }
                    }
                }
            }
            (Quotient::TreeSpheres { .. }, Cell::Sphere(k)) => {
                let d = self.graph.max_degree() as u32;
                if *k == 0 {
                    out.push((Cell::Sphere(1), d));
                } else {
                    out.push((Cell::Sphere(k - 1), 1));
                    out.push((Cell::Sphere(k + 1), d - 1));
                }
            }
            (Quotient::TowerLevels, Cell::Level { tree, depth }) => {
                let h = self.graph.schedule().expect("tower graph").height(*tree);
                if *depth == 0 {
                    out.push((Cell::Vertex(VertexId::Backbone(*tree)), 1));
                } else {
                    out.push((Cell::Level { tree: *tree, depth: depth - 1 }, 1));
                }
                if *depth < h {
                    out.push((Cell::Level { tree: *tree, depth: depth + 1 }, 2));
                }
            }
            (_, Cell::Vertex(v)) => {
                for u in self.graph.neighbors(v)? {
                    out.push((self.cell_of(&u)?, 1));
                }
            }
            _ => return Err(Error::InvalidArgument(format!("cell {cell} does not belong to {}", self.describe()))),
        }
        Ok(())
    }

    /// Vertices of a cell, in canonical order.
    pub fn members(&self, cell: &Cell, cap: usize) -> Result<Vec<VertexId>> {
        if self.multiplicity(cell) > cap as f64 {
            return Err(Error::BallCap { cap });
        }
        Ok(match (&self.quotient, cell) {
            (_, Cell::Vertex(v)) => vec![v.clone()],
            (Quotient::LatticeOrbits { center, dim }, Cell::Orbit(o)) => {
                let mut out = BTreeSet::new();
                let perms: &[[usize; 3]] = match dim {
                    1 => &[[0, 1, 2]],
                    2 => &[[0, 1, 2], [1, 0, 2]],
                    _ => &[[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]],
                };
                for perm in perms {
                    for signs in 0..(1u32 << dim) {
                        let mut p = [0i64; 3];
                        for i in 0..*dim {
                            let sign = if signs >> i & 1 == 1 { -1 } else { 1 };
                            p[i] = center[i] + sign * o[perm[i]] as i64;
                        }
                        out.insert(match dim {
                            1 => VertexId::Line(p[0]),
                            2 => VertexId::Lattice2([p[0], p[1]]),
                            _ => VertexId::Lattice3(p),
                        });
                    }
                }
                out.into_iter().collect()
            }
            (Quotient::TreeSpheres { center }, Cell::Sphere(k)) => {
                self.graph.sphere(&VertexId::Tree(center.clone()), *k as usize, cap)?.into_iter().collect()
            }
            (Quotient::TowerLevels, Cell::Level { tree, depth }) => {
                let lo = 1u64 << depth;
                (lo..2 * lo).map(|heap| VertexId::Pendant { tree: *tree, heap }).collect()
            }
            _ => return Err(Error::InvalidArgument(format!("cell {cell} does not belong to {}", self.describe()))),
        })
    }

    pub fn is_singleton(&self, cell: &Cell) -> bool {
        self.multiplicity(cell) == 1.0
    }

    /// π(cell) = multiplicity × degree.
    pub fn pi(&self, cell: &Cell) -> Result<f64> {
        Ok(self.multiplicity(cell) * self.degree(cell)? as f64)
    }

    pub fn pi_of_set(&self, set: &CellSet) -> Result<f64> {
        set.iter().try_fold(0.0, |acc, c| Ok(acc + self.pi(c)?))
    }

    pub fn vertex_count(&self, set: &CellSet) -> f64 {
        set.iter().fold(0.0, |acc, c| acc + self.multiplicity(c))
    }

    /// Cells of a vertex set; fails unless the set is a union of whole cells.
    pub fn cells_of(&self, vertices: &BTreeSet<VertexId>) -> Result<CellSet> {
        let mut counts: BTreeMap<Cell, f64> = BTreeMap::new();
        for v in vertices {
            *counts.entry(self.cell_of(v)?).or_default() += 1.0;
        }
        for (cell, n) in &counts {
            if *n != self.multiplicity(cell) {
                return Err(Error::InvalidArgument(format!(
                    "vertex set covers {n} of {} vertices of {cell}; it is not a union of cells of {}",
                    self.multiplicity(cell),
                    self.describe()
                )));
            }
        }
        Ok(counts.into_keys().collect())
    }

    pub fn vertices_of(&self, set: &CellSet, cap: usize) -> Result<BTreeSet<VertexId>> {
        let mut out = BTreeSet::new();
        for c in set {
            out.extend(self.members(c, cap)?);
            if out.len() > cap {
                return Err(Error::BallCap { cap });
            }
        }
        Ok(out)
    }
}
