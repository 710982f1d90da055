use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

/// Path from the root of a `d`-regular tree.
///
/// The first digit picks one of the `d` root edges, every later digit one of
/// the `d - 1` child edges. The root is the empty path.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TreePath {
    pub(crate) degree: u8,
    pub(crate) digits: Vec<u8>,
}

impl TreePath {
    pub fn root(degree: u8) -> Self {
        TreePath { degree, digits: Vec::new() }
    }

    pub fn degree(&self) -> u8 {
        self.degree
    }

    pub fn depth(&self) -> usize {
        self.digits.len()
    }

    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    pub(crate) fn child(&self, digit: u8) -> Self {
        let mut digits = Vec::with_capacity(self.digits.len() + 1);
        digits.extend_from_slice(&self.digits);
        digits.push(digit);
        TreePath { degree: self.degree, digits }
    }

    pub(crate) fn parent(&self) -> Option<Self> {
        if self.digits.is_empty() {
            return None;
        }
        let digits = self.digits[..self.digits.len() - 1].to_vec();
        Some(TreePath { degree: self.degree, digits })
    }

    /// Graph distance between two vertices of the same tree.
    pub fn distance(&self, other: &TreePath) -> usize {
        let common = self.digits.iter().zip(&other.digits).take_while(|(a, b)| a == b).count();
        self.depth() + other.depth() - 2 * common
    }
}

impl Ord for TreePath {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.degree, self.digits.len(), &self.digits).cmp(&(other.degree, other.digits.len(), &other.digits))
    }
}

impl PartialOrd for TreePath {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Vertex identifier. The payload is only meaningful to the graph family that
/// produced it; every id has a canonical label (its `Display` form) and
/// round-trips through [`GraphFamily::parse_vertex`](crate::GraphFamily::parse_vertex).
///
/// Ordering is structural (numeric coordinates, then depth, then path) and is
/// a bijective image of the label, so equality, hashing and ordering agree
/// with the label.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VertexId {
    /// `z:<i>`
    Line(i64),
    /// `zp:<n>`, n >= 1
    HalfLine(u64),
    /// `z2:<x>,<y>`
    Lattice2([i64; 2]),
    /// `z3:<x>,<y>,<z>`
    Lattice3([i64; 3]),
    /// `t<d>:<hex digits>`
    Tree(TreePath),
    /// `c:<i>`
    Cycle(u32),
    /// The label itself, as read from the edge list.
    Explicit(Arc<str>),
    /// `pt:<n>`
    Backbone(u32),
    /// `pt:<n>/<bits>`; `heap` is the 1-based heap index inside the binary
    /// tree hanging from backbone vertex `tree` (root = 1).
    Pendant { tree: u32, heap: u64 },
}

impl VertexId {
    pub fn explicit(label: &str) -> Self {
        VertexId::Explicit(Arc::from(label))
    }

    /// Depth below the tree root for pendant tree vertices.
    pub fn pendant_depth(&self) -> Option<u32> {
        match self {
            VertexId::Pendant { heap, .. } => Some(63 - heap.leading_zeros()),
            _ => None,
        }
    }
}

const HEX: &[u8; 16] = b"0123456789abcdef";

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexId::Line(i) => write!(f, "z:{i}"),
            VertexId::HalfLine(n) => write!(f, "zp:{n}"),
            VertexId::Lattice2([x, y]) => write!(f, "z2:{x},{y}"),
            VertexId::Lattice3([x, y, z]) => write!(f, "z3:{x},{y},{z}"),
            VertexId::Tree(p) => {
                write!(f, "t{}:", p.degree)?;
                for &d in &p.digits {
                    write!(f, "{}", HEX[d as usize] as char)?;
                }
                Ok(())
            }
            VertexId::Cycle(i) => write!(f, "c:{i}"),
            VertexId::Explicit(s) => f.write_str(s),
            VertexId::Backbone(n) => write!(f, "pt:{n}"),
            VertexId::Pendant { tree, heap } => {
                write!(f, "pt:{tree}/")?;
                let depth = 63 - heap.leading_zeros();
                for bit in (0..depth).rev() {
                    f.write_str(if (heap >> bit) & 1 == 1 { "1" } else { "0" })?;
                }
                Ok(())
            }
        }
    }
}

pub(crate) fn parse_hex_digit(c: char) -> Option<u8> {
    c.to_digit(16).map(|d| d as u8)
}

impl serde::Serialize for VertexId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
