use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::path::Path;
use std::sync::Arc;

use super::VertexId;
use crate::error::{Error, Result};

/// Finite simple connected graph given by an edge list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExplicitGraph {
    adjacency: BTreeMap<Arc<str>, Vec<VertexId>>,
    max_degree: usize,
}

impl ExplicitGraph {
    pub fn from_edges<I, S>(edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, S)>,
        S: AsRef<str>,
    {
        let mut sets: BTreeMap<Arc<str>, BTreeSet<Arc<str>>> = BTreeMap::new();
        for (u, v) in edges {
            let (u, v) = (u.as_ref(), v.as_ref());
            for label in [u, v] {
                if label.is_empty() || label.chars().any(char::is_whitespace) {
                    return Err(Error::InvalidArgument(format!("bad vertex label `{label}`")));
                }
            }
            if u == v {
                return Err(Error::InvalidArgument(format!("self-loop at `{u}`")));
            }
            let (ua, va): (Arc<str>, Arc<str>) = (Arc::from(u), Arc::from(v));
            if !sets.entry(ua.clone()).or_default().insert(va.clone()) {
                return Err(Error::InvalidArgument(format!("duplicate edge `{u} {v}`")));
            }
            sets.entry(va).or_default().insert(ua);
        }
        if sets.is_empty() {
            return Err(Error::InvalidArgument("edge list is empty".into()));
        }
        let adjacency: BTreeMap<Arc<str>, Vec<VertexId>> =
            sets.into_iter().map(|(k, ns)| (k, ns.into_iter().map(VertexId::Explicit).collect())).collect();
        let max_degree = adjacency.values().map(Vec::len).max().unwrap_or(0);
        let graph = ExplicitGraph { adjacency, max_degree };
        graph.check_connected()?;
        Ok(graph)
    }

    /// One `u v` pair per line; blank lines and `#` comments are skipped.
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut edges = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            match (parts.next(), parts.next(), parts.next()) {
                (Some(u), Some(v), None) => edges.push((u.to_string(), v.to_string())),
                _ => {
                    return Err(Error::InvalidArgument(format!(
                        "edge list line {}: expected `u v`, got `{line}`",
                        lineno + 1
                    )))
                }
            }
        }
        Self::from_edges(edges)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse_edge_list(&std::fs::read_to_string(path)?)
    }

    pub fn neighbors(&self, label: &str) -> Option<&[VertexId]> {
        self.adjacency.get(label).map(Vec::as_slice)
    }

    pub fn contains(&self, label: &str) -> bool {
        self.adjacency.contains_key(label)
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.adjacency.keys().cloned().map(VertexId::Explicit)
    }

    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for (u, ns) in &self.adjacency {
            for v in ns {
                if let VertexId::Explicit(v) = v {
                    if u < v {
                        out.push_str(&format!("{u} {v}\n"));
                    }
                }
            }
        }
        out
    }

    fn check_connected(&self) -> Result<()> {
        let start = self.adjacency.keys().next().expect("nonempty");
        let mut seen: BTreeSet<&str> = BTreeSet::from([start.as_ref()]);
        let mut queue = VecDeque::from([start.as_ref()]);
        while let Some(u) = queue.pop_front() {
            for v in &self.adjacency[u] {
                if let VertexId::Explicit(v) = v {
                    if seen.insert(v.as_ref()) {
                        queue.push_back(v.as_ref());
                    }
                }
            }
        }
        if seen.len() != self.adjacency.len() {
            return Err(Error::InvalidArgument("graph is not connected".into()));
        }
        Ok(())
    }
}
