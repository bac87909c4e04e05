//! Undirected simple graphs, edge surgery, and the K4 / diamond scans behind
//! property P.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type VertexId = usize;

/// Unordered vertex pair, stored with the smaller id first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge(pub VertexId, pub VertexId);

impl Edge {
    pub fn new(u: VertexId, v: VertexId) -> Self {
        if u <= v {
            Edge(u, v)
        } else {
            Edge(v, u)
        }
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.0 == v || self.1 == v
    }

    /// The endpoint that is not `v`.
    pub fn other(&self, v: VertexId) -> VertexId {
        if self.0 == v {
            self.1
        } else {
            self.0
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.0, self.1)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimpleGraph {
    adjacency: BTreeMap<VertexId, BTreeSet<VertexId>>,
}

impl SimpleGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a graph from an edge list. Loops and repeated pairs are rejected.
    pub fn from_edges<I>(edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (VertexId, VertexId)>,
    {
        let mut g = Self::new();
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn with_vertices<I: IntoIterator<Item = VertexId>>(mut self, vertices: I) -> Self {
        for v in vertices {
            self.add_vertex(v);
        }
        self
    }

    pub fn add_vertex(&mut self, v: VertexId) {
        self.adjacency.entry(v).or_default();
    }

    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<()> {
        if u == v {
            return Err(Error::Loop(u));
        }
        if self.has_edge(u, v) {
            return Err(Error::DuplicateEdge(u, v));
        }
        self.adjacency.entry(u).or_default().insert(v);
        self.adjacency.entry(v).or_default().insert(u);
        Ok(())
    }

    pub fn remove_edge(&mut self, e: Edge) -> Result<()> {
        if !self.has_edge(e.0, e.1) {
            return Err(Error::MissingEdge(e));
        }
        self.adjacency.get_mut(&e.0).unwrap().remove(&e.1);
        self.adjacency.get_mut(&e.1).unwrap().remove(&e.0);
        Ok(())
    }

    /// Copy of the graph without `e`; both endpoints are kept.
    pub fn delete_edge(&self, e: Edge) -> Result<Self> {
        let mut g = self.clone();
        g.remove_edge(e)?;
        Ok(g)
    }

    pub fn has_vertex(&self, v: VertexId) -> bool {
        self.adjacency.contains_key(&v)
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.adjacency.get(&u).is_some_and(|n| n.contains(&v))
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.adjacency.keys().copied()
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.values().map(BTreeSet::len).sum::<usize>() / 2
    }

    /// Edges in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.adjacency
            .iter()
            .flat_map(|(&u, n)| n.range(u + 1..).map(move |&v| Edge(u, v)))
    }

    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.adjacency.get(&v).into_iter().flat_map(|n| n.iter().copied())
    }

    pub fn neighbor_set(&self, v: VertexId) -> Option<&BTreeSet<VertexId>> {
        self.adjacency.get(&v)
    }

    /// Degree of `v`; zero for unknown vertices.
    pub fn degree(&self, v: VertexId) -> usize {
        self.adjacency.get(&v).map_or(0, BTreeSet::len)
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.values().map(BTreeSet::len).max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> usize {
        self.adjacency.values().map(BTreeSet::len).min().unwrap_or(0)
    }

    pub fn common_neighbors(&self, u: VertexId, v: VertexId) -> Vec<VertexId> {
        match (self.adjacency.get(&u), self.adjacency.get(&v)) {
            (Some(a), Some(b)) => a.intersection(b).copied().collect(),
            _ => Vec::new(),
        }
    }

    /// Number of triangles through `e`.
    pub fn edge_triangle_count(&self, e: Edge) -> Result<usize> {
        if !self.has_edge(e.0, e.1) {
            return Err(Error::MissingEdge(e));
        }
        Ok(self.common_neighbors(e.0, e.1).len())
    }

    /// All vertex sets inducing K4, each sorted, in lexicographic order.
    pub fn find_k4s(&self) -> Vec<[VertexId; 4]> {
        let mut out = Vec::new();
        for Edge(a, b) in self.edges() {
            let common: Vec<_> = self
                .common_neighbors(a, b)
                .into_iter()
                .filter(|&c| c > b)
                .collect();
            for (i, &c) in common.iter().enumerate() {
                for &d in &common[i + 1..] {
                    if self.has_edge(c, d) {
                        out.push([a, b, c, d]);
                    }
                }
            }
        }
        out
    }

    /// All induced diamonds. The hub pair is the shared edge of the two
    /// triangles; the wing pair is the missing edge.
    pub fn find_induced_diamonds(&self) -> Vec<DiamondWitness> {
        let mut out = Vec::new();
        for Edge(a, b) in self.edges() {
            let common = self.common_neighbors(a, b);
            for (i, &c) in common.iter().enumerate() {
                for &d in &common[i + 1..] {
                    if !self.has_edge(c, d) {
                        out.push(DiamondWitness {
                            hub_pair: (a, b),
                            wing_pair: (c, d),
                        });
                    }
                }
            }
        }
        out
    }

    /// Property P: every K4 has a vertex of degree at most 4, and every
    /// induced diamond has small hubs (≤ 5) or small wings (≤ 3).
    /// Degrees are always taken in the whole graph.
    pub fn check_property_p(&self) -> PropertyReport {
        let mut violations = Vec::new();
        for quad in self.find_k4s() {
            if quad.iter().all(|&v| self.degree(v) > 4) {
                violations.push(PViolation::K4WithoutLowVertex { vertices: quad });
            }
        }
        for w in self.find_induced_diamonds() {
            let hub = self.degree(w.hub_pair.0).max(self.degree(w.hub_pair.1));
            let wing = self.degree(w.wing_pair.0).max(self.degree(w.wing_pair.1));
            if hub > 5 && wing > 3 {
                violations.push(PViolation::HeavyDiamond {
                    witness: w,
                    hub_degree: hub,
                    wing_degree: wing,
                });
            }
        }
        PropertyReport {
            holds: violations.is_empty(),
            violations,
        }
    }

    /// Whether the graph is connected (the empty graph counts as connected).
    pub fn is_connected(&self) -> bool {
        let Some(start) = self.vertices().next() else {
            return true;
        };
        let mut seen = BTreeSet::from([start]);
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for w in self.neighbors(v) {
                if seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        seen.len() == self.vertex_count()
    }

    /// Cut vertices, found with the lowpoint DFS.
    pub fn articulation_points(&self) -> BTreeSet<VertexId> {
        let mut disc: BTreeMap<VertexId, usize> = BTreeMap::new();
        let mut low: BTreeMap<VertexId, usize> = BTreeMap::new();
        let mut cuts = BTreeSet::new();
        let mut time = 0;
        for root in self.vertices() {
            if disc.contains_key(&root) {
                continue;
            }
            disc.insert(root, time);
            low.insert(root, time);
            time += 1;
            let mut root_children = 0;
            // (vertex, parent, neighbor iterator position)
            let mut stack: Vec<(VertexId, Option<VertexId>, Vec<VertexId>, usize)> =
                vec![(root, None, self.neighbors(root).collect(), 0)];
            while let Some(top) = stack.last_mut() {
                let (v, parent) = (top.0, top.1);
                if top.3 < top.2.len() {
                    let w = top.2[top.3];
                    top.3 += 1;
                    if Some(w) == parent {
                        continue;
                    }
                    if let Some(&dw) = disc.get(&w) {
                        let lv = low[&v].min(dw);
                        low.insert(v, lv);
                    } else {
                        disc.insert(w, time);
                        low.insert(w, time);
                        time += 1;
                        if v == root {
                            root_children += 1;
                        }
                        stack.push((w, Some(v), self.neighbors(w).collect(), 0));
                    }
                } else {
                    stack.pop();
                    if let Some(p) = parent {
                        let lp = low[&p].min(low[&v]);
                        low.insert(p, lp);
                        if p != root && low[&v] >= disc[&p] {
                            cuts.insert(p);
                        }
                    }
                }
            }
            if root_children > 1 {
                cuts.insert(root);
            }
        }
        cuts
    }

    /// 2-connected: connected, at least 3 vertices, no cut vertex.
    pub fn is_two_connected(&self) -> bool {
        self.vertex_count() >= 3 && self.is_connected() && self.articulation_points().is_empty()
    }

    /// Parses the edge-list text format: one `u v` pair per line, `#`
    /// comments, and an optional `vertices N` header declaring ids `0..N`.
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut g = Self::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            let parse = |s: &str| -> Result<VertexId> {
                s.parse().map_err(|_| Error::Parse {
                    line: line_no,
                    message: format!("expected a nonnegative integer, found {s:?}"),
                })
            };
            match parts.as_slice() {
                ["vertices", n] => {
                    for v in 0..parse(n)? {
                        g.add_vertex(v);
                    }
                }
                [u, v] => {
                    let (u, v) = (parse(u)?, parse(v)?);
                    g.add_edge(u, v).map_err(|e| Error::Parse {
                        line: line_no,
                        message: e.to_string(),
                    })?;
                }
                _ => {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!("expected \"u v\" or \"vertices N\", found {line:?}"),
                    })
                }
            }
        }
        Ok(g)
    }

    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        if self.vertices().any(|v| self.degree(v) == 0) {
            let n = self.vertices().last().map_or(0, |v| v + 1);
            out.push_str(&format!("vertices {n}\n"));
        }
        for Edge(u, v) in self.edges() {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }
}

/// An induced K4 minus one edge. `hub_pair` spans the shared edge,
/// `wing_pair` is the non-adjacent pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DiamondWitness {
    pub hub_pair: (VertexId, VertexId),
    pub wing_pair: (VertexId, VertexId),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "condition")]
pub enum PViolation {
    /// Condition 1 fails: all four vertices have degree ≥ 5.
    K4WithoutLowVertex { vertices: [VertexId; 4] },
    /// Condition 2 fails.
    HeavyDiamond {
        witness: DiamondWitness,
        hub_degree: usize,
        wing_degree: usize,
    },
}

impl fmt::Display for PViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PViolation::K4WithoutLowVertex { vertices } => {
                write!(f, "condition 1: K4 {vertices:?} has no vertex of degree <= 4")
            }
            PViolation::HeavyDiamond {
                witness,
                hub_degree,
                wing_degree,
            } => write!(
                f,
                "condition 2: diamond hubs {:?} (max degree {hub_degree}) wings {:?} (max degree {wing_degree})",
                witness.hub_pair, witness.wing_pair
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub holds: bool,
    pub violations: Vec<PViolation>,
}
