//! Total colorings: representation, verification, exact and heuristic
//! solvers, and the edge-extension procedures used by the reduction solver.

mod exact;
mod extend;
mod solve;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Edge, SimpleGraph, VertexId};

pub use exact::{exact_chi_tt, DEFAULT_BUDGET};
pub use extend::{extend_p1, extend_p3, P3Certificate, P3Outcome, P3Step};
pub use solve::{greedy_total, local_repair, solve_tcc, SolveOptions, SolveResult};

/// A vertex or an edge of the graph being colored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Element {
    Vertex(VertexId),
    Edge(Edge),
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Vertex(v) => write!(f, "v{v}"),
            Element::Edge(e) => write!(f, "e{e}"),
        }
    }
}

/// Vertices first (ascending), then edges (lexicographic).
pub fn elements(g: &SimpleGraph) -> Vec<Element> {
    g.vertices()
        .map(Element::Vertex)
        .chain(g.edges().map(Element::Edge))
        .collect()
}

/// Colors are `1..=kappa`; missing entries are uncolored.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TotalColoring {
    pub kappa: usize,
    pub vertex_color: BTreeMap<VertexId, usize>,
    #[serde(with = "edge_pairs")]
    pub edge_color: BTreeMap<Edge, usize>,
}

/// JSON object keys must be strings, so edge colors travel as a list of
/// `[[u, v], color]` pairs.
mod edge_pairs {
    use std::collections::BTreeMap;

    use serde::{Deserialize, Deserializer, Serializer};

    use crate::graph::Edge;

    pub fn serialize<S: Serializer>(map: &BTreeMap<Edge, usize>, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(map.iter())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<Edge, usize>, D::Error> {
        let pairs = Vec::<(Edge, usize)>::deserialize(d)?;
        Ok(pairs.into_iter().map(|(e, c)| (Edge::new(e.0, e.1), c)).collect())
    }
}

impl TotalColoring {
    pub fn new(kappa: usize) -> Self {
        TotalColoring {
            kappa,
            ..Default::default()
        }
    }

    pub fn get(&self, e: Element) -> Option<usize> {
        match e {
            Element::Vertex(v) => self.vertex_color.get(&v).copied(),
            Element::Edge(x) => self.edge_color.get(&x).copied(),
        }
    }

    pub fn set(&mut self, e: Element, color: usize) {
        match e {
            Element::Vertex(v) => self.vertex_color.insert(v, color),
            Element::Edge(x) => self.edge_color.insert(x, color),
        };
    }

    pub fn erase(&mut self, e: Element) -> Option<usize> {
        match e {
            Element::Vertex(v) => self.vertex_color.remove(&v),
            Element::Edge(x) => self.edge_color.remove(&x),
        }
    }

    pub fn vertex(&self, v: VertexId) -> Option<usize> {
        self.vertex_color.get(&v).copied()
    }

    pub fn edge(&self, u: VertexId, v: VertexId) -> Option<usize> {
        self.edge_color.get(&Edge::new(u, v)).copied()
    }

    /// Number of distinct colors in use.
    pub fn colors_used(&self) -> usize {
        self.vertex_color
            .values()
            .chain(self.edge_color.values())
            .collect::<BTreeSet<_>>()
            .len()
    }

    /// Largest color in use (0 when empty).
    pub fn max_color(&self) -> usize {
        self.vertex_color
            .values()
            .chain(self.edge_color.values())
            .copied()
            .max()
            .unwrap_or(0)
    }

    /// Elements of `g` without a color.
    pub fn uncolored(&self, g: &SimpleGraph) -> Vec<Element> {
        elements(g).into_iter().filter(|&e| self.get(e).is_none()).collect()
    }

    /// Drops colors of elements not in `g`.
    pub fn restrict_to(&mut self, g: &SimpleGraph) {
        self.vertex_color.retain(|v, _| g.has_vertex(*v));
        self.edge_color.retain(|e, _| g.has_edge(e.0, e.1));
    }

    /// The `.tc` text format: a `kappa K` header, then `v <vertex> <color>`
    /// and `e <u> <v> <color>` lines.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "kappa {}", self.kappa).unwrap();
        for (v, c) in &self.vertex_color {
            writeln!(out, "v {v} {c}").unwrap();
        }
        for (e, c) in &self.edge_color {
            writeln!(out, "e {} {} {c}", e.0, e.1).unwrap();
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let err = |line: usize, message: String| Error::Parse { line, message };
        let mut c: Option<TotalColoring> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            let nums: Vec<usize> = parts[1..]
                .iter()
                .map(|t| t.parse::<usize>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| err(line_no, format!("expected nonnegative integers in {line:?}")))?;
            match (parts[0], nums.as_slice()) {
                ("kappa", [k]) => {
                    if c.is_some() {
                        return Err(err(line_no, "second kappa header".into()));
                    }
                    c = Some(TotalColoring::new(*k));
                }
                ("v" | "e", _) if c.is_none() => {
                    return Err(err(line_no, "missing \"kappa K\" header".into()));
                }
                ("v", [v, col]) => {
                    let c = c.as_mut().expect("checked");
                    check_color(line_no, *col, c.kappa)?;
                    if c.vertex_color.insert(*v, *col).is_some() {
                        return Err(err(line_no, format!("vertex {v} colored twice")));
                    }
                }
                ("e", [u, v, col]) => {
                    let c = c.as_mut().expect("checked");
                    if u == v {
                        return Err(err(line_no, format!("loop ({u},{v})")));
                    }
                    check_color(line_no, *col, c.kappa)?;
                    if c.edge_color.insert(Edge::new(*u, *v), *col).is_some() {
                        return Err(err(line_no, format!("edge ({u},{v}) colored twice")));
                    }
                }
                _ => {
                    return Err(err(
                        line_no,
                        format!("expected \"kappa K\", \"v V C\" or \"e U V C\", found {line:?}"),
                    ))
                }
            }
        }
        c.ok_or_else(|| err(0, "missing \"kappa K\" header".into()))
    }
}

fn check_color(line: usize, color: usize, kappa: usize) -> Result<()> {
    if color == 0 || color > kappa {
        return Err(Error::Parse {
            line,
            message: Error::ColorOutOfRange { color, kappa }.to_string(),
        });
    }
    Ok(())
}

/// A pair of conflicting elements sharing a color, or a color outside the
/// palette.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Violation {
    AdjacentVertices { u: VertexId, v: VertexId, color: usize },
    AdjacentEdges { e: Edge, f: Edge, color: usize },
    EdgeEndpoint { e: Edge, v: VertexId, color: usize },
    OutOfPalette { element: Element, color: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::AdjacentVertices { u, v, color } => {
                write!(f, "adjacent vertices {u} and {v} share color {color}")
            }
            Violation::AdjacentEdges { e, f: x, color } => {
                write!(f, "edges {e} and {x} meet and share color {color}")
            }
            Violation::EdgeEndpoint { e, v, color } => {
                write!(f, "edge {e} and its endpoint {v} share color {color}")
            }
            Violation::OutOfPalette { element, color } => {
                write!(f, "{element} has color {color} outside the palette")
            }
        }
    }
}

/// Checks `c` on `g`. A coloring missing any element is rejected outright;
/// otherwise every conflicting pair is listed, each once.
pub fn verify(g: &SimpleGraph, c: &TotalColoring) -> Result<Vec<Violation>> {
    let missing = c.uncolored(g);
    if !missing.is_empty() {
        return Err(Error::PartialColoring(missing.len()));
    }
    let mut out = Vec::new();
    for e in elements(g) {
        let col = c.get(e).expect("complete");
        if col == 0 || col > c.kappa {
            out.push(Violation::OutOfPalette { element: e, color: col });
        }
    }
    for v in g.vertices() {
        let cv = c.vertex(v).expect("complete");
        for w in g.neighbors(v).filter(|&w| w > v) {
            if c.vertex(w) == Some(cv) {
                out.push(Violation::AdjacentVertices { u: v, v: w, color: cv });
            }
        }
        let incident: Vec<Edge> = g.neighbors(v).map(|w| Edge::new(v, w)).collect();
        for (i, &e) in incident.iter().enumerate() {
            let ce = c.edge_color[&e];
            if ce == cv {
                out.push(Violation::EdgeEndpoint { e, v, color: cv });
            }
            for &f in &incident[i + 1..] {
                if c.edge_color[&f] == ce {
                    out.push(Violation::AdjacentEdges { e, f, color: ce });
                }
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Colors around one vertex.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColorUsage {
    /// Colors on the edges at the vertex.
    pub at_vertex_edges: BTreeSet<usize>,
    /// The same plus the vertex's own color.
    pub at_vertex_closed: BTreeSet<usize>,
}

pub fn usage(g: &SimpleGraph, c: &TotalColoring, v: VertexId) -> ColorUsage {
    let at_vertex_edges: BTreeSet<usize> = g.neighbors(v).filter_map(|w| c.edge(v, w)).collect();
    let mut at_vertex_closed = at_vertex_edges.clone();
    at_vertex_closed.extend(c.vertex(v));
    ColorUsage {
        at_vertex_edges,
        at_vertex_closed,
    }
}

/// Conflict structure of the total graph with elements indexed densely.
pub(crate) struct TotalGraph {
    pub elements: Vec<Element>,
    pub index: BTreeMap<Element, usize>,
    pub adj: Vec<Vec<usize>>,
}

impl TotalGraph {
    pub fn new(g: &SimpleGraph) -> Self {
        let elements = elements(g);
        let index: BTreeMap<Element, usize> =
            elements.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let mut adj = vec![Vec::new(); elements.len()];
        let mut link = |a: usize, b: usize| {
            adj[a].push(b);
            adj[b].push(a);
        };
        for v in g.vertices() {
            let iv = index[&Element::Vertex(v)];
            let inc: Vec<usize> = g
                .neighbors(v)
                .map(|w| index[&Element::Edge(Edge::new(v, w))])
                .collect();
            for w in g.neighbors(v).filter(|&w| w > v) {
                link(iv, index[&Element::Vertex(w)]);
            }
            for (i, &a) in inc.iter().enumerate() {
                link(iv, a);
                for &b in &inc[i + 1..] {
                    link(a, b);
                }
            }
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        TotalGraph {
            elements,
            index,
            adj,
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn to_coloring(&self, colors: &[usize], kappa: usize) -> TotalColoring {
        let mut c = TotalColoring::new(kappa);
        for (i, &e) in self.elements.iter().enumerate() {
            if colors[i] > 0 {
                c.set(e, colors[i]);
            }
        }
        c
    }

    pub fn colors_of(&self, c: &TotalColoring) -> Vec<usize> {
        self.elements.iter().map(|&e| c.get(e).unwrap_or(0)).collect()
    }
}
