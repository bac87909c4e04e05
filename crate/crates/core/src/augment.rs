//! Construction of G* from G†: new edges are inserted inside big faces
//! between non-consecutive true vertices of G-degree at most five, until no
//! face admits such a pair. Afterwards every vertex is classified as big or
//! small.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::embedding::{
    neighbor_rotation_spec, DartId, EmbeddedGraph, EmbeddingSpec, FaceSet, Surface, VertexKind,
};
use crate::error::{Error, Result};
use crate::graph::{Edge, SimpleGraph, VertexId};

/// Largest G-degree of a true vertex that may receive new edges.
pub const NEW_EDGE_MAX_DEGREE: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AugmentConfig {
    /// Whether a pair already adjacent in G still receives a new edge through
    /// a face where it is non-consecutive. Defaults to `true`.
    pub insert_when_adjacent_in_g: bool,
}

impl Default for AugmentConfig {
    fn default() -> Self {
        AugmentConfig {
            insert_when_adjacent_in_g: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SizeClass {
    Big,
    Small,
}

/// Per-vertex classification in G*.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexClass {
    pub vertex: VertexId,
    /// Degree in G; `None` for crossing vertices.
    pub d1: Option<usize>,
    /// Degree in G*.
    pub d2: usize,
    pub kind: VertexKind,
    pub size_class: SizeClass,
    pub new_incident: bool,
}

impl VertexClass {
    pub fn is_big(&self) -> bool {
        self.size_class == SizeClass::Big
    }

    pub fn is_true(&self) -> bool {
        self.kind == VertexKind::True
    }

    /// A true vertex with the given G- and G*-degrees.
    pub fn is_pair(&self, d1: usize, d2: usize) -> bool {
        self.d1 == Some(d1) && self.d2 == d2
    }
}

/// Big iff a (3,5)-vertex or G*-degree at least 6; crossing vertices are
/// always small.
pub fn size_class(kind: VertexKind, d1: Option<usize>, d2: usize) -> SizeClass {
    match kind {
        VertexKind::Crossing => SizeClass::Small,
        VertexKind::True if (d1 == Some(3) && d2 == 5) || d2 >= 6 => SizeClass::Big,
        VertexKind::True => SizeClass::Small,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Insertion {
    pub step: usize,
    /// Smallest dart of the host face at the time of insertion.
    pub host_face: DartId,
    pub host_size: usize,
    pub pair: (VertexId, VertexId),
    /// The two darts of the inserted segment.
    pub darts: (DartId, DartId),
}

#[derive(Debug, Clone)]
pub struct AugmentedGraph {
    g: SimpleGraph,
    base: EmbeddedGraph,
    star: EmbeddedGraph,
    insertions: Vec<Insertion>,
    faces: FaceSet,
    classes: BTreeMap<VertexId, VertexClass>,
}

/// An eligible pair on a face: boundary occurrences `i < j`.
fn eligible_pairs(
    emb: &EmbeddedGraph,
    g: &SimpleGraph,
    boundary: &[DartId],
    config: AugmentConfig,
) -> Vec<((VertexId, VertexId), (usize, usize))> {
    let k = boundary.len();
    let mut out = Vec::new();
    if k < 4 {
        return out;
    }
    let ok = |v: VertexId| {
        emb.kind(v) == Some(VertexKind::True) && g.degree(v) <= NEW_EDGE_MAX_DEGREE
    };
    for i in 0..k {
        let vi = emb.owner(boundary[i]);
        if !ok(vi) {
            continue;
        }
        for j in i + 2..k {
            if i == 0 && j == k - 1 {
                continue;
            }
            let vj = emb.owner(boundary[j]);
            if vj == vi || !ok(vj) {
                continue;
            }
            if !config.insert_when_adjacent_in_g && g.has_edge(vi, vj) {
                continue;
            }
            out.push(((vi.min(vj), vi.max(vj)), (i, j)));
        }
    }
    out
}

fn rotate_to_min(mut boundary: Vec<DartId>) -> Vec<DartId> {
    let p = boundary
        .iter()
        .enumerate()
        .min_by_key(|(_, d)| **d)
        .map(|(i, _)| i)
        .unwrap_or(0);
    boundary.rotate_left(p);
    boundary
}

impl AugmentedGraph {
    /// Builds G* from G† with the default configuration.
    pub fn build(gd: &EmbeddedGraph, g: &SimpleGraph) -> Self {
        Self::build_with(gd, g, AugmentConfig::default())
    }

    /// Faces are processed in order of their smallest dart; within a face the
    /// lexicographically smallest eligible vertex pair is joined first.
    pub fn build_with(gd: &EmbeddedGraph, g: &SimpleGraph, config: AugmentConfig) -> Self {
        let mut star = gd.clone();
        let mut work: BTreeMap<DartId, Vec<DartId>> = gd
            .trace_faces()
            .faces
            .into_iter()
            .map(|f| (f.min_dart(), f.boundary))
            .collect();
        let mut insertions = Vec::new();
        while let Some((key, boundary)) = work.pop_first() {
            let Some((pair, (i, j))) = eligible_pairs(&star, g, &boundary, config)
                .into_iter()
                .min()
            else {
                continue;
            };
            let a = star.split_face(&boundary, i, j, None);
            let b = star.twin(a);
            let k = boundary.len();
            let mut first: Vec<DartId> = boundary[i..j].to_vec();
            first.push(b);
            let mut second: Vec<DartId> = boundary[j..k].to_vec();
            second.extend_from_slice(&boundary[..i]);
            second.push(a);
            for f in [first, second] {
                let f = rotate_to_min(f);
                work.insert(f[0], f);
            }
            insertions.push(Insertion {
                step: insertions.len(),
                host_face: key,
                host_size: k,
                pair,
                darts: (a, b),
            });
        }
        Self::finish(g.clone(), gd.clone(), star, insertions)
    }

    /// Loads an embedding that already is a G*: segments listed in
    /// `spec.new_segments` are the new edges. The insertion fixpoint is not
    /// enforced; see [`fixpoint_violations`](Self::fixpoint_violations).
    pub fn from_marked(g: &SimpleGraph, spec: &EmbeddingSpec) -> Result<Self> {
        let star = EmbeddedGraph::build_marked(g, spec)?;
        let new: BTreeSet<DartId> = spec.new_segments.iter().map(|p| p.0).collect();
        let base = star.without_segments(&new);
        Ok(Self::finish(g.clone(), base, star, Vec::new()))
    }

    /// [`from_marked`](Self::from_marked) for a neighbour-rotation
    /// description; `new_pairs` are the true–true adjacencies drawn as new
    /// edges. G is read off the remaining segments.
    pub fn from_neighbor_rotation_marked(
        surface: Surface,
        rotation: &BTreeMap<VertexId, Vec<VertexId>>,
        crossings: &BTreeSet<VertexId>,
        new_pairs: &BTreeSet<Edge>,
    ) -> Result<Self> {
        let spec = neighbor_rotation_spec(surface, rotation, crossings, new_pairs)?;
        let mut g = SimpleGraph::new();
        for &v in rotation.keys().filter(|v| !crossings.contains(v)) {
            g.add_vertex(v);
        }
        for &(_, _, e) in &spec.origins {
            if !g.has_edge(e.0, e.1) {
                g.add_edge(e.0, e.1)?;
            }
        }
        Self::from_marked(&g, &spec)
    }

    fn finish(
        g: SimpleGraph,
        base: EmbeddedGraph,
        star: EmbeddedGraph,
        insertions: Vec<Insertion>,
    ) -> Self {
        let faces = star.trace_faces();
        let classes = star
            .vertices()
            .map(|v| {
                let kind = star.kind(v).expect("listed vertex");
                let d1 = (kind == VertexKind::True).then(|| g.degree(v));
                let d2 = star.degree(v);
                let new_incident = star.rotation(v).iter().any(|&d| star.origin(d).is_none());
                (
                    v,
                    VertexClass {
                        vertex: v,
                        d1,
                        d2,
                        kind,
                        size_class: size_class(kind, d1, d2),
                        new_incident,
                    },
                )
            })
            .collect();
        AugmentedGraph {
            g,
            base,
            star,
            insertions,
            faces,
            classes,
        }
    }

    pub fn graph(&self) -> &SimpleGraph {
        &self.g
    }

    /// G†.
    pub fn base(&self) -> &EmbeddedGraph {
        &self.base
    }

    /// G*.
    pub fn star(&self) -> &EmbeddedGraph {
        &self.star
    }

    pub fn faces(&self) -> &FaceSet {
        &self.faces
    }

    pub fn insertions(&self) -> &[Insertion] {
        &self.insertions
    }

    pub fn classification(&self) -> &BTreeMap<VertexId, VertexClass> {
        &self.classes
    }

    pub fn class(&self, v: VertexId) -> &VertexClass {
        &self.classes[&v]
    }

    /// Whether the segment containing `dart` is a new edge.
    pub fn is_new_edge(&self, dart: DartId) -> Result<bool> {
        if dart >= self.star.dart_count() {
            return Err(Error::UnknownSegment(dart));
        }
        Ok(self.star.origin(dart).is_none())
    }

    pub fn new_edge_count(&self) -> usize {
        (0..self.star.dart_count())
            .filter(|&d| self.star.origin(d).is_none())
            .count()
            / 2
    }

    /// Face size of the face on which dart `d` lies.
    pub fn face_size_of_dart(&self, d: DartId) -> usize {
        self.faces.faces[self.faces.face_of_dart[d]].size()
    }

    /// Faces around `v` in rotation order (the face containing each outgoing
    /// dart), as face indices.
    pub fn faces_around(&self, v: VertexId) -> Vec<usize> {
        self.star
            .rotation(v)
            .iter()
            .map(|&d| self.faces.face_of_dart[d])
            .collect()
    }

    /// Faces still holding an eligible pair. Empty after [`build`](Self::build).
    pub fn fixpoint_violations(&self) -> Vec<(usize, (VertexId, VertexId))> {
        self.fixpoint_violations_with(AugmentConfig::default())
    }

    pub fn fixpoint_violations_with(&self, config: AugmentConfig) -> Vec<(usize, (VertexId, VertexId))> {
        self.faces
            .faces
            .iter()
            .enumerate()
            .filter_map(|(i, f)| {
                eligible_pairs(&self.star, &self.g, &f.boundary, config)
                    .into_iter()
                    .min()
                    .map(|(p, _)| (i, p))
            })
            .collect()
    }

    /// Pairs of vertices joined by more than one segment, with the number of
    /// segments and how many of them are new.
    pub fn parallel_segments(&self) -> Vec<(Edge, usize, usize)> {
        let mut count: BTreeMap<Edge, (usize, usize)> = BTreeMap::new();
        for d in 0..self.star.dart_count() {
            let t = self.star.twin(d);
            if d < t {
                let e = Edge::new(self.star.owner(d), self.star.owner(t));
                let c = count.entry(e).or_default();
                c.0 += 1;
                if self.star.origin(d).is_none() {
                    c.1 += 1;
                }
            }
        }
        count
            .into_iter()
            .filter(|(_, (n, _))| *n > 1)
            .map(|(e, (n, m))| (e, n, m))
            .collect()
    }

    pub fn report(&self) -> AugmentationReport {
        AugmentationReport {
            surface: self.star.surface().to_string(),
            vertices: self.star.vertex_count(),
            segments: self.star.segment_count(),
            new_edges: self.new_edge_count(),
            insertions: self.insertions.clone(),
            face_census: self.faces.census(),
            classification: self.classes.values().copied().collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AugmentationReport {
    pub surface: String,
    pub vertices: usize,
    pub segments: usize,
    pub new_edges: usize,
    pub insertions: Vec<Insertion>,
    pub face_census: BTreeMap<usize, usize>,
    pub classification: Vec<VertexClass>,
}

impl AugmentationReport {
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "surface {}  vertices {}  segments {}  new edges {}\n",
            self.surface, self.vertices, self.segments, self.new_edges
        );
        out.push_str("insertions:\n");
        for ins in &self.insertions {
            out.push_str(&format!(
                "  step {}: face@{} (size {}) joins {}-{}\n",
                ins.step, ins.host_face, ins.host_size, ins.pair.0, ins.pair.1
            ));
        }
        out.push_str("faces by size:\n");
        for (size, n) in &self.face_census {
            out.push_str(&format!("  {size}: {n}\n"));
        }
        out.push_str("vertex  kind      d1  d2  class  new\n");
        for c in &self.classification {
            out.push_str(&format!(
                "{:>6}  {:<8}  {:>2}  {:>2}  {:<5}  {}\n",
                c.vertex,
                match c.kind {
                    VertexKind::True => "true",
                    VertexKind::Crossing => "crossing",
                },
                c.d1.map_or("-".to_string(), |d| d.to_string()),
                c.d2,
                match c.size_class {
                    SizeClass::Big => "big",
                    SizeClass::Small => "small",
                },
                if c.new_incident { "yes" } else { "no" }
            ));
        }
        out
    }
}
