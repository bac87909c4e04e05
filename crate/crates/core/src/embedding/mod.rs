//! Rotation systems for 1-embedded graphs.
//!
//! Every edge of the drawing is split at its crossing point (if any), so the
//! embedded graph has true vertices (the vertices of G) and degree-4 crossing
//! vertices. Each segment is a pair of darts; `rotation[v]` lists the darts
//! leaving `v` in counterclockwise order.
//!
//! Faces are traced with the successor rule `next(d) = succ(twin(d))`, where
//! `succ` is the rotation successor at the head of `d`. The orientation
//! convention on the torus is a choice; it only has to be used consistently.

mod format;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Edge, SimpleGraph, VertexId};

pub use format::EmbeddingFile;

pub type DartId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Surface {
    Plane,
    Torus,
}

impl Surface {
    /// V − E + F of a 2-cell embedding.
    pub fn euler_characteristic(self) -> i64 {
        match self {
            Surface::Plane => 2,
            Surface::Torus => 0,
        }
    }
}

impl fmt::Display for Surface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Surface::Plane => "plane",
            Surface::Torus => "torus",
        })
    }
}

impl std::str::FromStr for Surface {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim() {
            "plane" => Ok(Surface::Plane),
            "torus" => Ok(Surface::Torus),
            other => Err(format!("unknown surface {other:?} (expected plane|torus)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VertexKind {
    True,
    Crossing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dart {
    pub id: DartId,
    pub owner: VertexId,
    pub twin: DartId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct DartRecord {
    owner: VertexId,
    twin: DartId,
    /// Edge of G this segment belongs to; `None` for segments added during
    /// augmentation.
    origin: Option<Edge>,
}

/// A face as the cyclic sequence of darts along its boundary, starting at its
/// smallest dart.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Face {
    pub boundary: Vec<DartId>,
}

impl Face {
    pub fn size(&self) -> usize {
        self.boundary.len()
    }

    pub fn min_dart(&self) -> DartId {
        self.boundary[0]
    }
}

/// Faces of an embedding plus the dart → face lookup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceSet {
    pub faces: Vec<Face>,
    pub face_of_dart: Vec<usize>,
}

impl FaceSet {
    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    /// Number of faces by size.
    pub fn census(&self) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        for f in &self.faces {
            *out.entry(f.size()).or_insert(0) += 1;
        }
        out
    }
}

/// Raw dart-level description of a 1-embedding, as read from an embedding
/// file. Dart ids must be `0..D`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EmbeddingSpec {
    pub surface: Option<Surface>,
    pub rotation: BTreeMap<VertexId, Vec<DartId>>,
    pub twins: Vec<(DartId, DartId)>,
    pub crossings: BTreeSet<VertexId>,
    /// Segment (given by either dart) → edge of G.
    pub origins: Vec<(DartId, DartId, Edge)>,
    /// Segments without an origin in G (only meaningful for augmented files).
    pub new_segments: Vec<(DartId, DartId)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddedGraph {
    surface: Surface,
    kinds: BTreeMap<VertexId, VertexKind>,
    rotation: BTreeMap<VertexId, Vec<DartId>>,
    darts: Vec<DartRecord>,
    position: Vec<usize>,
}

impl EmbeddedGraph {
    /// Builds and validates the associated graph G† of `g` from a dart-level
    /// description.
    pub fn build_associated(g: &SimpleGraph, spec: &EmbeddingSpec) -> Result<Self> {
        if !spec.new_segments.is_empty() {
            return Err(Error::Embedding(
                "segments without a G-edge are only allowed in augmented embeddings".into(),
            ));
        }
        let e = Self::assemble(spec)?;
        e.validate_against(g, false)?;
        Ok(e)
    }

    /// Like [`build_associated`](Self::build_associated) but accepts the
    /// segments listed in `spec.new_segments`; used to load an already
    /// augmented embedding.
    pub(crate) fn build_marked(g: &SimpleGraph, spec: &EmbeddingSpec) -> Result<Self> {
        let e = Self::assemble(spec)?;
        e.validate_against(g, true)?;
        Ok(e)
    }

    fn assemble(spec: &EmbeddingSpec) -> Result<Self> {
        let dart_count: usize = spec.rotation.values().map(Vec::len).sum();
        let mut owner = vec![None; dart_count];
        let mut position = vec![0; dart_count];
        for (&v, darts) in &spec.rotation {
            for (i, &d) in darts.iter().enumerate() {
                if d >= dart_count {
                    return Err(Error::Embedding(format!(
                        "dart ids must be 0..{dart_count}; found {d}"
                    )));
                }
                if owner[d].is_some() {
                    return Err(Error::Embedding(format!("dart {d} appears in two rotations")));
                }
                owner[d] = Some(v);
                position[d] = i;
            }
        }
        let mut twin = vec![None; dart_count];
        for &(a, b) in &spec.twins {
            if a >= dart_count || b >= dart_count {
                return Err(Error::Embedding(format!("twin pair ({a},{b}) names unknown darts")));
            }
            if a == b {
                return Err(Error::Embedding(format!("dart {a} is its own twin")));
            }
            for (x, y) in [(a, b), (b, a)] {
                match twin[x] {
                    None => twin[x] = Some(y),
                    Some(t) if t == y => {}
                    Some(_) => {
                        return Err(Error::Embedding(format!(
                            "twin map is not an involution at dart {x}"
                        )))
                    }
                }
            }
        }
        let mut darts = Vec::with_capacity(dart_count);
        for d in 0..dart_count {
            let t = twin[d].ok_or_else(|| Error::Embedding(format!("dart {d} has no twin")))?;
            let o = owner[d].expect("every dart owned");
            if owner[t] == Some(o) {
                return Err(Error::Embedding(format!(
                    "segment ({d},{t}) is a loop at vertex {o}"
                )));
            }
            darts.push(DartRecord {
                owner: o,
                twin: t,
                origin: None,
            });
        }
        for &(a, b, e) in &spec.origins {
            if a >= dart_count || darts[a].twin != b {
                return Err(Error::Embedding(format!(
                    "origin line ({a},{b}) does not name a segment"
                )));
            }
            for d in [a, b] {
                if darts[d].origin.is_some() {
                    return Err(Error::Embedding(format!("segment ({a},{b}) has two origins")));
                }
                darts[d].origin = Some(e);
            }
        }
        let mut new_seen = vec![false; dart_count];
        for &(a, b) in &spec.new_segments {
            if a >= dart_count || darts[a].twin != b {
                return Err(Error::Embedding(format!(
                    "new-segment line ({a},{b}) does not name a segment"
                )));
            }
            new_seen[a] = true;
            new_seen[b] = true;
        }
        for d in 0..dart_count {
            if darts[d].origin.is_some() && new_seen[d] {
                return Err(Error::Embedding(format!(
                    "segment at dart {d} is both original and new"
                )));
            }
            if darts[d].origin.is_none() && !new_seen[d] {
                return Err(Error::Embedding(format!("segment at dart {d} has no origin")));
            }
        }
        let mut kinds = BTreeMap::new();
        for &v in spec.rotation.keys() {
            let kind = if spec.crossings.contains(&v) {
                VertexKind::Crossing
            } else {
                VertexKind::True
            };
            kinds.insert(v, kind);
        }
        for &x in &spec.crossings {
            if !kinds.contains_key(&x) {
                return Err(Error::Embedding(format!("crossing vertex {x} has no rotation")));
            }
        }
        Ok(EmbeddedGraph {
            surface: spec.surface.unwrap_or(Surface::Plane),
            kinds,
            rotation: spec.rotation.clone(),
            darts,
            position,
        })
    }

    /// Checks the 1-embedding invariants against the underlying graph `g`.
    fn validate_against(&self, g: &SimpleGraph, allow_new: bool) -> Result<()> {
        // crossing vertices: degree 4, opposite darts share an origin, the two
        // origins differ, no crossing neighbours
        let mut crossing_of_edge: BTreeMap<Edge, VertexId> = BTreeMap::new();
        for (&x, &kind) in &self.kinds {
            let rot = &self.rotation[&x];
            match kind {
                VertexKind::True => {
                    if !g.has_vertex(x) {
                        return Err(Error::Embedding(format!(
                            "true vertex {x} is not a vertex of G"
                        )));
                    }
                }
                VertexKind::Crossing => {
                    if g.has_vertex(x) {
                        return Err(Error::Embedding(format!(
                            "crossing vertex {x} collides with a vertex id of G"
                        )));
                    }
                    if rot.len() != 4 {
                        return Err(Error::Embedding(format!(
                            "crossing vertex {x} has degree {} (expected 4)",
                            rot.len()
                        )));
                    }
                    let o: Vec<Option<Edge>> = rot.iter().map(|&d| self.darts[d].origin).collect();
                    if o.iter().any(Option::is_none) {
                        return Err(Error::Embedding(format!(
                            "crossing vertex {x} carries a segment without a G-edge"
                        )));
                    }
                    if o[0] != o[2] || o[1] != o[3] || o[0] == o[1] {
                        return Err(Error::Embedding(format!(
                            "at crossing vertex {x} opposite darts must belong to the same edge and the two edges must differ"
                        )));
                    }
                    for e in [o[0].unwrap(), o[1].unwrap()] {
                        if crossing_of_edge.insert(e, x).is_some() {
                            return Err(Error::EdgeCrossesTwice(e));
                        }
                    }
                    for &d in rot {
                        let head = self.head(d);
                        if self.kind(head) == Some(VertexKind::Crossing) {
                            return Err(Error::Embedding(format!(
                                "crossing vertices {x} and {head} are adjacent"
                            )));
                        }
                    }
                }
            }
        }
        // every G-edge is realised by one segment or by two segments through
        // its crossing vertex
        let mut segments_of: BTreeMap<Edge, Vec<DartId>> = BTreeMap::new();
        for d in 0..self.darts.len() {
            let t = self.darts[d].twin;
            if d > t {
                continue;
            }
            match self.darts[d].origin {
                Some(e) => {
                    if !g.has_edge(e.0, e.1) {
                        return Err(Error::Embedding(format!("origin {e} is not an edge of G")));
                    }
                    segments_of.entry(e).or_default().push(d);
                }
                None => {
                    if !allow_new {
                        return Err(Error::Embedding(format!("segment at dart {d} has no origin")));
                    }
                    let (a, b) = (self.owner(d), self.head(d));
                    if self.kind(a) != Some(VertexKind::True) || self.kind(b) != Some(VertexKind::True)
                    {
                        return Err(Error::Embedding(format!(
                            "new segment ({a},{b}) must join two true vertices"
                        )));
                    }
                }
            }
        }
        for e in g.edges() {
            let segs = segments_of.get(&e).map(Vec::as_slice).unwrap_or(&[]);
            let ends = |d: DartId| Edge::new(self.owner(d), self.head(d));
            match (segs, crossing_of_edge.get(&e)) {
                ([d], None) => {
                    if ends(*d) != e {
                        return Err(Error::Embedding(format!(
                            "segment for edge {e} joins {} instead",
                            ends(*d)
                        )));
                    }
                }
                ([d1, d2], Some(&x)) => {
                    let (s1, s2) = (ends(*d1), ends(*d2));
                    let ok = s1.contains(x)
                        && s2.contains(x)
                        && Edge::new(s1.other(x), s2.other(x)) == e;
                    if !ok {
                        return Err(Error::Embedding(format!(
                            "segments of edge {e} do not form a chain through crossing {x}"
                        )));
                    }
                }
                ([], _) => {
                    return Err(Error::Embedding(format!("edge {e} of G is not drawn")));
                }
                _ => {
                    return Err(Error::Embedding(format!(
                        "edge {e} has {} segments, inconsistent with its crossings",
                        segs.len()
                    )))
                }
            }
        }
        for v in g.vertices() {
            if !self.kinds.contains_key(&v) && g.degree(v) > 0 {
                return Err(Error::Embedding(format!("vertex {v} of G has no rotation")));
            }
        }
        Ok(())
    }

    /// Builds an embedding from neighbour rotations (counterclockwise vertex
    /// lists). The drawing must have no parallel segments. G-edges are read
    /// off the segments: true–true segments are edges, and a crossing vertex
    /// with rotation `[a, b, c, d]` carries the edges `ac` and `bd`.
    pub fn from_neighbor_rotation(
        surface: Surface,
        rotation: &BTreeMap<VertexId, Vec<VertexId>>,
        crossings: &BTreeSet<VertexId>,
    ) -> Result<(SimpleGraph, EmbeddedGraph)> {
        let spec = neighbor_rotation_spec(surface, rotation, crossings, &BTreeSet::new())?;
        let mut g = SimpleGraph::new();
        for &v in rotation.keys().filter(|v| !crossings.contains(v)) {
            g.add_vertex(v);
        }
        for &(_, _, e) in &spec.origins {
            if !g.has_edge(e.0, e.1) {
                g.add_edge(e.0, e.1)?;
            }
        }
        let emb = Self::build_associated(&g, &spec)?;
        Ok((g, emb))
    }

    pub fn surface(&self) -> Surface {
        self.surface
    }

    pub fn set_surface(&mut self, surface: Surface) {
        self.surface = surface;
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.kinds.keys().copied()
    }

    pub fn true_vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.kinds
            .iter()
            .filter(|(_, k)| **k == VertexKind::True)
            .map(|(v, _)| *v)
    }

    pub fn crossing_vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.kinds
            .iter()
            .filter(|(_, k)| **k == VertexKind::Crossing)
            .map(|(v, _)| *v)
    }

    pub fn vertex_count(&self) -> usize {
        self.kinds.len()
    }

    pub fn dart_count(&self) -> usize {
        self.darts.len()
    }

    pub fn segment_count(&self) -> usize {
        self.darts.len() / 2
    }

    pub fn kind(&self, v: VertexId) -> Option<VertexKind> {
        self.kinds.get(&v).copied()
    }

    pub fn is_crossing(&self, v: VertexId) -> bool {
        self.kind(v) == Some(VertexKind::Crossing)
    }

    pub fn dart(&self, d: DartId) -> Dart {
        Dart {
            id: d,
            owner: self.darts[d].owner,
            twin: self.darts[d].twin,
        }
    }

    pub fn owner(&self, d: DartId) -> VertexId {
        self.darts[d].owner
    }

    pub fn twin(&self, d: DartId) -> DartId {
        self.darts[d].twin
    }

    /// Vertex at the far end of `d`.
    pub fn head(&self, d: DartId) -> VertexId {
        self.darts[self.darts[d].twin].owner
    }

    pub fn origin(&self, d: DartId) -> Option<Edge> {
        self.darts[d].origin
    }

    pub fn rotation(&self, v: VertexId) -> &[DartId] {
        self.rotation.get(&v).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.rotation(v).len()
    }

    /// Next dart counterclockwise around the owner of `d`.
    pub fn rotation_succ(&self, d: DartId) -> DartId {
        let rot = &self.rotation[&self.darts[d].owner];
        rot[(self.position[d] + 1) % rot.len()]
    }

    pub fn rotation_pred(&self, d: DartId) -> DartId {
        let rot = &self.rotation[&self.darts[d].owner];
        rot[(self.position[d] + rot.len() - 1) % rot.len()]
    }

    /// Next dart on the face boundary containing `d`.
    pub fn face_succ(&self, d: DartId) -> DartId {
        self.rotation_succ(self.darts[d].twin)
    }

    /// Neighbours of `v` in rotation order (with repetition for parallel
    /// segments).
    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.rotation(v).iter().map(move |&d| self.head(d))
    }

    /// Traces every face. Faces start at their smallest dart and are sorted by
    /// it.
    pub fn trace_faces(&self) -> FaceSet {
        let n = self.darts.len();
        let mut face_of_dart = vec![usize::MAX; n];
        let mut faces = Vec::new();
        for start in 0..n {
            if face_of_dart[start] != usize::MAX {
                continue;
            }
            let idx = faces.len();
            let mut boundary = Vec::new();
            let mut d = start;
            loop {
                face_of_dart[d] = idx;
                boundary.push(d);
                d = self.face_succ(d);
                if d == start {
                    break;
                }
            }
            faces.push(Face { boundary });
        }
        FaceSet {
            faces,
            face_of_dart,
        }
    }

    /// Vertices along a face boundary (one entry per dart).
    pub fn face_vertices(&self, face: &Face) -> Vec<VertexId> {
        face.boundary.iter().map(|&d| self.owner(d)).collect()
    }

    /// Whether the boundary visits no vertex twice.
    pub fn face_is_cycle(&self, face: &Face) -> bool {
        let vs = self.face_vertices(face);
        let set: BTreeSet<_> = vs.iter().collect();
        set.len() == vs.len()
    }

    /// V − E + F.
    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count() as i64 - self.segment_count() as i64 + self.trace_faces().len() as i64
    }

    /// Fails with "not 2-cell for declared surface" when V − E + F does not
    /// match the declared surface.
    pub fn check_two_cell(&self) -> Result<()> {
        let found = self.euler_characteristic();
        let expected = self.surface.euler_characteristic();
        if found != expected {
            return Err(Error::NotTwoCell { expected, found });
        }
        Ok(())
    }

    /// Inserts a new segment between boundary occurrences `i < j` of `face`,
    /// splitting it in two. Returns the dart leaving occurrence `i`.
    pub(crate) fn split_face(
        &mut self,
        face: &[DartId],
        i: usize,
        j: usize,
        origin: Option<Edge>,
    ) -> DartId {
        let (u, w) = (self.owner(face[i]), self.owner(face[j]));
        let a = self.darts.len();
        let b = a + 1;
        self.darts.push(DartRecord {
            owner: u,
            twin: b,
            origin,
        });
        self.darts.push(DartRecord {
            owner: w,
            twin: a,
            origin,
        });
        self.position.extend([0, 0]);
        self.insert_before(face[i], a);
        self.insert_before(face[j], b);
        a
    }

    /// Places a new vertex inside `face` joined to the boundary occurrences
    /// `occ` (strictly increasing). Segment `k` gets `origins[k]`.
    pub(crate) fn add_star_in_face(
        &mut self,
        face: &[DartId],
        occ: &[usize],
        center: VertexId,
        kind: VertexKind,
        origins: &[Option<Edge>],
    ) {
        let mut center_darts = Vec::with_capacity(occ.len());
        for (k, &i) in occ.iter().enumerate() {
            let leaf = self.owner(face[i]);
            let a = self.darts.len();
            let b = a + 1;
            self.darts.push(DartRecord {
                owner: leaf,
                twin: b,
                origin: origins[k],
            });
            self.darts.push(DartRecord {
                owner: center,
                twin: a,
                origin: origins[k],
            });
            self.position.extend([0, 0]);
            self.insert_before(face[i], a);
            center_darts.push(b);
        }
        center_darts.reverse();
        for (i, &d) in center_darts.iter().enumerate() {
            self.position[d] = i;
        }
        self.rotation.insert(center, center_darts);
        self.kinds.insert(center, kind);
    }

    fn insert_before(&mut self, anchor: DartId, new: DartId) {
        let v = self.darts[anchor].owner;
        let at = self.position[anchor];
        let rot = self.rotation.get_mut(&v).expect("owner has a rotation");
        rot.insert(at, new);
        for (i, &d) in rot.iter().enumerate().skip(at) {
            self.position[d] = i;
        }
    }

    /// Copy with the listed segments (given by either dart) removed and darts
    /// renumbered densely in their original order.
    pub fn without_segments(&self, remove: &BTreeSet<DartId>) -> EmbeddedGraph {
        let drop: BTreeSet<DartId> = remove
            .iter()
            .flat_map(|&d| [d, self.twin(d)])
            .collect();
        let mut remap = vec![usize::MAX; self.darts.len()];
        let mut next = 0;
        for (d, slot) in remap.iter_mut().enumerate() {
            if !drop.contains(&d) {
                *slot = next;
                next += 1;
            }
        }
        let darts: Vec<DartRecord> = (0..self.darts.len())
            .filter(|d| !drop.contains(d))
            .map(|d| DartRecord {
                owner: self.darts[d].owner,
                twin: remap[self.darts[d].twin],
                origin: self.darts[d].origin,
            })
            .collect();
        let mut position = vec![0; darts.len()];
        let rotation: BTreeMap<VertexId, Vec<DartId>> = self
            .rotation
            .iter()
            .map(|(&v, rot)| {
                let r: Vec<DartId> = rot
                    .iter()
                    .filter(|d| !drop.contains(d))
                    .map(|&d| remap[d])
                    .collect();
                for (i, &d) in r.iter().enumerate() {
                    position[d] = i;
                }
                (v, r)
            })
            .collect();
        EmbeddedGraph {
            surface: self.surface,
            kinds: self.kinds.clone(),
            rotation,
            darts,
            position,
        }
    }

    /// The dart-level description of this embedding.
    pub fn to_spec(&self) -> EmbeddingSpec {
        let mut spec = EmbeddingSpec {
            surface: Some(self.surface),
            rotation: self.rotation.clone(),
            crossings: self.crossing_vertices().collect(),
            ..Default::default()
        };
        for d in 0..self.darts.len() {
            let t = self.twin(d);
            if d < t {
                spec.twins.push((d, t));
                match self.origin(d) {
                    Some(e) => spec.origins.push((d, t, e)),
                    None => spec.new_segments.push((d, t)),
                }
            }
        }
        spec
    }

    /// Underlying simple graph G recovered from segment origins (isolated true
    /// vertices included).
    pub fn underlying_graph(&self) -> SimpleGraph {
        let mut g = SimpleGraph::new().with_vertices(self.true_vertices());
        for d in 0..self.darts.len() {
            if let Some(e) = self.origin(d) {
                if !g.has_edge(e.0, e.1) {
                    g.add_edge(e.0, e.1).expect("origin edges are simple");
                }
            }
        }
        g
    }

    /// Graphviz rendering; crossing vertices are drawn as small points and new
    /// segments dashed.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph embedded {\n");
        for (&v, &k) in &self.kinds {
            match k {
                VertexKind::True => out.push_str(&format!("  {v};\n")),
                VertexKind::Crossing => out.push_str(&format!("  {v} [shape=point];\n")),
            }
        }
        for d in 0..self.darts.len() {
            let t = self.twin(d);
            if d < t {
                let style = if self.origin(d).is_none() {
                    " [style=dashed]"
                } else {
                    ""
                };
                out.push_str(&format!("  {} -- {}{};\n", self.owner(d), self.owner(t), style));
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Neighbour rotations of a straight-line drawing: around each point, the
/// other ends of its segments sorted counterclockwise by angle.
pub fn straight_line_rotation(
    points: &BTreeMap<VertexId, (f64, f64)>,
    segments: &[(VertexId, VertexId)],
) -> BTreeMap<VertexId, Vec<VertexId>> {
    let mut out: BTreeMap<VertexId, Vec<VertexId>> =
        points.keys().map(|&v| (v, Vec::new())).collect();
    for &(u, v) in segments {
        out.entry(u).or_default().push(v);
        out.entry(v).or_default().push(u);
    }
    for (v, nbrs) in out.iter_mut() {
        let (x, y) = points[v];
        let angle = |w: &VertexId| {
            let (wx, wy) = points[w];
            (wy - y).atan2(wx - x)
        };
        nbrs.sort_by(|a, b| angle(a).total_cmp(&angle(b)));
    }
    out
}

/// Dart-level spec for a neighbour-rotation description. `new_pairs` lists
/// true–true adjacencies that are augmentation segments rather than G-edges.
pub(crate) fn neighbor_rotation_spec(
    surface: Surface,
    rotation: &BTreeMap<VertexId, Vec<VertexId>>,
    crossings: &BTreeSet<VertexId>,
    new_pairs: &BTreeSet<Edge>,
) -> Result<EmbeddingSpec> {
    let mut dart_at: BTreeMap<(VertexId, VertexId), DartId> = BTreeMap::new();
    let mut spec = EmbeddingSpec {
        surface: Some(surface),
        crossings: crossings.clone(),
        ..Default::default()
    };
    let mut next = 0;
    for (&v, nbrs) in rotation {
        let mut darts = Vec::with_capacity(nbrs.len());
        for &w in nbrs {
            if dart_at.insert((v, w), next).is_some() {
                return Err(Error::Embedding(format!(
                    "vertex {v} lists neighbour {w} twice; use the dart-level format for parallel segments"
                )));
            }
            darts.push(next);
            next += 1;
        }
        spec.rotation.insert(v, darts);
    }
    for (&(v, w), &d) in &dart_at {
        if v >= w {
            continue;
        }
        let t = *dart_at.get(&(w, v)).ok_or_else(|| {
            Error::Embedding(format!("{v} lists {w} but {w} does not list {v}"))
        })?;
        spec.twins.push((d, t));
        let pair = Edge::new(v, w);
        if new_pairs.contains(&pair) {
            spec.new_segments.push((d, t));
            continue;
        }
        let origin = match (crossings.contains(&v), crossings.contains(&w)) {
            (false, false) => pair,
            (true, true) => {
                return Err(Error::Embedding(format!(
                    "crossing vertices {v} and {w} are adjacent"
                )))
            }
            (cv, _) => {
                let (x, t) = if cv { (v, w) } else { (w, v) };
                let rot = &rotation[&x];
                if rot.len() != 4 {
                    return Err(Error::Embedding(format!(
                        "crossing vertex {x} has degree {} (expected 4)",
                        rot.len()
                    )));
                }
                let i = rot.iter().position(|&y| y == t).expect("listed");
                Edge::new(t, rot[(i + 2) % 4])
            }
        };
        spec.origins.push((d, t, origin));
    }
    for &(v, w) in dart_at.keys() {
        if !dart_at.contains_key(&(w, v)) {
            return Err(Error::Embedding(format!("{v} lists {w} but {w} does not list {v}")));
        }
    }
    Ok(spec)
}
