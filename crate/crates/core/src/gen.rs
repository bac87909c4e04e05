//! Deterministic instance generators and corpus manifests.
//!
//! All randomness comes from [`Lcg`], so a `(family, parameters, seed)`
//! triple names the same instance on every platform.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::TAU;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::embedding::{
    straight_line_rotation, EmbeddedGraph, EmbeddingFile, Surface, VertexKind,
};
use crate::error::{Error, Result};
use crate::graph::{Edge, SimpleGraph, VertexId};

/// 64-bit linear congruential generator, `x ← a·x + c mod 2⁶⁴` with Knuth's
/// MMIX constants. Outputs use the high 32 bits of the state.
#[derive(Debug, Clone)]
pub struct Lcg {
    state: u64,
}

impl Lcg {
    pub const MULTIPLIER: u64 = 6364136223846793005;
    pub const INCREMENT: u64 = 1442695040888963407;

    pub fn new(seed: u64) -> Self {
        let mut lcg = Lcg { state: seed };
        lcg.next_u32();
        lcg
    }

    pub fn next_u32(&mut self) -> u32 {
        self.state = self
            .state
            .wrapping_mul(Self::MULTIPLIER)
            .wrapping_add(Self::INCREMENT);
        (self.state >> 32) as u32
    }

    /// Uniform in `0..n` (by multiply-shift); `n` must be positive.
    pub fn below(&mut self, n: usize) -> usize {
        assert!(n > 0);
        ((self.next_u32() as u64 * n as u64) >> 32) as usize
    }

    pub fn range(&mut self, lo: usize, hi_inclusive: usize) -> usize {
        lo + self.below(hi_inclusive - lo + 1)
    }

    pub fn chance(&mut self, num: u32, den: u32) -> bool {
        (self.next_u32() % den) < num
    }

    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            items.swap(i, self.below(i + 1));
        }
    }
}

/// Cm × Cn on the torus. Vertex `(i, j)` is `i·n + j`; its rotation is
/// right, up, left, down.
pub fn toroidal_grid(m: usize, n: usize) -> Result<(SimpleGraph, EmbeddedGraph)> {
    if m < 3 || n < 3 {
        return Err(Error::Generator(format!(
            "toroidal grid needs m, n >= 3 (got {m} x {n})"
        )));
    }
    let id = |i: usize, j: usize| (i % m) * n + (j % n);
    let rotation: BTreeMap<VertexId, Vec<VertexId>> = (0..m)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| {
            (
                id(i, j),
                vec![id(i, j + 1), id(i + 1, j), id(i, j + n - 1), id(i + m - 1, j)],
            )
        })
        .collect();
    EmbeddedGraph::from_neighbor_rotation(Surface::Torus, &rotation, &BTreeSet::new())
}

/// Stacked plane triangulation on `n ≥ 3` vertices: start from a triangle,
/// then repeatedly put a vertex inside a random face joined to its corners.
pub fn planar_triangulation(n: usize, seed: u64) -> Result<(SimpleGraph, EmbeddedGraph)> {
    if n < 3 {
        return Err(Error::Generator(format!("triangulation needs n >= 3 (got {n})")));
    }
    let rotation: BTreeMap<VertexId, Vec<VertexId>> =
        [(0, vec![1, 2]), (1, vec![2, 0]), (2, vec![0, 1])].into_iter().collect();
    let (mut g, mut emb) =
        EmbeddedGraph::from_neighbor_rotation(Surface::Plane, &rotation, &BTreeSet::new())?;
    let mut rng = Lcg::new(seed);
    for v in 3..n {
        let faces = emb.trace_faces();
        let face = &faces.faces[rng.below(faces.len())].boundary;
        let corners: Vec<VertexId> = face.iter().map(|&d| emb.owner(d)).collect();
        let origins: Vec<Option<Edge>> = corners.iter().map(|&c| Some(Edge::new(c, v))).collect();
        emb.add_star_in_face(face, &[0, 1, 2], v, VertexKind::True, &origins);
        for c in corners {
            g.add_edge(c, v)?;
        }
    }
    Ok((g, emb))
}

/// Adds `pairs` crossing chord pairs. Each pair sits in a random face with
/// at least four distinct true corners `a, b, c, d` (in boundary order) such
/// that `ac` and `bd` are not yet edges; the chords meet in a new crossing
/// vertex. Fails, reporting how many pairs fit, when no face has room.
pub fn crossed(
    g: &SimpleGraph,
    base: &EmbeddedGraph,
    pairs: usize,
    seed: u64,
) -> Result<(SimpleGraph, EmbeddedGraph)> {
    let mut g = g.clone();
    let mut emb = base.clone();
    let mut rng = Lcg::new(seed);
    let mut next_id = emb.vertices().max().map_or(0, |v| v + 1);
    for placed in 0..pairs {
        let faces = emb.trace_faces();
        let mut order: Vec<usize> = (0..faces.len()).collect();
        rng.shuffle(&mut order);
        let mut done = false;
        for fi in order {
            let face = &faces.faces[fi].boundary;
            if let Some(occ) = chord_slots(&g, &emb, face, &mut rng) {
                let corner = |k: usize| emb.owner(face[occ[k]]);
                let (ac, bd) = (Edge::new(corner(0), corner(2)), Edge::new(corner(1), corner(3)));
                let origins = [Some(ac), Some(bd), Some(ac), Some(bd)];
                emb.add_star_in_face(face, &occ, next_id, VertexKind::Crossing, &origins);
                g.add_edge(ac.0, ac.1)?;
                g.add_edge(bd.0, bd.1)?;
                next_id += 1;
                done = true;
                break;
            }
        }
        if !done {
            return Err(Error::Generator(format!(
                "room for only {placed} of {pairs} crossing pairs"
            )));
        }
    }
    Ok((g, emb))
}

/// Four increasing boundary positions of distinct true vertices whose
/// diagonals are new edges, picked at random among the valid choices.
fn chord_slots(
    g: &SimpleGraph,
    emb: &EmbeddedGraph,
    face: &[usize],
    rng: &mut Lcg,
) -> Option<[usize; 4]> {
    let n = face.len();
    if n < 4 {
        return None;
    }
    let owner = |i: usize| emb.owner(face[i]);
    let mut valid = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    let vs = [owner(a), owner(b), owner(c), owner(d)];
                    let distinct: BTreeSet<_> = vs.iter().collect();
                    if distinct.len() == 4
                        && vs.iter().all(|&v| !emb.is_crossing(v))
                        && !g.has_edge(vs[0], vs[2])
                        && !g.has_edge(vs[1], vs[3])
                    {
                        valid.push([a, b, c, d]);
                    }
                }
            }
        }
    }
    (!valid.is_empty()).then(|| valid[rng.below(valid.len())])
}

/// A plane graph with maximum degree exactly `delta ≥ 11` in which every
/// vertex lies on at most one triangle, so no two triangles meet.
///
/// `hubs ≥ 4` hub vertices form a cycle; hub 0 carries `delta − 2` leaves,
/// the others a random number. Some hubs close a triangle with two
/// consecutive leaves, and some neighbouring hubs get a leaf–leaf edge
/// (closing a 4-cycle).
pub fn high_degree_p(delta: usize, hubs: usize, seed: u64) -> Result<(SimpleGraph, EmbeddedGraph)> {
    if delta < 11 {
        return Err(Error::Generator(format!("delta must be at least 11 (got {delta})")));
    }
    if hubs < 4 {
        return Err(Error::Generator(format!("need at least 4 hubs (got {hubs})")));
    }
    let mut rng = Lcg::new(seed);
    let mut points: BTreeMap<VertexId, (f64, f64)> = BTreeMap::new();
    let mut segments: Vec<(VertexId, VertexId)> = Vec::new();
    let wedge = TAU / hubs as f64;
    let polar = |r: f64, t: f64| (r * t.cos(), r * t.sin());
    for h in 0..hubs {
        points.insert(h, polar(10.0, h as f64 * wedge));
        segments.push((h, (h + 1) % hubs));
    }
    let mut next = hubs;
    let mut leaves: Vec<Vec<VertexId>> = Vec::with_capacity(hubs);
    for h in 0..hubs {
        let count = if h == 0 { delta - 2 } else { rng.range(1, delta - 2) };
        let theta = h as f64 * wedge;
        let mut mine = Vec::with_capacity(count);
        for k in 0..count {
            let t = theta - 0.4 * wedge + 0.8 * wedge * (k as f64 + 0.5) / count as f64;
            points.insert(next, polar(20.0, t));
            segments.push((h, next));
            mine.push(next);
            next += 1;
        }
        if count >= 2 && rng.chance(1, 2) {
            let k = rng.below(count - 1);
            segments.push((mine[k], mine[k + 1]));
        }
        leaves.push(mine);
    }
    for h in 0..hubs {
        let nh = (h + 1) % hubs;
        if rng.chance(1, 3) {
            let last = *leaves[h].last().expect("every hub has a leaf");
            segments.push((last, leaves[nh][0]));
        }
    }
    let rotation = straight_line_rotation(&points, &segments);
    EmbeddedGraph::from_neighbor_rotation(Surface::Plane, &rotation, &BTreeSet::new())
}

/// A reproducible instance description.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum GenSpec {
    Grid { m: usize, n: usize },
    PlanarTriangulation { n: usize, seed: u64 },
    CrossedGrid { m: usize, n: usize, pairs: usize, seed: u64 },
    CrossedTriangulation { n: usize, pairs: usize, seed: u64 },
    HighDegreeP { delta: usize, hubs: usize, seed: u64 },
    Custom { edges: Vec<(VertexId, VertexId)> },
}

#[derive(Debug, Clone)]
pub struct Instance {
    pub graph: SimpleGraph,
    pub embedding: Option<EmbeddedGraph>,
}

impl GenSpec {
    pub fn generate(&self) -> Result<Instance> {
        let (graph, embedding) = match *self {
            GenSpec::Grid { m, n } => toroidal_grid(m, n).map(|(g, e)| (g, Some(e)))?,
            GenSpec::PlanarTriangulation { n, seed } => {
                planar_triangulation(n, seed).map(|(g, e)| (g, Some(e)))?
            }
            GenSpec::CrossedGrid { m, n, pairs, seed } => {
                let (g, e) = toroidal_grid(m, n)?;
                crossed(&g, &e, pairs, seed).map(|(g, e)| (g, Some(e)))?
            }
            GenSpec::CrossedTriangulation { n, pairs, seed } => {
                // a triangulation has no room for chords; thin it out first
                let (g, e) = planar_triangulation(n, seed)?;
                let (g, e) = thin_out(&g, &e, seed)?;
                crossed(&g, &e, pairs, seed).map(|(g, e)| (g, Some(e)))?
            }
            GenSpec::HighDegreeP { delta, hubs, seed } => {
                high_degree_p(delta, hubs, seed).map(|(g, e)| (g, Some(e)))?
            }
            GenSpec::Custom { ref edges } => (SimpleGraph::from_edges(edges.iter().copied())?, None),
        };
        Ok(Instance { graph, embedding })
    }

    /// File stem used in corpora.
    pub fn name(&self) -> String {
        match self {
            GenSpec::Grid { m, n } => format!("grid-{m}x{n}"),
            GenSpec::PlanarTriangulation { n, seed } => format!("tri-{n}-s{seed}"),
            GenSpec::CrossedGrid { m, n, pairs, seed } => format!("xgrid-{m}x{n}-p{pairs}-s{seed}"),
            GenSpec::CrossedTriangulation { n, pairs, seed } => format!("xtri-{n}-p{pairs}-s{seed}"),
            GenSpec::HighDegreeP { delta, hubs, seed } => format!("hdp-d{delta}-h{hubs}-s{seed}"),
            GenSpec::Custom { edges } => format!("custom-{}", edges.len()),
        }
    }
}

/// Removes a random subset of edges that are not needed to keep every face
/// a disc: an edge is dropped only when its two sides are different faces,
/// so the result stays 2-cell (and connected).
fn thin_out(g: &SimpleGraph, e: &EmbeddedGraph, seed: u64) -> Result<(SimpleGraph, EmbeddedGraph)> {
    let mut rng = Lcg::new(seed ^ 0x5eed);
    let mut g = g.clone();
    let mut emb = e.clone();
    let mut candidates: Vec<Edge> = g.edges().collect();
    rng.shuffle(&mut candidates);
    for edge in candidates {
        if !rng.chance(1, 3) {
            continue;
        }
        let faces = emb.trace_faces();
        let Some(d) = (0..emb.dart_count()).find(|&d| emb.origin(d) == Some(edge)) else {
            continue;
        };
        if faces.face_of_dart[d] == faces.face_of_dart[emb.twin(d)] {
            continue;
        }
        if g.degree(edge.0) <= 2 || g.degree(edge.1) <= 2 {
            continue;
        }
        emb = emb.without_segments(&BTreeSet::from([d]));
        g.remove_edge(edge)?;
    }
    Ok((g, emb))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub spec: GenSpec,
    pub edge_list: String,
    pub edge_list_sha256: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub embedding: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub embedding_sha256: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub entries: Vec<ManifestEntry>,
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Writes `<name>.el` (and `<name>.emb` when embedded) for every spec into
/// `dir`, plus `manifest.json`.
pub fn write_corpus(dir: &Path, specs: &[GenSpec]) -> Result<Manifest> {
    let io = |e: std::io::Error| Error::Generator(format!("{}: {e}", dir.display()));
    fs::create_dir_all(dir).map_err(io)?;
    let mut entries = Vec::with_capacity(specs.len());
    for spec in specs {
        let inst = spec.generate()?;
        let name = spec.name();
        let el = inst.graph.to_edge_list();
        let el_name = format!("{name}.el");
        fs::write(dir.join(&el_name), &el).map_err(io)?;
        let (embedding, embedding_sha256) = match &inst.embedding {
            Some(e) => {
                let text = EmbeddingFile::write(&e.to_spec());
                let emb_name = format!("{name}.emb");
                fs::write(dir.join(&emb_name), &text).map_err(io)?;
                (Some(emb_name), Some(sha256_hex(text.as_bytes())))
            }
            None => (None, None),
        };
        entries.push(ManifestEntry {
            spec: spec.clone(),
            edge_list: el_name,
            edge_list_sha256: sha256_hex(el.as_bytes()),
            embedding,
            embedding_sha256,
        });
    }
    let manifest = Manifest { entries };
    let json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    fs::write(dir.join("manifest.json"), json).map_err(io)?;
    Ok(manifest)
}

/// Re-hashes every file named in `dir/manifest.json`; returns the names
/// whose checksum no longer matches.
pub fn verify_corpus(dir: &Path) -> Result<Vec<String>> {
    let io = |e: std::io::Error| Error::Generator(format!("{}: {e}", dir.display()));
    let text = fs::read_to_string(dir.join("manifest.json")).map_err(io)?;
    let manifest: Manifest =
        serde_json::from_str(&text).map_err(|e| Error::Generator(e.to_string()))?;
    let mut bad = Vec::new();
    for entry in &manifest.entries {
        let mut files = vec![(&entry.edge_list, &entry.edge_list_sha256)];
        if let (Some(f), Some(h)) = (&entry.embedding, &entry.embedding_sha256) {
            files.push((f, h));
        }
        for (file, hash) in files {
            let bytes = fs::read(dir.join(file)).map_err(io)?;
            if &sha256_hex(&bytes) != hash {
                bad.push(file.clone());
            }
        }
    }
    Ok(bad)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lcg_is_pinned() {
        let mut r = Lcg::new(0);
        let first: Vec<u32> = (0..3).map(|_| r.next_u32()).collect();
        // x1 = c, x2 = a*c + c, ... computed independently with u128 arithmetic
        let m = 1u128 << 64;
        let (a, c) = (Lcg::MULTIPLIER as u128, Lcg::INCREMENT as u128);
        let mut x = c % m;
        let mut expect = Vec::new();
        for _ in 0..3 {
            x = (a * x + c) % m;
            expect.push((x >> 32) as u32);
        }
        assert_eq!(first, expect);
    }

    #[test]
    fn grid_counts() {
        let (g, e) = toroidal_grid(3, 3).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count(), e.trace_faces().len()), (9, 18, 9));
        let (g, e) = toroidal_grid(3, 4).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count(), e.trace_faces().len()), (12, 24, 12));
        assert!(e.trace_faces().faces.iter().all(|f| f.size() == 4));
        assert_eq!(e.euler_characteristic(), 0);
        assert!(toroidal_grid(2, 3).is_err());
    }

    #[test]
    fn triangulation_is_maximal_planar() {
        let (g, e) = planar_triangulation(12, 7).unwrap();
        assert_eq!(g.edge_count(), 3 * 12 - 6);
        assert!(e.trace_faces().faces.iter().all(|f| f.size() == 3));
        e.check_two_cell().unwrap();
    }

    #[test]
    fn crossed_grid() {
        let (g, e) = toroidal_grid(3, 3).unwrap();
        let (g0, e0) = crossed(&g, &e, 0, 1).unwrap();
        assert_eq!((g0, e0), (g.clone(), e.clone()));
        let (g1, e1) = crossed(&g, &e, 1, 1).unwrap();
        assert_eq!(e1.crossing_vertices().count(), 1);
        let x = e1.crossing_vertices().next().unwrap();
        assert_eq!(e1.degree(x), 4);
        assert_eq!(g1.edge_count(), 20);
        EmbeddedGraph::build_associated(&g1, &e1.to_spec()).unwrap();
        let err = crossed(&g, &e, 10, 1).unwrap_err();
        assert!(err.to_string().contains("room for only 9 of 10"), "{err}");
    }

    #[test]
    fn high_degree_instances() {
        let (g, e) = high_degree_p(11, 4, 3).unwrap();
        assert_eq!(g.max_degree(), 11);
        assert!(g.check_property_p().holds);
        e.check_two_cell().unwrap();
        let again = high_degree_p(11, 4, 3).unwrap().0;
        assert_eq!(g.to_edge_list(), again.to_edge_list());
        assert!(high_degree_p(10, 4, 3).is_err());
    }
}
