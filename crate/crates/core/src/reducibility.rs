//! Structural properties of κ-deletion-minimal graphs, as refutation
//! predicates, and brute-force validation of the extension procedures on
//! all small connected graphs.

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use crate::coloring::{extend_p1, extend_p3, verify, P3Certificate, P3Outcome, TotalColoring, TotalGraph};
use crate::error::{Error, Result};
use crate::gen::Lcg;
use crate::graph::{Edge, SimpleGraph, VertexId};

fn small(g: &SimpleGraph, v: VertexId, kappa: usize) -> bool {
    2 * g.degree(v) < kappa
}

/// Oriented edges `(u, v)` in lexicographic edge order, `(a, b)` before
/// `(b, a)`.
fn oriented(g: &SimpleGraph) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
    g.edges().flat_map(|Edge(a, b)| [(a, b), (b, a)])
}

fn p1_reducible(g: &SimpleGraph, u: VertexId, v: VertexId, kappa: usize) -> bool {
    small(g, v, kappa) && g.degree(u) + g.degree(v) <= kappa
}

/// First `(u, v)` with `deg(v) ≤ ⌊(κ−1)/2⌋` and `deg(u) + deg(v) ≤ κ`.
pub fn find_reducible_edge(g: &SimpleGraph, kappa: usize) -> Option<(VertexId, VertexId)> {
    oriented(g).find(|&(u, v)| p1_reducible(g, u, v, kappa))
}

/// First `(u, v, w)` with `uvw` a triangle, `deg(v) ≤ ⌊(κ−1)/2⌋` and
/// `deg(u) + deg(v) = κ + 1`; `w` is the smallest common neighbour.
pub fn find_p3_edge(g: &SimpleGraph, kappa: usize) -> Option<(VertexId, VertexId, VertexId)> {
    oriented(g)
        .filter(|&(u, v)| small(g, v, kappa) && g.degree(u) + g.degree(v) == kappa + 1)
        .find_map(|(u, v)| g.common_neighbors(u, v).first().map(|&w| (u, v, w)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Property {
    P1,
    P2,
    P3,
    P4,
    P5,
    Claim1,
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// A concrete violation: the vertices involved and what is wrong with them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub vertices: Vec<VertexId>,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyCheck {
    pub property: Property,
    /// `false` when the property's hypothesis (κ ≥ 7, κ ≥ 9, property P)
    /// does not hold; such checks never fail.
    pub applicable: bool,
    pub passed: bool,
    pub witnesses: Vec<Witness>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimalityAudit {
    pub kappa: usize,
    pub results: Vec<PropertyCheck>,
}

impl MinimalityAudit {
    pub fn get(&self, p: Property) -> &PropertyCheck {
        self.results.iter().find(|r| r.property == p).expect("every property is audited")
    }

    /// `false` iff some check certifies that `g` is not κ-deletion-minimal.
    pub fn could_be_minimal(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("kappa = {}\n", self.kappa);
        for r in &self.results {
            let status = match (r.applicable, r.passed) {
                (false, _) => "n/a",
                (true, true) => "pass",
                (true, false) => "FAIL",
            };
            writeln!(out, "{}: {status}", r.property).unwrap();
            for w in &r.witnesses {
                writeln!(out, "  {:?}: {}", w.vertices, w.note).unwrap();
            }
        }
        out
    }
}

fn check(property: Property, applicable: bool, witnesses: Vec<Witness>) -> PropertyCheck {
    PropertyCheck {
        property,
        applicable,
        passed: !applicable || witnesses.is_empty(),
        witnesses: if applicable { witnesses } else { Vec::new() },
    }
}

/// Evaluates P1–P5 and Claim 1 on `g`. Requires `κ ≥ Δ + 2`.
pub fn audit_minimality(g: &SimpleGraph, kappa: usize) -> Result<MinimalityAudit> {
    let needed = g.max_degree() + 2;
    if kappa < needed {
        return Err(Error::KappaTooSmall { kappa, needed });
    }
    let d = |v| g.degree(v);
    let mut results = Vec::new();

    let p1 = oriented(g)
        .filter(|&(u, v)| p1_reducible(g, u, v, kappa))
        .map(|(u, v)| Witness {
            vertices: vec![u, v],
            note: format!("deg({v}) = {} is small and deg({u}) + deg({v}) = {} <= {kappa}", d(v), d(u) + d(v)),
        })
        .collect();
    results.push(check(Property::P1, true, p1));

    let mut p2: Vec<Witness> = g
        .vertices()
        .filter(|&v| d(v) < 3)
        .map(|v| Witness {
            vertices: vec![v],
            note: format!("degree {} < 3", d(v)),
        })
        .collect();
    if !g.is_connected() {
        p2.push(Witness {
            vertices: Vec::new(),
            note: "graph is disconnected".into(),
        });
    }
    p2.extend(g.articulation_points().into_iter().map(|v| Witness {
        vertices: vec![v],
        note: "cut vertex".into(),
    }));
    results.push(check(Property::P2, true, p2));

    let p3 = oriented(g)
        .filter(|&(u, v)| small(g, v, kappa) && d(u) + d(v) == kappa + 1)
        .filter_map(|(u, v)| {
            let w = *g.common_neighbors(u, v).first()?;
            Some(Witness {
                vertices: vec![u, v, w],
                note: format!("deg({u}) + deg({v}) = {} and {u}{v} lies on triangle with {w}", kappa + 1),
            })
        })
        .collect();
    results.push(check(Property::P3, true, p3));

    let mut p4 = Vec::new();
    for v in g.vertices().filter(|&v| d(v) == 3) {
        let nb: Vec<VertexId> = g.neighbors(v).collect();
        for (i, &a) in nb.iter().enumerate() {
            for &b in &nb[i + 1..] {
                if g.has_edge(a, b) {
                    p4.push(Witness {
                        vertices: vec![v, a, b],
                        note: format!("3-vertex {v} has adjacent neighbours {a} and {b}"),
                    });
                }
            }
        }
    }
    results.push(check(Property::P4, kappa >= 7, p4));

    let mut p5 = Vec::new();
    for v in g.vertices().filter(|&v| d(v) == 4) {
        for x in g.neighbors(v) {
            let common = g.common_neighbors(v, x);
            if common.len() >= 2 {
                p5.push(Witness {
                    vertices: vec![v, x, common[0], common[1]],
                    note: format!("edge {v}{x} at 4-vertex {v} lies on {} triangles", common.len()),
                });
            }
        }
    }
    results.push(check(Property::P5, kappa >= 9, p5));

    let claim1 = g
        .find_k4s()
        .into_iter()
        .map(|q| Witness {
            vertices: q.to_vec(),
            note: "four pairwise adjacent vertices".into(),
        })
        .collect();
    results.push(check(Property::Claim1, g.check_property_p().holds, claim1));

    Ok(MinimalityAudit { kappa, results })
}

/// All connected graphs on `n` vertices up to isomorphism, on vertex set
/// `0..n`, in increasing order of canonical code.
///
/// Each graph on `n` vertices is obtained from one on `n − 1` vertices by
/// adding a vertex (a connected graph always has a non-cut vertex), and
/// duplicates are removed by a canonical code: the largest adjacency
/// bitstring over all vertex permutations. Feasible up to `n = 8`.
pub fn connected_graphs(n: usize) -> Vec<SimpleGraph> {
    assert!(n <= 8, "enumeration is limited to 8 vertices");
    if n == 0 {
        return Vec::new();
    }
    let mut level: BTreeSet<u64> = BTreeSet::from([0]);
    for k in 2..=n {
        let perms = permutations(k);
        let mut next = BTreeSet::new();
        for &code in &level {
            let prev = decode(code, k - 1);
            for mask in 1u32..(1 << (k - 1)) {
                let mut adj = prev.clone();
                adj.push(0);
                for (i, row) in adj.iter_mut().enumerate().take(k - 1) {
                    if mask >> i & 1 == 1 {
                        *row |= 1 << (k - 1);
                    }
                }
                adj[k - 1] = mask;
                next.insert(canonical(&adj, &perms));
            }
        }
        level = next;
    }
    level.into_iter().map(|c| to_graph(&decode(c, n))).collect()
}

/// Bit `pair_index(i, j)` for `i < j`, pairs ordered (0,1), (0,2), (1,2), ...
fn pair_index(i: usize, j: usize) -> usize {
    j * (j - 1) / 2 + i
}

fn encode(adj: &[u32], perm: &[usize]) -> u64 {
    let mut code = 0u64;
    for j in 1..adj.len() {
        for i in 0..j {
            if adj[perm[i]] >> perm[j] & 1 == 1 {
                code |= 1 << pair_index(i, j);
            }
        }
    }
    code
}

fn canonical(adj: &[u32], perms: &[Vec<usize>]) -> u64 {
    perms.iter().map(|p| encode(adj, p)).max().expect("at least one permutation")
}

fn decode(code: u64, n: usize) -> Vec<u32> {
    let mut adj = vec![0u32; n];
    for j in 1..n {
        for i in 0..j {
            if code >> pair_index(i, j) & 1 == 1 {
                adj[i] |= 1 << j;
                adj[j] |= 1 << i;
            }
        }
    }
    adj
}

fn to_graph(adj: &[u32]) -> SimpleGraph {
    let mut g = SimpleGraph::new().with_vertices(0..adj.len());
    for (i, row) in adj.iter().enumerate() {
        for j in i + 1..adj.len() {
            if row >> j & 1 == 1 {
                g.add_edge(i, j).expect("simple");
            }
        }
    }
    g
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    fn rec(k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == cur.len() {
            out.push(cur.clone());
            return;
        }
        for i in k..cur.len() {
            cur.swap(k, i);
            rec(k + 1, cur, out);
            cur.swap(k, i);
        }
    }
    rec(0, &mut cur, &mut out);
    out
}

/// Which colorings [`for_each_total_coloring`] visits.
pub enum Enumeration<'a> {
    /// Every proper coloring within `1..=kappa`.
    All,
    /// One coloring per class under renaming of colors: colors appear in
    /// increasing order of first use along the element order.
    UpToRenaming,
    /// Every proper coloring, colors tried in a random order at each element.
    Shuffled(&'a mut Lcg),
}

/// Calls `visit` on proper total colorings of `g` within `1..=kappa`, in
/// depth-first order over elements (vertices, then edges), until it returns
/// `false`.
pub fn for_each_total_coloring<F>(g: &SimpleGraph, kappa: usize, mut mode: Enumeration<'_>, mut visit: F)
where
    F: FnMut(&TotalColoring) -> bool,
{
    let tg = TotalGraph::new(g);
    let mut colors = vec![0usize; tg.len()];
    fn rec<F: FnMut(&TotalColoring) -> bool>(
        tg: &TotalGraph,
        i: usize,
        max_used: usize,
        kappa: usize,
        colors: &mut Vec<usize>,
        mode: &mut Enumeration<'_>,
        visit: &mut F,
    ) -> bool {
        if i == tg.len() {
            return visit(&tg.to_coloring(colors, kappa));
        }
        let top = match mode {
            Enumeration::UpToRenaming => kappa.min(max_used + 1),
            _ => kappa,
        };
        let mut palette: Vec<usize> = (1..=top).collect();
        if let Enumeration::Shuffled(r) = mode {
            r.shuffle(&mut palette);
        }
        for c in palette {
            // neighbours of i with a smaller index are already colored
            if tg.adj[i].iter().any(|&j| j < i && colors[j] == c) {
                continue;
            }
            colors[i] = c;
            if !rec(tg, i + 1, max_used.max(c), kappa, colors, mode, visit) {
                colors[i] = 0;
                return false;
            }
        }
        colors[i] = 0;
        true
    }
    rec(&tg, 0, 0, kappa, &mut colors, &mut mode, &mut visit);
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionReport {
    pub n_max: usize,
    /// Colorings tried per (graph, κ, edge) when sampling; `None` means
    /// all colorings up to renaming of colors.
    pub sample_cap: Option<usize>,
    /// (graph, κ) pairs examined.
    pub instances: usize,
    /// Extension calls made.
    pub checks: usize,
    pub p1_checks: usize,
    pub p3_checks: usize,
    /// Calls that errored or returned a coloring failing verification.
    pub failures: Vec<String>,
    /// Exhausted triangle cascades.
    pub certificates: Vec<P3Certificate>,
}

impl ExtensionReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.certificates.is_empty()
    }
}

/// Runs the extension procedures on every connected graph with at most
/// `n_max` vertices, for κ ∈ {Δ+2, Δ+3}, every eligible oriented edge, and
/// every proper κ-total-coloring of `g − uv` up to renaming of colors (or
/// `sample_cap` colorings, drawn by randomized depth-first search in batches
/// of up to 20 per restart).
///
/// Renaming colors cannot change whether a free color exists at any step of
/// either procedure, so one representative per renaming class suffices for
/// the exhaustive mode.
pub fn brute_validate_extensions(n_max: usize, sample_cap: Option<usize>, seed: u64) -> ExtensionReport {
    assert!(n_max <= 7, "enumeration is limited to 7 vertices here");
    let mut report = ExtensionReport {
        n_max,
        sample_cap,
        ..Default::default()
    };
    let mut rng = Lcg::new(seed);
    for n in 1..=n_max {
        for g in connected_graphs(n) {
            let delta = g.max_degree();
            for kappa in [delta + 2, delta + 3] {
                report.instances += 1;
                for (u, v) in oriented(&g) {
                    let sum = g.degree(u) + g.degree(v);
                    let p1 = small(&g, v, kappa) && sum <= kappa;
                    let w = g.common_neighbors(u, v).first().copied();
                    let p3 = small(&g, v, kappa) && sum == kappa + 1 && w.is_some();
                    if !p1 && !p3 {
                        continue;
                    }
                    let h = g.delete_edge(Edge::new(u, v)).expect("edge present");
                    let mut one = |c: &TotalColoring| {
                        report.checks += 1;
                        let label = || format!("{} at kappa {kappa}, edge ({u},{v}), base {:?}", g.to_edge_list().replace('\n', " "), c.to_text());
                        if p1 {
                            report.p1_checks += 1;
                            match extend_p1(&g, u, v, c, kappa) {
                                Ok(out) if verify(&g, &out).map(|x| x.is_empty()).unwrap_or(false) => {}
                                Ok(_) => report.failures.push(format!("P1 result does not verify: {}", label())),
                                Err(e) => report.failures.push(format!("P1 rejected: {e}: {}", label())),
                            }
                        } else {
                            report.p3_checks += 1;
                            match extend_p3(&g, u, v, w.expect("triangle"), c, kappa) {
                                Ok(P3Outcome::Extended { coloring, .. })
                                    if verify(&g, &coloring).map(|x| x.is_empty()).unwrap_or(false) => {}
                                Ok(P3Outcome::Extended { .. }) => {
                                    report.failures.push(format!("P3 result does not verify: {}", label()))
                                }
                                Ok(P3Outcome::Exhausted(cert)) => report.certificates.push(*cert),
                                Err(e) => report.failures.push(format!("P3 rejected: {e}: {}", label())),
                            }
                        }
                    };
                    match sample_cap {
                        None => for_each_total_coloring(&h, kappa, Enumeration::UpToRenaming, |c| {
                            one(c);
                            true
                        }),
                        Some(cap) => {
                            let mut taken = 0;
                            let mut restarts = 0;
                            while taken < cap && restarts < cap {
                                restarts += 1;
                                let batch = 20.min(cap - taken);
                                let mut got = 0;
                                for_each_total_coloring(&h, kappa, Enumeration::Shuffled(&mut rng), |c| {
                                    one(c);
                                    got += 1;
                                    got < batch
                                });
                                if got == 0 {
                                    break;
                                }
                                taken += got;
                            }
                        }
                    }
                }
            }
        }
    }
    report
}
