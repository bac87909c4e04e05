//! Heuristic and reduce-and-extend solvers.

use serde::{Deserialize, Serialize};

use super::{
    elements, exact_chi_tt, extend_p1, extend_p3, verify, Element, P3Outcome, TotalColoring,
    TotalGraph, DEFAULT_BUDGET,
};
use crate::gen::Lcg;
use crate::graph::{Edge, SimpleGraph, VertexId};
use crate::reducibility::{find_p3_edge, find_reducible_edge};

/// First-fit total coloring. Elements missing from `order` are colored
/// afterwards in the default order (vertices, then edges). `kappa` of the
/// result is the largest color used.
pub fn greedy_total(g: &SimpleGraph, order: Option<&[Element]>) -> TotalColoring {
    let tg = TotalGraph::new(g);
    let mut seq: Vec<usize> = Vec::with_capacity(tg.len());
    let mut queued = vec![false; tg.len()];
    for e in order.unwrap_or(&[]) {
        if let Some(&i) = tg.index.get(e) {
            if !std::mem::replace(&mut queued[i], true) {
                seq.push(i);
            }
        }
    }
    seq.extend((0..tg.len()).filter(|&i| !queued[i]));
    let mut colors = vec![0usize; tg.len()];
    let mut taken: Vec<bool> = Vec::new();
    for i in seq {
        taken.clear();
        taken.resize(tg.adj[i].len() + 2, false);
        for &j in &tg.adj[i] {
            if colors[j] < taken.len() {
                taken[colors[j]] = true;
            }
        }
        colors[i] = (1..).find(|&c| !taken[c]).expect("a free color below degree + 2");
    }
    let kappa = colors.iter().copied().max().unwrap_or(0);
    tg.to_coloring(&colors, kappa)
}

/// Min-conflicts repair of `start` into the palette `1..=kappa`.
///
/// Out-of-palette elements are first moved to their least-conflicting
/// color; then a random conflicting element is recolored with its
/// least-conflicting color (smallest on ties, a random color one time in
/// ten) until no conflict remains or `budget` recolorings are spent.
/// Returns `None` on failure.
pub fn local_repair(
    g: &SimpleGraph,
    start: &TotalColoring,
    kappa: usize,
    budget: usize,
    seed: u64,
) -> Option<TotalColoring> {
    if kappa == 0 {
        return (g.vertex_count() == 0).then(|| TotalColoring::new(0));
    }
    let tg = TotalGraph::new(g);
    let n = tg.len();
    let stride = kappa + 1;
    let mut colors = tg.colors_of(start);
    // count[i * stride + c]: neighbours of i with color c
    let mut count = vec![0u32; n * stride];
    for c in colors.iter_mut().filter(|c| **c > kappa) {
        *c = 0;
    }
    for i in 0..n {
        if colors[i] > 0 {
            for &j in &tg.adj[i] {
                count[j * stride + colors[i]] += 1;
            }
        }
    }
    let best_color = |count: &[u32], i: usize| {
        (1..=kappa)
            .min_by_key(|&c| count[i * stride + c])
            .expect("kappa >= 1")
    };
    let assign = |colors: &mut Vec<usize>, count: &mut Vec<u32>, i: usize, c: usize| {
        let old = colors[i];
        for &j in &tg.adj[i] {
            if old > 0 {
                count[j * stride + old] -= 1;
            }
            count[j * stride + c] += 1;
        }
        colors[i] = c;
    };
    for i in 0..n {
        if colors[i] == 0 {
            let c = best_color(&count, i);
            assign(&mut colors, &mut count, i, c);
        }
    }
    let conflicted = |colors: &[usize], count: &[u32], i: usize| count[i * stride + colors[i]] > 0;
    let mut list: Vec<usize> = (0..n).filter(|&i| conflicted(&colors, &count, i)).collect();
    let mut listed = vec![false; n];
    for &i in &list {
        listed[i] = true;
    }
    let mut rng = Lcg::new(seed);
    let mut spent = 0;
    loop {
        // drop stale entries
        while let Some(pos) = (!list.is_empty()).then(|| rng.below(list.len())) {
            let i = list[pos];
            if conflicted(&colors, &count, i) {
                break;
            }
            list.swap_remove(pos);
            listed[i] = false;
        }
        if list.is_empty() {
            return Some(tg.to_coloring(&colors, kappa));
        }
        if spent >= budget {
            return None;
        }
        spent += 1;
        let i = list[rng.below(list.len())];
        let c = if rng.chance(1, 10) {
            rng.range(1, kappa)
        } else {
            let cur = colors[i];
            (1..=kappa)
                .filter(|&c| c != cur)
                .min_by_key(|&c| count[i * stride + c])
                .unwrap_or(cur)
        };
        if c == colors[i] {
            continue;
        }
        assign(&mut colors, &mut count, i, c);
        for &j in &tg.adj[i] {
            if colors[j] == c && !listed[j] {
                listed[j] = true;
                list.push(j);
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveOptions {
    /// Target palette; `None` means Δ + 2.
    pub kappa: Option<usize>,
    /// Element cap for the exact base-case solver.
    pub budget: usize,
    pub seed: u64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            kappa: None,
            budget: DEFAULT_BUDGET,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveResult {
    pub coloring: TotalColoring,
    pub colors_used: usize,
    pub kappa_target: usize,
    pub met_bound: bool,
    pub trace: Vec<String>,
}

enum Step {
    P1(VertexId, VertexId),
    P3(VertexId, VertexId, VertexId),
}

/// Reduce-and-extend solver aiming at `κ = Δ + 2` colors.
///
/// Edges `uv` with `2·deg(v) ≤ κ − 1` and `deg(u) + deg(v) ≤ κ` are deleted
/// first, then triangle edges with `deg(u) + deg(v) = κ + 1`; the remainder
/// is colored exactly when small enough, else by greedy plus local repair.
/// The deleted edges are put back in reverse order with [`extend_p1`] and
/// [`extend_p3`]. If the base needed more than κ colors the extensions run
/// at that larger palette, using the P1 procedure throughout.
pub fn solve_tcc(g: &SimpleGraph, opts: &SolveOptions) -> SolveResult {
    let kappa = opts.kappa.unwrap_or(g.max_degree() + 2);
    let mut trace = Vec::new();
    let mut h = g.clone();
    let mut steps = Vec::new();
    loop {
        if let Some(e) = find_reducible_edge(&h, kappa) {
            steps.push(Step::P1(e.0, e.1));
            h.remove_edge(Edge::new(e.0, e.1)).expect("edge present");
        } else if let Some((u, v, w)) = find_p3_edge(&h, kappa) {
            steps.push(Step::P3(u, v, w));
            h.remove_edge(Edge::new(u, v)).expect("edge present");
        } else {
            break;
        }
    }
    let p1 = steps.iter().filter(|s| matches!(s, Step::P1(..))).count();
    trace.push(format!("reduced {p1} P1 edge(s), {} P3 edge(s)", steps.len() - p1));

    let size = h.vertex_count() + h.edge_count();
    let mut base = if size <= opts.budget {
        let (chi, c) = exact_chi_tt(&h, opts.budget).expect("within budget");
        trace.push(format!("base: exact on {size} elements, chi'' = {chi}"));
        c
    } else {
        heuristic(&h, kappa, opts.seed, &mut trace, "base")
    };
    let wide = base.max_color().max(kappa);
    base.kappa = wide;

    let mut c = base;
    let mut exhausted = false;
    for step in steps.iter().rev() {
        match *step {
            Step::P1(u, v) => {
                h.add_edge(u, v).expect("restoring a deleted edge");
                c = extend_p1(&h, u, v, &c, wide).expect("P1 preconditions hold by construction");
            }
            Step::P3(u, v, w) => {
                h.add_edge(u, v).expect("restoring a deleted edge");
                if wide > kappa {
                    c = extend_p1(&h, u, v, &c, wide).expect("sum kappa + 1 <= wide palette");
                    continue;
                }
                match extend_p3(&h, u, v, w, &c, kappa).expect("P3 preconditions hold by construction") {
                    P3Outcome::Extended { coloring, .. } => c = coloring,
                    P3Outcome::Exhausted(cert) => {
                        trace.push(format!("P3 cascade exhausted at ({}, {}) with w = {}", cert.u, cert.v, cert.w));
                        exhausted = true;
                        break;
                    }
                }
            }
        }
    }
    if exhausted {
        c = heuristic(g, kappa, opts.seed, &mut trace, "fallback");
    } else if !steps.is_empty() {
        trace.push(format!("extended back to the full graph at palette {wide}"));
    }
    debug_assert!(c.uncolored(g).is_empty());
    let colors_used = c.max_color();
    c.kappa = colors_used.max(kappa);
    assert!(
        verify(g, &c).map(|v| v.is_empty()).unwrap_or(false),
        "solver produced an invalid coloring"
    );
    SolveResult {
        met_bound: colors_used <= kappa,
        coloring: c,
        colors_used,
        kappa_target: kappa,
        trace,
    }
}

fn heuristic(g: &SimpleGraph, kappa: usize, seed: u64, trace: &mut Vec<String>, label: &str) -> TotalColoring {
    let mut order = elements(g);
    order.sort_by_key(|e| match *e {
        Element::Vertex(v) => std::cmp::Reverse(2 * g.degree(v)),
        Element::Edge(Edge(a, b)) => std::cmp::Reverse(g.degree(a) + g.degree(b)),
    });
    let greedy = greedy_total(g, Some(&order));
    if greedy.max_color() <= kappa {
        trace.push(format!("{label}: greedy with {} colors", greedy.max_color()));
        return greedy;
    }
    let budget = 50 * (g.vertex_count() + g.edge_count());
    match local_repair(g, &greedy, kappa, budget, seed) {
        Some(c) => {
            trace.push(format!("{label}: greedy {} colors, repaired to {kappa}", greedy.max_color()));
            c
        }
        None => {
            trace.push(format!(
                "{label}: greedy {} colors, repair failed within {budget} recolorings",
                greedy.max_color()
            ));
            greedy
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ok(g: &SimpleGraph, c: &TotalColoring) -> bool {
        verify(g, c).map(|v| v.is_empty()).unwrap_or(false)
    }

    #[test]
    fn greedy_basics() {
        let star = SimpleGraph::from_edges((1..=5).map(|i| (0, i))).unwrap();
        let edges_first: Vec<Element> = star.edges().map(Element::Edge).collect();
        let c = greedy_total(&star, Some(&edges_first));
        assert!(ok(&star, &c));
        assert_eq!(c.max_color(), 6);
        assert_eq!(greedy_total(&SimpleGraph::new(), None), TotalColoring::new(0));
        let k4 = SimpleGraph::from_edges([(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let c = greedy_total(&k4, None);
        assert!(ok(&k4, &c) && c.max_color() <= 7);
    }

    #[test]
    fn repair_reaches_optimum_on_k4() {
        let k4 = SimpleGraph::from_edges([(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let c = local_repair(&k4, &greedy_total(&k4, None), 5, 10_000, 3).unwrap();
        assert!(ok(&k4, &c));
        assert!(local_repair(&k4, &greedy_total(&k4, None), 4, 2_000, 3).is_none());
    }

    #[test]
    fn solver_examples() {
        let k4 = SimpleGraph::from_edges([(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let r = solve_tcc(&k4, &SolveOptions::default());
        assert!(r.met_bound);
        assert_eq!(r.colors_used, 5);

        let (grid, _) = crate::gen::toroidal_grid(3, 3).unwrap();
        let r = solve_tcc(&grid, &SolveOptions::default());
        assert!(ok(&grid, &r.coloring));
        assert!(r.colors_used <= 6);
    }
}
