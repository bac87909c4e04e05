mod oracle;

use std::collections::BTreeSet;

use proptest::prelude::*;
use tcc_core::coloring::{
    elements, exact_chi_tt, extend_p1, extend_p3, greedy_total, local_repair, solve_tcc, verify,
    Element, P3Outcome, P3Step, SolveOptions, TotalColoring, Violation,
};
use tcc_core::gen::Lcg;
use tcc_core::reducibility::{connected_graphs, for_each_total_coloring, Enumeration};
use tcc_core::{Edge, SimpleGraph};

fn proper(g: &SimpleGraph, c: &TotalColoring) -> bool {
    verify(g, c).map(|v| v.is_empty()).unwrap_or(false)
}

fn edge_pairs(g: &SimpleGraph) -> Vec<(usize, usize)> {
    g.edges().map(|Edge(a, b)| (a, b)).collect()
}

#[test]
fn exact_matches_brute_force_up_to_twelve_elements() {
    let mut compared = 0;
    for n in 1..=6 {
        for g in connected_graphs(n) {
            if g.vertex_count() + g.edge_count() > 12 {
                continue;
            }
            let (chi, w) = exact_chi_tt(&g, 32).unwrap();
            assert_eq!(chi, oracle::brute_chi(n, &edge_pairs(&g)), "{}", g.to_edge_list());
            assert!(chi > g.max_degree());
            assert!(proper(&g, &w));
            compared += 1;
        }
    }
    assert!(compared > 40);
}

/// Conflicting pairs found by scanning every pair of elements.
fn scan(g: &SimpleGraph, c: &TotalColoring) -> BTreeSet<(Element, Element)> {
    let els = elements(g);
    let mut out = BTreeSet::new();
    for (i, &a) in els.iter().enumerate() {
        for &b in &els[i + 1..] {
            let related = match (a, b) {
                (Element::Vertex(x), Element::Vertex(y)) => g.has_edge(x, y),
                (Element::Vertex(x), Element::Edge(e)) | (Element::Edge(e), Element::Vertex(x)) => e.contains(x),
                (Element::Edge(e), Element::Edge(f)) => e.contains(f.0) || e.contains(f.1),
            };
            if related && c.get(a) == c.get(b) {
                out.insert((a.min(b), a.max(b)));
            }
        }
    }
    out
}

fn as_pair(v: &Violation) -> Option<(Element, Element)> {
    let (a, b) = match *v {
        Violation::AdjacentVertices { u, v, .. } => (Element::Vertex(u), Element::Vertex(v)),
        Violation::AdjacentEdges { e, f, .. } => (Element::Edge(e), Element::Edge(f)),
        Violation::EdgeEndpoint { e, v, .. } => (Element::Edge(e), Element::Vertex(v)),
        Violation::OutOfPalette { .. } => return None,
    };
    Some((a.min(b), a.max(b)))
}

fn small_graph() -> impl Strategy<Value = SimpleGraph> {
    (1usize..=6)
        .prop_flat_map(|n| (Just(n), proptest::collection::vec(any::<bool>(), n * (n - 1) / 2)))
        .prop_map(|(n, bits)| {
            let mut g = SimpleGraph::new().with_vertices(0..n);
            let mut k = 0;
            for j in 1..n {
                for i in 0..j {
                    if bits[k] {
                        g.add_edge(i, j).unwrap();
                    }
                    k += 1;
                }
            }
            g
        })
}

proptest! {
    #[test]
    fn verify_agrees_with_pairwise_scan(g in small_graph(), seed in any::<u64>(), kappa in 1usize..6) {
        prop_assume!(g.vertex_count() + g.edge_count() <= 20);
        let mut rng = Lcg::new(seed);
        let mut c = TotalColoring::new(kappa);
        for e in elements(&g) {
            c.set(e, rng.range(1, kappa));
        }
        let reported: BTreeSet<_> = verify(&g, &c).unwrap().iter().filter_map(as_pair).collect();
        prop_assert_eq!(reported, scan(&g, &c));
    }

    #[test]
    fn greedy_always_verifies(g in small_graph(), seed in any::<u64>()) {
        let mut order = elements(&g);
        Lcg::new(seed).shuffle(&mut order);
        let c = greedy_total(&g, Some(&order));
        prop_assert!(proper(&g, &c));
        prop_assert!(c.max_color() <= 2 * g.max_degree() + 1);
    }

    #[test]
    fn solver_always_verifies(g in small_graph(), seed in any::<u64>()) {
        let r = solve_tcc(&g, &SolveOptions { seed, ..Default::default() });
        prop_assert!(proper(&g, &r.coloring));
        prop_assert_eq!(r.colors_used, r.coloring.max_color());
        // at most 21 elements: the exact base always reaches the bound
        prop_assert!(r.met_bound);
    }
}

#[test]
fn random_trees_meet_the_bound() {
    let mut rng = Lcg::new(11);
    for n in 2..60 {
        let g = SimpleGraph::from_edges((1..n).map(|v| (rng.below(v), v))).unwrap();
        let r = solve_tcc(&g, &SolveOptions::default());
        assert!(r.met_bound && proper(&g, &r.coloring), "tree on {n} vertices");
    }
}

#[test]
fn p1_at_the_boundary() {
    // deg(u) + deg(v) = kappa exactly, across random bases
    let mut rng = Lcg::new(5);
    let mut trials = 0;
    for _ in 0..200 {
        // u of degree 4, v of degree 2, kappa = 6 = Delta + 2
        let mut g = SimpleGraph::from_edges([(0, 1), (0, 2), (0, 3), (0, 4), (1, 5), (5, 6), (2, 3)]).unwrap();
        if rng.chance(1, 2) {
            g.add_edge(4, 6).unwrap();
        }
        let kappa = 6;
        assert_eq!(g.degree(0) + g.degree(1), kappa);
        let h = g.delete_edge(Edge::new(0, 1)).unwrap();
        let start = greedy_total(&h, None);
        let Some(base) = local_repair(&h, &start, kappa, 10_000, rng.next_u32() as u64) else {
            continue;
        };
        let out = extend_p1(&g, 0, 1, &base, kappa).unwrap();
        assert!(proper(&g, &out));
        trials += 1;
    }
    assert!(trials > 150);
}

/// A triangle `uvw` with `deg(u) + deg(v) = Δ + 3` and
/// `3 ≤ deg(v) ≤ ⌊(Δ + 1)/2⌋`, a separate vertex of degree Δ, and random
/// extra edges away from `u` and `v` keeping the maximum degree at Δ.
fn p3_instance(delta: usize, rng: &mut Lcg) -> SimpleGraph {
    let j = rng.range(0, delta.div_ceil(2) - 3);
    let (du, dv) = (delta - j, 3 + j);
    let (u, v, w) = (0, 1, 2);
    let mut g = SimpleGraph::from_edges([(u, v), (u, w), (v, w)]).unwrap();
    let mut next = 3;
    while g.degree(u) < du {
        g.add_edge(u, next).unwrap();
        next += 1;
    }
    while g.degree(v) < dv {
        let x = if rng.chance(1, 2) && next > 3 { rng.range(3, next - 1) } else { next };
        if x == next {
            next += 1;
        }
        if !g.has_edge(v, x) {
            g.add_edge(v, x).unwrap();
        }
    }
    let hub = next;
    next += 1;
    while g.degree(hub) < delta {
        let x = rng.range(2, next);
        if x == next {
            next += 1;
        }
        if x != hub && !g.has_edge(hub, x) && (x == next - 1 || g.degree(x) < delta) {
            g.add_edge(hub, x).unwrap();
        }
    }
    for _ in 0..3 * delta {
        let a = rng.range(2, next - 1);
        let b = rng.range(2, next - 1);
        if a != b && !g.has_edge(a, b) && g.degree(a) < delta && g.degree(b) < delta {
            g.add_edge(a, b).unwrap();
        }
    }
    g
}

#[test]
fn p3_randomized_suite() {
    let mut rng = Lcg::new(2024);
    let mut steps = [0usize; 3];
    let mut calls = 0;
    for round in 0..400 {
        let delta = 5 + round % 6;
        let g = p3_instance(delta, &mut rng);
        let kappa = g.max_degree() + 2;
        assert_eq!(g.max_degree(), delta);
        assert_eq!(g.degree(0) + g.degree(1), kappa + 1);
        let h = g.delete_edge(Edge::new(0, 1)).unwrap();
        for k in 0..5 {
            let mut order = elements(&h);
            rng.shuffle(&mut order);
            let start = greedy_total(&h, Some(&order));
            let Some(base) = local_repair(&h, &start, kappa, 50_000, (round * 5 + k) as u64) else {
                continue;
            };
            calls += 1;
            match extend_p3(&g, 0, 1, 2, &base, kappa).unwrap() {
                P3Outcome::Extended { coloring, step } => {
                    assert!(proper(&g, &coloring));
                    steps[step as usize] += 1;
                }
                P3Outcome::Exhausted(cert) => panic!("cascade exhausted: {cert:?}"),
            }
        }
    }
    assert!(calls > 1000, "{calls}");
    // the later branches are reached, not only the free color
    assert!(steps[1] + steps[2] > 0, "{steps:?}");
}

#[test]
fn p3_outcome_is_invariant_under_renaming() {
    let mut rng = Lcg::new(9);
    let g = p3_instance(5, &mut rng);
    let kappa = g.max_degree() + 2;
    let h = g.delete_edge(Edge::new(0, 1)).unwrap();
    let mut seen = 0;
    for_each_total_coloring(&h, kappa, Enumeration::Shuffled(&mut Lcg::new(3)), |c| {
        let step = |c: &TotalColoring| match extend_p3(&g, 0, 1, 2, c, kappa).unwrap() {
            P3Outcome::Extended { step, .. } => Some(step),
            P3Outcome::Exhausted(_) => None,
        };
        let mut perm: Vec<usize> = (1..=kappa).collect();
        rng.shuffle(&mut perm);
        let mut renamed = c.clone();
        for col in renamed.vertex_color.values_mut().chain(renamed.edge_color.values_mut()) {
            *col = perm[*col - 1];
        }
        assert_eq!(step(c), step(&renamed));
        seen += 1;
        seen < 300
    });
    assert_eq!(seen, 300);
}

#[test]
fn p3_single_step_when_a_color_is_free() {
    // kappa = 7, u of degree 5 and v of degree 3 on triangle uvw; a
    // coloring of G - uv using few colors around u leaves one free
    let g = SimpleGraph::from_edges([(0, 1), (0, 2), (1, 2), (0, 3), (0, 4), (0, 5), (1, 6)]).unwrap();
    let kappa = 7;
    let h = g.delete_edge(Edge::new(0, 1)).unwrap();
    let (_, base) = exact_chi_tt(&h, 32).unwrap();
    let mut base = base;
    base.kappa = kappa;
    match extend_p3(&g, 0, 1, 2, &base, kappa).unwrap() {
        P3Outcome::Extended { step, coloring } => {
            assert_eq!(step, P3Step::FreeColor);
            assert!(proper(&g, &coloring));
        }
        P3Outcome::Exhausted(c) => panic!("{c:?}"),
    }
}

#[test]
fn grid_and_k4_solver_examples() {
    let (grid, _) = tcc_core::gen::toroidal_grid(3, 3).unwrap();
    let r = solve_tcc(&grid, &SolveOptions::default());
    assert!(proper(&grid, &r.coloring) && r.colors_used <= 6);

    let k4 = SimpleGraph::from_edges([(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
    let r = solve_tcc(&k4, &SolveOptions::default());
    assert_eq!((r.colors_used, r.met_bound), (5, true));
}
