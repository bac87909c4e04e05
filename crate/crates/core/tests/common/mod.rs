#![allow(dead_code)]

//! Hand-built local configurations around one target vertex, drawn with
//! straight lines so the rotation system is read off coordinates.
//!
//! The target sits at the origin with its neighbours on the unit circle.
//! Face `i` lies between neighbours `i` and `i+1`; a triangle is closed by a
//! chord, a quadrilateral or pentagon by one or two extra vertices further
//! out. Degrees are topped up with pendant vertices pointing outward, so the
//! faces around the target are exactly the ones listed.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::TAU;

use tcc_core::embedding::straight_line_rotation;
use tcc_core::{AugmentedGraph, Edge, Surface, VertexId};

/// Δ used by every golden configuration.
pub const DELTA: usize = 11;
pub const HIGH: usize = 10;
pub const BIG: usize = 7;
pub const SMALL: usize = 4;

#[derive(Clone, Copy, Debug)]
pub enum Nb {
    /// True vertex with this G*-degree.
    True(usize),
    Crossing,
}

#[derive(Clone, Copy, Debug)]
pub enum F {
    Tri,
    /// Closing chord is a new edge.
    TriNew,
    /// Extra vertex of the given degree.
    Quad(usize),
    Pent(usize, usize),
}

pub struct Config {
    pub crossing_center: bool,
    pub spokes: Vec<(Nb, bool)>,
    pub faces: Vec<F>,
}

pub fn t(d: usize) -> (Nb, bool) {
    (Nb::True(d), false)
}

pub fn t_new(d: usize) -> (Nb, bool) {
    (Nb::True(d), true)
}

pub fn x() -> (Nb, bool) {
    (Nb::Crossing, false)
}

pub fn build(cfg: &Config) -> AugmentedGraph {
    let k = cfg.spokes.len();
    assert_eq!(cfg.faces.len(), k);
    let gap = TAU / k as f64;
    let polar = |r: f64, a: f64| (r * a.cos(), r * a.sin());
    let mut pts: BTreeMap<VertexId, (f64, f64)> = BTreeMap::new();
    let mut seg: Vec<(VertexId, VertexId)> = Vec::new();
    let mut new_pairs = BTreeSet::new();
    let mut crossings = BTreeSet::new();
    // (vertex, radius, angle, wanted degree)
    let mut topped: Vec<(VertexId, f64, f64, usize)> = Vec::new();
    pts.insert(0, (0.0, 0.0));
    if cfg.crossing_center {
        crossings.insert(0);
    }
    let nb = |i: usize| 1 + (i % k);
    let mut next = k + 1;
    for (i, &(kind, new)) in cfg.spokes.iter().enumerate() {
        let a = i as f64 * gap;
        pts.insert(nb(i), polar(1.0, a));
        seg.push((0, nb(i)));
        if new {
            new_pairs.insert(Edge::new(0, nb(i)));
        }
        match kind {
            Nb::True(d) => topped.push((nb(i), 1.0, a, d)),
            Nb::Crossing => {
                crossings.insert(nb(i));
                pts.insert(next, polar(2.5, a));
                seg.push((nb(i), next));
                next += 1;
            }
        }
    }
    for (i, &f) in cfg.faces.iter().enumerate() {
        let a = i as f64 * gap;
        let (u, w) = (nb(i), nb(i + 1));
        match f {
            F::Tri | F::TriNew => {
                seg.push((u, w));
                if matches!(f, F::TriNew) {
                    new_pairs.insert(Edge::new(u, w));
                }
            }
            F::Quad(d) => {
                let at = a + gap / 2.0;
                pts.insert(next, polar(1.7, at));
                seg.extend([(u, next), (next, w)]);
                topped.push((next, 1.7, at, d));
                next += 1;
            }
            F::Pent(d1, d2) => {
                let (a1, a2) = (a + gap / 3.0, a + 2.0 * gap / 3.0);
                pts.insert(next, polar(1.7, a1));
                pts.insert(next + 1, polar(1.7, a2));
                seg.extend([(u, next), (next, next + 1), (next + 1, w)]);
                topped.push((next, 1.7, a1, d1));
                topped.push((next + 1, 1.7, a2, d2));
                next += 2;
            }
        }
    }
    for (v, r, a, want) in topped {
        let have = seg.iter().filter(|&&(p, q)| p == v || q == v).count();
        assert!(want >= have, "vertex {v} already has degree {have} > {want}");
        let p = want - have;
        for j in 0..p {
            let off = if p == 1 {
                0.0
            } else {
                -gap / 8.0 + (gap / 4.0) * j as f64 / (p - 1) as f64
            };
            pts.insert(next, polar(r + 1.0, a + off));
            seg.push((v, next));
            next += 1;
        }
    }
    let rotation = straight_line_rotation(&pts, &seg);
    AugmentedGraph::from_neighbor_rotation_marked(Surface::Plane, &rotation, &crossings, &new_pairs)
        .expect("configuration builds")
}

pub struct Golden {
    pub name: &'static str,
    /// The worked sum this configuration reproduces.
    pub sum: &'static str,
    pub config: Config,
}

fn golden(name: &'static str, sum: &'static str, crossing_center: bool, spokes: Vec<(Nb, bool)>, faces: Vec<F>) -> Golden {
    Golden {
        name,
        sum,
        config: Config {
            crossing_center,
            spokes,
            faces,
        },
    }
}

/// Configurations whose target vertex (id 0) ends with charge exactly 0
/// after R1, R2, R3 and the default table with Δ = 11.
pub fn goldens() -> Vec<Golden> {
    use F::*;
    vec![
        golden(
            "(3,3) between two quadrilaterals",
            "3 - 6 + 1 + 5/3 + 1/3 = 0",
            false,
            vec![t(HIGH), t(SMALL), t(SMALL)],
            vec![Tri, Quad(BIG), Quad(BIG)],
        ),
        golden(
            "(3,3) on one pentagon",
            "3 - 6 + 1 + 4/3 + 2/3 = 0",
            false,
            vec![t(HIGH), t(SMALL), t(SMALL)],
            vec![Tri, Pent(BIG, BIG), Tri],
        ),
        golden(
            "(3,4) on one quadrilateral",
            "4 - 6 + 1 + 2/3 + 1/3 = 0",
            false,
            vec![t(BIG), t(HIGH), t_new(SMALL), t(SMALL)],
            vec![Tri, Tri, Tri, Quad(2)],
        ),
        golden(
            "(4,4) alternating",
            "4 - 6 + 1 + 2/3 + 2 x 1/6 = 0",
            false,
            vec![t(HIGH), t(SMALL), t(HIGH), t(SMALL)],
            vec![Quad(BIG), Tri, Quad(2), Tri],
        ),
        golden(
            "(4,4) adjacent quadrilaterals, income 4/3",
            "4 - 6 + 4/3 + 2/3 = 0",
            false,
            vec![t(SMALL), t(HIGH), t(SMALL), t(BIG)],
            vec![Tri, Tri, Quad(2), Quad(2)],
        ),
        golden(
            "(4,4) adjacent quadrilaterals, income 5/3",
            "4 - 6 + 5/3 + 1/3 = 0",
            false,
            vec![t(SMALL), t(HIGH), t(SMALL), t(BIG)],
            vec![Tri, Tri, Quad(BIG), Quad(2)],
        ),
        golden(
            "(4,4) one big face, two inner senders",
            "4 - 6 + 2/3 + 2 x 2/3 = 0",
            false,
            vec![t(BIG), t(SMALL), t(HIGH), t(HIGH)],
            vec![Quad(2), Tri, Tri, Tri],
        ),
        golden(
            "(4,4) one big face, inner and rim senders",
            "4 - 6 + 1 + 2/3 + 1/3 = 0",
            false,
            vec![t(HIGH), t(SMALL), t(HIGH), t(SMALL)],
            vec![Quad(BIG), Tri, Tri, Tri],
        ),
        golden(
            "crossing, adjacent quadrilaterals, income 4/3",
            "4 - 6 + 3 x 2/3 = 0",
            true,
            vec![t(BIG), t(HIGH), t(BIG), t(SMALL)],
            vec![Tri, Tri, Quad(2), Quad(2)],
        ),
        golden(
            "crossing, adjacent quadrilaterals, income 5/3",
            "4 - 6 + 5/3 + 1/3 = 0",
            true,
            vec![t(HIGH), t(BIG), t(BIG), t(SMALL)],
            vec![Tri, Tri, Quad(BIG), Quad(2)],
        ),
        golden(
            "crossing, alternating, two senders",
            "4 - 6 + 4/3 + 2 x 1/3 = 0",
            true,
            vec![t(HIGH), t(HIGH), t(SMALL), t(SMALL)],
            vec![Tri, Quad(2), Tri, Quad(2)],
        ),
        golden(
            "crossing, alternating, one sender",
            "4 - 6 + 5/3 + 1/3 = 0",
            true,
            vec![t(HIGH), t(BIG), t(SMALL), t(SMALL)],
            vec![Tri, Quad(BIG), Tri, Quad(2)],
        ),
        golden(
            "crossing, one big face, small apexes, new edge opposite",
            "4 - 6 + 1 + 2 x 1/2 = 0",
            true,
            vec![t(HIGH), t(HIGH), t(SMALL), t(SMALL)],
            vec![Quad(2), Tri, TriNew, Tri],
        ),
        golden(
            "crossing, one big face, income 1",
            "4 - 6 + 1 + 2/3 + 1/3 = 0",
            true,
            vec![t(HIGH), t(BIG), t(HIGH), t(BIG)],
            vec![Quad(2), Tri, Tri, Tri],
        ),
        golden(
            "crossing, one big face, income 2/3",
            "4 - 6 + 2/3 + 2/3 + 2/3 = 0",
            true,
            vec![t(HIGH), t(SMALL), t(SMALL), t(HIGH)],
            vec![Quad(2), Tri, Tri, Tri],
        ),
        golden(
            "crossing, one big face, three high neighbours",
            "4 - 6 + 1 + 3 x 1/3 = 0",
            true,
            vec![t(HIGH), t(BIG), t(HIGH), t(HIGH)],
            vec![Quad(2), Tri, Tri, Tri],
        ),
        golden(
            "(5,5) one quadrilateral, two high neighbours",
            "5 - 6 + 2/3 + 2 x 1/6 = 0",
            false,
            vec![t(BIG), t(SMALL), t(HIGH), t(SMALL), t(HIGH)],
            vec![Quad(2), Tri, Tri, Tri, Tri],
        ),
        golden(
            "(4,5) one quadrilateral, one high neighbour",
            "5 - 6 + 2/3 + 1/3 = 0",
            false,
            vec![t(BIG), t_new(SMALL), t(SMALL), t(HIGH), t(SMALL)],
            vec![Quad(2), Tri, Tri, Tri, Tri],
        ),
        golden(
            "(4,5) five triangles",
            "5 - 6 + 2 x 1/2 = 0",
            false,
            vec![t_new(SMALL), t(HIGH), t(SMALL), t(HIGH), t(SMALL)],
            vec![Tri, Tri, Tri, Tri, Tri],
        ),
        golden(
            "(5,5) five triangles, two crossing neighbours",
            "5 - 6 + 3 x 1/3 = 0",
            false,
            vec![t(SMALL), x(), t(SMALL), x(), t(SMALL)],
            vec![Tri, Tri, Tri, Tri, Tri],
        ),
    ]
}
