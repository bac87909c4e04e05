//! Extending a total coloring of `g − uv` to `g`.
//!
//! Both procedures erase the color of the low-degree endpoint `v`, color
//! `uv`, and finally recolor `v`, which always succeeds because `v` sees at
//! most `2·deg(v) ≤ κ − 1` colors. Colors are always chosen smallest first.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{usage, verify, Element, TotalColoring};
use crate::error::{Error, Result};
use crate::graph::{Edge, SimpleGraph, VertexId};

fn smallest_missing(kappa: usize, used: &BTreeSet<usize>) -> Option<usize> {
    (1..=kappa).find(|c| !used.contains(c))
}

/// Checks that `c` is a proper total coloring of `g − uv` within `1..=kappa`.
fn check_base(g: &SimpleGraph, uv: Edge, c: &TotalColoring, kappa: usize, what: fn(String) -> Error) -> Result<SimpleGraph> {
    let h = g.delete_edge(uv)?;
    let mut base = c.clone();
    base.restrict_to(&h);
    base.kappa = kappa;
    match verify(&h, &base) {
        Ok(v) if v.is_empty() => Ok(h),
        Ok(v) => Err(what(format!("coloring of G - {uv} is not proper: {}", v[0]))),
        Err(e) => Err(what(format!("coloring of G - {uv}: {e}"))),
    }
}

fn recolor(g: &SimpleGraph, c: &mut TotalColoring, v: VertexId, kappa: usize) {
    let mut seen: BTreeSet<usize> = g.neighbors(v).filter_map(|w| c.vertex(w)).collect();
    seen.extend(usage(g, c, v).at_vertex_edges);
    let col = smallest_missing(kappa, &seen).expect("2 deg(v) <= kappa - 1 leaves a color for v");
    c.set(Element::Vertex(v), col);
}

/// Extension along an edge `uv` with `deg(u) + deg(v) ≤ κ` and
/// `2·deg(v) ≤ κ − 1` (degrees in `g`).
pub fn extend_p1(
    g: &SimpleGraph,
    u: VertexId,
    v: VertexId,
    c: &TotalColoring,
    kappa: usize,
) -> Result<TotalColoring> {
    let uv = Edge::new(u, v);
    if !g.has_edge(u, v) {
        return Err(Error::P1Precondition(format!("{uv} is not an edge")));
    }
    let (du, dv) = (g.degree(u), g.degree(v));
    if du + dv > kappa {
        return Err(Error::P1Precondition(format!(
            "deg({u}) + deg({v}) = {} exceeds kappa = {kappa}",
            du + dv
        )));
    }
    if 2 * dv + 1 > kappa {
        return Err(Error::P1Precondition(format!(
            "2 deg({v}) = {} exceeds kappa - 1 = {}",
            2 * dv,
            kappa - 1
        )));
    }
    check_base(g, uv, c, kappa, Error::P1Precondition)?;
    let mut out = c.clone();
    out.kappa = kappa;
    out.erase(Element::Edge(uv));
    out.erase(Element::Vertex(v));
    let mut blocked = usage(g, &out, u).at_vertex_closed;
    blocked.extend(usage(g, &out, v).at_vertex_edges);
    // at most (deg u − 1) + 1 + (deg v − 1) ≤ κ − 1 colors are blocked
    let col = smallest_missing(kappa, &blocked).expect("deg(u) + deg(v) <= kappa leaves a color for uv");
    out.set(Element::Edge(uv), col);
    recolor(g, &mut out, v, kappa);
    Ok(out)
}

/// Which branch of the triangle cascade produced the extension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum P3Step {
    /// A color missing around both `u` and `v` went straight onto `uv`.
    FreeColor,
    /// `wv`'s color moved onto `uv` and `wv` was recolored.
    MovedWv,
    /// `uw`'s color moved onto `uv` and `uw` was recolored.
    MovedUw,
}

/// State in which the cascade found no color; kept for diagnostics.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct P3Certificate {
    pub u: VertexId,
    pub v: VertexId,
    pub w: VertexId,
    pub kappa: usize,
    /// Closed usage at `u` and edge usage at `v` after erasing `v`.
    pub used_u: BTreeSet<usize>,
    pub used_v: BTreeSet<usize>,
    /// Closed usage at `w` in the input coloring.
    pub used_w: BTreeSet<usize>,
    pub beta: usize,
    pub coloring: TotalColoring,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum P3Outcome {
    Extended { coloring: TotalColoring, step: P3Step },
    Exhausted(Box<P3Certificate>),
}

/// Extension along an edge `uv` lying on a triangle `uvw`, when
/// `deg(u) + deg(v) = κ + 1` and `deg(v) ≤ ⌊(κ − 1)/2⌋`.
///
/// With `v` erased, `U(u)` (colors at `u` and its edges) and `U(v)` (colors
/// on `v`'s edges) hold at most κ colors. If they miss one, it goes on
/// `uv`. Otherwise they partition `1..=κ`; `β = c(wv)` moves onto `uv` and
/// `wv` takes a color outside `U(v) ∪ U(w)`; failing that, `wv` keeps `β`,
/// `uv` takes `c(uw)` and `uw` takes a color outside `U(u) ∪ U(w)`.
pub fn extend_p3(
    g: &SimpleGraph,
    u: VertexId,
    v: VertexId,
    w: VertexId,
    c: &TotalColoring,
    kappa: usize,
) -> Result<P3Outcome> {
    let uv = Edge::new(u, v);
    if !g.has_edge(u, v) || !g.has_edge(u, w) || !g.has_edge(v, w) || w == u || w == v {
        return Err(Error::P3Precondition(format!("{u}, {v}, {w} is not a triangle")));
    }
    let (du, dv) = (g.degree(u), g.degree(v));
    if du + dv != kappa + 1 {
        return Err(Error::P3Precondition(format!(
            "deg({u}) + deg({v}) = {} but kappa + 1 = {}",
            du + dv,
            kappa + 1
        )));
    }
    if dv > (kappa - 1) / 2 {
        return Err(Error::P3Precondition(format!(
            "deg({v}) = {dv} exceeds floor((kappa - 1)/2) = {}",
            (kappa - 1) / 2
        )));
    }
    let h = check_base(g, uv, c, kappa, Error::P3Precondition)?;
    let mut pi = c.clone();
    pi.restrict_to(&h);
    pi.kappa = kappa;
    pi.erase(Element::Vertex(v));

    let used_u = usage(g, &pi, u).at_vertex_closed;
    let used_v = usage(g, &pi, v).at_vertex_edges;
    let mut both = used_u.clone();
    both.extend(&used_v);
    if let Some(theta) = smallest_missing(kappa, &both) {
        let mut out = pi;
        out.set(Element::Edge(uv), theta);
        recolor(g, &mut out, v, kappa);
        return Ok(P3Outcome::Extended {
            coloring: out,
            step: P3Step::FreeColor,
        });
    }

    let wv = Edge::new(w, v);
    let uw = Edge::new(u, w);
    let beta = pi.edge_color[&wv];
    let used_w = usage(g, &pi, w).at_vertex_closed;

    let mut psi = pi.clone();
    psi.set(Element::Edge(uv), beta);
    psi.erase(Element::Edge(wv));
    let mut blocked = usage(g, &psi, v).at_vertex_edges;
    blocked.extend(usage(g, &psi, w).at_vertex_closed);
    if let Some(gamma) = smallest_missing(kappa, &blocked) {
        psi.set(Element::Edge(wv), gamma);
        recolor(g, &mut psi, v, kappa);
        return Ok(P3Outcome::Extended {
            coloring: psi,
            step: P3Step::MovedWv,
        });
    }

    let mut blocked = used_u.clone();
    blocked.extend(&used_w);
    if let Some(alpha) = smallest_missing(kappa, &blocked) {
        let mut out = pi;
        let rho = out.edge_color[&uw];
        out.set(Element::Edge(uw), alpha);
        out.set(Element::Edge(uv), rho);
        recolor(g, &mut out, v, kappa);
        return Ok(P3Outcome::Extended {
            coloring: out,
            step: P3Step::MovedUw,
        });
    }

    Ok(P3Outcome::Exhausted(Box::new(P3Certificate {
        u,
        v,
        w,
        kappa,
        used_u,
        used_v,
        used_w,
        beta,
        coloring: pi,
    })))
}
