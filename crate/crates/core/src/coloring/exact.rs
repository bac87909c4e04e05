//! Exact total chromatic number by backtracking over the total graph.

use std::cmp::Reverse;

use super::{TotalColoring, TotalGraph};
use crate::error::{Error, Result};
use crate::graph::SimpleGraph;

/// Default cap on `|V| + |E|` for the exact solver.
pub const DEFAULT_BUDGET: usize = 32;

/// Smallest κ admitting a total coloring of `g`, with a witness.
///
/// Elements are tried in order of descending conflict degree, colors in
/// ascending order, and a color is only opened when all smaller ones are in
/// use (so the first element gets color 1). Forward checking abandons a
/// branch as soon as some uncolored element has no color left.
pub fn exact_chi_tt(g: &SimpleGraph, budget: usize) -> Result<(usize, TotalColoring)> {
    let tg = TotalGraph::new(g);
    let n = tg.len();
    if n > budget {
        return Err(Error::BudgetExceeded { elements: n, budget });
    }
    if n == 0 {
        return Ok((0, TotalColoring::new(0)));
    }
    let lower = if g.edge_count() > 0 { g.max_degree() + 1 } else { 1 };
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (Reverse(tg.adj[i].len()), i));
    let mut kappa = lower;
    loop {
        if let Some(colors) = Search::new(&tg, kappa).run(&order) {
            return Ok((kappa, tg.to_coloring(&colors, kappa)));
        }
        kappa += 1;
    }
}

struct Search<'a> {
    tg: &'a TotalGraph,
    kappa: usize,
    colors: Vec<usize>,
    /// `blocked[i * (kappa + 1) + c]`: colored neighbours of `i` using `c`.
    blocked: Vec<u16>,
    available: Vec<usize>,
}

impl<'a> Search<'a> {
    fn new(tg: &'a TotalGraph, kappa: usize) -> Self {
        let n = tg.len();
        Search {
            tg,
            kappa,
            colors: vec![0; n],
            blocked: vec![0; n * (kappa + 1)],
            available: vec![kappa; n],
        }
    }

    fn run(mut self, order: &[usize]) -> Option<Vec<usize>> {
        self.dfs(order, 0, 0).then_some(self.colors)
    }

    fn dfs(&mut self, order: &[usize], pos: usize, max_used: usize) -> bool {
        let Some(&i) = order.get(pos) else {
            return true;
        };
        let stride = self.kappa + 1;
        let limit = self.kappa.min(max_used + 1);
        for c in 1..=limit {
            if self.blocked[i * stride + c] > 0 {
                continue;
            }
            self.colors[i] = c;
            let mut dead = false;
            for &j in &self.tg.adj[i] {
                if self.colors[j] == 0 {
                    let slot = &mut self.blocked[j * stride + c];
                    *slot += 1;
                    if *slot == 1 {
                        self.available[j] -= 1;
                        dead |= self.available[j] == 0;
                    }
                }
            }
            if !dead && self.dfs(order, pos + 1, max_used.max(c)) {
                return true;
            }
            for &j in &self.tg.adj[i] {
                if self.colors[j] == 0 {
                    let slot = &mut self.blocked[j * stride + c];
                    *slot -= 1;
                    if *slot == 0 {
                        self.available[j] += 1;
                    }
                }
            }
            self.colors[i] = 0;
        }
        false
    }
}
