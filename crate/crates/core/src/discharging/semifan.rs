//! Semi-fans: maximal runs of consecutive ribs at a high-degree center that
//! carry positive outflow, flanked by ribs carrying none.

use std::collections::BTreeSet;

use serde::Serialize;

use super::{Account, ChargeLedger};
use crate::augment::AugmentedGraph;
use crate::embedding::DartId;
use crate::error::{Error, Result};
use crate::graph::VertexId;
use crate::scalar::{format_charge, Charge};

/// Upper bound on the average outflow per face of a semi-fan, as `(p, q)`.
pub const SEMI_FAN_BOUND: (i64, i64) = (2, 5);

#[derive(Debug, Clone, PartialEq)]
pub struct SemiFan<S> {
    pub center: VertexId,
    /// Darts at the center, in rotation order; the first and last carry no
    /// outflow unless the fan closes up around the whole center.
    pub ribs: Vec<DartId>,
    pub neighbors: Vec<VertexId>,
    pub outflow: Vec<S>,
    /// Number of faces between consecutive ribs.
    pub k: usize,
    pub average: S,
    pub within_bound: bool,
    /// Every rib carries outflow, so there are no boundary ribs.
    pub closed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SemiFanReport {
    pub center: VertexId,
    pub neighbors: Vec<VertexId>,
    pub outflow: Vec<String>,
    pub k: usize,
    pub average: String,
    pub within_bound: bool,
    pub closed: bool,
}

impl<S: Charge> SemiFan<S> {
    pub fn report(&self) -> SemiFanReport {
        SemiFanReport {
            center: self.center,
            neighbors: self.neighbors.clone(),
            outflow: self.outflow.iter().map(format_charge).collect(),
            k: self.k,
            average: format_charge(&self.average),
            within_bound: self.within_bound,
            closed: self.closed,
        }
    }
}

/// Splits the center's outflow, as recorded in the ledger, into semi-fans.
/// Charge sent along parallel segments is attributed to the first of them in
/// rotation order. A center sending nothing yields one fan with average 0.
pub fn semi_fans<S: Charge>(
    a: &AugmentedGraph,
    ledger: &ChargeLedger<S>,
    center: VertexId,
    delta: usize,
) -> Result<Vec<SemiFan<S>>> {
    let star = a.star();
    if !star.vertices().any(|v| v == center) {
        return Err(Error::MissingVertex(center));
    }
    let degree = star.degree(center);
    let threshold = delta as i64 - 2;
    if (degree as i64) < threshold {
        return Err(Error::CenterDegreeTooSmall {
            vertex: center,
            degree,
            threshold,
        });
    }
    let rot = star.rotation(center);
    let m = rot.len();
    let mut seen = BTreeSet::new();
    let out: Vec<S> = rot
        .iter()
        .map(|&d| {
            let w = star.head(d);
            if seen.insert(w) {
                ledger.sent(Account::Vertex(center), Account::Vertex(w))
            } else {
                S::zero()
            }
        })
        .collect();
    let bound = S::from_frac(SEMI_FAN_BOUND.0, SEMI_FAN_BOUND.1);
    let make = |idx: Vec<usize>, k: usize, closed: bool| {
        let outflow: Vec<S> = idx.iter().map(|&i| out[i].clone()).collect();
        let total = outflow.iter().fold(S::zero(), |acc, x| acc + x.clone());
        let average = if k == 0 {
            S::zero()
        } else {
            total / S::from_int(k as i64)
        };
        SemiFan {
            center,
            ribs: idx.iter().map(|&i| rot[i]).collect(),
            neighbors: idx.iter().map(|&i| star.head(rot[i])).collect(),
            within_bound: average <= bound,
            outflow,
            k,
            average,
            closed,
        }
    };
    let positive: Vec<bool> = out.iter().map(|x| *x > S::zero()).collect();
    let Some(zero) = positive.iter().position(|p| !p) else {
        return Ok(vec![make((0..m).collect(), m, true)]);
    };
    if positive.iter().all(|p| !p) {
        return Ok(vec![make((0..m).collect(), m, false)]);
    }
    let mut fans = Vec::new();
    let mut step = 1;
    while step <= m {
        let i = (zero + step) % m;
        if !positive[i] {
            step += 1;
            continue;
        }
        let mut run = 0;
        while positive[(i + run) % m] {
            run += 1;
        }
        let idx: Vec<usize> = (0..run + 2).map(|t| (i + m - 1 + t) % m).collect();
        fans.push(make(idx, run + 1, false));
        step += run;
    }
    Ok(fans)
}
