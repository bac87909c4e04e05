//! Checkers for the four structural claims about minimal counterexamples.
//! On graphs outside that class failures are expected; they are listed as
//! evidence rather than raised as errors.

use num_rational::Ratio;
use serde::Serialize;

use super::{r2_share, Account, ChargeLedger};
use crate::augment::AugmentedGraph;
use crate::embedding::DartId;
use crate::graph::VertexId;
use crate::scalar::Charge;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClaimResult {
    pub claim: usize,
    pub statement: &'static str,
    pub instances: usize,
    /// False when the claim needs data that was not supplied (Claim 4
    /// without a ledger).
    pub evaluated: bool,
    /// Configurations matching the stated hypotheses but lacking the local
    /// structure the claim's argument derives from minimality (Claim 3 only).
    pub out_of_scope: usize,
    pub failures: Vec<String>,
}

impl ClaimResult {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClaimsReport {
    pub claims: Vec<ClaimResult>,
}

impl ClaimsReport {
    pub fn all_passed(&self) -> bool {
        self.claims.iter().all(ClaimResult::passed)
    }

    pub fn claim(&self, n: usize) -> &ClaimResult {
        &self.claims[n - 1]
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.claims {
            let status = match (c.evaluated, c.passed()) {
                (false, _) => "not evaluated",
                (true, true) => "ok",
                (true, false) => "FAILED",
            };
            let scope = if c.out_of_scope > 0 {
                format!(" ({} out of scope)", c.out_of_scope)
            } else {
                String::new()
            };
            out.push_str(&format!(
                "claim {}: {} instance(s){scope}, {status}: {}\n",
                c.claim, c.instances, c.statement
            ));
            for f in &c.failures {
                out.push_str(&format!("  {f}\n"));
            }
        }
        out
    }
}

/// A crossing vertex `crossing` with a small neighbour `small` such that the
/// segment between them borders exactly one big face, and a triangular face
/// with angle small–crossing–`sender`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Claim4Triple {
    pub crossing: VertexId,
    pub small: VertexId,
    pub sender: VertexId,
}

pub(crate) fn claim4_triples(a: &AugmentedGraph) -> Vec<Claim4Triple> {
    let star = a.star();
    let fs = a.faces();
    let size = |d: DartId| fs.faces[fs.face_of_dart[d]].size();
    let mut out = Vec::new();
    for w in star.crossing_vertices() {
        for &n in star.rotation(w) {
            let w1 = star.head(n);
            if a.class(w1).is_big() {
                continue;
            }
            let big_sides = [n, star.twin(n)].iter().filter(|&&x| size(x) >= 4).count();
            if big_sides != 1 {
                continue;
            }
            // the face traced from a dart spans the angle between that dart
            // and its rotation predecessor
            let succ = star.rotation_succ(n);
            let pred = star.rotation_pred(n);
            for (other, between) in [(succ, succ), (pred, n)] {
                let w2 = star.head(other);
                if w2 != w1 && size(between) == 3 {
                    out.push(Claim4Triple {
                        crossing: w,
                        small: w1,
                        sender: w2,
                    });
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

fn label(a: &AugmentedGraph, v: VertexId) -> String {
    let c = a.class(v);
    match c.d1 {
        Some(d1) => format!("{v}({d1},{})", c.d2),
        None => format!("{v}(x)"),
    }
}

/// Instantiates Claims 1–4 over every matching configuration of `a`. Claim 4
/// is only evaluated against a ledger.
pub fn check_claims<S: Charge>(a: &AugmentedGraph, ledger: Option<&ChargeLedger<S>>) -> ClaimsReport {
    let star = a.star();
    let faces = &a.faces().faces;
    let big_faces: Vec<usize> = (0..faces.len()).filter(|&f| faces[f].size() >= 4).collect();
    let is_new = |d: DartId| star.origin(d).is_none();
    let low_true = |v: VertexId| a.class(v).d1.is_some_and(|d| d <= 5);

    let k4s = a.graph().find_k4s();
    let c1 = ClaimResult {
        claim: 1,
        statement: "G contains no K4",
        instances: k4s.len(),
        evaluated: true,
        out_of_scope: 0,
        failures: k4s.iter().map(|q| format!("K4 on {q:?}")).collect(),
    };

    let mut c2 = ClaimResult {
        claim: 2,
        statement: "on a big face u,v,w with u true of degree <= 5 and uv original, v or w is big",
        instances: 0,
        evaluated: true,
        out_of_scope: 0,
        failures: Vec::new(),
    };
    for &fi in &big_faces {
        let b = &faces[fi].boundary;
        let n = b.len();
        for i in 0..n {
            let u = star.owner(b[i]);
            if !low_true(u) {
                continue;
            }
            // forward: segment b[i], then b[i+1]; backward: b[i-1], b[i-2]
            let walks = [
                (b[i], star.owner(b[(i + 1) % n]), star.owner(b[(i + 2) % n])),
                (b[(i + n - 1) % n], star.owner(b[(i + n - 1) % n]), star.owner(b[(i + n - 2) % n])),
            ];
            for (seg, v, w) in walks {
                if is_new(seg) {
                    continue;
                }
                c2.instances += 1;
                if !a.class(v).is_big() && !a.class(w).is_big() {
                    c2.failures.push(format!(
                        "face {fi}: {} {} {} with both {v} and {w} small",
                        label(a, u),
                        label(a, v),
                        label(a, w)
                    ));
                }
            }
        }
    }

    let mut c3 = ClaimResult {
        claim: 3,
        statement: "a small true vertex of degree <= 5 on a big face with original sides gets >= 4/3 from a 5+-face, >= 1 from a 4-face (2/3 between two crossings)",
        instances: 0,
        evaluated: true,
        out_of_scope: 0,
        failures: Vec::new(),
    };
    for &fi in &big_faces {
        let b = &faces[fi].boundary;
        let n = b.len();
        for i in 0..n {
            let v = star.owner(b[i]);
            if !low_true(v) || a.class(v).is_big() {
                continue;
            }
            let (before, after) = (b[(i + n - 1) % n], b[i]);
            if is_new(before) || is_new(after) {
                continue;
            }
            let u = star.owner(before);
            let w = star.head(after);
            // what minimality provides on each side: a true neighbour is big,
            // and past a crossing neighbour the next corner is big
            let side_ok = |x: VertexId, beyond: VertexId| {
                if star.is_crossing(x) {
                    a.class(beyond).is_big()
                } else {
                    a.class(x).is_big()
                }
            };
            let u2 = star.owner(b[(i + n - 2) % n]);
            let w2 = star.owner(b[(i + 2) % n]);
            if !side_ok(u, u2) || !side_ok(w, w2) {
                c3.out_of_scope += 1;
                continue;
            }
            let need = if n >= 5 {
                Ratio::new(4, 3)
            } else if star.is_crossing(u) && star.is_crossing(w) {
                Ratio::new(2, 3)
            } else {
                Ratio::from_integer(1)
            };
            c3.instances += 1;
            let share = r2_share(a, fi).unwrap_or_default();
            if share < need {
                c3.failures.push(format!(
                    "face {fi} (size {n}): {} receives {share}, needs {need}",
                    label(a, v)
                ));
            }
        }
    }

    let triples = claim4_triples(a);
    let mut c4 = ClaimResult {
        claim: 4,
        statement: "w2 sends nothing to the crossing vertex w in the configuration w1-w-w2",
        instances: triples.len(),
        evaluated: ledger.is_some(),
        out_of_scope: 0,
        failures: Vec::new(),
    };
    if let Some(l) = ledger {
        for t in &triples {
            let sent = l.sent(Account::Vertex(t.sender), Account::Vertex(t.crossing));
            if sent > S::zero() {
                c4.failures.push(format!(
                    "{} sends {sent} to crossing {} (small neighbour {})",
                    t.sender, t.crossing, t.small
                ));
            }
        }
    }

    ClaimsReport {
        claims: vec![c1, c2, c3, c4],
    }
}
