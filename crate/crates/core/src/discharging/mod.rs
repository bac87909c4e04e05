//! Discharging on G*: initial charges `deg − 6` (vertices) and
//! `2·size − 6` (faces), the three global rules, the configurable local rule
//! table, and the final-charge report.
//!
//! The ledger is generic over the charge scalar; the pipelines use
//! [`Rational`](crate::Rational) so conservation is checked exactly.

mod claims;
mod rules;
mod semifan;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::augment::AugmentedGraph;
use crate::embedding::VertexKind;
use crate::graph::VertexId;
use crate::scalar::{format_charge, Charge};

pub use claims::{check_claims, ClaimResult, ClaimsReport};
pub use rules::{
    apply_rule_table, default_rule_table, parse_rule_table, Bound, DegreeThreshold, Exclusion,
    FracBound, LinkPattern, LocalRule, VertexPattern, DEFAULT_RULES_JSON,
};
pub use semifan::{semi_fans, SemiFan, SemiFanReport, SEMI_FAN_BOUND};

/// Where charge sits: a vertex, a face (index into the G* face list), or the
/// pool standing in for the special Δ-vertex of R1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "type", content = "id", rename_all = "lowercase")]
pub enum Account {
    Vertex(VertexId),
    Face(usize),
    Pool,
}

impl fmt::Display for Account {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Account::Vertex(v) => write!(f, "v{v}"),
            Account::Face(i) => write!(f, "f{i}"),
            Account::Pool => f.write_str("pool"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = "S: Charge"))]
pub struct TransferRecord<S> {
    pub from: Account,
    pub to: Account,
    #[serde(serialize_with = "ser_charge")]
    pub amount: S,
    pub rule: String,
}

fn ser_charge<S: Charge, Ser: serde::Serializer>(c: &S, s: Ser) -> Result<Ser::Ok, Ser::Error> {
    s.serialize_str(&format_charge(c))
}

#[derive(Debug, Clone)]
pub struct ChargeLedger<S> {
    pub vertex_charge: BTreeMap<VertexId, S>,
    pub face_charge: Vec<S>,
    pub pool: S,
    pub log: Vec<TransferRecord<S>>,
    pub exclusions: Vec<Exclusion>,
    initial_total: S,
}

impl<S: Charge> ChargeLedger<S> {
    /// Vertex `v` gets `deg_{G*}(v) − 6`, face `f` gets `2·size(f) − 6`,
    /// the pool starts empty.
    pub fn initial(a: &AugmentedGraph) -> Self {
        let star = a.star();
        let vertex_charge: BTreeMap<VertexId, S> = star
            .vertices()
            .map(|v| (v, S::from_int(star.degree(v) as i64 - 6)))
            .collect();
        let face_charge: Vec<S> = a
            .faces()
            .faces
            .iter()
            .map(|f| S::from_int(2 * f.size() as i64 - 6))
            .collect();
        let mut ledger = ChargeLedger {
            vertex_charge,
            face_charge,
            pool: S::zero(),
            log: Vec::new(),
            exclusions: Vec::new(),
            initial_total: S::zero(),
        };
        ledger.initial_total = ledger.total();
        ledger
    }

    pub fn initial_total(&self) -> &S {
        &self.initial_total
    }

    /// Σ vertex charges + Σ face charges + pool.
    pub fn total(&self) -> S {
        let mut t = self.pool.clone();
        for c in self.vertex_charge.values() {
            t = t + c.clone();
        }
        for c in &self.face_charge {
            t = t + c.clone();
        }
        t
    }

    pub fn is_conserved(&self) -> bool {
        self.total().same_as(&self.initial_total)
    }

    pub fn charge(&self, account: Account) -> S {
        match account {
            Account::Vertex(v) => self.vertex_charge.get(&v).cloned().unwrap_or_else(S::zero),
            Account::Face(f) => self.face_charge.get(f).cloned().unwrap_or_else(S::zero),
            Account::Pool => self.pool.clone(),
        }
    }

    fn slot(&mut self, account: Account) -> &mut S {
        match account {
            Account::Vertex(v) => self.vertex_charge.entry(v).or_insert_with(S::zero),
            Account::Face(f) => &mut self.face_charge[f],
            Account::Pool => &mut self.pool,
        }
    }

    /// Moves a positive `amount` and logs it.
    pub fn transfer(&mut self, from: Account, to: Account, amount: S, rule: &str) {
        assert!(amount > S::zero(), "transfers carry positive amounts");
        let s = self.slot(from);
        *s = s.clone() - amount.clone();
        let t = self.slot(to);
        *t = t.clone() + amount.clone();
        self.log.push(TransferRecord {
            from,
            to,
            amount,
            rule: rule.to_string(),
        });
    }

    /// Total sent from `from` to `to` over the log.
    pub fn sent(&self, from: Account, to: Account) -> S {
        self.log
            .iter()
            .filter(|r| r.from == from && r.to == to)
            .fold(S::zero(), |acc, r| acc + r.amount.clone())
    }

    /// Total received by `to`, from any account.
    pub fn received(&self, to: Account) -> S {
        self.log
            .iter()
            .filter(|r| r.to == to)
            .fold(S::zero(), |acc, r| acc + r.amount.clone())
    }

    /// R1: every Δ-vertex adjacent in G* to a (3,·)-vertex pays 1/2 into the
    /// pool, and every (3,·)-vertex draws 1 from it. The pool may end
    /// negative; that is reported, not asserted.
    pub fn apply_r1(&mut self, a: &AugmentedGraph, delta: usize) -> &mut Self {
        let star = a.star();
        let classes = a.classification();
        let is_three = |v: VertexId| classes[&v].d1 == Some(3);
        let payers: Vec<VertexId> = classes
            .values()
            .filter(|c| c.kind == VertexKind::True && c.d2 == delta)
            .filter(|c| star.neighbors(c.vertex).any(is_three))
            .map(|c| c.vertex)
            .collect();
        for v in payers {
            self.transfer(Account::Vertex(v), Account::Pool, S::from_frac(1, 2), "R1");
        }
        let takers: Vec<VertexId> = classes.keys().copied().filter(|&v| is_three(v)).collect();
        for v in takers {
            self.transfer(Account::Pool, Account::Vertex(v), S::from_int(1), "R1");
        }
        self
    }

    /// R2: every face of size ≥ 4 hands its whole charge, in equal parts, to
    /// the small-vertex occurrences along its boundary.
    pub fn apply_r2(&mut self, a: &AugmentedGraph) -> &mut Self {
        for (fi, face) in a.faces().faces.iter().enumerate() {
            let Some(per) = r2_share(a, fi) else {
                continue;
            };
            let mut occurrences: BTreeMap<VertexId, i64> = BTreeMap::new();
            for &d in &face.boundary {
                let v = a.star().owner(d);
                if !a.class(v).is_big() {
                    *occurrences.entry(v).or_insert(0) += 1;
                }
            }
            for (v, m) in occurrences {
                let amount =
                    S::from_frac(*per.numer() * m, *per.denom());
                self.transfer(Account::Face(fi), Account::Vertex(v), amount, "R2");
            }
        }
        self
    }

    /// R3: a (5,5)-vertex whose five faces are all triangles receives 1/3 from
    /// each of its true neighbours.
    pub fn apply_r3(&mut self, a: &AugmentedGraph) -> &mut Self {
        for v in r3_receivers(a) {
            let nbrs: BTreeSet<VertexId> = a
                .star()
                .neighbors(v)
                .filter(|&w| a.class(w).is_true())
                .collect();
            for w in nbrs {
                self.transfer(Account::Vertex(w), Account::Vertex(v), S::from_frac(1, 3), "R3");
            }
        }
        self
    }

    pub fn final_report(&self, a: &AugmentedGraph) -> FinalReport {
        let mut negative = Vec::new();
        let mut vertices = Vec::new();
        for (&v, c) in &self.vertex_charge {
            let kind = a.class(v);
            let row = ChargeRow {
                account: Account::Vertex(v),
                label: match kind.d1 {
                    Some(d1) => format!("({d1},{})", kind.d2),
                    None => "crossing".to_string(),
                },
                charge: format_charge(c),
            };
            if c.is_negative() {
                negative.push(row.clone());
            }
            vertices.push(row);
        }
        let mut faces = Vec::new();
        for (i, c) in self.face_charge.iter().enumerate() {
            let row = ChargeRow {
                account: Account::Face(i),
                label: format!("size {}", a.faces().faces[i].size()),
                charge: format_charge(c),
            };
            if c.is_negative() {
                negative.push(row.clone());
            }
            faces.push(row);
        }
        let euler = a.star().euler_characteristic();
        FinalReport {
            surface: a.star().surface().to_string(),
            euler_characteristic: euler,
            initial_total: format_charge(&self.initial_total),
            final_total: format_charge(&self.total()),
            expected_total: -6 * euler,
            conserved: self.is_conserved(),
            pool: format_charge(&self.pool),
            pool_negative: self.pool.is_negative(),
            negative,
            vertices,
            faces,
            transfers: self.log.len(),
            exclusions: self.exclusions.clone(),
        }
    }
}

/// Per-occurrence R2 share of face `fi`, or `None` when the face is a
/// triangle or has no small vertex on its boundary.
pub fn r2_share(a: &AugmentedGraph, fi: usize) -> Option<Ratio<i64>> {
    let face = &a.faces().faces[fi];
    if face.size() < 4 {
        return None;
    }
    let small = face
        .boundary
        .iter()
        .filter(|&&d| !a.class(a.star().owner(d)).is_big())
        .count() as i64;
    (small > 0).then(|| Ratio::new(2 * face.size() as i64 - 6, small))
}

/// Everything `v` receives from faces under R2.
pub fn r2_income(a: &AugmentedGraph, v: VertexId) -> Ratio<i64> {
    if a.class(v).is_big() {
        return Ratio::from_integer(0);
    }
    a.faces_around(v)
        .into_iter()
        .filter_map(|fi| r2_share(a, fi))
        .sum()
}

/// (5,5)-vertices incident only with triangles.
pub fn r3_receivers(a: &AugmentedGraph) -> Vec<VertexId> {
    a.classification()
        .values()
        .filter(|c| c.is_pair(5, 5))
        .filter(|c| {
            a.faces_around(c.vertex)
                .into_iter()
                .all(|fi| a.faces().faces[fi].size() == 3)
        })
        .map(|c| c.vertex)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChargeRow {
    pub account: Account,
    pub label: String,
    pub charge: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FinalReport {
    pub surface: String,
    pub euler_characteristic: i64,
    pub initial_total: String,
    pub final_total: String,
    pub expected_total: i64,
    pub conserved: bool,
    pub pool: String,
    pub pool_negative: bool,
    pub negative: Vec<ChargeRow>,
    pub vertices: Vec<ChargeRow>,
    pub faces: Vec<ChargeRow>,
    pub transfers: usize,
    pub exclusions: Vec<Exclusion>,
}

impl FinalReport {
    /// Human-readable table; negative elements come first.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("negative elements: {}\n", self.negative.len()));
        for r in &self.negative {
            out.push_str(&format!("  {:<8} {:<10} {}\n", r.account.to_string(), r.label, r.charge));
        }
        out.push_str("vertices:\n");
        for r in &self.vertices {
            out.push_str(&format!("  {:<8} {:<10} {}\n", r.account.to_string(), r.label, r.charge));
        }
        out.push_str("faces:\n");
        for r in &self.faces {
            out.push_str(&format!("  {:<8} {:<10} {}\n", r.account.to_string(), r.label, r.charge));
        }
        out.push_str(&format!(
            "pool = {}{}\n",
            self.pool,
            if self.pool_negative { " (negative)" } else { "" }
        ));
        out.push_str(&format!("transfers = {}\n", self.transfers));
        out.push_str(&format!(
            "conservation: initial = {}, final = {}, {}\n",
            self.initial_total,
            self.final_total,
            if self.conserved { "ok" } else { "VIOLATED" }
        ));
        out.push_str(&format!("total = {}\n", self.final_total));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::{EmbeddedGraph, Surface};
    use crate::Rational;
    use num_traits::Zero;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_frac(n, d)
    }

    fn build(entries: &[(VertexId, &[VertexId])], crossings: &[VertexId]) -> AugmentedGraph {
        let r: BTreeMap<_, _> = entries.iter().map(|(v, n)| (*v, n.to_vec())).collect();
        let (g, e) = EmbeddedGraph::from_neighbor_rotation(
            Surface::Plane,
            &r,
            &crossings.iter().copied().collect(),
        )
        .unwrap();
        AugmentedGraph::build(&e, &g)
    }

    fn torus_grid() -> AugmentedGraph {
        let (g, e) = crate::gen::toroidal_grid(3, 3).unwrap();
        AugmentedGraph::build(&e, &g)
    }

    #[test]
    fn initial_values() {
        let a = build(&[(0, &[1, 3, 2]), (1, &[2, 3, 0]), (2, &[0, 3, 1]), (3, &[0, 1, 2])], &[]);
        let l = ChargeLedger::<Rational>::initial(&a);
        assert!(l.face_charge.iter().all(Zero::is_zero));
        assert!(l.vertex_charge.values().all(|c| *c == q(-3, 1)));
        assert_eq!(l.total(), q(-12, 1));
        assert!(l.pool.is_zero());
    }

    #[test]
    fn crossing_vertex_starts_at_minus_two() {
        let a = build(
            &[
                (0, &[1, 9, 4, 2]),
                (1, &[2, 3, 9, 0]),
                (2, &[0, 4, 3, 1]),
                (3, &[9, 1, 2, 4]),
                (4, &[2, 0, 9, 3]),
                (9, &[0, 1, 3, 4]),
            ],
            &[9],
        );
        let l = ChargeLedger::<Rational>::initial(&a);
        assert_eq!(l.charge(Account::Vertex(9)), q(-2, 1));
        assert_eq!(l.total(), q(-12, 1));
    }

    #[test]
    fn square_faces_carry_two() {
        let a = torus_grid();
        let l = ChargeLedger::<Rational>::initial(&a);
        assert_eq!(l.total(), Rational::zero());
        for (i, f) in a.faces().faces.iter().enumerate() {
            assert_eq!(l.face_charge[i], q(2 * f.size() as i64 - 6, 1));
        }
    }

    #[test]
    fn r1_without_degree_three_is_noop() {
        let a = torus_grid();
        let mut l = ChargeLedger::<Rational>::initial(&a);
        let before = l.vertex_charge.clone();
        l.apply_r1(&a, 6);
        assert_eq!(l.vertex_charge, before);
        assert!(l.log.is_empty());
    }

    #[test]
    fn generic_over_scalars() {
        let a = torus_grid();
        let mut lf = ChargeLedger::<f64>::initial(&a);
        lf.apply_r1(&a, 6).apply_r2(&a).apply_r3(&a);
        assert!(lf.is_conserved());
        let mut li = ChargeLedger::<Ratio<i64>>::initial(&a);
        li.apply_r2(&a);
        assert_eq!(li.total(), Ratio::from_integer(0));
    }
}
