//! Local rule table: sender/receiver patterns over the classification of G*,
//! matched on every ordered adjacent pair.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use super::claims::claim4_triples;
use super::{r2_income, Account, ChargeLedger};
use crate::augment::{AugmentedGraph, SizeClass};
use crate::embedding::{DartId, VertexKind};
use crate::error::{Error, Result};
use crate::graph::VertexId;
use crate::scalar::{Charge, Frac};

/// The shipped table.
pub const DEFAULT_RULES_JSON: &str = include_str!("default_rules.json");

const AMOUNT_MENU: [(i64, i64); 4] = [(1, 6), (1, 3), (1, 2), (2, 3)];

/// `k` (exactly) or `k+` (at least). Integers in JSON mean exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "NumOrText", into = "NumOrText")]
pub enum Bound {
    Exactly(usize),
    AtLeast(usize),
}

impl Bound {
    pub fn matches(self, x: usize) -> bool {
        match self {
            Bound::Exactly(k) => x == k,
            Bound::AtLeast(k) => x >= k,
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum NumOrText {
    Num(usize),
    Text(String),
}

impl TryFrom<NumOrText> for Bound {
    type Error = String;
    fn try_from(v: NumOrText) -> std::result::Result<Self, String> {
        match v {
            NumOrText::Num(k) => Ok(Bound::Exactly(k)),
            NumOrText::Text(s) => {
                let t = s.trim();
                let (body, at_least) = match t.strip_suffix('+') {
                    Some(b) => (b, true),
                    None => (t, false),
                };
                let k = body
                    .trim()
                    .parse::<usize>()
                    .map_err(|_| format!("expected \"k\" or \"k+\", found {s:?}"))?;
                Ok(if at_least { Bound::AtLeast(k) } else { Bound::Exactly(k) })
            }
        }
    }
}

impl From<Bound> for NumOrText {
    fn from(b: Bound) -> Self {
        match b {
            Bound::Exactly(k) => NumOrText::Num(k),
            Bound::AtLeast(k) => NumOrText::Text(format!("{k}+")),
        }
    }
}

/// `p/q` (exactly) or `p/q+` (at least).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct FracBound {
    pub value: Frac,
    pub at_least: bool,
}

impl FracBound {
    pub fn matches(self, x: Ratio<i64>) -> bool {
        let v = Ratio::new(self.value.num, self.value.den);
        if self.at_least {
            x >= v
        } else {
            x == v
        }
    }
}

impl FromStr for FracBound {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let t = s.trim();
        let (body, at_least) = match t.strip_suffix('+') {
            Some(b) => (b, true),
            None => (t, false),
        };
        Ok(FracBound {
            value: body.parse()?,
            at_least,
        })
    }
}

impl TryFrom<String> for FracBound {
    type Error = String;
    fn try_from(s: String) -> std::result::Result<Self, String> {
        s.parse()
    }
}

impl From<FracBound> for String {
    fn from(b: FracBound) -> String {
        format!("{}{}", b.value, if b.at_least { "+" } else { "" })
    }
}

/// A G*-degree threshold, absolute or relative to Δ (`"delta-2"`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "NumOrText", into = "NumOrText")]
pub enum DegreeThreshold {
    Absolute(usize),
    DeltaMinus(usize),
}

impl DegreeThreshold {
    pub fn resolve(self, delta: usize) -> usize {
        match self {
            DegreeThreshold::Absolute(k) => k,
            DegreeThreshold::DeltaMinus(k) => delta.saturating_sub(k),
        }
    }
}

impl TryFrom<NumOrText> for DegreeThreshold {
    type Error = String;
    fn try_from(v: NumOrText) -> std::result::Result<Self, String> {
        match v {
            NumOrText::Num(k) => Ok(DegreeThreshold::Absolute(k)),
            NumOrText::Text(s) => {
                let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
                let bad = || format!("expected an integer, \"delta\" or \"delta-k\", found {s:?}");
                match t.strip_prefix("delta") {
                    Some("") => Ok(DegreeThreshold::DeltaMinus(0)),
                    Some(rest) => rest
                        .strip_prefix('-')
                        .and_then(|k| k.parse().ok())
                        .map(DegreeThreshold::DeltaMinus)
                        .ok_or_else(bad),
                    None => t.parse().map(DegreeThreshold::Absolute).map_err(|_| bad()),
                }
            }
        }
    }
}

impl From<DegreeThreshold> for NumOrText {
    fn from(d: DegreeThreshold) -> Self {
        match d {
            DegreeThreshold::Absolute(k) => NumOrText::Num(k),
            DegreeThreshold::DeltaMinus(0) => NumOrText::Text("delta".into()),
            DegreeThreshold::DeltaMinus(k) => NumOrText::Text(format!("delta-{k}")),
        }
    }
}

/// Predicate over one endpoint. Absent fields match anything.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexPattern {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<VertexKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d1: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d2: Option<usize>,
    /// Lower bound on the G*-degree.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_degree: Option<DegreeThreshold>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub size_class: Option<SizeClass>,
    /// Sizes of the incident faces in rotation order, matched up to rotation
    /// and reflection.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub incident_face_sizes: Option<Vec<Bound>>,
    /// Total received under R2.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub face_income: Option<FracBound>,
    /// Number of true G*-neighbours of degree at least Δ−2.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub high_degree_neighbors: Option<Bound>,
    /// Whether the segment joining sender and receiver is a new edge.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub via_new_edge: Option<bool>,
}

/// Conditions on the segment joining sender and receiver.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkPattern {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub via_new_edge: Option<bool>,
    /// Sizes of the two faces flanking the segment, unordered.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub face_sizes: Option<[Bound; 2]>,
    /// Class of the third vertex of each flanking triangle.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub apex: Option<SizeClass>,
}

impl LinkPattern {
    fn is_empty(&self) -> bool {
        self == &LinkPattern::default()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LocalRule {
    pub id: String,
    pub sender: VertexPattern,
    pub receiver: VertexPattern,
    #[serde(default, skip_serializing_if = "LinkPattern::is_empty")]
    pub link: LinkPattern,
    pub amount: Frac,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// A sender/receiver pair skipped because the Claim 4 configuration holds:
/// the receiver is a crossing vertex, `via` is a small neighbour such that
/// the receiver–`via` segment borders exactly one big face, and sender,
/// receiver, `via` span a triangular face.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Exclusion {
    pub sender: VertexId,
    pub receiver: VertexId,
    pub via: VertexId,
    pub rule: usize,
}

impl fmt::Display for Exclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -/-> {} (via {})", self.sender, self.receiver, self.via)
    }
}

pub fn parse_rule_table(json: &str) -> Result<Vec<LocalRule>> {
    let rules: Vec<LocalRule> =
        serde_json::from_str(json).map_err(|e| Error::RuleTable(e.to_string()))?;
    validate(&rules)?;
    Ok(rules)
}

pub fn default_rule_table() -> Vec<LocalRule> {
    parse_rule_table(DEFAULT_RULES_JSON).expect("shipped rule table is well-formed")
}

fn validate(rules: &[LocalRule]) -> Result<()> {
    let mut ids = BTreeSet::new();
    for r in rules {
        if !ids.insert(r.id.as_str()) {
            return Err(Error::RuleTable(format!("duplicate rule id {:?}", r.id)));
        }
        if !AMOUNT_MENU.contains(&(r.amount.num, r.amount.den)) {
            return Err(Error::RuleTable(format!(
                "rule {:?}: amount {} is not one of 1/6, 1/3, 1/2, 2/3",
                r.id, r.amount
            )));
        }
        for p in [&r.sender, &r.receiver] {
            if p.incident_face_sizes.as_ref().is_some_and(Vec::is_empty) {
                return Err(Error::RuleTable(format!("rule {:?}: empty face-size cycle", r.id)));
            }
        }
    }
    Ok(())
}

/// Per-vertex data the patterns look at, computed once per application.
struct Context<'a> {
    a: &'a AugmentedGraph,
    delta: usize,
    face_cycle: BTreeMap<VertexId, Vec<usize>>,
    income: BTreeMap<VertexId, Ratio<i64>>,
    high: BTreeMap<VertexId, usize>,
}

impl<'a> Context<'a> {
    fn new(a: &'a AugmentedGraph, delta: usize) -> Self {
        let star = a.star();
        let faces = &a.faces().faces;
        let threshold = delta.saturating_sub(2);
        let mut face_cycle = BTreeMap::new();
        let mut income = BTreeMap::new();
        let mut high = BTreeMap::new();
        for v in star.vertices() {
            face_cycle.insert(v, a.faces_around(v).iter().map(|&f| faces[f].size()).collect());
            income.insert(v, r2_income(a, v));
            let h: BTreeSet<VertexId> = star
                .neighbors(v)
                .filter(|&w| a.class(w).is_true() && a.class(w).d2 >= threshold)
                .collect();
            high.insert(v, h.len());
        }
        Context {
            a,
            delta,
            face_cycle,
            income,
            high,
        }
    }

    fn vertex_matches(&self, p: &VertexPattern, v: VertexId) -> bool {
        let c = self.a.class(v);
        p.kind.is_none_or(|k| k == c.kind)
            && p.d1.is_none_or(|d| c.d1 == Some(d))
            && p.d2.is_none_or(|d| c.d2 == d)
            && p.min_degree.is_none_or(|t| c.d2 >= t.resolve(self.delta))
            && p.size_class.is_none_or(|s| s == c.size_class)
            && p
                .incident_face_sizes
                .as_ref()
                .is_none_or(|pat| cyclic_match(pat, &self.face_cycle[&v]))
            && p.face_income.is_none_or(|b| b.matches(self.income[&v]))
            && p.high_degree_neighbors.is_none_or(|b| b.matches(self.high[&v]))
    }

    /// Sizes of the faces on either side of the segment of dart `d`, and the
    /// third vertices of those that are triangles.
    fn flank(&self, d: DartId) -> ([usize; 2], Vec<VertexId>) {
        let star = self.a.star();
        let fs = self.a.faces();
        let (u, w) = (star.owner(d), star.head(d));
        let sides = [fs.face_of_dart[d], fs.face_of_dart[star.twin(d)]];
        let mut apexes = Vec::new();
        for &f in &sides {
            let face = &fs.faces[f];
            if face.size() == 3 {
                if let Some(x) = star.face_vertices(face).into_iter().find(|&x| x != u && x != w) {
                    apexes.push(x);
                }
            }
        }
        (sides.map(|f| fs.faces[f].size()), apexes)
    }

    fn link_matches(&self, rule: &LocalRule, d: DartId) -> bool {
        let is_new = self.a.is_new_edge(d).unwrap_or(false);
        let want_new = [rule.sender.via_new_edge, rule.receiver.via_new_edge, rule.link.via_new_edge];
        if want_new.iter().flatten().any(|&w| w != is_new) {
            return false;
        }
        let (sizes, apexes) = self.flank(d);
        if let Some([p, q]) = rule.link.face_sizes {
            let direct = p.matches(sizes[0]) && q.matches(sizes[1]);
            let swapped = p.matches(sizes[1]) && q.matches(sizes[0]);
            if !direct && !swapped {
                return false;
            }
        }
        if let Some(cls) = rule.link.apex {
            if apexes.is_empty() || apexes.iter().any(|&x| self.a.class(x).size_class != cls) {
                return false;
            }
        }
        true
    }
}

/// Whether `pattern` equals `sizes` under some rotation or reflection.
fn cyclic_match(pattern: &[Bound], sizes: &[usize]) -> bool {
    let n = sizes.len();
    if pattern.len() != n {
        return false;
    }
    (0..n).any(|shift| {
        (0..n).all(|i| pattern[i].matches(sizes[(shift + i) % n]))
            || (0..n).all(|i| pattern[i].matches(sizes[(shift + n - i) % n]))
    })
}

/// Applies every rule to every ordered adjacent pair (sender, receiver),
/// receivers and senders in id order. A pair matched by two rules is an
/// error and leaves the ledger untouched. Pairs in the Claim 4
/// configuration are skipped and recorded in `ledger.exclusions`.
pub fn apply_rule_table<S: Charge>(
    ledger: &mut ChargeLedger<S>,
    a: &AugmentedGraph,
    rules: &[LocalRule],
    delta: usize,
) -> Result<()> {
    validate(rules)?;
    if rules.is_empty() {
        return Ok(());
    }
    let ctx = Context::new(a, delta);
    let star = a.star();
    let excluded: BTreeMap<(VertexId, VertexId), VertexId> = claim4_triples(a)
        .into_iter()
        .map(|t| ((t.sender, t.crossing), t.small))
        .collect();
    let mut transfers = Vec::new();
    let mut exclusions = Vec::new();
    for r in star.vertices() {
        let receiving: Vec<usize> = (0..rules.len())
            .filter(|&i| ctx.vertex_matches(&rules[i].receiver, r))
            .collect();
        if receiving.is_empty() {
            continue;
        }
        let senders: BTreeSet<VertexId> = star.neighbors(r).collect();
        for s in senders {
            let darts: Vec<DartId> = star
                .rotation(s)
                .iter()
                .copied()
                .filter(|&d| star.head(d) == r)
                .collect();
            let matched: Vec<usize> = receiving
                .iter()
                .copied()
                .filter(|&i| ctx.vertex_matches(&rules[i].sender, s))
                .filter(|&i| darts.iter().any(|&d| ctx.link_matches(&rules[i], d)))
                .collect();
            match matched.as_slice() {
                [] => {}
                [i] => {
                    if let Some(&via) = excluded.get(&(s, r)) {
                        exclusions.push(Exclusion {
                            sender: s,
                            receiver: r,
                            via,
                            rule: *i,
                        });
                    } else {
                        transfers.push((s, r, *i));
                    }
                }
                [i, j, ..] => {
                    return Err(Error::RuleConflict {
                        first: rules[*i].id.clone(),
                        second: rules[*j].id.clone(),
                        sender: s,
                        receiver: r,
                    })
                }
            }
        }
    }
    for (s, r, i) in transfers {
        let rule = &rules[i];
        ledger.transfer(
            Account::Vertex(s),
            Account::Vertex(r),
            rule.amount.to_charge(),
            &rule.id,
        );
    }
    ledger.exclusions.extend(exclusions);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounds_parse() {
        let b: Vec<Bound> = serde_json::from_str(r#"[3, "4+", "5"]"#).unwrap();
        assert_eq!(b, vec![Bound::Exactly(3), Bound::AtLeast(4), Bound::Exactly(5)]);
        let d: Vec<DegreeThreshold> = serde_json::from_str(r#"["delta-2", "delta", 7]"#).unwrap();
        assert_eq!(
            d,
            vec![
                DegreeThreshold::DeltaMinus(2),
                DegreeThreshold::DeltaMinus(0),
                DegreeThreshold::Absolute(7)
            ]
        );
        assert_eq!(d[0].resolve(11), 9);
        let f: FracBound = "4/3+".parse().unwrap();
        assert!(f.matches(Ratio::new(5, 3)) && !f.matches(Ratio::new(1, 1)));
        assert!(serde_json::from_str::<Bound>(r#""x+""#).is_err());
    }

    #[test]
    fn cyclic_matching() {
        let p = [Bound::Exactly(3), Bound::Exactly(3), Bound::AtLeast(4), Bound::Exactly(4)];
        assert!(cyclic_match(&p, &[4, 3, 3, 5]));
        assert!(cyclic_match(&p, &[3, 4, 6, 3]));
        assert!(!cyclic_match(&p, &[3, 4, 3, 4]));
        assert!(!cyclic_match(&p, &[3, 3, 4]));
    }

    #[test]
    fn table_validation() {
        assert_eq!(default_rule_table().len(), default_rule_table().len());
        let bad = r#"[{"id":"x","sender":{},"receiver":{},"amount":"3/4"}]"#;
        assert!(matches!(parse_rule_table(bad), Err(Error::RuleTable(_))));
        let dup = r#"[{"id":"x","sender":{},"receiver":{},"amount":"1/3"},
                      {"id":"x","sender":{},"receiver":{},"amount":"1/3"}]"#;
        assert!(parse_rule_table(dup).is_err());
        let unknown = r#"[{"id":"x","sender":{"colour":1},"receiver":{},"amount":"1/3"}]"#;
        assert!(parse_rule_table(unknown).is_err());
        let round = serde_json::to_string(&default_rule_table()).unwrap();
        assert_eq!(parse_rule_table(&round).unwrap(), default_rule_table());
    }
}
