//! Induction principles, the evidence that settles them, and per-model
//! status tables.
//!
//! Satisfaction of a principle quantifies over every subset of an infinite
//! carrier, so it is never decided here. A status is either backed by a
//! piece of evidence that re-verifies at the table's budget, derived along
//! implication edges, or `Unknown`.

mod evaluate;
mod verify;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Serialize, Serializer};

use crate::model::Element;
use crate::ordinal::Ordinal;

pub use evaluate::{evaluate, verify_evidence, EvaluationError, EvidenceBundle};
pub use verify::{
    verify_descent, verify_incomparable_pair, verify_linear_rank, verify_rank, verify_reachability,
    verify_subset_witness, Check, Rejection, VerifyError,
};

#[allow(clippy::upper_case_acronyms)]
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Principle {
    /// Regular induction.
    RI,
    /// Strong induction (hypothesis over `X_{<=p}`, conclusion at `succ(p)`).
    SI,
    /// Complete induction (induction principle of `<`).
    CI,
    /// Induction principle of the successor relation.
    IPS,
    /// Well-ordering: every nonempty subset has a minimum.
    WO,
    /// Well-foundedness of the order.
    WFO,
    /// Well-foundedness of the successor relation.
    WFS,
    /// Finite descent of the order.
    FDO,
    /// Finite descent of the successor relation.
    FDS,
    /// Zero-successor closure `X = {0} ∪ S[X]`. Not an induction principle,
    /// but the side condition of every almost-valid implication.
    ZS,
}

impl Principle {
    pub const ALL: [Principle; 10] = [
        Principle::RI,
        Principle::SI,
        Principle::CI,
        Principle::IPS,
        Principle::WO,
        Principle::WFO,
        Principle::WFS,
        Principle::FDO,
        Principle::FDS,
        Principle::ZS,
    ];

    /// The nine induction principles (everything but ZS).
    pub const INDUCTION: [Principle; 9] = [
        Principle::RI,
        Principle::SI,
        Principle::CI,
        Principle::IPS,
        Principle::WO,
        Principle::WFO,
        Principle::WFS,
        Principle::FDO,
        Principle::FDS,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Principle::RI => "RI",
            Principle::SI => "SI",
            Principle::CI => "CI",
            Principle::IPS => "IPS",
            Principle::WO => "WO",
            Principle::WFO => "WFO",
            Principle::WFS => "WFS",
            Principle::FDO => "FDO",
            Principle::FDS => "FDS",
            Principle::ZS => "ZS",
        }
    }
}

impl fmt::Display for Principle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Principle {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Principle::ALL
            .into_iter()
            .find(|p| p.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown principle `{s}`"))
    }
}

impl Serialize for Principle {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

/// The relation a descent witness or rank certificate is about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Order,
    Successor,
}

impl Relation {
    pub fn as_str(self) -> &'static str {
        match self {
            Relation::Order => "order",
            Relation::Successor => "successor",
        }
    }
}

/// A named, shareable function. Equality is by name: names identify
/// registered builtins, and only names cross the serialization boundary.
pub struct Named<F: ?Sized> {
    name: String,
    func: Arc<F>,
}

impl<F: ?Sized> Named<F> {
    pub fn name(&self) -> &str {
        &self.name
    }
}

impl<F: ?Sized> Clone for Named<F> {
    fn clone(&self) -> Self {
        Named {
            name: self.name.clone(),
            func: Arc::clone(&self.func),
        }
    }
}

impl<F: ?Sized> PartialEq for Named<F> {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
    }
}

impl<F: ?Sized> fmt::Debug for Named<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.name)
    }
}

pub type Membership = Named<dyn Fn(&Element) -> bool + Send + Sync>;
pub type Sequence = Named<dyn Fn(u64) -> Element + Send + Sync>;
pub type RankFn = Named<dyn Fn(&Element) -> Option<Ordinal> + Send + Sync>;

impl Membership {
    pub fn new(name: impl Into<String>, f: impl Fn(&Element) -> bool + Send + Sync + 'static) -> Self {
        Named {
            name: name.into(),
            func: Arc::new(f),
        }
    }

    pub fn contains(&self, x: &Element) -> bool {
        (self.func)(x)
    }
}

impl Sequence {
    pub fn new(name: impl Into<String>, f: impl Fn(u64) -> Element + Send + Sync + 'static) -> Self {
        Named {
            name: name.into(),
            func: Arc::new(f),
        }
    }

    pub fn at(&self, j: u64) -> Element {
        (self.func)(j)
    }
}

impl RankFn {
    pub fn new(
        name: impl Into<String>,
        f: impl Fn(&Element) -> Option<Ordinal> + Send + Sync + 'static,
    ) -> Self {
        Named {
            name: name.into(),
            func: Arc::new(f),
        }
    }

    pub fn rank(&self, x: &Element) -> Option<Ordinal> {
        (self.func)(x)
    }
}

#[allow(clippy::upper_case_acronyms)]
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SubsetTarget {
    RI,
    SI,
}

impl SubsetTarget {
    pub fn principle(self) -> Principle {
        match self {
            SubsetTarget::RI => Principle::RI,
            SubsetTarget::SI => Principle::SI,
        }
    }
}

/// A proper subset `Y` that satisfies the hypotheses of RI (or SI).
#[derive(Debug, Clone, PartialEq)]
pub struct SubsetWitness {
    pub membership: Membership,
    /// A carrier element outside `Y`, showing `Y != X`.
    pub excluded: Element,
    pub target: SubsetTarget,
}

/// An infinite descending chain: `seq(j+1) < seq(j)` for the order, or
/// `succ(seq(j+1)) = seq(j)` for the successor relation.
#[derive(Debug, Clone, PartialEq)]
pub struct DescentWitness {
    pub relation: Relation,
    pub seq: Sequence,
}

/// Two distinct elements neither of which is `<=` the other.
#[derive(Debug, Clone, PartialEq)]
pub struct IncomparablePair {
    pub x: Element,
    pub y: Element,
}

/// A map into ordinals that strictly increases along the relation.
#[derive(Debug, Clone, PartialEq)]
pub struct RankCertificate {
    pub relation: Relation,
    pub rank: RankFn,
}

/// Trichotomy on the enumerated fragment plus an order rank.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearityPlusRank {
    pub rank: RankFn,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Evidence {
    Subset(SubsetWitness),
    Descent(DescentWitness),
    Incomparable(IncomparablePair),
    Rank(RankCertificate),
    /// Every enumerated predecessor chain ends at zero.
    Reachability,
    LinearRank(LinearityPlusRank),
    /// Result of the `X = {0} ∪ S[X]` check; `stuck` is a non-zero element
    /// with no predecessor.
    ZeroSuccessorClosure { stuck: Option<Element> },
}

impl Evidence {
    pub fn subset(
        name: &str,
        excluded: Element,
        target: SubsetTarget,
        f: impl Fn(&Element) -> bool + Send + Sync + 'static,
    ) -> Self {
        Evidence::Subset(SubsetWitness {
            membership: Membership::new(name, f),
            excluded,
            target,
        })
    }

    pub fn descent(name: &str, relation: Relation, f: impl Fn(u64) -> Element + Send + Sync + 'static) -> Self {
        Evidence::Descent(DescentWitness {
            relation,
            seq: Sequence::new(name, f),
        })
    }

    pub fn rank(
        name: &str,
        relation: Relation,
        f: impl Fn(&Element) -> Option<Ordinal> + Send + Sync + 'static,
    ) -> Self {
        Evidence::Rank(RankCertificate {
            relation,
            rank: RankFn::new(name, f),
        })
    }

    pub fn linear_rank(name: &str, f: impl Fn(&Element) -> Option<Ordinal> + Send + Sync + 'static) -> Self {
        Evidence::LinearRank(LinearityPlusRank {
            rank: RankFn::new(name, f),
        })
    }

    pub fn incomparable(x: Element, y: Element) -> Self {
        Evidence::Incomparable(IncomparablePair { x, y })
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Evidence::Subset(_) => "subset-witness",
            Evidence::Descent(_) => "descent-witness",
            Evidence::Incomparable(_) => "incomparable-pair",
            Evidence::Rank(_) => "rank-certificate",
            Evidence::Reachability => "reachability-certificate",
            Evidence::LinearRank(_) => "linearity-plus-rank",
            Evidence::ZeroSuccessorClosure { .. } => "zero-successor-closure",
        }
    }
}

impl fmt::Display for Evidence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Evidence::Subset(w) => write!(
                f,
                "subset-witness[{}] {{{}}} excluding {}",
                w.target.principle(),
                w.membership.name(),
                w.excluded
            ),
            Evidence::Descent(w) => write!(f, "{} descent {}", w.relation.as_str(), w.seq.name()),
            Evidence::Incomparable(p) => write!(f, "incomparable pair ({}, {})", p.x, p.y),
            Evidence::Rank(c) => write!(f, "{} rank {}", c.relation.as_str(), c.rank.name()),
            Evidence::Reachability => f.write_str("reachability certificate"),
            Evidence::LinearRank(c) => write!(f, "trichotomy + order rank {}", c.rank.name()),
            Evidence::ZeroSuccessorClosure { stuck: None } => f.write_str("every enumerated non-zero element is a successor"),
            Evidence::ZeroSuccessorClosure { stuck: Some(x) } => write!(f, "{x} is neither zero nor a successor"),
        }
    }
}

impl Serialize for Evidence {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(None)?;
        map.serialize_entry("kind", self.kind())?;
        match self {
            Evidence::Subset(w) => {
                map.serialize_entry("target", &w.target.principle())?;
                map.serialize_entry("name", w.membership.name())?;
                map.serialize_entry("excluded", &w.excluded)?;
            }
            Evidence::Descent(w) => {
                map.serialize_entry("relation", w.relation.as_str())?;
                map.serialize_entry("name", w.seq.name())?;
            }
            Evidence::Incomparable(p) => {
                map.serialize_entry("x", &p.x)?;
                map.serialize_entry("y", &p.y)?;
            }
            Evidence::Rank(c) => {
                map.serialize_entry("relation", c.relation.as_str())?;
                map.serialize_entry("name", c.rank.name())?;
            }
            Evidence::Reachability => {}
            Evidence::LinearRank(c) => {
                map.serialize_entry("name", c.rank.name())?;
            }
            Evidence::ZeroSuccessorClosure { stuck } => {
                map.serialize_entry("stuck", stuck)?;
            }
        }
        map.end()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Holds,
    Fails,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Holds => "Holds",
            Verdict::Fails => "Fails",
        }
    }
}

/// Direction of a propagated status along implication edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    /// Holds carried from premise to conclusion.
    Forward,
    /// Fails carried from conclusion back to premise.
    Backward,
}

/// How a propagated status was obtained: `path[0]` is the settled starting
/// point, each later entry follows one edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    pub path: Vec<Principle>,
    pub direction: Direction,
    /// Some edge on the path is only almost valid and was used because ZS holds.
    pub uses_zs: bool,
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut names: Vec<&str> = self.path.iter().map(|p| p.as_str()).collect();
        let (start, verb) = (names[0], match self.direction {
            Direction::Forward => "holds",
            Direction::Backward => "fails",
        });
        if self.direction == Direction::Backward {
            names.reverse();
        }
        write!(f, "derived: {} since {start} {verb}", names.join(" => "))?;
        if self.uses_zs {
            f.write_str(", using ZS")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Support {
    Evidence(Evidence),
    Derived(Derivation),
    /// Stated by hand, not backed by evidence.
    Asserted,
}

impl fmt::Display for Support {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Support::Evidence(e) => e.fmt(f),
            Support::Derived(d) => d.fmt(f),
            Support::Asserted => f.write_str("asserted"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub enum Status {
    #[default]
    Unknown,
    Holds(Support),
    Fails(Support),
}

impl Status {
    pub fn verdict(&self) -> Option<Verdict> {
        match self {
            Status::Unknown => None,
            Status::Holds(_) => Some(Verdict::Holds),
            Status::Fails(_) => Some(Verdict::Fails),
        }
    }

    pub fn support(&self) -> Option<&Support> {
        match self {
            Status::Unknown => None,
            Status::Holds(s) | Status::Fails(s) => Some(s),
        }
    }

    pub fn label(&self) -> &'static str {
        self.verdict().map_or("Unknown", Verdict::as_str)
    }

    pub fn with(verdict: Verdict, support: Support) -> Self {
        match verdict {
            Verdict::Holds => Status::Holds(support),
            Verdict::Fails => Status::Fails(support),
        }
    }
}

/// One status per principle for one model at one budget.
#[derive(Debug, Clone, PartialEq)]
pub struct StatusTable {
    pub model: String,
    pub budget: usize,
    entries: BTreeMap<Principle, Status>,
}

impl StatusTable {
    pub fn new(model: impl Into<String>, budget: usize) -> Self {
        StatusTable {
            model: model.into(),
            budget,
            entries: Principle::ALL.iter().map(|&p| (p, Status::Unknown)).collect(),
        }
    }

    /// A table from bare verdicts, each marked as asserted. Meant for
    /// exercising the implication engine with hand-made tables.
    pub fn from_verdicts(model: &str, verdicts: &[(Principle, Verdict)]) -> Self {
        let mut table = StatusTable::new(model, 0);
        for &(p, v) in verdicts {
            table.set(p, Status::with(v, Support::Asserted));
        }
        table
    }

    pub fn get(&self, p: Principle) -> &Status {
        &self.entries[&p]
    }

    pub fn verdict(&self, p: Principle) -> Option<Verdict> {
        self.get(p).verdict()
    }

    pub fn holds(&self, p: Principle) -> bool {
        self.verdict(p) == Some(Verdict::Holds)
    }

    pub fn fails(&self, p: Principle) -> bool {
        self.verdict(p) == Some(Verdict::Fails)
    }

    pub fn set(&mut self, p: Principle, status: Status) {
        self.entries.insert(p, status);
    }

    pub fn iter(&self) -> impl Iterator<Item = (Principle, &Status)> {
        self.entries.iter().map(|(p, s)| (*p, s))
    }

    /// Compact `RI:Fails SI:Fails CI:Holds ...` rendering.
    pub fn summary(&self) -> String {
        self.iter()
            .map(|(p, s)| format!("{p}:{}", s.label()))
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Verdicts only, for comparing tables regardless of support.
    pub fn verdicts(&self) -> Vec<(Principle, Option<Verdict>)> {
        self.iter().map(|(p, s)| (p, s.verdict())).collect()
    }
}

struct StatusEntry<'a>(&'a Status);

impl Serialize for StatusEntry<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("Status", 2)?;
        st.serialize_field("verdict", self.0.label())?;
        match self.0.support() {
            None => st.serialize_field("evidence", &None::<()>)?,
            Some(Support::Evidence(e)) => st.serialize_field("evidence", e)?,
            Some(Support::Derived(d)) => st.serialize_field("evidence", &DerivationJson(d))?,
            Some(Support::Asserted) => st.serialize_field("evidence", &serde_json::json!({"kind": "asserted"}))?,
        }
        st.end()
    }
}

struct DerivationJson<'a>(&'a Derivation);

impl Serialize for DerivationJson<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(4))?;
        map.serialize_entry("kind", "derived")?;
        map.serialize_entry(
            "direction",
            match self.0.direction {
                Direction::Forward => "forward",
                Direction::Backward => "backward",
            },
        )?;
        map.serialize_entry("path", &self.0.path)?;
        map.serialize_entry("uses_zs", &self.0.uses_zs)?;
        map.end()
    }
}

struct Statuses<'a>(&'a BTreeMap<Principle, Status>);

impl Serialize for Statuses<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (p, s) in self.0 {
            map.serialize_entry(p.as_str(), &StatusEntry(s))?;
        }
        map.end()
    }
}

impl Serialize for StatusTable {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("StatusTable", 3)?;
        st.serialize_field("model", &self.model)?;
        st.serialize_field("budget", &self.budget)?;
        st.serialize_field("statuses", &Statuses(&self.entries))?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn principle_names_round_trip() {
        for p in Principle::ALL {
            assert_eq!(p.as_str().parse::<Principle>(), Ok(p));
        }
        assert_eq!("wfo".parse::<Principle>(), Ok(Principle::WFO));
        assert!("XYZ".parse::<Principle>().is_err());
    }

    #[test]
    fn new_table_is_all_unknown() {
        let t = StatusTable::new("m", 8);
        assert!(t.iter().all(|(_, s)| *s == Status::Unknown));
        assert_eq!(t.iter().count(), 10);
    }

    #[test]
    fn json_shape() {
        let mut t = StatusTable::new("std", 4);
        t.set(Principle::RI, Status::Holds(Support::Evidence(Evidence::Reachability)));
        let v = serde_json::to_value(&t).unwrap();
        assert_eq!(v["model"], "std");
        assert_eq!(v["statuses"]["RI"]["verdict"], "Holds");
        assert_eq!(v["statuses"]["RI"]["evidence"]["kind"], "reachability-certificate");
        assert_eq!(v["statuses"]["SI"]["verdict"], "Unknown");
        assert!(v["statuses"]["SI"]["evidence"].is_null());
    }

    #[test]
    fn named_equality_is_by_name() {
        let a = Membership::new("evens", |_| true);
        let b = Membership::new("evens", |_| false);
        assert_eq!(a, b);
        assert_ne!(a, Membership::new("odds", |_| true));
    }
}
