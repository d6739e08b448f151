//! Implications between the principles, per axiom regime, with status
//! propagation, consistency checking and DOT export.

use std::fmt::{self, Write as _};

use serde::Serialize;
use thiserror::Error;

use crate::model::Regime;
use crate::principles::{Derivation, Direction, Principle, Status, StatusTable, Support, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EdgeStatus {
    Valid,
    /// Valid under the extra hypothesis ZS.
    AlmostValid,
    /// Refuted by a gallery model.
    Invalid,
}

impl EdgeStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            EdgeStatus::Valid => "valid",
            EdgeStatus::AlmostValid => "almost-valid",
            EdgeStatus::Invalid => "invalid",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ImplicationEdge {
    pub src: Principle,
    pub dst: Principle,
    pub status: EdgeStatus,
    pub cite: &'static str,
}

impl fmt::Display for ImplicationEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {} ({})", self.src, self.dst, self.status.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ImplicationGraph {
    pub regime: Regime,
    pub edges: Vec<ImplicationEdge>,
}

impl ImplicationGraph {
    pub fn edge(&self, src: Principle, dst: Principle) -> Option<&ImplicationEdge> {
        self.edges.iter().find(|e| e.src == src && e.dst == dst)
    }

    pub fn status(&self, src: Principle, dst: Principle) -> Option<EdgeStatus> {
        self.edge(src, dst).map(|e| e.status)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("graph serializes")
    }
}

const EQUIV_RI_SI: &str = "regular and strong induction are equivalent";
const SI_CI: &str = "strong induction implies complete induction";
const CI_SI: &str = "complete induction implies strong induction when X = {0} ∪ S[X]";
const RI_IPS: &str = "regular induction implies the successor induction principle";
const IPS_RI: &str = "the successor induction principle implies regular induction when X = {0} ∪ S[X]";
const GEN_ORDER: &str = "generalized induction: the induction principle of < holds iff < is well-founded";
const GEN_SUCC: &str = "generalized induction: the induction principle of S holds iff S is well-founded";
const FD_ORDER: &str = "finite descent of < is the contrapositive of well-foundedness of <";
const FD_SUCC: &str = "finite descent of S is the contrapositive of well-foundedness of S";
const WFO_WFS: &str = "a <-minimal element is S-minimal, since p < S(p)";
const WFS_WFO: &str = "an S-minimal element of a subset yields a <-minimal one when X = {0} ∪ S[X]";
const WO_WFO: &str = "every minimum element with respect to < is a minimal element";
const WFO_WO: &str = "well-foundedness gives a minimum when X = {0} ∪ S[X]";
const RI_WO: &str = "regular induction makes < a well-order";
const RI_ZS: &str = "regular induction gives X = {0} ∪ S[X]";

fn edge(src: Principle, dst: Principle, status: EdgeStatus, cite: &'static str) -> ImplicationEdge {
    ImplicationEdge {
        src,
        dst,
        status,
        cite,
    }
}

/// The curated edge set of `regime`, sorted by endpoints.
pub fn build_graph(regime: Regime) -> ImplicationGraph {
    use EdgeStatus::{AlmostValid, Invalid, Valid};
    use Principle::*;
    let mut edges = vec![
        edge(RI, SI, Valid, EQUIV_RI_SI),
        edge(SI, RI, Valid, EQUIV_RI_SI),
        edge(SI, CI, Valid, SI_CI),
        edge(CI, SI, AlmostValid, CI_SI),
        edge(RI, IPS, Valid, RI_IPS),
        edge(IPS, RI, AlmostValid, IPS_RI),
        edge(CI, WFO, Valid, GEN_ORDER),
        edge(WFO, CI, Valid, GEN_ORDER),
        edge(IPS, WFS, Valid, GEN_SUCC),
        edge(WFS, IPS, Valid, GEN_SUCC),
        edge(FDO, WFO, Valid, FD_ORDER),
        edge(WFO, FDO, Valid, FD_ORDER),
        edge(FDS, WFS, Valid, FD_SUCC),
        edge(WFS, FDS, Valid, FD_SUCC),
        edge(WFO, WFS, Valid, WFO_WFS),
        edge(WFS, WFO, AlmostValid, WFS_WFO),
        edge(WO, WFO, Valid, WO_WFO),
        edge(WFO, WO, AlmostValid, WFO_WO),
        edge(RI, WO, Valid, RI_WO),
        edge(RI, ZS, Valid, RI_ZS),
    ];
    if regime == Regime::SubInductive {
        let refuted: [(Principle, Principle, &'static str); 7] = [
            (RI, SI, "refuted by m5-reversed: RI holds, SI fails, ZS holds"),
            (RI, CI, "refuted by m5-reversed: RI holds, CI fails, ZS holds"),
            (RI, WO, "refuted by m5-reversed: RI holds, WO fails, ZS holds"),
            (WFS, WFO, "refuted by m5-reversed: WFS holds, WFO fails, ZS holds"),
            (CI, SI, "refuted by m6-braid: CI holds, SI fails, ZS holds"),
            (WFO, WO, "refuted by m7-discrete: WFO holds, WO fails, ZS holds"),
            (WFO, WFS, "refuted by m8-omega-plus-zeta-cut: WFO holds, WFS fails, ZS holds"),
        ];
        for (src, dst, cite) in refuted {
            match edges.iter_mut().find(|e| e.src == src && e.dst == dst) {
                Some(e) => {
                    e.status = Invalid;
                    e.cite = cite;
                }
                None => edges.push(edge(src, dst, Invalid, cite)),
            }
        }
    }
    edges.sort_by_key(|e| (e.src, e.dst));
    ImplicationGraph { regime, edges }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Consistency {
    Consistent,
    Violation(ImplicationEdge),
}

impl Consistency {
    pub fn is_consistent(&self) -> bool {
        matches!(self, Consistency::Consistent)
    }
}

fn violated(table: &StatusTable, e: &ImplicationEdge) -> bool {
    let applies = match e.status {
        EdgeStatus::Valid => true,
        EdgeStatus::AlmostValid => table.holds(Principle::ZS),
        EdgeStatus::Invalid => false,
    };
    applies && table.holds(e.src) && table.fails(e.dst)
}

/// Reports the first edge (in graph order) the table contradicts.
pub fn check_consistency(table: &StatusTable, g: &ImplicationGraph) -> Consistency {
    match g.edges.iter().find(|e| violated(table, e)) {
        Some(e) => Consistency::Violation(e.clone()),
        None => Consistency::Consistent,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PropagationError {
    #[error("table contradicts edge {0}")]
    Inconsistent(ImplicationEdge),
    #[error("propagation along {0} contradicts an existing status")]
    Contradiction(ImplicationEdge),
}

fn chain(status: &Status, start: Principle, direction: Direction) -> (Vec<Principle>, bool) {
    match status.support() {
        Some(Support::Derived(d)) if d.direction == direction => (d.path.clone(), d.uses_zs),
        _ => (vec![start], false),
    }
}

/// Closes `table` under the usable edges: Holds flows forward, Fails flows
/// backward (except out of ZS). Almost-valid edges are usable once ZS holds.
/// Settled entries are never overwritten.
pub fn propagate(table: &StatusTable, g: &ImplicationGraph) -> Result<StatusTable, PropagationError> {
    propagate_counting(table, g).map(|(t, _)| t)
}

/// [`propagate`], also returning how many sweeps over the edges changed
/// something.
pub fn propagate_counting(
    table: &StatusTable,
    g: &ImplicationGraph,
) -> Result<(StatusTable, usize), PropagationError> {
    if let Consistency::Violation(e) = check_consistency(table, g) {
        return Err(PropagationError::Inconsistent(e));
    }
    let mut out = table.clone();
    let mut rounds = 0;
    loop {
        let mut changed = false;
        for e in &g.edges {
            let almost = match e.status {
                EdgeStatus::Valid => false,
                EdgeStatus::AlmostValid if out.holds(Principle::ZS) => true,
                _ => continue,
            };
            match (out.verdict(e.src), out.verdict(e.dst)) {
                (Some(Verdict::Holds), Some(Verdict::Fails)) => {
                    return Err(PropagationError::Contradiction(e.clone()))
                }
                (Some(Verdict::Holds), None) => {
                    let (mut path, zs) = chain(out.get(e.src), e.src, Direction::Forward);
                    path.push(e.dst);
                    let d = Derivation {
                        path,
                        direction: Direction::Forward,
                        uses_zs: zs || almost,
                    };
                    out.set(e.dst, Status::Holds(Support::Derived(d)));
                    changed = true;
                }
                // ZS is a side condition: its failure is not pushed back to RI.
                (None, Some(Verdict::Fails)) if e.dst != Principle::ZS => {
                    let (mut path, zs) = chain(out.get(e.dst), e.dst, Direction::Backward);
                    path.push(e.src);
                    let d = Derivation {
                        path,
                        direction: Direction::Backward,
                        uses_zs: zs || almost,
                    };
                    out.set(e.src, Status::Fails(Support::Derived(d)));
                    changed = true;
                }
                _ => {}
            }
        }
        if !changed {
            return Ok((out, rounds));
        }
        rounds += 1;
    }
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// DOT rendering: solid for valid, dashed for almost-valid, a red `x` label
/// for invalid. With tables, each node carries a tooltip listing the
/// per-model statuses.
pub fn export_dot(g: &ImplicationGraph, tables: &[StatusTable]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph implications {{");
    let _ = writeln!(out, "  label=\"{}\";", g.regime.as_str());
    let _ = writeln!(out, "  node [shape=box];");
    for p in Principle::ALL {
        if tables.is_empty() {
            let _ = writeln!(out, "  {p} [label=\"{p}\"];");
        } else {
            let tip: Vec<String> = tables
                .iter()
                .map(|t| dot_escape(&format!("{}: {}", t.model, t.get(p).label())))
                .collect();
            let _ = writeln!(
                out,
                "  {p} [label=\"{p}\", tooltip=\"{}\"];",
                tip.join("\\n")
            );
        }
    }
    for e in &g.edges {
        let attrs = match e.status {
            EdgeStatus::Valid => "style=solid".to_string(),
            EdgeStatus::AlmostValid => "style=dashed".to_string(),
            EdgeStatus::Invalid => "style=solid, label=\"x\", color=red".to_string(),
        };
        let _ = writeln!(out, "  {} -> {} [{attrs}];", e.src, e.dst);
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_counts() {
        assert_eq!(build_graph(Regime::PreInductive).edges.len(), 20);
        assert_eq!(build_graph(Regime::SubInductive).edges.len(), 21);
    }

    #[test]
    fn no_duplicate_endpoints() {
        for r in [Regime::PreInductive, Regime::SubInductive] {
            let g = build_graph(r);
            let mut keys: Vec<_> = g.edges.iter().map(|e| (e.src, e.dst)).collect();
            keys.dedup();
            assert_eq!(keys.len(), g.edges.len());
        }
    }

    #[test]
    fn sub_regime_keeps_si_ci_and_ips_ri() {
        let g = build_graph(Regime::SubInductive);
        assert_eq!(g.status(Principle::SI, Principle::CI), Some(EdgeStatus::Valid));
        assert_eq!(g.status(Principle::IPS, Principle::RI), Some(EdgeStatus::AlmostValid));
    }
}
