use thiserror::Error;

use super::verify::{
    verify_descent, verify_incomparable_pair, verify_linear_rank, verify_rank, verify_reachability,
    verify_subset_witness, Check, Rejection, VerifyError,
};
use super::{Evidence, Principle, Relation, Status, StatusTable, Support, Verdict};
use crate::model::{check_axioms, zero_succ_closure, Model, ModelError, Regime};

/// The evidence registered for one model.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EvidenceBundle {
    pub items: Vec<Evidence>,
}

impl EvidenceBundle {
    pub fn new(items: Vec<Evidence>) -> Self {
        EvidenceBundle { items }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvaluationError {
    #[error("evidence `{evidence}` rejected: {rejection}")]
    Rejected { evidence: String, rejection: Rejection },
    #[error("evidence `{evidence}` is malformed: {source}")]
    Malformed {
        evidence: String,
        #[source]
        source: VerifyError,
    },
    #[error("conflicting verdicts for {principle}: `{first}` vs `{second}`")]
    Conflict {
        principle: Principle,
        first: String,
        second: String,
    },
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// What a verified item settles.
fn coverage(e: &Evidence) -> (Verdict, &'static [Principle]) {
    use Principle::*;
    match e {
        Evidence::Subset(w) => match w.target {
            super::SubsetTarget::RI => (Verdict::Fails, &[RI]),
            super::SubsetTarget::SI => (Verdict::Fails, &[SI]),
        },
        Evidence::Descent(w) => match w.relation {
            Relation::Order => (Verdict::Fails, &[CI, WFO, WO]),
            Relation::Successor => (Verdict::Fails, &[IPS, WFS]),
        },
        Evidence::Incomparable(_) => (Verdict::Fails, &[WO]),
        Evidence::Rank(c) => match c.relation {
            Relation::Order => (Verdict::Holds, &[CI, WFO]),
            Relation::Successor => (Verdict::Holds, &[IPS, WFS]),
        },
        Evidence::Reachability => (Verdict::Holds, &[RI]),
        Evidence::LinearRank(_) => (Verdict::Holds, &[WO]),
        Evidence::ZeroSuccessorClosure { stuck } => {
            if stuck.is_some() {
                (Verdict::Fails, &[ZS])
            } else {
                (Verdict::Holds, &[ZS])
            }
        }
    }
}

/// Runs the verifier matching the kind of `e`.
pub fn verify_evidence(model: &dyn Model, e: &Evidence, budget: usize) -> Result<Check, VerifyError> {
    match e {
        Evidence::Subset(w) => verify_subset_witness(model, w, budget),
        Evidence::Descent(w) => verify_descent(model, w, budget),
        Evidence::Incomparable(w) => verify_incomparable_pair(model, w),
        Evidence::Rank(c) => verify_rank(model, c, budget),
        Evidence::Reachability => verify_reachability(model, budget),
        Evidence::LinearRank(c) => verify_linear_rank(model, c, budget),
        Evidence::ZeroSuccessorClosure { stuck } => {
            let closure = zero_succ_closure(model, budget)?;
            Ok(if closure.witness == *stuck {
                Check::Verified
            } else {
                Check::Rejected(Rejection::Stuck {
                    start: model.zero(),
                    at: closure.witness.unwrap_or_else(|| model.zero()),
                    cap_exceeded: false,
                })
            })
        }
    }
}

fn settle(table: &mut StatusTable, p: Principle, status: Status) -> Result<(), EvaluationError> {
    let current = table.get(p);
    match (current.verdict(), status.verdict()) {
        (None, _) => {
            table.set(p, status);
            Ok(())
        }
        (Some(a), Some(b)) if a == b => Ok(()),
        _ => Err(EvaluationError::Conflict {
            principle: p,
            first: current.support().map(ToString::to_string).unwrap_or_default(),
            second: status.support().map(ToString::to_string).unwrap_or_default(),
        }),
    }
}

/// Re-verifies every item of `bundle` at `budget` and records what each one
/// settles. Any rejected item, or two items settling a principle both ways,
/// is an error. FDO and FDS mirror WFO and WFS; ZS comes from the closure
/// check.
pub fn evaluate(model: &dyn Model, bundle: &EvidenceBundle, budget: usize) -> Result<StatusTable, EvaluationError> {
    let mut table = StatusTable::new(model.name(), budget);
    let mut pre_axioms: Option<bool> = None;
    for item in &bundle.items {
        match verify_evidence(model, item, budget) {
            Ok(Check::Verified) => {}
            Ok(Check::Rejected(rejection)) => {
                return Err(EvaluationError::Rejected {
                    evidence: item.to_string(),
                    rejection,
                })
            }
            Err(source) => {
                return Err(EvaluationError::Malformed {
                    evidence: item.to_string(),
                    source,
                })
            }
        }
        let (verdict, covered) = coverage(item);
        for &p in covered {
            settle(&mut table, p, Status::with(verdict, Support::Evidence(item.clone())))?;
        }
        if *item == Evidence::Reachability {
            // Without the order clauses, reaching zero says nothing about SI.
            let ok = match pre_axioms {
                Some(ok) => ok,
                None => *pre_axioms.insert(check_axioms(model, Regime::PreInductive, budget)?.passed()),
            };
            if ok {
                settle(&mut table, Principle::SI, Status::Holds(Support::Evidence(item.clone())))?;
            }
        }
    }
    let closure = zero_succ_closure(model, budget)?;
    let zs = Evidence::ZeroSuccessorClosure {
        stuck: closure.witness,
    };
    let (verdict, _) = coverage(&zs);
    settle(&mut table, Principle::ZS, Status::with(verdict, Support::Evidence(zs)))?;
    for (fd, wf) in [(Principle::FDO, Principle::WFO), (Principle::FDS, Principle::WFS)] {
        let status = table.get(wf).clone();
        if status != Status::Unknown {
            settle(&mut table, fd, status)?;
        }
    }
    Ok(table)
}
