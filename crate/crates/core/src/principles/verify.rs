//! Re-verification of evidence against a model at a budget.

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use super::{
    DescentWitness, IncomparablePair, LinearityPlusRank, RankCertificate, Relation, SubsetTarget,
    SubsetWitness,
};
use crate::model::{leq, section_within, Element, Model, ModelError, ModelExt, SectionKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("incomparable pair repeats {0}")]
    EqualPair(Element),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rejection {
    /// The subset does not contain zero.
    ZeroMissing,
    /// The excluded element is a member after all.
    ExcludedIsMember(Element),
    /// `y` is a member but `succ(y)` is not.
    NotClosed { at: Element, image: Element },
    /// The SI hypothesis holds at `p` (the whole section lies in the subset)
    /// but `succ(p)` is missing.
    HypothesisHolds { p: Element, image: Element },
    /// Every enumerated element of the section lies in the subset, but the
    /// section is not known to be complete.
    Unestablished { p: Element },
    /// The descent fails at index `index`.
    Step { index: u64, reason: String },
    /// The rank is undefined at an element.
    Unranked(Element),
    /// `x` precedes `y` but the rank does not increase.
    Pair { x: Element, y: Element },
    /// Two distinct elements are incomparable.
    Incomparable { x: Element, y: Element },
    /// The pair is comparable.
    Comparable,
    /// The predecessor chain from `start` got stuck at `at`, either because
    /// `at` has no predecessor or the step cap ran out.
    Stuck { start: Element, at: Element, cap_exceeded: bool },
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rejection::ZeroMissing => f.write_str("zero is not a member"),
            Rejection::ExcludedIsMember(x) => write!(f, "excluded element {x} is a member"),
            Rejection::NotClosed { at, image } => write!(f, "{at} is a member but succ = {image} is not"),
            Rejection::HypothesisHolds { p, image } => {
                write!(f, "every x <= {p} is a member but succ = {image} is not")
            }
            Rejection::Unestablished { p } => {
                write!(f, "cannot establish that the hypothesis fails at {p}")
            }
            Rejection::Step { index, reason } => write!(f, "step {index}: {reason}"),
            Rejection::Unranked(x) => write!(f, "rank undefined at {x}"),
            Rejection::Pair { x, y } => write!(f, "rank does not increase from {x} to {y}"),
            Rejection::Incomparable { x, y } => write!(f, "{x} and {y} are incomparable"),
            Rejection::Comparable => f.write_str("the pair is comparable"),
            Rejection::Stuck { start, at, cap_exceeded } => {
                if *cap_exceeded {
                    write!(f, "no chain to zero from {start} within the step cap (at {at})")
                } else {
                    write!(f, "chain from {start} stops at {at}, which has no predecessor")
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Check {
    Verified,
    Rejected(Rejection),
}

impl Check {
    pub fn is_verified(&self) -> bool {
        matches!(self, Check::Verified)
    }
}

fn reject(r: Rejection) -> Result<Check, VerifyError> {
    Ok(Check::Rejected(r))
}

/// `Y` contains zero, misses the excluded element, and is closed under the
/// target's hypothesis on the enumerated fragment.
///
/// For SI, a point `p` with `succ(p) ∉ Y` is acceptable only when some
/// `x <= p` demonstrably lies outside `Y`. If every enumerated `x <= p` is a
/// member the witness is rejected, since the budget cannot show that the
/// hypothesis fails there.
pub fn verify_subset_witness(
    model: &dyn Model,
    w: &SubsetWitness,
    budget: usize,
) -> Result<Check, VerifyError> {
    model.check(&w.excluded)?;
    let member = |x: &Element| w.membership.contains(x);
    if !member(&model.zero()) {
        return reject(Rejection::ZeroMissing);
    }
    if member(&w.excluded) {
        return reject(Rejection::ExcludedIsMember(w.excluded.clone()));
    }
    let universe = model.enumerate(budget);
    for p in &universe {
        let image = model.apply_succ(p)?;
        if member(&image) {
            continue;
        }
        match w.target {
            SubsetTarget::RI => {
                if member(p) {
                    return reject(Rejection::NotClosed {
                        at: p.clone(),
                        image,
                    });
                }
            }
            SubsetTarget::SI => {
                let s = section_within(model, SectionKind::Reflexive, p, &universe)?;
                if s.elements.iter().any(|x| !member(x)) {
                    continue;
                }
                return reject(if s.exhaustive {
                    Rejection::HypothesisHolds { p: p.clone(), image }
                } else {
                    Rejection::Unestablished { p: p.clone() }
                });
            }
        }
    }
    Ok(Check::Verified)
}

/// Checks `seq(0..=budget)`: members of the carrier, pairwise distinct, and
/// each step descending along the witness's relation.
pub fn verify_descent(model: &dyn Model, w: &DescentWitness, budget: usize) -> Result<Check, VerifyError> {
    let budget = budget as u64;
    let mut seen = HashSet::new();
    let mut prev: Option<Element> = None;
    for j in 0..=budget {
        let cur = w.seq.at(j);
        if !model.in_carrier(&cur) {
            return reject(Rejection::Step {
                index: j,
                reason: format!("{cur} is not in the carrier"),
            });
        }
        if !seen.insert(cur.clone()) {
            return reject(Rejection::Step {
                index: j,
                reason: format!("{cur} repeats"),
            });
        }
        if let Some(p) = prev {
            let ok = match w.relation {
                Relation::Order => model.relate(&cur, &p)?,
                Relation::Successor => model.apply_succ(&cur)? == p,
            };
            if !ok {
                let op = match w.relation {
                    Relation::Order => "<",
                    Relation::Successor => "is not the predecessor of",
                };
                let reason = match w.relation {
                    Relation::Order => format!("not {cur} {op} {p}"),
                    Relation::Successor => format!("{cur} {op} {p}"),
                };
                return reject(Rejection::Step { index: j - 1, reason });
            }
        }
        prev = Some(cur);
    }
    Ok(Check::Verified)
}

/// The rank strictly increases along every enumerated instance of the
/// relation: `x < y` implies `rank(x) < rank(y)` for the order, and
/// `rank(x) < rank(succ x)` for the successor relation.
pub fn verify_rank(model: &dyn Model, c: &RankCertificate, budget: usize) -> Result<Check, VerifyError> {
    let universe = model.enumerate(budget);
    let rank = |x: &Element| c.rank.rank(x).ok_or_else(|| Rejection::Unranked(x.clone()));
    let ranks = match universe.iter().map(rank).collect::<Result<Vec<_>, _>>() {
        Ok(r) => r,
        Err(r) => return reject(r),
    };
    match c.relation {
        Relation::Order => {
            for (x, rx) in universe.iter().zip(&ranks) {
                for (y, ry) in universe.iter().zip(&ranks) {
                    if model.relate(x, y)? && rx >= ry {
                        return reject(Rejection::Pair {
                            x: x.clone(),
                            y: y.clone(),
                        });
                    }
                }
            }
        }
        Relation::Successor => {
            for (x, rx) in universe.iter().zip(&ranks) {
                let s = model.apply_succ(x)?;
                let rs = match rank(&s) {
                    Ok(r) => r,
                    Err(r) => return reject(r),
                };
                if *rx >= rs {
                    return reject(Rejection::Pair { x: x.clone(), y: s });
                }
            }
        }
    }
    Ok(Check::Verified)
}

/// Every enumerated element reaches zero through at most `budget`
/// predecessor steps.
pub fn verify_reachability(model: &dyn Model, budget: usize) -> Result<Check, VerifyError> {
    let zero = model.zero();
    for start in model.enumerate(budget) {
        let mut cur = start.clone();
        for steps in 0..=budget {
            if cur == zero {
                break;
            }
            if steps == budget {
                return reject(Rejection::Stuck {
                    start,
                    at: cur,
                    cap_exceeded: true,
                });
            }
            match model.apply_pred(&cur)? {
                Some(p) => cur = p,
                None => {
                    return reject(Rejection::Stuck {
                        start,
                        at: cur,
                        cap_exceeded: false,
                    })
                }
            }
        }
    }
    Ok(Check::Verified)
}

/// Neither `x <= y` nor `y <= x`.
pub fn verify_incomparable_pair(model: &dyn Model, w: &IncomparablePair) -> Result<Check, VerifyError> {
    model.check(&w.x)?;
    model.check(&w.y)?;
    if w.x == w.y {
        return Err(VerifyError::EqualPair(w.x.clone()));
    }
    if leq(model, &w.x, &w.y)? || leq(model, &w.y, &w.x)? {
        return reject(Rejection::Comparable);
    }
    Ok(Check::Verified)
}

/// Trichotomy on every enumerated pair, then the order rank.
pub fn verify_linear_rank(
    model: &dyn Model,
    c: &LinearityPlusRank,
    budget: usize,
) -> Result<Check, VerifyError> {
    let universe = model.enumerate(budget);
    for (i, x) in universe.iter().enumerate() {
        for y in &universe[i + 1..] {
            if !model.relate(x, y)? && !model.relate(y, x)? {
                return reject(Rejection::Incomparable {
                    x: x.clone(),
                    y: y.clone(),
                });
            }
        }
    }
    verify_rank(
        model,
        &RankCertificate {
            relation: Relation::Order,
            rank: c.rank.clone(),
        },
        budget,
    )
}
