//! Budgeted conformance checks for the two axiom regimes.

use std::collections::HashMap;
use std::fmt;

use super::{Element, Model, ModelError, Regime};

/// Triples for the transitivity check come from this many elements at most.
const TRANSITIVITY_CAP: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Clause {
    Injective,
    ZeroNotSuccessor,
    Irreflexive,
    Transitive,
    /// Nothing lies below zero.
    ZeroMinimal,
    /// `x < succ(p)` iff `x = p` or `x < p`.
    SuccessorSection,
}

impl Clause {
    pub const ALL: [Clause; 6] = [
        Clause::Injective,
        Clause::ZeroNotSuccessor,
        Clause::Irreflexive,
        Clause::Transitive,
        Clause::ZeroMinimal,
        Clause::SuccessorSection,
    ];

    pub fn applies_to(self, regime: Regime) -> bool {
        match self {
            Clause::ZeroMinimal | Clause::SuccessorSection => regime == Regime::PreInductive,
            _ => true,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Clause::Injective => "(a) successor is injective",
            Clause::ZeroNotSuccessor => "(b) zero is not a successor",
            Clause::Irreflexive => "(c)(i) order is irreflexive",
            Clause::Transitive => "(c)(ii) order is transitive",
            Clause::ZeroMinimal => "(d)(i) nothing below zero",
            Clause::SuccessorSection => "(d)(ii) x < succ(p) iff x <= p",
        }
    }

    pub fn id(self) -> &'static str {
        match self {
            Clause::Injective => "a",
            Clause::ZeroNotSuccessor => "b",
            Clause::Irreflexive => "c.i",
            Clause::Transitive => "c.ii",
            Clause::ZeroMinimal => "d.i",
            Clause::SuccessorSection => "d.ii",
        }
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClauseVerdict {
    /// Held on every tuple examined.
    Pass { checked: usize },
    /// Concrete elements violating the clause.
    Fail { witness: Vec<Element> },
}

impl ClauseVerdict {
    pub fn passed(&self) -> bool {
        matches!(self, ClauseVerdict::Pass { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    pub regime: Regime,
    pub budget: usize,
    pub clauses: Vec<(Clause, ClauseVerdict)>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.clauses.iter().all(|(_, v)| v.passed())
    }

    pub fn verdict(&self, clause: Clause) -> Option<&ClauseVerdict> {
        self.clauses.iter().find(|(c, _)| *c == clause).map(|(_, v)| v)
    }

    pub fn failures(&self) -> impl Iterator<Item = (Clause, &[Element])> {
        self.clauses.iter().filter_map(|(c, v)| match v {
            ClauseVerdict::Fail { witness } => Some((*c, witness.as_slice())),
            ClauseVerdict::Pass { .. } => None,
        })
    }
}

/// Checks every clause of `regime` over pairs (and, for transitivity,
/// triples) of enumerated elements.
pub fn check_axioms(
    model: &dyn Model,
    regime: Regime,
    budget: usize,
) -> Result<AxiomReport, ModelError> {
    let universe = model.enumerate(budget);
    let succs = universe
        .iter()
        .map(|x| model.apply_succ(x))
        .collect::<Result<Vec<_>, _>>()?;
    let zero = model.zero();
    let mut clauses = Vec::new();
    for clause in Clause::ALL.into_iter().filter(|c| c.applies_to(regime)) {
        let verdict = match clause {
            Clause::Injective => injective(&universe, &succs),
            Clause::ZeroNotSuccessor => match universe.iter().zip(&succs).find(|(_, s)| **s == zero) {
                Some((x, _)) => fail([x]),
                None => pass(universe.len()),
            },
            Clause::Irreflexive => {
                let mut verdict = pass(universe.len());
                for x in &universe {
                    if model.relate(x, x)? {
                        verdict = fail([x]);
                        break;
                    }
                }
                verdict
            }
            Clause::Transitive => transitive(model, &universe[..universe.len().min(TRANSITIVITY_CAP)])?,
            Clause::ZeroMinimal => {
                let mut verdict = pass(universe.len());
                for x in &universe {
                    if model.relate(x, &zero)? {
                        verdict = fail([x]);
                        break;
                    }
                }
                verdict
            }
            Clause::SuccessorSection => successor_section(model, &universe, &succs)?,
        };
        clauses.push((clause, verdict));
    }
    Ok(AxiomReport {
        regime,
        budget,
        clauses,
    })
}

fn pass(checked: usize) -> ClauseVerdict {
    ClauseVerdict::Pass { checked }
}

fn fail<'a>(witness: impl IntoIterator<Item = &'a Element>) -> ClauseVerdict {
    ClauseVerdict::Fail {
        witness: witness.into_iter().cloned().collect(),
    }
}

fn injective(universe: &[Element], succs: &[Element]) -> ClauseVerdict {
    let mut seen: HashMap<&Element, &Element> = HashMap::new();
    for (x, s) in universe.iter().zip(succs) {
        if let Some(prev) = seen.insert(s, x) {
            return fail([prev, x]);
        }
    }
    pass(universe.len())
}

fn transitive(model: &dyn Model, universe: &[Element]) -> Result<ClauseVerdict, ModelError> {
    let n = universe.len();
    let mut rel = vec![false; n * n];
    for (i, x) in universe.iter().enumerate() {
        for (j, y) in universe.iter().enumerate() {
            rel[i * n + j] = model.relate(x, y)?;
        }
    }
    for i in 0..n {
        for j in 0..n {
            if !rel[i * n + j] {
                continue;
            }
            for k in 0..n {
                if rel[j * n + k] && !rel[i * n + k] {
                    return Ok(fail([&universe[i], &universe[j], &universe[k]]));
                }
            }
        }
    }
    Ok(pass(n * n * n))
}

fn successor_section(
    model: &dyn Model,
    universe: &[Element],
    succs: &[Element],
) -> Result<ClauseVerdict, ModelError> {
    for (p, sp) in universe.iter().zip(succs) {
        for x in universe {
            let lhs = model.relate(x, sp)?;
            let rhs = x == p || model.relate(x, p)?;
            if lhs != rhs {
                return Ok(fail([x, p]));
            }
        }
    }
    Ok(pass(universe.len() * universe.len()))
}

/// Outcome of checking `X = {0} ∪ S[X]` on an enumerated fragment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Closure {
    pub holds_at_budget: bool,
    /// First enumerated element that is neither zero nor a successor.
    pub witness: Option<Element>,
}

pub fn zero_succ_closure(model: &dyn Model, budget: usize) -> Result<Closure, ModelError> {
    let zero = model.zero();
    for x in model.enumerate(budget) {
        if x != zero && model.apply_pred(&x)?.is_none() {
            return Ok(Closure {
                holds_at_budget: false,
                witness: Some(x),
            });
        }
    }
    Ok(Closure {
        holds_at_budget: true,
        witness: None,
    })
}
