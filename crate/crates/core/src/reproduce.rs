//! The full reproduction suite: every acceptance criterion run in order,
//! each producing one deterministic line.

use std::fmt;

use crate::dsl::{evidence_for, gallery_source, load};
use crate::gallery::{build, evidence, ModelId};
use crate::implication::{build_graph, check_consistency, propagate, Consistency, EdgeStatus};
use crate::model::{check_axioms, leq, zero_succ_closure, Clause, ClauseVerdict, Model, ModelExt, Regime};
use crate::oracle::{all_relations, fin_duality_agrees, fin_induction_iff_well_founded, sample_relations, FiniteRelation};
use crate::principles::{
    evaluate, verify_evidence, Evidence, Principle, Relation, StatusTable, SubsetTarget, Verdict,
};

const BUDGET: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{tag}] {:>2} {}: {}", self.id, self.title, self.detail)
    }
}

pub const TITLES: [&str; 11] = [
    "axiom conformance",
    "M1 omega+omega",
    "M2 incomparable copies",
    "M3 grid",
    "M4 omega+zeta",
    "finite induction oracle",
    "finite duality oracle",
    "standard model facts",
    "sub-inductive separations",
    "DSL round-trip",
    "determinism",
];

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn table(id: ModelId) -> Result<StatusTable, String> {
    evaluate(&build(id), &evidence(id), BUDGET).map_err(|e| format!("{id}: {e}"))
}

fn expect(t: &StatusTable, holds: &[Principle], fails: &[Principle]) -> Result<(), String> {
    for &p in holds {
        ensure(t.holds(p), || format!("{}: expected {p} Holds, got {}", t.model, t.get(p).label()))?;
    }
    for &p in fails {
        ensure(t.fails(p), || format!("{}: expected {p} Fails, got {}", t.model, t.get(p).label()))?;
    }
    Ok(())
}

fn consistent(t: &StatusTable, regime: Regime) -> Result<(), String> {
    match check_consistency(t, &build_graph(regime)) {
        Consistency::Consistent => Ok(()),
        Consistency::Violation(e) => Err(format!("{} violates {e}", t.model)),
    }
}

/// Verifies the first bundle item of `id` selected by `pick`.
fn verify_item(id: ModelId, what: &str, pick: impl Fn(&Evidence) -> bool, budget: usize) -> Result<String, String> {
    let bundle = evidence(id);
    let item = bundle.items.iter().find(|e| pick(e)).ok_or_else(|| format!("{id}: no {what}"))?;
    let check = verify_evidence(&build(id), item, budget).map_err(|e| format!("{id}: {e}"))?;
    ensure(check.is_verified(), || format!("{id}: {item} rejected: {check:?}"))?;
    Ok(item.to_string())
}

fn is_rank(rel: Relation) -> impl Fn(&Evidence) -> bool {
    move |e| matches!(e, Evidence::Rank(c) if c.relation == rel)
}

fn is_descent(rel: Relation) -> impl Fn(&Evidence) -> bool {
    move |e| matches!(e, Evidence::Descent(w) if w.relation == rel)
}

fn axiom_conformance() -> Check {
    for id in ModelId::ALL.into_iter().filter(|id| *id != ModelId::Std) {
        let report = check_axioms(&build(id), id.regime(), BUDGET).map_err(|e| e.to_string())?;
        ensure(report.passed(), || format!("{id} fails {} axioms: {:?}", id.regime(), report.failures().next()))?;
    }
    let witness = |id: ModelId, clause: Clause| -> Result<String, String> {
        let report = check_axioms(&build(id), Regime::PreInductive, 8).map_err(|e| e.to_string())?;
        match report.verdict(clause) {
            Some(ClauseVerdict::Fail { witness }) if !witness.is_empty() => {
                let w: Vec<String> = witness.iter().map(ToString::to_string).collect();
                Ok(format!("{} fails {} at {}", id.short(), clause.id(), w.join(", ")))
            }
            other => Err(format!("{id}: expected {clause} to fail at budget 8, got {other:?}")),
        }
    };
    let m5 = witness(ModelId::M5Reversed, Clause::ZeroMinimal)?;
    let m7 = witness(ModelId::M7Discrete, Clause::SuccessorSection)?;
    Ok(format!("m1-m4 pre-inductive, m5-m8 sub-inductive at budget {BUDGET}; {m5}; {m7}"))
}

fn m1() -> Check {
    use Principle::*;
    let id = ModelId::M1OmegaPlusOmega;
    let subset = verify_item(id, "RI subset witness", |e| matches!(e, Evidence::Subset(w) if w.target == SubsetTarget::RI), BUDGET)?;
    let rank = verify_item(id, "order rank", is_rank(Relation::Order), BUDGET)?;
    let t = table(id)?;
    expect(&t, &[CI, IPS, WO, WFO, WFS, FDO, FDS], &[RI, SI, ZS])?;
    consistent(&t, Regime::PreInductive)?;
    Ok(format!("{subset}; {rank}; {}", t.summary()))
}

fn m2() -> Check {
    let id = ModelId::M2OmegaIncomparable;
    let pair = verify_item(id, "incomparable pair", |e| matches!(e, Evidence::Incomparable(_)), BUDGET)?;
    let rank = verify_item(id, "order rank", is_rank(Relation::Order), BUDGET)?;
    let t = table(id)?;
    expect(&t, &[Principle::WFO], &[Principle::WO])?;
    consistent(&t, Regime::PreInductive)?;
    Ok(format!("{pair}; {rank}; WO Fails, WFO Holds"))
}

fn m3() -> Check {
    let id = ModelId::M3Grid;
    let rank = verify_item(id, "successor rank", is_rank(Relation::Successor), BUDGET)?;
    let descent = verify_item(id, "order descent", is_descent(Relation::Order), BUDGET)?;
    let t = table(id)?;
    expect(&t, &[Principle::WFS], &[Principle::WFO])?;
    consistent(&t, Regime::PreInductive)?;
    Ok(format!("{rank}; {descent} for {BUDGET} steps; WFS Holds, WFO Fails"))
}

fn m4() -> Check {
    let id = ModelId::M4OmegaPlusZeta;
    let closure = zero_succ_closure(&build(id), 100).map_err(|e| e.to_string())?;
    ensure(closure.holds_at_budget, || format!("ZS fails at {:?}", closure.witness))?;
    let descent = verify_item(id, "successor descent", is_descent(Relation::Successor), BUDGET)?;
    let seed = StatusTable::from_verdicts(id.as_str(), &[(Principle::WFS, Verdict::Fails), (Principle::ZS, Verdict::Holds)]);
    let closed = propagate(&seed, &build_graph(Regime::PreInductive)).map_err(|e| e.to_string())?;
    expect(&closed, &[], &Principle::INDUCTION)?;
    Ok(format!("ZS holds at budget 100; {descent}; WFS:Fails propagates to all nine"))
}

struct Corpus {
    label: String,
    relations: Vec<FiniteRelation>,
}

fn corpus(seed: u64) -> Result<Vec<Corpus>, String> {
    let mut out = Vec::new();
    let mut small = Vec::new();
    for n in 0..=3 {
        small.extend(all_relations(n).map_err(|e| e.to_string())?);
    }
    out.push(Corpus {
        label: "exhaustive n<=3".into(),
        relations: small,
    });
    out.push(Corpus {
        label: "sampled n=4".into(),
        relations: sample_relations(10_000, 4..=4, seed).map_err(|e| e.to_string())?,
    });
    out.push(Corpus {
        label: format!("seeded n<=10 (seed {seed})"),
        relations: sample_relations(500, 0..=10, seed).map_err(|e| e.to_string())?,
    });
    Ok(out)
}

fn oracle_agreement(seed: u64, agrees: fn(&FiniteRelation) -> bool) -> Check {
    let mut parts = Vec::new();
    for c in corpus(seed)? {
        let bad = c.relations.iter().filter(|r| !agrees(r)).count();
        let total = c.relations.len();
        ensure(bad == 0, || format!("{}: {bad}/{total} disagree, first {:?}", c.label, c.relations.iter().find(|r| !agrees(r))))?;
        parts.push(format!("{} {total}/{total}", c.label));
    }
    Ok(format!("agree on {}", parts.join(", ")))
}

fn std_facts() -> Check {
    let m = build(ModelId::Std);
    let e = |err: crate::model::ModelError| err.to_string();
    let closure = zero_succ_closure(&m, BUDGET).map_err(e)?;
    ensure(closure.holds_at_budget, || "ZS fails".into())?;
    let xs = m.enumerate(BUDGET);
    let zero = m.zero();
    for x in &xs {
        ensure(leq(&m, &zero, x).map_err(e)?, || format!("0 <= {x} fails"))?;
    }
    let succs: Vec<_> = xs.iter().map(|x| m.succ(x)).collect::<Result<_, _>>().map_err(e)?;
    let mut pairs = 0;
    for (x, sx) in xs.iter().zip(&succs) {
        for (y, sy) in xs.iter().zip(&succs) {
            let (lt, gt) = (m.less(x, y).map_err(e)?, m.less(y, x).map_err(e)?);
            ensure([lt, x == y, gt].iter().filter(|b| **b).count() == 1, || format!("trichotomy fails at {x}, {y}"))?;
            if lt {
                ensure(m.less(sx, sy).map_err(e)?, || format!("succ not monotone at {x} < {y}"))?;
            }
            pairs += 1;
        }
    }
    Ok(format!("ZS, 0 <= x on {} elements, monotone succ and trichotomy on {pairs} pairs", xs.len()))
}

fn sub_inductive() -> Check {
    use Principle::*;
    let expectations: [(ModelId, &[Principle], &[Principle]); 4] = [
        (ModelId::M5Reversed, &[RI, WFS], &[SI, CI, WFO, WO]),
        (ModelId::M6Braid, &[CI, ZS], &[SI]),
        (ModelId::M7Discrete, &[WFO, ZS], &[WO]),
        (ModelId::M8OmegaPlusZetaCut, &[WFO], &[WFS]),
    ];
    let mut tables = Vec::new();
    for (id, holds, fails) in expectations {
        let t = table(id)?;
        expect(&t, holds, fails)?;
        consistent(&t, Regime::SubInductive)?;
        tables.push(t);
    }
    let g = build_graph(Regime::SubInductive);
    let invalid: Vec<_> = g.edges.iter().filter(|e| e.status == EdgeStatus::Invalid).collect();
    for e in &invalid {
        ensure(tables.iter().any(|t| t.holds(e.src) && t.fails(e.dst)), || format!("no table refutes {e}"))?;
    }
    Ok(format!("m5-m8 tables consistent; all {} invalid edges witnessed", invalid.len()))
}

fn dsl_round_trip() -> Check {
    for id in ModelId::ALL {
        let dsl = load(gallery_source(id)).map_err(|e| format!("{id}: {e}"))?;
        let builtin = build(id);
        ensure(dsl.zero() == builtin.zero(), || format!("{id}: zero differs"))?;
        let xs = builtin.enumerate(BUDGET);
        ensure(dsl.enumerate(BUDGET) == xs, || format!("{id}: enumeration differs"))?;
        for x in &xs {
            ensure(dsl.succ(x).ok() == builtin.succ(x).ok(), || format!("{id}: succ differs at {x}"))?;
            ensure(dsl.pred(x).ok() == builtin.pred(x).ok(), || format!("{id}: pred differs at {x}"))?;
            for y in &xs {
                ensure(dsl.less(x, y).ok() == builtin.less(x, y).ok(), || format!("{id}: order differs at {x}, {y}"))?;
            }
        }
        let from_dsl = evaluate(&dsl, &evidence_for(&dsl, BUDGET), BUDGET).map_err(|e| format!("{id}: {e}"))?;
        ensure(from_dsl == table(id)?, || format!("{id}: status tables differ"))?;
    }
    Ok(format!("all {} transcriptions agree over {BUDGET} elements", ModelId::ALL.len()))
}

fn outcome(id: u8, result: Check) -> Outcome {
    let (passed, detail) = match result {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    Outcome {
        id,
        title: TITLES[usize::from(id) - 1],
        passed,
        detail,
    }
}

fn first_ten(seed: u64) -> Vec<Outcome> {
    let checks: [fn(u64) -> Check; 10] = [
        |_| axiom_conformance(),
        |_| m1(),
        |_| m2(),
        |_| m3(),
        |_| m4(),
        |s| oracle_agreement(s, fin_induction_iff_well_founded),
        |s| oracle_agreement(s, fin_duality_agrees),
        |_| std_facts(),
        |_| sub_inductive(),
        |_| dsl_round_trip(),
    ];
    checks.iter().zip(1u8..).map(|(c, id)| outcome(id, c(seed))).collect()
}

/// Runs every criterion. The last one reruns the others and compares the
/// rendered lines.
pub fn run(seed: u64) -> Vec<Outcome> {
    let mut out = first_ten(seed);
    let again = first_ten(seed);
    let same = out.iter().map(ToString::to_string).eq(again.iter().map(ToString::to_string));
    out.push(outcome(
        11,
        if same {
            Ok(format!("a second run with seed {seed} rendered identically"))
        } else {
            Err("a second run rendered differently".into())
        },
    ));
    out
}
