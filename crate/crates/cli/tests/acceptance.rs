//! The acceptance suite: one line per criterion, nonzero exit if any fails.
//! Expected values come from direct computation on plain integers or from
//! an independent cycle check, not from the reproduction module.

use std::panic;
use std::process::Command;

use peano_core::dsl::{evidence_for, gallery_source, load};
use peano_core::gallery::{build, evidence, ModelId};
use peano_core::implication::{build_graph, check_consistency, propagate, EdgeStatus};
use peano_core::model::{check_axioms, leq, zero_succ_closure, Clause, ClauseVerdict, Element, Model, ModelExt, Regime};
use peano_core::oracle::{
    all_relations, fin_duality_agrees, fin_finite_descent, fin_induction_iff_well_founded, fin_induction_principle,
    fin_well_founded, sample_relations, FiniteRelation,
};
use peano_core::ordinal::Ordinal;
use peano_core::principles::{
    evaluate, verify_evidence, Evidence, Principle, Relation, StatusTable, SubsetTarget, Verdict,
};

use Principle::*;

const BUDGET: usize = 64;
const SEED: u64 = 7;

type Outcome = Result<(), String>;

macro_rules! check {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn verified(id: ModelId, e: &Evidence, budget: usize) -> Outcome {
    let c = verify_evidence(&build(id), e, budget).map_err(|err| err.to_string())?;
    check!(c.is_verified(), "{id}: {e} rejected: {c:?}");
    Ok(())
}

fn table(id: ModelId) -> Result<StatusTable, String> {
    evaluate(&build(id), &evidence(id), BUDGET).map_err(|e| e.to_string())
}

fn verdicts(t: &StatusTable, holds: &[Principle], fails: &[Principle]) -> Outcome {
    for p in holds {
        check!(t.holds(*p), "{}: {p} should hold, got {}", t.model, t.get(*p).label());
    }
    for p in fails {
        check!(t.fails(*p), "{}: {p} should fail, got {}", t.model, t.get(*p).label());
    }
    Ok(())
}

fn consistent(t: &StatusTable, r: Regime) -> Outcome {
    let c = check_consistency(t, &build_graph(r));
    check!(c.is_consistent(), "{}: {c:?}", t.model);
    Ok(())
}

fn ordinal(terms: &[(u64, u64)]) -> Ordinal {
    Ordinal::new(terms.iter().copied().filter(|(_, c)| *c > 0)).unwrap()
}

fn small(x: &Element, i: usize) -> i64 {
    x.small(i).expect("small parameter")
}

/// A finite relation is well-founded iff it has no cycle. Kahn's algorithm
/// removes elements with nothing left below them.
fn acyclic(r: &FiniteRelation) -> bool {
    let n = r.size();
    let mut indeg: Vec<usize> = (0..n).map(|j| (0..n).filter(|&i| r.relates(i, j)).count()).collect();
    let mut ready: Vec<usize> = (0..n).filter(|&j| indeg[j] == 0).collect();
    let mut removed = 0;
    while let Some(i) = ready.pop() {
        removed += 1;
        for j in 0..n {
            if r.relates(i, j) {
                indeg[j] -= 1;
                if indeg[j] == 0 {
                    ready.push(j);
                }
            }
        }
    }
    removed == n
}

fn corpus() -> Vec<FiniteRelation> {
    let mut out = Vec::new();
    for n in 0..=3 {
        out.extend(all_relations(n).unwrap());
    }
    assert_eq!(out.len(), 1 + 2 + 16 + 512);
    out.extend(sample_relations(10_000, 4..=4, SEED).unwrap());
    out.extend(sample_relations(500, 0..=10, SEED).unwrap());
    out
}

fn c1_axioms() -> Outcome {
    for id in ModelId::ALL.into_iter().filter(|id| *id != ModelId::Std) {
        let want = if id.short() <= "m4" { Regime::PreInductive } else { Regime::SubInductive };
        check!(id.regime() == want, "{id} regime");
        let r = check_axioms(&build(id), want, BUDGET).map_err(|e| e.to_string())?;
        check!(r.passed(), "{id}: {:?}", r.failures().next());
    }
    let m5 = build(ModelId::M5Reversed);
    let r = check_axioms(&m5, Regime::PreInductive, 8).map_err(|e| e.to_string())?;
    match r.verdict(Clause::ZeroMinimal) {
        Some(ClauseVerdict::Fail { witness }) => {
            check!(m5.less(&witness[0], &m5.zero()).unwrap(), "M5 witness {witness:?} is not below zero");
        }
        other => return Err(format!("M5 (d)(i): {other:?}")),
    }
    let m7 = build(ModelId::M7Discrete);
    let r = check_axioms(&m7, Regime::PreInductive, 8).map_err(|e| e.to_string())?;
    match r.verdict(Clause::SuccessorSection) {
        Some(ClauseVerdict::Fail { witness }) => {
            let (x, p) = (&witness[0], &witness[1]);
            let lhs = m7.less(x, &m7.succ(p).unwrap()).unwrap();
            let rhs = x == p || m7.less(x, p).unwrap();
            check!(lhs != rhs, "M7 witness {x}, {p} does not violate (d)(ii)");
        }
        other => return Err(format!("M7 (d)(ii): {other:?}")),
    }
    Ok(())
}

fn omega_plus_omega(x: &Element) -> Option<Ordinal> {
    let n = x.small(0)? as u64;
    Some(if x.is("A") { ordinal(&[(0, n)]) } else { ordinal(&[(1, 1), (0, n)]) })
}

fn c2_m1() -> Outcome {
    let id = ModelId::M1OmegaPlusOmega;
    let w = Evidence::subset("A", Element::new("B", [0]), SubsetTarget::RI, |x| x.is("A"));
    verified(id, &w, BUDGET)?;
    verified(id, &Evidence::rank("w+w", Relation::Order, omega_plus_omega), BUDGET)?;
    let t = table(id)?;
    verdicts(&t, &[CI, IPS, WO, WFO, WFS, FDO, FDS], &[RI, SI, ZS])?;
    consistent(&t, Regime::PreInductive)
}

fn c3_m2() -> Outcome {
    let id = ModelId::M2OmegaIncomparable;
    verified(id, &Evidence::incomparable(Element::new("A", [0]), Element::new("B", [0])), BUDGET)?;
    verified(id, &Evidence::rank("w+w", Relation::Order, omega_plus_omega), BUDGET)?;
    let t = table(id)?;
    verdicts(&t, &[WFO], &[WO])?;
    consistent(&t, Regime::PreInductive)
}

fn c4_m3() -> Outcome {
    let id = ModelId::M3Grid;
    let height = |x: &Element| Some(ordinal(&[(0, x.small(1)? as u64)]));
    verified(id, &Evidence::rank("k", Relation::Successor, height), BUDGET)?;
    let row = |j: u64| Element::new("G", [j + 1, 0]);
    verified(id, &Evidence::descent("row", Relation::Order, row), BUDGET)?;
    let m = build(id);
    for j in 0..BUDGET as u64 {
        check!(m.less(&row(j + 1), &row(j)).unwrap(), "G({}, 0) is not below G({}, 0)", j + 2, j + 1);
    }
    let t = table(id)?;
    verdicts(&t, &[WFS], &[WFO])?;
    consistent(&t, Regime::PreInductive)
}

fn c5_m4() -> Outcome {
    let id = ModelId::M4OmegaPlusZeta;
    let closure = zero_succ_closure(&build(id), 100).map_err(|e| e.to_string())?;
    check!(closure.holds_at_budget, "ZS fails at {:?}", closure.witness);
    let neg = |j: u64| Element::new("B", [-(j as i64)]);
    verified(id, &Evidence::descent("neg", Relation::Successor, neg), BUDGET)?;
    let seed = StatusTable::from_verdicts("m4", &[(WFS, Verdict::Fails), (ZS, Verdict::Holds)]);
    let closed = propagate(&seed, &build_graph(Regime::PreInductive)).map_err(|e| e.to_string())?;
    verdicts(&closed, &[], &Principle::INDUCTION)?;
    check!(Principle::INDUCTION.len() == 9, "nine principles");
    Ok(())
}

fn c6_induction_oracle() -> Outcome {
    for r in corpus() {
        let wf = acyclic(&r);
        check!(fin_well_founded(&r) == wf, "well-foundedness wrong on {r:?}");
        check!(fin_induction_principle(&r) == wf, "induction principle wrong on {r:?}");
        check!(fin_induction_iff_well_founded(&r), "disagreement on {r:?}");
    }
    Ok(())
}

fn c7_duality_oracle() -> Outcome {
    for r in corpus() {
        check!(fin_finite_descent(&r) == acyclic(&r), "finite descent wrong on {r:?}");
        check!(fin_duality_agrees(&r), "disagreement on {r:?}");
    }
    Ok(())
}

fn c8_std_facts() -> Outcome {
    let m = build(ModelId::Std);
    check!(zero_succ_closure(&m, BUDGET).unwrap().holds_at_budget, "ZS fails");
    let xs = m.enumerate(BUDGET);
    let values: Vec<i64> = xs.iter().map(|x| small(x, 0)).collect();
    check!(values == (0..BUDGET as i64).collect::<Vec<_>>(), "enumeration is not 0..64");
    for x in &xs {
        check!(leq(&m, &m.zero(), x).unwrap(), "0 <= {x} fails");
        check!(small(&m.succ(x).unwrap(), 0) == small(x, 0) + 1, "succ({x}) is not x + 1");
    }
    for x in &xs {
        for y in &xs {
            let (a, b) = (small(x, 0), small(y, 0));
            let lt = m.less(x, y).unwrap();
            check!(lt == (a < b), "order disagrees with integers at {x}, {y}");
            let count = [lt, x == y, m.less(y, x).unwrap()].iter().filter(|v| **v).count();
            check!(count == 1, "trichotomy fails at {x}, {y}");
            if lt {
                check!(m.less(&m.succ(x).unwrap(), &m.succ(y).unwrap()).unwrap(), "succ not monotone at {x}, {y}");
            }
        }
    }
    Ok(())
}

fn c9_sub_inductive() -> Outcome {
    let expected: [(ModelId, &[Principle], &[Principle]); 4] = [
        (ModelId::M5Reversed, &[RI, WFS], &[SI, CI, WFO, WO]),
        (ModelId::M6Braid, &[CI, ZS], &[SI]),
        (ModelId::M7Discrete, &[WFO, ZS], &[WO]),
        (ModelId::M8OmegaPlusZetaCut, &[WFO], &[WFS]),
    ];
    let mut tables = Vec::new();
    for (id, holds, fails) in expected {
        let t = table(id)?;
        verdicts(&t, holds, fails)?;
        consistent(&t, Regime::SubInductive)?;
        tables.push(t);
    }
    let g = build_graph(Regime::SubInductive);
    for e in g.edges.iter().filter(|e| e.status == EdgeStatus::Invalid) {
        check!(
            tables.iter().any(|t| t.holds(e.src) && t.fails(e.dst) && t.holds(ZS)),
            "no table refutes {e}"
        );
    }
    Ok(())
}

fn c10_dsl() -> Outcome {
    for id in ModelId::ALL {
        let dsl = load(gallery_source(id)).map_err(|e| format!("{id}: {e}"))?;
        let builtin = build(id);
        check!(dsl.zero() == builtin.zero(), "{id}: zero");
        let xs = builtin.enumerate(BUDGET);
        check!(dsl.enumerate(BUDGET) == xs, "{id}: enumeration");
        for x in &xs {
            check!(dsl.succ(x).unwrap() == builtin.succ(x).unwrap(), "{id}: succ at {x}");
            check!(dsl.pred(x).unwrap() == builtin.pred(x).unwrap(), "{id}: pred at {x}");
            for y in &xs {
                check!(dsl.less(x, y).unwrap() == builtin.less(x, y).unwrap(), "{id}: order at {x}, {y}");
            }
        }
        let t = evaluate(&dsl, &evidence_for(&dsl, BUDGET), BUDGET).map_err(|e| e.to_string())?;
        check!(t == table(id)?, "{id}: tables differ");
    }
    Ok(())
}

fn c11_determinism() -> Outcome {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_peano"))
            .args(["reproduce", "--seed", "7"])
            .output()
            .map_err(|e| e.to_string())
    };
    let (a, b) = (run()?, run()?);
    check!(a.status.success(), "reproduce exited with {:?}: {}", a.status.code(), String::from_utf8_lossy(&a.stderr));
    check!(a.stdout == b.stdout, "outputs differ");
    Ok(())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("axiom conformance", c1_axioms),
        ("M1 omega+omega", c2_m1),
        ("M2 incomparable copies", c3_m2),
        ("M3 grid", c4_m3),
        ("M4 omega+zeta", c5_m4),
        ("finite induction oracle", c6_induction_oracle),
        ("finite duality oracle", c7_duality_oracle),
        ("standard model facts", c8_std_facts),
        ("sub-inductive separations", c9_sub_inductive),
        ("DSL round-trip", c10_dsl),
        ("determinism", c11_determinism),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (title, f)) in criteria.iter().enumerate() {
        let result = panic::catch_unwind(f).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match result {
            Ok(()) => println!("criterion {:>2} PASS {title}", i + 1),
            Err(reason) => {
                failed += 1;
                println!("criterion {:>2} FAIL {title}: {reason}", i + 1);
            }
        }
    }
    println!("{}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
