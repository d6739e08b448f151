use num_bigint::BigInt;
use peano_core::dsl::ast::{Affine, CmpOp, Guard, LessRule, ModelAst, OrdExpr, Pattern, RankRule, Rule, SortDecl, Term};
use peano_core::dsl::{
    compile, evidence_for, gallery_link, gallery_source, load, parse, Coverage, DslError, PredSource,
};
use peano_core::gallery::{build, evidence, ModelId};
use peano_core::model::{check_axioms, Model, ModelExt, ParamDomain, Regime};
use peano_core::principles::{evaluate, verify_rank, Evidence, Principle, Relation};
use proptest::prelude::*;

const BUDGET: usize = 64;

#[test]
fn every_transcription_agrees_with_its_builtin() {
    for id in ModelId::ALL {
        let dsl = load(gallery_source(id)).unwrap_or_else(|e| panic!("{id}: {e}"));
        let builtin = build(id);
        assert_eq!(gallery_link(&dsl), Some(id));
        assert_eq!(dsl.name(), builtin.name());
        assert_eq!(dsl.zero(), builtin.zero(), "{id}");
        let xs = builtin.enumerate(BUDGET);
        assert_eq!(dsl.enumerate(BUDGET), xs, "{id}");
        for x in &xs {
            assert!(dsl.in_carrier(x));
            assert_eq!(dsl.succ(x).unwrap(), builtin.succ(x).unwrap(), "{id} succ {x}");
            assert_eq!(dsl.pred(x).unwrap(), builtin.pred(x).unwrap(), "{id} pred {x}");
            for y in &xs {
                assert_eq!(dsl.less(x, y).unwrap(), builtin.less(x, y).unwrap(), "{id}: {x} < {y}");
            }
        }
    }
}

#[test]
fn transcriptions_produce_identical_tables() {
    for id in ModelId::ALL {
        let dsl = load(gallery_source(id)).unwrap();
        let from_dsl = evaluate(&dsl, &evidence_for(&dsl, BUDGET), BUDGET).unwrap();
        let from_builtin = evaluate(&build(id), &evidence(id), BUDGET).unwrap();
        assert_eq!(from_dsl, from_builtin, "{id}");
    }
}

#[test]
fn transcriptions_satisfy_their_axioms() {
    for id in ModelId::ALL {
        let dsl = load(gallery_source(id)).unwrap();
        let report = check_axioms(&dsl, id.regime(), BUDGET).unwrap();
        assert!(report.passed(), "{id}: {report:?}");
    }
}

#[test]
fn declared_rank_clauses_verify() {
    for id in ModelId::ALL {
        let dsl = load(gallery_source(id)).unwrap();
        for ev in dsl.rank_certificates() {
            let Evidence::Rank(cert) = &ev else { panic!("{ev}") };
            let check = verify_rank(&dsl, cert, BUDGET).unwrap();
            assert!(check.is_verified(), "{id} {ev}: {check:?}");
        }
    }
}

#[test]
fn pred_sources() {
    let m6 = load(gallery_source(ModelId::M6Braid)).unwrap();
    assert_eq!(m6.pred_source(), &PredSource::Declared);
    assert!(matches!(m6.coverage()[0].1, Coverage::Sampled { .. }));
    let m1 = load(gallery_source(ModelId::M1OmegaPlusOmega)).unwrap();
    assert!(matches!(m1.pred_source(), PredSource::Derived(v) if v.len() == 2));
    assert!(m1.coverage().iter().all(|(_, c)| matches!(c, Coverage::Exact { .. })));
}

#[test]
fn m1_shape() {
    let ast = parse(gallery_source(ModelId::M1OmegaPlusOmega)).unwrap();
    let sorts: Vec<&str> = ast.sorts.iter().map(|s| s.name.as_str()).collect();
    assert_eq!(sorts, ["A", "B"]);
    assert_eq!(ast.succ.len(), 2);
    assert_eq!(ast.less.len(), 3);
}

#[test]
fn files_round_trip_through_the_printer() {
    for id in ModelId::ALL {
        let ast = parse(gallery_source(id)).unwrap();
        let printed = ast.to_string();
        assert_eq!(parse(&printed).unwrap(), ast, "{id}:\n{printed}");
    }
}

#[test]
fn user_models_without_a_builtin() {
    let src = "model evens {
        sort E(n: nat) where even(n)
        zero E(0)
        succ E(n) -> E(n + 2)
        less E(m) < E(n) iff m < n
        rank order E(n) -> n
        rank succ E(n) -> n
    }";
    let m = load(src).unwrap();
    assert_eq!(gallery_link(&m), None);
    assert_eq!(m.enumerate(4).iter().map(|x| x.to_string()).collect::<Vec<_>>(), ["E(0)", "E(2)", "E(4)", "E(6)"]);
    let t = evaluate(&m, &evidence_for(&m, BUDGET), BUDGET).unwrap();
    for p in [Principle::RI, Principle::CI, Principle::IPS, Principle::WFO, Principle::WFS, Principle::ZS] {
        assert!(t.holds(p), "{p}: {t:?}");
    }
    assert!(check_axioms(&m, Regime::PreInductive, BUDGET).unwrap().passed());
}

#[test]
fn error_reporting() {
    match load("model x {\n  sort A(n: nat)\n  succ A(n) -> A(n + 1)\n}") {
        Err(DslError::Parse(e)) => assert_eq!(e.message, "zero declaration required"),
        other => panic!("{other:?}"),
    }
    match load("model x {\n  sort A(n: nat)\n  zero A(0)\n  succ A(n) -> A(n-)\n}") {
        Err(DslError::Parse(e)) => assert_eq!((e.line, e.column), (4, 20)),
        other => panic!("{other:?}"),
    }
    match load("model x { sort A(n: nat) zero A(0) succ A(n) -> A(2*n) }") {
        Err(DslError::Invalid(errs)) => assert!(errs[0].message.contains("non-unit coefficient")),
        other => panic!("{other:?}"),
    }
    match load("model x { sort A(n: nat) zero A(0) succ A(n) if n >= 0 -> A(n + 1) succ A(n) if n >= 5 -> A(n + 1) }") {
        Err(DslError::Invalid(errs)) => assert!(errs[0].message.contains("A(5) (n = 5)"), "{}", errs[0]),
        other => panic!("{other:?}"),
    }
}

/// A guard that is false exactly on the points a sampled check would miss is
/// still found by the exact single-parameter check.
#[test]
fn exact_check_finds_distant_gaps() {
    let src = "model x { sort A(n: nat) zero A(0) succ A(n) if n < 100000 -> A(n + 1) succ A(n) if n > 100000 -> A(n + 1) }";
    match load(src) {
        Err(DslError::Invalid(errs)) => assert!(errs[0].message.contains("A(100000)"), "{}", errs[0]),
        other => panic!("{other:?}"),
    }
}

const VARS: [&str; 4] = ["a", "b", "n", "x"];
const SORTS: [&str; 3] = ["A", "B", "Gr"];

fn arb_affine() -> impl Strategy<Value = Affine> {
    (proptest::collection::vec((0usize..4, -3i64..=3), 0..3), -5i64..=5).prop_map(|(terms, c)| {
        terms
            .into_iter()
            .fold(Affine::constant(c), |acc, (v, k)| acc.add(&Affine::term(VARS[v], k)))
    })
}

fn arb_guard() -> impl Strategy<Value = Guard> {
    let op = prop_oneof![
        Just(CmpOp::Lt),
        Just(CmpOp::Le),
        Just(CmpOp::Eq),
        Just(CmpOp::Ne),
        Just(CmpOp::Gt),
        Just(CmpOp::Ge)
    ];
    let leaf = prop_oneof![
        Just(Guard::True),
        Just(Guard::False),
        (arb_affine(), op, arb_affine()).prop_map(|(a, o, b)| Guard::Cmp(a, o, b)),
        arb_affine().prop_map(Guard::Even),
        arb_affine().prop_map(Guard::Odd),
    ];
    leaf.prop_recursive(3, 16, 3, |inner| {
        prop_oneof![
            inner.clone().prop_map(|g| Guard::Not(Box::new(g))),
            proptest::collection::vec(inner.clone(), 2..4).prop_map(Guard::and),
            proptest::collection::vec(inner, 2..4).prop_map(Guard::or),
        ]
    })
}

fn arb_pattern() -> impl Strategy<Value = Pattern> {
    (0usize..3, proptest::sample::subsequence(VARS.to_vec(), 0..=3)).prop_map(|(s, vars)| Pattern {
        sort: SORTS[s].to_string(),
        vars: vars.into_iter().map(str::to_string).collect(),
    })
}

fn arb_term() -> impl Strategy<Value = Term> {
    (0usize..3, proptest::collection::vec(arb_affine(), 0..3)).prop_map(|(s, args)| Term {
        sort: SORTS[s].to_string(),
        args,
    })
}

fn arb_rule() -> impl Strategy<Value = Rule> {
    (arb_pattern(), proptest::option::of(arb_guard()), arb_term()).prop_map(|(pattern, guard, target)| Rule {
        pattern,
        guard,
        target,
    })
}

fn arb_ord() -> impl Strategy<Value = OrdExpr> {
    proptest::collection::vec((0u64..4, arb_affine()), 0..4).prop_map(OrdExpr::from_terms)
}

fn arb_model() -> impl Strategy<Value = ModelAst> {
    let sort = (0usize..3, proptest::sample::subsequence(VARS.to_vec(), 0..=2), any::<bool>(), proptest::option::of(arb_guard()))
        .prop_map(|(s, params, int, carrier)| SortDecl {
            name: SORTS[s].to_string(),
            params: params
                .into_iter()
                .map(|p| (p.to_string(), if int { ParamDomain::Int } else { ParamDomain::Nat }))
                .collect(),
            carrier,
        });
    let less = (arb_pattern(), arb_pattern(), arb_guard()).prop_map(|(left, right, guard)| LessRule { left, right, guard });
    let rank = (any::<bool>(), arb_pattern(), proptest::option::of(arb_guard()), arb_ord()).prop_map(
        |(order, pattern, guard, value)| RankRule {
            relation: if order { Relation::Order } else { Relation::Successor },
            pattern,
            guard,
            value,
        },
    );
    (
        proptest::collection::vec(sort, 0..3),
        arb_term(),
        proptest::collection::vec(arb_rule(), 0..3),
        proptest::collection::vec(arb_rule(), 0..2),
        proptest::collection::vec(less, 0..3),
        proptest::collection::vec(rank, 0..3),
    )
        .prop_map(|(sorts, zero, succ, pred, less, ranks)| ModelAst {
            name: "generated_model".to_string(),
            sorts,
            zero,
            succ,
            pred,
            less,
            ranks,
        })
}

proptest! {
    #[test]
    fn parse_inverts_print(ast in arb_model()) {
        let printed = ast.to_string();
        let reparsed = parse(&printed);
        prop_assert_eq!(reparsed.as_ref(), Ok(&ast), "{}", printed);
    }

    #[test]
    fn guards_evaluate_like_their_printed_form(g in arb_guard(), vals in proptest::collection::vec(-6i64..=6, 4)) {
        let env = VARS.iter().map(|v| v.to_string()).zip(vals.iter().map(|&v| BigInt::from(v))).collect();
        let src = format!("model t {{ sort A() zero A() less A() < A() iff {g} }}");
        let reparsed = parse(&src).unwrap();
        prop_assert_eq!(reparsed.less[0].guard.eval(&env), g.eval(&env));
    }
}

#[test]
fn compile_rejects_without_partial_results() {
    let ast = parse("model x { sort A(n: nat) zero A(0) succ A(n) -> A(n + 1) less A(m) < A(n) iff q < n }").unwrap();
    assert!(compile(ast).is_err());
}
