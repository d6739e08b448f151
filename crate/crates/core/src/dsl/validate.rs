//! Static checks on a parsed model: name resolution, arities, and the
//! requirement that `succ` rules split each sort into disjoint cases that
//! together cover it.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use serde::Serialize;

use super::ast::{Clause, Guard, ModelAst, Pattern, Rule, Term};
use super::compile::{unit_inverse, Inner, Inverse, PredSource};
use crate::model::{fair_enumeration, Element, ParamDomain};

/// Elements examined when a check cannot be decided exactly.
pub const SAMPLE: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationError {
    pub clause: String,
    pub message: String,
}

impl fmt::Display for ValidationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.clause, self.message)
    }
}

fn err(clause: impl fmt::Display, message: impl Into<String>) -> ValidationError {
    ValidationError {
        clause: clause.to_string(),
        message: message.into(),
    }
}

/// How thoroughly the `succ` case split of a sort was checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum Coverage {
    /// Decided by testing every region cut out by the guard thresholds.
    Exact { points: usize },
    /// Tested on the first carrier elements of the sort only.
    Sampled { points: usize },
}

struct Scope<'a> {
    arity: HashMap<&'a str, usize>,
    errors: Vec<ValidationError>,
}

impl<'a> Scope<'a> {
    fn pattern(&mut self, clause: &str, p: &Pattern, bound: &mut BTreeSet<String>) {
        match self.arity.get(p.sort.as_str()) {
            None => self.errors.push(err(clause, format!("unknown sort `{}`", p.sort))),
            Some(&k) if k != p.vars.len() => self.errors.push(err(
                clause,
                format!("sort `{}` takes {k} parameters, pattern has {}", p.sort, p.vars.len()),
            )),
            _ => {}
        }
        for v in &p.vars {
            if !bound.insert(v.clone()) {
                self.errors.push(err(clause, format!("variable `{v}` is bound twice")));
            }
        }
    }

    fn term(&mut self, clause: &str, t: &Term, bound: &BTreeSet<String>) {
        match self.arity.get(t.sort.as_str()) {
            None => self.errors.push(err(clause, format!("unknown sort `{}`", t.sort))),
            Some(&k) if k != t.args.len() => self.errors.push(err(
                clause,
                format!("sort `{}` takes {k} parameters, term has {}", t.sort, t.args.len()),
            )),
            _ => {}
        }
        let free: BTreeSet<String> = t.args.iter().flat_map(|a| a.vars().map(str::to_string)).collect();
        self.unbound(clause, free, bound);
    }

    fn unbound(&mut self, clause: &str, used: BTreeSet<String>, bound: &BTreeSet<String>) {
        for v in used.difference(bound) {
            self.errors.push(err(clause, format!("variable `{v}` is not bound")));
        }
    }

    fn guard(&mut self, clause: &str, g: Option<&Guard>, bound: &BTreeSet<String>) {
        if let Some(g) = g {
            self.unbound(clause, g.vars(), bound);
        }
    }

    fn rule(&mut self, keyword: &'static str, r: &Rule) {
        let clause = Clause(r, keyword).to_string();
        let mut bound = BTreeSet::new();
        self.pattern(&clause, &r.pattern, &mut bound);
        self.guard(&clause, r.guard.as_ref(), &bound);
        self.term(&clause, &r.target, &bound);
    }
}

/// Name resolution, arities and variable binding.
pub fn structure(ast: &ModelAst) -> Result<(), Vec<ValidationError>> {
    let mut scope = Scope {
        arity: HashMap::new(),
        errors: Vec::new(),
    };
    for s in &ast.sorts {
        let clause = s.to_string();
        if scope.arity.insert(&s.name, s.params.len()).is_some() {
            scope.errors.push(err(&clause, format!("sort `{}` declared twice", s.name)));
        }
        let mut bound = BTreeSet::new();
        for (p, _) in &s.params {
            if !bound.insert(p.clone()) {
                scope.errors.push(err(&clause, format!("parameter `{p}` declared twice")));
            }
        }
        scope.guard(&clause, s.carrier.as_ref(), &bound);
    }
    let zero = format!("zero {}", ast.zero);
    scope.term(&zero, &ast.zero, &BTreeSet::new());
    for r in &ast.succ {
        scope.rule("succ", r);
    }
    for r in &ast.pred {
        scope.rule("pred", r);
    }
    for r in &ast.less {
        let clause = r.to_string();
        let mut bound = BTreeSet::new();
        scope.pattern(&clause, &r.left, &mut bound);
        scope.pattern(&clause, &r.right, &mut bound);
        scope.guard(&clause, Some(&r.guard), &bound);
    }
    for r in &ast.ranks {
        let clause = r.to_string();
        let mut bound = BTreeSet::new();
        scope.pattern(&clause, &r.pattern, &mut bound);
        scope.guard(&clause, r.guard.as_ref(), &bound);
        scope.unbound(&clause, r.value.vars(), &bound);
    }
    if scope.errors.is_empty() {
        Ok(())
    } else {
        Err(scope.errors)
    }
}

/// Inverts every `succ` rule; fails on rules that are not unit affine maps.
pub fn derive_inverses(ast: &ModelAst) -> Result<Vec<Inverse>, Vec<ValidationError>> {
    let mut out = Vec::new();
    let mut errors = Vec::new();
    for (i, r) in ast.succ.iter().enumerate() {
        match unit_inverse(i, r) {
            Some(inv) => out.push(inv),
            None => errors.push(err(
                Clause(r, "succ"),
                "non-unit coefficient; declare pred rules to give the inverse explicitly",
            )),
        }
    }
    if errors.is_empty() {
        Ok(out)
    } else {
        Err(errors)
    }
}

/// Integers around every point where a comparison in `guards` can change
/// truth value, for guards over a single variable.
fn critical_points<'g>(guards: impl Iterator<Item = &'g Guard>, domain: ParamDomain) -> Vec<BigInt> {
    let mut pts: BTreeSet<BigInt> = (-2..=2).map(BigInt::from).collect();
    for g in guards {
        for diff in g.comparison_differences() {
            let Some((_, a)) = diff.coefficients().next() else {
                continue;
            };
            let b = diff.constant_term();
            let num = -b;
            let (lo, hi) = (num.div_floor(a), num.div_ceil(a));
            let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
            let mut k: BigInt = &lo - 2;
            let end: BigInt = &hi + 2;
            while k <= end {
                pts.insert(k.clone());
                k += 1;
            }
        }
    }
    pts.into_iter().filter(|v| domain.admits(v)).collect()
}

fn witness_text(pattern: &Pattern, x: &Element) -> String {
    let binds: Vec<String> = pattern.vars.iter().zip(x.params()).map(|(v, p)| format!("{v} = {p}")).collect();
    if binds.is_empty() {
        x.to_string()
    } else {
        format!("{x} ({})", binds.join(", "))
    }
}

fn check_succ_at(inner: &Inner, x: &Element, decl: &str) -> Option<ValidationError> {
    let firing = inner.firing(&inner.ast.succ, x);
    match firing.as_slice() {
        [] => Some(err(decl, format!("succ is not total: no rule applies at {x}"))),
        [(i, image)] => {
            let rule = &inner.ast.succ[*i];
            match image {
                Some(y) if inner.in_carrier(y) => None,
                Some(y) => Some(err(Clause(rule, "succ"), format!("maps {x} to {y}, outside the carrier"))),
                None => Some(err(Clause(rule, "succ"), format!("cannot be evaluated at {x}"))),
            }
        }
        [(i, _), (j, _), ..] => {
            let (a, b) = (&inner.ast.succ[*i], &inner.ast.succ[*j]);
            Some(err(
                Clause(a, "succ"),
                format!("overlaps `{}` at {}", Clause(b, "succ"), witness_text(&a.pattern, x)),
            ))
        }
    }
}

/// Checks that need the interpreter: `zero` in the carrier, the `succ` case
/// split, and declared `pred` rules inverting `succ`.
pub(super) fn semantics(inner: &Inner) -> Result<Vec<(String, Coverage)>, Vec<ValidationError>> {
    let ast = &inner.ast;
    let mut errors = Vec::new();
    let zero = inner.instantiate(&ast.zero, &Default::default());
    match &zero {
        Some(z) if inner.in_carrier(z) => {}
        _ => errors.push(err(format!("zero {}", ast.zero), "zero is not in the carrier")),
    }
    let mut coverage = Vec::new();
    for (si, decl) in ast.sorts.iter().enumerate() {
        let shape = &inner.shapes[si];
        let (points, cov): (Vec<Element>, fn(usize) -> Coverage) = match shape.domains.as_slice() {
            [] => (vec![Element::new(shape.name.clone(), Vec::<BigInt>::new())], |points| {
                Coverage::Exact { points }
            }),
            [d] => {
                let guards = decl
                    .carrier
                    .iter()
                    .chain(ast.succ.iter().filter(|r| r.pattern.sort == decl.name).filter_map(|r| r.guard.as_ref()));
                let pts = critical_points(guards, *d)
                    .into_iter()
                    .map(|v| Element::new(shape.name.clone(), [v]))
                    .collect();
                (pts, |points| Coverage::Exact { points })
            }
            _ => (
                fair_enumeration(std::slice::from_ref(shape), SAMPLE, &|x| inner.in_carrier(x)),
                |points| Coverage::Sampled { points },
            ),
        };
        let points: Vec<Element> = points.into_iter().filter(|x| inner.in_carrier(x)).collect();
        if let Some(e) = points.iter().find_map(|x| check_succ_at(inner, x, &decl.to_string())) {
            errors.push(e);
        }
        coverage.push((decl.name.clone(), cov(points.len())));
    }
    if errors.is_empty() && inner.pred == PredSource::Declared {
        errors.extend(check_declared_pred(inner));
    }
    if errors.is_empty() {
        Ok(coverage)
    } else {
        Err(errors)
    }
}

fn check_declared_pred(inner: &Inner) -> Option<ValidationError> {
    let sample = inner.enumerate(SAMPLE);
    for y in &sample {
        let firing = inner.firing(&inner.ast.pred, y);
        if let [(i, _), (j, _), ..] = firing.as_slice() {
            let (a, b) = (&inner.ast.pred[*i], &inner.ast.pred[*j]);
            return Some(err(
                Clause(a, "pred"),
                format!("overlaps `{}` at {}", Clause(b, "pred"), witness_text(&a.pattern, y)),
            ));
        }
        if let Some((i, image)) = firing.first() {
            let clause = Clause(&inner.ast.pred[*i], "pred");
            let Some(x) = image.as_ref().filter(|x| inner.in_carrier(x)) else {
                return Some(err(clause, format!("maps {y} outside the carrier")));
            };
            if inner.succ(x).as_ref() != Some(y) {
                return Some(err(clause, format!("maps {y} to {x}, but succ({x}) /= {y}")));
            }
        }
    }
    for x in &sample {
        let Some(y) = inner.succ(x) else { continue };
        if inner.pred(&y).as_ref() != Some(x) {
            return Some(err("pred", format!("no pred rule recovers {x} from succ({x}) = {y}")));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::super::{compile, parse};
    use super::*;

    fn errors(src: &str) -> Vec<ValidationError> {
        compile(parse(src).unwrap()).unwrap_err()
    }

    #[test]
    fn overlapping_guards() {
        let e = errors("model x { sort A(n: nat) zero A(0) succ A(n) if n >= 0 -> A(n + 1) succ A(n) if n >= 5 -> A(n + 2) }");
        assert_eq!(e.len(), 1);
        assert!(e[0].message.contains("A(5) (n = 5)"), "{}", e[0]);
    }

    #[test]
    fn gap_in_guards() {
        let e = errors("model x { sort A(n: int) zero A(0) succ A(n) if n < -3 -> A(n + 1) succ A(n) if n > -3 -> A(n + 1) }");
        assert!(e[0].message.contains("no rule applies at A(-3)"), "{}", e[0]);
    }

    #[test]
    fn parity_split_is_total() {
        let ok = parse("model x { sort A(n: nat) zero A(0) succ A(n) if even(n) -> A(n + 1) succ A(n) if odd(n) -> A(n + 1) }");
        let m = compile(ok.unwrap()).unwrap();
        assert!(matches!(m.coverage()[0].1, Coverage::Exact { .. }));
    }

    #[test]
    fn unknown_names_and_arity() {
        let e = errors("model x { sort A(n: nat) zero A(0) succ A(n) -> B(n) less A(m, k) < A(n) iff q < n }");
        let text: Vec<String> = e.iter().map(|e| e.message.clone()).collect();
        assert!(text.iter().any(|m| m.contains("unknown sort `B`")));
        assert!(text.iter().any(|m| m.contains("takes 1 parameters, pattern has 2")));
        assert!(text.iter().any(|m| m.contains("`q` is not bound")));
    }

    #[test]
    fn zero_outside_carrier() {
        let e = errors("model x { sort A(n: nat) where n > 0 zero A(0) succ A(n) -> A(n + 1) }");
        assert!(e[0].message.contains("zero is not in the carrier"));
    }

    #[test]
    fn non_unit_successor_needs_pred() {
        let e = errors("model x { sort A(n: nat) zero A(0) succ A(n) -> A(2*n + 1) }");
        assert!(e[0].message.contains("non-unit coefficient"), "{}", e[0]);
        let ok = "model x { sort A(n: nat) zero A(0) succ A(n) -> A(2*n + 1) pred A(n) if odd(n) -> A(n - 1) }";
        let e = errors(ok);
        assert!(e[0].message.contains("maps"), "{}", e[0]);
    }

    #[test]
    fn succ_must_stay_in_carrier() {
        let e = errors("model x { sort A(n: int) where n < 10 zero A(0) succ A(n) -> A(n + 1) }");
        assert!(e[0].message.contains("outside the carrier"), "{}", e[0]);
    }
}
