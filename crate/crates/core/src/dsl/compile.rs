//! Interpretation of a validated syntax tree as a [`Model`].

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::ast::{Env, ModelAst, Pattern, Rule, Term};
use super::validate::{self, Coverage, ValidationError};
use crate::model::{fair_enumeration, Element, Model, ModelError, SortShape};
use crate::ordinal::Ordinal;
use crate::principles::{Evidence, Relation};

/// How `pred` is obtained.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PredSource {
    Declared,
    /// Inverted from affine `succ` rules with unit coefficients.
    Derived(Vec<Inverse>),
}

/// Inverse of one `succ` rule: source variable `j` equals
/// `sign * (target[position] - offset)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Inverse {
    pub rule: usize,
    pub slots: Vec<(usize, bool, BigInt)>,
}

#[derive(Debug)]
pub(super) struct Inner {
    pub ast: ModelAst,
    pub display_name: String,
    pub shapes: Vec<SortShape>,
    pub sort_index: HashMap<String, usize>,
    pub pred: PredSource,
}

/// A `.model` file turned into an executable structure.
#[derive(Debug, Clone)]
pub struct CompiledModel {
    pub(super) inner: Arc<Inner>,
    coverage: Vec<(String, Coverage)>,
}

pub(super) fn bind(pattern: &Pattern, x: &Element, env: &mut Env) {
    for (v, p) in pattern.vars.iter().zip(x.params()) {
        env.insert(v.clone(), p.clone());
    }
}

fn matches(pattern: &Pattern, x: &Element) -> bool {
    x.sort() == pattern.sort && x.arity() == pattern.vars.len()
}

impl Inner {
    pub fn instantiate(&self, term: &Term, env: &Env) -> Option<Element> {
        let params: Option<Vec<BigInt>> = term.args.iter().map(|a| a.eval(env)).collect();
        Some(Element::new(term.sort.as_str(), params?))
    }

    pub fn in_carrier(&self, x: &Element) -> bool {
        let Some(&i) = self.sort_index.get(x.sort()) else {
            return false;
        };
        if !self.shapes[i].admits(x) {
            return false;
        }
        let decl = &self.ast.sorts[i];
        match &decl.carrier {
            None => true,
            Some(g) => {
                let env: Env = decl.params.iter().map(|(p, _)| p.clone()).zip(x.params().iter().cloned()).collect();
                g.eval(&env).unwrap_or(false)
            }
        }
    }

    /// Every rule whose pattern and guard accept `x`, with its image.
    pub fn firing(&self, rules: &[Rule], x: &Element) -> Vec<(usize, Option<Element>)> {
        let mut out = Vec::new();
        for (i, r) in rules.iter().enumerate() {
            if !matches(&r.pattern, x) {
                continue;
            }
            let mut env = Env::new();
            bind(&r.pattern, x, &mut env);
            if r.guard.as_ref().is_none_or(|g| g.eval(&env) == Some(true)) {
                out.push((i, self.instantiate(&r.target, &env)));
            }
        }
        out
    }

    pub fn succ(&self, x: &Element) -> Option<Element> {
        match self.firing(&self.ast.succ, x).as_slice() {
            [(_, image)] => image.clone(),
            _ => None,
        }
    }

    pub fn pred(&self, y: &Element) -> Option<Element> {
        match &self.pred {
            PredSource::Declared => match self.firing(&self.ast.pred, y).as_slice() {
                [(_, image)] => image.clone(),
                _ => None,
            },
            PredSource::Derived(inverses) => inverses.iter().find_map(|inv| self.invert(inv, y)),
        }
    }

    fn invert(&self, inv: &Inverse, y: &Element) -> Option<Element> {
        let rule = &self.ast.succ[inv.rule];
        if y.sort() != rule.target.sort || y.arity() != rule.target.args.len() {
            return None;
        }
        let params: Vec<BigInt> = inv
            .slots
            .iter()
            .map(|(pos, positive, offset)| {
                let v = &y.params()[*pos] - offset;
                if *positive {
                    v
                } else {
                    -v
                }
            })
            .collect();
        let x = Element::new(rule.pattern.sort.as_str(), params);
        if !self.in_carrier(&x) {
            return None;
        }
        let mut env = Env::new();
        bind(&rule.pattern, &x, &mut env);
        let fires = rule.guard.as_ref().is_none_or(|g| g.eval(&env) == Some(true));
        (fires && self.succ(&x).as_ref() == Some(y)).then_some(x)
    }

    pub fn relate(&self, x: &Element, y: &Element) -> bool {
        self.ast.less.iter().any(|r| {
            if !matches(&r.left, x) || !matches(&r.right, y) {
                return false;
            }
            let mut env = Env::new();
            bind(&r.left, x, &mut env);
            bind(&r.right, y, &mut env);
            r.guard.eval(&env) == Some(true)
        })
    }

    pub fn rank(&self, relation: Relation, x: &Element) -> Option<Ordinal> {
        self.ast.ranks.iter().filter(|r| r.relation == relation).find_map(|r| {
            if !matches(&r.pattern, x) {
                return None;
            }
            let mut env = Env::new();
            bind(&r.pattern, x, &mut env);
            if r.guard.as_ref().is_some_and(|g| g.eval(&env) != Some(true)) {
                return None;
            }
            Some(r.value.eval(&env))
        })?
    }

    pub fn enumerate(&self, budget: usize) -> Vec<Element> {
        fair_enumeration(&self.shapes, budget, &|x| self.in_carrier(x))
    }
}

/// Inverse of a `succ` rule whose target arguments are `±v + c` over a
/// permutation of the pattern variables.
pub(super) fn unit_inverse(index: usize, rule: &Rule) -> Option<Inverse> {
    let vars = &rule.pattern.vars;
    if rule.target.args.len() != vars.len() {
        return None;
    }
    let mut slots: Vec<Option<(usize, bool, BigInt)>> = vec![None; vars.len()];
    for (pos, arg) in rule.target.args.iter().enumerate() {
        let mut coeffs = arg.coefficients();
        let (v, c) = coeffs.next()?;
        if coeffs.next().is_some() || !c.abs().is_one() {
            return None;
        }
        let j = vars.iter().position(|p| p == v)?;
        if slots[j].is_some() {
            return None;
        }
        slots[j] = Some((pos, c.is_positive(), arg.constant_term().clone()));
    }
    Some(Inverse {
        rule: index,
        slots: slots.into_iter().collect::<Option<_>>()?,
    })
}

/// Validates `ast` and builds the executable model.
pub fn compile(ast: ModelAst) -> Result<CompiledModel, Vec<ValidationError>> {
    validate::structure(&ast)?;
    let pred = if ast.pred.is_empty() {
        PredSource::Derived(validate::derive_inverses(&ast)?)
    } else {
        PredSource::Declared
    };
    let shapes: Vec<SortShape> = ast
        .sorts
        .iter()
        .map(|s| SortShape::new(&s.name, s.params.iter().map(|(_, d)| *d)))
        .collect();
    let sort_index = ast.sorts.iter().enumerate().map(|(i, s)| (s.name.clone(), i)).collect();
    let inner = Inner {
        display_name: ast.name.replace('_', "-"),
        ast,
        shapes,
        sort_index,
        pred,
    };
    let coverage = validate::semantics(&inner)?;
    Ok(CompiledModel {
        inner: Arc::new(inner),
        coverage,
    })
}

impl CompiledModel {
    pub fn ast(&self) -> &ModelAst {
        &self.inner.ast
    }

    pub fn pred_source(&self) -> &PredSource {
        &self.inner.pred
    }

    /// How the `succ` disjointness and totality check covered each sort.
    pub fn coverage(&self) -> &[(String, Coverage)] {
        &self.coverage
    }

    pub fn sorts(&self) -> &[SortShape] {
        &self.inner.shapes
    }

    /// One rank certificate per relation that has `rank` clauses.
    pub fn rank_certificates(&self) -> Vec<Evidence> {
        [Relation::Order, Relation::Successor]
            .into_iter()
            .filter(|rel| self.inner.ast.ranks.iter().any(|r| r.relation == *rel))
            .map(|rel| {
                let inner = Arc::clone(&self.inner);
                let name = format!("{}-{}-rank", self.inner.display_name, rel.as_str());
                Evidence::rank(&name, rel, move |x| inner.rank(rel, x))
            })
            .collect()
    }
}

impl Model for CompiledModel {
    /// The model name with underscores shown as hyphens, matching builtin ids.
    fn name(&self) -> &str {
        &self.inner.display_name
    }

    fn zero(&self) -> Element {
        self.inner.instantiate(&self.inner.ast.zero, &Env::new()).expect("zero is constant")
    }

    fn in_carrier(&self, x: &Element) -> bool {
        self.inner.in_carrier(x)
    }

    fn apply_succ(&self, x: &Element) -> Result<Element, ModelError> {
        self.inner.succ(x).ok_or_else(|| ModelError::Undefined {
            op: "succ",
            element: x.clone(),
        })
    }

    fn apply_pred(&self, x: &Element) -> Result<Option<Element>, ModelError> {
        Ok(self.inner.pred(x))
    }

    fn relate(&self, x: &Element, y: &Element) -> Result<bool, ModelError> {
        Ok(self.inner.relate(x, y))
    }

    fn enumerate(&self, budget: usize) -> Vec<Element> {
        self.inner.enumerate(budget)
    }
}
