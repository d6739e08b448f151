//! Syntax tree for `.model` files. Expressions are kept in canonical affine
//! form, so structurally equal trees print identically.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::model::ParamDomain;
use crate::ordinal::Ordinal;
use crate::principles::Relation;

/// Variable bindings used while evaluating expressions.
pub type Env = HashMap<String, BigInt>;

/// `c + Σ aᵢ·vᵢ` with every `aᵢ` nonzero.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Affine {
    terms: BTreeMap<String, BigInt>,
    constant: BigInt,
}

impl Affine {
    pub fn constant(c: impl Into<BigInt>) -> Self {
        Affine {
            terms: BTreeMap::new(),
            constant: c.into(),
        }
    }

    pub fn var(name: &str) -> Self {
        Affine::term(name, BigInt::one())
    }

    pub fn term(name: &str, coeff: impl Into<BigInt>) -> Self {
        let mut a = Affine::default();
        a.add_term(name, coeff.into());
        a
    }

    fn add_term(&mut self, name: &str, coeff: BigInt) {
        let entry = self.terms.entry(name.to_string()).or_default();
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(name);
        }
    }

    pub fn add(&self, other: &Affine) -> Affine {
        let mut out = self.clone();
        out.constant += &other.constant;
        for (v, c) in &other.terms {
            out.add_term(v, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Affine {
        self.scale(&BigInt::from(-1))
    }

    pub fn sub(&self, other: &Affine) -> Affine {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &BigInt) -> Affine {
        if k.is_zero() {
            return Affine::default();
        }
        Affine {
            terms: self.terms.iter().map(|(v, c)| (v.clone(), c * k)).collect(),
            constant: &self.constant * k,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.constant.is_zero()
    }

    pub fn as_constant(&self) -> Option<&BigInt> {
        self.terms.is_empty().then_some(&self.constant)
    }

    pub fn constant_term(&self) -> &BigInt {
        &self.constant
    }

    pub fn coefficients(&self) -> impl Iterator<Item = (&str, &BigInt)> {
        self.terms.iter().map(|(v, c)| (v.as_str(), c))
    }

    pub fn vars(&self) -> impl Iterator<Item = &str> {
        self.terms.keys().map(String::as_str)
    }

    /// `None` when a variable is unbound.
    pub fn eval(&self, env: &Env) -> Option<BigInt> {
        let mut acc = self.constant.clone();
        for (v, c) in &self.terms {
            acc += c * env.get(v)?;
        }
        Some(acc)
    }
}

impl fmt::Display for Affine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let mut piece = |f: &mut fmt::Formatter<'_>, neg: bool, body: String| -> fmt::Result {
            match (first, neg) {
                (true, true) => write!(f, "-{body}")?,
                (true, false) => f.write_str(&body)?,
                (false, true) => write!(f, " - {body}")?,
                (false, false) => write!(f, " + {body}")?,
            }
            first = false;
            Ok(())
        };
        for (v, c) in &self.terms {
            let mag = c.abs();
            let body = if mag.is_one() { v.clone() } else { format!("{mag}*{v}") };
            piece(f, c.is_negative(), body)?;
        }
        if !self.constant.is_zero() || self.terms.is_empty() {
            piece(f, self.constant.is_negative(), self.constant.abs().to_string())?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CmpOp {
    Lt,
    Le,
    Eq,
    Ne,
    Gt,
    Ge,
}

impl CmpOp {
    pub fn as_str(self) -> &'static str {
        match self {
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Eq => "=",
            CmpOp::Ne => "/=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
        }
    }

    pub fn apply(self, a: &BigInt, b: &BigInt) -> bool {
        match self {
            CmpOp::Lt => a < b,
            CmpOp::Le => a <= b,
            CmpOp::Eq => a == b,
            CmpOp::Ne => a != b,
            CmpOp::Gt => a > b,
            CmpOp::Ge => a >= b,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Guard {
    True,
    False,
    Cmp(Affine, CmpOp, Affine),
    Even(Affine),
    Odd(Affine),
    Not(Box<Guard>),
    /// At least two conjuncts, none of them a conjunction.
    And(Vec<Guard>),
    /// At least two disjuncts, none of them a disjunction.
    Or(Vec<Guard>),
}

impl Guard {
    pub fn and(parts: impl IntoIterator<Item = Guard>) -> Guard {
        Guard::join(parts, true)
    }

    pub fn or(parts: impl IntoIterator<Item = Guard>) -> Guard {
        Guard::join(parts, false)
    }

    fn join(parts: impl IntoIterator<Item = Guard>, conj: bool) -> Guard {
        let mut flat = Vec::new();
        for g in parts {
            match (g, conj) {
                (Guard::And(inner), true) | (Guard::Or(inner), false) => flat.extend(inner),
                (g, _) => flat.push(g),
            }
        }
        match flat.len() {
            0 if conj => Guard::True,
            0 => Guard::False,
            1 => flat.pop().expect("one part"),
            _ if conj => Guard::And(flat),
            _ => Guard::Or(flat),
        }
    }

    /// `None` when a variable is unbound.
    pub fn eval(&self, env: &Env) -> Option<bool> {
        Some(match self {
            Guard::True => true,
            Guard::False => false,
            Guard::Cmp(a, op, b) => op.apply(&a.eval(env)?, &b.eval(env)?),
            Guard::Even(a) => a.eval(env)?.is_even(),
            Guard::Odd(a) => a.eval(env)?.is_odd(),
            Guard::Not(g) => !g.eval(env)?,
            Guard::And(gs) => {
                let mut all = true;
                for g in gs {
                    all &= g.eval(env)?;
                }
                all
            }
            Guard::Or(gs) => {
                let mut any = false;
                for g in gs {
                    any |= g.eval(env)?;
                }
                any
            }
        })
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Guard::True | Guard::False => {}
            Guard::Cmp(a, _, b) => out.extend(a.vars().chain(b.vars()).map(str::to_string)),
            Guard::Even(a) | Guard::Odd(a) => out.extend(a.vars().map(str::to_string)),
            Guard::Not(g) => g.collect_vars(out),
            Guard::And(gs) | Guard::Or(gs) => gs.iter().for_each(|g| g.collect_vars(out)),
        }
    }

    /// Every comparison atom, as the affine difference `lhs - rhs`.
    pub fn comparison_differences(&self) -> Vec<Affine> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut Vec<Affine>) {
        match self {
            Guard::Cmp(a, _, b) => out.push(a.sub(b)),
            Guard::Not(g) => g.collect_atoms(out),
            Guard::And(gs) | Guard::Or(gs) => gs.iter().for_each(|g| g.collect_atoms(out)),
            _ => {}
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, prec: u8) -> fmt::Result {
        // 0: disjunction context, 1: conjunction, 2: operand of `not`.
        match self {
            Guard::True => f.write_str("true"),
            Guard::False => f.write_str("false"),
            Guard::Cmp(a, op, b) => write!(f, "{a} {} {b}", op.as_str()),
            Guard::Even(a) => write!(f, "even({a})"),
            Guard::Odd(a) => write!(f, "odd({a})"),
            Guard::Not(g) => {
                f.write_str("not ")?;
                g.fmt_prec(f, 2)
            }
            Guard::And(gs) | Guard::Or(gs) => {
                let (word, own) = if matches!(self, Guard::And(_)) { ("and", 1) } else { ("or", 0) };
                let paren = prec > own;
                if paren {
                    f.write_str("(")?;
                }
                for (i, g) in gs.iter().enumerate() {
                    if i > 0 {
                        write!(f, " {word} ")?;
                    }
                    g.fmt_prec(f, own + 1)?;
                }
                if paren {
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for Guard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

/// `Σ ω^e · cₑ` with affine coefficients, keyed by exponent. Zero
/// coefficients are dropped.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct OrdExpr {
    terms: BTreeMap<u64, Affine>,
}

impl OrdExpr {
    pub fn from_terms(terms: impl IntoIterator<Item = (u64, Affine)>) -> Self {
        let mut out = OrdExpr::default();
        for (e, a) in terms {
            let slot = out.terms.entry(e).or_default();
            *slot = slot.add(&a);
            if slot.is_zero() {
                out.terms.remove(&e);
            }
        }
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, &Affine)> {
        self.terms.iter().map(|(e, a)| (*e, a))
    }

    pub fn vars(&self) -> BTreeSet<String> {
        self.terms.values().flat_map(|a| a.vars().map(str::to_string)).collect()
    }

    /// `None` when a coefficient is negative, too large, or unbound.
    pub fn eval(&self, env: &Env) -> Option<Ordinal> {
        let mut cnf = Vec::new();
        for (e, a) in self.terms.iter().rev() {
            let c = a.eval(env)?;
            if c.is_negative() {
                return None;
            }
            if !c.is_zero() {
                cnf.push((*e, c.to_u64()?));
            }
        }
        Ordinal::new(cnf).ok()
    }
}

impl fmt::Display for OrdExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (e, a)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if *e == 0 {
                write!(f, "{a}")?;
                continue;
            }
            let base = if *e == 1 { "w".to_string() } else { format!("w^{e}") };
            match a.as_constant() {
                Some(c) if c.is_one() => f.write_str(&base)?,
                Some(c) if c.is_positive() => write!(f, "{base}*{c}")?,
                _ => write!(f, "{base}*({a})")?,
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SortDecl {
    pub name: String,
    pub params: Vec<(String, ParamDomain)>,
    pub carrier: Option<Guard>,
}

impl fmt::Display for SortDecl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "sort {}(", self.name)?;
        for (i, (p, d)) in self.params.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{p}: {}", d.as_str())?;
        }
        f.write_str(")")?;
        if let Some(g) = &self.carrier {
            write!(f, " where {g}")?;
        }
        Ok(())
    }
}

/// `Sort(e₁, ..., eₖ)`
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Term {
    pub sort: String,
    pub args: Vec<Affine>,
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.sort)?;
        for (i, a) in self.args.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(")")
    }
}

/// `Sort(v₁, ..., vₖ)` binding one variable per parameter.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Pattern {
    pub sort: String,
    pub vars: Vec<String>,
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.sort, self.vars.join(", "))
    }
}

/// `succ` or `pred` clause.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rule {
    pub pattern: Pattern,
    pub guard: Option<Guard>,
    pub target: Term,
}

impl Rule {
    fn fmt_with(&self, f: &mut fmt::Formatter<'_>, keyword: &str) -> fmt::Result {
        write!(f, "{keyword} {}", self.pattern)?;
        if let Some(g) = &self.guard {
            write!(f, " if {g}")?;
        }
        write!(f, " -> {}", self.target)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LessRule {
    pub left: Pattern,
    pub right: Pattern,
    pub guard: Guard,
}

impl fmt::Display for LessRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "less {} < {} iff {}", self.left, self.right, self.guard)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RankRule {
    pub relation: Relation,
    pub pattern: Pattern,
    pub guard: Option<Guard>,
    pub value: OrdExpr,
}

impl fmt::Display for RankRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rel = match self.relation {
            Relation::Order => "order",
            Relation::Successor => "succ",
        };
        write!(f, "rank {rel} {}", self.pattern)?;
        if let Some(g) = &self.guard {
            write!(f, " if {g}")?;
        }
        write!(f, " -> {}", self.value)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModelAst {
    pub name: String,
    pub sorts: Vec<SortDecl>,
    pub zero: Term,
    pub succ: Vec<Rule>,
    pub pred: Vec<Rule>,
    pub less: Vec<LessRule>,
    pub ranks: Vec<RankRule>,
}

/// Prints one clause the way it appears in source.
pub struct Clause<'a>(pub &'a Rule, pub &'static str);

impl fmt::Display for Clause<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt_with(f, self.1)
    }
}

impl fmt::Display for ModelAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "model {} {{", self.name)?;
        for s in &self.sorts {
            writeln!(f, "  {s}")?;
        }
        writeln!(f, "  zero {}", self.zero)?;
        for r in &self.succ {
            writeln!(f, "  {}", Clause(r, "succ"))?;
        }
        for r in &self.pred {
            writeln!(f, "  {}", Clause(r, "pred"))?;
        }
        for r in &self.less {
            writeln!(f, "  {r}")?;
        }
        for r in &self.ranks {
            writeln!(f, "  {r}")?;
        }
        f.write_str("}\n")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn affine_printing() {
        let a = Affine::var("x").neg().add(&Affine::constant(1));
        assert_eq!(a.to_string(), "-x + 1");
        let b = Affine::term("n", 2).sub(&Affine::constant(3));
        assert_eq!(b.to_string(), "2*n - 3");
        assert_eq!(Affine::default().to_string(), "0");
        assert!(Affine::var("x").sub(&Affine::var("x")).is_zero());
    }

    #[test]
    fn guard_flattening_and_printing() {
        let lt = |a: &str, b: &str| Guard::Cmp(Affine::var(a), CmpOp::Lt, Affine::var(b));
        let g = Guard::and([Guard::and([lt("a", "b"), lt("b", "c")]), Guard::or([lt("x", "y"), Guard::True])]);
        assert!(matches!(&g, Guard::And(v) if v.len() == 3));
        assert_eq!(g.to_string(), "a < b and b < c and (x < y or true)");
        let n = Guard::Not(Box::new(g));
        assert!(n.to_string().starts_with("not (a < b"));
    }

    #[test]
    fn ordinal_expressions() {
        let e = OrdExpr::from_terms([(1, Affine::constant(1)), (0, Affine::var("n"))]);
        assert_eq!(e.to_string(), "w + n");
        let env: Env = [("n".to_string(), BigInt::from(3))].into();
        assert_eq!(e.eval(&env).unwrap().to_string(), "w^1*1 + 3");
        let neg = OrdExpr::from_terms([(0, Affine::var("n").sub(&Affine::constant(5)))]);
        assert_eq!(neg.eval(&env), None);
        assert_eq!(OrdExpr::default().to_string(), "0");
    }
}
