//! Carrier elements, the `Model` contract and the operations derived from it.

mod axioms;
mod enumerate;
mod order;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use thiserror::Error;

pub use axioms::{check_axioms, zero_succ_closure, AxiomReport, Clause, ClauseVerdict, Closure};
pub use enumerate::{fair_enumeration, ParamDomain, SortEnumerator, SortShape};
pub use order::{leq, section, section_within, Section, SectionKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("{0} is not in the carrier")]
    OutOfCarrier(Element),
    #[error("{op} is undefined at {element}")]
    Undefined { op: &'static str, element: Element },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse element `{0}`")]
pub struct ElementParseError(pub String);

/// A carrier member: a sort tag plus a tuple of integer parameters.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element {
    sort: Arc<str>,
    params: Vec<BigInt>,
}

impl Element {
    pub fn new<P: Into<BigInt>>(sort: impl Into<Arc<str>>, params: impl IntoIterator<Item = P>) -> Self {
        Element {
            sort: sort.into(),
            params: params.into_iter().map(Into::into).collect(),
        }
    }

    pub fn sort(&self) -> &str {
        &self.sort
    }

    pub fn params(&self) -> &[BigInt] {
        &self.params
    }

    pub fn arity(&self) -> usize {
        self.params.len()
    }

    /// Parameter `i` as an `i64`, if it exists and fits.
    pub fn small(&self, i: usize) -> Option<i64> {
        self.params.get(i).and_then(ToPrimitive::to_i64)
    }

    pub fn is(&self, sort: &str) -> bool {
        &*self.sort == sort
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.sort)?;
        for (i, p) in self.params.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Element {
    type Err = ElementParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ElementParseError(s.to_string());
        let s = s.trim();
        let open = s.find('(').ok_or_else(err)?;
        let inner = s[open + 1..].strip_suffix(')').ok_or_else(err)?;
        let sort = s[..open].trim();
        if sort.is_empty() || !sort.chars().all(|c| c.is_alphanumeric() || c == '_') {
            return Err(err());
        }
        let params = if inner.trim().is_empty() {
            Vec::new()
        } else {
            inner
                .split(',')
                .map(|p| p.trim().parse::<BigInt>().map_err(|_| err()))
                .collect::<Result<Vec<_>, _>>()?
        };
        Ok(Element {
            sort: sort.into(),
            params,
        })
    }
}

impl serde::Serialize for Element {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Which axiom set a structure is held to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Regime {
    /// Injective successor, zero not a successor, strict order, and the order
    /// subordinated to zero and successor.
    PreInductive,
    /// The same without the subordination clauses.
    SubInductive,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::PreInductive => "pre-inductive",
            Regime::SubInductive => "sub-inductive",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Regime {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "pre" | "pre-inductive" => Ok(Regime::PreInductive),
            "sub" | "sub-inductive" => Ok(Regime::SubInductive),
            other => Err(format!("unknown regime `{other}` (expected pre or sub)")),
        }
    }
}

impl serde::Serialize for Regime {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

/// A computable structure `(X, 0_X, S_X, <_X)`.
///
/// Implementors provide the raw operations and may assume their arguments
/// are carrier members; callers go through [`ModelExt`], which rejects
/// anything outside the carrier.
pub trait Model: Send + Sync {
    fn name(&self) -> &str;

    fn zero(&self) -> Element;

    fn in_carrier(&self, x: &Element) -> bool;

    fn apply_succ(&self, x: &Element) -> Result<Element, ModelError>;

    /// The unique `y` with `succ(y) = x`, if any.
    fn apply_pred(&self, x: &Element) -> Result<Option<Element>, ModelError>;

    fn relate(&self, x: &Element, y: &Element) -> Result<bool, ModelError>;

    /// The first `budget` carrier elements of a fixed fair enumeration.
    /// Deterministic, duplicate-free and prefix-monotone in `budget`.
    fn enumerate(&self, budget: usize) -> Vec<Element>;

    /// Finiteness oracle: the complete set `{x : x < p}` when the model
    /// knows it to be finite.
    fn finite_strict_section(&self, _p: &Element) -> Option<Vec<Element>> {
        None
    }
}

/// Carrier-checked access to a [`Model`].
pub trait ModelExt: Model {
    fn check(&self, x: &Element) -> Result<(), ModelError> {
        if self.in_carrier(x) {
            Ok(())
        } else {
            Err(ModelError::OutOfCarrier(x.clone()))
        }
    }

    fn succ(&self, x: &Element) -> Result<Element, ModelError> {
        self.check(x)?;
        self.apply_succ(x)
    }

    fn pred(&self, x: &Element) -> Result<Option<Element>, ModelError> {
        self.check(x)?;
        self.apply_pred(x)
    }

    fn less(&self, x: &Element, y: &Element) -> Result<bool, ModelError> {
        self.check(x)?;
        self.check(y)?;
        self.relate(x, y)
    }
}

impl<M: Model + ?Sized> ModelExt for M {}

/// The model's fair enumeration truncated at `budget`.
pub fn enumerate_carrier(model: &dyn Model, budget: usize) -> Vec<Element> {
    model.enumerate(budget)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn element_rendering_round_trips() {
        let e = Element::new("Br", [2, -2]);
        assert_eq!(e.to_string(), "Br(2,-2)");
        assert_eq!("Br(2, -2)".parse::<Element>().unwrap(), e);
        assert_eq!("A(3)".parse::<Element>().unwrap(), Element::new("A", [3]));
        assert_eq!("Unit()".parse::<Element>().unwrap().arity(), 0);
        for bad in ["A", "A(1", "(1)", "A(x)", "A b(1)"] {
            assert!(bad.parse::<Element>().is_err(), "{bad}");
        }
    }

    #[test]
    fn element_equality_is_structural() {
        assert_eq!(Element::new("A", [1]), Element::new(String::from("A"), [1i64]));
        assert_ne!(Element::new("A", [1]), Element::new("B", [1]));
        assert_ne!(Element::new("A", [1]), Element::new("A", [1, 0]));
    }

    #[test]
    fn regime_parsing() {
        assert_eq!("pre".parse::<Regime>(), Ok(Regime::PreInductive));
        assert_eq!("sub-inductive".parse::<Regime>(), Ok(Regime::SubInductive));
        assert!("both".parse::<Regime>().is_err());
    }
}
