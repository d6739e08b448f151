//! The standard model and the eight counterexample structures, each with the
//! evidence that settles its principles.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::model::{fair_enumeration, Element, Model, ModelError, ParamDomain, Regime, SortShape};
use crate::ordinal::Ordinal;
use crate::principles::{Evidence, EvidenceBundle, Relation, SubsetTarget};

/// Finite sections larger than this are not materialized by the oracle.
const SECTION_CAP: u64 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModelId {
    Std,
    M1OmegaPlusOmega,
    M2OmegaIncomparable,
    M3Grid,
    M4OmegaPlusZeta,
    M5Reversed,
    M6Braid,
    M7Discrete,
    M8OmegaPlusZetaCut,
}

impl ModelId {
    pub const ALL: [ModelId; 9] = [
        ModelId::Std,
        ModelId::M1OmegaPlusOmega,
        ModelId::M2OmegaIncomparable,
        ModelId::M3Grid,
        ModelId::M4OmegaPlusZeta,
        ModelId::M5Reversed,
        ModelId::M6Braid,
        ModelId::M7Discrete,
        ModelId::M8OmegaPlusZetaCut,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ModelId::Std => "std",
            ModelId::M1OmegaPlusOmega => "m1-omega-plus-omega",
            ModelId::M2OmegaIncomparable => "m2-omega-incomparable",
            ModelId::M3Grid => "m3-grid",
            ModelId::M4OmegaPlusZeta => "m4-omega-plus-zeta",
            ModelId::M5Reversed => "m5-reversed",
            ModelId::M6Braid => "m6-braid",
            ModelId::M7Discrete => "m7-discrete",
            ModelId::M8OmegaPlusZetaCut => "m8-omega-plus-zeta-cut",
        }
    }

    /// Short alias: `std`, `m1` ... `m8`.
    pub fn short(self) -> &'static str {
        self.as_str().split('-').next().unwrap_or("std")
    }

    /// The axiom set the structure is meant to satisfy.
    pub fn regime(self) -> Regime {
        match self {
            ModelId::Std
            | ModelId::M1OmegaPlusOmega
            | ModelId::M2OmegaIncomparable
            | ModelId::M3Grid
            | ModelId::M4OmegaPlusZeta => Regime::PreInductive,
            _ => Regime::SubInductive,
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            ModelId::Std => "the natural numbers",
            ModelId::M1OmegaPlusOmega => "two copies of N, the first below the second (omega + omega)",
            ModelId::M2OmegaIncomparable => "two copies of N, mutually incomparable",
            ModelId::M3Grid => "N x N, columns ordered downward by their bottom elements",
            ModelId::M4OmegaPlusZeta => "N followed by a copy of Z (omega + zeta)",
            ModelId::M5Reversed => "N with the reversed order",
            ModelId::M6Braid => "successor braiding two sign chains",
            ModelId::M7Discrete => "N with the empty order",
            ModelId::M8OmegaPlusZetaCut => "omega + zeta with the negative part an antichain",
        }
    }
}

impl fmt::Display for ModelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModelId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = s.trim().to_ascii_lowercase().replace('_', "-");
        ModelId::ALL
            .into_iter()
            .find(|id| id.as_str() == norm || id.short() == norm)
            .ok_or_else(|| format!("unknown model `{s}`"))
    }
}

/// A builtin structure.
#[derive(Debug, Clone)]
pub struct GalleryModel {
    id: ModelId,
    sorts: Vec<SortShape>,
}

pub fn build(id: ModelId) -> GalleryModel {
    use ParamDomain::{Int, Nat};
    let sorts = match id {
        ModelId::Std | ModelId::M5Reversed | ModelId::M7Discrete => vec![SortShape::new("N", [Nat])],
        ModelId::M1OmegaPlusOmega | ModelId::M2OmegaIncomparable => {
            vec![SortShape::new("A", [Nat]), SortShape::new("B", [Nat])]
        }
        ModelId::M3Grid => vec![SortShape::new("G", [Nat, Nat])],
        ModelId::M4OmegaPlusZeta | ModelId::M8OmegaPlusZetaCut => {
            vec![SortShape::new("A", [Nat]), SortShape::new("B", [Int])]
        }
        ModelId::M6Braid => vec![SortShape::new("Br", [Nat, Int])],
    };
    GalleryModel { id, sorts }
}

impl GalleryModel {
    pub fn id(&self) -> ModelId {
        self.id
    }

    pub fn sorts(&self) -> &[SortShape] {
        &self.sorts
    }
}

fn p(x: &Element, i: usize) -> &BigInt {
    &x.params()[i]
}

fn el(sort: &str, params: impl IntoIterator<Item = BigInt>) -> Element {
    Element::new(sort, params)
}

/// M6 carrier: `(0,0)` and `(n,±n)` for `n >= 1`.
fn braid_member(x: &BigInt, y: &BigInt) -> bool {
    if x.is_zero() {
        y.is_zero()
    } else {
        x.is_positive() && y.abs() == *x
    }
}

fn braid_succ(x: &BigInt, y: &BigInt) -> (BigInt, BigInt) {
    if x.is_zero() {
        (BigInt::from(2), BigInt::from(-2))
    } else if y.is_negative() {
        (x.clone(), -y)
    } else if x.is_even() {
        (x - 1, BigInt::one() - x)
    } else {
        (x + 3, -x - 3)
    }
}

fn braid_pred(x: &BigInt, y: &BigInt) -> Option<(BigInt, BigInt)> {
    if x.is_zero() {
        return None;
    }
    if y.is_positive() {
        return Some((x.clone(), -y));
    }
    if x.is_odd() {
        return Some((x + 1, x + 1));
    }
    if *x == BigInt::from(2) {
        return Some((BigInt::zero(), BigInt::zero()));
    }
    Some((x - 3, x - 3))
}

fn nat_range(sort: &str, n: &BigInt) -> Option<Vec<Element>> {
    let n = n.to_u64().filter(|&n| n <= SECTION_CAP)?;
    Some((0..n).map(|k| Element::new(sort, [k])).collect())
}

impl Model for GalleryModel {
    fn name(&self) -> &str {
        self.id.as_str()
    }

    fn zero(&self) -> Element {
        match self.id {
            ModelId::Std | ModelId::M5Reversed | ModelId::M7Discrete => Element::new("N", [0]),
            ModelId::M3Grid => Element::new("G", [0, 0]),
            ModelId::M6Braid => Element::new("Br", [0, 0]),
            _ => Element::new("A", [0]),
        }
    }

    fn in_carrier(&self, x: &Element) -> bool {
        let Some(shape) = self.sorts.iter().find(|s| s.admits(x)) else {
            return false;
        };
        match self.id {
            ModelId::M6Braid => braid_member(p(x, 0), p(x, 1)),
            _ => shape.admits(x),
        }
    }

    fn apply_succ(&self, x: &Element) -> Result<Element, ModelError> {
        Ok(match self.id {
            ModelId::M3Grid => el("G", [p(x, 0).clone(), p(x, 1) + 1]),
            ModelId::M6Braid => {
                let (a, b) = braid_succ(p(x, 0), p(x, 1));
                el("Br", [a, b])
            }
            _ => el(x.sort(), [p(x, 0) + 1]),
        })
    }

    fn apply_pred(&self, x: &Element) -> Result<Option<Element>, ModelError> {
        Ok(match self.id {
            ModelId::M3Grid => {
                let k = p(x, 1);
                (!k.is_zero()).then(|| el("G", [p(x, 0).clone(), k - 1]))
            }
            ModelId::M6Braid => braid_pred(p(x, 0), p(x, 1)).map(|(a, b)| el("Br", [a, b])),
            ModelId::M4OmegaPlusZeta | ModelId::M8OmegaPlusZetaCut if x.is("B") => {
                Some(el("B", [p(x, 0) - 1]))
            }
            _ => {
                let n = p(x, 0);
                (!n.is_zero()).then(|| el(x.sort(), [n - 1]))
            }
        })
    }

    fn relate(&self, x: &Element, y: &Element) -> Result<bool, ModelError> {
        let same = x.sort() == y.sort();
        Ok(match self.id {
            ModelId::Std => p(x, 0) < p(y, 0),
            ModelId::M5Reversed => p(x, 0) > p(y, 0),
            ModelId::M7Discrete => false,
            ModelId::M1OmegaPlusOmega | ModelId::M4OmegaPlusZeta => {
                if same {
                    p(x, 0) < p(y, 0)
                } else {
                    x.is("A")
                }
            }
            ModelId::M2OmegaIncomparable => same && p(x, 0) < p(y, 0),
            ModelId::M3Grid => {
                let (n1, k1, n2, k2) = (p(x, 0), p(x, 1), p(y, 0), p(y, 1));
                (n1 == n2 && k1 < k2) || (k1.is_zero() && n2.is_positive() && n2 < n1)
            }
            ModelId::M6Braid => {
                let (x1, y1, x2, y2) = (p(x, 0), p(x, 1), p(y, 0), p(y, 1));
                (y1 * y2).is_positive() && x1 < x2
            }
            ModelId::M8OmegaPlusZetaCut => {
                if !same {
                    x.is("A")
                } else if x.is("A") {
                    p(x, 0) < p(y, 0)
                } else {
                    let (m, n) = (p(x, 0), p(y, 0));
                    if m.is_negative() {
                        !n.is_negative()
                    } else {
                        m < n
                    }
                }
            }
        })
    }

    fn enumerate(&self, budget: usize) -> Vec<Element> {
        fair_enumeration(&self.sorts, budget, &|x| self.in_carrier(x))
    }

    fn finite_strict_section(&self, x: &Element) -> Option<Vec<Element>> {
        match self.id {
            ModelId::Std => nat_range("N", p(x, 0)),
            ModelId::M7Discrete => Some(Vec::new()),
            ModelId::M5Reversed => None,
            ModelId::M1OmegaPlusOmega | ModelId::M4OmegaPlusZeta | ModelId::M8OmegaPlusZetaCut => {
                if x.is("A") {
                    nat_range("A", p(x, 0))
                } else {
                    None
                }
            }
            ModelId::M2OmegaIncomparable => nat_range(x.sort(), p(x, 0)),
            ModelId::M3Grid => {
                if !p(x, 0).is_zero() {
                    return None;
                }
                let k = p(x, 1).to_u64().filter(|&k| k <= SECTION_CAP)?;
                Some((0..k).map(|j| Element::new("G", [0, j])).collect())
            }
            ModelId::M6Braid => {
                let (a, b) = (p(x, 0), p(x, 1));
                if a.is_zero() {
                    return Some(Vec::new());
                }
                let a = a.to_i64().filter(|&a| a as u64 <= SECTION_CAP)?;
                let sign: i64 = if b.is_negative() { -1 } else { 1 };
                Some((1..a).map(|m| Element::new("Br", [m, sign * m])).collect())
            }
        }
    }
}

fn nat(x: &Element, i: usize) -> Option<u64> {
    x.params().get(i)?.to_u64()
}

/// `n` as a finite ordinal.
fn fin(n: u64) -> Option<Ordinal> {
    Some(Ordinal::from_nat(n))
}

/// `ω + n`
fn omega_plus(n: u64) -> Option<Ordinal> {
    if n == 0 {
        Ordinal::new([(1, 1)]).ok()
    } else {
        Ordinal::new([(1, 1), (0, n)]).ok()
    }
}

/// A-sort first, then B-sort above it: `A(n) -> n`, `B(n) -> ω + n`.
fn omega_plus_omega_rank(x: &Element) -> Option<Ordinal> {
    let n = nat(x, 0)?;
    if x.is("A") {
        fin(n)
    } else {
        omega_plus(n)
    }
}

fn first_param_rank(x: &Element) -> Option<Ordinal> {
    fin(nat(x, 0)?)
}

/// Position of a braid element along the successor orbit of `Br(0,0)`.
fn braid_orbit_rank(x: &Element) -> Option<Ordinal> {
    let a = nat(x, 0)?;
    if a == 0 {
        return fin(0);
    }
    let k = a.div_ceil(2);
    let negative = x.small(1)? < 0;
    let r = match (a % 2 == 0, negative) {
        (true, true) => 4 * k - 3,
        (true, false) => 4 * k - 2,
        (false, true) => 4 * k - 1,
        (false, false) => 4 * k,
    };
    fin(r)
}

fn m8_order_rank(x: &Element) -> Option<Ordinal> {
    if x.is("A") {
        return fin(nat(x, 0)?);
    }
    let n = x.small(0)?;
    if n < 0 {
        omega_plus(0)
    } else {
        omega_plus(n as u64 + 1)
    }
}

fn b(n: i64) -> Element {
    Element::new("B", [n])
}

fn n(k: i64) -> Element {
    Element::new("N", [k])
}

fn a_sort_witnesses() -> [Evidence; 2] {
    [
        Evidence::subset("A-sort", b(0), SubsetTarget::RI, |x| x.is("A")),
        Evidence::subset("A-sort", b(0), SubsetTarget::SI, |x| x.is("A")),
    ]
}

fn neg_index(j: u64) -> Element {
    Element::new("B", [-BigInt::from(j)])
}

/// The registered evidence for each builtin.
pub fn evidence(id: ModelId) -> EvidenceBundle {
    use Relation::{Order, Successor};
    let items = match id {
        ModelId::Std => vec![
            Evidence::Reachability,
            Evidence::rank("identity", Order, first_param_rank),
            Evidence::rank("identity", Successor, first_param_rank),
            Evidence::linear_rank("identity", first_param_rank),
        ],
        ModelId::M1OmegaPlusOmega => {
            let mut v = a_sort_witnesses().to_vec();
            v.extend([
                Evidence::rank("omega+omega", Order, omega_plus_omega_rank),
                Evidence::rank("omega+omega", Successor, omega_plus_omega_rank),
                Evidence::linear_rank("omega+omega", omega_plus_omega_rank),
            ]);
            v
        }
        ModelId::M2OmegaIncomparable => {
            let mut v = a_sort_witnesses().to_vec();
            v.extend([
                Evidence::rank("omega+omega", Order, omega_plus_omega_rank),
                Evidence::rank("index", Successor, first_param_rank),
                Evidence::incomparable(Element::new("A", [0]), b(0)),
            ]);
            v
        }
        ModelId::M3Grid => {
            let column0 = |x: &Element| x.params()[0].is_zero();
            let g10 = Element::new("G", [1, 0]);
            vec![
                Evidence::subset("column-0", g10.clone(), SubsetTarget::RI, column0),
                Evidence::subset("column-0", g10, SubsetTarget::SI, column0),
                Evidence::rank("height", Successor, |x| fin(nat(x, 1)?)),
                Evidence::descent("bottom-row", Order, |j| Element::new("G", [j + 1, 0])),
            ]
        }
        ModelId::M4OmegaPlusZeta => {
            let mut v = a_sort_witnesses().to_vec();
            v.extend([
                Evidence::descent("negative-B", Order, neg_index),
                Evidence::descent("negative-B", Successor, neg_index),
            ]);
            v
        }
        ModelId::M5Reversed => vec![
            Evidence::Reachability,
            Evidence::subset("zero-only", n(1), SubsetTarget::SI, |x| x.params()[0].is_zero()),
            Evidence::descent("naturals", Order, |j| Element::new("N", [j])),
            Evidence::rank("identity", Successor, first_param_rank),
        ],
        ModelId::M6Braid => {
            let members = [Element::new("Br", [0, 0]), Element::new("Br", [2, -2])];
            vec![
                Evidence::Reachability,
                Evidence::subset("zero-and-successor", Element::new("Br", [1, 1]), SubsetTarget::SI, move |x| {
                    members.contains(x)
                }),
                Evidence::rank("abscissa", Order, first_param_rank),
                Evidence::rank("orbit", Successor, braid_orbit_rank),
                Evidence::incomparable(Element::new("Br", [0, 0]), Element::new("Br", [1, 1])),
            ]
        }
        ModelId::M7Discrete => vec![
            Evidence::Reachability,
            Evidence::rank("constant-zero", Order, |_| fin(0)),
            Evidence::rank("identity", Successor, first_param_rank),
            Evidence::incomparable(n(0), n(1)),
        ],
        ModelId::M8OmegaPlusZetaCut => {
            let mut v = a_sort_witnesses().to_vec();
            v.extend([
                Evidence::rank("omega+1+omega", Order, m8_order_rank),
                Evidence::descent("negative-B", Successor, neg_index),
                Evidence::incomparable(b(-1), b(-2)),
            ]);
            v
        }
    };
    EvidenceBundle::new(items)
}
