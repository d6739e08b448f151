//! Fair enumeration of multi-sorted integer-tuple carriers.
//!
//! Each sort is walked in shells of increasing parameter magnitude
//! (lexicographic inside a shell); sorts are interleaved round-robin in
//! declaration order. `int` parameters run 0, 1, -1, 2, -2, ...

use std::collections::VecDeque;
use std::sync::Arc;

use num_bigint::BigInt;

use super::Element;

/// Give up on a sort after this many consecutive candidates fail the carrier
/// predicate. Only reachable with carrier guards that are (nearly) empty.
const SCAN_LIMIT: usize = 200_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ParamDomain {
    Nat,
    Int,
}

impl ParamDomain {
    fn value(self, index: u64) -> i64 {
        match self {
            ParamDomain::Nat => index as i64,
            ParamDomain::Int if index == 0 => 0,
            ParamDomain::Int if index % 2 == 1 => index.div_ceil(2) as i64,
            ParamDomain::Int => -((index / 2) as i64),
        }
    }

    fn magnitude(self, index: u64) -> u64 {
        match self {
            ParamDomain::Nat => index,
            ParamDomain::Int => index.div_ceil(2),
        }
    }

    fn max_index(self, shell: u64) -> u64 {
        match self {
            ParamDomain::Nat => shell,
            ParamDomain::Int => 2 * shell,
        }
    }

    /// Indices of magnitude exactly `shell`, ascending.
    fn shell_indices(self, shell: u64) -> Vec<u64> {
        match self {
            ParamDomain::Nat => vec![shell],
            ParamDomain::Int if shell == 0 => vec![0],
            ParamDomain::Int => vec![2 * shell - 1, 2 * shell],
        }
    }

    pub fn admits(self, v: &BigInt) -> bool {
        match self {
            ParamDomain::Nat => v.sign() != num_bigint::Sign::Minus,
            ParamDomain::Int => true,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ParamDomain::Nat => "nat",
            ParamDomain::Int => "int",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SortShape {
    pub name: Arc<str>,
    pub domains: Vec<ParamDomain>,
}

impl SortShape {
    pub fn new(name: &str, domains: impl IntoIterator<Item = ParamDomain>) -> Self {
        SortShape {
            name: name.into(),
            domains: domains.into_iter().collect(),
        }
    }

    /// Sort name, arity and parameter domains agree with `x`.
    pub fn admits(&self, x: &Element) -> bool {
        x.is(&self.name)
            && x.arity() == self.domains.len()
            && self.domains.iter().zip(x.params()).all(|(d, p)| d.admits(p))
    }
}

/// Lazily yields the carrier elements of one sort in shell order.
pub struct SortEnumerator<'a> {
    shape: SortShape,
    carrier: &'a dyn Fn(&Element) -> bool,
    shell: u64,
    pending: VecDeque<Element>,
    misses: usize,
    done: bool,
}

impl<'a> SortEnumerator<'a> {
    pub fn new(shape: SortShape, carrier: &'a dyn Fn(&Element) -> bool) -> Self {
        SortEnumerator {
            shape,
            carrier,
            shell: 0,
            pending: VecDeque::new(),
            misses: 0,
            done: false,
        }
    }

    fn fill_shell(&mut self) {
        let domains = self.shape.domains.clone();
        let shell = self.shell;
        self.shell += 1;
        if domains.is_empty() {
            if shell == 0 {
                self.push_candidate(Vec::new());
            } else {
                self.done = true;
            }
            return;
        }
        let mut idx = Vec::with_capacity(domains.len());
        self.walk_shell(&domains, shell, &mut idx, false);
    }

    /// Visits, in lexicographic index order, the tuples whose largest
    /// parameter magnitude is exactly `shell`.
    fn walk_shell(&mut self, domains: &[ParamDomain], shell: u64, idx: &mut Vec<u64>, on_shell: bool) {
        let pos = idx.len();
        if pos == domains.len() {
            let values = idx.iter().zip(domains).map(|(&i, d)| d.value(i)).collect();
            self.push_candidate(values);
            return;
        }
        let d = domains[pos];
        let last = pos + 1 == domains.len();
        let candidates: Vec<u64> = if last && !on_shell {
            d.shell_indices(shell)
        } else {
            (0..=d.max_index(shell)).collect()
        };
        for i in candidates {
            let hits = d.magnitude(i) == shell;
            idx.push(i);
            self.walk_shell(domains, shell, idx, on_shell || hits);
            idx.pop();
        }
    }

    fn push_candidate(&mut self, values: Vec<i64>) {
        let e = Element::new(self.shape.name.clone(), values);
        if (self.carrier)(&e) {
            self.misses = 0;
            self.pending.push_back(e);
        } else {
            self.misses += 1;
        }
    }
}

impl Iterator for SortEnumerator<'_> {
    type Item = Element;

    fn next(&mut self) -> Option<Element> {
        while self.pending.is_empty() {
            if self.done || self.misses > SCAN_LIMIT {
                return None;
            }
            self.fill_shell();
        }
        self.pending.pop_front()
    }
}

/// Round-robin interleaving of the per-sort enumerations.
///
/// `carrier` is consulted for every candidate tuple that already fits the
/// sort's domains.
pub fn fair_enumeration(
    sorts: &[SortShape],
    budget: usize,
    carrier: &dyn Fn(&Element) -> bool,
) -> Vec<Element> {
    let mut out = Vec::with_capacity(budget);
    let mut streams: Vec<Option<SortEnumerator<'_>>> = sorts
        .iter()
        .map(|s| Some(SortEnumerator::new(s.clone(), carrier)))
        .collect();
    while out.len() < budget && streams.iter().any(Option::is_some) {
        for slot in streams.iter_mut() {
            if out.len() == budget {
                break;
            }
            if let Some(stream) = slot {
                match stream.next() {
                    Some(e) => out.push(e),
                    None => *slot = None,
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn everything(_: &Element) -> bool {
        true
    }

    #[test]
    fn single_nat_sort() {
        let sorts = [SortShape::new("N", [ParamDomain::Nat])];
        let got = fair_enumeration(&sorts, 3, &everything);
        assert_eq!(got, (0..3).map(|n| Element::new("N", [n])).collect::<Vec<_>>());
        assert!(fair_enumeration(&sorts, 0, &everything).is_empty());
    }

    #[test]
    fn round_robin_two_sorts() {
        let sorts = [
            SortShape::new("A", [ParamDomain::Nat]),
            SortShape::new("B", [ParamDomain::Nat]),
        ];
        let got: Vec<String> = fair_enumeration(&sorts, 4, &everything)
            .iter()
            .map(ToString::to_string)
            .collect();
        assert_eq!(got, ["A(0)", "B(0)", "A(1)", "B(1)"]);
    }

    #[test]
    fn int_order_is_positive_first() {
        let sorts = [SortShape::new("B", [ParamDomain::Int])];
        let got: Vec<i64> = fair_enumeration(&sorts, 5, &everything)
            .iter()
            .map(|e| e.small(0).unwrap())
            .collect();
        assert_eq!(got, [0, 1, -1, 2, -2]);
    }

    #[test]
    fn shells_for_pairs() {
        let sorts = [SortShape::new("G", [ParamDomain::Nat, ParamDomain::Nat])];
        let got: Vec<String> = fair_enumeration(&sorts, 9, &everything)
            .iter()
            .map(ToString::to_string)
            .collect();
        assert_eq!(
            got,
            ["G(0,0)", "G(0,1)", "G(1,0)", "G(1,1)", "G(0,2)", "G(1,2)", "G(2,0)", "G(2,1)", "G(2,2)"]
        );
    }

    #[test]
    fn prefix_monotone_and_distinct() {
        let sorts = [
            SortShape::new("A", [ParamDomain::Nat]),
            SortShape::new("G", [ParamDomain::Int, ParamDomain::Nat]),
        ];
        let long = fair_enumeration(&sorts, 200, &everything);
        let set: std::collections::HashSet<_> = long.iter().collect();
        assert_eq!(set.len(), long.len());
        for b in [0, 1, 7, 64, 199] {
            assert_eq!(fair_enumeration(&sorts, b, &everything), long[..b]);
        }
    }

    #[test]
    fn filtered_and_empty_sorts() {
        let sorts = [
            SortShape::new("E", [ParamDomain::Nat]),
            SortShape::new("A", [ParamDomain::Nat]),
        ];
        // E is empty; A keeps only even values.
        let carrier = |e: &Element| e.is("A") && e.small(0).unwrap() % 2 == 0;
        let got: Vec<i64> = fair_enumeration(&sorts, 4, &carrier)
            .iter()
            .map(|e| e.small(0).unwrap())
            .collect();
        assert_eq!(got, [0, 2, 4, 6]);
    }

    #[test]
    fn nullary_sort_yields_once() {
        let sorts = [SortShape::new("U", [])];
        assert_eq!(fair_enumeration(&sorts, 5, &everything).len(), 1);
    }
}
