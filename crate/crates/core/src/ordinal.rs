//! Ordinals below ω^ω in Cantor normal form.
//!
//! These are the codomain of rank certificates: a certificate maps every
//! carrier element to an ordinal so that related elements get strictly
//! increasing values. Only construction, comparison and the textual form
//! `w^e*c + ... + c` are needed.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrdinalError {
    #[error("term {index}: coefficient must be positive")]
    ZeroCoefficient { index: usize },
    #[error("term {index}: exponents must be strictly decreasing")]
    ExponentsNotDecreasing { index: usize },
    #[error("cannot parse ordinal `{input}`: {reason}")]
    Parse { input: String, reason: String },
}

/// A single `w^exponent * coefficient` summand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Term {
    pub exponent: u64,
    pub coefficient: u64,
}

/// An ordinal `w^e1*c1 + ... + w^ek*ck` with `e1 > ... > ek` and every
/// `ci >= 1`. The empty sum is zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Ordinal {
    terms: Vec<Term>,
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal { terms: Vec::new() }
    }

    pub fn from_nat(n: u64) -> Self {
        if n == 0 {
            Self::zero()
        } else {
            Ordinal {
                terms: vec![Term {
                    exponent: 0,
                    coefficient: n,
                }],
            }
        }
    }

    /// `w`.
    pub fn omega() -> Self {
        Ordinal {
            terms: vec![Term {
                exponent: 1,
                coefficient: 1,
            }],
        }
    }

    /// Validates `(exponent, coefficient)` pairs as a Cantor normal form.
    pub fn new(terms: impl IntoIterator<Item = (u64, u64)>) -> Result<Self, OrdinalError> {
        let mut out: Vec<Term> = Vec::new();
        for (index, (exponent, coefficient)) in terms.into_iter().enumerate() {
            if coefficient == 0 {
                return Err(OrdinalError::ZeroCoefficient { index });
            }
            if let Some(last) = out.last() {
                if exponent >= last.exponent {
                    return Err(OrdinalError::ExponentsNotDecreasing { index });
                }
            }
            out.push(Term {
                exponent,
                coefficient,
            });
        }
        Ok(Ordinal { terms: out })
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.terms.iter().all(|t| t.exponent == 0)
    }

    /// The natural number this ordinal equals, if it is finite.
    pub fn as_nat(&self) -> Option<u64> {
        match self.terms.as_slice() {
            [] => Some(0),
            [Term {
                exponent: 0,
                coefficient,
            }] => Some(*coefficient),
            _ => None,
        }
    }
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.terms.iter().zip(&other.terms) {
            let ord = a
                .exponent
                .cmp(&b.exponent)
                .then(a.coefficient.cmp(&b.coefficient));
            if ord != Ordering::Equal {
                return ord;
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if t.exponent == 0 {
                write!(f, "{}", t.coefficient)?;
            } else {
                write!(f, "w^{}*{}", t.exponent, t.coefficient)?;
            }
        }
        Ok(())
    }
}

impl FromStr for Ordinal {
    type Err = OrdinalError;

    /// Accepts the rendered form plus the shorthands `w`, `w^e` and `w*c`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let fail = |reason: &str| OrdinalError::Parse {
            input: s.to_string(),
            reason: reason.to_string(),
        };
        let trimmed = s.trim();
        if trimmed == "0" {
            return Ok(Ordinal::zero());
        }
        let mut pairs = Vec::new();
        for part in trimmed.split('+') {
            let part: String = part.chars().filter(|c| !c.is_whitespace()).collect();
            if part.is_empty() {
                return Err(fail("empty term"));
            }
            let pair = if let Some(rest) = part.strip_prefix('w') {
                let (exp, coeff) = match rest.split_once('*') {
                    Some((e, c)) => (e, Some(c)),
                    None => (rest, None),
                };
                let exponent = match exp.strip_prefix('^') {
                    Some(e) => e.parse::<u64>().map_err(|_| fail("bad exponent"))?,
                    None if exp.is_empty() => 1,
                    None => return Err(fail("expected `^` after `w`")),
                };
                let coefficient = match coeff {
                    Some(c) => c.parse::<u64>().map_err(|_| fail("bad coefficient"))?,
                    None => 1,
                };
                (exponent, coefficient)
            } else {
                let c = part.parse::<u64>().map_err(|_| fail("bad finite term"))?;
                (0, c)
            };
            pairs.push(pair);
        }
        Ordinal::new(pairs)
    }
}

impl serde::Serialize for Ordinal {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ord(terms: &[(u64, u64)]) -> Ordinal {
        Ordinal::new(terms.iter().copied()).unwrap()
    }

    #[test]
    fn from_nat_cases() {
        assert!(Ordinal::from_nat(0).terms().is_empty());
        assert_eq!(Ordinal::from_nat(3), ord(&[(0, 3)]));
        assert_eq!(Ordinal::from_nat(1), ord(&[(0, 1)]));
    }

    #[test]
    fn make_validates() {
        let w_plus_2 = Ordinal::new([(1, 1), (0, 2)]).unwrap();
        assert_eq!(w_plus_2.to_string(), "w^1*1 + 2");
        assert_eq!(
            Ordinal::new([(0, 1), (1, 1)]),
            Err(OrdinalError::ExponentsNotDecreasing { index: 1 })
        );
        assert_eq!(
            Ordinal::new([(1, 0)]),
            Err(OrdinalError::ZeroCoefficient { index: 0 })
        );
        assert_eq!(
            Ordinal::new([(2, 1), (2, 3)]),
            Err(OrdinalError::ExponentsNotDecreasing { index: 1 })
        );
    }

    #[test]
    fn compare_examples() {
        let w = Ordinal::omega();
        assert!(ord(&[(1, 1), (0, 1)]) > w);
        assert!(Ordinal::from_nat(3) < w);
        assert!(ord(&[(1, 1), (0, 2)]) < ord(&[(1, 2)]));
        assert_eq!(ord(&[(1, 2)]).cmp(&ord(&[(1, 2)])), Ordering::Equal);
    }

    #[test]
    fn parse_and_render() {
        for text in ["0", "7", "w^1*1", "w^2*3 + w^1*1 + 4"] {
            let o: Ordinal = text.parse().unwrap();
            assert_eq!(o.to_string(), text);
        }
        assert_eq!("w".parse::<Ordinal>().unwrap(), Ordinal::omega());
        assert_eq!("w^2".parse::<Ordinal>().unwrap(), ord(&[(2, 1)]));
        assert_eq!("w*2 + 1".parse::<Ordinal>().unwrap(), ord(&[(1, 2), (0, 1)]));
        assert!("1 + w".parse::<Ordinal>().is_err());
        assert!("w^x".parse::<Ordinal>().is_err());
        assert!("".parse::<Ordinal>().is_err());
    }

    /// Every CNF with exponents <= 2 and coefficients <= 3.
    fn small_cnfs() -> Vec<Ordinal> {
        let mut out = Vec::new();
        for c2 in 0..=3u64 {
            for c1 in 0..=3u64 {
                for c0 in 0..=3u64 {
                    let terms = [(2, c2), (1, c1), (0, c0)]
                        .into_iter()
                        .filter(|&(_, c)| c > 0);
                    out.push(Ordinal::new(terms).unwrap());
                }
            }
        }
        out
    }

    /// Order-isomorphic image of w^2*a + w*b + c (a, b, c <= 3) in the naturals.
    fn base4_value(o: &Ordinal) -> u64 {
        o.terms()
            .iter()
            .map(|t| t.coefficient * 4u64.pow(t.exponent as u32))
            .sum()
    }

    #[test]
    fn compare_is_total_order_on_small_cnfs() {
        let all = small_cnfs();
        assert_eq!(all.len(), 64);
        for a in &all {
            for b in &all {
                assert_eq!(a.cmp(b), base4_value(a).cmp(&base4_value(b)), "{a} vs {b}");
                assert_eq!(a.cmp(b) == Ordering::Equal, a.terms() == b.terms());
                for c in &all {
                    if a < b && b < c {
                        assert!(a < c);
                    }
                }
            }
        }
    }

    #[test]
    fn from_nat_preserves_order() {
        for m in 0..40u64 {
            for n in 0..40u64 {
                assert_eq!(m < n, Ordinal::from_nat(m) < Ordinal::from_nat(n));
            }
        }
    }
}
