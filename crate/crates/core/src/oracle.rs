//! Brute-force checks on finite binary relations: well-foundedness, the
//! induction principle and finite descent, each by quantifying over every
//! subset of the carrier.

use std::fmt;
use std::ops::RangeInclusive;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

pub const MAX_SIZE: usize = 16;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("carrier size {0} exceeds {MAX_SIZE}")]
    TooLarge(usize),
    #[error("pair ({0}, {1}) is outside the carrier")]
    PairOutOfRange(usize, usize),
    #[error("density {0} is outside [0, 1]")]
    Density(f64),
}

/// A relation `□` on `{0, ..., n-1}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteRelation {
    n: usize,
    /// `below[j]` has bit `i` set iff `i □ j`.
    below: Vec<u16>,
}

impl FiniteRelation {
    pub fn new(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, OracleError> {
        if n > MAX_SIZE {
            return Err(OracleError::TooLarge(n));
        }
        let mut below = vec![0u16; n];
        for (i, j) in pairs {
            if i >= n || j >= n {
                return Err(OracleError::PairOutOfRange(i, j));
            }
            below[j] |= 1 << i;
        }
        Ok(FiniteRelation { n, below })
    }

    /// The relation whose pairs are the set bits of `code`, row-major
    /// (bit `i*n + j` encodes `i □ j`).
    pub fn from_code(n: usize, code: u64) -> Result<Self, OracleError> {
        if n > 8 {
            return Err(OracleError::TooLarge(n));
        }
        let pairs = (0..n * n).filter(|b| code >> b & 1 == 1).map(|b| (b / n, b % n));
        FiniteRelation::new(n, pairs)
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn relates(&self, i: usize, j: usize) -> bool {
        self.below[j] >> i & 1 == 1
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in 0..self.n {
                if self.relates(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    fn full(&self) -> u32 {
        (1u32 << self.n) - 1
    }

    fn below(&self, j: usize) -> u32 {
        u32::from(self.below[j])
    }
}

impl fmt::Debug for FiniteRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteRelation(n={}, {:?})", self.n, self.pairs())
    }
}

impl Serialize for FiniteRelation {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("FiniteRelation", 2)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("pairs", &self.pairs())?;
        st.end()
    }
}

fn members(set: u32, n: usize) -> impl Iterator<Item = usize> {
    (0..n).filter(move |&i| set >> i & 1 == 1)
}

/// Every nonempty subset has an element with nothing of the subset below it.
pub fn fin_well_founded(r: &FiniteRelation) -> bool {
    (1..=r.full()).all(|y| members(y, r.n).any(|m| r.below(m) & y == 0))
}

/// Every subset `Y` with `X_{□p} ⊆ Y ⇒ p ∈ Y` for all `p` is the whole carrier.
pub fn fin_induction_principle(r: &FiniteRelation) -> bool {
    let full = r.full();
    (0..=full).all(|y| {
        let inductive = (0..r.n).all(|p| r.below(p) & !y != 0 || y >> p & 1 == 1);
        !inductive || y == full
    })
}

/// No nonempty subset has, for each of its members, another member below it.
pub fn fin_finite_descent(r: &FiniteRelation) -> bool {
    !(1..=r.full()).any(|y| members(y, r.n).all(|m| r.below(m) & y != 0))
}

/// The induction principle holds exactly when the relation is well-founded.
pub fn fin_induction_iff_well_founded(r: &FiniteRelation) -> bool {
    fin_well_founded(r) == fin_induction_principle(r)
}

/// Well-foundedness agrees with finite descent.
pub fn fin_duality_agrees(r: &FiniteRelation) -> bool {
    fin_well_founded(r) == fin_finite_descent(r)
}

/// Deterministic pseudo-random relation: each of the `n²` pairs, visited in
/// row-major order, is included with probability `density`.
pub fn gen_relation(n: usize, density: f64, seed: u64) -> Result<FiniteRelation, OracleError> {
    if n > MAX_SIZE {
        return Err(OracleError::TooLarge(n));
    }
    if !(0.0..=1.0).contains(&density) {
        return Err(OracleError::Density(density));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if rng.gen::<f64>() < density {
                pairs.push((i, j));
            }
        }
    }
    FiniteRelation::new(n, pairs)
}

/// Outcome of a seeded batch of checks.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FuzzSummary {
    pub seed: u64,
    pub checked: usize,
    pub well_founded: usize,
    /// First relation on which either equivalence failed.
    pub first_disagreement: Option<FiniteRelation>,
}

impl FuzzSummary {
    pub fn all_agree(&self) -> bool {
        self.first_disagreement.is_none()
    }
}

/// The seeded corpus behind [`fuzz`]: sizes drawn from `sizes`, densities
/// uniform in `[0, 1]`, all derived from `seed`.
pub fn sample_relations(count: usize, sizes: RangeInclusive<usize>, seed: u64) -> Result<Vec<FiniteRelation>, OracleError> {
    if *sizes.end() > MAX_SIZE {
        return Err(OracleError::TooLarge(*sizes.end()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(sizes.clone());
            let density: f64 = rng.gen();
            gen_relation(n, density, rng.gen())
        })
        .collect()
}

/// Every relation on `n <= 3` elements, in code order.
pub fn all_relations(n: usize) -> Result<Vec<FiniteRelation>, OracleError> {
    if n > 3 {
        return Err(OracleError::TooLarge(n));
    }
    (0..1u64 << (n * n)).map(|code| FiniteRelation::from_code(n, code)).collect()
}

fn summarize(seed: u64, corpus: Vec<FiniteRelation>) -> FuzzSummary {
    let mut summary = FuzzSummary {
        seed,
        checked: 0,
        well_founded: 0,
        first_disagreement: None,
    };
    for r in corpus {
        record(&mut summary, r);
    }
    summary
}

/// Checks both equivalences on the [`sample_relations`] corpus.
pub fn fuzz(count: usize, sizes: RangeInclusive<usize>, seed: u64) -> Result<FuzzSummary, OracleError> {
    Ok(summarize(seed, sample_relations(count, sizes, seed)?))
}

/// Checks both equivalences on every relation over `n <= 3` elements.
pub fn exhaustive(n: usize) -> Result<FuzzSummary, OracleError> {
    Ok(summarize(0, all_relations(n)?))
}

fn record(summary: &mut FuzzSummary, r: FiniteRelation) {
    summary.checked += 1;
    if fin_well_founded(&r) {
        summary.well_founded += 1;
    }
    if summary.first_disagreement.is_none() && !(fin_induction_iff_well_founded(&r) && fin_duality_agrees(&r)) {
        summary.first_disagreement = Some(r);
    }
}
