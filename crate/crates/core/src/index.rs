//! Indices and the shuffle families `I(p,q)` and `J(p,q)`.
//!
//! `I(p,q)` is the multiset of interleavings of `(a,b)` repeated `p` times
//! with `c` repeated `q` times; `J(p,q)` does the same with a leading `b`
//! prepended to the first sequence. Every interleaving pattern counts once,
//! so an index reachable by several patterns (possible when letters
//! coincide, e.g. `a = b = c = 2`) carries a multiplicity.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;

use crate::{MzvError, Result};

/// A finite sequence of positive exponents `(k₁,…,kₙ)`. The empty index is
/// allowed.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Index(Vec<u32>);

impl Index {
    pub fn new(entries: Vec<u32>) -> Result<Self> {
        if let Some(&bad) = entries.iter().find(|&&k| k == 0) {
            return Err(MzvError::InvalidIndexEntry(u64::from(bad)));
        }
        Ok(Index(entries))
    }

    pub fn empty() -> Self {
        Index(Vec::new())
    }

    /// `{k}^n`.
    pub fn repeated(k: u32, n: usize) -> Result<Self> {
        Index::new(vec![k; n])
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Sum of the entries.
    pub fn weight(&self) -> u64 {
        self.0.iter().map(|&k| u64::from(k)).sum()
    }
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("∅");
        }
        f.write_str("(")?;
        for (i, k) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{k}")?;
        }
        f.write_str(")")
    }
}

impl FromStr for Index {
    type Err = MzvError;

    /// Comma separated entries, e.g. `2,1`. An empty string (or `()`) is the
    /// empty index.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')').trim();
        if s.is_empty() {
            return Ok(Index::empty());
        }
        let mut entries = Vec::new();
        for part in s.split(',') {
            let part = part.trim();
            let k: i64 = part
                .parse()
                .map_err(|_| MzvError::Parse(format!("bad index entry {part:?}")))?;
            if k < 1 {
                return Err(MzvError::InvalidIndexEntry(k.max(0) as u64));
            }
            let k = u32::try_from(k)
                .map_err(|_| MzvError::Parse(format!("index entry {k} too large")))?;
            entries.push(k);
        }
        Index::new(entries)
    }
}

/// The triple `(a,b,c)` with `a + b = 2c` and `a ≥ 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct AbcParams {
    a: u32,
    b: u32,
    c: u32,
}

impl AbcParams {
    pub fn new(a: u32, b: u32, c: u32) -> Result<Self> {
        let invalid = |reason| MzvError::InvalidParams { a, b, c, reason };
        if a == 0 || b == 0 || c == 0 {
            return Err(invalid("a, b and c must be positive"));
        }
        if u64::from(a) + u64::from(b) != 2 * u64::from(c) {
            return Err(invalid("a+b must equal 2c"));
        }
        if a < 2 {
            return Err(invalid("a must be at least 2"));
        }
        Ok(AbcParams { a, b, c })
    }

    /// `(3,1,2)`, the triple behind the π-power evaluations.
    pub fn classic() -> Self {
        AbcParams { a: 3, b: 1, c: 2 }
    }

    pub fn a(&self) -> u32 {
        self.a
    }

    pub fn b(&self) -> u32 {
        self.b
    }

    pub fn c(&self) -> u32 {
        self.c
    }
}

impl fmt::Display for AbcParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.a, self.b, self.c)
    }
}

impl FromStr for AbcParams {
    type Err = MzvError;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(MzvError::Parse(format!("expected a,b,c but got {s:?}")));
        }
        let mut v = [0u32; 3];
        for (slot, part) in v.iter_mut().zip(&parts) {
            *slot = part
                .parse()
                .map_err(|_| MzvError::Parse(format!("bad parameter {part:?}")))?;
        }
        AbcParams::new(v[0], v[1], v[2])
    }
}

/// Indices with positive multiplicities.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IndexMultiset {
    items: BTreeMap<Index, u64>,
}

impl IndexMultiset {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, index: Index, multiplicity: u64) {
        if multiplicity > 0 {
            *self.items.entry(index).or_insert(0) += multiplicity;
        }
    }

    pub fn multiplicity(&self, index: &Index) -> u64 {
        self.items.get(index).copied().unwrap_or(0)
    }

    /// Number of distinct indices.
    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Sum of all multiplicities.
    pub fn total(&self) -> u64 {
        self.items.values().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Index, u64)> {
        self.items.iter().map(|(k, &v)| (k, v))
    }
}

impl FromIterator<(Index, u64)> for IndexMultiset {
    fn from_iter<T: IntoIterator<Item = (Index, u64)>>(iter: T) -> Self {
        let mut out = IndexMultiset::new();
        for (index, mult) in iter {
            out.insert(index, mult);
        }
        out
    }
}

/// All ways to interleave `n1` letters of a first sequence with `n2` letters
/// of a second one. Each pattern has length `n1 + n2`; `true` marks a slot
/// filled from the second sequence. Patterns come out in lexicographic order
/// of the positions taken by the second sequence.
pub fn interleaving_patterns(n1: usize, n2: usize) -> Vec<Vec<bool>> {
    fn go(
        pos: usize,
        total: usize,
        left2: usize,
        cur: &mut Vec<bool>,
        out: &mut Vec<Vec<bool>>,
    ) {
        if left2 == 0 {
            let mut pat = cur.clone();
            pat.resize(total, false);
            out.push(pat);
            return;
        }
        // remaining slots must still fit the second sequence
        for next in pos..=total - left2 {
            let mark = cur.len();
            cur.resize(next, false);
            cur.push(true);
            go(next + 1, total, left2 - 1, cur, out);
            cur.truncate(mark);
        }
    }
    let mut out = Vec::new();
    go(0, n1 + n2, n2, &mut Vec::with_capacity(n1 + n2), &mut out);
    out
}

/// Merge two sequences according to an interleaving pattern.
pub fn apply_pattern(s1: &[u32], s2: &[u32], pattern: &[bool]) -> Vec<u32> {
    let (mut i, mut j) = (0, 0);
    pattern
        .iter()
        .map(|&from_second| {
            if from_second {
                j += 1;
                s2[j - 1]
            } else {
                i += 1;
                s1[i - 1]
            }
        })
        .collect()
}

/// Every interleaving of `s1` and `s2`, one count per pattern.
pub fn shuffles(s1: &Index, s2: &Index) -> IndexMultiset {
    interleaving_patterns(s1.len(), s2.len())
        .iter()
        .map(|pat| (Index(apply_pattern(s1.entries(), s2.entries(), pat)), 1))
        .collect()
}

fn pairs(params: &AbcParams, p: usize) -> Vec<u32> {
    std::iter::repeat_n([params.a, params.b], p).flatten().collect()
}

/// `I(p,q)`: shuffles of `(a,b)` repeated `p` times with `c` repeated `q`
/// times.
pub fn index_family_i(p: usize, q: usize, params: &AbcParams) -> IndexMultiset {
    shuffles(&Index(pairs(params, p)), &Index(vec![params.c; q]))
}

/// `J(p,q)`: shuffles of `b` followed by `(a,b)` repeated `p` times with `c`
/// repeated `q` times.
pub fn index_family_j(p: usize, q: usize, params: &AbcParams) -> IndexMultiset {
    let mut head = vec![params.b];
    head.extend(pairs(params, p));
    shuffles(&Index(head), &Index(vec![params.c; q]))
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn idx(v: &[u32]) -> Index {
        Index::new(v.to_vec()).unwrap()
    }

    fn set(items: &[&[u32]]) -> IndexMultiset {
        items.iter().map(|v| (idx(v), 1)).collect()
    }

    #[test]
    fn empty_shuffle() {
        let s = shuffles(&Index::empty(), &Index::empty());
        assert_eq!(s, set(&[&[]]));
    }

    #[test]
    fn shuffle_of_pair_and_single() {
        let s = shuffles(&idx(&[3, 1]), &idx(&[2]));
        assert_eq!(s, set(&[&[3, 1, 2], &[3, 2, 1], &[2, 3, 1]]));
    }

    #[test]
    fn identical_letters_collide() {
        let s = shuffles(&idx(&[2]), &idx(&[2]));
        assert_eq!(s.len(), 1);
        assert_eq!(s.multiplicity(&idx(&[2, 2])), 2);
    }

    #[test]
    fn family_i_examples() {
        let p = AbcParams::classic();
        assert_eq!(index_family_i(0, 0, &p), set(&[&[]]));
        assert_eq!(
            index_family_i(1, 2, &p),
            set(&[
                &[3, 1, 2, 2],
                &[3, 2, 1, 2],
                &[3, 2, 2, 1],
                &[2, 3, 1, 2],
                &[2, 3, 2, 1],
                &[2, 2, 3, 1],
            ])
        );
        assert_eq!(index_family_i(0, 3, &p), set(&[&[2, 2, 2]]));
        assert_eq!(
            index_family_i(1, 1, &p),
            set(&[&[3, 1, 2], &[3, 2, 1], &[2, 3, 1]])
        );
    }

    #[test]
    fn family_j_examples() {
        let p = AbcParams::classic();
        assert_eq!(index_family_j(0, 0, &p), set(&[&[1]]));
        assert_eq!(
            index_family_j(1, 1, &p),
            set(&[&[1, 3, 1, 2], &[1, 3, 2, 1], &[1, 2, 3, 1], &[2, 1, 3, 1]])
        );
        assert_eq!(index_family_j(0, 1, &p), set(&[&[1, 2], &[2, 1]]));
    }

    #[test]
    fn params_validation() {
        assert!(AbcParams::new(3, 1, 2).is_ok());
        assert!(AbcParams::new(2, 2, 2).is_ok());
        let err = AbcParams::new(3, 1, 1).unwrap_err().to_string();
        assert!(err.contains("a+b must equal 2c"), "{err}");
        let err = AbcParams::new(1, 3, 2).unwrap_err().to_string();
        assert!(err.contains("a must be at least 2"), "{err}");
        assert!("4,2,3".parse::<AbcParams>().is_ok());
        assert!("4,2".parse::<AbcParams>().is_err());
    }

    #[test]
    fn index_parsing() {
        assert_eq!("2,1".parse::<Index>().unwrap(), idx(&[2, 1]));
        assert_eq!("".parse::<Index>().unwrap(), Index::empty());
        assert!(matches!(
            "0,1".parse::<Index>(),
            Err(MzvError::InvalidIndexEntry(0))
        ));
        assert!("-3".parse::<Index>().is_err());
        assert!("x".parse::<Index>().is_err());
        assert!(Index::new(vec![1, 0]).is_err());
    }

    #[test]
    fn multiset_semantics_for_colliding_letters() {
        let p = AbcParams::new(2, 2, 2).unwrap();
        let fam = index_family_i(1, 1, &p);
        assert_eq!(fam.len(), 1);
        assert_eq!(fam.total(), 3);
    }

    proptest! {
        #[test]
        fn family_totals_are_binomial(p in 0usize..4, q in 0usize..4) {
            for params in [AbcParams::classic(), AbcParams::new(2, 2, 2).unwrap()] {
                let i = index_family_i(p, q, &params);
                let j = index_family_j(p, q, &params);
                prop_assert_eq!(BigUint::from(i.total()), binomial((2 * p + q) as u64, q as u64));
                prop_assert_eq!(BigUint::from(j.total()), binomial((2 * p + q + 1) as u64, q as u64));
                prop_assert!(i.iter().all(|(k, _)| k.len() == 2 * p + q));
                prop_assert!(j.iter().all(|(k, _)| k.len() == 2 * p + q + 1));
            }
            // distinct letters: every multiplicity is one
            let i = index_family_i(p, q, &AbcParams::classic());
            prop_assert!(i.iter().all(|(_, m)| m == 1));
        }

        #[test]
        fn shuffle_is_symmetric(
            s1 in proptest::collection::vec(1u32..4, 0..4),
            s2 in proptest::collection::vec(1u32..4, 0..4),
        ) {
            let (s1, s2) = (idx(&s1), idx(&s2));
            let a = shuffles(&s1, &s2);
            prop_assert_eq!(&a, &shuffles(&s2, &s1));
            prop_assert_eq!(
                BigUint::from(a.total()),
                binomial((s1.len() + s2.len()) as u64, s1.len() as u64)
            );
        }

        #[test]
        fn erasing_c_letters_recovers_pairs(p in 0usize..4, q in 0usize..4) {
            let params = AbcParams::classic();
            let first = pairs(&params, p);
            let second = vec![params.c; q];
            for pat in interleaving_patterns(first.len(), second.len()) {
                let merged = apply_pattern(&first, &second, &pat);
                let kept: Vec<u32> = merged
                    .iter()
                    .zip(&pat)
                    .filter(|(_, &from_c)| !from_c)
                    .map(|(&k, _)| k)
                    .collect();
                prop_assert_eq!(&kept, &first);
            }
        }
    }
}
