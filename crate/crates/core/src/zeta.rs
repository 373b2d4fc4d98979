//! Truncated multiple zeta(-star) values and the sums over `I(p,q)`, `J(p,q)`.
//!
//! Values are computed by a dynamic program over suffixes of the index,
//! sweeping the outer bound upward:
//!
//! ```text
//! ζ_m(k₁,…,kₙ)  = ζ_{m-1}(k₁,…,kₙ)  + m^{-k₁} ζ_{m-1}(k₂,…,kₙ)
//! ζ★_m(k₁,…,kₙ) = ζ★_{m-1}(k₁,…,kₙ) + m^{-k₁} ζ★_m(k₂,…,kₙ)
//! ```
//!
//! so a whole sequence `m = 0..=M` costs `O(n·M)` rational operations.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::index::{binomial, index_family_i, index_family_j, AbcParams, Index, IndexMultiset};
use crate::Rational;

/// `1 / l^k`.
pub(crate) fn inv_pow(l: u64, k: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::from(l).pow(k))
}

fn inv_powers(entries: &[u32], l: u64) -> BTreeMap<u32, Rational> {
    entries.iter().map(|&k| (k, inv_pow(l, k))).collect()
}

/// Sweep the suffix table from `m = 0` up to `upto`, calling `visit(m, value)`
/// with the value for the full index after each step.
fn sweep(k: &Index, star: bool, upto: u64, mut visit: impl FnMut(u64, &Rational)) {
    let e = k.entries();
    let n = e.len();
    // table[j] = value for the suffix starting at j; table[n] is the empty index.
    let mut table: Vec<Rational> = (0..=n)
        .map(|j| if j == n { Rational::one() } else { Rational::zero() })
        .collect();
    visit(0, &table[0]);
    for l in 1..=upto {
        let pw = inv_powers(e, l);
        if star {
            for j in (0..n).rev() {
                let add = &pw[&e[j]] * &table[j + 1];
                table[j] += add;
            }
        } else {
            for j in 0..n {
                let add = &pw[&e[j]] * &table[j + 1];
                table[j] += add;
            }
        }
        visit(l, &table[0]);
    }
}

/// `ζ_m(k)`.
pub fn zeta_trunc(k: &Index, m: u64) -> Rational {
    if k.len() as u64 > m {
        return if k.is_empty() { Rational::one() } else { Rational::zero() };
    }
    let mut out = Rational::zero();
    sweep(k, false, m, |l, v| {
        if l == m {
            out = v.clone();
        }
    });
    out
}

/// `ζ★_m(k)`.
pub fn zeta_star_trunc(k: &Index, m: u64) -> Rational {
    let mut out = Rational::zero();
    sweep(k, true, m, |l, v| {
        if l == m {
            out = v.clone();
        }
    });
    out
}

/// `[ζ_0(k), ζ_1(k), …, ζ_upto(k)]`, or the starred values when `star` is set.
pub fn zeta_sequence(k: &Index, star: bool, upto: u64) -> Vec<Rational> {
    let mut out = Vec::with_capacity(upto as usize + 1);
    sweep(k, star, upto, |_, v| out.push(v.clone()));
    out
}

/// Values at each `m` in `ms` (any order) from a single sweep.
pub fn zeta_values_at(k: &Index, star: bool, ms: &[u64]) -> Vec<Rational> {
    let upto = ms.iter().copied().max().unwrap_or(0);
    let mut found: BTreeMap<u64, Rational> = BTreeMap::new();
    sweep(k, star, upto, |l, v| {
        if ms.contains(&l) {
            found.insert(l, v.clone());
        }
    });
    ms.iter().map(|m| found[m].clone()).collect()
}

/// Which of the four shuffle sums.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum SumKind {
    /// `s_m(p,q)`: ζ_m over `I(p,q)`.
    S,
    /// `s★_m(p,q)`: ζ★_m over `I(p,q)`.
    SStar,
    /// `t_m(p,q)`: ζ_m over `J(p,q)`.
    T,
    /// `t★_m(p,q)`: ζ★_m over `J(p,q)`.
    TStar,
}

impl SumKind {
    pub fn is_star(self) -> bool {
        matches!(self, SumKind::SStar | SumKind::TStar)
    }

    pub fn family(self, p: usize, q: usize, params: &AbcParams) -> IndexMultiset {
        match self {
            SumKind::S | SumKind::SStar => index_family_i(p, q, params),
            SumKind::T | SumKind::TStar => index_family_j(p, q, params),
        }
    }

    /// The unstarred kind over the same family.
    pub fn base(self) -> SumKind {
        match self {
            SumKind::S | SumKind::SStar => SumKind::S,
            SumKind::T | SumKind::TStar => SumKind::T,
        }
    }

    pub fn starred(self) -> SumKind {
        match self {
            SumKind::S | SumKind::SStar => SumKind::SStar,
            SumKind::T | SumKind::TStar => SumKind::TStar,
        }
    }
}

/// Multiplicity-weighted sum of truncated values over a multiset.
pub fn multiset_sum(family: &IndexMultiset, star: bool, m: u64) -> Rational {
    family
        .iter()
        .map(|(k, mult)| {
            let v = if star { zeta_star_trunc(k, m) } else { zeta_trunc(k, m) };
            v * Rational::from_integer(BigInt::from(mult))
        })
        .fold(Rational::zero(), |acc, v| acc + v)
}

/// Same as [`multiset_sum`] for every `m = 0..=upto`.
pub fn multiset_sum_sequence(family: &IndexMultiset, star: bool, upto: u64) -> Vec<Rational> {
    let items: Vec<(&Index, u64)> = family.iter().collect();
    items
        .par_iter()
        .map(|(k, mult)| {
            let w = Rational::from_integer(BigInt::from(*mult));
            zeta_sequence(k, star, upto)
                .into_iter()
                .map(|v| v * &w)
                .collect::<Vec<_>>()
        })
        .reduce(
            || vec![Rational::zero(); upto as usize + 1],
            |mut acc, seq| {
                for (a, v) in acc.iter_mut().zip(seq) {
                    *a += v;
                }
                acc
            },
        )
}

pub fn sum_direct(kind: SumKind, p: usize, q: usize, m: u64, params: &AbcParams) -> Rational {
    multiset_sum(&kind.family(p, q, params), kind.is_star(), m)
}

pub fn s_direct(p: usize, q: usize, m: u64, params: &AbcParams) -> Rational {
    sum_direct(SumKind::S, p, q, m, params)
}

pub fn s_star_direct(p: usize, q: usize, m: u64, params: &AbcParams) -> Rational {
    sum_direct(SumKind::SStar, p, q, m, params)
}

pub fn t_direct(p: usize, q: usize, m: u64, params: &AbcParams) -> Rational {
    sum_direct(SumKind::T, p, q, m, params)
}

pub fn t_star_direct(p: usize, q: usize, m: u64, params: &AbcParams) -> Rational {
    sum_direct(SumKind::TStar, p, q, m, params)
}

/// One term of the right-hand side sum, for `2i+k+u = 2p`, `j+l+v = q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RhsTerm {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub l: usize,
    pub u: usize,
    pub v: usize,
}

impl RhsTerm {
    /// `(-1)^{j+k} C(k+l,k) C(u+v,u)`.
    pub fn coefficient(&self) -> BigInt {
        self.coefficient_with_offset(0)
    }

    fn coefficient_with_offset(&self, offset: i64) -> BigInt {
        let first = BigInt::from(binomial((self.k + self.l) as u64, self.k as u64)) + offset;
        let c = first * BigInt::from(binomial((self.u + self.v) as u64, self.u as u64));
        if (self.j + self.k) % 2 == 1 {
            -c
        } else {
            c
        }
    }
}

/// All `(i,j,k,l,u,v) ≥ 0` with `2i+k+u = 2p` and `j+l+v = q`.
pub fn rhs_terms(p: usize, q: usize) -> Vec<RhsTerm> {
    let mut out = Vec::new();
    for i in 0..=p {
        let rest = 2 * (p - i);
        for k in 0..=rest {
            let u = rest - k;
            for j in 0..=q {
                for l in 0..=q - j {
                    out.push(RhsTerm { i, j, k, l, u, v: q - j - l });
                }
            }
        }
    }
    out
}

/// `Σ (-1)^{j+k} C(k+l,k) C(u+v,u) · base(i,j) · star_c(k+l) · star_c(u+v)`.
///
/// With `base = s_m` and `star_c(r) = ζ★_m({c}^r)` this is the right-hand
/// side of the finite identity; with the closed-form values it assembles the
/// π-power evaluation.
pub fn identity_rhs(
    p: usize,
    q: usize,
    base: impl Fn(usize, usize) -> Rational,
    star_c: impl Fn(usize) -> Rational,
) -> Rational {
    identity_rhs_with_offset(p, q, 0, base, star_c)
}

/// [`identity_rhs`] with `offset` added to every `C(k+l,k)`. A nonzero
/// offset breaks the identity; this exists so the failure path of the
/// verification front end can be exercised.
#[doc(hidden)]
pub fn identity_rhs_with_offset(
    p: usize,
    q: usize,
    offset: i64,
    base: impl Fn(usize, usize) -> Rational,
    star_c: impl Fn(usize) -> Rational,
) -> Rational {
    let mut acc = Rational::zero();
    for t in rhs_terms(p, q) {
        let coeff = t.coefficient_with_offset(offset);
        if coeff.is_zero() {
            continue;
        }
        let term = base(t.i, t.j) * star_c(t.k + t.l) * star_c(t.u + t.v);
        acc += term * Rational::from_integer(coeff);
    }
    acc
}

/// Outcome of one exact identity check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityReport {
    pub params: AbcParams,
    pub p: usize,
    pub q: usize,
    pub m: u64,
    pub lhs: Rational,
    pub rhs: Rational,
    pub equal: bool,
}

impl IdentityReport {
    pub fn new(params: AbcParams, p: usize, q: usize, m: u64, lhs: Rational, rhs: Rational) -> Self {
        let equal = lhs == rhs;
        IdentityReport { params, p, q, m, lhs, rhs, equal }
    }
}

fn verify_identity(kind: SumKind, p: usize, q: usize, m: u64, params: &AbcParams) -> IdentityReport {
    let lhs = sum_direct(kind.starred(), p, q, m, params);
    let c = params.c();
    let rhs = identity_rhs(
        p,
        q,
        |i, j| sum_direct(kind.base(), i, j, m, params),
        |r| zeta_star_trunc(&Index::repeated(c, r).expect("c ≥ 1"), m),
    );
    IdentityReport::new(*params, p, q, m, lhs, rhs)
}

/// Check `s★_m(p,q) = Σ (-1)^{j+k} C(k+l,k) C(u+v,u) s_m(i,j) ζ★_m({c}^{k+l}) ζ★_m({c}^{u+v})`.
pub fn verify_identity_s(p: usize, q: usize, m: u64, params: &AbcParams) -> IdentityReport {
    verify_identity(SumKind::S, p, q, m, params)
}

/// The same identity with `t★_m` and `t_m`.
pub fn verify_identity_t(p: usize, q: usize, m: u64, params: &AbcParams) -> IdentityReport {
    verify_identity(SumKind::T, p, q, m, params)
}

/// Closed integer range `lo..=hi`.
pub type Span = std::ops::RangeInclusive<u64>;

/// Batch version of [`verify_identity_s`] / [`verify_identity_t`] over a
/// grid. Every truncated value is computed once per index as a sequence in
/// `m`. Reports are sorted by `(p, q, m)`.
///
/// `kind` selects the family: `S`/`SStar` for the `s` identity, `T`/`TStar`
/// for the `t` identity.
pub fn verify_identity_grid(
    kind: SumKind,
    params: &AbcParams,
    ps: Span,
    qs: Span,
    ms: Span,
    coefficient_offset: i64,
) -> Vec<IdentityReport> {
    let (pmax, qmax, mmax) = (*ps.end() as usize, *qs.end() as usize, *ms.end());
    let base = kind.base();
    let star = kind.starred();

    let mut jobs: Vec<(SumKind, usize, usize)> = Vec::new();
    for i in 0..=pmax {
        for j in 0..=qmax {
            jobs.push((base, i, j));
        }
    }
    for p in ps.clone() {
        for q in qs.clone() {
            jobs.push((star, p as usize, q as usize));
        }
    }
    let sums: BTreeMap<(bool, usize, usize), Vec<Rational>> = jobs
        .par_iter()
        .map(|&(k, i, j)| {
            let seq = multiset_sum_sequence(&k.family(i, j, params), k.is_star(), mmax);
            ((k.is_star(), i, j), seq)
        })
        .collect();
    let c = params.c();
    let star_c: Vec<Vec<Rational>> = (0..=2 * pmax + qmax)
        .into_par_iter()
        .map(|r| zeta_sequence(&Index::repeated(c, r).expect("c ≥ 1"), true, mmax))
        .collect();

    let mut cases: Vec<(usize, usize, u64)> = Vec::new();
    for p in ps {
        for q in qs.clone() {
            for m in ms.clone() {
                cases.push((p as usize, q as usize, m));
            }
        }
    }
    cases
        .par_iter()
        .map(|&(p, q, m)| {
            let mi = m as usize;
            let lhs = sums[&(true, p, q)][mi].clone();
            let rhs = identity_rhs_with_offset(
                p,
                q,
                coefficient_offset,
                |i, j| sums[&(false, i, j)][mi].clone(),
                |r| star_c[r][mi].clone(),
            );
            IdentityReport::new(*params, p, q, m, lhs, rhs)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn idx(v: &[u32]) -> Index {
        Index::new(v.to_vec()).unwrap()
    }

    /// Brute force over all monotone tuples; independent of the suffix DP.
    fn naive(k: &[u32], m: u64, star: bool) -> Rational {
        fn go(k: &[u32], bound: u64, star: bool) -> Rational {
            let Some((&first, rest)) = k.split_first() else {
                return Rational::one();
            };
            let mut acc = Rational::zero();
            for mi in 1..=bound {
                let next = if star { mi } else { mi - 1 };
                let denom = BigInt::from(mi).pow(first);
                acc += go(rest, next, star) / Rational::from_integer(denom);
            }
            acc
        }
        go(k, m, star)
    }

    #[test]
    fn worked_values() {
        assert_eq!(zeta_trunc(&Index::empty(), 5), r(1, 1));
        assert_eq!(zeta_trunc(&idx(&[1]), 2), r(3, 2));
        assert_eq!(zeta_trunc(&idx(&[2, 1]), 2), r(1, 4));
        assert_eq!(zeta_trunc(&idx(&[3, 1]), 1), r(0, 1));
        assert_eq!(zeta_star_trunc(&idx(&[2]), 2), r(5, 4));
        assert_eq!(zeta_star_trunc(&idx(&[2, 2]), 2), r(21, 16));
        assert_eq!(zeta_star_trunc(&idx(&[7, 7, 7]), 0), r(0, 1));
        assert_eq!(zeta_star_trunc(&Index::empty(), 0), r(1, 1));
    }

    #[test]
    fn sums() {
        let p = AbcParams::classic();
        assert_eq!(s_direct(0, 0, 17, &p), r(1, 1));
        assert_eq!(s_star_direct(0, 1, 1, &p), r(1, 1));
        assert_eq!(t_direct(0, 0, 2, &p), r(3, 2));
        assert_eq!(s_direct(1, 0, 2, &p), zeta_trunc(&idx(&[3, 1]), 2));
        assert_eq!(s_direct(1, 0, 2, &p), r(1, 8));
    }

    #[test]
    fn identity_small_cases() {
        let p = AbcParams::classic();
        for m in [0, 1, 7] {
            let rep = verify_identity_s(0, 0, m, &p);
            assert_eq!((rep.lhs.clone(), rep.equal), (r(1, 1), true));
        }
        let rep = verify_identity_s(0, 1, 1, &p);
        assert_eq!(rep.lhs, r(1, 1));
        assert_eq!(rep.rhs, r(1, 1));
        assert!(verify_identity_s(1, 0, 2, &p).equal);

        let rep = verify_identity_t(0, 0, 1, &p);
        assert_eq!((rep.lhs.clone(), rep.rhs.clone()), (r(1, 1), r(1, 1)));
        assert!(verify_identity_t(0, 1, 2, &p).equal);
        assert!(verify_identity_t(1, 1, 5, &p).equal);
    }

    #[test]
    fn rhs_term_count_and_parity() {
        // p=0,q=1: (j,l,v) in {(1,0,0),(0,1,0),(0,0,1)}
        let terms = rhs_terms(0, 1);
        assert_eq!(terms.len(), 3);
        for t in rhs_terms(2, 2) {
            assert_eq!(2 * t.i + t.k + t.u, 4);
            assert_eq!(t.j + t.l + t.v, 2);
            assert_eq!((t.k + t.u) % 2, 0);
        }
    }

    #[test]
    fn offset_breaks_identity() {
        let p = AbcParams::classic();
        let good = verify_identity_grid(SumKind::S, &p, 0..=1, 0..=1, 2..=3, 0);
        assert!(good.iter().all(|c| c.equal));
        let bad = verify_identity_grid(SumKind::S, &p, 0..=1, 0..=1, 2..=3, 1);
        assert!(bad.iter().any(|c| !c.equal));
    }

    #[test]
    fn dp_matches_naive_enumeration() {
        // all indices of length ≤ 4 with entries ≤ 4, m ≤ 12
        let mut indices = vec![vec![]];
        let mut frontier = vec![vec![]];
        for _ in 0..4 {
            let mut next = Vec::new();
            for w in &frontier {
                for k in 1..=4u32 {
                    let mut v: Vec<u32> = w.clone();
                    v.push(k);
                    next.push(v);
                }
            }
            indices.extend(next.iter().cloned());
            frontier = next;
        }
        for k in &indices {
            let ix = idx(k);
            let plain = zeta_sequence(&ix, false, 12);
            let star = zeta_sequence(&ix, true, 12);
            for m in [0u64, 1, 2, 5, 12] {
                assert_eq!(plain[m as usize], naive(k, m, false), "{ix} m={m}");
                assert_eq!(star[m as usize], naive(k, m, true), "{ix}* m={m}");
            }
        }
    }

    #[test]
    fn values_at_schedule() {
        let k = idx(&[3, 1]);
        let got = zeta_values_at(&k, true, &[5, 2, 9]);
        assert_eq!(got[0], zeta_star_trunc(&k, 5));
        assert_eq!(got[1], zeta_star_trunc(&k, 2));
        assert_eq!(got[2], zeta_star_trunc(&k, 9));
    }

    #[test]
    fn grid_matches_single_case() {
        let p = AbcParams::new(4, 2, 3).unwrap();
        let grid = verify_identity_grid(SumKind::T, &p, 0..=1, 1..=2, 0..=4, 0);
        assert_eq!(grid.len(), 2 * 2 * 5);
        for rep in grid {
            assert_eq!(rep, verify_identity_t(rep.p, rep.q, rep.m, &p));
        }
    }

    #[test]
    fn identity_grid_classic() {
        let p = AbcParams::classic();
        for kind in [SumKind::S, SumKind::T] {
            let reps = verify_identity_grid(kind, &p, 0..=3, 0..=3, 0..=25, 0);
            assert_eq!(reps.len(), 16 * 26);
            assert!(reps.iter().all(|c| c.equal));
        }
    }

    proptest! {
        #[test]
        fn star_dominates_and_monotone(
            k in proptest::collection::vec(1u32..5, 1..4),
            m in 0u64..10,
        ) {
            let ix = idx(&k);
            let plain = zeta_sequence(&ix, false, m + 1);
            let star = zeta_sequence(&ix, true, m + 1);
            let (z, zs) = (&plain[m as usize], &star[m as usize]);
            prop_assert!(z <= zs);
            if k.len() == 1 {
                prop_assert_eq!(z, zs);
            } else if m >= 1 {
                prop_assert!(z < zs);
            }
            prop_assert!(plain[m as usize + 1] >= *z);
            prop_assert!(star[m as usize + 1] >= *zs);
            prop_assert_eq!(z.is_zero(), m < k.len() as u64);
            prop_assert_eq!(zs.is_zero(), m == 0);
        }
    }
}
