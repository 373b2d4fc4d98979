//! π-power evaluations of the limits `m → ∞` for `(a,b,c) = (3,1,2)`:
//!
//! ```text
//! s(p,q)  = C(2p+q, q) π^{4p+2q} / ((2p+1)(4p+2q+1)!)
//! s★(0,q) = β_q π^{2q},   β_r = (2^{2r} − 2)(−1)^{r−1} B_{2r} / (2r)!
//! ```
//!
//! and `s★(p,q)` assembled from these through the finite identity.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::index::{binomial, index_family_i, AbcParams};
use crate::store::ZetaStore;
use crate::zeta::{rhs_terms, zeta_values_at};
use crate::{rational_string, MzvError, Rational, Result};

fn int(n: impl Into<BigInt>) -> Rational {
    Rational::from_integer(n.into())
}

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// `B_0 … B_n` from `Σ_{j=0}^{k} C(k+1, j) B_j = 0`, with `B_1 = −1/2`.
pub fn bernoulli_table(n: usize) -> Vec<Rational> {
    let mut b: Vec<Rational> = Vec::with_capacity(n + 1);
    b.push(Rational::one());
    for k in 1..=n {
        let acc = (0..k).fold(Rational::zero(), |acc, j| {
            acc + &b[j] * int(binomial(k as u64 + 1, j as u64))
        });
        b.push(-acc / int(k as u64 + 1));
    }
    b
}

/// `B_n`.
pub fn bernoulli(n: usize) -> Rational {
    bernoulli_table(n).pop().expect("nonempty")
}

/// `B_n` through the tangent numbers `T_k` (1, 2, 16, 272, …), built by the
/// Seidel-style triangle, and `B_{2k} = (−1)^{k−1} 2k T_k / (4^k (4^k − 1))`.
pub fn bernoulli_by_tangent(n: usize) -> Rational {
    match n {
        0 => return Rational::one(),
        1 => return Rational::new((-1).into(), 2.into()),
        _ if n % 2 == 1 => return Rational::zero(),
        _ => {}
    }
    let half = n / 2;
    let mut t: Vec<BigInt> = vec![BigInt::zero(); half + 1];
    t[1] = BigInt::one();
    for k in 2..=half {
        t[k] = &t[k - 1] * (k - 1);
    }
    for k in 2..=half {
        for j in k..=half {
            t[j] = &t[j - 1] * (j - k) + &t[j] * (j - k + 2);
        }
    }
    let four_k = BigInt::from(4).pow(half as u32);
    let value = Rational::new(&t[half] * (2 * half), &four_k * (&four_k - 1));
    if half % 2 == 1 {
        value
    } else {
        -value
    }
}

/// `β_r`; `β_0 = 1`.
pub fn beta(r: usize) -> Rational {
    let b = bernoulli(2 * r);
    let factor = BigInt::from(2).pow(2 * r as u32) - 2;
    // (−1)^{r−1}
    let sign = if r % 2 == 1 { int(1) } else { int(-1) };
    int(factor) * sign * b / int(factorial(2 * r as u64))
}

/// `rational · π^pi_power`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiCoefficient {
    pub rational: Rational,
    pub pi_power: u32,
}

impl PiCoefficient {
    pub fn to_f64(&self) -> f64 {
        self.rational.to_f64().unwrap_or(f64::NAN) * std::f64::consts::PI.powi(self.pi_power as i32)
    }
}

impl fmt::Display for PiCoefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} * pi^{}", rational_string(&self.rational), self.pi_power)
    }
}

/// Rational part of `s(p,q)/π^{4p+2q}` alone, used inside the sums below.
fn s_rational(i: usize, j: usize) -> Rational {
    let num = binomial((2 * i + j) as u64, j as u64);
    Rational::new(
        BigInt::from(num),
        BigInt::from(2 * i + 1) * factorial((4 * i + 2 * j + 1) as u64),
    )
}

/// `s(p,q)` for `(a,b,c) = (3,1,2)`.
pub fn s_closed(p: usize, q: usize) -> PiCoefficient {
    PiCoefficient { rational: s_rational(p, q), pi_power: (4 * p + 2 * q) as u32 }
}

/// `s★(p,q)` for `(a,b,c) = (3,1,2)`:
/// `Σ (−1)^{j+k} C(k+l,k) C(u+v,u) C(2i+j,j) β_{k+l} β_{u+v} / ((2i+1)(4i+2j+1)!)`.
pub fn s_star_closed(p: usize, q: usize) -> PiCoefficient {
    let betas: Vec<Rational> = (0..=2 * p + q).map(beta).collect();
    let rational = rhs_terms(p, q)
        .into_iter()
        .map(|t| {
            int(t.coefficient())
                * int(binomial((2 * t.i + t.j) as u64, t.j as u64))
                * &betas[t.k + t.l]
                * &betas[t.u + t.v]
                / int(BigInt::from(2 * t.i + 1) * factorial((4 * t.i + 2 * t.j + 1) as u64))
        })
        .fold(Rational::zero(), |acc, x| acc + x);
    PiCoefficient { rational, pi_power: (4 * p + 2 * q) as u32 }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceRow {
    pub m: u64,
    /// `s★_m(p,q) / π^{4p+2q}` as a float.
    pub truncated_over_pi_power: f64,
    pub closed_form: f64,
    pub abs_error: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceReport {
    pub p: usize,
    pub q: usize,
    pub closed: PiCoefficient,
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceReport {
    /// Whether the errors never grow along the schedule.
    pub fn is_monotone(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].abs_error <= w[0].abs_error)
    }
}

/// Exact `s★_m(p,q)` for each `m` in `schedule` (single sweep per index).
pub fn s_star_at(
    p: usize,
    q: usize,
    params: &AbcParams,
    schedule: &[u64],
    store: Option<&mut ZetaStore>,
) -> Vec<Rational> {
    let family: Vec<_> = index_family_i(p, q, params)
        .iter()
        .map(|(k, mult)| (k.clone(), mult))
        .collect();
    let cached: Vec<Option<Vec<Rational>>> = family
        .iter()
        .map(|(k, _)| {
            let st = store.as_deref()?;
            schedule.iter().map(|&m| st.get(k, true, m).cloned()).collect()
        })
        .collect();
    let values: Vec<Vec<Rational>> = family
        .par_iter()
        .zip(cached.into_par_iter())
        .map(|((k, _), hit)| hit.unwrap_or_else(|| zeta_values_at(k, true, schedule)))
        .collect();
    if let Some(st) = store {
        for ((k, _), vals) in family.iter().zip(&values) {
            for (&m, v) in schedule.iter().zip(vals) {
                st.insert(k, true, m, v.clone());
            }
        }
    }
    (0..schedule.len())
        .map(|i| {
            family
                .iter()
                .zip(&values)
                .fold(Rational::zero(), |acc, ((_, mult), vals)| acc + &vals[i] * int(*mult))
        })
        .collect()
}

/// Float table of `s★_m(p,q)/π^{4p+2q}` against the closed form along a
/// strictly increasing schedule of `m`.
pub fn converge_report(
    p: usize,
    q: usize,
    params: &AbcParams,
    schedule: &[u64],
    store: Option<&mut ZetaStore>,
) -> Result<ConvergenceReport> {
    if *params != AbcParams::classic() {
        return Err(MzvError::UnsupportedParams);
    }
    if schedule.windows(2).any(|w| w[1] <= w[0]) {
        return Err(MzvError::NonIncreasingSchedule);
    }
    let closed = s_star_closed(p, q);
    let closed_f = closed.rational.to_f64().unwrap_or(f64::NAN);
    let pi_pow = std::f64::consts::PI.powi(closed.pi_power as i32);
    let exact = s_star_at(p, q, params, schedule, store);
    let rows = schedule
        .iter()
        .zip(exact)
        .map(|(&m, v)| {
            let ratio = v.to_f64().unwrap_or(f64::NAN) / pi_pow;
            let abs_error = if v.is_zero() && closed.rational.is_zero() {
                0.0
            } else {
                (ratio - closed_f).abs()
            };
            ConvergenceRow { m, truncated_over_pi_power: ratio, closed_form: closed_f, abs_error }
        })
        .collect();
    Ok(ConvergenceReport { p, q, closed, rows })
}
