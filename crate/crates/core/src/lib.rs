//! Exact arithmetic for truncated multiple zeta and zeta-star values.
//!
//! The crate computes the partial sums
//!
//! ```text
//! ζ_m(k₁,…,kₙ)  = Σ_{m ≥ m₁ > ⋯ > mₙ > 0} m₁^{-k₁} ⋯ mₙ^{-kₙ}
//! ζ★_m(k₁,…,kₙ) = Σ_{m ≥ m₁ ≥ ⋯ ≥ mₙ ≥ 1} m₁^{-k₁} ⋯ mₙ^{-kₙ}
//! ```
//!
//! as exact rationals, sums of them over the shuffle families `I(p,q)` and
//! `J(p,q)` built from a parameter triple `(a,b,c)` with `a + b = 2c`, and
//! checks the relation between the starred and unstarred sums in three
//! independent ways:
//!
//! * [`zeta`]: direct summation of both sides at a fixed truncation `m`;
//! * [`series`]: the 2×2 matrix recursions for the generating series
//!   `F_m, G_m, F★_m, G★_m` and their product formula;
//! * [`harmonic`]: the corresponding identity in the harmonic
//!   (quasi-shuffle) algebra, checked symbolically.
//!
//! [`closed_form`] holds the π-power evaluations of the limits `m → ∞` for
//! `(a,b,c) = (3,1,2)` and the numeric convergence tables.

pub mod cli;
pub mod closed_form;
mod error;
pub mod harmonic;
pub mod index;
pub mod series;
pub mod store;
pub mod zeta;

pub use error::{MzvError, Result};
pub use index::{AbcParams, Index, IndexMultiset};

/// Arbitrary precision rational, the value type of every exact computation.
pub type Rational = num_rational::BigRational;

/// Render a rational as `n/d` in lowest terms with a positive denominator.
///
/// Integers keep the `/1` suffix so the output is uniform.
pub fn rational_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parse `n/d` or a bare integer `n`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    use num_bigint::BigInt;
    use num_traits::Zero;
    let bad = || MzvError::Parse(format!("not a rational: {s:?}"));
    let (n, d) = match s.trim().split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}
