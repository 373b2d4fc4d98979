//! Truncated bivariate polynomials and the matrix recursions for the
//! generating series
//!
//! ```text
//! F_m(x,y) = Σ s_m(p,q) x^{2p} y^q        G_m(x,y) = Σ t_m(p,q) x^{2p+1} y^q
//! F★_m, G★_m likewise with s★_m, t★_m     H_m(z) = Σ ζ_m({c}^r) z^r
//! ```
//!
//! `(F_m, G_m)ᵀ = U_m ⋯ U_1 (1, 0)ᵀ` with `U_l = [[1 + y/l^c, x/l^a], [x/l^b, 1 + y/l^c]]`,
//! and the starred pair uses `V_l`, the inverse of
//! `[[1 - y/l^c, -x/l^a], [-x/l^b, 1 - y/l^c]]`, which for `a + b = 2c` is
//! `[[1 - y/l^c, x/l^a], [x/l^b, 1 - y/l^c]]` over `(1 - (y-x)/l^c)(1 - (y+x)/l^c)`.
//!
//! All series are truncated at `(bound_x, bound_y)`. A coefficient of a
//! product at `(i, j)` only depends on coefficients at `(i', j') ≤ (i, j)`,
//! so every coefficient that is kept is exact.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::index::AbcParams;
use crate::zeta::{inv_pow, SumKind};
use crate::{MzvError, Rational, Result};

pub type Bounds = (usize, usize);

/// Bounds `(2P + 1, Q)`, enough to read every sum with `p ≤ P`, `q ≤ Q`.
pub fn default_bounds(p_max: usize, q_max: usize) -> Bounds {
    (2 * p_max + 1, q_max)
}

/// Polynomial in `x, y` with all terms of degree above the bounds discarded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BivarPoly {
    coeffs: BTreeMap<(usize, usize), Rational>,
    bounds: Bounds,
}

impl BivarPoly {
    pub fn zero(bounds: Bounds) -> Self {
        BivarPoly { coeffs: BTreeMap::new(), bounds }
    }

    pub fn one(bounds: Bounds) -> Self {
        Self::monomial(Rational::one(), 0, 0, bounds)
    }

    /// `c · x^i y^j`, or zero if the term lies beyond the bounds.
    pub fn monomial(c: Rational, i: usize, j: usize, bounds: Bounds) -> Self {
        let mut p = Self::zero(bounds);
        p.add_term(i, j, c);
        p
    }

    /// Build from `(i, j, coefficient)` triples; repeated keys accumulate.
    pub fn from_terms(terms: impl IntoIterator<Item = (usize, usize, Rational)>, bounds: Bounds) -> Self {
        let mut p = Self::zero(bounds);
        for (i, j, c) in terms {
            p.add_term(i, j, c);
        }
        p
    }

    pub fn bounds(&self) -> Bounds {
        self.bounds
    }

    pub fn coeff(&self, i: usize, j: usize) -> Rational {
        self.coeffs.get(&(i, j)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Nonzero terms in `(i, j)` order.
    pub fn terms(&self) -> impl Iterator<Item = ((usize, usize), &Rational)> {
        self.coeffs.iter().map(|(&k, v)| (k, v))
    }

    fn add_term(&mut self, i: usize, j: usize, c: Rational) {
        if i > self.bounds.0 || j > self.bounds.1 || c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry((i, j)).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&(i, j));
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.bounds != other.bounds {
            return Err(MzvError::BoundMismatch(self.bounds, other.bounds));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (&(i, j), c) in &other.coeffs {
            out.add_term(i, j, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scalar_mul(&-Rational::one())
    }

    pub fn scalar_mul(&self, s: &Rational) -> Self {
        let mut out = Self::zero(self.bounds);
        if s.is_zero() {
            return out;
        }
        for (&k, c) in &self.coeffs {
            out.coeffs.insert(k, c * s);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = Self::zero(self.bounds);
        for (&(i1, j1), c1) in &self.coeffs {
            for (&(i2, j2), c2) in &other.coeffs {
                out.add_term(i1 + i2, j1 + j2, c1 * c2);
            }
        }
        Ok(out)
    }

    /// `c · x^dx y^dy · self`.
    pub fn shifted(&self, dx: usize, dy: usize, c: &Rational) -> Self {
        let mut out = Self::zero(self.bounds);
        for (&(i, j), v) in &self.coeffs {
            out.add_term(i + dx, j + dy, v * c);
        }
        out
    }

    /// `f(x, -y)`.
    pub fn negate_y(&self) -> Self {
        let mut out = self.clone();
        for (&(_, j), c) in out.coeffs.iter_mut() {
            if j % 2 == 1 {
                *c = -c.clone();
            }
        }
        out
    }

    /// Multiplicative inverse as a truncated series; `None` when the
    /// constant term vanishes.
    pub fn inverse(&self) -> Option<Self> {
        let c0 = self.coeff(0, 0);
        if c0.is_zero() {
            return None;
        }
        let (bx, by) = self.bounds;
        let mut g: BTreeMap<(usize, usize), Rational> = BTreeMap::new();
        for i in 0..=bx {
            for j in 0..=by {
                let mut acc = if (i, j) == (0, 0) { Rational::one() } else { Rational::zero() };
                for (&(fi, fj), fc) in &self.coeffs {
                    if (fi, fj) == (0, 0) || fi > i || fj > j {
                        continue;
                    }
                    if let Some(gc) = g.get(&(i - fi, j - fj)) {
                        acc -= fc * gc;
                    }
                }
                let v = acc / &c0;
                if !v.is_zero() {
                    g.insert((i, j), v);
                }
            }
        }
        Some(BivarPoly { coeffs: g, bounds: self.bounds })
    }
}

impl fmt::Display for BivarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        for (n, (&(i, j), c)) in self.coeffs.iter().enumerate() {
            let mut body = Vec::new();
            if i > 0 {
                body.push(if i == 1 { "x".to_string() } else { format!("x^{i}") });
            }
            if j > 0 {
                body.push(if j == 1 { "y".to_string() } else { format!("y^{j}") });
            }
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if n == 0 {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if body.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", body.join("*"))?;
            } else {
                write!(f, "{mag}*{}", body.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Polynomial in one variable `z`, truncated above `bound`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnivarPoly {
    coeffs: Vec<Rational>,
    bound: usize,
}

impl UnivarPoly {
    pub fn new(mut coeffs: Vec<Rational>, bound: usize) -> Self {
        coeffs.truncate(bound + 1);
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UnivarPoly { coeffs, bound }
    }

    pub fn one(bound: usize) -> Self {
        Self::new(vec![Rational::one()], bound)
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn coeff(&self, r: usize) -> Rational {
        self.coeffs.get(r).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.bound != other.bound {
            return Err(MzvError::BoundMismatch((self.bound, 0), (other.bound, 0)));
        }
        let mut out = vec![Rational::zero(); self.bound + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j <= self.bound {
                    out[i + j] += a * b;
                }
            }
        }
        Ok(Self::new(out, self.bound))
    }

    /// `h(-z)`.
    pub fn negate_z(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(r, c)| if r % 2 == 1 { -c.clone() } else { c.clone() })
            .collect();
        Self::new(coeffs, self.bound)
    }

    /// `h(αx + βy)` as a bivariate polynomial truncated at `bounds`.
    ///
    /// Exact below the bounds as long as `self.bound ≥ bounds.0 + bounds.1`.
    pub fn substitute_linear(&self, alpha: &Rational, beta: &Rational, bounds: Bounds) -> BivarPoly {
        let lin = BivarPoly::from_terms(
            [(1, 0, alpha.clone()), (0, 1, beta.clone())],
            bounds,
        );
        let mut power = BivarPoly::one(bounds);
        let mut out = BivarPoly::zero(bounds);
        for (r, c) in self.coeffs.iter().enumerate() {
            if r > 0 {
                power = power.mul(&lin).expect("same bounds");
            }
            if power.is_zero() {
                break;
            }
            out = out.add(&power.scalar_mul(c)).expect("same bounds");
        }
        out
    }
}

impl fmt::Display for UnivarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<(usize, usize, Rational)> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(r, c)| (r, 0, c.clone()))
            .collect();
        let as_x = BivarPoly::from_terms(terms, (self.bound, 0)).to_string();
        f.write_str(&as_x.replace('x', "z"))
    }
}

/// 2×2 matrix of truncated polynomials sharing one pair of bounds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat2 {
    entries: [BivarPoly; 4],
}

impl Mat2 {
    /// `[[e00, e01], [e10, e11]]`.
    pub fn new(e00: BivarPoly, e01: BivarPoly, e10: BivarPoly, e11: BivarPoly) -> Result<Self> {
        for e in [&e01, &e10, &e11] {
            e00.check(e)?;
        }
        Ok(Mat2 { entries: [e00, e01, e10, e11] })
    }

    pub fn entry(&self, row: usize, col: usize) -> &BivarPoly {
        &self.entries[2 * row + col]
    }

    pub fn scalar_mul(&self, s: &BivarPoly) -> Result<Self> {
        let [a, b, c, d] = &self.entries;
        Mat2::new(a.mul(s)?, b.mul(s)?, c.mul(s)?, d.mul(s)?)
    }

    pub fn mul_vec(&self, v: &[BivarPoly; 2]) -> Result<[BivarPoly; 2]> {
        let [a, b, c, d] = &self.entries;
        Ok([
            a.mul(&v[0])?.add(&b.mul(&v[1])?)?,
            c.mul(&v[0])?.add(&d.mul(&v[1])?)?,
        ])
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let col0 = self.mul_vec(&[other.entry(0, 0).clone(), other.entry(1, 0).clone()])?;
        let col1 = self.mul_vec(&[other.entry(0, 1).clone(), other.entry(1, 1).clone()])?;
        let [e00, e10] = col0;
        let [e01, e11] = col1;
        Mat2::new(e00, e01, e10, e11)
    }

    pub fn determinant(&self) -> Result<BivarPoly> {
        let [a, b, c, d] = &self.entries;
        a.mul(d)?.sub(&b.mul(c)?)
    }

    /// Adjugate over the series inverse of the determinant.
    pub fn inverse(&self) -> Option<Self> {
        let det_inv = self.determinant().ok()?.inverse()?;
        let [a, b, c, d] = &self.entries;
        Mat2::new(d.clone(), b.neg(), c.neg(), a.clone())
            .and_then(|adj| adj.scalar_mul(&det_inv))
            .ok()
    }

    pub fn identity(bounds: Bounds) -> Self {
        let (o, z) = (BivarPoly::one(bounds), BivarPoly::zero(bounds));
        Mat2 { entries: [o.clone(), z.clone(), z, o] }
    }
}

/// `U_l`.
pub fn u_matrix(l: u64, params: &AbcParams, bounds: Bounds) -> Mat2 {
    let diag = BivarPoly::from_terms(
        [(0, 0, Rational::one()), (0, 1, inv_pow(l, params.c()))],
        bounds,
    );
    let upper = BivarPoly::monomial(inv_pow(l, params.a()), 1, 0, bounds);
    let lower = BivarPoly::monomial(inv_pow(l, params.b()), 1, 0, bounds);
    Mat2::new(diag.clone(), upper, lower, diag).expect("same bounds")
}

/// `1 / ((1 - (y-x)/l^c)(1 - (y+x)/l^c))` as the geometric series
/// `Σ w^n` with `w = 2y/l^c - (y² - x²)/l^{2c}`.
pub fn v_prefactor(l: u64, params: &AbcParams, bounds: Bounds) -> BivarPoly {
    let lc = inv_pow(l, params.c());
    let lc2 = &lc * &lc;
    let w = BivarPoly::from_terms(
        [
            (0, 1, Rational::from_integer(BigInt::from(2)) * &lc),
            (0, 2, -lc2.clone()),
            (2, 0, lc2),
        ],
        bounds,
    );
    let mut out = BivarPoly::one(bounds);
    let mut power = BivarPoly::one(bounds);
    // w has no constant term, so w^n vanishes once n exceeds the total bound
    for _ in 0..(bounds.0 + bounds.1) {
        power = power.mul(&w).expect("same bounds");
        if power.is_zero() {
            break;
        }
        out = out.add(&power).expect("same bounds");
    }
    out
}

/// `V_l` in closed form.
pub fn v_matrix(l: u64, params: &AbcParams, bounds: Bounds) -> Mat2 {
    let lc = inv_pow(l, params.c());
    let diag = BivarPoly::from_terms([(0, 0, Rational::one()), (0, 1, -lc)], bounds);
    let upper = BivarPoly::monomial(inv_pow(l, params.a()), 1, 0, bounds);
    let lower = BivarPoly::monomial(inv_pow(l, params.b()), 1, 0, bounds);
    Mat2::new(diag.clone(), upper, lower, diag)
        .and_then(|m| m.scalar_mul(&v_prefactor(l, params, bounds)))
        .expect("same bounds")
}

/// `V_l` computed as the series inverse of
/// `[[1 - y/l^c, -x/l^a], [-x/l^b, 1 - y/l^c]]`, without using `a + b = 2c`.
pub fn v_matrix_by_inversion(l: u64, params: &AbcParams, bounds: Bounds) -> Mat2 {
    let lc = inv_pow(l, params.c());
    let diag = BivarPoly::from_terms([(0, 0, Rational::one()), (0, 1, -lc)], bounds);
    let upper = BivarPoly::monomial(-inv_pow(l, params.a()), 1, 0, bounds);
    let lower = BivarPoly::monomial(-inv_pow(l, params.b()), 1, 0, bounds);
    Mat2::new(diag.clone(), upper, lower, diag)
        .expect("same bounds")
        .inverse()
        .expect("constant term of the determinant is 1")
}

fn unit_column(bounds: Bounds) -> [BivarPoly; 2] {
    [BivarPoly::one(bounds), BivarPoly::zero(bounds)]
}

/// `(F_m, G_m)` from `U_m ⋯ U_1 (1, 0)ᵀ`.
pub fn recursion_fg(m: u64, params: &AbcParams, bounds: Bounds) -> (BivarPoly, BivarPoly) {
    let [mut f, mut g] = unit_column(bounds);
    for l in 1..=m {
        let (ya, xa, xb) = (inv_pow(l, params.c()), inv_pow(l, params.a()), inv_pow(l, params.b()));
        // U_l applied without forming the matrix: shifts only
        let nf = f.add(&f.shifted(0, 1, &ya)).and_then(|t| t.add(&g.shifted(1, 0, &xa)));
        let ng = g.add(&g.shifted(0, 1, &ya)).and_then(|t| t.add(&f.shifted(1, 0, &xb)));
        f = nf.expect("same bounds");
        g = ng.expect("same bounds");
    }
    (f, g)
}

/// `(F★_m, G★_m)` from `V_m ⋯ V_1 (1, 0)ᵀ`.
pub fn recursion_fg_star(m: u64, params: &AbcParams, bounds: Bounds) -> (BivarPoly, BivarPoly) {
    let mut v = unit_column(bounds);
    for l in 1..=m {
        v = v_matrix(l, params, bounds).mul_vec(&v).expect("same bounds");
    }
    let [f, g] = v;
    (f, g)
}

/// Same as [`recursion_fg_star`] but with each `V_l` obtained by series
/// matrix inversion.
pub fn recursion_fg_star_by_inversion(m: u64, params: &AbcParams, bounds: Bounds) -> (BivarPoly, BivarPoly) {
    let mut v = unit_column(bounds);
    for l in 1..=m {
        v = v_matrix_by_inversion(l, params, bounds)
            .mul_vec(&v)
            .expect("same bounds");
    }
    let [f, g] = v;
    (f, g)
}

/// `H_m(z) = Π_{l=1..m} (1 + z/l^c)`.
pub fn h_poly(m: u64, c: u32, bound: usize) -> UnivarPoly {
    let mut h = UnivarPoly::one(bound);
    for l in 1..=m {
        let factor = UnivarPoly::new(vec![Rational::one(), inv_pow(l, c)], bound);
        h = h.mul(&factor).expect("same bound");
    }
    h
}

/// `H★_m(z) = Π_{l=1..m} (1 - z/l^c)^{-1}`, truncated.
pub fn h_star_poly(m: u64, c: u32, bound: usize) -> UnivarPoly {
    let mut h = UnivarPoly::one(bound);
    for l in 1..=m {
        let ratio = inv_pow(l, c);
        let mut term = Rational::one();
        let geometric: Vec<Rational> = (0..=bound)
            .map(|_| {
                let cur = term.clone();
                term *= &ratio;
                cur
            })
            .collect();
        h = h.mul(&UnivarPoly::new(geometric, bound)).expect("same bound");
    }
    h
}

/// Outcome of a coefficient-wise comparison of two truncated series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyIdentityReport {
    pub params: AbcParams,
    pub m: u64,
    pub bounds: Bounds,
    pub lhs: BivarPoly,
    pub rhs: BivarPoly,
    pub equal: bool,
}

impl PolyIdentityReport {
    /// Coefficients where the two sides differ.
    pub fn mismatches(&self) -> Vec<(usize, usize)> {
        let mut keys: Vec<(usize, usize)> = self.lhs.terms().map(|(k, _)| k).collect();
        keys.extend(self.rhs.terms().map(|(k, _)| k));
        keys.sort_unstable();
        keys.dedup();
        keys.into_iter()
            .filter(|&(i, j)| self.lhs.coeff(i, j) != self.rhs.coeff(i, j))
            .collect()
    }
}

fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `F★_m(x,y) = F_m(x,-y) · H★_m(y-x) · H★_m(y+x)`.
pub fn check_gen_identity(m: u64, params: &AbcParams, bounds: Bounds) -> PolyIdentityReport {
    let (f, _) = recursion_fg(m, params, bounds);
    let (f_star, _) = recursion_fg_star(m, params, bounds);
    let hs = h_star_poly(m, params.c(), bounds.0 + bounds.1);
    let rhs = f
        .negate_y()
        .mul(&hs.substitute_linear(&int(-1), &int(1), bounds))
        .and_then(|t| t.mul(&hs.substitute_linear(&int(1), &int(1), bounds)))
        .expect("same bounds");
    let equal = f_star == rhs;
    PolyIdentityReport { params: *params, m, bounds, lhs: f_star, rhs, equal }
}

/// `H★_m(z) · H_m(-z) = 1` up to degree `bound`.
pub fn check_inverse_relation(m: u64, c: u32, bound: usize) -> bool {
    let prod = h_star_poly(m, c, bound)
        .mul(&h_poly(m, c, bound).negate_z())
        .expect("same bound");
    prod == UnivarPoly::one(bound)
}

/// The symmetric form `F★_m(x,y) / H★_m(x+y) = F_m(x,-y) / H_m(x-y)`, checked
/// without division as `F★_m(x,y) · H_m(x-y) · H_m(-x-y) = F_m(x,-y)`.
///
/// `equal` also requires [`check_inverse_relation`] to hold at degree
/// `bounds.0 + bounds.1`.
pub fn check_symmetric_form(m: u64, params: &AbcParams, bounds: Bounds) -> PolyIdentityReport {
    let (f, _) = recursion_fg(m, params, bounds);
    let (f_star, _) = recursion_fg_star(m, params, bounds);
    let total = bounds.0 + bounds.1;
    let h = h_poly(m, params.c(), total);
    let lhs = f_star
        .mul(&h.substitute_linear(&int(1), &int(-1), bounds))
        .and_then(|t| t.mul(&h.substitute_linear(&int(-1), &int(-1), bounds)))
        .expect("same bounds");
    let rhs = f.negate_y();
    let equal = lhs == rhs && check_inverse_relation(m, params.c(), total);
    PolyIdentityReport { params: *params, m, bounds, lhs, rhs, equal }
}

/// A sum read off a generating series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtractedSum {
    pub kind: SumKind,
    pub p: usize,
    pub q: usize,
    pub value: Rational,
}

/// The four series for one truncation `m`.
#[derive(Clone, Debug)]
pub struct GeneratingSeries {
    pub f: BivarPoly,
    pub g: BivarPoly,
    pub f_star: BivarPoly,
    pub g_star: BivarPoly,
}

impl GeneratingSeries {
    pub fn compute(m: u64, params: &AbcParams, bounds: Bounds) -> Self {
        let (f, g) = recursion_fg(m, params, bounds);
        let (f_star, g_star) = recursion_fg_star(m, params, bounds);
        GeneratingSeries { f, g, f_star, g_star }
    }

    /// Coefficient of `x^{2p} y^q` (for `s`) or `x^{2p+1} y^q` (for `t`).
    pub fn sum(&self, kind: SumKind, p: usize, q: usize) -> Result<Rational> {
        let (series, i) = match kind {
            SumKind::S => (&self.f, 2 * p),
            SumKind::SStar => (&self.f_star, 2 * p),
            SumKind::T => (&self.g, 2 * p + 1),
            SumKind::TStar => (&self.g_star, 2 * p + 1),
        };
        let bounds = series.bounds();
        if i > bounds.0 || q > bounds.1 {
            return Err(MzvError::OutOfBounds { p, q, bounds });
        }
        Ok(series.coeff(i, q))
    }

    /// `F`, `F★` carry only even powers of `x`; `G`, `G★` only odd ones.
    pub fn parity_ok(&self) -> bool {
        let even = |p: &BivarPoly| p.terms().all(|((i, _), _)| i % 2 == 0);
        let odd = |p: &BivarPoly| p.terms().all(|((i, _), _)| i % 2 == 1);
        even(&self.f) && even(&self.f_star) && odd(&self.g) && odd(&self.g_star)
    }
}

/// Read every `s, t, s★, t★` with `p ≤ p_max`, `q ≤ q_max`.
pub fn extract_sums(series: &GeneratingSeries, p_max: usize, q_max: usize) -> Result<Vec<ExtractedSum>> {
    let mut out = Vec::new();
    for kind in [SumKind::S, SumKind::T, SumKind::SStar, SumKind::TStar] {
        for p in 0..=p_max {
            for q in 0..=q_max {
                let value = series.sum(kind, p, q)?;
                out.push(ExtractedSum { kind, p, q, value });
            }
        }
    }
    Ok(out)
}
