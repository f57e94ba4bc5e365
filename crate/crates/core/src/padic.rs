//! Finite-level p-adic q-integrals.
//!
//! The q-Haar distribution `μ_q(a + p^n Z_p) = q^a / [p^n]_q` turns the
//! p-adic q-integral of `f` into the limit of Riemann sums
//! `(1/[p^n]_q) Σ_{ξ<p^n} f(ξ) q^ξ`; the fermionic integral uses `-q` in
//! place of `q`. Everything here is computed at a finite level `n`, in exact
//! rational arithmetic, and only then measured p-adically.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::genocchi::closed_form;
use crate::qcore::rational::{self, Rational};
use crate::qcore::{QAlgebra, RationalAlgebra};

/// Largest admissible `p^n` for a level sum.
pub const LEVEL_CAP: u64 = 1_000_000;
/// Largest level accepted by [`convergence_report`].
pub const MAX_REPORT_LEVEL: u32 = 6;

const CHUNK: u64 = 512;

/// A p-adic valuation; `Infinite` is the valuation of zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Valuation {
    Finite(i64),
    #[serde(with = "infinite")]
    Infinite,
}

mod infinite {
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str("inf")
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<(), D::Error> {
        match String::deserialize(d)?.as_str() {
            "inf" => Ok(()),
            other => Err(D::Error::custom(format!("expected \"inf\", got {other:?}"))),
        }
    }
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    pub fn is_at_least(self, bound: i64) -> bool {
        self >= Valuation::Finite(bound)
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

fn check_prime(p: u64) -> Result<()> {
    let prime = p > 2 && !p.is_multiple_of(2) && (3..).step_by(2).take_while(|d: &u64| d * d <= p).all(|d| !p.is_multiple_of(d));
    if prime {
        Ok(())
    } else {
        Err(Error::InvalidPrime(p))
    }
}

fn strip(n: &BigInt, p: &BigInt) -> (i64, BigInt) {
    let mut v = 0;
    let mut n = n.clone();
    loop {
        let (quot, rem) = n.div_rem(p);
        if !rem.is_zero() {
            return (v, n);
        }
        n = quot;
        v += 1;
    }
}

/// The p-adic valuation of `r`, normalized so that `v_p(p) = 1`.
pub fn vp(r: &Rational, p: u64) -> Result<Valuation> {
    check_prime(p)?;
    if r.is_zero() {
        return Ok(Valuation::Infinite);
    }
    let pb = BigInt::from(p);
    let (vn, _) = strip(r.numer(), &pb);
    let (vd, _) = strip(r.denom(), &pb);
    Ok(Valuation::Finite(vn - vd))
}

/// `p^v · u` with `u` a unit known modulo `p^N`, or zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicNumber {
    p: u64,
    precision: u32,
    valuation: i64,
    /// `None` for zero.
    unit: Option<BigInt>,
}

impl PadicNumber {
    pub fn zero(p: u64, precision: u32) -> Self {
        Self { p, precision, valuation: 0, unit: None }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    /// Relative precision `N`: the unit is known modulo `p^N`.
    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn valuation(&self) -> Valuation {
        match self.unit {
            None => Valuation::Infinite,
            Some(_) => Valuation::Finite(self.valuation),
        }
    }

    pub fn unit(&self) -> Option<&BigInt> {
        self.unit.as_ref()
    }

    pub fn is_zero(&self) -> bool {
        self.unit.is_none()
    }

    fn modulus(&self, digits: u32) -> BigInt {
        num_traits::pow(BigInt::from(self.p), digits as usize)
    }

    /// Builds `p^v · s` from an arbitrary integer `s` known modulo
    /// `p^digits`, renormalizing the valuation.
    fn normalize(p: u64, v: i64, s: BigInt, digits: u32) -> Self {
        let m = num_traits::pow(BigInt::from(p), digits as usize);
        let s = s.mod_floor(&m);
        if s.is_zero() {
            return Self::zero(p, digits);
        }
        let (k, u) = strip(&s, &BigInt::from(p));
        let rel = digits - k as u32;
        let u = u.mod_floor(&num_traits::pow(BigInt::from(p), rel as usize));
        Self { p, precision: rel, valuation: v + k, unit: Some(u) }
    }

    fn check_same_prime(&self, other: &Self) -> Result<()> {
        if self.p != other.p {
            return Err(Error::ConfigInvalid(format!("p-adic primes differ: {} vs {}", self.p, other.p)));
        }
        Ok(())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same_prime(other)?;
        let digits = self.precision.min(other.precision);
        match (&self.unit, &other.unit) {
            (Some(a), Some(b)) => {
                Ok(Self::normalize(self.p, self.valuation + other.valuation, a * b, digits))
            }
            _ => Ok(Self::zero(self.p, digits)),
        }
    }

    pub fn neg(&self) -> Self {
        match &self.unit {
            None => self.clone(),
            Some(u) => Self::normalize(self.p, self.valuation, -u, self.precision),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_prime(other)?;
        let (a, b) = match (&self.unit, &other.unit) {
            (None, _) => return Ok(other.clone()),
            (_, None) => return Ok(self.clone()),
            (Some(a), Some(b)) => (a, b),
        };
        let v = self.valuation.min(other.valuation);
        let abs_prec = (self.valuation + self.precision as i64).min(other.valuation + other.precision as i64);
        let shift = |u: &BigInt, w: i64| u * num_traits::pow(BigInt::from(self.p), (w - v) as usize);
        let s = shift(a, self.valuation) + shift(b, other.valuation);
        Ok(Self::normalize(self.p, v, s, (abs_prec - v) as u32))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// Inverse of a nonzero number; precision is preserved.
    pub fn inv(&self) -> Result<Self> {
        let u = self.unit.as_ref().ok_or(Error::DivisionByZero)?;
        let m = self.modulus(self.precision);
        let inv = mod_inverse(u, &m).expect("units are invertible");
        Ok(Self { p: self.p, precision: self.precision, valuation: -self.valuation, unit: Some(inv) })
    }
}

impl fmt::Display for PadicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.unit {
            None => write!(f, "O({}^{})", self.p, self.precision),
            Some(u) => write!(f, "{}^{} * {} + O({}^{})", self.p, self.valuation, u, self.p, self.valuation + self.precision as i64),
        }
    }
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let g = a.extended_gcd(m);
    g.gcd.is_one().then(|| g.x.mod_floor(m))
}

/// `r = p^v · u` with `u` reduced modulo `p^N` through the inverse of the
/// p-free part of the denominator.
pub fn padic_reduce(r: &Rational, p: u64, precision: u32) -> Result<PadicNumber> {
    check_prime(p)?;
    if precision == 0 {
        return Err(Error::ConfigInvalid("p-adic precision must be at least 1".into()));
    }
    if r.is_zero() {
        return Ok(PadicNumber::zero(p, precision));
    }
    let pb = BigInt::from(p);
    let (vn, num) = strip(r.numer(), &pb);
    let (vd, den) = strip(r.denom(), &pb);
    let m = num_traits::pow(pb, precision as usize);
    let inv = mod_inverse(&den, &m).expect("p-free denominator is a unit");
    Ok(PadicNumber { p, precision, valuation: vn - vd, unit: Some((num * inv).mod_floor(&m)) })
}

fn check_q(p: u64, q: &Rational) -> Result<()> {
    if !vp(&(Rational::one() - q), p)?.is_at_least(1) {
        return Err(Error::QNotPadicallyClose(q.to_string()));
    }
    Ok(())
}

fn level_size(p: u64, n: u32) -> Result<u64> {
    let mut m: u64 = 1;
    for _ in 0..n {
        m = m.checked_mul(p).filter(|&m| m <= LEVEL_CAP).ok_or_else(|| Error::LevelTooLarge(format!("{p}^{n}")))?;
    }
    Ok(m)
}

/// `[m]_q = 1 + q + ... + q^{m-1}`.
fn q_integer(m: u64, q: &Rational) -> Rational {
    if q.is_one() {
        return rational::int(m as i64);
    }
    let qm = rational::rational_pow(q, m as i64).expect("nonzero q");
    (Rational::one() - qm) / (Rational::one() - q)
}

/// `μ_q(a + p^n Z_p) = q^a / [p^n]_q`.
pub fn qhaar_measure(a: u64, n: u32, p: u64, q: &Rational) -> Result<Rational> {
    check_prime(p)?;
    check_q(p, q)?;
    let m = num_traits::pow(BigInt::from(p), n as usize);
    if BigInt::from(a) >= m {
        return Err(Error::ResidueOutOfRange { residue: a.to_string(), modulus: m.to_string() });
    }
    let m = m.to_u64().ok_or_else(|| Error::LevelTooLarge(format!("{p}^{n}")))?;
    Ok(rational::rational_pow(q, a as i64)? / q_integer(m, q))
}

/// The integrand `f(ξ) = q^{(h-1)ξ} [x+ξ]_{q^α}^degree`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntegrandSpec {
    pub degree: u32,
    #[serde(with = "rational::serde_rational")]
    pub x: Rational,
    pub alpha: u32,
    pub h: u32,
}

impl IntegrandSpec {
    pub fn new(degree: u32, x: Rational, alpha: u32, h: u32) -> Self {
        Self { degree, x, alpha, h }
    }

    fn shift(&self) -> Result<u64> {
        rational::to_i64(&self.x)
            .filter(|&x| x >= 0)
            .map(|x| x as u64)
            .ok_or_else(|| Error::NonIntegralShift(self.x.to_string()))
    }

    fn check(&self) -> Result<u64> {
        if self.alpha == 0 {
            return Err(Error::ConfigInvalid("alpha must be at least 1".into()));
        }
        self.shift()
    }
}

/// `Σ_{ξ<m} (sign·y)^ξ` for `y = u/w`, returned as the integer
/// `Σ_ξ (sign·u)^ξ w^{m-1-ξ}` (the sum times `w^{m-1}`).
///
/// Chunks are summed in parallel and combined in index order.
fn scaled_geometric(u: &BigInt, w: &BigInt, sign: i8, m: u64) -> BigInt {
    let a = if sign < 0 { -u } else { u.clone() };
    let chunks: Vec<(u64, u64)> = (0..m).step_by(CHUNK as usize).map(|lo| (lo, (lo + CHUNK).min(m))).collect();
    let parts: Vec<BigInt> = chunks
        .par_iter()
        .map(|&(lo, hi)| {
            // Σ_{j<len} a^j w^{len-1-j} by Horner in `a`, then placed at
            // a^lo w^{m-hi}.
            let mut acc = BigInt::zero();
            let mut w_pow = BigInt::one();
            for _ in lo..hi {
                acc = acc * &a + &w_pow;
                w_pow *= w;
            }
            acc * num_traits::pow(a.clone(), lo as usize) * num_traits::pow(w.clone(), (m - hi) as usize)
        })
        .collect();
    parts.into_iter().fold(BigInt::zero(), |s, x| s + x)
}

/// `Σ_{ξ<M} ε^ξ q^{hξ} (1 - q^{α(x+ξ)})^d` exactly, with `ε = ±1`,
/// expanded binomially so each inner sum is geometric in `ξ` and summed
/// term by term.
fn level_numerator(spec: &IntegrandSpec, x: u64, sign: i8, m: u64, q: &Rational) -> Rational {
    let d = spec.degree;
    let u = q.numer();
    let w = q.denom();
    let mut total = Rational::zero();
    for k in 0..=d {
        let c = (spec.h + spec.alpha * k) as usize;
        let (uc, wc) = (num_traits::pow(u.clone(), c), num_traits::pow(w.clone(), c));
        let scaled = scaled_geometric(&uc, &wc, sign, m);
        let inner = Rational::new(scaled, num_traits::pow(wc, (m - 1) as usize));
        let shift = rational::rational_pow(q, (spec.alpha as u64 * k as u64 * x) as i64).expect("nonzero q");
        let mut coeff = Rational::from_integer(rational::binomial(d, k));
        if k % 2 == 1 {
            coeff = -coeff;
        }
        total += coeff * shift * inner;
    }
    total
}

fn one_minus_q_alpha_pow(spec: &IntegrandSpec, q: &Rational) -> Result<Rational> {
    let base = Rational::one() - rational::rational_pow(q, spec.alpha as i64)?;
    if base.is_zero() {
        return Err(Error::QOutOfDomain("q^alpha = 1".into()));
    }
    rational::rational_pow(&base, spec.degree as i64)
}

/// Level-`n` sum `(1/[p^n]_q) Σ_{ξ<p^n} q^{hξ} [x+ξ]_{q^α}^degree` of the
/// p-adic q-integral.
pub fn bosonic_level_integral(spec: &IntegrandSpec, n: u32, p: u64, q: &Rational) -> Result<Rational> {
    check_prime(p)?;
    check_q(p, q)?;
    let x = spec.check()?;
    let m = level_size(p, n)?;
    if q.is_one() {
        return Err(Error::QOutOfDomain("q = 1 makes [x]_{q^α} degenerate".into()));
    }
    let num = level_numerator(spec, x, 1, m, q);
    Ok(num / one_minus_q_alpha_pow(spec, q)? / q_integer(m, q))
}

/// Level-`n` sum `(1/[p^n]_{-q}) Σ_{ξ<p^n} (-1)^ξ q^{hξ} [x+ξ]_{q^α}^degree`
/// of the fermionic integral, with `[p^n]_{-q} = (1 + q^{p^n})/(1 + q)`.
pub fn fermionic_level_integral(spec: &IntegrandSpec, n: u32, p: u64, q: &Rational) -> Result<Rational> {
    check_prime(p)?;
    check_q(p, q)?;
    let x = spec.check()?;
    let m = level_size(p, n)?;
    if q.is_one() {
        return Err(Error::QOutOfDomain("q = 1 makes [x]_{q^α} degenerate".into()));
    }
    let num = level_numerator(spec, x, -1, m, q);
    let neg_bracket = (Rational::one() + rational::rational_pow(q, m as i64)?) / (Rational::one() + q);
    Ok(num / one_minus_q_alpha_pow(spec, q)? / neg_bracket)
}

/// The p-adic limit of the fermionic level sums:
/// `G̃_{degree+1}(x) / (degree+1)` evaluated exactly at the rational `q`.
pub fn fermionic_target(spec: &IntegrandSpec, q: &Rational) -> Result<Rational> {
    let x = spec.check()?;
    let alg = RationalAlgebra::new(q.clone());
    alg.check_generic_q()?;
    let n = spec.degree + 1;
    let g = closed_form(&alg, n, &rational::int(x as i64), &rational::int(spec.alpha as i64), spec.h)?;
    Ok(g / rational::int(n as i64))
}

/// Digits lost to the division by `(1 - q^α)^degree`.
pub fn precision_loss(spec: &IntegrandSpec, p: u64, q: &Rational) -> Result<i64> {
    let base = Rational::one() - rational::rational_pow(q, spec.alpha as i64)?;
    let v = vp(&base, p)?.finite().ok_or_else(|| Error::QOutOfDomain("q^alpha = 1".into()))?;
    Ok(spec.degree as i64 * v)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// Successive-difference valuations never decrease.
    Monotone,
    NonMonotone,
}

/// One level of a [`ConvergenceReport`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelEntry {
    #[serde(rename = "N")]
    pub level: u32,
    #[serde(with = "rational::serde_rational")]
    pub value: Rational,
    /// `v_p(value_N - value_{N-1})`; absent at the first level.
    pub diff_valuation: Option<Valuation>,
    /// `v_p(value_N - target)`.
    pub target_valuation: Valuation,
    /// `N - loss`, the valuation the target difference must reach.
    pub required: i64,
}

/// Measured Cauchy data of the fermionic level sums.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub p: u64,
    #[serde(with = "rational::serde_rational")]
    pub q: Rational,
    pub spec: IntegrandSpec,
    pub loss: i64,
    pub levels: Vec<LevelEntry>,
    #[serde(with = "rational::serde_rational")]
    pub target: Rational,
    pub verdict: Verdict,
    /// Every level reaches its required target valuation.
    pub target_ok: bool,
}

/// Fermionic level sums for `N = 1..=n_max` with their p-adic diagnostics.
pub fn convergence_report(spec: &IntegrandSpec, p: u64, q: &Rational, n_max: u32) -> Result<ConvergenceReport> {
    if n_max == 0 || n_max > MAX_REPORT_LEVEL {
        return Err(Error::ConfigInvalid(format!("levels must be in 1..={MAX_REPORT_LEVEL}, got {n_max}")));
    }
    check_prime(p)?;
    check_q(p, q)?;
    let target = fermionic_target(spec, q)?;
    let loss = precision_loss(spec, p, q)?;
    let mut levels: Vec<LevelEntry> = Vec::with_capacity(n_max as usize);
    for level in 1..=n_max {
        let value = fermionic_level_integral(spec, level, p, q)?;
        let diff_valuation = match levels.last() {
            Some(prev) => Some(vp(&(&value - &prev.value), p)?),
            None => None,
        };
        let target_valuation = vp(&(&value - &target), p)?;
        levels.push(LevelEntry { level, value, diff_valuation, target_valuation, required: level as i64 - loss });
    }
    let diffs: Vec<Valuation> = levels.iter().filter_map(|l| l.diff_valuation).collect();
    let verdict = if diffs.windows(2).all(|w| w[0] <= w[1]) { Verdict::Monotone } else { Verdict::NonMonotone };
    let target_ok = levels.iter().all(|l| l.target_valuation.is_at_least(l.required));
    Ok(ConvergenceReport { p, q: q.clone(), spec: spec.clone(), loss, levels, target, verdict, target_ok })
}
