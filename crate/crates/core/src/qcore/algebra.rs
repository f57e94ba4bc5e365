//! One interface over the three ways of realizing `q`.
//!
//! * [`SeriesAlgebra`]: `q` is a formal variable; values are [`QSeries`].
//! * [`RationalAlgebra`]: `q` is a fixed rational; values are exact
//!   [`Rational`]s. No `|q| < 1` requirement, which is what lets the p-adic
//!   module evaluate closed forms at `q = 1 + p`.
//! * [`NumericAlgebra`]: `q` is a fixed complex number with `|q| < 1`;
//!   values are [`PrecComplex`].
//!
//! Every algebra carries a base multiplier `c` and interprets `q_pow(e)` as
//! `(q^c)^e := q^(c·e)`. [`QAlgebra::rebase`] moves to the algebra of
//! `q^c`, which is how the identities evaluate objects at `q^a`.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::qcore::numeric::PrecComplex;
use crate::qcore::rational::{self, Rational};
use crate::qcore::series::{series_monomial, QSeries};

/// Size of a residual `LHS - RHS`.
#[derive(Clone, Debug, PartialEq)]
pub struct Residual {
    /// Exact fraction string for exact backends, full-precision decimal otherwise.
    pub text: String,
    pub magnitude: f64,
    pub exact: bool,
    pub is_zero: bool,
}

pub trait QAlgebra: Sync + Sized {
    type Value: Clone + Send + Sync;

    fn zero(&self) -> Self::Value;
    fn constant(&self, c: &Rational) -> Self::Value;
    fn add(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn sub(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn mul(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn scale(&self, a: &Self::Value, c: &Rational) -> Self::Value;
    fn div(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value>;
    fn is_zero(&self, a: &Self::Value) -> bool;
    fn residual(&self, a: &Self::Value) -> Residual;

    /// `(q^base)^e`.
    fn q_pow(&self, e: &Rational) -> Result<Self::Value>;

    /// `(-(q^base))^e`; exact algebras need an integer `e`.
    fn neg_q_pow(&self, e: &Rational) -> Result<Self::Value>;

    /// The same algebra with base `q^(base·c)`.
    fn rebase(&self, c: &Rational) -> Self;

    /// Rejects the points where the weighted objects are undefined
    /// (for example `q = 1`, where only limits make sense).
    fn check_generic_q(&self) -> Result<()> {
        Ok(())
    }

    fn one(&self) -> Self::Value {
        self.constant(&Rational::one())
    }

    fn neg(&self, a: &Self::Value) -> Self::Value {
        self.sub(&self.zero(), a)
    }

    fn powi(&self, a: &Self::Value, k: u32) -> Self::Value {
        let mut result = self.one();
        let mut base = a.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = self.mul(&result, &base);
            }
            k >>= 1;
            if k > 0 {
                base = self.mul(&base, &base);
            }
        }
        result
    }

    /// `1 / (1 + q^e)`.
    fn inv_one_plus_q_pow(&self, e: &Rational) -> Result<Self::Value> {
        let den = self.add(&self.one(), &self.q_pow(e)?);
        self.div(&self.one(), &den)
    }

    /// `a / (1 - q^e)^times`.
    fn div_one_minus_q_pow(&self, a: &Self::Value, e: &Rational, times: u32) -> Result<Self::Value> {
        let den = self.sub(&self.one(), &self.q_pow(e)?);
        let mut out = a.clone();
        for _ in 0..times {
            out = self.div(&out, &den)?;
        }
        Ok(out)
    }

    /// The weighted q-number `[x]_{q^w} = (1 - q^(w·x)) / (1 - q^w)`.
    fn bracket(&self, x: &Rational, w: &Rational) -> Result<Self::Value> {
        if x.is_zero() {
            return Ok(self.zero());
        }
        let num = self.sub(&self.one(), &self.q_pow(&(w * x))?);
        self.div_one_minus_q_pow(&num, w, 1)
    }

    /// `[x]_{q^w}^k`.
    fn bracket_pow(&self, x: &Rational, w: &Rational, k: u32) -> Result<Self::Value> {
        if k == 0 {
            return Ok(self.one());
        }
        Ok(self.powi(&self.bracket(x, w)?, k))
    }

    /// `v · [x]_{q^w}^k`.
    fn mul_bracket_pow(&self, v: &Self::Value, x: &Rational, w: &Rational, k: u32) -> Result<Self::Value> {
        Ok(self.mul(v, &self.bracket_pow(x, w, k)?))
    }

    /// `[x]_{-q^w} = (1 - (-q^w)^x) / (1 + q^w)`.
    fn neg_bracket(&self, x: &Rational, w: &Rational) -> Result<Self::Value> {
        if x.is_zero() {
            return Ok(self.zero());
        }
        let rebased = self.rebase(w);
        let num = rebased.sub(&rebased.one(), &rebased.neg_q_pow(x)?);
        let den = rebased.add(&rebased.one(), &rebased.q_pow(&Rational::one())?);
        rebased.div(&num, &den)
    }

    /// `[2]_{q^base} = 1 + q^base`.
    fn two_q(&self) -> Result<Self::Value> {
        Ok(self.add(&self.one(), &self.q_pow(&Rational::one())?))
    }
}

/// Formal `q` realized as `t^scale`, truncated at `t^order`.
#[derive(Clone, Debug)]
pub struct SeriesAlgebra {
    scale: u64,
    order: usize,
    base: Rational,
}

impl SeriesAlgebra {
    pub fn new(scale: u64, order: usize) -> Self {
        assert!(scale >= 1 && order >= 1);
        Self { scale, order, base: Rational::one() }
    }

    pub fn scale_factor(&self) -> u64 {
        self.scale
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Index of `(q^base)^e` on the `t` grid.
    pub fn index_of(&self, e: &Rational) -> Result<i64> {
        let idx = e * &self.base * rational::int(self.scale as i64);
        if !rational::is_integer(&idx) {
            return Err(Error::ScaleOverflow { exponent: (e * &self.base).to_string(), scale: self.scale });
        }
        if idx.is_negative() {
            return Err(Error::NegativeExponentInExactBackend((e * &self.base).to_string()));
        }
        rational::to_i64(&idx).ok_or_else(|| Error::ScaleOverflow { exponent: idx.to_string(), scale: self.scale })
    }

    fn monomial_index(&self, e: &Rational) -> Result<usize> {
        Ok(self.index_of(e)?.min(self.order as i64 + 1) as usize)
    }
}

impl QAlgebra for SeriesAlgebra {
    type Value = QSeries;

    fn zero(&self) -> QSeries {
        QSeries::zero(self.scale, self.order)
    }

    fn constant(&self, c: &Rational) -> QSeries {
        QSeries::constant(c.clone(), self.scale, self.order)
    }

    fn add(&self, a: &QSeries, b: &QSeries) -> QSeries {
        a.add(b).expect("series built by one algebra share their shape")
    }

    fn sub(&self, a: &QSeries, b: &QSeries) -> QSeries {
        a.sub(b).expect("series built by one algebra share their shape")
    }

    fn mul(&self, a: &QSeries, b: &QSeries) -> QSeries {
        a.mul(b).expect("series built by one algebra share their shape")
    }

    fn scale(&self, a: &QSeries, c: &Rational) -> QSeries {
        a.scale_by(c)
    }

    fn div(&self, a: &QSeries, b: &QSeries) -> Result<QSeries> {
        a.div(b)
    }

    fn is_zero(&self, a: &QSeries) -> bool {
        a.is_zero()
    }

    fn residual(&self, a: &QSeries) -> Residual {
        let m = a.max_abs_coeff();
        Residual { magnitude: rational::to_f64(&m), text: m.to_string(), exact: true, is_zero: m.is_zero() }
    }

    fn q_pow(&self, e: &Rational) -> Result<QSeries> {
        series_monomial(self.index_of(e)?, self.scale, self.order)
    }

    fn neg_q_pow(&self, e: &Rational) -> Result<QSeries> {
        let k = rational::to_i64(e).ok_or_else(|| {
            Error::BackendUnsupported(format!("(-q)^{e} is multivalued in the exact backend"))
        })?;
        let m = self.q_pow(e)?;
        Ok(if k % 2 == 0 { m } else { m.neg() })
    }

    fn rebase(&self, c: &Rational) -> Self {
        Self { base: &self.base * c, ..self.clone() }
    }

    fn inv_one_plus_q_pow(&self, e: &Rational) -> Result<QSeries> {
        let idx = self.monomial_index(e)?;
        Ok(QSeries::inv_one_plus_monomial(idx, self.scale, self.order))
    }

    fn div_one_minus_q_pow(&self, a: &QSeries, e: &Rational, times: u32) -> Result<QSeries> {
        let idx = self.monomial_index(e)?;
        a.div_one_minus_monomial(idx, times)
    }

    // (1 - q^{wx})^k is sparse, so the power is cheap; the division by
    // (1 - q^w)^k is k prefix-sum passes.
    fn bracket_pow(&self, x: &Rational, w: &Rational, k: u32) -> Result<QSeries> {
        if k == 0 {
            return Ok(self.one());
        }
        if x.is_zero() {
            return Ok(self.zero());
        }
        let num = self.sub(&self.one(), &self.q_pow(&(w * x))?);
        self.div_one_minus_q_pow(&self.powi(&num, k), w, k)
    }

    fn mul_bracket_pow(&self, v: &QSeries, x: &Rational, w: &Rational, k: u32) -> Result<QSeries> {
        if k == 0 {
            return Ok(v.clone());
        }
        if x.is_zero() {
            return Ok(self.zero());
        }
        let num = self.sub(&self.one(), &self.q_pow(&(w * x))?);
        self.div_one_minus_q_pow(&self.mul(v, &self.powi(&num, k)), w, k)
    }
}

/// `q` fixed to an exact rational value.
#[derive(Clone, Debug)]
pub struct RationalAlgebra {
    q: Rational,
    base: Rational,
}

impl RationalAlgebra {
    pub fn new(q: Rational) -> Self {
        Self { q, base: Rational::one() }
    }

    pub fn q(&self) -> &Rational {
        &self.q
    }

    fn integer_exponent(&self, e: &Rational) -> Result<i64> {
        let total = e * &self.base;
        rational::to_i64(&total).ok_or_else(|| Error::ScaleOverflow { exponent: total.to_string(), scale: 1 })
    }
}

impl QAlgebra for RationalAlgebra {
    type Value = Rational;

    fn zero(&self) -> Rational {
        Rational::zero()
    }

    fn constant(&self, c: &Rational) -> Rational {
        c.clone()
    }

    fn add(&self, a: &Rational, b: &Rational) -> Rational {
        a + b
    }

    fn sub(&self, a: &Rational, b: &Rational) -> Rational {
        a - b
    }

    fn mul(&self, a: &Rational, b: &Rational) -> Rational {
        a * b
    }

    fn scale(&self, a: &Rational, c: &Rational) -> Rational {
        a * c
    }

    fn div(&self, a: &Rational, b: &Rational) -> Result<Rational> {
        if b.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(a / b)
    }

    fn is_zero(&self, a: &Rational) -> bool {
        a.is_zero()
    }

    fn residual(&self, a: &Rational) -> Residual {
        let m = a.abs();
        Residual { magnitude: rational::to_f64(&m), text: m.to_string(), exact: true, is_zero: m.is_zero() }
    }

    fn q_pow(&self, e: &Rational) -> Result<Rational> {
        rational::rational_pow(&self.q, self.integer_exponent(e)?)
    }

    fn neg_q_pow(&self, e: &Rational) -> Result<Rational> {
        // (-(q^c))^e = (-1)^e q^(ce) needs e itself to be an integer.
        let e_int = rational::to_i64(e)
            .ok_or_else(|| Error::BackendUnsupported(format!("(-q)^{e} is multivalued in the exact backend")))?;
        let v = self.q_pow(e)?;
        Ok(if e_int % 2 == 0 { v } else { -v })
    }

    fn rebase(&self, c: &Rational) -> Self {
        Self { q: self.q.clone(), base: &self.base * c }
    }

    fn check_generic_q(&self) -> Result<()> {
        if self.q.is_zero() || self.q.abs().is_one() {
            return Err(Error::QOutOfDomain(format!("q = {} makes the weighted q-numbers degenerate", self.q)));
        }
        Ok(())
    }

    fn bracket(&self, x: &Rational, w: &Rational) -> Result<Rational> {
        if x.is_zero() {
            return Ok(Rational::zero());
        }
        let qw = self.q_pow(w)?;
        if qw.is_one() {
            return Err(Error::QOutOfDomain("q^w = 1 in an exact q-number".into()));
        }
        let num = Rational::one() - self.q_pow(&(w * x))?;
        Ok(num / (Rational::one() - qw))
    }
}

/// `q` fixed to a complex number with `0 < |q| < 1`, or exactly `q = 1`
/// for the limits that exist there.
#[derive(Clone, Debug)]
pub struct NumericAlgebra {
    q: PrecComplex,
    log_q: Option<PrecComplex>,
    base: Rational,
    prec: usize,
}

impl NumericAlgebra {
    pub fn new(q: PrecComplex) -> Result<Self> {
        let prec = q.precision();
        if q.is_zero() {
            return Err(Error::QOutOfDomain("q = 0".into()));
        }
        if q.is_one() {
            return Ok(Self { q, log_q: None, base: Rational::one(), prec });
        }
        let modulus = q.abs();
        if modulus.cmp_re(&PrecComplex::one(prec)) != std::cmp::Ordering::Less {
            return Err(Error::QOutOfDomain(format!("|q| = {} is not below 1", modulus.to_rounded_string(20))));
        }
        let log_q = q.ln()?;
        Ok(Self { q, log_q: Some(log_q), base: Rational::one(), prec })
    }

    pub fn precision(&self) -> usize {
        self.prec
    }

    pub fn q(&self) -> &PrecComplex {
        &self.q
    }

    pub fn base(&self) -> &Rational {
        &self.base
    }

    pub fn is_q_one(&self) -> bool {
        self.log_q.is_none()
    }

    /// `q^base` as a value.
    pub fn effective_q(&self) -> PrecComplex {
        self.q_pow(&Rational::one()).expect("numeric powers are total")
    }

    /// `|q|^base` as a real value.
    pub fn effective_modulus(&self) -> PrecComplex {
        match &self.log_q {
            None => PrecComplex::one(self.prec),
            Some(l) => {
                let re = PrecComplex::from_floats(l.real_part().clone(), astro_float::BigFloat::from_i64(0, self.prec), self.prec);
                re.mul(&PrecComplex::from_rational(&self.base, self.prec)).exp()
            }
        }
    }

    /// True when `q` is real and positive, so every `q^y` is real.
    pub fn is_real_positive(&self) -> bool {
        self.q.is_positive_real()
    }

    pub fn lift(&self, r: &Rational) -> PrecComplex {
        PrecComplex::from_rational(r, self.prec)
    }
}

impl QAlgebra for NumericAlgebra {
    type Value = PrecComplex;

    fn zero(&self) -> PrecComplex {
        PrecComplex::zero(self.prec)
    }

    fn constant(&self, c: &Rational) -> PrecComplex {
        PrecComplex::from_rational(c, self.prec)
    }

    fn add(&self, a: &PrecComplex, b: &PrecComplex) -> PrecComplex {
        a.add(b)
    }

    fn sub(&self, a: &PrecComplex, b: &PrecComplex) -> PrecComplex {
        a.sub(b)
    }

    fn mul(&self, a: &PrecComplex, b: &PrecComplex) -> PrecComplex {
        a.mul(b)
    }

    fn scale(&self, a: &PrecComplex, c: &Rational) -> PrecComplex {
        a.mul(&self.lift(c))
    }

    fn div(&self, a: &PrecComplex, b: &PrecComplex) -> Result<PrecComplex> {
        a.div(b)
    }

    fn is_zero(&self, a: &PrecComplex) -> bool {
        a.is_zero()
    }

    fn residual(&self, a: &PrecComplex) -> Residual {
        let m = a.abs();
        Residual { magnitude: m.re_f64(), text: m.to_decimal_string(), exact: false, is_zero: m.is_zero() }
    }

    fn q_pow(&self, e: &Rational) -> Result<PrecComplex> {
        if e.is_zero() {
            return Ok(PrecComplex::one(self.prec));
        }
        match &self.log_q {
            None => Ok(PrecComplex::one(self.prec)),
            Some(l) => Ok(l.mul(&self.lift(&(e * &self.base))).exp()),
        }
    }

    fn neg_q_pow(&self, e: &Rational) -> Result<PrecComplex> {
        let mq = self.effective_q().neg();
        if let Some(k) = rational::to_i64(e) {
            let v = mq.powi(k.unsigned_abs());
            return if k < 0 { v.recip() } else { Ok(v) };
        }
        mq.pow(&self.lift(e))
    }

    fn rebase(&self, c: &Rational) -> Self {
        Self { base: &self.base * c, ..self.clone() }
    }

    fn check_generic_q(&self) -> Result<()> {
        if self.is_q_one() {
            return Err(Error::QOutOfDomain("q = 1 is only accepted where a finite limit is documented".into()));
        }
        Ok(())
    }

    fn bracket(&self, x: &Rational, w: &Rational) -> Result<PrecComplex> {
        if self.is_q_one() {
            return Ok(self.lift(x));
        }
        if x.is_zero() {
            return Ok(self.zero());
        }
        let num = self.one().sub(&self.q_pow(&(w * x))?);
        let den = self.one().sub(&self.q_pow(w)?);
        num.div(&den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::rational::{frac, int};

    #[test]
    fn series_powers_respect_scale() {
        let alg = SeriesAlgebra::new(2, 8);
        assert_eq!(alg.index_of(&frac(1, 2)).unwrap(), 1);
        assert!(matches!(alg.q_pow(&frac(1, 3)), Err(Error::ScaleOverflow { .. })));
        assert!(matches!(alg.q_pow(&int(-1)), Err(Error::NegativeExponentInExactBackend(_))));
        let rebased = alg.rebase(&int(3));
        assert_eq!(rebased.index_of(&int(1)).unwrap(), 6);
    }

    #[test]
    fn rational_brackets() {
        let alg = RationalAlgebra::new(frac(1, 2));
        assert_eq!(alg.bracket(&int(3), &int(1)).unwrap(), frac(7, 4));
        assert_eq!(alg.neg_bracket(&int(2), &int(1)).unwrap(), frac(1, 2));
        assert!(alg.neg_bracket(&frac(1, 2), &int(1)).is_err());
        assert!(RationalAlgebra::new(int(1)).bracket(&int(2), &int(1)).is_err());
    }

    #[test]
    fn numeric_rejects_unit_disk_boundary() {
        assert!(NumericAlgebra::new(PrecComplex::from_i64(2, 128)).is_err());
        assert!(NumericAlgebra::new(PrecComplex::from_i64(-1, 128)).is_err());
        assert!(NumericAlgebra::new(PrecComplex::from_i64(1, 128)).is_ok());
    }

    #[test]
    fn numeric_rebase_composes_exponents() {
        let alg = NumericAlgebra::new(PrecComplex::from_rational(&frac(1, 2), 128)).unwrap();
        let v = alg.rebase(&int(3)).q_pow(&int(2)).unwrap();
        let expect = PrecComplex::from_rational(&frac(1, 64), 128);
        assert!(crate::qcore::numeric::close(&v, &expect, 1e-37));
        let m = alg.rebase(&int(2)).effective_modulus();
        assert!(crate::qcore::numeric::close(&m, &PrecComplex::from_rational(&frac(1, 4), 128), 1e-37));
    }
}
