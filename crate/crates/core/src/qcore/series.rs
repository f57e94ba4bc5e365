//! Truncated formal power series in `q` with exact rational coefficients.
//!
//! The series variable is `t` with `q = t^scale`, so `q^(e/scale)` lives at
//! integer index `e`. Coefficients of `t^0 ..= t^order` are tracked; every
//! operation returns exactly the coefficients the untruncated operation
//! would produce at those indices.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::numeric::PrecComplex;
use crate::qcore::rational::{self, Rational};

pub const DEFAULT_ORDER: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawSeries", into = "RawSeries")]
pub struct QSeries {
    scale: u64,
    order: usize,
    coeffs: Vec<Rational>,
}

#[derive(Serialize, Deserialize)]
struct RawSeries {
    scale: u64,
    order: usize,
    #[serde(with = "rational::serde_rational_vec")]
    coeffs: Vec<Rational>,
}

impl TryFrom<RawSeries> for QSeries {
    type Error = Error;

    fn try_from(raw: RawSeries) -> Result<Self> {
        if raw.coeffs.len() != raw.order + 1 {
            return Err(Error::ConfigInvalid(format!(
                "series of order {} needs {} coefficients, got {}",
                raw.order,
                raw.order + 1,
                raw.coeffs.len()
            )));
        }
        QSeries::from_coeffs(raw.scale, raw.order, raw.coeffs)
    }
}

impl From<QSeries> for RawSeries {
    fn from(s: QSeries) -> Self {
        RawSeries { scale: s.scale, order: s.order, coeffs: s.coeffs }
    }
}

/// Operation selector for [`series_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesOp {
    Add,
    Neg,
    Mul,
    Inv,
    Pow,
}

/// Second operand of [`series_arith`].
pub enum Operand<'a> {
    None,
    Series(&'a QSeries),
    Exponent(u64),
}

/// Dispatches one truncated-ring operation.
pub fn series_arith(op: SeriesOp, a: &QSeries, b: Operand<'_>) -> Result<QSeries> {
    match (op, b) {
        (SeriesOp::Add, Operand::Series(b)) => a.add(b),
        (SeriesOp::Mul, Operand::Series(b)) => a.mul(b),
        (SeriesOp::Neg, _) => Ok(a.neg()),
        (SeriesOp::Inv, _) => a.inv(),
        (SeriesOp::Pow, Operand::Exponent(k)) => Ok(a.pow(k)),
        (op, _) => Err(Error::ConfigInvalid(format!("{op:?} called with the wrong operand kind"))),
    }
}

/// `q^(e/scale)` truncated at `order`; zero when `e > order`.
pub fn series_monomial(e: i64, scale: u64, order: usize) -> Result<QSeries> {
    if e < 0 {
        return Err(Error::NegativeExponent(e));
    }
    let mut s = QSeries::zero(scale, order);
    if (e as u64) <= order as u64 {
        s.coeffs[e as usize] = Rational::one();
    }
    Ok(s)
}

impl QSeries {
    pub fn zero(scale: u64, order: usize) -> Self {
        assert!(scale >= 1 && order >= 1, "series needs scale >= 1 and order >= 1");
        Self { scale, order, coeffs: vec![Rational::zero(); order + 1] }
    }

    pub fn one(scale: u64, order: usize) -> Self {
        Self::constant(Rational::one(), scale, order)
    }

    pub fn constant(c: Rational, scale: u64, order: usize) -> Self {
        let mut s = Self::zero(scale, order);
        s.coeffs[0] = c;
        s
    }

    /// Builds a series from explicit coefficients; missing tail entries are
    /// zero, surplus ones are an error.
    pub fn from_coeffs(scale: u64, order: usize, mut coeffs: Vec<Rational>) -> Result<Self> {
        if scale == 0 || order == 0 {
            return Err(Error::ConfigInvalid("series needs scale >= 1 and order >= 1".into()));
        }
        if coeffs.len() > order + 1 {
            return Err(Error::OrderMismatch(coeffs.len() - 1, order));
        }
        coeffs.resize(order + 1, Rational::zero());
        Ok(Self { scale, order, coeffs })
    }

    pub fn from_i64s(scale: u64, order: usize, coeffs: &[i64]) -> Result<Self> {
        Self::from_coeffs(scale, order, coeffs.iter().map(|&c| rational::int(c)).collect())
    }

    pub fn scale(&self) -> u64 {
        self.scale
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, index: usize) -> &Rational {
        &self.coeffs[index]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// `max_e |coeff_e|`, the exact residual magnitude of a difference.
    pub fn max_abs_coeff(&self) -> Rational {
        self.coeffs.iter().map(|c| c.abs()).max().unwrap_or_else(Rational::zero)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.scale != other.scale {
            return Err(Error::ScaleMismatch(self.scale, other.scale));
        }
        if self.order != other.order {
            return Err(Error::OrderMismatch(self.order, other.order));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(self.with_coeffs(coeffs))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(self.with_coeffs(coeffs))
    }

    pub fn neg(&self) -> Self {
        self.with_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn scale_by(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.scale, self.order);
        }
        self.with_coeffs(self.coeffs.iter().map(|x| x * c).collect())
    }

    fn with_coeffs(&self, coeffs: Vec<Rational>) -> Self {
        Self { scale: self.scale, order: self.order, coeffs }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let k = self.order;
        let mut out = vec![Rational::zero(); k + 1];
        let rhs: Vec<(usize, &Rational)> =
            other.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for &(j, b) in &rhs {
                if i + j > k {
                    break;
                }
                out[i + j] += a * b;
            }
        }
        Ok(Self { scale: self.scale, order: k, coeffs: out })
    }

    /// Multiplicative inverse; needs a nonzero constant term.
    pub fn inv(&self) -> Result<Self> {
        let a0 = &self.coeffs[0];
        if a0.is_zero() {
            return Err(Error::NonUnitConstantTerm);
        }
        let inv0 = a0.recip();
        let k = self.order;
        let nz: Vec<(usize, &Rational)> =
            self.coeffs.iter().enumerate().skip(1).filter(|(_, c)| !c.is_zero()).collect();
        let mut out: Vec<Rational> = Vec::with_capacity(k + 1);
        out.push(inv0.clone());
        for e in 1..=k {
            let mut acc = Rational::zero();
            for &(i, a) in &nz {
                if i > e {
                    break;
                }
                acc += a * &out[e - i];
            }
            out.push(-(acc * &inv0));
        }
        Ok(Self { scale: self.scale, order: k, coeffs: out })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.mul(&other.inv()?)
    }

    pub fn pow(&self, k: u64) -> Self {
        let mut result = Self::one(self.scale, self.order);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base).expect("same shape");
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base).expect("same shape");
            }
        }
        result
    }

    /// `self / (1 - t^stride)^times` via running sums with the given stride.
    pub fn div_one_minus_monomial(&self, stride: usize, times: u32) -> Result<Self> {
        if stride == 0 {
            return Err(Error::NonUnitConstantTerm);
        }
        let mut coeffs = self.coeffs.clone();
        for _ in 0..times {
            for e in stride..=self.order {
                let prev = coeffs[e - stride].clone();
                coeffs[e] += prev;
            }
        }
        Ok(self.with_coeffs(coeffs))
    }

    /// `1 / (1 + t^stride)` built directly from the geometric expansion.
    pub fn inv_one_plus_monomial(stride: usize, scale: u64, order: usize) -> Self {
        let mut s = Self::zero(scale, order);
        if stride == 0 {
            s.coeffs[0] = rational::frac(1, 2);
            return s;
        }
        let mut sign = 1;
        for e in (0..=order).step_by(stride) {
            s.coeffs[e] = rational::int(sign);
            sign = -sign;
        }
        s
    }

    /// Re-expresses the series at a finer scale `new_scale` (a multiple of
    /// the current scale), stretching indices by `new_scale / scale`.
    pub fn rescale(&self, new_scale: u64, new_order: usize) -> Result<Self> {
        if !new_scale.is_multiple_of(self.scale) {
            return Err(Error::IncompatibleRescale { from: self.scale, to: new_scale });
        }
        let factor = (new_scale / self.scale) as usize;
        let mut s = Self::zero(new_scale, new_order);
        for (e, c) in self.coeffs.iter().enumerate() {
            let idx = e * factor;
            if idx > new_order {
                break;
            }
            s.coeffs[idx] = c.clone();
        }
        Ok(s)
    }

    /// Substitutes `q -> q^power` in place of the formal variable.
    pub fn substitute_power(&self, power: usize) -> Self {
        let mut s = Self::zero(self.scale, self.order);
        for (e, c) in self.coeffs.iter().enumerate() {
            let idx = e * power;
            if idx > self.order {
                break;
            }
            s.coeffs[idx] = c.clone();
        }
        s
    }
}

/// Evaluates the truncated series at a numeric `q0` with `|q0| < 1`.
///
/// Summation runs in ascending index. The omitted tail is
/// `O(|q0|^((order + 1) / scale))` for coefficients of moderate growth.
pub fn series_eval_numeric(a: &QSeries, q0: &PrecComplex) -> Result<PrecComplex> {
    let prec = q0.precision();
    if q0.abs_f64() >= 1.0 {
        return Err(Error::QOutOfDomain(format!("|q| = {} >= 1", q0.abs_f64())));
    }
    if q0.is_zero() {
        return Ok(PrecComplex::from_rational(a.coeff(0), prec));
    }
    let step = if a.scale == 1 {
        q0.clone()
    } else {
        q0.ln()?.div(&PrecComplex::from_i64(a.scale as i64, prec))?.exp()
    };
    let mut power = PrecComplex::one(prec);
    let mut acc = PrecComplex::zero(prec);
    for c in &a.coeffs {
        if !c.is_zero() {
            acc = acc.add(&PrecComplex::from_rational(c, prec).mul(&power));
        }
        power = power.mul(&step);
    }
    Ok(acc)
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let var = |e: usize| -> String {
            let g = num_integer::gcd(e as u64, self.scale);
            let (num, den) = (e as u64 / g, self.scale / g);
            match (num, den) {
                (0, _) => String::new(),
                (1, 1) => "q".into(),
                (n, 1) => format!("q^{n}"),
                (n, d) => format!("q^({n}/{d})"),
            }
        };
        for (e, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let v = var(e);
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let coeff_text = if mag.is_one() && !v.is_empty() {
                String::new()
            } else if mag.denom() == &BigInt::one() || v.is_empty() {
                mag.to_string()
            } else {
                format!("({mag})")
            };
            write!(f, "{coeff_text}{v}")?;
        }
        if first {
            f.write_str("0")?;
        }
        let tail = var(self.order + 1);
        write!(f, " + O({tail})")
    }
}
