//! Configurable-precision complex numbers on top of `astro-float`.
//!
//! Real and imaginary parts are binary floats with `prec` mantissa bits;
//! each real operation is correctly rounded (round-half-even). Complex
//! products and quotients are composed from those and carry the usual
//! few-ulp error.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;

use astro_float::{BigFloat, Consts, Radix, RoundingMode};

use crate::error::{Error, Result};
use crate::qcore::rational::{ComplexRational, Rational};

pub const DEFAULT_PRECISION: usize = 128;
pub const MIN_PRECISION: usize = 53;

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> =
        RefCell::new(Consts::new().expect("failed to allocate astro-float constant cache"));
}

fn with_consts<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

pub(crate) fn float_from_rational(r: &Rational, prec: usize) -> BigFloat {
    let guard = prec + 64;
    with_consts(|cc| {
        let n = BigFloat::parse(&r.numer().to_string(), Radix::Dec, guard, RM, cc);
        let d = BigFloat::parse(&r.denom().to_string(), Radix::Dec, guard, RM, cc);
        n.div(&d, prec, RM)
    })
}

pub(crate) fn float_from_f64(v: f64, prec: usize) -> BigFloat {
    BigFloat::from_f64(v, prec)
}

pub(crate) fn float_pi(prec: usize) -> BigFloat {
    with_consts(|cc| cc.pi(prec, RM))
}

pub(crate) fn float_to_f64(x: &BigFloat) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    // Cheap and plenty for tolerance comparisons: go through 20 significant digits.
    let digits = with_consts(|cc| x.format(Radix::Dec, RM, cc)).unwrap_or_default();
    digits.parse::<f64>().unwrap_or(f64::NAN)
}

pub(crate) fn float_exp(x: &BigFloat, prec: usize) -> BigFloat {
    with_consts(|cc| x.exp(prec, RM, cc))
}

pub(crate) fn float_ln(x: &BigFloat, prec: usize) -> BigFloat {
    with_consts(|cc| x.ln(prec, RM, cc))
}

fn float_cmp(a: &BigFloat, b: &BigFloat) -> Ordering {
    a.partial_cmp(b).unwrap_or(Ordering::Equal)
}

/// `re + i·im` at `prec` bits.
#[derive(Clone, Debug)]
pub struct PrecComplex {
    re: BigFloat,
    im: BigFloat,
    prec: usize,
}

impl PartialEq for PrecComplex {
    fn eq(&self, other: &Self) -> bool {
        self.re == other.re && self.im == other.im
    }
}

impl PrecComplex {
    pub fn zero(prec: usize) -> Self {
        Self::from_i64(0, prec)
    }

    pub fn one(prec: usize) -> Self {
        Self::from_i64(1, prec)
    }

    pub fn from_i64(v: i64, prec: usize) -> Self {
        Self { re: BigFloat::from_i64(v, prec), im: BigFloat::from_i64(0, prec), prec }
    }

    pub fn from_f64(v: f64, prec: usize) -> Self {
        Self::from_floats(float_from_f64(v, prec), BigFloat::from_i64(0, prec), prec)
    }

    pub fn from_rational(r: &Rational, prec: usize) -> Self {
        Self::from_floats(float_from_rational(r, prec), BigFloat::from_i64(0, prec), prec)
    }

    pub fn from_complex_rational(z: &ComplexRational, prec: usize) -> Self {
        Self::from_floats(float_from_rational(&z.re, prec), float_from_rational(&z.im, prec), prec)
    }

    pub(crate) fn from_floats(re: BigFloat, im: BigFloat, prec: usize) -> Self {
        Self { re, im, prec }
    }

    pub(crate) fn real_part(&self) -> &BigFloat {
        &self.re
    }

    pub fn precision(&self) -> usize {
        self.prec
    }

    pub fn with_precision(&self, prec: usize) -> Self {
        let mut re = self.re.clone();
        let mut im = self.im.clone();
        // Precision changes never fail for finite values.
        let _ = re.set_precision(prec, RM);
        let _ = im.set_precision(prec, RM);
        Self { re, im, prec }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// True for a real, strictly positive value.
    pub fn is_positive_real(&self) -> bool {
        self.is_real() && self.re.is_positive() && !self.re.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.im.is_zero() && self.re == BigFloat::from_i64(1, self.prec)
    }

    pub fn re_f64(&self) -> f64 {
        float_to_f64(&self.re)
    }

    pub fn im_f64(&self) -> f64 {
        float_to_f64(&self.im)
    }

    pub fn add(&self, o: &Self) -> Self {
        let p = self.prec;
        Self { re: self.re.add(&o.re, p, RM), im: self.im.add(&o.im, p, RM), prec: p }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let p = self.prec;
        Self { re: self.re.sub(&o.re, p, RM), im: self.im.sub(&o.im, p, RM), prec: p }
    }

    pub fn neg(&self) -> Self {
        Self { re: self.re.neg(), im: self.im.neg(), prec: self.prec }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let p = self.prec;
        if self.is_real() && o.is_real() {
            return Self { re: self.re.mul(&o.re, p, RM), im: BigFloat::from_i64(0, p), prec: p };
        }
        let re = self.re.mul(&o.re, p, RM).sub(&self.im.mul(&o.im, p, RM), p, RM);
        let im = self.re.mul(&o.im, p, RM).add(&self.im.mul(&o.re, p, RM), p, RM);
        Self { re, im, prec: p }
    }

    pub fn mul_i64(&self, k: i64) -> Self {
        self.mul(&Self::from_i64(k, self.prec))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        if o.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let p = self.prec;
        if o.is_real() {
            return Ok(Self { re: self.re.div(&o.re, p, RM), im: self.im.div(&o.re, p, RM), prec: p });
        }
        let den = o.norm_sqr_float();
        let re = self.re.mul(&o.re, p, RM).add(&self.im.mul(&o.im, p, RM), p, RM);
        let im = self.im.mul(&o.re, p, RM).sub(&self.re.mul(&o.im, p, RM), p, RM);
        Ok(Self { re: re.div(&den, p, RM), im: im.div(&den, p, RM), prec: p })
    }

    pub fn recip(&self) -> Result<Self> {
        Self::one(self.prec).div(self)
    }

    fn norm_sqr_float(&self) -> BigFloat {
        let p = self.prec;
        self.re.mul(&self.re, p, RM).add(&self.im.mul(&self.im, p, RM), p, RM)
    }

    pub(crate) fn abs_float(&self) -> BigFloat {
        if self.im.is_zero() {
            return self.re.abs();
        }
        if self.re.is_zero() {
            return self.im.abs();
        }
        self.norm_sqr_float().sqrt(self.prec, RM)
    }

    /// `|z|` as a real value.
    pub fn abs(&self) -> Self {
        Self::from_floats(self.abs_float(), BigFloat::from_i64(0, self.prec), self.prec)
    }

    pub fn abs_f64(&self) -> f64 {
        float_to_f64(&self.abs_float())
    }

    /// Principal argument in `(-π, π]`.
    pub(crate) fn arg_float(&self) -> BigFloat {
        let p = self.prec;
        if self.im.is_zero() {
            return if self.re.is_negative() && !self.re.is_zero() {
                float_pi(p)
            } else {
                BigFloat::from_i64(0, p)
            };
        }
        let pi = float_pi(p);
        if self.re.is_zero() {
            let half = pi.div(&BigFloat::from_i64(2, p), p, RM);
            return if self.im.is_negative() { half.neg() } else { half };
        }
        let base = with_consts(|cc| self.im.div(&self.re, p + 8, RM).atan(p, RM, cc));
        if self.re.is_positive() {
            base
        } else if self.im.is_negative() {
            base.sub(&pi, p, RM)
        } else {
            base.add(&pi, p, RM)
        }
    }

    /// Principal logarithm.
    pub fn ln(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroBase);
        }
        let p = self.prec;
        if self.is_positive_real() {
            return Ok(Self::from_floats(float_ln(&self.re, p), BigFloat::from_i64(0, p), p));
        }
        let modulus = float_ln(&self.abs_float(), p);
        Ok(Self::from_floats(modulus, self.arg_float(), p))
    }

    pub fn exp(&self) -> Self {
        let p = self.prec;
        let scale = float_exp(&self.re, p);
        if self.im.is_zero() {
            return Self::from_floats(scale, BigFloat::from_i64(0, p), p);
        }
        let (c, s) = with_consts(|cc| (self.im.cos(p, RM, cc), self.im.sin(p, RM, cc)));
        Self::from_floats(scale.mul(&c, p, RM), scale.mul(&s, p, RM), p)
    }

    /// `z^k` by binary powering, with `0^0 = 1`.
    pub fn powi(&self, k: u64) -> Self {
        let mut result = Self::one(self.prec);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Principal power `exp(s·Log z)`.
    pub fn pow(&self, s: &Self) -> Result<Self> {
        numeric_pow(self, s)
    }

    /// Orders two real values by their real parts.
    pub fn cmp_re(&self, other: &Self) -> Ordering {
        float_cmp(&self.re, &other.re)
    }

    /// Decimal rendering with every stored digit.
    pub fn to_decimal_string(&self) -> String {
        self.render(None)
    }

    /// Decimal rendering rounded to `digits` significant digits, trailing
    /// zeros removed.
    pub fn to_rounded_string(&self, digits: usize) -> String {
        self.render(Some(digits))
    }

    fn render(&self, digits: Option<usize>) -> String {
        let re = render_float(&self.re, digits);
        if self.im.is_zero() {
            return re;
        }
        let im = render_float(&self.im, digits);
        if self.re.is_zero() {
            return format!("{im}i");
        }
        match im.strip_prefix('-') {
            Some(mag) => format!("{re}-{mag}i"),
            None => format!("{re}+{im}i"),
        }
    }

    /// Number of decimal digits the mantissa can faithfully carry, minus a
    /// small guard for accumulated rounding.
    pub fn display_digits(prec: usize) -> usize {
        ((prec as f64) * std::f64::consts::LOG10_2).floor() as usize - 3
    }
}

impl fmt::Display for PrecComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal_string())
    }
}

/// `exp(s·Log z)` with the principal logarithm. Real positive `z` with real
/// `s` stays on the real line.
pub fn numeric_pow(z: &PrecComplex, s: &PrecComplex) -> Result<PrecComplex> {
    if z.is_zero() {
        return Err(Error::ZeroBase);
    }
    let p = z.prec.max(s.prec);
    if z.is_positive_real() && s.is_real() {
        let l = float_ln(&z.re, p);
        let v = float_exp(&l.mul(&s.re, p, RM), p);
        return Ok(PrecComplex::from_floats(v, BigFloat::from_i64(0, p), p));
    }
    Ok(s.with_precision(p).mul(&z.with_precision(p).ln()?).exp())
}

fn render_float(x: &BigFloat, digits: Option<usize>) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let raw = with_consts(|cc| x.format(Radix::Dec, RM, cc)).unwrap_or_else(|_| "NaN".into());
    let (negative, body) = match raw.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, raw.as_str()),
    };
    let (mantissa, exp) = match body.split_once('e') {
        Some((m, e)) => (m, e.parse::<i64>().unwrap_or(0)),
        None => (body, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let mut sig: Vec<u8> = int_part.bytes().chain(frac_part.bytes()).map(|b| b - b'0').collect();
    let mut exp = exp + int_part.len() as i64 - 1;
    if let Some(d) = digits {
        if sig.len() > d {
            let round_up = sig[d] >= 5;
            sig.truncate(d);
            if round_up {
                let mut i = d;
                loop {
                    if i == 0 {
                        sig.insert(0, 1);
                        sig.truncate(d);
                        exp += 1;
                        break;
                    }
                    i -= 1;
                    if sig[i] == 9 {
                        sig[i] = 0;
                    } else {
                        sig[i] += 1;
                        break;
                    }
                }
            }
        }
    }
    while sig.len() > 1 && *sig.last().unwrap() == 0 {
        sig.pop();
    }
    let digits_str: String = sig.iter().map(|d| char::from(b'0' + d)).collect();
    let sign = if negative { "-" } else { "" };
    let n = digits_str.len() as i64;
    let body = if (-30..=40).contains(&exp) {
        if exp < 0 {
            format!("0.{}{}", "0".repeat((-exp - 1) as usize), digits_str)
        } else if exp + 1 >= n {
            format!("{}{}", digits_str, "0".repeat((exp + 1 - n) as usize))
        } else {
            let cut = (exp + 1) as usize;
            format!("{}.{}", &digits_str[..cut], &digits_str[cut..])
        }
    } else if n == 1 {
        format!("{digits_str}e{exp}")
    } else {
        format!("{}.{}e{}", &digits_str[..1], &digits_str[1..], exp)
    };
    format!("{sign}{body}")
}

/// Parses a decimal string produced by [`PrecComplex::to_decimal_string`]
/// back into a real value.
pub fn parse_decimal(text: &str, prec: usize) -> Result<PrecComplex> {
    let z = ComplexRational::parse(text)?;
    Ok(PrecComplex::from_complex_rational(&z, prec))
}

/// `|a - b| <= tol` on both parts, used by tests and the identity engine.
pub fn close(a: &PrecComplex, b: &PrecComplex, tol: f64) -> bool {
    a.sub(b).abs_f64() <= tol
}
