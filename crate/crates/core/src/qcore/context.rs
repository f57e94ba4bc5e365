use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::qcore::algebra::{NumericAlgebra, QAlgebra, RationalAlgebra, SeriesAlgebra};
use crate::qcore::numeric::{PrecComplex, DEFAULT_PRECISION, MIN_PRECISION};
use crate::qcore::rational::{self, ComplexRational, Rational};
use crate::qcore::series::{QSeries, DEFAULT_ORDER};

pub const DEFAULT_TOL: f64 = 1e-30;
pub const DEFAULT_MAX_TERMS: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Exact,
    Numeric,
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Backend::Exact => "exact",
            Backend::Numeric => "numeric",
        })
    }
}

impl std::str::FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Backend::Exact),
            "numeric" => Ok(Backend::Numeric),
            other => Err(Error::ConfigInvalid(format!("unknown backend {other:?}"))),
        }
    }
}

/// Parameters shared by every weighted computation.
///
/// With the exact backend and no `q`, values are truncated series in the
/// formal variable. With the exact backend and a real rational `q`, the
/// closed forms are evaluated exactly at that point. The numeric backend
/// needs `q` with `0 < |q| < 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct QContext {
    pub alpha: Rational,
    pub h: u32,
    pub backend: Backend,
    pub q: Option<ComplexRational>,
    pub order: usize,
    pub precision: usize,
    pub tol: f64,
    pub max_terms: usize,
}

impl Default for QContext {
    fn default() -> Self {
        Self {
            alpha: Rational::one(),
            h: 1,
            backend: Backend::Exact,
            q: None,
            order: DEFAULT_ORDER,
            precision: DEFAULT_PRECISION,
            tol: DEFAULT_TOL,
            max_terms: DEFAULT_MAX_TERMS,
        }
    }
}

impl QContext {
    /// Formal-series context at truncation order `order`.
    pub fn exact(alpha: i64, h: u32, order: usize) -> Self {
        Self { alpha: rational::int(alpha), h, order, ..Self::default() }
    }

    /// Numeric context at the real point `q`.
    pub fn numeric(alpha: Rational, h: u32, q: Rational, precision: usize) -> Self {
        Self {
            alpha,
            h,
            backend: Backend::Numeric,
            q: Some(ComplexRational::real(q)),
            precision,
            ..Self::default()
        }
    }

    pub fn with_q(mut self, q: Rational) -> Self {
        self.q = Some(ComplexRational::real(q));
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !self.alpha.is_positive() {
            return Err(Error::ConfigInvalid(format!("alpha must be positive, got {}", self.alpha)));
        }
        if self.order == 0 {
            return Err(Error::ConfigInvalid("order must be at least 1".into()));
        }
        if self.precision < MIN_PRECISION {
            return Err(Error::PrecisionTooLow(self.precision));
        }
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(Error::ConfigInvalid(format!("tolerance must be positive, got {}", self.tol)));
        }
        match (self.backend, &self.q) {
            (Backend::Numeric, None) => Err(Error::ConfigInvalid("numeric backend needs a value for q".into())),
            (Backend::Exact, Some(q)) if !q.is_real() => {
                Err(Error::BackendUnsupported("exact evaluation needs a real rational q".into()))
            }
            _ => Ok(()),
        }
    }

    pub fn numeric_q(&self) -> Result<PrecComplex> {
        let q = self.q.as_ref().ok_or_else(|| Error::ConfigInvalid("numeric backend needs a value for q".into()))?;
        Ok(PrecComplex::from_complex_rational(q, self.precision))
    }

    /// Realizes the context as an algebra. `scale` is the series scale and
    /// is ignored by point evaluations.
    pub fn algebra(&self, scale: u64) -> Result<Algebra> {
        self.validate()?;
        Ok(match (self.backend, &self.q) {
            (Backend::Exact, None) => Algebra::Series(SeriesAlgebra::new(scale, self.order)),
            (Backend::Exact, Some(q)) => Algebra::Rational(RationalAlgebra::new(q.re.clone())),
            (Backend::Numeric, _) => Algebra::Numeric(NumericAlgebra::new(self.numeric_q()?)?),
        })
    }

    pub fn numeric_algebra(&self) -> Result<NumericAlgebra> {
        self.validate()?;
        if self.backend != Backend::Numeric {
            return Err(Error::BackendUnsupported("operation needs the numeric backend".into()));
        }
        NumericAlgebra::new(self.numeric_q()?)
    }
}

/// Smallest series scale at which every `q^e`, `e` in `exponents`, sits on
/// an integer index.
pub fn required_scale<'a>(exponents: impl IntoIterator<Item = &'a Rational>) -> Result<u64> {
    let l: BigInt = rational::denominator_lcm(exponents);
    l.to_u64().ok_or_else(|| Error::ScaleOverflow { exponent: l.to_string(), scale: 0 })
}

/// A realized context.
#[derive(Clone, Debug)]
pub enum Algebra {
    Series(SeriesAlgebra),
    Rational(RationalAlgebra),
    Numeric(NumericAlgebra),
}

/// Runs generic code against whichever algebra a context produced and
/// wraps the result in a [`QValue`].
#[macro_export]
macro_rules! with_algebra {
    ($alg:expr, |$a:ident| $body:expr) => {
        match $alg {
            $crate::qcore::Algebra::Series($a) => ($body).map($crate::qcore::QValue::Series),
            $crate::qcore::Algebra::Rational($a) => ($body).map($crate::qcore::QValue::Rational),
            $crate::qcore::Algebra::Numeric($a) => ($body).map($crate::qcore::QValue::Numeric),
        }
    };
}

/// A backend-dependent value.
#[derive(Clone, Debug, PartialEq)]
pub enum QValue {
    Series(QSeries),
    Rational(Rational),
    Numeric(PrecComplex),
}

impl QValue {
    pub fn as_series(&self) -> Option<&QSeries> {
        match self {
            QValue::Series(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            QValue::Rational(r) => Some(r),
            _ => None,
        }
    }

    pub fn as_numeric(&self) -> Option<&PrecComplex> {
        match self {
            QValue::Numeric(z) => Some(z),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            QValue::Series(s) => s.is_zero(),
            QValue::Rational(r) => r.is_zero(),
            QValue::Numeric(z) => z.is_zero(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            QValue::Series(_) => "series",
            QValue::Rational(_) => "rational",
            QValue::Numeric(_) => "numeric",
        }
    }

    /// Human-readable text; numeric values are rounded to the digits their
    /// precision supports.
    pub fn to_text(&self) -> String {
        match self {
            QValue::Series(s) => s.to_string(),
            QValue::Rational(r) => r.to_string(),
            QValue::Numeric(z) => z.to_rounded_string(PrecComplex::display_digits(z.precision())),
        }
    }
}

impl fmt::Display for QValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl Serialize for QValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            QValue::Series(series) => series.serialize(s),
            QValue::Rational(r) => s.serialize_str(&r.to_string()),
            QValue::Numeric(z) => s.serialize_str(&z.to_decimal_string()),
        }
    }
}

/// Sign selector for [`q_bracket`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BracketSign {
    Plus,
    Minus,
}

/// `[x]_q = (1 - q^x)/(1 - q)` or `[x]_{-q} = (1 - (-q)^x)/(1 + q)`.
///
/// The numeric backend at exactly `q = 1` returns `x`, the `q -> 1` limit
/// of `[x]_q`.
pub fn q_bracket(x: &Rational, ctx: &QContext, sign: BracketSign) -> Result<QValue> {
    if ctx.backend == Backend::Exact && x.is_negative() {
        return Err(Error::NegativeExponentInExactBackend(x.to_string()));
    }
    let scale = required_scale([x])?;
    let alg = ctx.algebra(scale)?;
    let one = Rational::one();
    match sign {
        BracketSign::Plus => with_algebra!(&alg, |a| a.bracket(x, &one)),
        BracketSign::Minus => {
            if let Algebra::Numeric(a) = &alg {
                if a.is_q_one() {
                    return Err(Error::QOutOfDomain("[x]_{-q} has no documented limit at q = 1".into()));
                }
            }
            with_algebra!(&alg, |a| a.neg_bracket(x, &one))
        }
    }
}

/// `[x]_q` on a caller-fixed series grid, reporting [`Error::ScaleOverflow`]
/// when `x` does not fit the grid.
pub fn q_bracket_series(x: &Rational, scale: u64, order: usize) -> Result<QSeries> {
    if x.is_negative() {
        return Err(Error::NegativeExponentInExactBackend(x.to_string()));
    }
    SeriesAlgebra::new(scale, order).bracket(x, &Rational::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::rational::{frac, int};

    #[test]
    fn empty_bracket_is_zero() {
        for ctx in [QContext::default(), QContext::numeric(int(1), 1, frac(1, 2), 128)] {
            assert!(q_bracket(&int(0), &ctx, BracketSign::Plus).unwrap().is_zero());
        }
    }

    #[test]
    fn numeric_limit_at_q_one() {
        let ctx = QContext::numeric(int(1), 1, int(1), 128);
        let v = q_bracket(&int(5), &ctx, BracketSign::Plus).unwrap();
        assert_eq!(v.to_text(), "5");
    }

    #[test]
    fn numeric_bracket_at_half() {
        let ctx = QContext::numeric(int(1), 1, frac(1, 2), 128);
        let v = q_bracket(&int(3), &ctx, BracketSign::Plus).unwrap();
        assert_eq!(v.to_text(), "1.75");
    }

    #[test]
    fn symbolic_minus_bracket_of_two() {
        let v = q_bracket(&int(2), &QContext::exact(1, 1, 8), BracketSign::Minus).unwrap();
        assert_eq!(v.as_series().unwrap(), &QSeries::from_i64s(1, 8, &[1, -1]).unwrap());
    }

    #[test]
    fn exact_errors() {
        let ctx = QContext::exact(1, 1, 8);
        assert!(matches!(q_bracket(&int(-1), &ctx, BracketSign::Plus), Err(Error::NegativeExponentInExactBackend(_))));
        assert!(matches!(q_bracket(&frac(1, 2), &ctx, BracketSign::Minus), Err(Error::BackendUnsupported(_))));
        assert!(matches!(q_bracket_series(&frac(1, 3), 2, 8), Err(Error::ScaleOverflow { .. })));
        let far = QContext::numeric(int(1), 1, int(2), 128);
        assert!(matches!(q_bracket(&int(1), &far, BracketSign::Plus), Err(Error::QOutOfDomain(_))));
    }

    #[test]
    fn fractional_bracket_uses_a_finer_scale() {
        let v = q_bracket(&frac(3, 2), &QContext::exact(1, 1, 8), BracketSign::Plus).unwrap();
        let s = v.as_series().unwrap();
        assert_eq!(s.scale(), 2);
        // (1 - t^3)/(1 - t^2) = 1 + t^2 - t^3 + t^4 - t^5 + ...
        assert_eq!(s.coeff(2), &int(1));
        assert_eq!(s.coeff(3), &int(-1));
    }

    #[test]
    fn validation() {
        let ctx = QContext { alpha: int(0), ..QContext::default() };
        assert!(ctx.validate().is_err());
        let ctx = QContext { precision: 32, ..QContext::default() };
        assert_eq!(ctx.validate(), Err(Error::PrecisionTooLow(32)));
        let ctx = QContext { backend: Backend::Numeric, ..QContext::default() };
        assert!(ctx.validate().is_err());
    }
}
