//! Weighted (h,q)-Genocchi numbers and polynomials.
//!
//! `G̃_{n,q}^{(α,h)}(x)` is the fermionic p-adic q-integral of
//! `q^{(h-1)ξ}[x+ξ]_{q^α}^{n-1}`, scaled by `n`. For `|q| < 1` (or formally)
//! this is the alternating series
//!
//! ```text
//! G̃_n(x) = n [2]_q Σ_{m≥0} (-1)^m q^{mh} [x+m]_{q^α}^{n-1}
//! ```
//!
//! Expanding `[x+m]^{n-1} = (1-q^α)^{-(n-1)} Σ_k C(n-1,k)(-1)^k q^{αk(x+m)}`
//! and summing each geometric series in `m` gives the closed form used as
//! the production path:
//!
//! ```text
//! G̃_n(x) = n [2]_q (1-q^α)^{-(n-1)} Σ_{k<n} C(n-1,k) (-1)^k q^{αkx} / (1 + q^{αk+h})
//! ```
//!
//! with `G̃_0 = 0`. The alternating series itself is kept as an independent
//! oracle.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::qcore::rational::{self, Rational};
use crate::qcore::{
    required_scale, Algebra, Backend, NumericAlgebra, PrecComplex, QAlgebra, QContext, QSeries, QValue,
};
use crate::with_algebra;

/// A Genocchi value together with the index and argument it was computed at.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GenocchiValue {
    pub n: u32,
    #[serde(with = "rational::serde_rational")]
    pub x: Rational,
    pub value: QValue,
}

/// Classical Genocchi polynomial value `G_n(x)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassicalGenocchi {
    pub n: u32,
    #[serde(with = "rational::serde_rational")]
    pub x: Rational,
    #[serde(with = "rational::serde_rational")]
    pub value: Rational,
}

/// Closed form of `G̃_n(x)` in any algebra. The algebra's base plays the
/// role of `q`, so `alg.rebase(a)` yields `G̃_{n,q^a}`.
pub fn closed_form<A: QAlgebra>(alg: &A, n: u32, x: &Rational, alpha: &Rational, h: u32) -> Result<A::Value> {
    if n == 0 {
        return Ok(alg.zero());
    }
    let degree = n - 1;
    let h = rational::int(h as i64);
    let mut acc = alg.zero();
    for k in 0..=degree {
        let mut c = Rational::from_integer(rational::binomial(degree, k));
        if k % 2 == 1 {
            c = -c;
        }
        let ak = alpha * rational::int(k as i64);
        let term = alg.mul(&alg.q_pow(&(&ak * x))?, &alg.inv_one_plus_q_pow(&(&ak + &h))?);
        acc = alg.add(&acc, &alg.scale(&term, &c));
    }
    let acc = alg.div_one_minus_q_pow(&acc, alpha, degree)?;
    let front = alg.scale(&alg.two_q()?, &rational::int(n as i64));
    Ok(alg.mul(&front, &acc))
}

/// `n [2]_q Σ_{m<terms} (-1)^m q^{mh} [x+m]_{q^α}^{n-1}`, the alternating
/// series truncated after `terms` terms.
pub fn oracle_partial_sum<A: QAlgebra>(
    alg: &A,
    n: u32,
    x: &Rational,
    alpha: &Rational,
    h: u32,
    terms: usize,
) -> Result<A::Value> {
    if n == 0 {
        return Ok(alg.zero());
    }
    let mut acc = alg.zero();
    for m in 0..terms {
        let y = x + rational::int(m as i64);
        let mut term = alg.mul(&alg.q_pow(&rational::int((m as i64) * h as i64))?, &alg.bracket_pow(&y, alpha, n - 1)?);
        if m % 2 == 1 {
            term = alg.neg(&term);
        }
        acc = alg.add(&acc, &term);
    }
    Ok(alg.mul(&alg.scale(&alg.two_q()?, &rational::int(n as i64)), &acc))
}

fn check_common(x: &Rational, ctx: &QContext) -> Result<()> {
    if x.is_negative() {
        return Err(Error::NegativeArgument(x.to_string()));
    }
    if ctx.backend == Backend::Exact && ctx.h == 0 {
        return Err(Error::H0InExactBackend);
    }
    Ok(())
}

fn genocchi_scale(x: &Rational, alpha: &Rational) -> Result<u64> {
    required_scale([&(alpha * x), alpha])
}

/// `G̃_{n,q}^{(α,h)}(x)` through the closed form. `x = 0` gives the weighted
/// Genocchi numbers.
///
/// At numeric `q = 1` the classical value `G_n(x)` is returned, computed
/// from its generating function.
pub fn genocchi_poly(n: u32, x: &Rational, ctx: &QContext) -> Result<GenocchiValue> {
    check_common(x, ctx)?;
    let alg = ctx.algebra(genocchi_scale(x, &ctx.alpha)?)?;
    if let Algebra::Numeric(a) = &alg {
        if a.is_q_one() {
            let v = classical_genocchi_poly(n, x);
            return Ok(GenocchiValue { n, x: x.clone(), value: QValue::Numeric(a.lift(&v)) });
        }
    }
    let value = with_algebra!(&alg, |a| {
        a.check_generic_q().and_then(|_| closed_form(a, n, x, &ctx.alpha, ctx.h))
    })?;
    Ok(GenocchiValue { n, x: x.clone(), value })
}

/// Upper bound for `|[y]_{q^w}|` over all real `y >= y_min`, and a lower
/// bound, for the numeric tail estimates.
pub(crate) fn bracket_bounds(alg: &NumericAlgebra, w: &Rational, y_min: &Rational) -> Result<(PrecComplex, PrecComplex)> {
    let p = alg.precision();
    let one = PrecComplex::one(p);
    let r_w = alg.rebase(w).effective_modulus();
    if alg.is_real_positive() {
        let lower = alg.bracket(y_min, w)?;
        let upper = one.div(&one.sub(&r_w))?;
        return Ok((lower, upper));
    }
    let r_wy = alg.rebase(&(w * y_min)).effective_modulus();
    let lower = one.sub(&r_wy).div(&one.add(&r_w))?;
    let upper = one.add(&r_wy).div(&one.sub(&r_w))?;
    Ok((lower, upper))
}

/// Certified remainder bound for `|Σ_{m≥terms} (-1)^m q^{mh} [x+m]^{d}|`.
fn oracle_tail_bound(alg: &NumericAlgebra, x: &Rational, alpha: &Rational, h: u32, degree: u32, terms: usize) -> Result<f64> {
    let p = alg.precision();
    let (_, upper) = bracket_bounds(alg, alpha, &(x + rational::int(terms as i64)))?;
    let r_h = alg.rebase(&rational::int(h as i64)).effective_modulus();
    let one = PrecComplex::one(p);
    let bound = upper.powi(degree as u64).mul(&r_h.powi(terms as u64)).div(&one.sub(&r_h))?;
    Ok(bound.abs_f64())
}

/// Independent evaluation of `G̃_n(x)` by summing the alternating series.
///
/// * Formal series: `h >= 1` is required; the default term count
///   `⌈(K+1)/(h·scale)⌉` makes the result exact through order `K`, and a
///   smaller explicit count is rejected.
/// * Numeric, `h >= 1`: the remainder after `terms` terms is bounded and
///   must fall below the context tolerance.
/// * Numeric, `h = 0`: the mean of the last two partial sums.
pub fn genocchi_oracle(n: u32, x: &Rational, ctx: &QContext, terms: Option<usize>) -> Result<GenocchiValue> {
    if x.is_negative() {
        return Err(Error::NegativeArgument(x.to_string()));
    }
    if n == 0 {
        return genocchi_poly(0, x, ctx);
    }
    let alpha = &ctx.alpha;
    let alg = ctx.algebra(genocchi_scale(x, alpha)?)?;
    let value = match &alg {
        Algebra::Series(a) => {
            if ctx.h == 0 {
                return Err(Error::H0InExactBackend);
            }
            let stride = ctx.h as usize * a.scale_factor() as usize;
            let needed = (a.order() + 1).div_ceil(stride);
            let m = terms.unwrap_or(needed);
            if m < needed {
                return Err(Error::InsufficientTerms {
                    terms: m,
                    reason: format!("exactness through order {} needs {needed}", a.order()),
                });
            }
            QValue::Series(oracle_partial_sum(a, n, x, alpha, ctx.h, m)?)
        }
        Algebra::Rational(_) => {
            return Err(Error::BackendUnsupported("the alternating series does not terminate at a fixed rational q".into()))
        }
        Algebra::Numeric(a) => {
            a.check_generic_q()?;
            let m = terms.unwrap_or(ctx.max_terms.min(10_000));
            if ctx.h == 0 {
                let s0 = oracle_partial_sum(a, n, x, alpha, 0, m)?;
                let s1 = oracle_partial_sum(a, n, x, alpha, 0, m + 1)?;
                QValue::Numeric(s0.add(&s1).div(&PrecComplex::from_i64(2, a.precision()))?)
            } else {
                let tail = oracle_tail_bound(a, x, alpha, ctx.h, n - 1, m)?;
                let two_q = a.two_q()?.abs_f64();
                if tail * two_q * n as f64 > ctx.tol {
                    return Err(Error::InsufficientTerms {
                        terms: m,
                        reason: format!("remainder bound {:.3e} exceeds tolerance {:.3e}", tail * two_q * n as f64, ctx.tol),
                    });
                }
                QValue::Numeric(oracle_partial_sum(a, n, x, alpha, ctx.h, m)?)
            }
        }
    };
    Ok(GenocchiValue { n, x: x.clone(), value })
}

/// `G_n(x) = n! [t^n] 2t e^{xt} / (e^t + 1)`, by exact power series in `t`.
pub fn classical_genocchi_poly(n: u32, x: &Rational) -> Rational {
    if n == 0 {
        return Rational::zero();
    }
    let order = n as usize;
    let mut exp_xt = Vec::with_capacity(order + 1);
    let mut exp_t = Vec::with_capacity(order + 1);
    let mut fact = BigInt::one();
    let mut x_pow = Rational::one();
    for k in 0..=order {
        if k > 0 {
            fact *= BigInt::from(k);
            x_pow = &x_pow * x;
        }
        let inv_fact = Rational::new(BigInt::one(), fact.clone());
        exp_xt.push(&x_pow * &inv_fact);
        exp_t.push(inv_fact);
    }
    exp_t[0] += Rational::one();
    let num = QSeries::from_coeffs(1, order, exp_xt).expect("length order + 1");
    let den = QSeries::from_coeffs(1, order, exp_t).expect("length order + 1");
    let quotient = num.div(&den).expect("e^t + 1 has constant term 2");
    // 2t · quotient: coefficient of t^n is 2·quotient[n-1].
    let c = quotient.coeff(order - 1) * rational::int(2);
    c * Rational::from_integer(rational::factorial(n))
}

/// Classical Genocchi numbers `G_0 ..= G_n` (`G_n = G_n(0)`).
pub fn classical_genocchi_numbers(n: u32) -> Vec<Rational> {
    (0..=n).map(|k| classical_genocchi_poly(k, &Rational::zero())).collect()
}

/// `S̃_{m:q,i}(a) = Σ_{j<a} (-1)^j q^{ji} [j]_{q^α}^m` in any algebra, with
/// `0^0 = 1`.
pub fn s_tilde_in<A: QAlgebra>(alg: &A, m: u32, a: u32, twist: i64, alpha: &Rational) -> Result<A::Value> {
    let mut acc = alg.zero();
    for j in 0..a {
        let bracket = alg.bracket_pow(&rational::int(j as i64), alpha, m)?;
        let mut term = alg.mul(&alg.q_pow(&rational::int(j as i64 * twist))?, &bracket);
        if j % 2 == 1 {
            term = alg.neg(&term);
        }
        acc = alg.add(&acc, &term);
    }
    Ok(acc)
}

/// `S̃_{m:q,i}(a)` under a context. At numeric `q = 1` this is `S_m(a)`.
pub fn s_tilde(m: u32, a: u32, twist: i64, ctx: &QContext) -> Result<QValue> {
    if a == 0 {
        return Err(Error::ConfigInvalid("S̃ needs a >= 1".into()));
    }
    let alg = ctx.algebra(required_scale([&ctx.alpha])?)?;
    with_algebra!(&alg, |al| s_tilde_in(al, m, a, twist, &ctx.alpha))
}

/// `S_m(a) = Σ_{j<a} (-1)^j j^m`, with `0^0 = 1`.
pub fn s_classical(m: u32, a: u32) -> BigInt {
    (0..a).fold(BigInt::zero(), |acc, j| {
        let term = num_traits::pow(BigInt::from(j), m as usize);
        if j % 2 == 1 {
            acc - term
        } else {
            acc + term
        }
    })
}

/// Right-hand side of the addition theorem
/// `G̃_n(x+y) = Σ_j C(n,j) q^{α(j-1)y} G̃_j(x) [y]_{q^α}^{n-j}` in any algebra.
///
/// The `j = 0` term vanishes with `G̃_0 = 0`, so no negative power of `q`
/// is ever formed.
pub fn addition_rhs_in<A: QAlgebra>(alg: &A, n: u32, x: &Rational, y: &Rational, alpha: &Rational, h: u32) -> Result<A::Value> {
    let bracket_y = alg.bracket(y, alpha)?;
    let mut acc = alg.zero();
    for j in 1..=n {
        let g = closed_form(alg, j, x, alpha, h)?;
        let shift = alg.q_pow(&(alpha * rational::int(j as i64 - 1) * y))?;
        let c = Rational::from_integer(rational::binomial(n, j));
        let term = alg.mul(&alg.mul(&shift, &g), &alg.powi(&bracket_y, n - j));
        acc = alg.add(&acc, &alg.scale(&term, &c));
    }
    Ok(acc)
}

/// The addition-theorem right-hand side under a context; equals
/// `genocchi_poly(n, x + y)`.
pub fn genocchi_addition_rhs(n: u32, x: &Rational, y: &Rational, ctx: &QContext) -> Result<GenocchiValue> {
    check_common(x, ctx)?;
    if y.is_negative() {
        return Err(Error::NegativeArgument(y.to_string()));
    }
    let alpha = &ctx.alpha;
    let scale = required_scale([&(alpha * x), &(alpha * y), alpha])?;
    let alg = ctx.algebra(scale)?;
    let value = with_algebra!(&alg, |a| {
        a.check_generic_q().and_then(|_| addition_rhs_in(a, n, x, y, alpha, ctx.h))
    })?;
    Ok(GenocchiValue { n, x: x + y, value })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::rational::{frac, int};
    use crate::qcore::SeriesAlgebra;

    fn numeric_ctx(alpha: i64, h: u32) -> QContext {
        QContext::numeric(int(alpha), h, frac(1, 2), 128)
    }

    #[test]
    fn index_zero_vanishes_everywhere() {
        for ctx in [QContext::exact(2, 1, 16), numeric_ctx(1, 1), QContext::exact(1, 2, 16).with_q(frac(1, 3))] {
            assert!(genocchi_poly(0, &frac(7, 2), &ctx).unwrap().value.is_zero());
        }
    }

    #[test]
    fn first_genocchi_is_one_at_h_one() {
        for alpha in [1, 2, 3] {
            let v = genocchi_poly(1, &int(5), &numeric_ctx(alpha, 1)).unwrap();
            assert_eq!(v.value.to_text(), "1");
        }
    }

    #[test]
    fn second_weighted_number_at_half() {
        let v = genocchi_poly(2, &int(0), &numeric_ctx(1, 1)).unwrap();
        let z = v.value.as_numeric().unwrap();
        assert!(z.sub(&PrecComplex::from_rational(&frac(-4, 5), 128)).abs_f64() < 1e-36);
        let exact = genocchi_poly(2, &int(0), &QContext::exact(1, 1, 8).with_q(frac(1, 2))).unwrap();
        assert_eq!(exact.value.as_rational().unwrap(), &frac(-4, 5));
    }

    #[test]
    fn first_genocchi_ignores_the_argument() {
        let ctx = QContext::exact(2, 2, 32);
        let base = genocchi_poly(1, &int(0), &ctx).unwrap().value;
        for x in [int(1), frac(7, 2)] {
            let v = genocchi_poly(1, &x, &ctx).unwrap().value;
            // 7/2 forces scale 2; compare after stretching the scale-1 value.
            let lhs = v.as_series().unwrap();
            let rhs = base.as_series().unwrap().rescale(lhs.scale(), lhs.order()).unwrap();
            assert_eq!(lhs, &rhs);
        }
    }

    #[test]
    fn exact_backend_rejects_h_zero() {
        assert_eq!(genocchi_poly(3, &int(0), &QContext::exact(1, 0, 16)).unwrap_err(), Error::H0InExactBackend);
        assert_eq!(genocchi_oracle(3, &int(0), &QContext::exact(1, 0, 16), None).unwrap_err(), Error::H0InExactBackend);
    }

    #[test]
    fn oracle_at_n_one_is_constant_one() {
        let v = genocchi_oracle(1, &int(0), &QContext::exact(1, 1, 32), None).unwrap();
        assert_eq!(v.value.as_series().unwrap(), &QSeries::one(1, 32));
    }

    #[test]
    fn oracle_numeric_matches_minus_four_fifths() {
        let v = genocchi_oracle(2, &int(0), &numeric_ctx(1, 1), Some(120)).unwrap();
        let z = v.value.as_numeric().unwrap();
        assert!(z.sub(&PrecComplex::from_rational(&frac(-4, 5), 128)).abs_f64() < 1e-30);
    }

    #[test]
    fn oracle_rejects_short_sums() {
        let err = genocchi_oracle(2, &int(0), &QContext::exact(1, 1, 32), Some(5)).unwrap_err();
        assert!(matches!(err, Error::InsufficientTerms { .. }));
        let err = genocchi_oracle(2, &int(0), &numeric_ctx(1, 1), Some(10)).unwrap_err();
        assert!(matches!(err, Error::InsufficientTerms { .. }));
    }

    #[test]
    fn numeric_h_zero_oracle_matches_closed_form() {
        let ctx = numeric_ctx(1, 0);
        let closed = genocchi_poly(3, &int(1), &ctx).unwrap().value;
        let oracle = genocchi_oracle(3, &int(1), &ctx, Some(200)).unwrap().value;
        let d = closed.as_numeric().unwrap().sub(oracle.as_numeric().unwrap()).abs_f64();
        assert!(d < 1e-30, "{d}");
    }

    #[test]
    fn classical_values() {
        assert_eq!(classical_genocchi_poly(0, &int(0)), int(0));
        assert_eq!(classical_genocchi_poly(1, &int(0)), int(1));
        assert_eq!(classical_genocchi_poly(2, &int(0)), int(-1));
        assert_eq!(classical_genocchi_poly(4, &int(0)), int(1));
        assert_eq!(classical_genocchi_poly(6, &int(0)), int(-3));
        assert_eq!(classical_genocchi_poly(8, &int(0)), int(17));
        assert_eq!(classical_genocchi_poly(3, &int(0)), int(0));
        assert_eq!(classical_genocchi_numbers(4), vec![int(0), int(1), int(-1), int(0), int(1)]);
    }

    #[test]
    fn s_tilde_small_cases() {
        let ctx = QContext::exact(1, 1, 16);
        assert!(s_tilde(3, 1, 2, &ctx).unwrap().is_zero());
        assert_eq!(s_tilde(0, 1, 2, &ctx).unwrap().as_series().unwrap(), &QSeries::one(1, 16));
        // m = 1, a = 3, twist i = 2, alpha = 1: -q^2 + q^4 (1 + q).
        let v = s_tilde(1, 3, 2, &ctx).unwrap();
        assert_eq!(v.as_series().unwrap(), &QSeries::from_i64s(1, 16, &[0, 0, -1, 0, 1, 1]).unwrap());
    }

    #[test]
    fn s_tilde_rejects_empty_range() {
        assert!(s_tilde(1, 0, 1, &QContext::exact(1, 1, 8)).is_err());
    }

    #[test]
    fn classical_alternating_power_sums() {
        for m in 1..6 {
            assert_eq!(s_classical(m, 2), BigInt::from(-1));
        }
        assert_eq!(s_classical(0, 2), BigInt::zero());
        assert_eq!(s_classical(0, 1), BigInt::one());
        assert_eq!(s_classical(2, 3), BigInt::from(3));
        assert_eq!(s_classical(3, 5), BigInt::from(44));
    }

    #[test]
    fn s_tilde_at_q_one_is_classical() {
        let ctx = QContext::numeric(int(2), 1, int(1), 128);
        let v = s_tilde(3, 5, 4, &ctx).unwrap();
        assert_eq!(v.to_text(), "44");
    }

    #[test]
    fn addition_with_zero_shift_is_identity() {
        let ctx = QContext::exact(2, 1, 24);
        for n in 0..6 {
            let lhs = genocchi_addition_rhs(n, &int(1), &int(0), &ctx).unwrap().value;
            let rhs = genocchi_poly(n, &int(1), &ctx).unwrap().value;
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn closed_form_generic_over_rebased_series() {
        // G̃ at base q^3 equals the q -> q^3 substitution of the base-q series.
        let alg = SeriesAlgebra::new(1, 30);
        let g = closed_form(&alg, 4, &int(1), &int(1), 1).unwrap();
        let g3 = closed_form(&alg.rebase(&int(3)), 4, &int(1), &int(1), 1).unwrap();
        assert_eq!(g.substitute_power(3), g3);
    }

    #[test]
    fn negative_arguments_rejected() {
        assert!(matches!(genocchi_poly(2, &int(-1), &QContext::default()), Err(Error::NegativeArgument(_))));
    }
}
