//! The weighted (h,q)-zeta function
//!
//! ```text
//! ζ̃_q^{(α,h)}(s, x) = [2]_q Σ_{m≥0} (-1)^m q^{mh} [m+x]_{q^α}^{-s}
//! ```
//!
//! and its classical reduction, the Hurwitz-Euler zeta function
//! `2 Σ (-1)^m (m+x)^{-s}`.

use astro_float::BigFloat;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::genocchi::genocchi_poly;
use crate::qcore::rational::{self, ComplexRational, Rational};
use crate::qcore::{numeric_pow, Backend, NumericAlgebra, PrecComplex, QAlgebra, QContext, QValue};

/// Arguments of one zeta evaluation. Tolerance and the term cap come from
/// `ctx`.
#[derive(Clone, Debug, PartialEq)]
pub struct ZetaQuery {
    pub s: ComplexRational,
    pub x: Rational,
    pub ctx: QContext,
}

impl ZetaQuery {
    pub fn new(s: ComplexRational, x: Rational, ctx: QContext) -> Self {
        Self { s, x, ctx }
    }
}

/// Evaluates the defining series numerically with a certified stopping
/// rule.
///
/// For `h >= 1` the sum stops at the first `N` whose remainder bound
/// `|[2]_q| · B · |q|^{hN} / (1 - |q|^h)` is below `ctx.tol`, with `B` a
/// bound for `|[m+x]^{-s}|` over `m >= N`. For `h = 0` the series does not
/// converge and the mean of consecutive partial sums is returned once two
/// successive means differ by less than `2·tol`.
pub fn zeta_eval(query: &ZetaQuery) -> Result<PrecComplex> {
    let ctx = &query.ctx;
    if ctx.backend != Backend::Numeric {
        return Err(Error::BackendUnsupported("zeta_eval needs the numeric backend".into()));
    }
    let alg = ctx.numeric_algebra()?;
    zeta_in(&alg, &query.s, &query.x, ctx)
}

/// The defining series in a fixed numeric algebra; `alg.rebase(a)` yields
/// `ζ̃_{q^a}`. Only `alpha`, `h`, `tol` and `max_terms` are read from `ctx`.
pub fn zeta_in(alg: &NumericAlgebra, s: &ComplexRational, x: &Rational, ctx: &QContext) -> Result<PrecComplex> {
    alg.check_generic_q()?;
    let neg_int = s.non_positive_integer();
    match neg_int {
        Some(_) if x.is_negative() => return Err(Error::NonPositiveX(x.to_string())),
        None if !x.is_positive() => return Err(Error::NonPositiveX(x.to_string())),
        _ => {}
    }
    let prec = alg.precision();
    let minus_s = PrecComplex::from_complex_rational(s, prec).neg();
    let alpha = &ctx.alpha;
    let power = |m: usize| -> Result<PrecComplex> {
        let y = x + rational::int(m as i64);
        let b = alg.bracket(&y, alpha)?;
        match neg_int {
            Some(n) => Ok(b.powi(n as u64)),
            None => numeric_pow(&b, &minus_s),
        }
    };
    let two_q = alg.two_q()?;

    if ctx.h == 0 {
        return averaged_sum(alg, &power, ctx).map(|v| v.mul(&two_q));
    }

    let bound = TailBound::new(alg, s, x, alpha, ctx.h);
    let two_q_abs = two_q.abs_f64();
    let mut acc = PrecComplex::zero(prec);
    for m in 0..ctx.max_terms {
        if two_q_abs * bound.after(m) < ctx.tol {
            return Ok(acc.mul(&two_q));
        }
        let mut term = alg.q_pow(&rational::int(m as i64 * ctx.h as i64))?.mul(&power(m)?);
        if m % 2 == 1 {
            term = term.neg();
        }
        acc = acc.add(&term);
    }
    Err(Error::MaxTermsExceeded(ctx.max_terms))
}

fn averaged_sum(
    alg: &NumericAlgebra,
    power: &dyn Fn(usize) -> Result<PrecComplex>,
    ctx: &QContext,
) -> Result<PrecComplex> {
    let prec = alg.precision();
    let half = PrecComplex::from_rational(&rational::frac(1, 2), prec);
    let mut partial = PrecComplex::zero(prec);
    let mut prev_partial: Option<PrecComplex> = None;
    let mut prev_mean: Option<PrecComplex> = None;
    for m in 0..ctx.max_terms {
        let mut term = power(m)?;
        if m % 2 == 1 {
            term = term.neg();
        }
        partial = partial.add(&term);
        if let Some(pp) = &prev_partial {
            let mean = pp.add(&partial).mul(&half);
            if let Some(pm) = &prev_mean {
                if mean.sub(pm).abs_f64() < 2.0 * ctx.tol {
                    return Ok(mean);
                }
            }
            prev_mean = Some(mean);
        }
        prev_partial = Some(partial.clone());
    }
    Err(Error::MaxTermsExceeded(ctx.max_terms))
}

/// Remainder bound for `Σ_{m≥N} (-1)^m q^{mh} [m+x]^{-s}`, in `f64`.
struct TailBound {
    r_alpha: f64,
    r_h: f64,
    x: f64,
    sigma: f64,
    neg_int: Option<u32>,
    real_q: bool,
    phase: f64,
}

impl TailBound {
    fn new(alg: &NumericAlgebra, s: &ComplexRational, x: &Rational, alpha: &Rational, h: u32) -> Self {
        let r = alg.effective_modulus().re_f64();
        let t = rational::to_f64(&s.im);
        let real_q = alg.is_real_positive();
        Self {
            r_alpha: r.powf(rational::to_f64(alpha)),
            r_h: r.powi(h as i32),
            x: rational::to_f64(x),
            sigma: rational::to_f64(&s.re),
            neg_int: s.non_positive_integer(),
            real_q,
            // |exp(-s Log z)| <= |z|^{-σ} e^{π |Im s|} when arg z is unknown.
            phase: if real_q { 1.0 } else { (std::f64::consts::PI * t.abs()).exp() },
        }
    }

    fn after(&self, n: usize) -> f64 {
        let y = self.x + n as f64;
        let ry = self.r_alpha.powf(y);
        let (lower, upper) = if self.real_q {
            ((1.0 - ry) / (1.0 - self.r_alpha), 1.0 / (1.0 - self.r_alpha))
        } else {
            ((1.0 - ry) / (1.0 + self.r_alpha), (1.0 + ry) / (1.0 - self.r_alpha))
        };
        let b = match self.neg_int {
            Some(k) => upper.powi(k as i32),
            None if self.sigma >= 0.0 => lower.powf(-self.sigma) * self.phase,
            None => upper.powf(-self.sigma) * self.phase,
        };
        // Factor 2 absorbs the rounding of this f64 estimate.
        2.0 * b * self.r_h.powi(n as i32) / (1.0 - self.r_h)
    }
}

/// `ζ̃(-n, x) = G̃_{n+1}(x) / (n+1)`, exact or numeric depending on `ctx`.
pub fn zeta_neg_int(n: u32, x: &Rational, ctx: &QContext) -> Result<QValue> {
    let g = genocchi_poly(n + 1, x, ctx)?.value;
    let k = Rational::new(1.into(), (n as i64 + 1).into());
    Ok(match g {
        QValue::Series(v) => QValue::Series(v.scale_by(&k)),
        QValue::Rational(v) => QValue::Rational(v * k),
        QValue::Numeric(v) => QValue::Numeric(v.mul(&PrecComplex::from_rational(&k, v.precision()))),
    })
}

/// Hurwitz-Euler zeta `2 Σ_{m≥0} (-1)^m (m+x)^{-s}` for `Re(s) > 0`,
/// accelerated with the Cohen-Rodriguez Villegas-Zagier weights.
///
/// `(m+x)^{-s}` are the moments of `u^{x-1}(-ln u)^{s-1}/Γ(s)` on `[0,1]`,
/// so `n` accelerated terms leave an error at most
/// `2·2·x^{-σ}·|Γ(σ)/Γ(s)| / (3+√8)^n`.
pub fn hurwitz_euler(s: &PrecComplex, x: &Rational, tol: f64) -> Result<PrecComplex> {
    if !x.is_positive() {
        return Err(Error::NonPositiveX(x.to_string()));
    }
    let sigma = s.re_f64();
    let t = s.im_f64();
    if sigma.is_nan() || sigma <= 0.0 {
        return Err(Error::ConvergenceDomain(s.to_decimal_string()));
    }
    let prec = s.precision();
    let xf = rational::to_f64(x);
    let gamma_ratio = {
        let mut sq = (std::f64::consts::PI * t).cosh();
        if sigma < 0.5 {
            sq *= 1.0 + (t / sigma).powi(2);
        }
        sq.sqrt()
    };
    let scale = 4.0 * gamma_ratio * xf.powf(-sigma);
    let rho = 3.0 + 8f64.sqrt();
    let mut n = ((scale / tol).ln() / rho.ln()).ceil().max(1.0) as usize;
    // Guard against tol so small that f64 overflowed above.
    if n > 1_000_000 {
        return Err(Error::MaxTermsExceeded(n));
    }
    n += 1;
    let work = prec + (2.55 * n as f64) as usize + 16;
    let s_w = s.with_precision(work);
    let minus_s = s_w.neg();
    let x_w = PrecComplex::from_rational(x, work);

    let root8 = PrecComplex::from_floats(
        PrecComplex::from_i64(8, work).real_part().sqrt(work, astro_float::RoundingMode::ToEven),
        BigFloat::from_i64(0, work),
        work,
    );
    let mut d = PrecComplex::from_i64(3, work).add(&root8).powi(n as u64);
    d = d.add(&d.recip()?).mul(&PrecComplex::from_rational(&rational::frac(1, 2), work));
    let mut b = PrecComplex::from_i64(-1, work);
    let mut c = d.neg();
    let mut acc = PrecComplex::zero(work);
    let n_i = n as i64;
    for k in 0..n_i {
        c = b.sub(&c);
        let base = x_w.add(&PrecComplex::from_i64(k, work));
        acc = acc.add(&c.mul(&numeric_pow(&base, &minus_s)?));
        let num = Rational::from_integer(((k + n_i) * (k - n_i)).into());
        let den = (rational::int(k) + rational::frac(1, 2)) * rational::int(k + 1);
        b = b.mul(&PrecComplex::from_rational(&(num / den), work));
    }
    Ok(acc.div(&d)?.mul_i64(2).with_precision(prec))
}
