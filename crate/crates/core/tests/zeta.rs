use num_bigint::BigInt;
use num_traits::{One, Zero};
use qzeta::error::Error;
use qzeta::genocchi::genocchi_poly;
use qzeta::qcore::numeric::parse_decimal;
use qzeta::qcore::rational::{frac, int, rational_pow};
use qzeta::qcore::{ComplexRational, PrecComplex, QContext, Rational};
use qzeta::zeta::{hurwitz_euler, zeta_eval, zeta_neg_int, ZetaQuery};

fn real(r: Rational) -> ComplexRational {
    ComplexRational::real(r)
}

fn ctx_half(alpha: i64, h: u32) -> QContext {
    QContext::numeric(int(alpha), h, frac(1, 2), 128)
}

/// `[2]_q Σ_{m<terms} (-1)^m q^{mh} [m+x]_q^{-2}` at `q = 1/2`, `α = 1`,
/// summed in exact rationals.
fn rational_partial_sum(x: i64, h: i64, terms: i64) -> Rational {
    let q = frac(1, 2);
    let two = Rational::one() + &q;
    let mut acc = Rational::zero();
    for m in 0..terms {
        let bracket = (Rational::one() - rational_pow(&q, m + x).unwrap()) / (Rational::one() - &q);
        let term = rational_pow(&q, m * h).unwrap() / (&bracket * &bracket);
        if m % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    two * acc
}

fn to_prec(r: &Rational) -> PrecComplex {
    PrecComplex::from_rational(r, 256)
}

#[test]
fn golden_value_at_s_two() {
    let v = zeta_eval(&ZetaQuery::new(real(int(2)), int(1), ctx_half(1, 1))).unwrap();
    // Remainder after 130 terms is below 4·2^-130.
    let oracle = to_prec(&rational_partial_sum(1, 1, 130));
    assert!(v.sub(&oracle).abs_f64() < 1e-30);
    let golden = parse_decimal("1.25264302846470325391294969927", 128).unwrap();
    assert!(v.sub(&golden).abs_f64() < 1e-28);
}

#[test]
fn twisted_weight_h_two() {
    let v = zeta_eval(&ZetaQuery::new(real(int(2)), int(2), ctx_half(1, 2))).unwrap();
    let oracle = to_prec(&rational_partial_sum(2, 2, 80));
    assert!(v.sub(&oracle).abs_f64() < 1e-30);
}

#[test]
fn negative_integers_match_genocchi() {
    for h in [1, 2] {
        let ctx = ctx_half(2, h);
        for n in 0..=5u32 {
            let x = frac(3, 2);
            let series = zeta_eval(&ZetaQuery::new(real(-int(n as i64)), x.clone(), ctx.clone())).unwrap();
            let g = genocchi_poly(n + 1, &x, &ctx).unwrap().value;
            let g = g.as_numeric().unwrap().mul(&PrecComplex::from_rational(&frac(1, n as i64 + 1), 128));
            let rel = series.sub(&g).abs_f64() / g.abs_f64();
            assert!(rel < 1e-28, "n={n} h={h}: {rel:e}");
        }
    }
}

#[test]
fn pinned_interpolation_value() {
    let exact = zeta_neg_int(1, &int(0), &QContext::exact(1, 1, 8).with_q(frac(1, 2))).unwrap();
    assert_eq!(exact.as_rational(), Some(&frac(-2, 5)));
    let num = zeta_eval(&ZetaQuery::new(real(int(-1)), int(0), ctx_half(1, 1))).unwrap();
    assert!((num.re_f64() + 0.4).abs() < 1e-30);
}

#[test]
fn functional_equation_at_complex_s() {
    let ctx = ctx_half(1, 1);
    let s = ComplexRational::parse("3/2+2i").unwrap();
    let x = frac(5, 4);
    let z0 = zeta_eval(&ZetaQuery::new(s.clone(), x.clone(), ctx.clone())).unwrap();
    let z1 = zeta_eval(&ZetaQuery::new(s.clone(), &x + int(1), ctx.clone())).unwrap();
    let q = PrecComplex::from_rational(&frac(1, 2), 128);
    let lhs = z0.add(&q.mul(&z1));
    // [2]_q [x]^{-s} with [5/4]_{1/2} = (1 - 2^{-5/4}) / (1/2).
    let bracket = PrecComplex::from_f64(2.0 * (1.0 - 2f64.powf(-1.25)), 128);
    let rhs = PrecComplex::from_f64(1.5, 128)
        .mul(&qzeta::qcore::numeric_pow(&bracket, &PrecComplex::from_complex_rational(&s, 128).neg()).unwrap());
    // The right side only carries double precision here.
    assert!(lhs.sub(&rhs).abs_f64() < 1e-14);
}

#[test]
fn h_zero_uses_averaged_sums() {
    let ctx = QContext::numeric(int(1), 0, frac(1, 2), 128).with_tol(1e-20);
    let series = zeta_eval(&ZetaQuery::new(real(int(-2)), int(1), ctx.clone())).unwrap();
    let g = genocchi_poly(3, &int(1), &ctx).unwrap().value;
    let g = g.as_numeric().unwrap().mul(&PrecComplex::from_rational(&frac(1, 3), 128));
    assert!(series.sub(&g).abs_f64() < 1e-18);
}

#[test]
fn domain_errors() {
    let ctx = ctx_half(1, 1);
    let err = zeta_eval(&ZetaQuery::new(real(frac(1, 2)), int(0), ctx.clone())).unwrap_err();
    assert!(matches!(err, Error::NonPositiveX(_)));
    let exact = QContext::exact(1, 1, 8);
    let err = zeta_eval(&ZetaQuery::new(real(int(2)), int(1), exact)).unwrap_err();
    assert!(matches!(err, Error::BackendUnsupported(_)));
    let mut capped = ctx;
    capped.max_terms = 5;
    let err = zeta_eval(&ZetaQuery::new(real(int(2)), int(1), capped)).unwrap_err();
    assert_eq!(err, Error::MaxTermsExceeded(5));
}

#[test]
fn hurwitz_euler_classical_constants() {
    let pi = parse_decimal("3.14159265358979323846264338327950288419716939937510", 160).unwrap();
    let s2 = hurwitz_euler(&PrecComplex::from_i64(2, 160), &int(1), 1e-30).unwrap();
    assert!(s2.sub(&pi.mul(&pi).div(&PrecComplex::from_i64(6, 160)).unwrap()).abs_f64() < 1e-20);
    let ln2 = parse_decimal("0.69314718055994530941723212145817656807550013436026", 160).unwrap();
    let s1 = hurwitz_euler(&PrecComplex::from_i64(1, 160), &int(1), 1e-30).unwrap();
    assert!(s1.sub(&ln2.mul_i64(2)).abs_f64() < 1e-20);
}

#[test]
fn hurwitz_euler_telescopes() {
    // ζ_E(s, x) + ζ_E(s, x+1) = 2 x^{-s}.
    let s = PrecComplex::from_rational(&frac(7, 3), 160);
    let x = frac(2, 5);
    let a = hurwitz_euler(&s, &x, 1e-32).unwrap();
    let b = hurwitz_euler(&s, &(&x + int(1)), 1e-32).unwrap();
    let rhs = qzeta::qcore::numeric_pow(&PrecComplex::from_rational(&x, 160), &s.neg()).unwrap().mul_i64(2);
    assert!(a.add(&b).sub(&rhs).abs_f64() < 1e-25);
}

#[test]
fn hurwitz_euler_rejects_bad_input() {
    let s = PrecComplex::from_i64(0, 128);
    assert!(matches!(hurwitz_euler(&s, &int(1), 1e-20), Err(Error::ConvergenceDomain(_))));
    let s = PrecComplex::from_i64(2, 128);
    assert!(matches!(hurwitz_euler(&s, &Rational::from_integer(BigInt::from(0)), 1e-20), Err(Error::NonPositiveX(_))));
}
