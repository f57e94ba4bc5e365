use qzeta::error::Error;
use qzeta::genocchi::genocchi_poly;
use qzeta::qcore::rational::{frac, int, parse_rational};
use qzeta::qcore::{
    q_bracket, series_arith, series_eval_numeric, series_monomial, BracketSign, ComplexRational, Operand, PrecComplex,
    QContext, QSeries, SeriesOp,
};

#[test]
fn series_json_shape() {
    let s = QSeries::from_i64s(1, 2, &[1, 1, 1]).unwrap();
    assert_eq!(serde_json::to_string(&s).unwrap(), r#"{"scale":1,"order":2,"coeffs":["1","1","1"]}"#);
    let back: QSeries = serde_json::from_str(r#"{"scale":2,"order":3,"coeffs":["1/2","0","-3","0"]}"#).unwrap();
    assert_eq!(back.coeff(0), &frac(1, 2));
    assert!(serde_json::from_str::<QSeries>(r#"{"scale":1,"order":3,"coeffs":["1"]}"#).is_err());
}

#[test]
fn geometric_inverse() {
    // 1/(1-q) = 1 + q + q^2 + ...
    let one_minus_q = QSeries::from_i64s(1, 6, &[1, -1]).unwrap();
    let inv = series_arith(SeriesOp::Inv, &one_minus_q, Operand::None).unwrap();
    assert!(inv.coeffs().iter().all(|c| c == &int(1)));
    let no_unit = QSeries::from_i64s(1, 6, &[0, 1]).unwrap();
    assert_eq!(no_unit.inv().unwrap_err(), Error::NonUnitConstantTerm);
}

#[test]
fn binary_operations_need_matching_grids() {
    let a = QSeries::one(1, 4);
    assert_eq!(a.add(&QSeries::one(2, 4)).unwrap_err(), Error::ScaleMismatch(1, 2));
    assert_eq!(a.mul(&QSeries::one(1, 5)).unwrap_err(), Error::OrderMismatch(4, 5));
    assert!(a.rescale(3, 8).is_ok());
    assert!(matches!(QSeries::one(2, 4).rescale(3, 6), Err(Error::IncompatibleRescale { from: 2, to: 3 })));
}

#[test]
fn monomials_truncate() {
    assert!(series_monomial(9, 1, 4).unwrap().is_zero());
    assert_eq!(series_monomial(-1, 1, 4).unwrap_err(), Error::NegativeExponent(-1));
    let pow = series_arith(SeriesOp::Pow, &QSeries::from_i64s(1, 4, &[1, 1]).unwrap(), Operand::Exponent(3)).unwrap();
    assert_eq!(pow, QSeries::from_i64s(1, 4, &[1, 3, 3, 1]).unwrap());
}

#[test]
fn brackets_in_each_backend() {
    let exact = q_bracket(&int(3), &QContext::exact(1, 1, 5), BracketSign::Plus).unwrap();
    assert_eq!(exact.as_series().unwrap(), &QSeries::from_i64s(1, 5, &[1, 1, 1]).unwrap());
    let at_half = q_bracket(&int(3), &QContext::exact(1, 1, 5).with_q(frac(1, 2)), BracketSign::Plus).unwrap();
    assert_eq!(at_half.as_rational(), Some(&frac(7, 4)));
    let minus = q_bracket(&int(3), &QContext::exact(1, 1, 5).with_q(frac(1, 2)), BracketSign::Minus).unwrap();
    // (1 + q^3)/(1 + q) = 1 - q + q^2 at q = 1/2.
    assert_eq!(minus.as_rational(), Some(&frac(3, 4)));
    let fractional = q_bracket(&frac(1, 2), &QContext::exact(1, 1, 4), BracketSign::Plus).unwrap();
    assert_eq!(fractional.as_series().unwrap().scale(), 2);
}

#[test]
fn decimal_and_fraction_inputs_agree() {
    assert_eq!(parse_rational("0.5").unwrap(), frac(1, 2));
    assert_eq!(parse_rational("-1.25e-1").unwrap(), frac(-1, 8));
    assert_eq!(parse_rational(" 6/4 ").unwrap(), frac(3, 2));
    assert!(matches!(parse_rational("1/0"), Err(Error::Parse(_))));
    assert!(matches!(parse_rational("abc"), Err(Error::Parse(_))));
    let z = ComplexRational::parse("1/2-3i").unwrap();
    assert_eq!(z.to_string(), "1/2-3i");
    assert_eq!(ComplexRational::parse("-2").unwrap().non_positive_integer(), Some(2));
}

#[test]
fn context_validation() {
    let mut ctx = QContext::exact(1, 1, 8);
    ctx.alpha = int(0);
    assert!(matches!(ctx.validate(), Err(Error::ConfigInvalid(_))));
    let mut ctx = QContext::numeric(int(1), 1, frac(1, 2), 128);
    ctx.precision = 32;
    assert_eq!(ctx.validate().unwrap_err(), Error::PrecisionTooLow(32));
    let ctx = QContext::numeric(int(1), 1, int(2), 128);
    assert!(matches!(ctx.numeric_algebra(), Err(Error::QOutOfDomain(_))));
}

#[test]
fn precision_controls_rounding() {
    let third = PrecComplex::from_rational(&frac(1, 3), 128);
    assert_eq!(PrecComplex::display_digits(128), 35);
    assert!(third.to_rounded_string(10).starts_with("0.333333333"));
    assert!(third.div(&PrecComplex::zero(128)).is_err());
}

#[test]
fn exact_series_evaluates_to_numeric_value() {
    let q0 = PrecComplex::from_rational(&frac(1, 2), 256);
    for n in 1..=8 {
        let exact = genocchi_poly(n, &int(1), &QContext::exact(1, 1, 128)).unwrap().value;
        let at_half = series_eval_numeric(exact.as_series().unwrap(), &q0).unwrap();
        let numeric = genocchi_poly(n, &int(1), &QContext::numeric(int(1), 1, frac(1, 2), 256)).unwrap().value;
        assert!(at_half.sub(numeric.as_numeric().unwrap()).abs_f64() < 1e-30, "n={n}");
    }
}
