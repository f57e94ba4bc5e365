//! Residual computations, one per identity. Each generic function returns
//! `(LHS, RHS)` in whatever algebra the case runs in.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::genocchi::{addition_rhs_in, classical_genocchi_poly, closed_form, s_classical, s_tilde_in};
use crate::qcore::rational::{self, ComplexRational, Rational};
use crate::qcore::{numeric_pow, required_scale, Algebra, Backend, PrecComplex, QAlgebra, QContext, Residual};
use crate::verify::report::{IdentityId, Params};
use crate::zeta::zeta_in;

pub(crate) struct Outcome {
    pub backend: Backend,
    pub residual: Residual,
}

fn sign<A: QAlgebra>(alg: &A, i: u32, v: A::Value) -> A::Value {
    if i % 2 == 1 {
        alg.neg(&v)
    } else {
        v
    }
}

fn r(n: u32) -> Rational {
    rational::int(n as i64)
}

/// Typed access to the string parameters of a case.
struct Args<'a> {
    id: IdentityId,
    params: &'a Params,
}

impl Args<'_> {
    fn raw(&self, key: &str) -> Result<&str> {
        self.params
            .get(key)
            .map(String::as_str)
            .ok_or_else(|| Error::ConfigInvalid(format!("{} needs parameter {key:?}", self.id)))
    }

    fn u32(&self, key: &str) -> Result<u32> {
        let v = self.raw(key)?;
        v.parse().map_err(|_| Error::ConfigInvalid(format!("{key} must be a non-negative integer, got {v:?}")))
    }

    fn rat(&self, key: &str) -> Result<Rational> {
        rational::parse_rational(self.raw(key)?)
    }

    fn complex(&self, key: &str) -> Result<ComplexRational> {
        ComplexRational::parse(self.raw(key)?)
    }
}

/// The context a case runs in: `alpha`, `h` and `q` parameters override
/// the suite context, and a `q` parameter selects the numeric backend.
fn case_context(args: &Args<'_>, base: &QContext) -> Result<QContext> {
    let mut ctx = base.clone();
    if args.params.contains_key("alpha") {
        ctx.alpha = args.rat("alpha")?;
    }
    if args.params.contains_key("h") {
        ctx.h = args.u32("h")?;
    }
    if args.params.contains_key("q") {
        ctx.q = Some(args.complex("q")?);
        ctx.backend = Backend::Numeric;
    }
    ctx.validate()?;
    Ok(ctx)
}

fn check_parity(args: &Args<'_>) -> Result<()> {
    let moduli = args.id.odd_moduli();
    if moduli.is_empty() {
        return Ok(());
    }
    let a = args.u32("a")?;
    let b = if moduli.contains(&"b") { args.u32("b")? } else { 1 };
    if a % 2 == 0 || b % 2 == 0 {
        return Err(Error::ParityViolation { identity: args.id.to_string(), a, b });
    }
    Ok(())
}

macro_rules! adjudicate {
    ($alg:expr, |$a:ident| $body:expr) => {
        match $alg {
            Algebra::Series($a) => {
                let (l, r) = $body?;
                Outcome { backend: Backend::Exact, residual: $a.residual(&$a.sub(&l, &r)) }
            }
            Algebra::Rational($a) => {
                $a.check_generic_q()?;
                let (l, r) = $body?;
                Outcome { backend: Backend::Exact, residual: $a.residual(&$a.sub(&l, &r)) }
            }
            Algebra::Numeric($a) => {
                $a.check_generic_q()?;
                let (l, r) = $body?;
                Outcome { backend: Backend::Numeric, residual: $a.residual(&$a.sub(&l, &r)) }
            }
        }
    };
}

/// Evaluates one case. Numeric tolerances are applied by the caller.
pub(crate) fn evaluate(id: IdentityId, params: &Params, base: &QContext) -> Result<Outcome> {
    let args = Args { id, params };
    check_parity(&args)?;
    if id == IdentityId::ClassicalCor26 {
        let (l, r) = classical_cor26(args.u32("a")?, args.u32("b")?, args.u32("m")?, &args.rat("x")?);
        let d = (l - r).abs();
        let residual =
            Residual { magnitude: rational::to_f64(&d), text: d.to_string(), exact: true, is_zero: d.is_zero() };
        return Ok(Outcome { backend: Backend::Exact, residual });
    }
    let ctx = case_context(&args, base)?;
    if !id.backends().contains(&ctx.backend) {
        return Err(Error::BackendUnsupported(format!("{id} is not checked on the {} backend", ctx.backend)));
    }
    if ctx.backend == Backend::Exact && ctx.h == 0 {
        return Err(Error::H0InExactBackend);
    }
    let alpha = ctx.alpha.clone();
    let h = ctx.h;
    Ok(match id {
        IdentityId::Recurrence => {
            let m = args.u32("m")?;
            adjudicate!(&ctx.algebra(required_scale([&alpha])?)?, |a| recurrence(a, m, &alpha, h))
        }
        IdentityId::DistributionG => {
            let (am, n, x) = (args.u32("a")?, args.u32("n")?, args.rat("x")?);
            let scale = required_scale([&(&alpha * &x), &alpha])?;
            adjudicate!(&ctx.algebra(scale)?, |a| distribution_g(a, am, n, &x, &alpha, h))
        }
        IdentityId::AdditionEq10 => {
            let (n, x, y) = (args.u32("n")?, args.rat("x")?, args.rat("y")?);
            let scale = required_scale([&(&alpha * &x), &(&alpha * &y), &alpha])?;
            adjudicate!(&ctx.algebra(scale)?, |a| addition(a, n, &x, &y, &alpha, h))
        }
        IdentityId::SymGenThm23 => {
            let (am, bm, m, x) = (args.u32("a")?, args.u32("b")?, args.u32("m")?, args.rat("x")?);
            let scale = required_scale([&(&alpha * &x * r(am * bm)), &alpha])?;
            adjudicate!(&ctx.algebra(scale)?, |a| thm23(a, am, bm, m, &x, &alpha, h))
        }
        IdentityId::SymSThm25 => {
            let (am, bm, m, x) = (args.u32("a")?, args.u32("b")?, args.u32("m")?, args.rat("x")?);
            let literal = match args.raw("twist")? {
                "derived" => false,
                "literal" => true,
                other => return Err(Error::ConfigInvalid(format!("twist must be derived or literal, got {other:?}"))),
            };
            let scale = required_scale([&(&alpha * &x * r(am * bm)), &alpha])?;
            adjudicate!(&ctx.algebra(scale)?, |a| thm25(a, am, bm, m, &x, &alpha, h, literal))
        }
        IdentityId::SymZetaThm21 | IdentityId::DistZetaEq9 | IdentityId::Cor22 | IdentityId::Funceq => {
            zeta_identity(id, &args, &ctx)?
        }
        IdentityId::Interpolation => interpolation(&args, &ctx)?,
        IdentityId::ClassicalCor26 => unreachable!("handled above"),
    })
}

fn recurrence<A: QAlgebra>(alg: &A, m: u32, alpha: &Rational, h: u32) -> Result<(A::Value, A::Value)> {
    let k = Rational::new(BigInt::from(1), BigInt::from(m + 1));
    let at_one = closed_form(alg, m + 1, &r(1), alpha, h)?;
    let at_zero = closed_form(alg, m + 1, &r(0), alpha, h)?;
    let lhs = alg.scale(&alg.add(&alg.mul(&alg.q_pow(&r(h))?, &at_one), &at_zero), &k);
    let rhs = if m == 0 { alg.two_q()? } else { alg.zero() };
    Ok((lhs, rhs))
}

fn distribution_g<A: QAlgebra>(alg: &A, a: u32, n: u32, x: &Rational, alpha: &Rational, h: u32) -> Result<(A::Value, A::Value)> {
    let lhs = closed_form(alg, n, x, alpha, h)?;
    if n == 0 {
        return Ok((lhs, alg.zero()));
    }
    let ra = alg.rebase(&r(a));
    let mut sum = alg.zero();
    for i in 0..a {
        let arg = (x + r(i)) / r(a);
        let term = alg.mul(&alg.q_pow(&r(i * h))?, &closed_form(&ra, n, &arg, alpha, h)?);
        sum = alg.add(&sum, &sign(alg, i, term));
    }
    let rhs = alg.mul(&alg.mul(&sum, &alg.two_q()?), &ra.inv_one_plus_q_pow(&r(1))?);
    Ok((lhs, alg.mul_bracket_pow(&rhs, &r(a), alpha, n - 1)?))
}

fn addition<A: QAlgebra>(alg: &A, n: u32, x: &Rational, y: &Rational, alpha: &Rational, h: u32) -> Result<(A::Value, A::Value)> {
    Ok((closed_form(alg, n, &(x + y), alpha, h)?, addition_rhs_in(alg, n, x, y, alpha, h)?))
}

/// `[2]_{q^b} [a]_{q^α}^{m-1} Σ_{i<a} (-1)^i q^{ibh} G̃_{m,q^a}(bx + bi/a)`.
fn thm23_side<A: QAlgebra>(alg: &A, a: u32, b: u32, m: u32, x: &Rational, alpha: &Rational, h: u32) -> Result<A::Value> {
    let ra = alg.rebase(&r(a));
    let mut sum = alg.zero();
    for i in 0..a {
        let arg = r(b) * x + r(b * i) / r(a);
        let term = alg.mul(&alg.q_pow(&r(i * b * h))?, &closed_form(&ra, m, &arg, alpha, h)?);
        sum = alg.add(&sum, &sign(alg, i, term));
    }
    let sum = alg.mul(&sum, &alg.rebase(&r(b)).two_q()?);
    alg.mul_bracket_pow(&sum, &r(a), alpha, m - 1)
}

fn thm23<A: QAlgebra>(alg: &A, a: u32, b: u32, m: u32, x: &Rational, alpha: &Rational, h: u32) -> Result<(A::Value, A::Value)> {
    if m == 0 {
        return Ok((alg.zero(), alg.zero()));
    }
    Ok((thm23_side(alg, a, b, m, x, alpha, h)?, thm23_side(alg, b, a, m, x, alpha, h)?))
}

/// `[2]_{q^b} Σ_{i=1}^m C(m,i) [a]^{i-1} [b]^{m-i} G̃_{i,q^a}(bx) S̃_{m-i:q^b,t_i}(a)`.
///
/// The `i = 0` term carries `G̃_0 = 0` and is skipped. The twist is
/// `t_i = h + α(i-1)`, or the printed `h + i - 1` when `literal`.
#[allow(clippy::too_many_arguments)]
fn thm25_side<A: QAlgebra>(alg: &A, a: u32, b: u32, m: u32, x: &Rational, alpha: &Rational, h: u32, literal: bool) -> Result<A::Value> {
    let ra = alg.rebase(&r(a));
    let rb = alg.rebase(&r(b));
    let mut sum = alg.zero();
    for i in 1..=m {
        let twist = if literal { rational::int(h as i64 + i as i64 - 1) } else { r(h) + alpha * r(i - 1) };
        let twist = rational::to_i64(&twist)
            .ok_or_else(|| Error::ConfigInvalid(format!("twist {twist} is not an integer")))?;
        let g = closed_form(&ra, i, &(r(b) * x), alpha, h)?;
        let s = s_tilde_in(&rb, m - i, a, twist, alpha)?;
        let term = alg.mul_bracket_pow(&alg.mul(&g, &s), &r(a), alpha, i - 1)?;
        let term = alg.mul_bracket_pow(&term, &r(b), alpha, m - i)?;
        let c = Rational::from_integer(rational::binomial(m, i));
        sum = alg.add(&sum, &alg.scale(&term, &c));
    }
    Ok(alg.mul(&sum, &rb.two_q()?))
}

#[allow(clippy::too_many_arguments)]
fn thm25<A: QAlgebra>(alg: &A, a: u32, b: u32, m: u32, x: &Rational, alpha: &Rational, h: u32, literal: bool) -> Result<(A::Value, A::Value)> {
    Ok((thm25_side(alg, a, b, m, x, alpha, h, literal)?, thm25_side(alg, b, a, m, x, alpha, h, literal)?))
}

/// `Σ_{i=1}^m C(m,i) a^{i-1} b^{m-i} G_i(bx) S_{m-i}(a)` and its mirror.
pub(crate) fn classical_cor26(a: u32, b: u32, m: u32, x: &Rational) -> (Rational, Rational) {
    let side = |a: u32, b: u32| {
        (1..=m).fold(Rational::zero(), |acc, i| {
            let c = Rational::from_integer(rational::binomial(m, i));
            let pa = rational::rational_pow(&r(a), i as i64 - 1).expect("a >= 1");
            let pb = rational::rational_pow(&r(b), (m - i) as i64).expect("b >= 1");
            let g = classical_genocchi_poly(i, &(r(b) * x));
            acc + c * pa * pb * g * Rational::from_integer(s_classical(m - i, a))
        })
    };
    (side(a, b), side(b, a))
}

/// What a zeta identity needs from its backend: `ζ̃` in a (rebased)
/// algebra and the factor `[y]_{q^α}^{-s}`.
struct ZetaOps<'a, A: QAlgebra> {
    zeta: ZetaOp<'a, A>,
    neg_pow: ZetaOp<'a, A>,
}

type ZetaOp<'a, A> = Box<dyn Fn(&A, &Rational) -> Result<<A as QAlgebra>::Value> + 'a>;

fn zeta_identity(id: IdentityId, args: &Args<'_>, ctx: &QContext) -> Result<Outcome> {
    let s = args.complex("s")?;
    let x = args.rat("x")?;
    let a = match id {
        IdentityId::SymZetaThm21 | IdentityId::DistZetaEq9 => args.u32("a")?,
        IdentityId::Cor22 => 2,
        _ => 1,
    };
    let b = if id == IdentityId::SymZetaThm21 { args.u32("b")? } else { 1 };
    let alpha = ctx.alpha.clone();
    let h = ctx.h;
    // Component sums run well below the case tolerance.
    let inner = ctx.clone().with_tol(ctx.tol / 100.0);
    match ctx.backend {
        Backend::Numeric => {
            let alg = ctx.numeric_algebra()?;
            alg.check_generic_q()?;
            let minus_s = PrecComplex::from_complex_rational(&s, alg.precision()).neg();
            let ops = ZetaOps {
                zeta: Box::new(|al: &crate::qcore::NumericAlgebra, y: &Rational| zeta_in(al, &s, y, &inner)),
                neg_pow: Box::new(|al: &crate::qcore::NumericAlgebra, y: &Rational| {
                    let br = al.bracket(y, &alpha)?;
                    match s.non_positive_integer() {
                        Some(n) => Ok(br.powi(n as u64)),
                        None => numeric_pow(&br, &minus_s),
                    }
                }),
            };
            let (l, r) = zeta_sides(&alg, id, &ops, a, b, &x, h)?;
            Ok(Outcome { backend: Backend::Numeric, residual: alg.residual(&alg.sub(&l, &r)) })
        }
        Backend::Exact => {
            let n = s.non_positive_integer().ok_or_else(|| {
                Error::BackendUnsupported(format!("{id} at s = {s} needs the numeric backend"))
            })?;
            let k = Rational::new(BigInt::from(1), BigInt::from(n + 1));
            let scale = required_scale([&(&alpha * &x * r(a * b)), &(&alpha * &x), &alpha, &(&alpha * r(a) / r(2))])?;
            let alg = ctx.algebra(scale)?;
            Ok(adjudicate!(&alg, |al| {
                zeta_sides(al, id, &exact_ops(n, &alpha, h, &k), a, b, &x, h)
            }))
        }
    }
}

/// `ζ̃(-n, y) = G̃_{n+1}(y)/(n+1)` and `[y]^n`, exactly.
fn exact_ops<'a, A: QAlgebra>(n: u32, alpha: &'a Rational, h: u32, k: &'a Rational) -> ZetaOps<'a, A> {
    ZetaOps {
        zeta: Box::new(move |g: &A, y: &Rational| Ok(g.scale(&closed_form(g, n + 1, y, alpha, h)?, k))),
        neg_pow: Box::new(move |g: &A, y: &Rational| g.bracket_pow(y, alpha, n)),
    }
}

fn zeta_sides<A: QAlgebra>(
    alg: &A,
    id: IdentityId,
    ops: &ZetaOps<'_, A>,
    a: u32,
    b: u32,
    x: &Rational,
    h: u32,
) -> Result<(A::Value, A::Value)> {
    // Σ_{i<a} (-1)^i q^{i·w·h} ζ̃_{q^a}(s, y + c·i/a) with the given weight
    // `w` and step `c`.
    let twisted = |a: u32, w: u32, y: &Rational, c: u32| -> Result<A::Value> {
        let ra = alg.rebase(&r(a));
        let mut sum = alg.zero();
        for i in 0..a {
            let arg = y + r(c * i) / r(a);
            let term = alg.mul(&alg.q_pow(&r(i * w * h))?, &(ops.zeta)(&ra, &arg)?);
            sum = alg.add(&sum, &sign(alg, i, term));
        }
        Ok(sum)
    };
    match id {
        IdentityId::SymZetaThm21 => {
            let side = |a: u32, b: u32| -> Result<A::Value> {
                let sum = twisted(a, b, &(r(b) * x), b)?;
                let f = alg.mul(&alg.rebase(&r(b)).two_q()?, &(ops.neg_pow)(alg, &r(a))?);
                Ok(alg.mul(&f, &sum))
            };
            Ok((side(a, b)?, side(b, a)?))
        }
        IdentityId::DistZetaEq9 | IdentityId::Cor22 => {
            let lhs = (ops.zeta)(alg, &(r(a) * x))?;
            let sum = twisted(a, 1, x, 1)?;
            let ra = alg.rebase(&r(a));
            let f = alg.mul(&alg.two_q()?, &(ops.neg_pow)(alg, &r(a))?);
            let rhs = alg.mul(&alg.mul(&f, &sum), &ra.inv_one_plus_q_pow(&r(1))?);
            Ok((lhs, rhs))
        }
        IdentityId::Funceq => {
            let next = alg.mul(&alg.q_pow(&r(h))?, &(ops.zeta)(alg, &(x + r(1)))?);
            let lhs = alg.add(&(ops.zeta)(alg, x)?, &next);
            let rhs = alg.mul(&alg.two_q()?, &(ops.neg_pow)(alg, x)?);
            Ok((lhs, rhs))
        }
        other => unreachable!("{other} is not a zeta identity"),
    }
}

/// Relative difference between the series at `s = -n` and
/// `G̃_{n+1}(x)/(n+1)`.
fn interpolation(args: &Args<'_>, ctx: &QContext) -> Result<Outcome> {
    let n = args.u32("n")?;
    let x = args.rat("x")?;
    let alg = ctx.numeric_algebra()?;
    alg.check_generic_q()?;
    let inner = ctx.clone().with_tol(ctx.tol / 100.0);
    let s = ComplexRational::real(-r(n));
    let series = zeta_in(&alg, &s, &x, &inner)?;
    let poly = closed_form(&alg, n + 1, &x, &ctx.alpha, ctx.h)?;
    let poly = poly.mul(&PrecComplex::from_rational(&Rational::new(BigInt::from(1), BigInt::from(n + 1)), alg.precision()));
    let diff = series.sub(&poly);
    let rel = if poly.is_zero() { diff.abs() } else { diff.abs().div(&poly.abs())? };
    let residual = Residual { magnitude: rel.re_f64(), text: rel.to_decimal_string(), exact: false, is_zero: rel.is_zero() };
    Ok(Outcome { backend: Backend::Numeric, residual })
}
