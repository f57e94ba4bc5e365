//! Acceptance criteria, one PASS/FAIL line each.

use std::process::Command;
use std::time::{Duration, Instant};

use num_traits::One;
use qzeta::genocchi::{classical_genocchi_numbers, closed_form, genocchi_poly};
use qzeta::padic::{convergence_report, qhaar_measure, IntegrandSpec, Verdict};
use qzeta::qcore::numeric::parse_decimal;
use qzeta::qcore::rational::{frac, int};
use qzeta::qcore::{
    series_eval_numeric, Backend, ComplexRational, PrecComplex, QAlgebra, QContext, QSeries, Rational, SeriesAlgebra,
};
use qzeta::verify::{default_grid, verify_identity, IdentityId, IdentityReport, Params, VerifyOptions};
use qzeta::zeta::{hurwitz_euler, zeta_eval, zeta_neg_int, ZetaQuery};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn numeric_ctx() -> QContext {
    QContext::numeric(int(1), 1, frac(1, 2), 128).with_tol(1e-30)
}

fn run(id: IdentityId, grid: &[Params], ctx: &QContext, opts: VerifyOptions) -> IdentityReport {
    verify_identity(id, grid, ctx, opts)
}

fn all_exact_zero(r: &IdentityReport) -> bool {
    r.cases.iter().all(|c| c.backend == Backend::Exact && c.pass && c.residual == "0")
}

fn residual(c: &qzeta::verify::CaseReport) -> f64 {
    c.residual.parse().unwrap_or(f64::INFINITY)
}

fn max_numeric(r: &IdentityReport) -> f64 {
    r.cases.iter().filter(|c| c.backend == Backend::Numeric).map(residual).fold(0.0, f64::max)
}

fn filter(grid: Vec<Params>, keep: impl Fn(&Params) -> bool) -> Vec<Params> {
    grid.into_iter().filter(|p| keep(p)).collect()
}

fn c1_symmetry_exact() -> Outcome {
    let start = Instant::now();
    let r = run(IdentityId::SymGenThm23, &default_grid(IdentityId::SymGenThm23), &QContext::exact(1, 1, 64), VerifyOptions::default());
    let t = start.elapsed();
    outcome(all_exact_zero(&r) && t < Duration::from_secs(60), format!("{} cases zero, {:.1}s", r.summary.passed, t.as_secs_f64()))
}

fn c2_recurrence() -> Outcome {
    let r = run(IdentityId::Recurrence, &default_grid(IdentityId::Recurrence), &QContext::exact(1, 1, 64), VerifyOptions::default());
    // m = 0: q^h G̃_1(1) + G̃_1 equals 1 + q.
    let alg = SeriesAlgebra::new(1, 64);
    let g1 = closed_form(&alg, 1, &int(1), &int(1), 1).unwrap();
    let g0 = closed_form(&alg, 1, &int(0), &int(1), 1).unwrap();
    let lhs = alg.add(&alg.mul(&alg.q_pow(&int(1)).unwrap(), &g1), &g0);
    let two_q = QSeries::from_i64s(1, 64, &[1, 1]).unwrap();
    outcome(all_exact_zero(&r) && lhs == two_q, format!("{} cases zero, [2]_q at m=0", r.summary.passed))
}

fn c3_addition() -> Outcome {
    let r = run(IdentityId::AdditionEq10, &default_grid(IdentityId::AdditionEq10), &numeric_ctx_exact_base(), VerifyOptions::default());
    let exact_ok = r.cases.iter().filter(|c| c.backend == Backend::Exact).all(|c| c.residual == "0");
    let exact_n = r.cases.iter().filter(|c| c.backend == Backend::Exact).count();
    let worst = max_numeric(&r);
    outcome(r.pass && exact_ok && worst < 1e-28, format!("{exact_n} exact zero, numeric max {worst:.2e} < 1e-28"))
}

/// Exact-series base context with the numeric tolerance used by cases that
/// carry their own `q`.
fn numeric_ctx_exact_base() -> QContext {
    QContext { tol: 1e-30, ..QContext::exact(1, 1, 64) }
}

fn c4_distribution() -> Outcome {
    let r = run(IdentityId::DistributionG, &default_grid(IdentityId::DistributionG), &QContext::exact(1, 1, 64), VerifyOptions::default());
    outcome(all_exact_zero(&r), format!("{} cases zero", r.summary.passed))
}

fn c5_s_sums() -> Outcome {
    let grid = default_grid(IdentityId::SymSThm25);
    let ctx = QContext::exact(1, 1, 64);
    let derived = filter(grid.clone(), |p| p["twist"] == "derived");
    let literal = |alpha: &'static str| filter(grid.clone(), move |p| p["twist"] == "literal" && p["alpha"] == alpha);
    let d = run(IdentityId::SymSThm25, &derived, &ctx, VerifyOptions::default());
    let l1 = run(IdentityId::SymSThm25, &literal("1"), &ctx, VerifyOptions { thm25_literal: true });
    let l2 = run(IdentityId::SymSThm25, &literal("2"), &ctx, VerifyOptions { thm25_literal: true });
    outcome(
        all_exact_zero(&d) && all_exact_zero(&l1),
        format!(
            "derived {}/{} zero; printed twist alpha=1 {}/{}; printed twist alpha=2 {}/{} (reported)",
            d.summary.passed, d.summary.total, l1.summary.passed, l1.summary.total, l2.summary.passed, l2.summary.total
        ),
    )
}

fn c6_classical() -> Outcome {
    let r = run(IdentityId::ClassicalCor26, &default_grid(IdentityId::ClassicalCor26), &QContext::default(), VerifyOptions::default());
    let g = classical_genocchi_numbers(8);
    let values = g[6] == int(-3) && g[8] == int(17);
    outcome(all_exact_zero(&r) && values, format!("{} cases zero, G6 = {}, G8 = {}", r.summary.passed, g[6], g[8]))
}

fn c7_zeta_symmetry() -> Outcome {
    let r = run(IdentityId::SymZetaThm21, &default_grid(IdentityId::SymZetaThm21), &numeric_ctx(), VerifyOptions::default());
    let worst = max_numeric(&r);
    let all_numeric = r.cases.iter().all(|c| c.backend == Backend::Numeric && c.status != qzeta::verify::CaseStatus::Fail);
    outcome(all_numeric && worst < 1e-25, format!("{} cases, max {worst:.2e} < 1e-25", r.summary.total))
}

fn c8_interpolation() -> Outcome {
    let grid = filter(default_grid(IdentityId::Interpolation), |p| p["x"] != "0");
    let r = run(IdentityId::Interpolation, &grid, &numeric_ctx(), VerifyOptions::default());
    let worst = max_numeric(&r);
    let pinned_ctx = QContext::exact(1, 1, 8).with_q(frac(1, 2));
    let exact = zeta_neg_int(1, &int(0), &pinned_ctx).unwrap();
    let num = zeta_eval(&ZetaQuery::new(ComplexRational::real(int(-1)), int(0), numeric_ctx())).unwrap();
    let target = PrecComplex::from_rational(&frac(-2, 5), 128);
    let pinned = exact.as_rational() == Some(&frac(-2, 5)) && num.sub(&target).abs_f64() < 1e-30;
    outcome(
        r.summary.failed == 0 && worst < 1e-28 && pinned,
        format!("{} cases, max relative {worst:.2e} < 1e-28; ζ̃(-1,0) = {exact}", r.summary.total),
    )
}

fn c9_hurwitz() -> Outcome {
    let prec = 160;
    let pi = parse_decimal("3.14159265358979323846264338327950288419716939937510", prec).unwrap();
    let ln2 = parse_decimal("0.69314718055994530941723212145817656807550013436026", prec).unwrap();
    let s2 = hurwitz_euler(&PrecComplex::from_i64(2, prec), &int(1), 1e-30).unwrap();
    let s1 = hurwitz_euler(&PrecComplex::from_i64(1, prec), &int(1), 1e-30).unwrap();
    let e2 = s2.sub(&pi.mul(&pi).div(&PrecComplex::from_i64(6, prec)).unwrap()).abs_f64();
    let e1 = s1.sub(&ln2.mul_i64(2)).abs_f64();
    let mut tele: f64 = 0.0;
    for (s, x) in [(frac(3, 2), int(1)), (frac(5, 2), frac(1, 2)), (int(4), int(2))] {
        let sp = PrecComplex::from_rational(&s, prec);
        let a = hurwitz_euler(&sp, &x, 1e-32).unwrap();
        let b = hurwitz_euler(&sp, &(&x + int(1)), 1e-32).unwrap();
        let rhs = qzeta::qcore::numeric_pow(&PrecComplex::from_rational(&x, prec), &sp.neg()).unwrap().mul_i64(2);
        tele = tele.max(a.add(&b).sub(&rhs).abs_f64());
    }
    outcome(
        e2 < 1e-20 && e1 < 1e-20 && tele < 1e-25,
        format!("π²/6 err {e2:.1e}, 2 ln 2 err {e1:.1e}, telescoping {tele:.1e}"),
    )
}

fn c10_funceq() -> Outcome {
    let r = run(IdentityId::Funceq, &default_grid(IdentityId::Funceq), &numeric_ctx(), VerifyOptions::default());
    let worst = max_numeric(&r);
    outcome(r.summary.failed == 0 && worst < 1e-28, format!("{} cases, max {worst:.2e} < 1e-28", r.summary.total))
}

fn c11_padic() -> Outcome {
    let start = Instant::now();
    let mut ok = true;
    let mut notes = Vec::new();
    for p in [5u64, 7] {
        let q = int(p as i64 + 1);
        for degree in 0..=4 {
            let spec = IntegrandSpec::new(degree, int(0), 1, 1);
            let r = convergence_report(&spec, p, &q, 5).unwrap();
            let bound = r.levels.iter().all(|l| l.target_valuation.is_at_least(l.level as i64 - r.loss));
            ok &= r.verdict == Verdict::Monotone && r.target_ok && bound;
        }
        for n in 1..=3u32 {
            let size = p.pow(n);
            let total: Rational = (0..size).map(|a| qhaar_measure(a, n, p, &q).unwrap()).sum();
            ok &= total.is_one();
            if n < 3 {
                ok &= (0..size).all(|a| {
                    let children: Rational = (0..p).map(|j| qhaar_measure(a + j * size, n + 1, p, &q).unwrap()).sum();
                    children == qhaar_measure(a, n, p, &q).unwrap()
                });
            }
        }
        notes.push(format!("p={p}"));
    }
    let t = start.elapsed();
    outcome(ok && t < Duration::from_secs(30), format!("{} degrees 0..4, N 1..5, {:.1}s", notes.join(","), t.as_secs_f64()))
}

fn c12_cross_backend() -> Outcome {
    let q0 = PrecComplex::from_rational(&frac(1, 2), 256);
    let mut worst: f64 = 0.0;
    for (alpha, h) in [(1, 1), (2, 1), (1, 2)] {
        let exact = QContext::exact(alpha, h, 128);
        let numeric = QContext::numeric(int(alpha), h, frac(1, 2), 256);
        for n in 0..=8 {
            for x in [int(0), int(1)] {
                let s = genocchi_poly(n, &x, &exact).unwrap().value;
                let at_half = series_eval_numeric(s.as_series().unwrap(), &q0).unwrap();
                let v = genocchi_poly(n, &x, &numeric).unwrap().value;
                worst = worst.max(at_half.sub(v.as_numeric().unwrap()).abs_f64());
            }
        }
    }
    outcome(worst < 1e-30, format!("max |series(1/2) - numeric| {worst:.2e} < 1e-30"))
}

fn c13_determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_qzeta");
    let go = |args: &[&str]| Command::new(bin).args(args).env_remove("QZETA_PREC").output().expect("binary runs");
    let a = go(&["verify", "--suite", "default", "--format", "json"]);
    let b = go(&["verify", "--suite", "default", "--format", "json"]);
    let identical = a.stdout == b.stdout && !a.stdout.is_empty();
    let ok = a.status.code() == Some(0);
    let fail = go(&["verify", "--identity", "SYM_S_THM25", "--a", "1", "--b", "3", "--m", "3", "--x", "0", "--alpha", "2", "--thm25-literal"]);
    let usage = go(&["verify", "--suite", "nightly"]);
    let codes = ok && fail.status.code() == Some(1) && usage.status.code() == Some(2);
    outcome(identical && codes, format!("{} bytes identical, exit codes 0/1/2", a.stdout.len()))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 13] = [
        ("exact Genocchi symmetry, K=64", c1_symmetry_exact),
        ("recurrence, m <= 12", c2_recurrence),
        ("addition theorem", c3_addition),
        ("distribution formula", c4_distribution),
        ("S-sum symmetry", c5_s_sums),
        ("classical S-sum symmetry", c6_classical),
        ("zeta symmetry, numeric", c7_zeta_symmetry),
        ("interpolation at negative integers", c8_interpolation),
        ("Hurwitz-Euler reduction", c9_hurwitz),
        ("zeta functional equation", c10_funceq),
        ("p-adic level sums", c11_padic),
        ("series vs numeric backend", c12_cross_backend),
        ("determinism and exit codes", c13_determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        if !o.pass {
            failed += 1;
        }
        println!("{} {:>2} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, i + 1, o.detail);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
