use qzeta::qcore::{Backend, QContext};
use qzeta::verify::{
    default_grid, quick_grid, run_identities, run_suite, verify_identity, CaseStatus, IdentityId, Params, SuiteConfig,
    SuiteReport, VerifyOptions,
};

fn params(kv: &[(&str, &str)]) -> Params {
    kv.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
}

fn one(id: IdentityId, kv: &[(&str, &str)], opts: VerifyOptions) -> qzeta::verify::CaseReport {
    let r = verify_identity(id, &[params(kv)], &QContext::default(), opts);
    r.cases.into_iter().next().unwrap()
}

#[test]
fn identity_names_round_trip() {
    for id in IdentityId::ALL {
        assert_eq!(id.name().parse::<IdentityId>().unwrap(), id);
        assert_eq!(serde_json::to_string(&id).unwrap(), format!("\"{}\"", id.name()));
    }
    assert_eq!("sym-gen-thm23".parse::<IdentityId>().unwrap(), IdentityId::SymGenThm23);
    assert!("THM99".parse::<IdentityId>().is_err());
}

#[test]
fn genocchi_symmetry_example_is_exact() {
    for x in ["0", "1", "2"] {
        for alpha in ["1", "2"] {
            for h in ["1", "2"] {
                let kv = [("a", "3"), ("b", "5"), ("m", "4"), ("x", x), ("alpha", alpha), ("h", h)];
                let c = one(IdentityId::SymGenThm23, &kv, VerifyOptions::default());
                assert_eq!((c.backend, c.residual.as_str(), c.pass), (Backend::Exact, "0", true), "{kv:?}");
            }
        }
    }
}

#[test]
fn zeta_symmetry_example_is_numeric() {
    let kv = [("a", "3"), ("b", "5"), ("s", "2.5"), ("x", "1"), ("alpha", "1"), ("h", "1"), ("q", "1/2")];
    let c = one(IdentityId::SymZetaThm21, &kv, VerifyOptions::default());
    assert_eq!(c.backend, Backend::Numeric);
    assert!(c.pass);
    assert!(c.residual.parse::<f64>().unwrap() < 1e-25);
}

#[test]
fn zeta_identities_run_exactly_at_negative_integers() {
    let kv = [("a", "3"), ("b", "5"), ("s", "-2"), ("x", "1"), ("alpha", "2"), ("h", "1")];
    let c = one(IdentityId::SymZetaThm21, &kv, VerifyOptions::default());
    assert_eq!((c.backend, c.pass), (Backend::Exact, true));
    let c = one(IdentityId::SymZetaThm21, &[("a", "3"), ("b", "5"), ("s", "5/2"), ("x", "1")], VerifyOptions::default());
    assert_eq!(c.status, CaseStatus::Fail);
    assert!(c.note.unwrap().contains("numeric"));
}

#[test]
fn literal_twist_is_soft_unless_requested() {
    let kv = [("a", "1"), ("b", "3"), ("m", "3"), ("x", "0"), ("alpha", "2"), ("h", "1"), ("twist", "literal")];
    let soft = one(IdentityId::SymSThm25, &kv, VerifyOptions::default());
    assert!(!soft.pass && !soft.gated);
    let hard = one(IdentityId::SymSThm25, &kv, VerifyOptions { thm25_literal: true });
    assert!(!hard.pass && hard.gated);
    let mut at_one = kv;
    at_one[4] = ("alpha", "1");
    assert!(one(IdentityId::SymSThm25, &at_one, VerifyOptions { thm25_literal: true }).pass);
}

#[test]
fn even_distribution_is_reported_but_not_gated() {
    let kv = [("s", "5/2"), ("x", "1"), ("alpha", "1"), ("h", "1"), ("q", "1/2")];
    let c = one(IdentityId::Cor22, &kv, VerifyOptions::default());
    assert!(!c.gated);
    assert_eq!(c.status, CaseStatus::Fail);
}

#[test]
fn report_json_round_trips() {
    let mut cfg = SuiteConfig::named("quick").unwrap();
    cfg.ctx = QContext::exact(1, 1, 32);
    let r = run_identities(&cfg, &[IdentityId::Recurrence, IdentityId::Cor22, IdentityId::ClassicalCor26]).unwrap();
    let text = serde_json::to_string(&r).unwrap();
    let back: SuiteReport = serde_json::from_str(&text).unwrap();
    assert_eq!(back, r);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let case = &v["identities"][0]["cases"][0];
    for key in ["params", "backend", "residual", "pass"] {
        assert!(case.get(key).is_some(), "{key}");
    }
}

#[test]
fn parallel_runs_are_deterministic() {
    let mut cfg = SuiteConfig::named("quick").unwrap();
    cfg.jobs = Some(1);
    let a = run_suite(&cfg).unwrap();
    cfg.jobs = Some(3);
    let b = run_suite(&cfg).unwrap();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    assert!(a.pass);
}

#[test]
fn doubling_the_order_keeps_verdicts() {
    let id = IdentityId::DistributionG;
    let grid = quick_grid(id);
    let lo = verify_identity(id, &grid, &QContext::exact(1, 1, 32), VerifyOptions::default());
    let hi = verify_identity(id, &grid, &QContext::exact(1, 1, 64), VerifyOptions::default());
    assert!(lo.pass && hi.pass);
}

#[test]
fn grids_cover_every_identity() {
    for id in IdentityId::ALL {
        assert!(!default_grid(id).is_empty(), "{id}");
        assert!(!quick_grid(id).is_empty(), "{id}");
    }
}
