use std::f64::consts::FRAC_PI_4;

use tetra_cli::{run_suite, Report, RunConfig, Status, Suite};
use tetrablock::tetrablock::geometry::TetrablockPoint;
use tetrablock::Scalar;

fn magnitudes() -> [f64; 5] {
    [0.0, 0.25, 0.5, 0.9, 1.0]
}

fn phases() -> [Scalar; 3] {
    [Scalar::new(1.0, 0.0), Scalar::new(0.0, 1.0), Scalar::from_polar(1.0, FRAC_PI_4)]
}

fn run(suite: Suite, alpha: Scalar) -> Report {
    let cfg = RunConfig::with_alpha(suite, alpha);
    cfg.validate().unwrap();
    run_suite(&cfg)
}

fn value(r: &Report, name: &str) -> f64 {
    let c = r.checks.iter().find(|c| c.name == name).unwrap_or_else(|| panic!("no check {name}"));
    match c.value {
        tetra_cli::CheckValue::Real(x) => x,
        v => panic!("{name} has value {v:?}"),
    }
}

fn failing(r: &Report) -> Vec<&str> {
    r.checks.iter().filter(|c| c.status != Status::Pass).map(|c| c.name.as_str()).collect()
}

#[test]
fn alpha_sweep_passes_every_pal_suite() {
    for m in magnitudes() {
        for ph in phases() {
            let alpha = ph * m;
            for suite in [Suite::VerifyPal, Suite::VerifyAdjoint, Suite::VerifyToeplitzForm, Suite::XiCheck] {
                let r = run(suite, alpha);
                assert!(failing(&r).is_empty(), "{} at {alpha}: {:?}", suite.name(), failing(&r));
                assert_eq!(r.exit_code(), 0);
            }
        }
    }
}

#[test]
fn pal_norms_equal_the_modulus_of_alpha() {
    for m in magnitudes() {
        for ph in phases() {
            let r = run(Suite::VerifyPal, ph * m);
            assert!((value(&r, "norm-V1") - m).abs() <= 1e-12);
            assert!((value(&r, "norm-V2") - m).abs() <= 1e-12);
            assert!((value(&r, "commutator-balance-gap") - m * m).abs() <= 1e-12);
        }
    }
    let r = run(Suite::VerifyPal, Scalar::new(0.25, 0.0));
    assert!((value(&r, "norm-V1") - 0.25).abs() <= 1e-12);
    let r = run(Suite::VerifyPal, Scalar::new(0.0, 0.0));
    assert_eq!((value(&r, "norm-V1"), value(&r, "norm-V2")), (0.0, 0.0));
}

#[test]
fn alpha_beyond_the_disc_fails_exactly_the_norm_checks() {
    for ph in phases() {
        let alpha = ph * 1.1;
        assert_eq!(failing(&run(Suite::VerifyPal, alpha)), ["norm-V1", "norm-V2"]);
        assert_eq!(failing(&run(Suite::VerifyAdjoint, alpha)), ["norm-W1", "norm-W2"]);
        assert_eq!(failing(&run(Suite::VerifyToeplitzForm, alpha)), ["xi-sup-norm", "norm-V1", "norm-V2"]);
        assert_eq!(failing(&run(Suite::XiCheck, alpha)), ["xi-sup-norm"]);
        let r = run(Suite::VerifyPal, alpha);
        assert_eq!(r.exit_code(), 1);
        assert!((value(&r, "norm-V1") - 1.1).abs() <= 1e-12);
    }
}

#[test]
fn xi_zero_leaves_the_commutator_gap() {
    // With F2 = 0 and F1 carrying the single entry alpha, [F1,F1*] is
    // diag(|alpha|^2, -|alpha|^2) on one block.
    let alpha = Scalar::new(0.3, -0.4);
    let r = run(Suite::XiCheck, alpha);
    assert!((value(&r, "xi-zero-reduction") - 0.25).abs() <= 1e-15);
}

#[test]
fn xi_search_finds_a_candidate_inside_the_disc_only() {
    let r = run(Suite::XiSearch, Scalar::new(0.0, 0.5));
    assert!(failing(&r).is_empty(), "{:?}", failing(&r));
    let r = run(Suite::XiSearch, Scalar::new(1.1, 0.0));
    assert_eq!(failing(&r), ["xi-search-candidate"]);
}

#[test]
fn membership_rejects_a_point_outside_and_accepts_the_boundary() {
    let mut cfg = RunConfig::new(Suite::Membership);
    cfg.point = Some("0.9,0;0.9,0;0,0".parse::<TetrablockPoint>().unwrap());
    let r = run_suite(&cfg);
    let c = &r.checks[0];
    assert_eq!(c.status, Status::Fail);
    let norm = value(&r, "membership-closure");
    assert!((1.79..=1.81).contains(&norm), "{norm}");
    assert_eq!(r.exit_code(), 1);

    // pi of the unitary [[0, 1], [-1, 0]] is (0, 0, 1).
    cfg.point = Some("0,0;0,0;1,0".parse().unwrap());
    cfg.mode = tetrablock::tetrablock::geometry::MembershipMode::Boundary;
    let r = run_suite(&cfg);
    assert!(failing(&r).is_empty(), "{:?}", r.checks);
}

#[test]
fn reports_are_deterministic() {
    for suite in [Suite::VerifyPal, Suite::XiSearch] {
        let mut cfg = RunConfig::with_alpha(suite, Scalar::new(0.5, 0.5));
        cfg.seed = 42;
        let (a, b) = (run_suite(&cfg).to_json(), run_suite(&cfg).to_json());
        assert_eq!(a, b);
        assert_eq!(run_suite(&cfg).to_text(), run_suite(&cfg).to_text());
    }
}

#[test]
fn invalid_configs_are_rejected() {
    let mut cfg = RunConfig::new(Suite::VerifyPal);
    cfg.window_depth = 1;
    assert!(cfg.validate().is_err());
    let mut cfg = RunConfig::new(Suite::VerifyPal);
    cfg.tol = 0.0;
    assert!(cfg.validate().is_err());
    cfg.tol = f64::NAN;
    assert!(cfg.validate().is_err());
    assert!(RunConfig::new(Suite::Membership).validate().is_err());
    for s in Suite::ALL.into_iter().filter(|s| *s != Suite::Membership) {
        assert!(RunConfig::new(s).validate().is_ok());
    }
}

#[test]
fn json_matches_the_report_schema() {
    let r = run(Suite::VerifyToeplitzForm, Scalar::new(0.9, 0.0));
    let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
    let top: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(top, ["checks", "config", "summary"]);
    for c in v["checks"].as_array().unwrap() {
        let keys: Vec<&str> = c.as_object().unwrap().keys().map(String::as_str).collect();
        assert_eq!(keys, ["deviation", "name", "paperAnchor", "status", "tolerance", "value"]);
        assert!(!c["paperAnchor"].as_str().unwrap().is_empty());
        assert!(c["deviation"].is_number() && c["tolerance"].is_number());
    }
    let s = &v["summary"];
    assert_eq!(s["pass"].as_u64().unwrap() as usize, r.checks.len());
    assert_eq!(s["verdict"], "pass");
}
