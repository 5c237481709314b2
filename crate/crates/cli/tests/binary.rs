use std::process::{Command, Output};

fn tetra(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tetra")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn exit_status_contract() {
    assert_eq!(code(&tetra(&["verify-pal", "--alpha", "0.25,0"])), 0);
    assert_eq!(code(&tetra(&["verify-pal", "--alpha", "1.1,0"])), 1);
    assert_eq!(code(&tetra(&["membership", "--point", "0.9,0;0.9,0;0,0"])), 1);
    for bad in [
        &["verify-pal", "--alpha", "0.25"][..],
        &["verify-pal", "--depth", "1"],
        &["verify-pal", "--tol", "-1"],
        &["membership"],
        &["membership", "--point", "1,0;2,0"],
        &["no-such-suite"],
        &[],
    ] {
        let o = tetra(bad);
        assert_eq!(code(&o), 2, "{bad:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn verify_pal_reports_the_norm_of_v1() {
    let o = tetra(&["verify-pal", "--alpha", "0.25,0"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let norm = v["checks"].as_array().unwrap().iter().find(|c| c["name"] == "norm-V1").unwrap();
    assert!((norm["value"].as_f64().unwrap() - 0.25).abs() <= 1e-12);
    assert_eq!(norm["status"], "pass");
    assert_eq!(v["summary"]["verdict"], "pass");
    assert_eq!(v["config"]["alpha"], serde_json::json!([0.25, 0.0]));
}

#[test]
fn membership_reports_the_achieved_norm() {
    let o = tetra(&["membership", "--point", "0.9,0;0.9,0;0,0"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let c = &v["checks"][0];
    assert_eq!(c["status"], "fail");
    let norm = c["value"].as_f64().unwrap();
    assert!((1.79..=1.81).contains(&norm));
}

#[test]
fn output_is_byte_deterministic_and_out_matches_stdout() {
    let args = ["verify-adjoint", "--alpha", "-0.5,0.5", "--seed", "7"];
    let (a, b) = (tetra(&args), tetra(&args));
    assert_eq!(a.stdout, b.stdout);
    let dir = std::env::temp_dir().join(format!("tetra-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let mut with_out = args.to_vec();
    with_out.extend(["--out", path.to_str().unwrap()]);
    let o = tetra(&with_out);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), a.stdout);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn text_format_prints_a_table_and_summary() {
    let o = tetra(&["xi-check", "--alpha", "0.5,0", "--format", "text"]);
    assert_eq!(code(&o), 0);
    let s = String::from_utf8(o.stdout).unwrap();
    assert!(s.lines().nth(1).unwrap().starts_with("STATUS"));
    assert!(s.contains("xi-zero-reduction"));
    assert!(s.trim_end().ends_with("verdict pass"));
}
