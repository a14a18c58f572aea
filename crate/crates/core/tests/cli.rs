use std::path::PathBuf;
use std::process::Command as Process;

use choice_context::axioms::AuditReport;
use choice_context::cli::{run, AxiomsReport, BellReport, RunConfig, EXIT_BUDGET, EXIT_INPUT, EXIT_OK, EXIT_STRICT};
use choice_context::contextuality::{Classification, Kind};
use choice_context::format::{parse_model, ModelDocument};
use choice_context::{validate, Status};
use clap::Parser;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name).display().to_string()
}

fn exec(args: &[&str]) -> (i32, String, String) {
    let config = RunConfig::try_parse_from(std::iter::once("choicectx").chain(args.iter().copied())).unwrap();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(&config, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn classify_coin_prints_noncontextual() {
    let (code, out, _) = exec(&["classify", &fixture("example3_coin.json")]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.lines().next(), Some("NonContextual"));
}

#[test]
fn audit_luce_raiffa() {
    let (code, out, _) = exec(&["audit", &fixture("luce_raiffa.json")]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("weak_axiom: Fails"));
    assert!(out.contains("classification: StronglyContextual"));
    assert!(out.contains("region: violates weak axiom, contextual"));

    let (_, json, _) = exec(&["--machine", "audit", &fixture("luce_raiffa.json")]);
    let report: AuditReport = serde_json::from_str(&json).unwrap();
    assert_eq!(report.weak_axiom.status, Status::Fails);
    assert_eq!(report.classification.kind, Kind::StronglyContextual);
    assert!(report.all_consistent());
}

#[test]
fn gen_is_deterministic_and_valid() {
    let args = ["gen", "--vars", "4", "--contexts", "4", "--density", "0.6", "--seed", "7"];
    let (code, first, _) = exec(&args);
    let (_, second, _) = exec(&args);
    assert_eq!(code, EXIT_OK);
    assert_eq!(first, second);
    match parse_model(&first).unwrap() {
        ModelDocument::Possibilistic(m) => assert!(validate(&m).is_holds()),
        other => panic!("{other:?}"),
    }
    let (_, other_seed, _) = exec(&["gen", "--vars", "4", "--contexts", "4", "--density", "0.6", "--seed", "8"]);
    assert_ne!(first, other_seed);
}

#[test]
fn gen_closed_cover() {
    let (_, text, _) = exec(&["gen", "--vars", "6", "--contexts", "5", "--density", "0.5", "--seed", "3", "--closed"]);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.json");
    std::fs::write(&path, text).unwrap();
    let (_, json, _) = exec(&["--machine", "axioms", path.to_str().unwrap()]);
    let report: AxiomsReport = serde_json::from_str(&json).unwrap();
    assert!(report.intersection_closed.is_holds());
}

#[test]
fn gen_with_zero_density_warns() {
    let (code, _, err) = exec(&["gen", "--vars", "3", "--contexts", "2", "--density", "0", "--seed", "1"]);
    assert_eq!(code, EXIT_OK);
    assert!(err.contains("warning"));
}

#[test]
fn human_and_machine_agree() {
    for name in ["example3_coin.json", "example4_hardy.json", "pr_box.json", "thm6_signalling.json"] {
        let (_, human, _) = exec(&["classify", &fixture(name)]);
        let (_, json, _) = exec(&["--machine", "classify", &fixture(name)]);
        let c: Classification = serde_json::from_str(&json).unwrap();
        assert_eq!(human.lines().next().unwrap(), format!("{:?}", c.kind));
        assert!(human.contains(&format!("global sections: {}", c.section_count)));
        assert_eq!(serde_json::to_string_pretty(&c).unwrap().trim(), json.trim());

        let (_, human, _) = exec(&["axioms", &fixture(name)]);
        let (_, json, _) = exec(&["--machine", "axioms", &fixture(name)]);
        let r: AxiomsReport = serde_json::from_str(&json).unwrap();
        for (label, v) in [
            ("weak_axiom", &r.weak_axiom),
            ("no_signalling", &r.no_signalling),
            ("intersection_closed", &r.intersection_closed),
            ("overlap_property", &r.overlap_property),
            ("choice_structure", &r.choice_structure),
        ] {
            assert!(human.contains(&format!("{label}: {:?}", v.status)), "{name} {label}");
        }
    }
}

#[test]
fn strict_mode_exit_codes() {
    let (code, _, _) = exec(&["--strict", "classify", &fixture("example4_hardy.json")]);
    assert_eq!(code, EXIT_STRICT);
    let (code, _, _) = exec(&["--strict", "classify", &fixture("example3_coin.json")]);
    assert_eq!(code, EXIT_OK);
    let (code, _, _) = exec(&["axioms", "--strict", &fixture("luce_raiffa.json")]);
    assert_eq!(code, EXIT_STRICT);
    let (code, _, _) = exec(&["--strict", "bell", &fixture("pr_box_prob.json"), "--props", &fixture("pr_box.props")]);
    assert_eq!(code, EXIT_STRICT);
}

#[test]
fn bell_command() {
    let (code, out, _) = exec(&["bell", &fixture("pr_box_prob.json"), "--props", &fixture("pr_box.props")]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("violation: 1\n"));
    let (_, json, _) = exec(&["--machine", "bell", &fixture("pr_box_prob.json"), "--props", &fixture("pr_box.props")]);
    let r: BellReport = serde_json::from_str(&json).unwrap();
    assert!((r.violation - 1.0).abs() < 1e-12 && r.contextuality_certified);

    let (code, _, err) = exec(&["bell", &fixture("pr_box.json"), "--props", &fixture("pr_box.props")]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("probabilistic"));
}

#[test]
fn bell_rejects_satisfiable_propositions() {
    let dir = tempfile::tempdir().unwrap();
    let props = dir.path().join("p.props");
    std::fs::write(&props, "a & b\n").unwrap();
    let (code, _, err) = exec(&["bell", &fixture("pr_box_prob.json"), "--props", props.to_str().unwrap()]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("satisfiable"), "{err}");
}

#[test]
fn probabilistic_input_is_classified_by_support() {
    let (_, out, _) = exec(&["classify", &fixture("hardy_uniform_prob.json")]);
    assert_eq!(out.lines().next(), Some("Contextual"));
}

#[test]
fn input_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"variables\": [}").unwrap();
    let (code, _, err) = exec(&["classify", bad.to_str().unwrap()]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("line 1"), "{err}");

    std::fs::write(
        &bad,
        r#"{"variables": ["a", "b"], "contexts": [["a", "b"]], "possibilistic": [{"context": ["a", "b"], "events": [["a"], ["a"]]}]}"#,
    )
    .unwrap();
    let (code, _, err) = exec(&["audit", bad.to_str().unwrap()]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("invalid model"));

    let (code, _, _) = exec(&["classify", "/nonexistent/model.json"]);
    assert_eq!(code, EXIT_INPUT);
}

#[test]
fn flag_validation() {
    let parse = |args: &[&str]| RunConfig::try_parse_from(std::iter::once("choicectx").chain(args.iter().copied()));
    assert!(parse(&["gen", "--vars", "0", "--contexts", "1", "--density", "0.5", "--seed", "1"]).is_err());
    assert!(parse(&["gen", "--vars", "2", "--contexts", "1", "--density", "1.5", "--seed", "1"]).is_err());
    assert!(parse(&["gen", "--vars", "2", "--contexts", "1", "--density", "0.5"]).is_err());
    assert!(parse(&["--bound", "0", "classify", "x"]).is_err());
    assert!(parse(&["--budget", "-1", "classify", "x"]).is_err());
    assert!(parse(&["classify"]).is_err());
}

#[test]
fn budget_expiry_is_inconclusive() {
    // 40 free variables: 2^40 sections, far beyond any budget
    let names: Vec<String> = (0..40).map(|i| format!("\"v{i:02}\"")).collect();
    let contexts: Vec<String> = names.iter().map(|n| format!("[{n}]")).collect();
    let entries: Vec<String> =
        names.iter().map(|n| format!("{{\"context\": [{n}], \"events\": [[], [{n}]]}}")).collect();
    let doc = format!(
        "{{\"variables\": [{}], \"contexts\": [{}], \"possibilistic\": [{}]}}",
        names.join(","),
        contexts.join(","),
        entries.join(",")
    );
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("big.json");
    std::fs::write(&path, doc).unwrap();
    let (code, out, _) = exec(&["--budget", "0.05", "classify", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_BUDGET);
    assert!(out.contains("Inconclusive"));
    let (code, out, _) = exec(&["--machine", "--budget", "0.05", "audit", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_BUDGET);
    assert!(out.contains("\"inconclusive\": true"));
}

#[test]
fn binary_exit_status() {
    let bin = env!("CARGO_BIN_EXE_choicectx");
    let out = Process::new(bin).args(["classify", &fixture("example3_coin.json")]).output().unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).lines().next(), Some("NonContextual"));
    let out = Process::new(bin).args(["--strict", "classify", &fixture("pr_box.json")]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = Process::new(bin).args(["classify", "/nonexistent.json"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
