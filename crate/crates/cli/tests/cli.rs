use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn qcorr() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_qcorr"));
    c.env_remove("QCORR_SEED");
    c
}

fn state(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("states")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    qcorr().args(args).output().expect("spawn qcorr")
}

fn stdout_ok(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

/// Value on the text line starting with `label`.
fn field(text: &str, label: &str) -> f64 {
    text.lines()
        .find_map(|l| l.strip_prefix(label).filter(|rest| rest.starts_with(' ')))
        .unwrap_or_else(|| panic!("no `{label}` line in\n{text}"))
        .trim()
        .parse()
        .unwrap()
}

fn json(args: &[&str]) -> (String, serde_json::Value) {
    let text = stdout_ok(args);
    let v = serde_json::from_str(&text).unwrap();
    (text, v)
}

fn p(name: &str) -> String {
    state(name).display().to_string()
}

#[test]
fn info_examples() {
    let out = stdout_ok(&["info", &p("paper_example.json")]);
    assert!((field(&out, "I") - 1.201752).abs() < 1e-6);
    let out = stdout_ok(&["info", &p("example_pure.json")]);
    assert!((field(&out, "I") - 1.201752).abs() < 1e-6);
    let out = stdout_ok(&["info", &p("bell_phi_plus.json")]);
    assert!((field(&out, "I") - 2.0).abs() < 1e-9);
    let out = stdout_ok(&["info", &p("product.json")]);
    assert!(field(&out, "I").abs() < 1e-9);
}

#[test]
fn discord_examples() {
    let out = stdout_ok(&["discord", &p("paper_example.json"), "--subsystem", "0"]);
    assert!((field(&out, "D") - 0.600876).abs() < 5e-4);
    let out = stdout_ok(&["discord", &p("paper_example.json"), "--subsystem", "1"]);
    let (d, i) = (field(&out, "D"), field(&out, "I"));
    assert!(d >= 0.0 && d <= i);
    let out = stdout_ok(&["discord", &p("werner_0.json")]);
    assert_eq!(field(&out, "D"), 0.0);
}

#[test]
fn overall_examples() {
    let out = stdout_ok(&["overall", &p("paper_example.json")]);
    assert!((field(&out, "Q") - 0.802628).abs() < 1e-3);
    assert!((field(&out, "C") - 0.399124).abs() < 1e-3);
    let out = stdout_ok(&["overall", &p("ghz3.json")]);
    assert!((field(&out, "Q") - 1.0).abs() < 1e-6);
    assert!((field(&out, "C") - 2.0).abs() < 1e-6);

    let out = stdout_ok(&["overall", &p("paper_example.json"), "--all-orders"]);
    let rows: Vec<&str> = out.lines().filter(|l| l.starts_with("  order ")).collect();
    assert_eq!(rows.len(), 2, "{out}");
    assert!(out.contains("max Q - min Q"));

    let (_, v) = json(&[
        "overall",
        &p("paper_example.json"),
        "--order",
        "1,0",
        "--json",
    ]);
    assert_eq!(v["order"], serde_json::json!([1, 0]));
}

#[test]
fn json_round_trips_and_matches_text() {
    for (args, keys) in [
        (
            vec!["info", "paper_example.json"],
            vec!["mutual_info", "joint_entropy"],
        ),
        (
            vec!["discord", "paper_example.json", "--subsystem", "1"],
            vec!["discord", "classical_correlation"],
        ),
        (
            vec!["overall", "paper_example.json", "--all-orders"],
            vec!["q", "c", "identity_residual"],
        ),
        (vec!["overall", "qubit_qutrit.json"], vec!["q", "c"]),
    ] {
        let file = p(args[1]);
        let mut full: Vec<&str> = args.clone();
        full[1] = &file;
        let text = stdout_ok(&full);
        full.push("--json");
        let (raw, v) = json(&full);
        assert_eq!(v["schema_version"], "1");
        let reparsed: serde_json::Value =
            serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
        assert_eq!(reparsed, v);
        assert!(raw.starts_with("{\n  \"command\""));
        let labels = [
            ("mutual_info", "I"),
            ("joint_entropy", "S(rho)"),
            ("discord", "D"),
            ("classical_correlation", "C_hv"),
            ("q", "Q"),
            ("c", "C"),
            ("identity_residual", "|Q + C - I|"),
        ];
        for key in keys {
            let label = labels.iter().find(|(k, _)| *k == key).unwrap().1;
            let from_json = v[key].as_f64().unwrap();
            let from_text = field(&text, label);
            assert_eq!(
                format!("{from_json:.11e}"),
                format!("{from_text:.11e}"),
                "{key}"
            );
        }
    }
}

#[test]
fn json_reports_measurements() {
    let (_, v) = json(&["discord", &p("paper_example.json"), "--json"]);
    let m = &v["measurement"];
    assert_eq!(m["projectors"].as_array().unwrap().len(), 2);
    assert_eq!(m["theta"], 0.0);
    assert!(v["config"]["grid_theta"].as_u64().unwrap() == 128);
    let (_, v) = json(&[
        "discord",
        &p("qubit_qutrit.json"),
        "--subsystem",
        "1",
        "--json",
    ]);
    assert_eq!(v["measurement"]["projectors"].as_array().unwrap().len(), 3);
    assert_eq!(v["measurement"]["generator"].as_array().unwrap().len(), 9);
}

#[test]
fn same_seed_same_bytes() {
    let args = [
        "overall",
        &p("qubit_qutrit.json"),
        "--json",
        "--seed",
        "7",
        "--restarts",
        "8",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);

    let env = qcorr()
        .args([
            "overall",
            &p("qubit_qutrit.json"),
            "--json",
            "--restarts",
            "8",
        ])
        .env("QCORR_SEED", "7")
        .output()
        .unwrap();
    assert_eq!(env.stdout, a.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["config"]["seed"], 7);
}

#[test]
fn werner_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("werner.csv");
    let out = stdout_ok(&[
        "sweep",
        "werner",
        "--from",
        "0",
        "--to",
        "1",
        "--step",
        "0.05",
        "--csv",
        path.to_str().unwrap(),
    ]);
    assert!(out.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("param,I,D0,D1,Q,C"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 21);
    assert!(rows[0].iter().all(|&x| x == 0.0));
    let last = &rows[20];
    assert_eq!(last[0], 1.0);
    assert!((last[1] - 2.0).abs() < 1e-9 && (last[2] - 1.0).abs() < 1e-6);
    assert!(rows.windows(2).all(|w| w[1][1] >= w[0][1]));
    for r in &rows {
        assert!(r[2] <= r[4] + 1e-9 && r[4] <= r[1] + 1e-9);
    }

    let again = stdout_ok(&[
        "sweep", "werner", "--from", "0", "--to", "1", "--step", "0.05",
    ]);
    assert_eq!(again, text);
}

#[test]
fn exit_codes() {
    assert_eq!(
        run(&["verify", "--suite", "paper-example"]).status.code(),
        Some(0)
    );

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\n  \"dims\": [2, 2],\n  \"kind\": pure\n}\n").unwrap();
    let out = run(&["info", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));

    let field = dir.path().join("field.json");
    std::fs::write(
        &field,
        r#"{"kind": "named", "family": "werner", "params": {"p": 2}}"#,
    )
    .unwrap();
    let out = run(&["info", field.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    let missing = dir.path().join("missing.json");
    assert_eq!(
        run(&["info", missing.to_str().unwrap()]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["overall", &p("paper_example.json"), "--order", "0,0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["discord", &p("paper_example.json"), "--subsystem", "2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["sweep", "ghz"]).status.code(), Some(2));
    assert_eq!(run(&["info"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--suite", "nope"]).status.code(), Some(2));
}

#[test]
fn help_documents_werner_convention() {
    let out = stdout_ok(&["sweep", "--help"]);
    assert!(out.contains("p |Psi-><Psi-| + (1 - p) I/4"));
}
