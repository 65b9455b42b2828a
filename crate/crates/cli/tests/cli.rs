use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use infmln::load_mln_file;

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn infmln(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_infmln"))
        .args(args)
        .current_dir(fixtures())
        .output()
        .expect("binary runs")
}

const GOLDEN: &[(&str, &[&str])] = &[
    ("analyze_lattice", &["analyze", "lattice.mln"]),
    ("analyze_determinate", &["analyze", "determinate.mln"]),
    (
        "uniqueness_chain",
        &["uniqueness", "chain.mln", "--depth", "8", "--window", "3"],
    ),
    ("uniqueness_lattice", &["uniqueness", "lattice.mln"]),
    (
        "query_chain",
        &[
            "query",
            "chain.mln",
            "--atom",
            "Q(s(0))",
            "--atom",
            "Q(s(s(0)))",
            "--set",
            "Q(0)=1",
        ],
    ),
    (
        "query_lattice_free",
        &[
            "query",
            "lattice.mln",
            "--atom",
            "Q(s(0), s(0))",
            "--atom",
            "Q(s(s(0)), s(0))",
            "--boundary",
            "free",
        ],
    ),
    (
        "limit_hard_lattice",
        &[
            "query",
            "hard_lattice.mln",
            "--atom",
            "Q(s(0), s(0))",
            "--atom",
            "Q(s(0), s(s(0)))",
            "--boundary",
            "all-one",
            "--set",
            "Q(0, s(0))=0",
            "--limit",
        ],
    ),
    (
        "sample_chain",
        &[
            "sample",
            "chain.mln",
            "--atom",
            "Q(s(s(0)))",
            "--radius",
            "2",
            "--sweeps",
            "3000",
            "--burnin",
            "300",
            "--seed",
            "11",
        ],
    ),
    (
        "sensitivity_lattice",
        &[
            "sensitivity",
            "lattice.mln",
            "--atom",
            "Q(s(s(0)), s(s(0)))",
            "--radius",
            "2",
            "--sweeps",
            "3000",
            "--burnin",
            "300",
            "--seed",
            "5",
            "--policies",
            "all-zero,all-one,free",
        ],
    ),
    ("sat_contradiction", &["sat", "contradiction.mln", "--max-depth", "4"]),
    ("sat_induction_neg", &["sat", "induction_neg.mln"]),
    ("sat_hard_mixed", &["sat", "hard_mixed.mln", "--max-depth", "3"]),
    (
        "entail_induction",
        &["entail", "induction.mln", "--query", "P(f(f(0)))"],
    ),
    (
        "entail_seed_only",
        &["entail", "seed_only.mln", "--query", "P(f(0))", "--max-depth", "3"],
    ),
];

/// Set `UPDATE_GOLDEN=1` to rewrite the expected reports.
#[test]
fn golden_reports() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    for (name, args) in GOLDEN {
        let out = infmln(args);
        assert!(out.status.success(), "{name}: {}", String::from_utf8_lossy(&out.stderr));
        let path = dir.join(format!("{name}.json"));
        if update {
            std::fs::create_dir_all(&dir).unwrap();
            std::fs::write(&path, &out.stdout).unwrap();
            continue;
        }
        let want = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(String::from_utf8(out.stdout).unwrap(), want, "{name}");
    }
}

#[test]
fn reports_rerun_from_their_config() {
    let tmp = tempfile::tempdir().unwrap();
    for (name, args) in GOLDEN {
        let first = tmp.path().join(format!("{name}.first.json"));
        let second = tmp.path().join(format!("{name}.second.json"));
        let mut a: Vec<&str> = args.to_vec();
        let first_s = first.to_str().unwrap();
        a.extend(["--output", first_s]);
        assert!(infmln(&a).status.success(), "{name}");
        let text = std::fs::read_to_string(&first).unwrap();
        let report: serde_json::Value = serde_json::from_str(&text).unwrap();
        let echoed: Vec<String> = report["config"]["args"]
            .as_array()
            .unwrap()
            .iter()
            .map(|v| v.as_str().unwrap().to_string())
            .collect();
        let mut b: Vec<&str> = echoed.iter().map(String::as_str).collect();
        b.extend(["--output", second.to_str().unwrap()]);
        assert!(infmln(&b).status.success(), "{name}");
        assert_eq!(
            std::fs::read(&first).unwrap(),
            std::fs::read(&second).unwrap(),
            "{name}"
        );
    }
}

#[test]
fn trace_has_one_line_per_sweep() {
    let tmp = tempfile::tempdir().unwrap();
    let trace = tmp.path().join("trace.txt");
    let out = infmln(&[
        "sample",
        "chain.mln",
        "--atom",
        "Q(s(s(0)))",
        "--radius",
        "1",
        "--sweeps",
        "500",
        "--burnin",
        "50",
        "--seed",
        "2",
        "--trace",
        trace.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let atoms = report["result"]["atoms"].as_array().unwrap().len();
    let text = std::fs::read_to_string(&trace).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 500);
    for l in lines {
        let cols: Vec<&str> = l.split(' ').collect();
        assert_eq!(cols.len(), atoms);
        assert!(cols.iter().all(|c| *c == "0" || *c == "1"));
    }
}

#[test]
fn exit_codes() {
    let cases: &[(&[&str], i32, &str)] = &[
        (&["sat", "contradiction.mln", "--max-depth", "4"], 0, ""),
        (
            &["analyze", "loves.mln"],
            1,
            "existentially quantified variables must range over finite types",
        ),
        (&["analyze", "scattered.mln"], 1, "not sigma-determinate"),
        (&["sat", "lattice.mln"], 1, "finite-weight clause"),
        (&["uniqueness", "hard_lattice.mln"], 1, "infinite-weight clause"),
        (&["analyze", "no_such_file.mln"], 2, "no_such_file.mln"),
        (&["sample", "chain.mln", "--atom", "Q(0)"], 2, "--seed"),
        (&["frobnicate", "chain.mln"], 2, ""),
        (&["query", "chain.mln", "--atom", "Q(0, 0)"], 2, "Q(0, 0)"),
        (
            &["query", "chain.mln", "--atom", "Q(0)", "--set", "Q(s(s(s(0))))=1"],
            2,
            "not a boundary atom",
        ),
        (&["entail", "induction.mln", "--query", "P("], 2, "--query"),
    ];
    for (args, code, needle) in cases {
        let out = infmln(args);
        assert_eq!(out.status.code(), Some(*code), "{args:?}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.contains(needle), "{args:?}: {err}");
    }
}

#[test]
fn rejected_analysis_still_writes_its_report() {
    let out = infmln(&["analyze", "scattered.mln"]);
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["result"]["sigma_determinate"], false);
    assert_eq!(
        report["result"]["clauses"][0]["violating"],
        serde_json::json!(["x", "y"])
    );
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(infmln(&["--help"]).status.code(), Some(0));
    assert_eq!(infmln(&["--version"]).status.code(), Some(0));
}

#[test]
fn load_lattice_fixture() {
    let (p, warnings) = load_mln_file(&fixtures().join("lattice.mln")).unwrap();
    assert_eq!((p.formulas.len(), p.clauses.len()), (2, 4));
    assert!(warnings.is_empty());
}

#[test]
fn load_errors_name_the_file() {
    let err = load_mln_file(Path::new("/definitely/missing.mln")).unwrap_err();
    assert_eq!(err.exit_code(), 2);
    assert!(err.to_string().contains("/definitely/missing.mln"));
    let err = load_mln_file(&fixtures().join("loves.mln")).unwrap_err();
    assert_eq!(err.exit_code(), 1);
    assert!(err
        .to_string()
        .starts_with(&fixtures().join("loves.mln").display().to_string()));
}
