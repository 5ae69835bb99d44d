use std::path::Path;
use std::process::{Command, Output};

fn nlkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nlkit")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn without_timestamp(report: &str) -> String {
    report.lines().filter(|l| !l.contains("\"generated_at\"")).collect::<Vec<_>>().join("\n")
}

fn read(p: &Path) -> String {
    std::fs::read_to_string(p).unwrap()
}

#[test]
fn list_shows_catalog_in_both_formats() {
    let text = nlkit(&["list"]);
    assert!(text.status.success());
    let lines: Vec<String> = stdout(&text).lines().map(str::to_string).collect();
    assert!(lines.len() >= 6);

    let json = nlkit(&["list", "--format", "json"]);
    assert!(json.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&json)).unwrap();
    let entries = v.as_array().unwrap();
    assert_eq!(entries.len(), lines.len());
    for (e, line) in entries.iter().zip(&lines) {
        let id = e["id"].as_str().unwrap();
        let desc = e["description"].as_str().unwrap();
        assert!(line.starts_with(id) && line.ends_with(desc), "{line}");
    }
}

#[test]
fn unknown_suite_echoes_catalog() {
    let o = nlkit(&["run", "--suite", "bogus", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    for id in ["criterion", "coneoff", "quasi-lab", "hyperbolicity"] {
        assert!(err.contains(id), "{err}");
    }
}

#[test]
fn seed_is_mandatory() {
    let o = nlkit(&["run", "--suite", "criterion"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("seed"));

    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{ "suite": "criterion" }"#).unwrap();
    let o = nlkit(&["run", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("seed"), "{}", stderr(&o));
}

#[test]
fn unknown_config_keys_are_rejected_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, "{\n  \"suite\": \"criterion\",\n  \"seed\": 1,\n  \"bugdet\": 5\n}\n").unwrap();
    let o = nlkit(&["run", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("bugdet") && err.contains("line 4"), "{err}");
}

#[test]
fn missing_config_file_is_an_io_error() {
    let o = nlkit(&["run", "--config", "/nonexistent/run.json"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn unwritable_output_is_an_io_error() {
    let o =
        nlkit(&["run", "--suite", "hyperbolicity", "--seed", "1", "--budget", "2", "--out", "/nonexistent/dir/r.json"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn empty_budget_gives_empty_report() {
    let o = nlkit(&["run", "--suite", "criterion", "--seed", "5", "--budget", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["conditions"].as_array().unwrap().len(), 0);
    assert_eq!(v["summary"]["passed"], 0);
}

#[test]
fn criterion_on_v21_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("criterion.json");
    let o = nlkit(&[
        "run",
        "--suite",
        "criterion",
        "--family",
        "V",
        "--seed",
        "11",
        "--budget",
        "100",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&read(&out)).unwrap();
    assert_eq!(v["schema"], "nlkit-report");
    assert_eq!(v["summary"]["failed"], 0);
    let summary = stdout(&o);
    for label in ["(C)", "(2T)", "(3T)", "(L)"] {
        assert!(summary.contains(label), "{summary}");
    }
}

#[test]
fn coneoff_on_tree_writes_dot_files() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("coneoff.json");
    let out = dir.path().join("tree.json");
    std::fs::write(
        &cfg,
        format!(
            r#"{{ "suite": "coneoff", "seed": 3, "budget": 300,
                 "graph": {{ "kind": "binary-tree", "depth": 8 }},
                 "coneoff": {{ "radii": [1, 2, 3, 4, 5], "orbit": [0] }},
                 "out": {:?} }}"#,
            out.to_str().unwrap()
        ),
    )
    .unwrap();
    let o = nlkit(&["run", "--config", cfg.to_str().unwrap()]);
    assert!(matches!(o.status.code(), Some(0)), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&read(&out)).unwrap();
    let artifacts = v["artifacts"].as_array().unwrap();
    assert_eq!(artifacts.len(), 5);
    for r in 1..=5 {
        let dot = dir.path().join(format!("tree-R{r}.dot"));
        assert!(read(&dot).starts_with("graph"), "{}", dot.display());
    }
}

#[test]
fn graph_flag_reads_edge_list() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("c4.txt");
    std::fs::write(&g, "0 1\n1 2\n2 3\n3 0\n").unwrap();
    let o = nlkit(&["run", "--suite", "hyperbolicity", "--seed", "2", "--budget", "3", "--graph", g.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["data"]["graph"]["vertices"], 4);
    assert_eq!(v["data"]["graph"]["delta"], "1");
}

#[test]
fn reruns_are_byte_identical_apart_from_timestamp() {
    let dir = tempfile::tempdir().unwrap();
    for suite in ["criterion", "quasi-lab", "hyperbolicity"] {
        let a = dir.path().join(format!("{suite}-a.json"));
        let b = dir.path().join(format!("{suite}-b.json"));
        for p in [&a, &b] {
            let o = nlkit(&["run", "--suite", suite, "--seed", "9", "--budget", "5", "--out", p.to_str().unwrap()]);
            assert_eq!(o.status.code(), Some(0), "{suite}: {}", stderr(&o));
        }
        assert_eq!(without_timestamp(&read(&a)), without_timestamp(&read(&b)), "{suite}");
    }
}

#[test]
fn explain_renders_and_flags_inconclusive() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("p40.json");
    let o = nlkit(&["run", "--suite", "coneoff", "--seed", "1", "--budget", "100", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let e = nlkit(&["explain", out.to_str().unwrap()]);
    assert_eq!(e.status.code(), Some(0));
    let text = stdout(&e);
    assert!(text.contains("INCONCLUSIVE") && text.contains("inconclusive"), "{text}");
    assert!(text.contains("PASS"));
}

#[test]
fn explain_rejects_truncated_and_foreign_reports() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    nlkit(&["run", "--suite", "hyperbolicity", "--seed", "1", "--budget", "2", "--out", out.to_str().unwrap()]);
    let full = read(&out);

    let truncated = dir.path().join("truncated.json");
    std::fs::write(&truncated, &full[..full.len() / 2]).unwrap();
    let e = nlkit(&["explain", truncated.to_str().unwrap()]);
    assert_eq!(e.status.code(), Some(2));
    assert!(stderr(&e).contains("schema"));

    let future = dir.path().join("future.json");
    std::fs::write(&future, full.replace("\"schema_version\": 1", "\"schema_version\": 99")).unwrap();
    assert_eq!(nlkit(&["explain", future.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn explain_exit_code_follows_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    nlkit(&["run", "--suite", "hyperbolicity", "--seed", "1", "--budget", "2", "--out", out.to_str().unwrap()]);
    let mut v: serde_json::Value = serde_json::from_str(&read(&out)).unwrap();
    v["conditions"][0]["passed"] = 1.into();
    v["conditions"][0]["failed"] = 1.into();
    v["conditions"][0]["failures"] = serde_json::json!(["sample 1: forced"]);
    v["summary"]["passed"] = (v["summary"]["passed"].as_u64().unwrap() - 1).into();
    v["summary"]["failed"] = 1.into();
    std::fs::write(&out, serde_json::to_string_pretty(&v).unwrap()).unwrap();
    let e = nlkit(&["explain", out.to_str().unwrap()]);
    assert_eq!(e.status.code(), Some(1), "{}", stderr(&e));
    assert!(stdout(&e).contains("FAIL"));
}

#[test]
fn configured_elements_are_decomposed() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(
        &cfg,
        r#"{ "suite": "bounded-generation", "seed": 4, "budget": 2, "family": "V(2,1)",
            "elements": ["0:0->0:1, 0:1->0:0", "0:00->0:0, 0:01->0:10, 0:1->0:11"] }"#,
    )
    .unwrap();
    let o = nlkit(&["run", "--config", cfg.to_str().unwrap(), "--format", "text"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("P1 (configured)") && text.contains("2/2 passed"), "{text}");
}
