//! End-to-end runs of the `leavitt` binary: exit codes, text output, JSON
//! schemas and determinism.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn graph(name: &str) -> String {
    root()
        .join("corpus")
        .join(format!("{name}.graph"))
        .display()
        .to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_leavitt"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// Runs with `--json`, checks the exit code and validates against the
/// named schema.
fn json(schema: &str, args: &[&str], code: i32) -> Value {
    let mut all = args.to_vec();
    all.push("--json");
    let o = run(&all);
    assert_eq!(o.status.code(), Some(code), "{args:?}: {}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let path = root().join("schemas").join(format!("{schema}.schema.json"));
    let schema: Value = serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let errors: Vec<String> = validator.iter_errors(&v).map(|e| e.to_string()).collect();
    assert!(
        errors.is_empty(),
        "{args:?} violates {schema}: {errors:?}\n{v:#}"
    );
    v
}

fn write(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path.display().to_string()
}

#[test]
fn rickart_example_prints_six_checks() {
    let o = run(&["paper-example"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(
        text.lines().filter(|l| l.starts_with('✓')).count(),
        6,
        "{text}"
    );
    assert!(text.contains("ee* = diag(3+x+x^-1, 0)"));
    assert!(text.contains("not Rickart *"));
    assert!(text.contains("d(e) = 1/2"));

    let v = json("paper-example", &["paper-example"], 0);
    assert_eq!(v["checks"].as_array().unwrap().len(), 6);
    assert_eq!(v["verdict"], "not_rickart_star");
    assert_eq!(v["dim"]["display"], "1/2");
}

#[test]
fn analyze_verdicts_and_parse_errors() {
    let v = json("analyze", &["analyze", &graph("tail")], 0);
    assert_eq!(v["extending_verdict"], true);
    let v = json("analyze", &["analyze", &graph("rose2")], 0);
    assert_eq!(v["extending_verdict"], false);
    assert_eq!(v["no_exit"], false);

    let dir = tempfile::tempdir().unwrap();
    let bad = write(&dir, "bad.graph", "vertices: a\nedge e a -> a\n");
    let o = run(&["analyze", &bad]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("line 2, column"), "{}", stderr(&o));

    let json_graph = write(
        &dir,
        "g.json",
        r#"{"vertices":["u","v"],"edges":[{"name":"t","src":"u","dst":"v"}]}"#,
    );
    let v = json("analyze", &["analyze", &json_graph], 0);
    assert_eq!(v["acyclic"], true);
}

#[test]
fn structure_of_the_two_cycle() {
    let v = json("structure", &["structure", &graph("cyc2")], 0);
    assert_eq!(v["ring"], "M_2(K[x,x^-1])");
    assert_eq!(v["blocks"].as_array().unwrap().len(), 1);
    assert!(stdout(&run(&["structure", &graph("tail")])).starts_with("L(E) ≅ M_2(K[x,x^-1])"));

    let o = run(&["structure", &graph("loop_exit")]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("NotNoExit"));
}

#[test]
fn reduce_normal_forms() {
    let v = json(
        "reduce",
        &["reduce", &graph("tail"), "-e", "t*.t + l.l*"],
        0,
    );
    assert_eq!(v["normal_form"], "2*v");
    assert_eq!(v["confluent"], true);
    let v = json("reduce", &["reduce", &graph("line"), "-e", "h.h*"], 0);
    assert_eq!(v["projection"], true);
    let o = run(&["reduce", &graph("tail"), "-e", "t.."]);
    assert_eq!(o.status.code(), Some(3));
    let o = run(&["reduce", &graph("tail"), "-e", "zz"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn dimension_of_the_rickart_idempotent() {
    let dir = tempfile::tempdir().unwrap();
    let element = json("paper-example", &["paper-example"], 0)["element"]
        .as_str()
        .unwrap()
        .to_string();
    let e = write(
        &dir,
        "e.json",
        &serde_json::json!({ "elements": [[element]] }).to_string(),
    );
    let o = run(&["dim", &graph("tail"), "--idempotent", &e]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().next(), Some("1/2"));
    let v = json("dim", &["dim", &graph("tail"), "--idempotent", &e], 0);
    assert_eq!(v["simple_order"], 2);

    // the block form written by --json output is accepted back
    let closure = json(
        "closure",
        &[
            "closure",
            &graph("tail"),
            &write(&dir, "m.json", r#"{"n":1,"relations":[["v + 3*l + l*"]]}"#),
        ],
        0,
    );
    let q = write(&dir, "q.json", &closure["closure"].to_string());
    let v = json("dim", &["dim", &graph("tail"), "--idempotent", &q], 0);
    assert_eq!(v["dim"]["display"], "1/2");

    let o = run(&["dim", &graph("tail"), "-e", "l"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("NotIdempotent"));
    let o = run(&["dim", &graph("tail")]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["dim", &graph("tail"), "-e", "v", "--field", "F5"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("NotPositiveDefinite"));
}

#[test]
fn presentations_and_closures() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(&dir, "m.json", r#"{"n":2,"relations":[["u","t"]]}"#);
    let v = json("dim", &["dim", &graph("tail"), "--presentation", &m], 0);
    assert_eq!(v["dim"]["display"], "3/2");
    assert_eq!(v["dim"], v["dim_over_q"]);

    let torsion = write(&dir, "t.json", r#"{"n":1,"relations":[["v + 3*l + l*"]]}"#);
    let v = json("closure", &["closure", &graph("tail"), &torsion], 0);
    assert_eq!(v["dim"]["display"], "1/2");
    assert_eq!(v["quotient_dim"]["display"], "1/2");
    assert_eq!(v["torsion"][0]["factors"].as_array().unwrap().len(), 1);

    let ragged = write(&dir, "r.json", r#"{"n":2,"relations":[["u"]]}"#);
    assert_eq!(
        run(&["closure", &graph("tail"), &ragged]).status.code(),
        Some(4)
    );
    let broken = write(&dir, "b.json", "{not json");
    assert_eq!(
        run(&["closure", &graph("tail"), &broken]).status.code(),
        Some(3)
    );
}

#[test]
fn equivalence_witnesses() {
    let v = json("equiv", &["equiv", &graph("tail"), "u", "v", "--star"], 0);
    assert_eq!(v["equivalent"], true);
    assert!(v["witness"]["x"].is_object());
    assert_eq!(v["star"]["status"], "found");
    let v = json("equiv", &["equiv", &graph("sink_loop"), "w", "v"], 0);
    assert_eq!(v["equivalent"], false);
    assert!(v["witness"].is_null());
    let text = stdout(&run(&["equiv", &graph("tail"), "u", "v"]));
    assert!(text.contains("x =") && text.contains("y ="));
}

#[test]
fn axioms_report() {
    let v = json(
        "axioms",
        &["axioms", &graph("tail"), "--samples", "5", "--seed", "7"],
        0,
    );
    assert_eq!(v["seed"], 7);
    assert!(v["results"]
        .as_array()
        .unwrap()
        .iter()
        .all(|r| r["status"] == "pass"));
    assert!(stdout(&run(&["axioms", &graph("line"), "--samples", "2"]))
        .starts_with("rng ChaCha8, seed 0"));
}

#[test]
fn matrix_graph_of_a_sink_is_a_line() {
    let o = run(&["matrix-graph", &graph("sink"), "-n", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let g = leavitt_core_graph(&stdout(&o));
    assert_eq!(
        (g["vertices"].as_u64(), g["edges"].as_u64()),
        (Some(2), Some(1))
    );
    let v = json(
        "matrix-graph",
        &["matrix-graph", &graph("tail"), "-n", "3"],
        0,
    );
    assert_eq!(v["vertices"], 6);
    assert_eq!(v["edges"], 6);
}

/// Re-reads DSL output through `analyze`.
fn leavitt_core_graph(dsl: &str) -> Value {
    let dir = tempfile::tempdir().unwrap();
    let path = write(&dir, "m.graph", dsl);
    json("analyze", &["analyze", &path], 0)
}

#[test]
fn usage_errors() {
    assert_eq!(run(&[]).status.code(), Some(2));
    assert_eq!(run(&["analyze"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        run(&["analyze", "/nonexistent/file.graph"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["structure", &graph("tail"), "--field", "R"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn json_output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(
        &dir,
        "m.json",
        r#"{"n":2,"relations":[["u","t"],["l","v"]]}"#,
    );
    let cases: Vec<Vec<String>> = vec![
        vec!["analyze".into(), graph("cyc3_tail")],
        vec!["structure".into(), graph("sink_loop")],
        vec![
            "reduce".into(),
            graph("cyc3_tail"),
            "-e".into(),
            "i.p.p* + r*.r".into(),
        ],
        vec![
            "dim".into(),
            graph("tail"),
            "--presentation".into(),
            m.clone(),
        ],
        vec!["closure".into(), graph("tail"), m],
        vec![
            "equiv".into(),
            graph("cyc3_tail"),
            "s".into(),
            "a".into(),
            "--star".into(),
        ],
        vec![
            "axioms".into(),
            graph("cyc2"),
            "--samples".into(),
            "3".into(),
            "--seed".into(),
            "11".into(),
        ],
        vec![
            "matrix-graph".into(),
            graph("cyc2"),
            "-n".into(),
            "2".into(),
        ],
        vec!["paper-example".into()],
    ];
    for args in cases {
        let mut args: Vec<&str> = args.iter().map(String::as_str).collect();
        args.push("--json");
        let (a, b) = (run(&args), run(&args));
        assert_eq!(a.status.code(), Some(0), "{args:?}: {}", stderr(&a));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}
