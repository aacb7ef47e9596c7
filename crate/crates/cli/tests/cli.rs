use std::collections::BTreeMap;
use std::path::Path;
use std::process::Command;

use opd_cli::run;
use opd_core::algebra::{free_algebra, SGraph, SGraphMap};
use opd_core::exactcat::{LinMap, Scalar, Space};
use opd_core::opcolim::PushoutProblem;
use opd_core::operad::{ass_operad, SeqMap, Sequence};
use serde_json::{json, Value};

fn opd(args: &[&str]) -> opd_cli::Outcome {
    run(std::iter::once("opd").chain(args.iter().copied()))
}

fn write(dir: &Path, name: &str, v: &impl serde::Serialize) -> String {
    let p = dir.join(name);
    std::fs::write(&p, serde_json::to_string(v).unwrap()).unwrap();
    p.to_str().unwrap().to_string()
}

/// Catalan numbers by the convolution recurrence.
fn catalan(n: usize) -> usize {
    let mut c = vec![1usize; n + 1];
    for k in 1..=n {
        c[k] = (0..k).map(|j| c[j] * c[k - 1 - j]).sum();
    }
    c[n]
}

#[test]
fn binary_trees_with_four_leaves() {
    let out = opd(&["tree", "enum", "--leaves", "4", "--arities", "2"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.ends_with(&format!("{} trees\n", catalan(3))));
    let js = opd(&[
        "--format",
        "json",
        "tree",
        "enum",
        "--leaves",
        "4",
        "--arities",
        "2",
    ]);
    let v: Value = serde_json::from_str(&js.stdout).unwrap();
    assert_eq!(v["count"], 5);
    assert_eq!(v["trees"].as_array().unwrap().len(), 5);
}

#[test]
fn unbounded_enumeration_is_a_usage_error() {
    let out = opd(&["tree", "enum", "--leaves", "2", "--arities", "1,2"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("bound"));
}

#[test]
fn associative_operad_checks() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "ass.json", &ass_operad(4));
    let out = opd(&["operad", "check", &p, "--max-arity", "4"]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    assert!(out.stdout.starts_with("status: pass"));
}

#[test]
fn broken_composition_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let twice = LinMap::identity(Space::new(1)).scale(&Scalar::from_int(2));
    let bad = ass_operad(3).with_circ((2, 1, 2), twice).unwrap();
    let p = write(dir.path(), "bad.json", &bad);
    let out = opd(&[
        "--format",
        "json",
        "operad",
        "check",
        &p,
        "--max-arity",
        "3",
    ]);
    assert_eq!(out.code, 1);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["report"]["status"], "fail");
    assert!(!v["report"]["findings"].as_array().unwrap().is_empty());
}

#[test]
fn free_operad_dimensions_follow_catalan() {
    let out = opd(&[
        "--format", "json", "operad", "free", "--gen", "2:1", "--n-max", "5",
    ]);
    assert_eq!(out.code, 0);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    let want: Vec<usize> = (1..=5).map(|n| catalan(n - 1)).collect();
    assert_eq!(v["dims"], json!(want));
}

#[test]
fn malformed_inputs_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let text = serde_json::to_string(&ass_operad(2))
        .unwrap()
        .replacen("\"1\"", "\"1/0\"", 1);
    let p = dir.path().join("zero_denominator.json");
    std::fs::write(&p, text).unwrap();
    let out = opd(&["operad", "check", p.to_str().unwrap()]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("zero_denominator.json"));
    assert_eq!(opd(&["operad", "check", "/nonexistent.json"]).code, 2);
    assert_eq!(
        opd(&["operad", "free", "--gen", "2-1", "--n-max", "3"]).code,
        2
    );
    assert_eq!(
        opd(&["operad", "check", "x.json", "--no-such-flag"]).code,
        2
    );
}

#[test]
fn counit_of_ass_is_a_map() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "ass.json", &ass_operad(3).positive_part());
    // O(1) supplies a unary generator, so F(O) needs a weight bound.
    assert_eq!(opd(&["operad", "counit", &p, "--n-max", "3"]).code, 2);
    let out = opd(&["operad", "counit", &p, "--n-max", "3", "--w-max", "3"]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    assert!(out.stdout.starts_with("status: truncated"));
}

fn kill_multiplication() -> PushoutProblem {
    let o = ass_operad(3).positive_part();
    let u = Sequence::from_dims(&[(2, 1)]);
    let f = SeqMap::zero(u.clone(), Sequence::new());
    let g = SeqMap::new(
        u,
        o.underlying(),
        BTreeMap::from([(2, LinMap::identity(Space::new(1)))]),
    )
    .unwrap();
    PushoutProblem::new(f, g, o).unwrap()
}

#[test]
fn operad_pushout_verb() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "problem.json", &kill_multiplication());
    let out = opd(&[
        "--format",
        "json",
        "operad",
        "pushout",
        "--problem",
        &p,
        "--n-max",
        "3",
        "--t-max",
        "2",
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["dims"], json!([0, 1, 0, 0]));
    let exact = opd(&[
        "operad",
        "pushout",
        "--problem",
        &p,
        "--n-max",
        "3",
        "--exact",
    ]);
    assert_eq!(exact.code, 0, "{}", exact.stderr);
    assert!(exact.stdout.contains("stable after"));
    assert_eq!(
        opd(&["operad", "pushout", "--problem", &p, "--n-max", "3"]).code,
        2
    );
}

#[test]
fn algebra_verbs() {
    let dir = tempfile::tempdir().unwrap();
    let xy = SGraph::from_dims(&["x", "y", "z"], &[("x", "y", 1)]).unwrap();
    let yz = SGraph::from_dims(&["x", "y", "z"], &[("y", "z", 1)]).unwrap();
    let zero = SGraph::zero(vec!["x".into(), "y".into(), "z".into()]).unwrap();
    let a = free_algebra(&ass_operad(3), &xy, 3).unwrap().algebra;
    let gp = write(dir.path(), "xy.json", &xy);
    let ap = write(dir.path(), "a.json", &a);
    let problem = json!({
        "algebra": a,
        "f": SGraphMap::zero(&zero, &yz),
        "gbar": SGraphMap::zero(&zero, &a.carrier),
    });
    let pp = write(dir.path(), "problem.json", &problem);

    assert_eq!(opd(&["algebra", "check", &ap]).code, 0);
    let free = opd(&[
        "--format", "json", "algebra", "free", "--operad", "ass", "--graph", &gp,
    ]);
    assert_eq!(free.code, 0);
    let v: Value = serde_json::from_str(&free.stdout).unwrap();
    assert_eq!(v["dims"], json!({"x,x": 1, "x,y": 1, "y,y": 1, "z,z": 1}));

    let po = opd(&[
        "--format",
        "json",
        "algebra",
        "pushout",
        "--problem",
        &pp,
        "--n-max",
        "3",
        "--t-max",
        "3",
    ]);
    assert_eq!(po.code, 0, "{}", po.stdout);
    let v: Value = serde_json::from_str(&po.stdout).unwrap();
    assert_eq!(
        v["dims"],
        json!({"x,x": 1, "x,y": 1, "x,z": 1, "y,y": 1, "y,z": 1, "z,z": 1})
    );

    let end = opd(&[
        "--format",
        "json",
        "algebra",
        "end",
        "--graph",
        &gp,
        "--max-arity",
        "2",
    ]);
    assert_eq!(end.code, 0);
    let v: Value = serde_json::from_str(&end.stdout).unwrap();
    // No loops and no composable pairs: only arity 1 survives.
    assert_eq!(v["dims"], json!([0, 1, 0]));
}

#[test]
fn empty_hom_map_is_the_zero_graph() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("g.json");
    std::fs::write(&p, r#"{"objects":["x","y"],"hom":{}}"#).unwrap();
    let out = opd(&[
        "--format",
        "json",
        "algebra",
        "free",
        "--operad",
        "ass",
        "--graph",
        p.to_str().unwrap(),
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["dims"], json!({"x,x": 1, "y,y": 1}));
}

#[test]
fn binary_output_is_deterministic() {
    let bin = env!("CARGO_BIN_EXE_opd");
    let go = || {
        Command::new(bin)
            .args([
                "--format",
                "json",
                "selftest",
                "--seed",
                "11",
                "--samples",
                "3",
            ])
            .output()
            .unwrap()
    };
    let (a, b) = (go(), go());
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let bad = Command::new(bin)
        .args(["tree", "show", "(*"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
