use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ncfourier"))
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ncfourier-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

const WEYL: &str = "algebra weyl;\ngens x:0, d:1;\nrel d*x - x*d - 1;\nbound 4;\n";

const DOUBLE_POINT_DIAGRAM: &str = r#"{"R": "gens; bound 1;",
 "S": "gens z:0, u:0; rel z*z - 1; rel 2*u*z - 1; rel 2*z*u - 1; bound 2;",
 "Aprime": "gens e; rel e*e; bound 2;",
 "A": "gens; bound 1;",
 "maps": {"alpha": [], "beta": [[{"word": [], "coeff": "1"}], [{"word": [], "coeff": "1/2"}]],
          "gamma": [[]], "delta": []}}"#;

#[test]
fn alg_reports_are_byte_identical() {
    let p = scratch("weyl_a.txt", WEYL);
    let a = run(&["alg", "--pres", p.to_str().unwrap()]);
    let b = run(&["alg", "--pres", p.to_str().unwrap(), "--json", "-"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let r = report(&a);
    assert_eq!(r["dim"], 15);
    assert_eq!(r["dims_by_degree"], serde_json::json!([1, 2, 3, 4, 5]));
    assert_eq!(r["abelianization_dim"], 0);
}

#[test]
fn json_file_matches_stdout() {
    let p = scratch("weyl_b.txt", WEYL);
    let target = p.with_extension("json");
    let to_file = run(&["alg", "--pres", p.to_str().unwrap(), "--json", target.to_str().unwrap()]);
    assert_eq!(to_file.status.code(), Some(0));
    assert!(to_file.stdout.is_empty());
    let to_stdout = run(&["alg", "--pres", p.to_str().unwrap()]);
    assert_eq!(std::fs::read(&target).unwrap(), to_stdout.stdout);
}

#[test]
fn print_is_a_fixpoint() {
    let p = scratch("weyl_c.txt", "gens x:0,d:1; # comment\nrel [d, x] - 1; bound 4;");
    let once = run(&["alg", "--pres", p.to_str().unwrap(), "--print"]);
    assert_eq!(once.status.code(), Some(0));
    let q = scratch("weyl_c2.txt", std::str::from_utf8(&once.stdout).unwrap());
    let twice = run(&["alg", "--pres", q.to_str().unwrap(), "--print"]);
    assert_eq!(once.stdout, twice.stdout);
}

#[test]
fn usage_and_parse_errors_exit_2() {
    let bad = scratch("bad.txt", "gens x, d;\nrel d* ;\n");
    let out = run(&["alg", "--pres", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("2:8"));
    let unknown = scratch("unknown.txt", "gens x; rel y;");
    let out = run(&["alg", "--pres", unknown.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown generator"));
    assert_eq!(run(&["fm", "--group", "Z0"]).status.code(), Some(2));
    assert_eq!(run(&["fm", "--group", "Z4", "--check", "nope"]).status.code(), Some(2));
    assert_eq!(run(&["microloc", "grn"]).status.code(), Some(2));
    assert_eq!(run(&[]).status.code(), Some(2));
}

#[test]
fn fm_all_checks_pass() {
    let out = run(&["fm", "--group", "Z4xZ2", "--algebra", "shift=(1,0);twist=(0,1)", "--check", "all", "--samples", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["algebra_rank"], 8);
    assert_eq!(r["passed"], true);
    assert!(r["checks"].as_array().unwrap().len() >= 15);
}

#[test]
fn etale_lift_unique_and_non_unique() {
    let d = scratch("diagram.json", DOUBLE_POINT_DIAGRAM);
    let out = run(&["etale", "lift", "--diagram", d.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["lift_dimension"], 0);
    assert_eq!(r["standard_etale"], true);
    assert_eq!(r["lift"]["u"], "1/2");

    // a free generator lifts in a one-parameter family: not étale
    let free = DOUBLE_POINT_DIAGRAM
        .replace("gens z:0, u:0; rel z*z - 1; rel 2*u*z - 1; rel 2*z*u - 1; bound 2;", "gens z; bound 2;")
        .replace(r#"[[{"word": [], "coeff": "1"}], [{"word": [], "coeff": "1/2"}]]"#, r#"[[{"word": [], "coeff": "1"}]]"#);
    let d = scratch("free_diagram.json", &free);
    let out = run(&["etale", "lift", "--diagram", d.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    assert_eq!(r["passed"], false);
    assert_eq!(r["lift_dimension"], 1);
}

#[test]
fn etale_check_over_generated_family() {
    let alpha = scratch(
        "alpha.json",
        r#"{"R": "gens; bound 1;", "S": "gens z:0, u:0; rel z*z - 1; rel 2*u*z - 1; rel 2*z*u - 1; bound 2;", "alpha": []}"#,
    );
    let fam = scratch("family.json", r#"{"double_point": {"count": 4, "seed": 2}}"#);
    let out = run(&["etale", "check", "--alpha", alpha.to_str().unwrap(), "--family", fam.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(&out);
    assert_eq!(r["family_size"], 4);
    let listed = scratch("listed.json", &format!("[{DOUBLE_POINT_DIAGRAM}]"));
    let out = run(&["etale", "check", "--alpha", alpha.to_str().unwrap(), "--family", listed.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn malformed_diagram_is_a_parse_error() {
    let d = scratch("broken.json", "{\"R\": ");
    assert_eq!(run(&["etale", "lift", "--diagram", d.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn microloc_localization_is_lift_independent() {
    let p = scratch("weyl_d.txt", WEYL);
    let out = run(&[
        "microloc", "grn", "--pres", p.to_str().unwrap(), "--n", "1", "--localize", "f=d", "--lift", "d + 2*x - 1",
        "--order", "3",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(&out);
    assert_eq!(r["localized_dims_by_order"], serde_json::json!([5, 5, 0, 0]));
    assert_eq!(r["twisting"]["chart_dims"], serde_json::json!([10, 9, 7]));
    // a lift with a different symbol is rejected
    let out = run(&["microloc", "grn", "--pres", p.to_str().unwrap(), "--n", "1", "--localize", "f=d", "--lift", "2*d"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn oracles_and_budget() {
    let free = scratch("free.txt", "gens x, y; bound 4;");
    let out = run(&["oracle", "filtration", "--pres", free.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["dims"], r["oracle_dims"]);
    let out = bin().args(["oracle", "filtration", "--pres", free.to_str().unwrap()]).env("NCF_BUDGET", "30").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));
    let out = run(&["oracle", "orthogonality", "--group", "Z6"]);
    assert_eq!(out.status.code(), Some(0));
    let out = run(&["oracle", "assoc", "--group", "Z4", "--seed", "1"]);
    assert_eq!(report(&out)["seed"], 1);
    assert_eq!(out.status.code(), Some(0));
}
