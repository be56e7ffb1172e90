use std::path::PathBuf;
use std::process::{Command, Output};

use catalyst_core::circuit::parse_circuit;
use catalyst_core::GateSet;

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "data", name]
        .iter()
        .collect();
    p.to_string_lossy().into_owned()
}

fn catalyst(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_catalyst"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn t_to_cs_removes_every_t() {
    let o = catalyst(&[
        "transpile",
        &data("single_t.circ"),
        "--pass",
        "t-to-cs",
        "--verify",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let c = parse_circuit(&stdout(&o)).unwrap();
    assert_eq!(c.t_count(), 0);
    assert_eq!(c.width(), 2);
    assert!(stderr(&o).contains("PASS t-to-cs"));
}

#[test]
fn real_encode_gives_toffoli_h() {
    let o = catalyst(&[
        "transpile",
        &data("cs.circ"),
        "--pass",
        "real-encode",
        "--verify",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let c = parse_circuit(&stdout(&o)).unwrap();
    assert_eq!(c.gateset(), Some(GateSet::ToffoliH));
}

#[test]
fn ccz_and_synth_passes_verify() {
    for (file, pass) in [
        ("ccz_resource.circ", "ccz-to-3t"),
        ("small_phase.circ", "synth-phase"),
    ] {
        let o = catalyst(&["transpile", &data(file), "--pass", pass, "--verify"]);
        assert_eq!(o.status.code(), Some(0), "{pass}: {}", stderr(&o));
    }
}

#[test]
fn usage_errors_exit_two() {
    let o = catalyst(&["transpile", &data("cs.circ"), "--pass", "nope"]);
    assert_eq!(o.status.code(), Some(2));
    let o = catalyst(&["estimate", &data("single_t.circ"), "--obs", "XZ"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("2 letters"));
    let o = catalyst(&["simulate", "/no/such/file.circ"]);
    assert_eq!(o.status.code(), Some(2));
}

fn field(out: &str, key: &str) -> f64 {
    out.lines()
        .find_map(|l| l.strip_prefix(&format!("{key}=")))
        .and_then(|v| v.split_whitespace().next())
        .and_then(|v| v.parse().ok())
        .unwrap_or_else(|| panic!("no {key} in {out}"))
}

#[test]
fn estimate_single_t() {
    let o = catalyst(&[
        "estimate",
        &data("single_t.circ"),
        "--obs",
        "X",
        "--shots",
        "100000",
        "--seed",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    let est = field(&out, "estimate");
    let se = field(&out, "stderr");
    assert!(
        (est - std::f64::consts::FRAC_1_SQRT_2).abs() < 4.0 * se,
        "{out}"
    );
    assert!(out.contains("exact=1/2*w - 1/2*i*w"));
}

#[test]
fn csv_is_deterministic_across_runs_and_threads() {
    let dir = tempfile::tempdir().unwrap();
    let mut tables = Vec::new();
    for (j, threads) in ["1", "4", "4"].iter().enumerate() {
        let path = dir.path().join(format!("run{j}.csv"));
        let o = Command::new(env!("CARGO_BIN_EXE_catalyst"))
            .env("CATALYST_THREADS", threads)
            .args([
                "estimate",
                &data("single_t.circ"),
                "--obs",
                "X",
                "--shots",
                "20000",
                "--seed",
                "11",
            ])
            .arg("--csv")
            .arg(&path)
            .output()
            .unwrap();
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        tables.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(tables[0], tables[1]);
    assert_eq!(tables[1], tables[2]);
    let text = String::from_utf8(tables[0].clone()).unwrap();
    assert!(text.starts_with("shots,estimate,stderr,exact\n"));
    assert!(text.lines().last().unwrap().starts_with("20000,"));
}

#[test]
fn bad_thread_count_is_a_usage_error() {
    let o = Command::new(env!("CARGO_BIN_EXE_catalyst"))
        .env("CATALYST_THREADS", "zero")
        .args(["zh", "rules", "--max-degree", "2"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn gadget_suite() {
    let o = catalyst(&["verify-gadgets"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).ends_with(" 0 failed\n"));

    let o = catalyst(&["verify-gadgets", "--scope", "adder", "--machine"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let names: Vec<&str> = out
        .lines()
        .filter_map(|l| l.strip_prefix("name="))
        .collect();
    assert_eq!(names.len(), 4);
    assert!(names.iter().all(|n| n.starts_with("adder")), "{names:?}");

    let o = catalyst(&["verify-gadgets", "--scope", "adder", "--inject-fault"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn zh_rules_all_admitted() {
    let o = catalyst(&["zh", "rules"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("admitted zs(2,3)"));
    assert!(out.contains("admitted cat[i]"));
    assert!(out.contains("admitted intro[w]"));
    assert!(out.trim_end().ends_with(" 0 rejected"));
}

#[test]
fn zh_extract_five_boxes() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("trace.txt");
    let out = dir.path().join("out.zh");
    let o = Command::new(env!("CARGO_BIN_EXE_catalyst"))
        .args(["zh", "extract", &data("five_w.zh"), "--label", "w", "-o"])
        .arg(&out)
        .arg("--trace")
        .arg(&trace)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stderr(&o).contains("steps=4"));
    assert_eq!(std::fs::read_to_string(&trace).unwrap().lines().count(), 4);
    let o = Command::new(env!("CARGO_BIN_EXE_catalyst"))
        .args(["zh", "equal", &data("five_w.zh")])
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(stdout(&o), "true\n");
}

#[test]
fn zh_equal_and_eval() {
    let o = catalyst(&["zh", "equal", &data("cnot.zh"), &data("cnot.zh")]);
    assert_eq!(
        (o.status.code(), stdout(&o)),
        (Some(0), "true\n".to_string())
    );
    let o = catalyst(&["zh", "equal", &data("cnot.zh"), &data("cz.zh")]);
    assert_eq!(
        (o.status.code(), stdout(&o)),
        (Some(1), "false\n".to_string())
    );
    let o = catalyst(&["zh", "eval", &data("cz.zh")]);
    assert!(stdout(&o).contains("[0, 0, 0, -1]"), "{}", stdout(&o));
}
