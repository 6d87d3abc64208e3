use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::atomic::{AtomicUsize, Ordering};

use serde_json::Value;
use unate::formats::parse_pdg;
use unate::manifest::{read_manifest, result_digest};
use unate::schema::{schema_for, validate};
use unate::unate_core::pdg::{contains_tk, make_tk};

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
    dir: Option<PathBuf>,
}

impl Run {
    fn json(&self) -> Value {
        serde_json::from_str(&self.stdout).unwrap_or_else(|e| panic!("{e}: {}", self.stdout))
    }

    fn dir(&self) -> &Path {
        self.dir.as_deref().expect("run directory")
    }
}

fn out_root() -> PathBuf {
    static NEXT: AtomicUsize = AtomicUsize::new(0);
    let p = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(format!(
        "cli-{}-{}",
        std::process::id(),
        NEXT.fetch_add(1, Ordering::Relaxed)
    ));
    std::fs::create_dir_all(&p).unwrap();
    p
}

fn data(name: &str) -> String {
    format!("{}/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn unate(args: &[&str]) -> Run {
    let root = out_root();
    let out = Command::new(env!("CARGO_BIN_EXE_unate"))
        .arg("--out")
        .arg(&root)
        .args(args)
        .output()
        .unwrap();
    let stderr = String::from_utf8(out.stderr).unwrap();
    // the last stderr line is `<command>: <dir>` when a run was recorded
    let dir = stderr
        .lines()
        .last()
        .and_then(|l| l.split_once(": "))
        .map(|(_, d)| PathBuf::from(d))
        .filter(|d| d.starts_with(&root));
    Run {
        code: out.status.code().unwrap(),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr,
        dir,
    }
}

fn assert_schema(name: &str, v: &Value) {
    let errs = validate(&schema_for(name).unwrap(), v);
    assert!(errs.is_empty(), "{name}: {errs:?}");
}

#[test]
fn classify_reports_non_minimality_and_records_the_run() {
    let r = unate(&["classify", &data("nonminimal.kdnf")]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = r.json();
    assert_schema("classify", &v);
    assert_eq!(v["minimality"]["minimal"], false);
    assert_eq!(v["flags"]["unate"], false);

    let m = read_manifest(&r.dir().join("manifest.json")).unwrap();
    let raw: Value =
        serde_json::from_str(&std::fs::read_to_string(r.dir().join("manifest.json")).unwrap())
            .unwrap();
    assert_schema("manifest", &raw);
    assert_eq!(m.command, "classify");
    let stored: Value =
        serde_json::from_str(&std::fs::read_to_string(r.dir().join("result.json")).unwrap())
            .unwrap();
    assert_eq!(stored, v);
    assert_eq!(m.result_digest, result_digest(&stored));
    assert_eq!(m.input_digests.len(), 1);
}

#[test]
fn monotone_profile_is_exact() {
    let v = unate(&["classify", &data("monotone.kdnf")]).json();
    assert_eq!(v["flags"]["unate"], true);
    assert_eq!(v["profile"]["weight"], "1/2");
    assert_eq!(v["profile"]["alpha"][1], "1/2");
    assert_eq!(v["minimality"]["minimal"], true);
}

#[test]
fn malformed_input_exits_4_with_line() {
    let root = out_root();
    let bad = root.join("bad.kdnf");
    std::fs::write(&bad, "p kdnf 3 1 2\n1 x 0\n").unwrap();
    let r = unate(&["classify", bad.to_str().unwrap()]);
    assert_eq!(r.code, 4);
    assert!(r.stderr.contains("line 2"), "{}", r.stderr);
    assert_eq!(unate(&["no-such-command"]).code, 4);
    assert_eq!(unate(&["census", "three", "2"]).code, 4);
}

#[test]
fn certify_default_family() {
    let r = unate(&["certify", "4"]);
    assert_eq!(r.code, 0);
    let v = r.json();
    assert_schema("certify", &v);
    assert_eq!(v["passed"], true);
    assert_eq!(v["digraphs_checked"], 7776);
    let tight: Vec<(String, u64, u64)> = v["tight_cases"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| {
            (
                t["case"].as_str().unwrap().to_string(),
                t["arcs"].as_u64().unwrap(),
                t["loops"].as_u64().unwrap(),
            )
        })
        .collect();
    assert!(tight.contains(&("A".into(), 2, 0)), "{tight:?}");
    assert!(tight.contains(&("D".into(), 4, 0)), "{tight:?}");
    assert!(!r.dir().join("failures.txt").exists());
}

#[test]
fn certify_failure_exit_and_witnesses() {
    let r = unate(&["certify", "4", "--theta", "2"]);
    assert_eq!(r.code, 2);
    assert_eq!(r.json()["passed"], false);
    let failures = std::fs::read_to_string(r.dir().join("failures.txt")).unwrap();
    assert!(!failures.trim().is_empty());
}

#[test]
fn certify_input_and_budget_errors() {
    assert_eq!(unate(&["certify", "3"]).code, 4);
    let r = unate(&["certify", "7", "--mode", "enumeration", "--budget", "10"]);
    assert_eq!(r.code, 3, "{}", r.stderr);
    let r = unate(&["certify", "40", "--mode", "closed-form"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json()["mode"], "closed_form");
}

#[test]
fn turan_exhaustive_value_and_witness() {
    let r = unate(&["turan", "5", "2", "--mode", "exhaustive"]);
    assert_eq!(r.code, 0);
    let v = r.json();
    assert_schema("turan", &v);
    assert_eq!(v["best_value"], "6/5");
    assert_eq!(v["certified"], true);
    let w = parse_pdg(&std::fs::read_to_string(r.dir().join("witness.pdg")).unwrap()).unwrap();
    assert_eq!(w.n(), 5);
    assert!(!contains_tk(&w));
    assert!(contains_tk(&make_tk(2)));
}

#[test]
fn heuristic_runs_are_reproducible() {
    let args = [
        "turan",
        "6",
        "3",
        "--mode",
        "heuristic",
        "--seed",
        "17",
        "--restarts",
        "4",
    ];
    let a = unate(&args);
    let b = unate(&args);
    assert_eq!(a.code, b.code);
    let (ma, mb) = (
        read_manifest(&a.dir().join("manifest.json")).unwrap(),
        read_manifest(&b.dir().join("manifest.json")).unwrap(),
    );
    assert_eq!(ma.result_digest, mb.result_digest);
    assert_eq!(ma.seeds, mb.seeds);
}

#[test]
fn census_small_and_out_of_range() {
    let r = unate(&["census", "3", "2"]);
    assert_eq!(r.code, 0);
    let v = r.json();
    assert_schema("census", &v);
    assert_eq!(
        (
            v["total"].as_u64(),
            v["monotone"].as_u64(),
            v["unate"].as_u64()
        ),
        (Some(166), Some(8), Some(45))
    );
    assert_eq!(unate(&["census", "6", "2"]).code, 4);
}

#[test]
fn orient_and_stability() {
    let r = unate(&["orient", &data("k4.hgr")]);
    assert_eq!(r.code, 0);
    let v = r.json();
    assert_schema("orient", &v);
    assert_eq!(v["max_load"], 2);
    assert!(r.dir().join("orientation.txt").exists());

    let r = unate(&["stability", &data("nonminimal.kdnf")]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_schema("stability", &r.json());
}

#[test]
fn flags_override_config_file() {
    let root = out_root();
    let conf = root.join("run.conf");
    std::fs::write(&conf, "# overrides\nzeta = 1/4\ncap = 10\n").unwrap();
    let r = unate(&[
        "--config",
        conf.to_str().unwrap(),
        "classify",
        &data("monotone.kdnf"),
        "--zeta",
        "1/3",
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let m = read_manifest(&r.dir().join("manifest.json")).unwrap();
    assert_eq!(m.config["zeta"], "1/3");
    assert_eq!(m.config["cap"], "10");
    assert_eq!(r.json()["classifier"]["params"]["zeta"], "1/3");

    std::fs::write(&conf, "zeta = one half\n").unwrap();
    assert_eq!(
        unate(&[
            "--config",
            conf.to_str().unwrap(),
            "classify",
            &data("monotone.kdnf")
        ])
        .code,
        4
    );
}

#[test]
fn selftest_subset() {
    let r = unate(&["selftest", "--only", "3"]);
    assert_eq!(r.code, 0, "{}{}", r.stdout, r.stderr);
    assert!(r.stdout.starts_with("[PASS] 3."), "{}", r.stdout);
    let stored: Value =
        serde_json::from_str(&std::fs::read_to_string(r.dir().join("result.json")).unwrap())
            .unwrap();
    assert_schema("selftest", &stored);
}
