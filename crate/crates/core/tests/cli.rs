//! Exit codes and outputs of the `ifm` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ifm_core::cli::RunConfig;
use serde_json::Value;

const STANDARD: &str = r#"{ "construction": "standard", "domain": { "kind": "interval", "lo": 0, "hi": 1 } }"#;
const CRISP: &str = r#"{ "construction": "crisp_threshold", "domain": { "kind": "line", "n": 5 } }"#;
const LINE10: &str = r#"{ "construction": "standard", "domain": { "kind": "line", "n": 10 } }"#;

struct Run {
    dir: tempfile::TempDir,
}

impl Run {
    fn new() -> Self {
        Run {
            dir: tempfile::tempdir().unwrap(),
        }
    }

    fn config(&self, body: &str) -> PathBuf {
        let path = self.dir.path().join("config.json");
        std::fs::write(&path, body).unwrap();
        path
    }

    fn out(&self) -> PathBuf {
        self.dir.path().join("out")
    }

    fn ifm(&self, args: &[&str]) -> Output {
        Command::new(env!("CARGO_BIN_EXE_ifm")).args(args).output().unwrap()
    }

    fn command(&self, sub: &str, body: &str) -> (i32, PathBuf) {
        let cfg = self.config(body);
        let out = self.out();
        let o = self.ifm(&[sub, "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
        (o.status.code().unwrap(), out)
    }
}

fn config(space: &str, rest: &str) -> String {
    format!(r#"{{ "schema_version": 1, "space": {space}{rest} }}"#)
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn audit_standard_space_exits_zero() {
    let run = Run::new();
    let (code, out) = run.command("audit", &config(STANDARD, r#", "sampler": { "sample_count": 1000, "seed": 3 }"#));
    assert_eq!(code, 0);
    assert_eq!(read_json(&out.join("audit.json"))["checks"].as_array().unwrap().len(), 13);
}

#[test]
fn audit_crisp_space_exits_three_on_positivity() {
    let run = Run::new();
    let body = config(CRISP, r#", "sampler": { "mode": "exhaustive", "t_grid": [0.5, 2] }"#);
    let (code, out) = run.command("audit", &body);
    assert_eq!(code, 3);
    let report = read_json(&out.join("audit.json"));
    let failing: Vec<&str> = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["status"] == "FAIL")
        .map(|c| c["axiom"].as_str().unwrap())
        .collect();
    assert_eq!(failing, ["ii"]);
}

#[test]
fn out_of_range_k_exits_two_naming_the_field() {
    let run = Run::new();
    let cfg = run.config(&config(STANDARD, r#", "map": { "kind": "identity" }, "contraction": { "k": 1.5 }"#));
    let o = run.ifm(&["contract", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("contraction.k"));
}

#[test]
fn malformed_and_missing_configs_exit_two() {
    let run = Run::new();
    let cfg = run.config("{\n  \"schema_version\": 1,\n  \"space\": [\n");
    let o = run.ifm(&["audit", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line"));
    let o = run.ifm(&["audit", "--config", "/nonexistent/config.json"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run.ifm(&["audit"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn contract_outcomes() {
    let run = Run::new();
    let halving = config(STANDARD, r#", "map": { "kind": "scale", "factor": 0.5 }, "contraction": { "k": 0.5 }, "sampler": { "sample_count": 1000 }"#);
    assert_eq!(run.command("contract", &halving).0, 0);

    let identity = config(
        STANDARD,
        r#", "map": { "kind": "identity" }, "contraction": { "psi": { "kind": "power", "p": 2 }, "phi": { "kind": "power", "p": 0.5 } }, "sampler": { "sample_count": 200 }"#,
    );
    let (code, out) = run.command("contract", &identity);
    assert_eq!(code, 3);
    let report = read_json(&out.join("contract.json"));
    assert_eq!(report["admissibility"]["psi"]["strict_ok"], true);
    assert!(report["checks"][0]["violation_count"].as_u64().unwrap() > 0);

    let crisp = config(
        CRISP,
        r#", "map": { "kind": "table", "images": [3, 0, 4, 4, 1] }, "contraction": { "k": 0.3 }, "sampler": { "mode": "exhaustive", "t_grid": [0.5, 1, 2] }"#,
    );
    assert_eq!(run.command("contract", &crisp).0, 0);
}

#[test]
fn solve_halving_finds_zero() {
    let run = Run::new();
    let body = config(STANDARD, r#", "map": { "kind": "scale", "factor": 0.5 }, "solver": { "seeds": [1, 0.25], "epsilon": 1e-8 }"#);
    let (code, out) = run.command("solve", &body);
    assert_eq!(code, 0);
    let report = read_json(&out.join("solve.json"));
    assert!(report["fixed_point"].as_f64().unwrap().abs() <= 1e-8);
    assert_eq!(report["unique"], true);
    let csv = std::fs::read_to_string(out.join("trace_seed_1.csv")).unwrap();
    assert!(csv.starts_with("n,x_n,mu@0.100000,nu@0.100000,"));
}

#[test]
fn solve_identity_with_two_seeds_is_not_unique() {
    let run = Run::new();
    let body = config(STANDARD, r#", "map": { "kind": "identity" }, "solver": { "seeds": [0.2, 0.8] }"#);
    assert_eq!(run.command("solve", &body).0, 5);
}

#[test]
fn solve_cyclic_shift_reports_the_cycle() {
    let run = Run::new();
    let body = config(
        LINE10,
        r#", "map": { "kind": "table", "images": [1, 2, 3, 4, 5, 6, 7, 8, 9, 0] }, "solver": { "engine": "edelstein" }"#,
    );
    let (code, out) = run.command("solve", &body);
    assert_eq!(code, 4);
    let report = read_json(&out.join("solve.json"));
    assert!(report["fixed_point"].is_null());
    for seed in report["seeds"].as_array().unwrap() {
        assert_eq!(seed["cycle_length"], 10);
        assert_eq!(seed["stop_reason"], "cycle");
    }
}

#[test]
fn picard_non_convergence_exits_four() {
    let run = Run::new();
    let body = config(
        LINE10,
        r#", "map": { "kind": "table", "images": [1, 0, 2, 3, 4, 5, 6, 7, 8, 9] }, "solver": { "seeds": [0], "max_iter": 50 }"#,
    );
    let (code, out) = run.command("solve", &body);
    assert_eq!(code, 4);
    assert_eq!(read_json(&out.join("solve.json"))["seeds"][0]["stop_reason"], "max_iter");
    assert!(out.join("trace_seed_0.csv").exists());
}

#[test]
fn dump_config_round_trips() {
    let run = Run::new();
    let body = config(
        STANDARD,
        r#", "map": { "kind": "affine_clamped", "slope": 0.5, "offset": 0.1 }, "contraction": { "k": 0.5 }, "solver": { "seeds": [0.3] }"#,
    );
    let cfg = run.config(&body);
    let o = run.ifm(&["solve", "--config", cfg.to_str().unwrap(), "--seed", "99", "--dump-config"]);
    assert_eq!(o.status.code(), Some(0));
    let dumped = String::from_utf8(o.stdout).unwrap();
    let parsed = RunConfig::from_json(&dumped).unwrap();
    assert_eq!(parsed.sampler.seed, 99);
    assert!(parsed.space.tconorm.is_some());
    assert_eq!(RunConfig::from_json(&parsed.to_json()).unwrap(), parsed);

    let again = run.config(&dumped);
    let o = run.ifm(&["solve", "--config", again.to_str().unwrap(), "--dump-config"]);
    assert_eq!(String::from_utf8(o.stdout).unwrap(), dumped);
}

#[test]
fn seed_flag_changes_audit_samples_deterministically() {
    let run = Run::new();
    let cfg = run.config(&config(STANDARD, r#", "sampler": { "sample_count": 300 }"#));
    let read = |seed: &str, dir: &str| {
        let out = run.dir.path().join(dir);
        run.ifm(&["audit", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "--seed", seed]);
        std::fs::read_to_string(out.join("audit.json")).unwrap()
    };
    assert_eq!(read("1", "a"), read("1", "b"));
    assert_ne!(read("1", "a"), read("2", "c"));
}
