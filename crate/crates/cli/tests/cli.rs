use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_degenzeta"));
    c.env_remove("DEGENZETA_MAX_TERMS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_lines(o: &Output) -> Vec<Value> {
    stdout(o).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

fn sweep(config: &str, extra: &[&str]) -> Output {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.cfg");
    fs::write(&path, config).unwrap();
    let mut args = vec!["sweep", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    run(&args)
}

#[test]
fn verify_passes_at_lambda_one() {
    let o = run(&[
        "verify",
        "--identity",
        "t5a",
        "--lambda",
        "1",
        "--p",
        "3",
        "--tol",
        "1e-12",
    ]);
    assert_eq!(code(&o), 0);
    let r = &json_lines(&o)[0];
    assert_eq!(r["pass"], true);
    assert_eq!(r["lhs"].as_f64(), Some(1.0));
    assert_eq!(r["rhs"].as_f64(), Some(1.0));
}

#[test]
fn verify_t1_reports_theorem_value_and_quadrature() {
    let o = run(&[
        "verify",
        "--identity",
        "t1",
        "--lambda",
        "0.5",
        "--r",
        "1",
        "--p",
        "2",
        "--tol",
        "1e-8",
    ]);
    assert_eq!(code(&o), 0);
    let r = &json_lines(&o)[0];
    let z2 = 4.0 - 4.0 * 2f64.ln();
    assert!((r["rhs"].as_f64().unwrap() - (z2 - 2.0 / 3.0)).abs() < 1e-12);
    assert_eq!(r["cross_oracle"]["agrees"], true);
    assert_eq!(r["params"]["r"], 1);
    assert!(r["params"].get("n").is_none());
}

#[test]
fn report_keys_are_stable() {
    let o = run(&["verify", "--identity", "t3", "--lambda", "0.5", "--p", "3"]);
    let line = stdout(&o);
    let keys = [
        "identity",
        "params",
        "lhs",
        "rhs",
        "lhs_tail_bound",
        "rhs_tail_bound",
        "abs_residual",
        "rel_residual",
        "tolerance",
        "pass",
        "terms_used",
        "elapsed_ms",
    ];
    let mut at = 0;
    for k in keys {
        let pos = line[at..]
            .find(&format!("\"{k}\":"))
            .unwrap_or_else(|| panic!("key {k} out of order"));
        at += pos;
    }
    // 17 significant digits
    assert!(line.contains("\"tolerance\":1.0000000000000000e-8"));
}

#[test]
fn usage_errors_exit_two() {
    let o = run(&["verify", "--identity", "t5a", "--lambda", "0.5", "--p", "0"]);
    assert_eq!(code(&o), 2);
    let o = run(&["verify", "--identity", "t42", "--lambda", "0.5", "--p", "1"]);
    assert_eq!(code(&o), 2);
    let err = String::from_utf8(o.stderr).unwrap();
    for id in ["t1", "t2a", "t5b", "gen36", "c7"] {
        assert!(err.contains(id), "{err}");
    }
    assert_eq!(code(&run(&["verify", "--identity", "t5a", "--p", "1"])), 2);
    assert_eq!(
        code(&run(&[
            "verify",
            "--identity",
            "t6",
            "--lambda",
            "0.5",
            "--p",
            "3",
            "--n",
            "2"
        ])),
        2
    );
    assert_eq!(
        code(&run(&["verify", "--identity", "t5a", "--lambda", "1.5", "--p", "1"])),
        2
    );
    assert_eq!(code(&run(&["eval", "zeta", "--lambda", "0.5"])), 2);
    assert_eq!(code(&run(&["eval", "gamma", "--lambda", "0.5"])), 2);
    assert_eq!(code(&run(&["frobnicate"])), 2);
}

#[test]
fn non_convergence_exits_three() {
    let o = run(&[
        "verify",
        "--identity",
        "t5a",
        "--lambda",
        "0.1",
        "--p",
        "1",
        "--tol",
        "1e-15",
        "--max-terms",
        "16",
    ]);
    assert_eq!(code(&o), 3);
    assert_eq!(json_lines(&o)[0]["error"]["kind"], "non_convergence");
}

#[test]
fn env_var_sets_default_term_ceiling() {
    let args = [
        "verify",
        "--identity",
        "t5a",
        "--lambda",
        "0.1",
        "--p",
        "1",
        "--tol",
        "1e-15",
    ];
    let o = bin().args(args).env("DEGENZETA_MAX_TERMS", "16").output().unwrap();
    assert_eq!(code(&o), 3);
    let o = bin().args(args).output().unwrap();
    assert_eq!(code(&o), 0);
    let o = bin().args(args).env("DEGENZETA_MAX_TERMS", "lots").output().unwrap();
    assert_eq!(code(&o), 2);
}

#[test]
fn failing_identity_exits_one() {
    // 64 terms leave the t6 series far from its quadrature oracle
    let o = run(&[
        "verify",
        "--identity",
        "t6",
        "--lambda",
        "0.25",
        "--p",
        "3",
        "--n",
        "3",
        "--max-terms",
        "64",
    ]);
    assert_eq!(code(&o), 1);
    assert_eq!(json_lines(&o)[0]["pass"], false);
}

#[test]
fn eval_examples() {
    let o = run(&["eval", "zeta", "--s", "2", "--lambda", "1"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json_lines(&o)[0]["value"].as_f64(), Some(1.0));
    let o = run(&["eval", "harmonic", "--n", "2", "--lambda", "0.5"]);
    assert_eq!(json_lines(&o)[0]["value"].as_f64(), Some(1.25));
    let o = run(&["eval", "integral_closed", "--r", "1", "--p", "1", "--lambda", "0.5"]);
    assert!((json_lines(&o)[0]["value"].as_f64().unwrap() - 2.0 / 3.0).abs() < 1e-15);
    let o = run(&[
        "eval",
        "integral_quadrature",
        "--r",
        "1",
        "--p",
        "1",
        "--lambda",
        "0.5",
        "--tol",
        "1e-10",
    ]);
    let v = &json_lines(&o)[0];
    assert!((v["value"].as_f64().unwrap() - 2.0 / 3.0).abs() < 1e-10);
    assert!(v.get("error_estimate").is_some());
    let o = run(&["eval", "hurwitz", "--k", "2", "--x", "1", "--lambda", "1"]);
    assert!((json_lines(&o)[0]["value"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    let o = run(&["eval", "polylog", "--p", "1", "--t", "0.5", "--lambda", "1"]);
    assert!((json_lines(&o)[0]["value"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    let o = run(&["eval", "harmonic_higher", "--n", "2", "--p", "2", "--lambda", "0.5"]);
    assert_eq!(json_lines(&o)[0]["value"].as_f64(), Some(1.125));
    let o = run(&["eval", "convolution", "--n", "3", "--p", "2", "--lambda", "0.5"]);
    assert!((json_lines(&o)[0]["value"].as_f64().unwrap() - 2.5).abs() < 1e-14);
}

#[test]
fn eval_domain_errors_exit_three() {
    assert_eq!(code(&run(&["eval", "zeta", "--s", "0.5", "--lambda", "0.5"])), 3);
    assert_eq!(code(&run(&["eval", "zeta", "--s", "2", "--lambda=-1"])), 3);
    assert_eq!(
        code(&run(&["eval", "hurwitz", "--k", "1", "--x", "1", "--lambda", "0.5"])),
        3
    );
    assert_eq!(
        code(&run(&["eval", "polylog", "--p", "2", "--t", "1.5", "--lambda", "0.5"])),
        3
    );
}

#[test]
fn sweep_lambda_one_passes() {
    let o = sweep("identities = [t5a]\nlambdas = [1]\np_range = 1..4\n", &[]);
    assert_eq!(code(&o), 0);
    let lines = json_lines(&o);
    assert_eq!(lines.len(), 5);
    assert!(lines[..4].iter().all(|r| r["pass"] == true));
    assert_eq!(lines[4]["summary"]["passed"], 4);
}

#[test]
fn sweep_counts_and_orders_reports() {
    let o = sweep("identities = [t5b, t3]\nlambdas = [0.75, 0.25]\np_range = 2..4\n", &[]);
    assert_eq!(code(&o), 0);
    let lines = json_lines(&o);
    assert_eq!(lines.len(), 13);
    let keys: Vec<(String, f64, u64)> = lines[..12]
        .iter()
        .map(|r| {
            (
                r["identity"].as_str().unwrap().to_string(),
                r["params"]["lambda"].as_f64().unwrap(),
                r["params"]["p"].as_u64().unwrap(),
            )
        })
        .collect();
    assert_eq!(keys[0], ("t3".to_string(), 0.25, 2));
    assert_eq!(keys[11], ("t5b".to_string(), 0.75, 4));
}

#[test]
fn sweep_config_errors_exit_two() {
    let o = sweep("identities = [t5a]\np_range = 1..4\n", &[]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8(o.stderr).unwrap().contains("lambdas"));
    let o = sweep("identities = [t2]\nlambdas = [0.5]\np_range = 1..2\n", &[]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8(o.stderr).unwrap().contains("n_range"));
    assert_eq!(code(&run(&["sweep", "/nonexistent/sweep.cfg"])), 2);
}

#[test]
fn sweep_is_deterministic_across_runs_and_thread_counts() {
    let cfg = "identities = [t1, t2, t4, gen36, t6, c7]\nlambdas = [0.3, 0.7]\np_range = 1..3\nn_range = 0..3\nr_range = 1..2\nm_range = [3]\ntol = 1e-7\nmax_terms = 20000\n";
    let serial = sweep(cfg, &["--parallelism", "1"]);
    let again = sweep(cfg, &["--parallelism", "1"]);
    let parallel = sweep(cfg, &["--parallelism", "4"]);
    assert_eq!(serial.stdout, again.stdout);
    assert_eq!(serial.stdout, parallel.stdout);
    for format in ["csv", "text"] {
        let a = sweep(cfg, &["--parallelism", "1", "--format", format]);
        let b = sweep(cfg, &["--parallelism", "3", "--format", format]);
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn csv_and_text_formats() {
    let o = sweep(
        "identities = [t5a]\nlambdas = [0.5]\np_range = 1..2\noutput_format = csv\n",
        &[],
    );
    let out = stdout(&o);
    let lines: Vec<_> = out.lines().collect();
    assert!(lines[0].starts_with("identity,lambda,p,n,r,m,lhs,rhs"));
    assert_eq!(lines.len(), 4);
    assert!(lines[3].starts_with("# summary: total=2 passed=2"));
    let o = sweep(
        "identities = [t5a]\nlambdas = [0.5]\np_range = 1..2\n",
        &["--format", "text"],
    );
    let out = stdout(&o);
    assert!(out.lines().next().unwrap().starts_with("PASS t5a lambda=0.5 p=1"));
    assert!(out.ends_with("summary: 2 reports, 2 passed, 0 failed\n"));
}
