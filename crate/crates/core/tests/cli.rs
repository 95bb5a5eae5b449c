use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ads-orbits")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn json_reports_are_deterministic() {
    let args = ["verify", "--suite", "n-orbits", "--n", "3..4", "--samples", "12", "--seed", "5", "--format", "json"];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(stdout(&a), stdout(&b));
    let v: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, ["suite", "n", "seed", "samples", "tol", "checks", "overall"]);
    assert_eq!(v["n"], serde_json::json!([3, 4]));
    assert_eq!(v["overall"], "pass");
    for c in v["checks"].as_array().unwrap() {
        let keys: Vec<&str> = c.as_object().unwrap().keys().map(String::as_str).collect();
        assert_eq!(keys, ["name", "status", "observed", "expected", "max_err"]);
    }
}

#[test]
fn seeds_change_the_samples() {
    let base = ["verify", "--suite", "n-orbits", "--n", "3", "--samples", "6", "--format", "json"];
    let a = stdout(&run(&[&base[..], &["--seed", "1"]].concat()));
    let b = stdout(&run(&[&base[..], &["--seed", "2"]].concat()));
    assert_ne!(a, b);
}

#[test]
fn floats_have_seventeen_digits() {
    let o = run(&["verify", "--suite", "kaehler", "--n", "3", "--tol", "0.001", "--format", "json"]);
    let text = stdout(&o);
    assert!(text.contains("\"tol\":1.0000000000000000e-3"), "{text}");
}

#[test]
fn a_failing_check_exits_one() {
    // the stated subspace W is not invariant in case 4
    let o = run(&["verify", "--suite", "su1n-classification", "--n", "2", "--samples", "8"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.contains("invariant-W"), "{text}");
    assert!(text.lines().last().unwrap().starts_with("overall FAIL"));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["verify", "--suite", "n-orbits", "--n", "2"][..],
        &["verify", "--suite", "n-orbits", "--n", "9"],
        &["verify", "--suite", "nope"],
        &["verify", "--suite", "kaehler", "--n", "x"],
        &["verify", "--suite", "kaehler", "--samples", "0"],
        &["verify", "--suite", "kaehler", "--tol", "-1"],
        &["verify"],
        &["frobnicate"],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(o.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn list_suites_names_everything() {
    let o = run(&["list-suites"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for name in [
        "roots-so2n",
        "roots-su1n",
        "exp-closed-forms",
        "su1n-classification",
        "n-orbits",
        "an-lines",
        "parabolic-orbits",
        "kaehler",
        "parabolic-structure",
    ] {
        assert!(text.lines().any(|l| l.starts_with(name)), "{name}");
    }
}

#[test]
fn text_format_lists_every_check() {
    let o = run(&["verify", "--suite", "roots-su1n", "--n", "2,3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("suite roots-su1n"));
    assert!(text.contains("n=2/") && text.contains("n=3/"));
    assert!(text.lines().last().unwrap().starts_with("overall pass"));
}
