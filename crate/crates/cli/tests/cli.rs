use std::process::{Command, Output};

fn staircase(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_staircase")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn queries_print_values() {
    let o = staircase(&["epsilon", "S[1,2]"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "1");
    assert_eq!(stdout(&staircase(&["tau", "T(3,4) + T(3,4)"])).trim(), "6");
    assert_eq!(stdout(&staircase(&["alex", "T(3,4)"])).trim(), "1 - t + t^3 - t^5 + t^6");
    assert_eq!(stdout(&staircase(&["steps", "T(3,4) - C(T(2,3);2,3)"])).trim(), "[]");
    let a = staircase(&["arch", "K(0,1)", "S[2,2]", "--max-n", "3"]);
    assert_eq!(stdout(&a).trim(), "equivalent (sampled, n <= 3)");
}

#[test]
fn syntax_errors_are_usage_errors() {
    let o = staircase(&["tau", "T(3"]);
    assert_eq!(o.status.code(), Some(3));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("offset 3"), "{err}");
    assert_eq!(staircase(&["tau", "T(4,6)"]).status.code(), Some(3));
    assert_eq!(staircase(&["verify", "nope"]).status.code(), Some(3));
    assert_eq!(staircase(&["frobnicate"]).status.code(), Some(3));
}

#[test]
fn json_is_byte_identical_across_runs() {
    for args in [
        &["--json", "dump", "T(3,4) + T(2,3)"][..],
        &["--json", "epsilon", "K(1,0) - K(0,1)"],
        &["--json", "verify", "properties", "--cases", "20", "--seed", "7"],
    ] {
        let (x, y) = (staircase(args), staircase(args));
        assert_eq!(x.status.code(), Some(0), "{args:?}");
        assert_eq!(x.stdout, y.stdout, "{args:?}");
        let v: serde_json::Value = serde_json::from_slice(&x.stdout).unwrap();
        assert!(v.is_object());
    }
}

#[test]
fn verify_box_golden() {
    let o = staircase(&["verify", "box", "--a", "1,3", "--b", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("core [1, 3, 2], 2 box summands"), "{}", stdout(&o));
}

#[test]
fn verify_reports_list_every_point() {
    let o = staircase(&["--json", "verify", "cable-poly", "--p-max", "4", "--m-max", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    // p in 2..=4, m in 1..=4, both signs
    assert_eq!(v["instances"].as_array().unwrap().len(), 24);
    assert!(v.get("wall_ms").is_none());
    let t = staircase(&["--json", "verify", "cable-poly", "--p-max", "2", "--m-max", "1", "--timing"]);
    let v: serde_json::Value = serde_json::from_slice(&t.stdout).unwrap();
    assert!(v["wall_ms"].is_u64());
}

#[test]
fn thread_cap_is_honoured() {
    let o = Command::new(env!("CARGO_BIN_EXE_staircase"))
        .args(["verify", "box"])
        .env("STAIRCASE_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let bad = Command::new(env!("CARGO_BIN_EXE_staircase"))
        .args(["verify", "box"])
        .env("STAIRCASE_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(3));
}
