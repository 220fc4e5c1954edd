use std::path::PathBuf;
use std::process::{Command, Output};

fn rank3(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rank3")).args(args).output().unwrap()
}

fn scratch(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("rank3-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn zoo_then_closure_then_verify() {
    let file = scratch("paley13.txt", "");
    assert!(rank3(&["zoo", "paley", "13", "-o", file.to_str().unwrap()]).status.success());
    let text = std::fs::read_to_string(&file).unwrap();
    assert!(text.starts_with("# paley(13)"));

    let out = rank3(&["closure", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let closure_text = stdout(&out);
    assert!(closure_text.contains("# chosen small, order 78, oracle 78"), "{closure_text}");
    let candidate = scratch("paley13-closure.txt", &closure_text);
    let out = rank3(&["verify", file.to_str().unwrap(), candidate.to_str().unwrap()]);
    assert_eq!((out.status.code(), stdout(&out).trim()), (Some(0), "true"));
}

#[test]
fn json_report() {
    let file = scratch("clebsch.txt", "");
    rank3(&["zoo", "clebsch", "-o", file.to_str().unwrap()]);
    let out = rank3(&["closure", "--json", "--oracle", "off", file.to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["order"], "1920");
    assert_eq!(v["degree"], 16);
    assert_eq!(v["rank"], 3);
    assert_eq!(v["verified"], true);
    assert_eq!(v["branches"]["small"]["order"], "1920");
    assert!(v.get("oracle_order").is_none());
    assert_eq!(v["generators"][0].as_array().unwrap().len(), 16);
}

#[test]
fn rank_and_oracle() {
    let file = scratch("petersen.txt", "");
    rank3(&["zoo", "petersen", "-o", file.to_str().unwrap()]);
    let out = rank3(&["rank", file.to_str().unwrap()]);
    assert_eq!(stdout(&out), "rank 3\nsubdegrees 3 6\n");
    let out = rank3(&["oracle", file.to_str().unwrap()]);
    assert!(stdout(&out).starts_with("# order 120\n10\n"));
}

#[test]
fn exit_codes() {
    let bad = scratch("bad.txt", "5\n(0 1\n");
    let out = rank3(&["closure", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2, column 4"));
    let c5 = scratch("c5.txt", "5\n(0 1 2 3 4)\n");
    assert_eq!(rank3(&["closure", c5.to_str().unwrap()]).status.code(), Some(3));
    assert_eq!(rank3(&["rank", c5.to_str().unwrap()]).status.code(), Some(3));
    let j = scratch("johnson.txt", "");
    rank3(&["zoo", "johnson_pairs", "6", "-o", j.to_str().unwrap()]);
    assert_eq!(rank3(&["closure", "--threshold", "10", j.to_str().unwrap()]).status.code(), Some(4));
    assert_eq!(rank3(&["closure", "--threshold", "10", "--oracle", "on", j.to_str().unwrap()]).status.code(), Some(0));
}
