use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bsgroups")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> serde_json::Value {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn girth_grid_matches_formula() {
    let out = run(&["girth", "--m", "-4..4", "--n", "-4..4"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("m,n,formula,bruteforce,match"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 64);
    assert!(rows.iter().all(|r| r.ends_with(",true")));
    assert!(rows.contains(&"2,3,7,7,true"));
    assert!(String::from_utf8_lossy(&out.stderr).contains("excluding 0"));
}

#[test]
fn compare_finds_girth_of_bs23() {
    let v = json(&["compare", "--g1", "bs:2,3", "--g2", "free", "--max-len", "8"]);
    assert_eq!(v["kind"], "found");
    assert_eq!(v["lambda"], 7);
    assert_eq!(v["witness"], "abbABBB");
}

#[test]
fn limit_of_constant_residue() {
    let v = json(&["limit", "--m", "2", "--seq", "3+1*2^j", "--precision", "8"]);
    assert_eq!(v, serde_json::json!({ "m": 2, "H": 8, "residue": 3 }));
}

#[test]
fn reruns_are_byte_identical() {
    for args in [
        &["relations", "--group", "bs:1,2", "--max-len", "7"][..],
        &["wreath-limit", "--n", "2..4", "--max-len", "8"],
        &["cauchy", "--m", "3", "--seq", "2+1*3^j", "--j", "0..3", "--max-len", "8"],
        &["congruence", "--m", "2..4", "--n", "2..9", "--h", "1..2", "--format", "json"],
    ] {
        let a = run(args);
        let b = run(args);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn congruence_grid_has_no_mismatch() {
    let out = run(&["congruence", "--m", "-4..4", "--n", "-8..8", "--h", "1..2"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.lines().skip(1).all(|r| r.ends_with(",true")));
    // Both outcomes occur in the grid.
    assert!(text.contains(",true,true,true") && text.contains(",false,false,true"));
}

#[test]
fn wreath_and_free_limits() {
    let out = stdout(&run(&["wreath-limit", "--n", "2..5", "--max-len", "9"]));
    assert!(out.contains("2,found,5,abABB"));
    assert!(out.contains("5,found,8,abABBBBB"));
    let out = stdout(&run(&["free-limit", "--j", "1..4", "--max-len", "10"]));
    assert!(out.contains("3,3,4,9,found,9,"));
    assert!(out.contains("4,4,5,11,agree_up_to,10,"));
}

#[test]
fn noninjective_witness() {
    let v = json(&["noninjective", "--m", "3", "--j", "1..3"]);
    assert_eq!(v["base"]["trivial"], true);
    assert!(v["family"].as_array().unwrap().iter().all(|e| e["trivial"] == false));
    assert_eq!(v["limit"]["residue"], 4);
}

#[test]
fn reduce_reports_normal_form() {
    let v = json(&["reduce", "--group", "bs:1,2", "--word", "a b A"]);
    assert_eq!(v["normal_form"], "b^2");
    assert_eq!(v["trivial"], false);
    let v = json(&["reduce", "--group", "wreath", "--word", "bab"]);
    assert_eq!(v["element"]["shift"], 1);
}

#[test]
fn output_file_matches_stdout() {
    let path = std::env::temp_dir().join(format!("bsgroups-cli-{}.csv", std::process::id()));
    let args = ["relations", "--group", "bs:1,1", "--max-len", "4"];
    let direct = run(&args);
    let mut with_file = args.to_vec();
    with_file.extend(["--output", path.to_str().unwrap()]);
    assert_eq!(run(&with_file).status.code(), Some(0));
    assert_eq!(std::fs::read(&path).unwrap(), direct.stdout);
    std::fs::remove_file(path).unwrap();
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["nonsense"]).status.code(), Some(1));
    assert_eq!(run(&["compare", "--g1", "bs:0,2", "--g2", "free"]).status.code(), Some(1));
    assert_eq!(run(&["reduce", "--group", "bs:1,2", "--word", "axb"]).status.code(), Some(1));
    assert_eq!(run(&["girth", "--m", "3..1", "--n", "1"]).status.code(), Some(1));
    assert_eq!(run(&["limit", "--m", "2", "--seq", "1+1*3^j"]).status.code(), Some(1));
    assert_eq!(run(&["compare", "--g1", "free", "--g2", "wreath", "--max-len", "17"]).status.code(), Some(3));
    assert_eq!(run(&["limit", "--m", "2", "--seq", "list:[0,1,0,1,0,1]"]).status.code(), Some(3));
}
