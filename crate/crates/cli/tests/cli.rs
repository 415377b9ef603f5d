use std::process::{Command, Output};

fn hei(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hei")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(hei(&["classify", "--m", "5"]).status.code(), Some(2));
    assert_eq!(hei(&["homology", "nonsense"]).status.code(), Some(2));
    assert_eq!(hei(&["verify-all", "--height", "0"]).status.code(), Some(2));
}

#[test]
fn printed_expressions() {
    let cases: [(&[&str], &str); 5] = [
        (&["ktheory", "--m", "4", "--n", "0"], "Z^5 = Z + R~(Z/4) + R~(Z/2)"),
        (&["whitehead", "--m", "4", "--n", "1"], "NK_1(Z[Z/4])^2"),
        (&["whitehead", "--m", "6", "--n", "-1"], "Z"),
        (&["homology", "hei", "--n", "3"], "Z"),
        (&["homology", "hei", "--n", "1"], "Z^2"),
    ];
    for (args, want) in cases {
        let o = hei(args);
        assert!(o.status.success(), "{args:?}");
        assert_eq!(stdout(&o).trim(), want, "{args:?}");
    }
    let l = stdout(&hei(&["ltheory", "--n", "0", "--invert-two"]));
    assert_eq!(l.trim().split(" + ").count(), 6);
}

#[test]
fn out_of_range_degree_is_explained() {
    let o = hei(&["whitehead", "--m", "4", "--n", "2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("outside the range"));
}

#[test]
fn classify_lists() {
    let o = hei(&["classify", "--m", "2", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let names: Vec<&str> = v["g_classes"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["<t>", "<u t>", "<v t>"]);
    let o = hei(&["classify", "--m", "4", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["q_classes"].as_array().unwrap().len(), 5);
    assert_eq!(v["g_classes"].as_array().unwrap().len(), 3);
}

#[test]
fn g_check_passes() {
    let o = hei(&["homology", "g-check"]);
    assert!(o.status.success());
    assert!(!stdout(&o).contains("FAIL"));
}

#[test]
fn constants_substitution() {
    let dir = std::env::temp_dir().join(format!("hei-constants-{}", std::process::id()));
    std::fs::write(&dir, "# known value\nNK_1(Z[Z/4]) = 0\n").unwrap();
    let o = hei(&["whitehead", "--m", "4", "--n", "1", "--constants", dir.to_str().unwrap()]);
    assert_eq!(stdout(&o).trim(), "0");
    std::fs::remove_file(&dir).unwrap();
}

#[test]
fn verify_all_json_is_deterministic_and_sorted() {
    let args = ["verify-all", "--height", "6", "--seed", "3", "--json", "--no-timings"];
    let a = hei(&args);
    let b = hei(&args);
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    let ids: Vec<&str> = v["records"].as_array().unwrap().iter().map(|r| r["check_id"].as_str().unwrap()).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    sorted.dedup();
    assert_eq!(ids, sorted);
    let any_fail = v["records"].as_array().unwrap().iter().any(|r| r["status"] == "fail");
    assert_eq!(v["status"] == "fail", any_fail);
    assert_eq!(a.status.code(), Some(if any_fail { 1 } else { 0 }));
}

#[test]
fn tampered_constant_names_failing_check() {
    let base = hei(&["verify-all", "--height", "3", "--json", "--no-timings"]);
    let tampered = hei(&["verify-all", "--height", "3", "--json", "--no-timings", "--override", "hei.homology=Z; Z^3"]);
    assert_eq!(tampered.status.code(), Some(1));
    let status = |o: &Output, id: &str| {
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        v["records"].as_array().unwrap().iter().find(|r| r["check_id"] == id).unwrap()["status"].clone()
    };
    assert_eq!(status(&base, "homology.hei"), "pass");
    assert_eq!(status(&tampered, "homology.hei"), "fail");
    for (key, id) in [("wh.m4", "assembly.whitehead-table"), ("e2.q1", "homology.e2-grid"), ("q.m4.maximal", "q.maximal-finite.m4")] {
        let o = hei(&["verify-all", "--height", "2", "--json", "--no-timings", "--override", &format!("{key}=0")]);
        assert_eq!(status(&o, id), "fail", "{key}");
    }
    assert_eq!(hei(&["verify-all", "--override", "no.such=1"]).status.code(), Some(1));
}

#[test]
fn out_file_written() {
    let path = std::env::temp_dir().join(format!("hei-report-{}.json", std::process::id()));
    let _ = hei(&["verify-all", "--height", "2", "--out", path.to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(v["records"].as_array().unwrap().len() >= 20);
    std::fs::remove_file(&path).unwrap();
}
