use assert_cmd::Command;
use serde_json::Value;

const SPEC_2_4: &str = "F123,F124,F134,F234,F1234";

fn satdesign() -> Command {
    Command::cargo_bin("satdesign").unwrap()
}

fn json_of(args: &[&str]) -> Value {
    let out = satdesign().args(args).assert().success().get_output().stdout.clone();
    serde_json::from_slice(&out).unwrap()
}

#[test]
fn check_admissible_pair() {
    let v = json_of(&["check", "--k", "3", "--negligible", "F23,F123", "--delete", "000,100"]);
    assert_eq!(v["admissible"], true);
    assert_eq!(v["deleted"], serde_json::json!(["000", "100"]));
    assert_eq!(v["method"], "check");
    assert!(v["efficiency_ratio"].as_str().unwrap().contains('/'));
}

#[test]
fn check_inadmissible_pair_exits_one() {
    let out = satdesign()
        .args(["check", "--k", "3", "--negligible", "F23,F123", "--delete", "000,010"])
        .assert()
        .code(1)
        .get_output()
        .stdout
        .clone();
    let v: Value = serde_json::from_slice(&out).unwrap();
    assert_eq!(v["admissible"], false);
    assert_eq!(v["abs_det_C"], "0");
}

#[test]
fn optimal_two_to_the_four() {
    let v = json_of(&["optimal", "--k", "4", "--negligible", SPEC_2_4]);
    let optima = v["optima"].as_array().unwrap();
    assert_eq!(optima.len(), 1);
    assert_eq!(optima[0]["abs_det_C"], "48");
    assert_eq!(optima[0]["abs_det_D"], "196608");
    assert_eq!(optima[0]["efficiency_ratio"], "1/1");
    assert_eq!(v["certified"], true);

    let all = json_of(&["optimal", "--k", "4", "--negligible", SPEC_2_4, "--all"]);
    assert_eq!(all["optima"].as_array().unwrap().len(), 16);
    assert_eq!(all["optima"][0], optima[0]);
}

#[test]
fn exchange_is_seeded_and_uncertified() {
    let args = ["optimal", "--k", "4", "--negligible", SPEC_2_4, "--method", "exchange", "--seed", "7"];
    let v = json_of(&args);
    assert_eq!(v["certified"], false);
    assert_eq!(v["optima"][0]["method"], "exchange");
    let a = satdesign().args(args).output().unwrap().stdout;
    let b = satdesign().args(args).output().unwrap().stdout;
    assert_eq!(a, b);
}

#[test]
fn reports_are_byte_identical() {
    for args in [
        vec!["enumerate", "--k", "4", "--negligible", SPEC_2_4, "--format", "csv"],
        vec!["enumerate", "--k", "3", "--negligible", "F12,F13,F23,F123"],
        vec!["simulate", "--k", "3", "--negligible", "F123", "--delete", "111", "--reps", "3000", "--seed", "5"],
    ] {
        let a = satdesign().args(&args).output().unwrap();
        let b = satdesign().args(&args).output().unwrap();
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn enumeration_csv_columns() {
    let out = satdesign()
        .args(["enumerate", "--k", "3", "--negligible", "F23,F123", "--format", "csv"])
        .assert()
        .success()
        .get_output()
        .stdout
        .clone();
    let text = String::from_utf8(out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("deleted_set,abs_det_C,admissible,class_rank"));
    assert_eq!(lines.count(), 16);
}

#[test]
fn estimate_from_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("y.csv");
    // Y = D theta with theta = (F0, F1, F2, F12, F3, F13) = (10, 2, -1, 1/2, 0, 3).
    let theta = [10.0, 2.0, -1.0, 0.5, 0.0, 3.0];
    let mut csv = String::from("run,y\n");
    for run in ["010", "110", "001", "101", "011", "111"] {
        let x: Vec<f64> = run.chars().map(|c| if c == '1' { 1.0 } else { -1.0 }).collect();
        let y = theta[0] + theta[1] * x[0] + theta[2] * x[1] + theta[3] * x[0] * x[1]
            + theta[4] * x[2]
            + theta[5] * x[0] * x[2];
        csv.push_str(&format!("{run},{y}\n"));
    }
    std::fs::write(&path, csv).unwrap();
    let v = json_of(&[
        "estimate", "--k", "3", "--negligible", "F23,F123", "--delete", "000,100", "--data",
        path.to_str().unwrap(),
    ]);
    let values: Vec<&str> = v["theta1_hat"].as_array().unwrap().iter().map(|e| e["value"].as_str().unwrap()).collect();
    assert_eq!(values, ["10/1", "2/1", "-1/1", "1/2", "0/1", "3/1"]);
    assert_eq!(v["y2_blup"].as_array().unwrap().len(), 2);
    assert_eq!(v["dispersion"].as_array().unwrap().len(), 6);
}

#[test]
fn estimate_on_singular_partition_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("y.csv");
    std::fs::write(&path, "run,y\n100,1\n110,2\n001,3\n101,4\n011,5\n111,6\n").unwrap();
    satdesign()
        .args(["estimate", "--k", "3", "--negligible", "F23,F123", "--delete", "000,010", "--data"])
        .arg(&path)
        .assert()
        .code(1);
}

#[test]
fn input_errors_exit_two() {
    let bad = [
        vec!["check", "--k", "3", "--negligible", "F2x", "--delete", "000"],
        vec!["check", "--k", "3", "--negligible", "F23,F123", "--delete", "00,100"],
        vec!["check", "--k", "3", "--negligible", "F23,F123", "--delete", "000"],
        vec!["check", "--k", "3", "--delete", "000"],
        vec!["enumerate", "--k", "4", "--negligible", SPEC_2_4, "--cap", "10"],
        vec!["spectrum", "--order", "7"],
        vec!["estimate", "--k", "3", "--negligible", "F123", "--delete", "111", "--data", "/nonexistent/y.csv"],
    ];
    for args in bad {
        satdesign().args(&args).assert().code(2);
    }
}

#[test]
fn cap_can_be_forced() {
    let v = json_of(&["enumerate", "--k", "4", "--negligible", SPEC_2_4, "--cap", "10", "--force"]);
    assert_eq!(v["total"], 4368);
    assert_eq!(v["admissible"], 3008);
}

#[test]
fn matrix_and_spectrum() {
    let m = json_of(&["matrix", "--k", "2"]);
    assert_eq!(m["effects"], serde_json::json!(["F0", "F1", "F2", "F12"]));
    assert_eq!(m["entries"][0], serde_json::json!([1, -1, -1, 1]));
    let s = json_of(&["spectrum", "--order", "5"]);
    assert_eq!(s["raw"], serde_json::json!(["0", "16", "32", "48"]));
    assert_eq!(s["normalized"], serde_json::json!(["0", "1", "2", "3"]));
}
