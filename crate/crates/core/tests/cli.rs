use std::process::{Command, Output};

fn siegel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_siegel"))
        .args(args)
        .env_remove("SIEGEL_WORKERS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn sigma_command() {
    let o = siegel(&["sigma", "--n", "5", "--exact"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "115/192");
    assert_eq!(stdout(&siegel(&["sigma", "--n", "1", "--exact"])).trim(), "1");
    assert_eq!(code(&siegel(&["sigma", "--n", "0"])), 2);
}

#[test]
fn sigma_quadrature_json_carries_error() {
    let o = siegel(&["sigma", "--n", "6", "--quadrature", "--format", "json", "--tol", "1e-11"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["exact"], "11/20");
    let q = v["quadrature"]["value"].as_f64().unwrap();
    let err = v["quadrature"]["error"].as_f64().unwrap();
    assert!((q - 0.55).abs() <= 1e-10 && err <= 1e-11);
}

#[test]
fn bounds_json_and_csv() {
    let o = siegel(&["bounds", "--from", "9", "--to", "9", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v[0]["new_bound_integer"], "116");
    assert_eq!(v[0]["elkies"], "12155/128");

    let o = siegel(&["bounds", "--from", "10", "--to", "20", "--format", "csv"]);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "n,sigma_num,sigma_den,new_bound_float,new_bound_integer,elkies_num,elkies_den,em_float,best"
    );
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 11);
    for r in rows {
        let new_bound: f64 = r[3].parse().unwrap();
        let elkies = r[5].parse::<f64>().unwrap() / r[6].parse::<f64>().unwrap();
        assert!(new_bound > elkies);
        assert_eq!(r[8], "new");
    }
    assert_eq!(code(&siegel(&["bounds", "--from", "2", "--to", "1"])), 2);
}

#[test]
fn solve_command() {
    let o = siegel(&["solve", "--coeffs", "1,1,1,1,1", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["product"], "1");
    assert_eq!(v["bound"], "192/115");
    assert_eq!(v["certified"], true);

    let o = siegel(&["solve", "--coeffs", "2,3", "--strategy", "enumerate"]);
    assert!(stdout(&o).contains("(3,-2)"), "{}", stdout(&o));
    assert_eq!(code(&siegel(&["solve", "--coeffs", "0,0"])), 2);
    assert_eq!(code(&siegel(&["solve", "--coeffs", "1,x"])), 2);
}

#[test]
fn check_command() {
    let o = siegel(&["check", "--set", "1,2,4,8"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "sum-distinct: true; bound 16/3 < 8: ok");
    let o = siegel(&["check", "--set", "1,2,3"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("false; witness {1,2}={3}"));
    assert_eq!(code(&siegel(&["check", "--set", "3,1,2"])), 2);
}

#[test]
fn verify_command() {
    let o = siegel(&["verify", "--suite", "theorem1", "--trials", "100", "--seed", "7"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).starts_with("suite theorem1: pass"));
    let o = siegel(&["verify", "--suite", "lemma3", "--trials", "50", "--seed", "7", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(code(&siegel(&["verify", "--suite", "lemma4"])), 2);
}

#[test]
fn section_command() {
    let o = siegel(&["section", "--direction", "1,1,1"]);
    let value: f64 = stdout(&o).split_whitespace().next().unwrap().parse().unwrap();
    assert!((value - 3.0 * 3f64.sqrt()).abs() < 1e-8);
    let o = siegel(&["section", "--direction", "1,0"]);
    assert!(stdout(&o).starts_with("2 "));
    assert_eq!(code(&siegel(&["section", "--direction", "0,0,0"])), 2);
}

#[test]
fn identical_flags_give_identical_bytes() {
    let args = ["verify", "--suite", "lemma3", "--trials", "20", "--seed", "3", "--format", "json"];
    assert_eq!(siegel(&args).stdout, siegel(&args).stdout);
    let serial = Command::new(env!("CARGO_BIN_EXE_siegel"))
        .args(args)
        .env("SIEGEL_WORKERS", "1")
        .output()
        .unwrap();
    assert_eq!(serial.stdout, siegel(&args).stdout);
}

#[test]
fn bad_worker_count_is_invalid() {
    let o = Command::new(env!("CARGO_BIN_EXE_siegel"))
        .args(["sigma", "--n", "3"])
        .env("SIEGEL_WORKERS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn out_file_receives_output() {
    let dir = std::env::temp_dir().join(format!("siegel-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("sigma.txt");
    let o = siegel(&["sigma", "--n", "4", "--exact", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap().trim(), "2/3");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn json_rationals_round_trip() {
    let o = siegel(&["bounds", "--from", "30", "--to", "30", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let text = v[0]["new_bound"].as_str().unwrap();
    let parsed = siegel_core::rational::parse(text).unwrap();
    assert_eq!(parsed, siegel_core::sum_distinct::lower_bound_new(30).unwrap());
}
