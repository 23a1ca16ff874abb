use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_erdos728")).args(args).output().expect("binary runs")
}

fn stdout_of(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json_of(args: &[&str]) -> Value {
    serde_json::from_str(&stdout_of(args)).unwrap()
}

#[test]
fn verify_examples() {
    let v = json_of(&["verify", "--m", "4", "--k", "1"]);
    assert_eq!(v["binom_divides"], true);
    assert_eq!(v["oracle_mode"], "dual");
    let v = json_of(&["verify", "--m", "7", "--k", "2"]);
    assert_eq!(v["binom_divides"], false);
    assert_eq!(v["failing_primes"], serde_json::json!([3]));
    let three = v["profiles"].as_array().unwrap().iter().find(|p| p["p"] == 3).unwrap();
    assert_eq!(three["gap"], -1);
    let v = json_of(&["verify", "--m", "5", "--k", "0"]);
    assert_eq!(v["binom_divides"], true);
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, ["m", "k", "binom_divides", "profiles", "failing_primes", "oracle_mode"]);
}

#[test]
fn triple_examples() {
    let v = json_of(&["triple", "--a", "5", "--b", "4", "--n", "8", "--epsilon", "0.25"]);
    assert_eq!((v["divides"].clone(), v["k"].clone(), v["band_ok"].clone()), (true.into(), 1.into(), true.into()));
    let v = json_of(&["triple", "--a", "12", "--b", "0", "--n", "12", "--epsilon", "0.01"]);
    assert_eq!(v["band_ok"], false);
    let v = json_of(&["triple", "--a", "9", "--b", "7", "--n", "14", "--epsilon", "0.4"]);
    assert_eq!(v["divides"], false);
    assert_eq!(v["failing_prime"], 3);
    assert_eq!(run(&["triple", "--a", "1", "--b", "1", "--n", "8"]).status.code(), Some(2));
}

#[test]
fn search_certificate_verifies() {
    let v = json_of(&[
        "search",
        "--M",
        "10000",
        "--c",
        "1",
        "--mode",
        "direct",
        "--C1",
        "0.5",
        "--C2",
        "2",
        "--epsilon",
        "0.2",
    ]);
    assert_eq!(v["found"], true);
    let cert = &v["certificate"];
    assert_eq!(cert["divisibility_verified"], true);
    assert_eq!(cert["window_ok"], true);
    assert_eq!(cert["direct_good"], true);
    let m = cert["m"].as_u64().unwrap();
    assert!((10_000..=20_000).contains(&m));
    assert_eq!(cert["triple"]["a"].as_u64().unwrap(), m + cert["k"].as_u64().unwrap());
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["verify", "--m", "4"]).status.code(), Some(2));
    assert_eq!(run(&["nonsense"]).status.code(), Some(2));
    assert_eq!(run(&["search", "--M", "10000", "--c", "3"]).status.code(), Some(2));
    assert_eq!(run(&["density", "--N", "50", "--c", "0.4"]).status.code(), Some(2));
    assert_eq!(run(&["figure1", "--window", "4"]).status.code(), Some(2));
    assert_eq!(run(&["chain", "--p", "4", "--L", "3", "--s", "0.25"]).status.code(), Some(2));
    assert!(run(&["--help"]).status.success());
    // Prime 11 has J = 0 at k = 9, so with t = 0 every m spikes.
    let miss = ["search", "--M", "10000", "--c", "1", "--mode", "paper", "--t-policy", "fixed:0"];
    let out = run(&miss);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["found"], false);
    assert_eq!(v["census"]["interval_size"], 10_001);
    let out = run(&[&miss[..], &["--require-hit"]].concat());
    assert_eq!(out.status.code(), Some(3));
    assert!(!out.stdout.is_empty());
}

#[test]
fn census_header_and_bounds() {
    let csv = stdout_of(&["census", "--M", "10000", "--c", "1", "--t-policy", "fixed:3"]);
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "p,L_p,mu_p,J_p,t,bad_carry_count,bad_carry_bound,bad_spike_count,bad_spike_bound,within_bounds"
    );
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.iter().map(|r| r[0]).collect::<Vec<_>>(), ["2", "3", "5", "7", "11", "13", "17"]);
    for r in &rows {
        assert_eq!(r[9], "true");
        // k = ⌊ln 10⁴⌋ = 9; spike bound k((M+1)/p^{J+t} + 2).
        let p: f64 = r[0].parse().unwrap();
        let exp: i32 = r[3].parse::<i32>().unwrap() + 3;
        assert_eq!(r[8].parse::<f64>().unwrap(), 9.0 * (10_001.0 / p.powi(exp) + 2.0));
    }
    assert!(!csv.contains('\r'));
}

#[test]
fn chain_and_rate() {
    let csv = stdout_of(&["chain", "--p", "2", "--L", "4", "--s", "0.25"]);
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "p,L,s,exact_tail,tilted_bound,chernoff_bound,rho,C");
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(&row[..4], ["2", "4", "0.25", "0.3125"]);
    assert!(row[5].parse::<f64>().unwrap() >= 0.3125);
    let csv = stdout_of(&["chain", "--p", "3,5", "--L", "10,50", "--delta", "0.3,0.5"]);
    assert_eq!(csv.lines().count(), 9);
    assert!(csv.lines().skip(1).all(|l| l.split(',').nth(5) == Some("")));
    let csv = stdout_of(&["rate"]);
    assert_eq!(csv.lines().next().unwrap(), "delta,I_delta,lambda_star,identity_residual");
    assert_eq!(csv.lines().count(), 20);
    for line in csv.lines().skip(1) {
        let residual: f64 = line.split(',').nth(3).unwrap().parse().unwrap();
        assert!(residual.abs() < 1e-12);
    }
}

#[test]
fn density_sharpness_obstruct_gap() {
    let csv = stdout_of(&["density", "--N", "2000", "--c", "0.4,0.9", "--kind", "binomial"]);
    assert_eq!(csv.lines().next().unwrap(), "N,c,kind,k_rule,total,hits,fraction");
    let fractions: Vec<f64> = csv.lines().skip(1).map(|l| l.split(',').nth(6).unwrap().parse().unwrap()).collect();
    assert!(fractions.iter().all(|f| (0.0..=1.0).contains(f)));
    assert!(fractions[0] >= fractions[1]);
    let csv = stdout_of(&["sharpness", "--N", "2000", "--c", "0.9"]);
    assert_eq!(csv.lines().next().unwrap(), "N,c,blocked,total");
    let v = json_of(&["obstruct", "--m", "10", "--K", "4", "--delta", "3/4"]);
    let ps: Vec<u64> = v.as_array().unwrap().iter().map(|w| w["p"].as_u64().unwrap()).collect();
    assert!(ps.contains(&7));
    assert!(v.as_array().unwrap().iter().all(|w| w["kappa_p"] == 0 && w["nu_binom"].as_u64().unwrap() >= 1));
    let csv = stdout_of(&["gap", "--N", "500", "--c", "0.5", "--c2", "0,0.5"]);
    let hits: Vec<u64> = csv.lines().skip(1).map(|l| l.split(',').nth(6).unwrap().parse().unwrap()).collect();
    assert!(hits[0] >= hits[1]);
}

#[test]
fn figure1_files() {
    let dir = tempfile::tempdir().unwrap();
    let listed = stdout_of(&["figure1", "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(listed.lines().count(), 2);
    for p in [2, 13] {
        let text = fs::read_to_string(dir.path().join(format!("figure1_p{p}.csv"))).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "m,nu_binom,kappa,nu_binom_smooth,kappa_smooth");
        let rows: Vec<&str> = lines.collect();
        assert_eq!(rows.len(), 1001);
        assert!(rows[0].starts_with("1000,"));
        assert!(rows[1000].starts_with("2000,"));
    }
    stdout_of(&[
        "figure1",
        "--out-dir",
        dir.path().to_str().unwrap(),
        "--p",
        "3",
        "--window",
        "1",
        "--m-lo",
        "5",
        "--m-hi",
        "9",
    ]);
    let text = fs::read_to_string(dir.path().join("figure1_p3.csv")).unwrap();
    for line in text.lines().skip(1) {
        let cells: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        assert_eq!((cells[1], cells[2]), (cells[3], cells[4]));
    }
}

#[test]
fn config_file_supplies_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("verify.conf");
    fs::write(&conf, "# example\nm = 7\nk = 2\n").unwrap();
    let v = json_of(&["verify", "--config", conf.to_str().unwrap()]);
    assert_eq!((v["m"].as_u64(), v["binom_divides"].as_bool()), (Some(7), Some(false)));
    let v = json_of(&["verify", "--config", conf.to_str().unwrap(), "--m", "4", "--k=1"]);
    assert_eq!((v["m"].as_u64(), v["binom_divides"].as_bool()), (Some(4), Some(true)));
    assert_eq!(run(&["verify", "--config", "/nonexistent/x.conf"]).status.code(), Some(2));
}

#[test]
fn output_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rate.csv");
    let printed = stdout_of(&["rate", "--delta", "0.5"]);
    assert_eq!(stdout_of(&["rate", "--delta", "0.5", "--out", path.to_str().unwrap()]), "");
    assert_eq!(fs::read_to_string(&path).unwrap(), printed);
}

#[test]
fn thread_count_does_not_change_bytes() {
    let cases: [&[&str]; 5] = [
        &["search", "--M", "50000", "--c", "1", "--mode", "paper", "--t-policy", "fixed:3"],
        &["census", "--M", "20000", "--c", "1", "--t-policy", "fixed:3"],
        &["density", "--N", "5000", "--c", "0.4,0.9"],
        &["sharpness", "--N", "5000", "--c", "0.9,1.2"],
        &["gap", "--N", "1000", "--c", "0.5"],
    ];
    for case in cases {
        let one = stdout_of(&[case, &["--threads", "1"]].concat());
        let eight = stdout_of(&[case, &["--threads", "8"]].concat());
        assert_eq!(one, eight, "{case:?}");
    }
}
