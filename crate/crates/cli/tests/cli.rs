use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pda-forge"))
        .args(args)
        .env_remove("PDA_FORGE_CELL_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_string_lossy().into_owned()
}

#[test]
fn construct_then_verify() {
    let dir = TempDir::new().unwrap();
    let out = path(&dir, "out.json");
    let o = run(&[
        "construct",
        "--scheme",
        "1",
        "--design",
        "fano_2_7_3_1",
        "--i",
        "1",
        "-o",
        &out,
    ]);
    assert!(o.status.success());
    let o = run(&["verify", &out]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "(21,7,6,3) g=7");
}

#[test]
fn bounds_from_numbers() {
    let o = run(&["bounds", "6", "8", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().next(), Some("cheng=5 wei=3"));
}

#[test]
fn corrupted_array_exits_one_with_coordinates() {
    let dir = TempDir::new().unwrap();
    let bad = path(&dir, "bad.txt");
    fs::write(&bad, "* * * 2 2 3\n* 1 2 * * 4\n1 * 3 * 4 *\n2 3 * 4 * *\n").unwrap();
    let o = run(&["verify", &bad]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(
        text.contains("C3(b): 2 at (0, 3) and (3, 0) but (3, 3) is not a star"),
        "{text}"
    );
}

#[test]
fn usage_and_io_errors_exit_two() {
    assert_eq!(
        run(&["verify", "/no/such/file.json"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["bounds", "6", "8"]).status.code(), Some(2));
    assert_eq!(
        run(&["construct", "--scheme", "3", "--design", "x", "--i", "1"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn cell_budget_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_pda-forge"))
        .args([
            "construct",
            "--scheme",
            "1",
            "--design",
            "fano_2_7_3_1",
            "--i",
            "1",
        ])
        .env("PDA_FORGE_CELL_BUDGET", "100")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("budget of 100"));
}

#[test]
fn transpose_and_csv_round_trip() {
    let dir = TempDir::new().unwrap();
    let pda = path(&dir, "p.json");
    let csv = path(&dir, "p.csv");
    let tr = path(&dir, "t.json");
    run(&[
        "construct",
        "--scheme",
        "2",
        "--design",
        "fano_2_7_3_1",
        "--i",
        "1",
        "-o",
        &pda,
    ]);
    assert!(run(&["transpose", &pda, "-o", &tr]).status.success());
    assert_eq!(stdout(&run(&["verify", &tr])).trim(), "(7,21,15,7) g=6");
    assert!(run(&[
        "construct",
        "--scheme",
        "2",
        "--design",
        "fano_2_7_3_1",
        "--i",
        "1",
        "--format",
        "csv",
        "-o",
        &csv
    ])
    .status
    .success());
    assert_eq!(stdout(&run(&["verify", &csv])).trim(), "(21,7,5,7) g=6");
}

#[test]
fn classify_reports_json() {
    let dir = TempDir::new().unwrap();
    let pda = path(&dir, "p.json");
    run(&[
        "construct",
        "--scheme",
        "1",
        "--design",
        "des_3_8_4_1",
        "--i",
        "2",
        "-o",
        &pda,
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&run(&["classify", &pda]))).unwrap();
    assert_eq!(v["classification"], "rpda");
    assert_eq!(v["s"], 24);
}

#[test]
fn hpda_pipeline_and_hierarchical_sim() {
    let dir = TempDir::new().unwrap();
    let h = path(&dir, "h.json");
    let o = run(&[
        "hpda",
        "build",
        "--scheme",
        "2",
        "--design",
        "des_3_8_4_1",
        "--i",
        "2",
        "-o",
        &h,
    ]);
    assert!(o.status.success());
    assert_eq!(
        stdout(&run(&["hpda", "verify", &h])).trim(),
        "(K1,K2,F,Z1,Z2)=(14,4,28,22,3)"
    );
    let loads: serde_json::Value =
        serde_json::from_str(&stdout(&run(&["hpda", "loads", &h]))).unwrap();
    assert_eq!(loads["R1"], "2/7");
    assert_eq!(loads["R2"], "23/7");
    assert_eq!(loads["T_serial"], "25/7");
    let o = run(&["sim", "hier", "--hpda", &h, "--seed", "3"]);
    assert!(o.status.success());
    let r: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r["measured_r1"], "2/7");
    assert_eq!(r["failures"].as_array().unwrap().len(), 0);
}

#[test]
fn flat_sim_is_deterministic_and_traced() {
    let dir = TempDir::new().unwrap();
    let pda = path(&dir, "p.json");
    run(&[
        "construct",
        "--scheme",
        "1",
        "--design",
        "fano_2_7_3_1",
        "--i",
        "1",
        "-o",
        &pda,
    ]);
    let args = [
        "sim",
        "flat",
        "--pda",
        pda.as_str(),
        "--seed",
        "42",
        "--trace",
    ];
    let (a, b) = (run(&args), run(&args));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let r: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(r["measured_r"], "3/7");
    assert_eq!(r["trace"].as_array().unwrap().len(), 3);

    let demand = (0..21).map(|x| x.to_string()).collect::<Vec<_>>().join(",");
    let o = run(&["sim", "flat", "--pda", &pda, "--demand", &demand]);
    assert!(o.status.success());
}

#[test]
fn tables_as_csv_and_json() {
    let two = stdout(&run(&["table", "two"]));
    assert_eq!(two.lines().count(), 8);
    assert!(two.contains("3276,378,0.1153"));
    let rows: serde_json::Value =
        serde_json::from_str(&stdout(&run(&["table", "two", "--json"]))).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 7);
    let three = stdout(&run(&["table", "three"]));
    assert!(three.contains("0.2857,3.2857,3.5714"));
    assert!(three.contains("skipped"));
}

#[test]
fn design_subcommands() {
    let list = stdout(&run(&["design", "list"]));
    assert!(list.contains("fano_2_7_3_1"));
    let dir = TempDir::new().unwrap();
    let file = dir.path().join("fano.json");
    let shown = run(&["design", "show", "fano_2_7_3_1"]);
    fs::write(&file, &shown.stdout).unwrap();
    let o = run(&["design", "verify", file.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["valid"], true);

    let mut doc: serde_json::Value = serde_json::from_slice(&shown.stdout).unwrap();
    doc["blocks"][0] = serde_json::json!([1, 2, 3]);
    let broken = Path::new(dir.path()).join("broken.json");
    fs::write(&broken, doc.to_string()).unwrap();
    assert_eq!(
        run(&["design", "verify", broken.to_str().unwrap()])
            .status
            .code(),
        Some(1)
    );
}
