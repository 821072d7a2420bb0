use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn numrad(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_numrad")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, content: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, content).unwrap();
    p
}

fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn compute_reports_all_quantities() {
    let dir = TempDir::new().unwrap();
    let shift = write(&dir, "shift.txt", "2 2\n0 1\n0 0\n");
    let o = numrad(&["compute", arg(&shift), "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let get = |k: &str| v[k]["value"].as_f64().unwrap();
    assert!((get("w") - 0.5).abs() < 1e-9);
    assert!((get("norm") - 1.0).abs() < 1e-12);
    for k in ["m", "c", "r"] {
        assert!(get(k).abs() < 1e-6, "{k}");
    }

    let d = write(&dir, "d.json", r#"{"rows":2,"cols":2,"data":[[[0,1],[0,0]],[[0,0],[1,0]]]}"#);
    let o = numrad(&["compute", arg(&d), "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["m"]["value"].as_f64().unwrap() - 0.5f64.sqrt()).abs() < 1e-9);
    assert!((v["w"]["value"].as_f64().unwrap() - 1.0).abs() < 1e-9);

    let text = stdout(&numrad(&["compute", arg(&d)]));
    assert!(text.contains("0.7071068"), "{text}");
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let rect = write(&dir, "rect.txt", "2 3\n1 2 3\n4 5 6\n");
    assert_eq!(numrad(&["compute", arg(&rect)]).status.code(), Some(3));
    assert_eq!(numrad(&["range", arg(&rect)]).status.code(), Some(3));
    let bad = write(&dir, "bad.txt", "2 2\n0 1\n0 q\n");
    let o = numrad(&["compute", arg(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3, column 3"));
    assert_eq!(numrad(&["compute", "/nonexistent/m.txt"]).status.code(), Some(2));
    assert_eq!(numrad(&["verify", "--trials", "0"]).status.code(), Some(2));
    assert_eq!(numrad(&["verify", "--dims", "0"]).status.code(), Some(2));
    assert_eq!(numrad(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(numrad(&["--help"]).status.code(), Some(0));
    let four = write(&dir, "four.txt", "4 4\n1 0 0 0\n0 1 0 0\n0 0 1 0\n0 0 0 1\n");
    assert_eq!(numrad(&["bounds", arg(&four), "--blocks", "3", "3"]).status.code(), Some(3));
    assert_eq!(numrad(&["bounds", arg(&four), "--blocks", "2", "1"]).status.code(), Some(3));
}

#[test]
fn bounds_csv_round_trips() {
    let dir = TempDir::new().unwrap();
    let shift = write(&dir, "shift.txt", "2 2\n0 1\n0 0\n");
    let o = numrad(&["bounds", arg(&shift), "--csv"]);
    assert_eq!(o.status.code(), Some(0));
    let mut r = csv::Reader::from_reader(o.stdout.as_slice());
    assert_eq!(
        r.headers().unwrap().iter().collect::<Vec<_>>(),
        ["bound_id", "direction", "value", "reference", "applicable", "slack"]
    );
    let rows: Vec<csv::StringRecord> = r.records().map(Result::unwrap).collect();
    assert!(rows.iter().all(|row| row.len() == 6));
    let sq = rows.iter().find(|row| &row[0] == "crawford_square").unwrap();
    assert_eq!(&sq[1], "lower");
    assert!((sq[2].parse::<f64>().unwrap() - 0.5).abs() < 1e-9);
    assert!(sq[5].parse::<f64>().unwrap().abs() < 1e-9);

    let row = write(&dir, "row.txt", "4 4\n0 0 1 2\n3 1 0 0\n0 0 0 0\n0 0 0 0\n");
    let o = numrad(&["bounds", arg(&row), "--blocks", "2", "2", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Vec<serde_json::Value> = serde_json::from_str(&stdout(&o)).unwrap();
    let rp = v.iter().find(|e| e["bound_id"] == "row_product").unwrap();
    assert_eq!(rp["direction"], "upper");
    assert!((rp["value"].as_f64().unwrap() - (8.0 + 10f64.sqrt()).sqrt()).abs() < 1e-6);
}

#[test]
fn range_csv_and_svg() {
    let dir = TempDir::new().unwrap();
    let shift = write(&dir, "shift.txt", "2 2\n0 1\n0 0\n");
    let svg = dir.path().join("shift.svg");
    let o = numrad(&["range", arg(&shift), "--samples", "360", "--svg", arg(&svg)]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("# degenerate: no"));
    assert_eq!(lines.next(), Some("theta,re,im,support"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 360);
    let max = rows.iter().map(|r| r[1].hypot(r[2])).fold(0.0, f64::max);
    assert!((max - 0.5).abs() < 1e-9);
    let doc = fs::read_to_string(&svg).unwrap();
    assert!(doc.starts_with("<svg") && doc.trim_end().ends_with("</svg>"));
    assert!(doc.contains(r#"width="600""#) && doc.contains("<polygon") && doc.contains("shift.txt"));

    let id = write(&dir, "id.txt", "2 2\n1 0\n0 1\n");
    let first = stdout(&numrad(&["range", arg(&id), "--samples", "8"])).lines().next().unwrap().to_string();
    assert!(first.starts_with("# degenerate: point"), "{first}");

    let d = write(&dir, "d.txt", "2 2\ni 0\n0 1\n");
    let first = stdout(&numrad(&["range", arg(&d), "--samples", "8"])).lines().next().unwrap().to_string();
    let nums: Vec<f64> = first.trim_start_matches("# degenerate: segment ").split(' ').map(|x| x.parse().unwrap()).collect();
    assert!(first.starts_with("# degenerate: segment"));
    let (a, b) = ((nums[0], nums[1]), (nums[2], nums[3]));
    let near = |p: (f64, f64), q: (f64, f64)| (p.0 - q.0).hypot(p.1 - q.1) < 1e-9;
    assert!(near(a, (0.0, 1.0)) && near(b, (1.0, 0.0)) || near(a, (1.0, 0.0)) && near(b, (0.0, 1.0)));
    assert_eq!(numrad(&["range", arg(&d), "--samples", "2"]).status.code(), Some(2));
}

#[test]
fn examples_table() {
    let o = numrad(&["examples"]);
    assert_eq!(o.status.code(), Some(0));
    let t = stdout(&o);
    assert!(t.contains("3.3409995") && t.contains("3.7905694"), "{t}");
    assert!(t.contains("1.4142136") && t.contains("1.7320508"));
}

#[test]
fn small_verify_run() {
    let o = numrad(&["verify", "--trials", "3", "--dims", "2,3", "--seed", "1", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["trials"], 3);
    assert_eq!(v["violations"].as_array().unwrap().len(), 0);
    let again = numrad(&["verify", "--trials", "3", "--dims", "2,3", "--seed", "1", "--json", "--threads", "2"]);
    assert_eq!(o.stdout, again.stdout);
}
