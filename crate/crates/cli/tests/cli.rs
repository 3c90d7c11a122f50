use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use rspd::construct::{compute_l, generate_rspd, RspdOptions};
use rspd::io::{read_design, ReadOptions};

fn rspd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rspd"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn report(out: &Output) -> serde_json::Value {
    assert_eq!(code(out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn generate_writes_design_and_provenance() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d.csv");
    let out = rspd(&["generate", "--p", "2", "--n", "27", "--out", s(&path)]);
    assert_eq!(code(&out), 0);
    let text = fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 27);
    assert!(text.lines().all(|l| l.split(',').count() == 2));
    let prov: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("d.provenance.json")).unwrap())
            .unwrap();
    assert_eq!(prov["lattice"], "magic");
    assert_eq!(prov["w"], 1);
    let check = rspd(&["magic-check", "--in", s(&path)]);
    assert_eq!(
        code(&check),
        0,
        "{}",
        String::from_utf8_lossy(&check.stderr)
    );
}

#[test]
fn generate_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for path in [&a, &b] {
        let out = rspd(&[
            "generate",
            "--p",
            "3",
            "--n",
            "30",
            "--seed",
            "7",
            "--w",
            "20",
            "--out",
            s(path),
        ]);
        assert_eq!(code(&out), 0);
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_eq!(
        fs::read(dir.path().join("a.provenance.json")).unwrap(),
        fs::read(dir.path().join("b.provenance.json")).unwrap()
    );
}

#[test]
fn csv_round_trip_is_lossless() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d.csv");
    assert_eq!(
        code(&rspd(&[
            "generate",
            "--p",
            "3",
            "--n",
            "30",
            "--seed",
            "7",
            "--w",
            "5",
            "--out",
            s(&path)
        ])),
        0
    );
    let read = read_design(&path, &ReadOptions::default()).unwrap();
    let direct = generate_rspd(&RspdOptions::new(3, 30).seed(7).w(5)).unwrap();
    assert_eq!(read.as_slice(), direct.as_slice());
    assert_eq!(read.provenance, direct.provenance);
    let json = dir.path().join("d.json");
    assert_eq!(
        code(&rspd(&[
            "generate",
            "--p",
            "3",
            "--n",
            "30",
            "--seed",
            "7",
            "--w",
            "5",
            "--out",
            s(&json)
        ])),
        0
    );
    assert_eq!(read_design(&json, &ReadOptions::default()).unwrap(), direct);
}

#[test]
fn resource_cap_exits_3() {
    let out = rspd(&["generate", "--p", "12", "--n", "5000"]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("resource"));
}

#[test]
fn bad_flags_exit_2() {
    assert_eq!(code(&rspd(&["generate", "--n", "5"])), 2);
    assert_eq!(
        code(&rspd(&[
            "generate",
            "--p",
            "3",
            "--n",
            "5",
            "--lattice",
            "magic"
        ])),
        2
    );
    assert_eq!(code(&rspd(&["frobnicate"])), 2);
    let out = Command::new(env!("CARGO_BIN_EXE_rspd"))
        .args(["generate", "--p", "2", "--n", "5"])
        .env("RSPD_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
    let out = Command::new(env!("CARGO_BIN_EXE_rspd"))
        .args(["generate", "--p", "2", "--n", "5"])
        .env("RSPD_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
}

#[test]
fn evaluate_min_distance() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("two.csv");
    fs::write(&path, "0,0\n1,1\n").unwrap();
    let r = report(&rspd(&[
        "evaluate",
        "--in",
        s(&path),
        "--criteria",
        "mindist",
    ]));
    assert!((r["mindist"].as_f64().unwrap() - 2f64.sqrt()).abs() < 1e-15);
}

#[test]
fn evaluate_imspe_matches_library() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d.csv");
    assert_eq!(
        code(&rspd(&[
            "generate",
            "--p",
            "2",
            "--n",
            "20",
            "--out",
            s(&path)
        ])),
        0
    );
    let r = report(&rspd(&[
        "evaluate",
        "--in",
        s(&path),
        "--criteria",
        "imspe",
        "--theta",
        "24.8",
    ]));
    let design = read_design(&path, &ReadOptions::default()).unwrap();
    let spec = rspd::gp::GpSpec::new(24.8).unwrap();
    let lib = rspd::gp::imspe(&design, &spec, rspd::gp::Region::UNIT)
        .unwrap()
        .value;
    assert_eq!(r["imspe"].as_f64().unwrap(), lib);
    assert_eq!(r["meta"]["imspe"]["theta"].as_f64().unwrap(), 24.8);
}

#[test]
fn evaluate_is_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d.csv");
    assert_eq!(
        code(&rspd(&[
            "generate",
            "--p",
            "3",
            "--n",
            "24",
            "--w",
            "3",
            "--out",
            s(&path)
        ])),
        0
    );
    let args = [
        "evaluate",
        "--in",
        s(&path),
        "--criteria",
        "cl2c,fill,extreme",
        "--seed",
        "3",
    ];
    let a = rspd(&args);
    let b = rspd(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let r: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(r["meta"]["fill"]["seed"], 3);
    assert_eq!(r["meta"]["extreme"]["exhaustive"], false);
}

#[test]
fn evaluate_errors() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d.csv");
    fs::write(&path, "0.1,0.2\n0.3,0.4\n").unwrap();
    assert_eq!(
        code(&rspd(&[
            "evaluate",
            "--in",
            s(&path),
            "--criteria",
            "mindist,bogus"
        ])),
        2
    );
    fs::write(&path, "0.1,0.2\n0.3,0.4\n0.5,x\n").unwrap();
    let out = rspd(&["evaluate", "--in", s(&path)]);
    assert_eq!(code(&out), 4);
    assert!(String::from_utf8_lossy(&out.stderr).contains(":3:2:"));
    fs::write(&path, "0.1,0.2\n0.3,1.4\n").unwrap();
    assert_eq!(code(&rspd(&["evaluate", "--in", s(&path)])), 4);
    let ok = rspd(&[
        "evaluate",
        "--in",
        s(&path),
        "--allow-out-of-range",
        "--criteria",
        "mindist",
    ]);
    assert_eq!(code(&ok), 0);
}

fn rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn benchmark_small_grid() {
    let out = rspd(&[
        "benchmark",
        "--methods",
        "rspdm,hammersley",
        "--p-range",
        "2..2",
        "--n-rule",
        "20",
        "--criteria",
        "l2,mindist",
    ]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let rows = rows(&text);
    assert_eq!(
        rows[0].join(","),
        "method,p,n,criterion,value,runtime_s,seed"
    );
    assert_eq!(rows.len(), 5);
    assert!(rows[1..].iter().all(|r| r[2] == "20" && r[5] == "0"));
}

#[test]
fn benchmark_reruns_are_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for path in [&a, &b] {
        let out = rspd(&[
            "benchmark",
            "--methods",
            "rspdm,lhd,hammersley",
            "--p-range",
            "2",
            "--reps",
            "10",
            "--seed",
            "4",
            "--criteria",
            "mindist,cl2c,genz-continuous",
            "--out",
            s(path),
        ]);
        assert_eq!(code(&out), 0);
    }
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text, fs::read_to_string(&b).unwrap());
    assert_eq!(text.lines().count(), 1 + 3 * 10 * 3);
}

#[test]
fn benchmark_rspd_keeps_lattice_distance() {
    let out = rspd(&[
        "benchmark",
        "--methods",
        "rspd",
        "--p-range",
        "2..5",
        "--w",
        "5",
        "--criteria",
        "mindist",
        "--timing",
    ]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let rows = rows(&text);
    assert_eq!(rows.len(), 5);
    for r in &rows[1..] {
        let (p, n): (usize, usize) = (r[1].parse().unwrap(), r[2].parse().unwrap());
        let lat = rspd::lattice::a_star_lattice(p).unwrap();
        let l = compute_l(p, n, &lat).unwrap();
        assert!(r[4].parse::<f64>().unwrap() >= 1.0 / l - 1e-12, "{r:?}");
        assert!(r[5].parse::<f64>().unwrap() > 0.0);
    }
}

#[test]
fn magic_check_sweep() {
    let out = rspd(&["magic-check", "--n-range", "2..50"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("built 49 magic designs"));
    assert!(text.contains("98 passed, 0 failed"));
}

#[test]
fn magic_check_negative_control() {
    let dir = tempfile::tempdir().unwrap();
    // Random-rotation A_2* designs need not be quasi-Latin; any outcome
    // other than a crash is acceptable, but a violation must exit 5.
    let mut violations = 0;
    for seed in 0..5 {
        let path = dir.path().join(format!("r{seed}.csv"));
        let seed = seed.to_string();
        let gen = rspd(&[
            "generate",
            "--p",
            "2",
            "--n",
            "40",
            "--lattice",
            "astar",
            "--w",
            "1",
            "--seed",
            &seed,
            "--out",
            s(&path),
        ]);
        assert_eq!(code(&gen), 0);
        let out = rspd(&["magic-check", "--in", s(&path)]);
        match code(&out) {
            0 => {}
            5 => {
                violations += 1;
                assert!(String::from_utf8_lossy(&out.stderr).contains("n = 40"));
            }
            c => panic!("unexpected exit {c}"),
        }
    }
    println!("{violations} of 5 random-rotation designs violate the magic bounds");
}
