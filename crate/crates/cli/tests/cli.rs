use std::path::{Path, PathBuf};
use std::process::Command as Process;

use clap::Parser;
use spapprox::gen::{fixture, fixtures};
use spapprox::measure::SearchLimits;
use spapprox::ops::{check, measure, MeasureKind};
use spapprox::table::Delimited;
use spapprox_cli::grammar::parse_constraint;
use spapprox_cli::report::{CertificateReport, Report, Status};
use spapprox_cli::{execute, exit, Cli, Outcome};
use tempfile::TempDir;

fn write_fixture(dir: &Path, name: &str) -> PathBuf {
    let path = dir.join(format!("{name}.csv"));
    let text = fixture(name)
        .unwrap()
        .to_delimited(&Delimited::default())
        .unwrap();
    std::fs::write(&path, text).unwrap();
    path
}

fn run(args: &[&str]) -> Outcome {
    let cli = Cli::try_parse_from(std::iter::once("spapprox").chain(args.iter().copied())).unwrap();
    execute(&cli)
}

#[test]
fn table2_measures() {
    let dir = TempDir::new().unwrap();
    let t2 = write_fixture(dir.path(), "table2");
    let t2 = t2.to_str().unwrap();
    let g3 = run(&["measure", t2, "key=X1,X2", "g3"]);
    assert_eq!(g3.exit, exit::YES);
    assert_eq!(g3.report.value.as_ref().unwrap().rational, "1/2");
    assert_eq!(g3.report.value.as_ref().unwrap().decimal, 0.5);
    let g5 = run(&["measure", t2, "key=X1,X2", "g5"]);
    assert_eq!(g5.report.value.as_ref().unwrap().rational, "1/4");
    assert!(g5.stdout.contains("g5 = 1/4 (0.25)"));
    assert!(matches!(
        g5.report.certificate,
        Some(CertificateReport::Addition { .. })
    ));
    assert!(!run(&["check", t2, "key=1,2"]).report.holds.unwrap());
}

#[test]
fn empty_table_holds() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("empty.csv");
    std::fs::write(&path, "A\n").unwrap();
    let out = run(&["check", path.to_str().unwrap(), "key=A"]);
    assert_eq!(out.exit, exit::YES);
    assert_eq!(out.report.holds, Some(true));
}

#[test]
fn bounds_turn_measures_into_decisions() {
    let dir = TempDir::new().unwrap();
    let t2 = write_fixture(dir.path(), "table2");
    let t2 = t2.to_str().unwrap();
    for (bound, yes) in [("0", false), ("1/4", false), ("1/2", true), ("3/4", true)] {
        let out = run(&["measure", t2, "key=X1,X2", "g3", "--bound", bound]);
        assert_eq!(out.report.within_bound, Some(yes), "{bound}");
        assert_eq!(out.exit, if yes { exit::YES } else { exit::NO });
    }
    let bad = run(&["measure", t2, "key=X1,X2", "g3", "--bound", "half"]);
    assert_eq!(bad.exit, exit::ERROR);
    assert_eq!(bad.report.status, Status::Error);
}

#[test]
fn undefined_g5_fails_every_bound() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("dup.csv");
    std::fs::write(&path, "A,B\n1,1\n1,1\n").unwrap();
    let p = path.to_str().unwrap();
    let out = run(&["measure", p, "key=A,B", "g5", "--bound", "3/4"]);
    assert_eq!(out.report.status, Status::Undefined);
    assert_eq!(out.report.within_bound, Some(false));
    assert_eq!(out.exit, exit::NO);
    let g3 = run(&["measure", p, "key=A,B", "g3"]);
    assert_eq!(g3.report.value.unwrap().rational, "1/2");
    let oracle = run(&["oracle", p, "key=A,B", "g5"]);
    assert_eq!(oracle.report.status, Status::Undefined);
}

#[test]
fn errors_and_exhaustion() {
    let dir = TempDir::new().unwrap();
    let cars = write_fixture(dir.path(), "cars");
    let cars = cars.to_str().unwrap();
    let missing = run(&["check", "/nonexistent/table.csv", "key=A"]);
    assert_eq!(
        (missing.exit, missing.report.status),
        (exit::ERROR, Status::Error)
    );
    assert_eq!(run(&["check", cars, "key=Nope"]).exit, exit::ERROR);
    let sys = run(&["measure", cars, "keys=1,2;2,3", "g5"]);
    assert_eq!(sys.exit, exit::ERROR);
    assert!(sys.report.message.unwrap().contains("key systems"));
    let capped = run(&["--node-cap", "1", "measure", cars, "fd=1,2->3", "g3"]);
    assert_eq!(
        (capped.exit, capped.report.status),
        (exit::EXHAUSTED, Status::Exhausted)
    );
}

#[test]
fn input_flags() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("t.tsv");
    std::fs::write(&path, "NA\t1\n2\tNA\n2\tNA\n2\t2\n").unwrap();
    let out = run(&[
        "measure",
        path.to_str().unwrap(),
        "key=1,2",
        "g3",
        "--no-header",
        "--delimiter",
        "tab",
        "--null-token",
        "NA",
    ]);
    assert_eq!(out.report.value.unwrap().rational, "1/2");
}

#[test]
fn maxg3_on_the_key_system_example() {
    let dir = TempDir::new().unwrap();
    let ks = write_fixture(dir.path(), "keysystem");
    let out = run(&["maxg3", ks.to_str().unwrap(), "A1,A2;A2,A3"]);
    assert_eq!(out.exit, exit::NO);
    assert_eq!(out.report.holds, Some(false));
    assert_eq!(out.report.value.unwrap().rational, "1/2");
    let per_key: Vec<&str> = out
        .report
        .per_key
        .iter()
        .map(|f| f.rational.as_str())
        .collect();
    assert_eq!(per_key, ["1/4", "1/4"]);
}

#[test]
fn cli_agrees_with_the_library() {
    let dir = TempDir::new().unwrap();
    let specs = ["key=1,2", "key=1", "fd=1->2", "fd=2->1", "keys=1;2"];
    for (name, table) in fixtures() {
        let path = write_fixture(dir.path(), name);
        let path = path.to_str().unwrap();
        for spec in specs {
            let c = parse_constraint(table.schema(), spec).unwrap();
            let lim = SearchLimits::default();
            let out = run(&["check", path, spec]);
            assert_eq!(
                out.report.holds,
                Some(check(&table, &c, lim).unwrap().holds),
                "{name} {spec}"
            );
            for kind in [MeasureKind::G3, MeasureKind::G5] {
                let out = run(&["measure", path, spec, &kind.to_string()]);
                match measure(&table, &c, kind, lim) {
                    Ok(r) => assert_eq!(
                        out.report.value.map(|v| v.rational),
                        r.value
                            .exact()
                            .map(|v| format!("{}/{}", v.numer(), v.denom())),
                        "{name} {spec} {kind}"
                    ),
                    Err(_) => assert_eq!(out.exit, exit::ERROR),
                }
            }
        }
    }
}

#[test]
fn binary_writes_a_report_that_round_trips() {
    let dir = TempDir::new().unwrap();
    let t2 = write_fixture(dir.path(), "table2");
    let report_path = dir.path().join("report.json");
    let status = Process::new(env!("CARGO_BIN_EXE_spapprox"))
        .args([
            "measure",
            t2.to_str().unwrap(),
            "key=X1,X2",
            "g5",
            "--bound",
            "0",
        ])
        .arg("--report")
        .arg(&report_path)
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(exit::NO));
    assert!(String::from_utf8_lossy(&status.stdout).contains("within bound 0/1: no"));
    let text = std::fs::read_to_string(&report_path).unwrap();
    let parsed = Report::from_json(&text).unwrap();
    assert_eq!(parsed.format, "spapprox-report/1");
    assert_eq!(parsed.status, Status::Exact);
    assert_eq!(parsed.value.as_ref().unwrap().rational, "1/4");
    assert_eq!(parsed.within_bound, Some(false));
    assert!(parsed.input_digest.as_ref().unwrap().starts_with("sha256:"));
    assert_eq!(Report::from_json(&parsed.to_json()).unwrap(), parsed);
}

#[test]
fn gen_is_reproducible() {
    let a = run(&[
        "gen",
        "--seed",
        "7",
        "--rows",
        "5",
        "--columns",
        "3",
        "--null-rate",
        "0.3",
    ]);
    let b = run(&[
        "gen",
        "--seed",
        "7",
        "--rows",
        "5",
        "--columns",
        "3",
        "--null-rate",
        "0.3",
    ]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout.lines().count(), 6);
    assert!(a.report.notes[0].contains("ChaCha8"));
    assert_eq!(run(&["gen", "--fixture", "nope"]).exit, exit::ERROR);
}
