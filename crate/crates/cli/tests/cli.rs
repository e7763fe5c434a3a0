use std::path::PathBuf;
use std::process::{Command, Output};

use abphase_cli::{Cli, Command as Sub};
use clap::Parser;
use proptest::prelude::*;
use tempfile::tempdir;

const PI: f64 = std::f64::consts::PI;

fn samples(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../samples")
        .join(name)
}

fn abphase(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_abphase"))
        .args(args)
        .env_remove("ABPHASE_CONFIG")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn phase_row(o: &Output) -> [f64; 4] {
    let text = stdout(o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("theta_e,theta_m,theta_total,quad_error"));
    let v: Vec<f64> = lines
        .next()
        .unwrap()
        .split(',')
        .map(|s| s.parse().unwrap())
        .collect();
    [v[0], v[1], v[2], v[3]]
}

#[test]
fn phase_of_sample_loop_in_both_gauges() {
    let path = samples("path1.txt");
    let t = abphase(&["phase", path.to_str().unwrap()]);
    assert_eq!(t.status.code(), Some(0), "{}", stderr(&t));
    let [te, _, tt, _] = phase_row(&t);
    assert_eq!(te, 0.0);
    assert!((tt - PI).abs() < 1e-9);

    let c = abphase(&["phase", path.to_str().unwrap(), "--gauge", "coulomb"]);
    assert_eq!(c.status.code(), Some(0));
    let [ce, cm, ct, _] = phase_row(&c);
    assert!((ct - tt).abs() < 1e-9);
    assert!(ce > 0.1 && cm > 0.1, "{ce} {cm}");
}

#[test]
fn phase_in_numeric_gauge_matches() {
    let path = samples("path1.txt");
    let n = abphase(&[
        "phase",
        path.to_str().unwrap(),
        "--gauge",
        "numeric",
        "--grid",
        "129",
    ]);
    assert_eq!(n.status.code(), Some(0), "{}", stderr(&n));
    let [_, _, total, _] = phase_row(&n);
    assert!((total - PI).abs() < 1e-3);
}

#[test]
fn open_path_is_a_usage_error() {
    let o = abphase(&["phase", samples("open_path.txt").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("loop not closed"));
    let missing = abphase(&["phase", "/nonexistent/path.txt"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn core_exclusion_is_a_geometry_error() {
    let dir = tempdir().unwrap();
    let p = dir.path().join("tight.txt");
    std::fs::write(
        &p,
        "0.5 0.01 0.01\n0.5 -0.01 0.01\n0.5 -0.01 -0.01\n0.5 0.01 -0.01\nclosed\n",
    )
    .unwrap();
    let o = abphase(&["phase", p.to_str().unwrap(), "--gauge", "coulomb"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("exclusion"));
}

#[test]
fn figure_columns() {
    let o = abphase(&[
        "figure-f",
        "--x-values=0.5,-0.5",
        "--y-range=-100:100",
        "--samples",
        "201",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let rows: Vec<[f64; 3]> = stdout(&o)
        .lines()
        .skip(1)
        .map(|l| {
            let v: Vec<f64> = l.split(',').map(|s| s.parse().unwrap()).collect();
            [v[0], v[1], v[2]]
        })
        .collect();
    let at = |x: f64, y: f64| {
        rows.iter()
            .filter(|r| r[0] == x && r[1] == y && r[1].is_sign_negative() == y.is_sign_negative())
            .map(|r| r[2])
            .next()
            .unwrap()
    };
    assert!((at(0.5, 0.0) - at(0.5, -0.0) - PI).abs() < 1e-12);
    assert_eq!(
        rows.iter().filter(|r| r[0] == -0.5 && r[1] == 0.0).count(),
        1
    );
    assert!((at(-0.5, 1.0) - at(-0.5, -1.0) - 2.0 * at(-0.5, 1.0)).abs() < 1e-15);
    assert!((at(0.5, 100.0) - 0.005f64.atan()).abs() < 1e-15);
    assert!(at(0.5, 100.0) < 6e-3);

    let bad = abphase(&["figure-f", "--y-range=1:-1"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn config_errors_and_environment() {
    let dir = tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"eps_y": 0.2, "core_radius": 0.7}"#).unwrap();
    let o = abphase(&["verify", "--config", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("eps_y"));

    let env = Command::new(env!("CARGO_BIN_EXE_abphase"))
        .args(["figure-f", "--samples", "3"])
        .env("ABPHASE_CONFIG", &bad)
        .output()
        .unwrap();
    assert_eq!(env.status.code(), Some(2));

    let good = Command::new(env!("CARGO_BIN_EXE_abphase"))
        .args(["phase", samples("path1.txt").to_str().unwrap()])
        .env("ABPHASE_CONFIG", samples("lab.json"))
        .output()
        .unwrap();
    assert_eq!(good.status.code(), Some(0));
}

#[test]
fn outputs_are_byte_identical() {
    let dir = tempdir().unwrap();
    let run = |name: &str, args: &[&str]| {
        let out = dir.path().join(name);
        let mut full: Vec<&str> = args.to_vec();
        let o = out.to_str().unwrap().to_string();
        full.extend(["--out", &o, "--threads", "1"]);
        let r = abphase(&full);
        assert_eq!(r.status.code(), Some(0), "{}", stderr(&r));
        std::fs::read(&out).unwrap()
    };
    for args in [
        &[
            "fields",
            "--model",
            "rhombus",
            "--t",
            "0:1:5",
            "--x=-0.5:1.5:9",
            "--y=-0.05:0.05:7",
        ][..],
        &[
            "sources",
            "--model",
            "toroidal",
            "--t",
            "0:1:3",
            "--x",
            "0.5:1.5:9",
            "--y=-0.05:0.05:5",
        ],
        &["gauge", "--n", "65"],
    ] {
        assert_eq!(run("a.csv", args), run("b.csv", args));
    }
}

#[test]
fn gauge_writes_report() {
    let dir = tempdir().unwrap();
    let csv = dir.path().join("lambda.csv");
    let rep = dir.path().join("report.txt");
    let o = abphase(&[
        "gauge",
        "--n",
        "65",
        "--out",
        csv.to_str().unwrap(),
        "--report",
        rep.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let report = std::fs::read_to_string(rep).unwrap();
    assert!(report.starts_with("grid: 65 x 65\n"));
    assert!(report.contains("final residual: "));
    assert!(!report.contains("wall time"));
    let lines = std::fs::read_to_string(csv).unwrap();
    assert_eq!(lines.lines().next(), Some("x,y,lambda"));
    assert_eq!(lines.lines().count(), 65 * 65 + 1);
}

#[test]
fn verify_default_passes_and_negative_control_fails() {
    let ok = abphase(&["verify", "--format", "csv"]);
    assert_eq!(ok.status.code(), Some(0), "{}{}", stdout(&ok), stderr(&ok));
    assert!(stdout(&ok).starts_with("check,measured,expected,tolerance,pass,order\n"));

    let bad = abphase(&["verify", "--drop-solenoids"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stderr(&bad).contains("ampere_rect"));
    assert!(stdout(&bad).contains("FAIL ampere_rect"));
}

#[test]
fn help_lists_every_subcommand() {
    let o = abphase(&["--help"]);
    let text = stdout(&o);
    for sub in ["phase", "fields", "sources", "gauge", "figure-f", "verify"] {
        assert!(text.contains(sub), "{sub}");
    }
    assert_eq!(abphase(&["phase"]).status.code(), Some(2));
    assert_eq!(abphase(&["fields", "--t", "0:1"]).status.code(), Some(2));
}

proptest! {
    #[test]
    fn axis_flags_parse(lo in -10.0f64..10.0, w in 0.001f64..10.0, n in 2usize..500) {
        let hi = lo + w;
        let t = format!("--t={lo}:{hi}:{n}");
        let cli = Cli::try_parse_from(["abphase", "fields", &t, "--x=0:1:2", "--y=0:1:2"]).unwrap();
        match cli.command {
            Sub::Fields(g) => {
                let a = g.t.unwrap();
                prop_assert_eq!((a.lo, a.hi, a.n), (lo, hi, n));
            }
            _ => prop_assert!(false),
        }
    }

    #[test]
    fn reversed_axes_are_rejected(lo in -10.0f64..10.0, w in 0.001f64..10.0) {
        let t = format!("--t={}:{lo}:3", lo + w);
        prop_assert!(Cli::try_parse_from(["abphase", "fields", &t]).is_err());
    }
}
