use std::path::Path;
use std::process::{Command, Output};

use taylor_l2::cli::{
    ApproxReport, BlocksReport, DetReport, DuelOutput, InverseReport, RemezReport, SweepReport,
};
use taylor_l2::scalar::{Mode, Scalar};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_taylor-l2"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn roundtrip<T>(body: &str) -> T
where
    T: serde::de::DeserializeOwned + serde::Serialize + PartialEq + std::fmt::Debug,
{
    let parsed: T = serde_json::from_str(body).unwrap();
    let again: T = serde_json::from_str(&serde_json::to_string(&parsed).unwrap()).unwrap();
    assert_eq!(parsed, again);
    parsed
}

#[test]
fn approx_best_constant_for_exp() {
    let body = stdout(&[
        "approx",
        "--function",
        "exp",
        "--x0",
        "0",
        "--epsilon",
        "1",
        "--degree",
        "0",
    ]);
    let r: ApproxReport = roundtrip(&body);
    let expected = (std::f64::consts::E - 1.0 / std::f64::consts::E) / 2.0;
    assert!((r.coefficients[0].to_f64() - expected).abs() < 1e-15);
    assert_eq!(r.taylor, vec![Scalar::Float(1.0)]);
}

#[test]
fn approx_rational_is_exact() {
    let body = stdout(&[
        "approx",
        "--function",
        "poly:2,5",
        "--epsilon",
        "0.3",
        "--degree",
        "1",
        "--mode",
        "rational",
    ]);
    assert!(body.contains("\"2\"") && body.contains("\"5\""));
    let r: ApproxReport = roundtrip(&body);
    assert_eq!(
        r.coefficients,
        vec![
            Scalar::from_int(Mode::Rational, 2),
            Scalar::from_int(Mode::Rational, 5)
        ]
    );
    assert!(r.coef_errors.iter().all(Scalar::is_zero));
}

#[test]
fn approx_optimality_check_is_seeded() {
    let args = [
        "approx",
        "--function",
        "sin",
        "--epsilon",
        "0.5",
        "--degree",
        "3",
        "--perturbations",
        "20",
        "--seed",
        "7",
    ];
    let a = stdout(&args);
    assert_eq!(a, stdout(&args));
    let r: ApproxReport = roundtrip(&a);
    assert_eq!(r.optimality_check, Some(true));
}

#[test]
fn degree_cap_is_a_validation_error() {
    let out = run(&["approx", "--function", "exp", "--degree", "13"]);
    assert!(!out.status.success());
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap"));
}

#[test]
fn sweep_csv_layout() {
    let body = stdout(&["sweep", "--function", "exp", "--degree", "2"]);
    let lines: Vec<&str> = body.lines().collect();
    assert_eq!(
        lines[0],
        "epsilon,i,a_i,taylor_i,abs_err,bound,method,status"
    );
    let data = lines
        .iter()
        .filter(|l| !l.starts_with("slope_") && !l.starts_with("epsilon"))
        .count();
    let slopes: Vec<&&str> = lines.iter().filter(|l| l.starts_with("slope_")).collect();
    assert_eq!((data, slopes.len()), (30, 3));
    let slope0: f64 = slopes[0].split(',').nth(4).unwrap().parse().unwrap();
    assert!(slope0 >= 2.8);
    assert_eq!(
        body,
        stdout(&["sweep", "--function", "exp", "--degree", "2"])
    );
}

#[test]
fn sweep_rational_errors_are_zero() {
    let body = stdout(&[
        "sweep",
        "--function",
        "poly:1,2",
        "--degree",
        "1",
        "--mode",
        "rational",
    ]);
    let mut rows = csv::Reader::from_reader(body.as_bytes());
    let mut n = 0;
    for row in rows.records() {
        let row = row.unwrap();
        if !row[0].starts_with("slope_") {
            assert_eq!(&row[4], "0");
            n += 1;
        }
    }
    assert_eq!(n, 20);
}

#[test]
fn sweep_json_roundtrips() {
    let body = stdout(&[
        "sweep",
        "--function",
        "sin",
        "--degree",
        "3",
        "--format",
        "json",
    ]);
    let r: SweepReport = roundtrip(&body);
    assert_eq!(r.records.len(), 10);
}

#[test]
fn matrix_subcommands() {
    let det: DetReport = roundtrip(&stdout(&[
        "matrix",
        "det",
        "--degree",
        "4",
        "--epsilon",
        "1",
    ]));
    assert!(det.agree && det.direct == det.factorization && det.factorization == det.blocks);
    let inv: InverseReport = roundtrip(&stdout(&["matrix", "inverse", "--degree", "1"]));
    assert!(inv.alpha[0][1].is_zero() && inv.alpha[1][0].is_zero());
    let blocks: BlocksReport = roundtrip(&stdout(&["matrix", "blocks", "--degree", "4"]));
    assert_eq!((blocks.u, blocks.v), (2, 3));
}

#[test]
fn remez_outputs() {
    let r: RemezReport = roundtrip(&stdout(&["remez", "--function", "exp", "--degree", "0"]));
    let mid = (std::f64::consts::E + 1.0 / std::f64::consts::E) / 2.0;
    assert!((r.coefficients[0] - mid).abs() < 1e-14);
    let r: RemezReport = roundtrip(&stdout(&[
        "remez",
        "--function",
        "poly:1,1",
        "--degree",
        "1",
    ]));
    assert_eq!(r.max_error, 0.0);
    let r: RemezReport = roundtrip(&stdout(&[
        "remez",
        "--function",
        "exp",
        "--degree",
        "3",
        "--epsilon",
        "0.1",
    ]));
    assert!(r.equioscillation && r.converged);
}

#[test]
fn duel_csv_and_threshold() {
    let body = stdout(&[
        "duel",
        "--function",
        "exp",
        "--degree",
        "0",
        "--challenger",
        "1.1752011936438014",
    ]);
    let lines: Vec<&str> = body.lines().collect();
    assert_eq!(lines[0], "epsilon,err_taylor,err_challenger,winner");
    assert!(lines[1].starts_with("1.0,") && lines[1].ends_with(",challenger"));
    assert!(lines.last().unwrap().starts_with("threshold="));

    let body = stdout(&[
        "duel",
        "--function",
        "exp",
        "--degree",
        "0",
        "--challenger",
        "1.05",
    ]);
    let t: f64 = body
        .lines()
        .last()
        .unwrap()
        .trim_start_matches("threshold=")
        .parse()
        .unwrap();
    assert!((1e-3..=1.0).contains(&t));

    let body = stdout(&[
        "duel",
        "--function",
        "poly:1,2",
        "--degree",
        "1",
        "--challenger",
        "1,2.5",
        "--format",
        "json",
    ]);
    let d: DuelOutput = roundtrip(&body);
    assert!(d.rows.iter().all(|r| r.taylor_wins()));

    let out = run(&[
        "duel",
        "--function",
        "exp",
        "--degree",
        "1",
        "--challenger",
        "1,1",
    ]);
    assert!(!out.status.success());
}

#[test]
fn output_file_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("det.json");
    let p = path.to_str().unwrap();
    let out = run(&["matrix", "det", "--degree", "3", "--output", p]);
    assert!(out.status.success() && out.stdout.is_empty());
    let det: DetReport = roundtrip(&std::fs::read_to_string(Path::new(p)).unwrap());
    assert!(det.agree);
}
