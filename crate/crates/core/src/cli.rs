//! Command-line front end. Every command renders one JSON object or one CSV
//! table; `run` returns the rendered text together with a success flag so
//! that partial results are still written when some operation failed.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use num_traits::Pow;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::l2::{perturbation_check, solve, Method};
use crate::lab::{self, log_grid, Norm, SlopeFit, SweepRecord, TaylorReference};
use crate::linalg::Matrix;
use crate::moment::{block_decompose, build_moment, det_via_factorization, inverse_structure};
use crate::poly::{FunctionSpec, Polynomial};
use crate::remez::{solve_remez, RemezResult};
use crate::scalar::{format_f64, Mode, Scalar};

#[derive(Debug, Parser)]
#[command(
    name = "taylor-l2",
    version,
    about = "Local L2 and minimax polynomial approximation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write the result here (atomically) instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Output format; each command has a default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Float,
    Rational,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Float => Mode::Float,
            ModeArg::Rational => Mode::Rational,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Best L2 approximation on one interval.
    Approx(ApproxArgs),
    /// Coefficient errors over a log-spaced eps grid, with slope fits.
    Sweep(SweepArgs),
    /// Moment matrix structure checks.
    Matrix {
        #[command(subcommand)]
        action: MatrixAction,
    },
    /// Best uniform approximation by Remez exchange.
    Remez(RemezArgs),
    /// Taylor truncation against a fixed challenger polynomial.
    Duel(DuelArgs),
}

#[derive(Debug, Args)]
pub struct FunctionArgs {
    /// Registry name (exp, sin, cos, log1p, atan, runge) or poly:c0,c1,...
    #[arg(long)]
    pub function: String,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub x0: String,
    #[arg(long)]
    pub degree: usize,
    #[arg(long, value_enum, default_value = "float")]
    pub mode: ModeArg,
}

#[derive(Debug, Args)]
pub struct ApproxArgs {
    #[command(flatten)]
    pub func: FunctionArgs,
    #[arg(long, default_value = "1")]
    pub epsilon: String,
    #[arg(long, default_value = "normal")]
    pub method: Method,
    /// Number of random perturbations used to check optimality (0 skips).
    #[arg(long, default_value_t = 0)]
    pub perturbations: usize,
    /// Size of the uniform coefficient noise for the optimality check.
    #[arg(long, default_value_t = 1e-3)]
    pub noise: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    #[arg(long)]
    pub eps_max: Option<f64>,
    #[arg(long)]
    pub eps_min: Option<f64>,
    #[arg(long)]
    pub steps: Option<usize>,
}

impl GridArgs {
    fn resolve(&self, defaults: (f64, f64, usize)) -> (f64, f64, usize) {
        (
            self.eps_max.unwrap_or(defaults.0),
            self.eps_min.unwrap_or(defaults.1),
            self.steps.unwrap_or(defaults.2),
        )
    }
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub func: FunctionArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, default_value = "normal")]
    pub method: Method,
}

#[derive(Debug, Subcommand)]
pub enum MatrixAction {
    /// Determinant of `A_{k+1}` by three routes.
    Det(MatrixArgs),
    /// Even/odd block split of the normalised matrix.
    Blocks(MatrixArgs),
    /// Scaled inverse entries `alpha_rs` across several eps.
    Inverse(InverseArgs),
}

#[derive(Debug, Args)]
pub struct MatrixArgs {
    #[arg(long)]
    pub degree: usize,
    #[arg(long, default_value = "1")]
    pub epsilon: String,
    #[arg(long, value_enum, default_value = "rational")]
    pub mode: ModeArg,
}

#[derive(Debug, Args)]
pub struct InverseArgs {
    #[arg(long)]
    pub degree: usize,
    /// Comma-separated eps values.
    #[arg(long, default_value = "1/2,1,3")]
    pub eps_list: String,
    #[arg(long, value_enum, default_value = "rational")]
    pub mode: ModeArg,
}

#[derive(Debug, Args)]
pub struct RemezArgs {
    #[arg(long)]
    pub function: String,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub x0: f64,
    #[arg(long, default_value_t = 1.0)]
    pub epsilon: f64,
    #[arg(long)]
    pub degree: usize,
}

#[derive(Debug, Args)]
pub struct DuelArgs {
    #[arg(long)]
    pub function: String,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub x0: f64,
    #[arg(long)]
    pub degree: usize,
    /// Coefficients c0,c1,... in powers of (x - x0).
    #[arg(long, allow_hyphen_values = true)]
    pub challenger: String,
    #[arg(long, default_value = "l2")]
    pub norm: Norm,
    #[command(flatten)]
    pub grid: GridArgs,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApproxReport {
    pub function: String,
    pub center: Scalar,
    pub epsilon: Scalar,
    pub degree: usize,
    pub method: Method,
    pub coefficients: Vec<Scalar>,
    pub residual_l2: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual_sq_exact: Option<Scalar>,
    pub taylor: Vec<Scalar>,
    pub coef_errors: Vec<Scalar>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub optimality_check: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DetReport {
    pub degree: usize,
    pub epsilon: Scalar,
    /// `det A_{k+1}` by elimination on `A` itself.
    pub direct: Scalar,
    /// `2^{k+1} eps^{(k+1)^2} det Ã_{k+1}`.
    pub factorization: Scalar,
    /// The same with `det Ã = det B_u det C_v`.
    pub blocks: Scalar,
    pub agree: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlocksReport {
    pub degree: usize,
    pub u: usize,
    pub v: usize,
    pub permutation: Vec<usize>,
    pub b: Vec<Vec<Scalar>>,
    pub c: Vec<Vec<Scalar>>,
    pub off_diagonal_zero: bool,
    pub det_b: Scalar,
    pub det_c: Scalar,
    pub det_normalized: Scalar,
    pub product_matches: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InverseReport {
    pub degree: usize,
    pub epsilons: Vec<Scalar>,
    pub alpha: Vec<Vec<Scalar>>,
    pub parity_zero: bool,
    pub cross_eps_agree: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RemezReport {
    pub function: String,
    pub center: f64,
    pub epsilon: f64,
    pub degree: usize,
    pub coefficients: Vec<f64>,
    pub max_error: f64,
    pub alternation_points: Vec<f64>,
    pub iterations: usize,
    pub equioscillation: bool,
    pub converged: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlopeRow {
    pub i: usize,
    pub slope: Option<f64>,
    pub r_squared: Option<f64>,
    pub points: usize,
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub function: String,
    pub center: Scalar,
    pub degree: usize,
    pub records: Vec<SweepRecord>,
    pub slopes: Vec<SlopeRow>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DuelOutput {
    pub function: String,
    pub center: f64,
    pub degree: usize,
    pub norm: Norm,
    pub challenger: Vec<Scalar>,
    pub taylor: Vec<Scalar>,
    pub rows: Vec<lab::DuelRow>,
    pub threshold: Option<f64>,
}

/// Rendered command output. `ok` is false when an operation reported a
/// failure that still left something to write.
#[derive(Clone, Debug)]
pub struct Rendered {
    pub body: String,
    pub ok: bool,
}

/// Loads a function and rejects rational mode for anything but `poly:`.
pub fn load_function(name: &str, mode: Mode) -> Result<FunctionSpec> {
    let f = lab::registry_lookup(name)?;
    if mode == Mode::Rational && f.exact().is_none() {
        return Err(Error::invalid(format!(
            "rational mode needs a poly:<...> function, got '{name}'"
        )));
    }
    Ok(f)
}

fn json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn only_json(format: Option<Format>, command: &str) -> Result<()> {
    match format {
        Some(Format::Csv) => Err(Error::invalid(format!("{command} only writes JSON"))),
        _ => Ok(()),
    }
}

fn rows(m: &Matrix<BigRational>, mode: Mode) -> Vec<Vec<Scalar>> {
    m.to_rows()
        .into_iter()
        .map(|r| r.into_iter().map(|q| to_mode(q, mode)).collect())
        .collect()
}

fn to_mode(q: BigRational, mode: Mode) -> Scalar {
    match mode {
        Mode::Rational => Scalar::Exact(q),
        Mode::Float => Scalar::Float(crate::scalar::rational_to_f64(&q)),
    }
}

fn close(a: &Scalar, b: &Scalar) -> bool {
    match (a, b) {
        (Scalar::Float(x), Scalar::Float(y)) => (x - y).abs() <= 1e-8 * x.abs().max(y.abs()),
        _ => a == b,
    }
}

pub fn run(cli: &Cli) -> Result<Rendered> {
    match &cli.command {
        Command::Approx(a) => {
            only_json(cli.format, "approx")?;
            cmd_approx(a)
        }
        Command::Sweep(a) => cmd_sweep(a, cli.format.unwrap_or(Format::Csv)),
        Command::Matrix { action } => {
            only_json(cli.format, "matrix")?;
            cmd_matrix(action)
        }
        Command::Remez(a) => {
            only_json(cli.format, "remez")?;
            cmd_remez(a)
        }
        Command::Duel(a) => cmd_duel(a, cli.format.unwrap_or(Format::Csv)),
    }
}

pub fn cmd_approx(a: &ApproxArgs) -> Result<Rendered> {
    let mode = Mode::from(a.func.mode);
    let f = load_function(&a.func.function, mode)?;
    let x0 = Scalar::parse(mode, &a.func.x0)?;
    let eps = Scalar::parse(mode, &a.epsilon)?;
    let k = a.func.degree;
    let r = solve(&f, &x0, &eps, k, a.method)?;
    let taylor = TaylorReference::new(&f, &x0, k)?;
    let optimality_check = match a.perturbations {
        0 => None,
        n => Some(perturbation_check(&f, &r, n, a.noise, a.seed)?),
    };
    let report = ApproxReport {
        function: a.func.function.clone(),
        center: x0,
        epsilon: eps,
        degree: k,
        method: a.method,
        coefficients: r.poly.coeffs().to_vec(),
        residual_l2: r.residual_l2,
        residual_sq_exact: r.residual_sq_exact.clone().map(Scalar::Exact),
        taylor: taylor.coefficients(),
        coef_errors: taylor.errors(&r)?,
        optimality_check,
    };
    Ok(Rendered {
        body: json(&report)?,
        ok: optimality_check != Some(false),
    })
}

pub fn cmd_sweep(a: &SweepArgs, format: Format) -> Result<Rendered> {
    let mode = Mode::from(a.func.mode);
    let f = load_function(&a.func.function, mode)?;
    let x0 = Scalar::parse(mode, &a.func.x0)?;
    let (eps_max, eps_min, steps) = a.grid.resolve((1e-1, 1e-3, 10));
    let records = lab::sweep(&f, &x0, a.func.degree, eps_max, eps_min, steps, a.method)?;
    let slopes: Vec<SlopeRow> = lab::fit_slopes(&records)
        .into_iter()
        .enumerate()
        .map(|(i, fit)| match fit {
            Ok(SlopeFit {
                slope,
                r_squared,
                points,
                ..
            }) => SlopeRow {
                i,
                slope: Some(slope),
                r_squared: Some(r_squared),
                points,
                note: None,
            },
            Err(e) => SlopeRow {
                i,
                slope: None,
                r_squared: None,
                points: match e {
                    Error::FitRefused { usable, .. } => usable,
                    _ => 0,
                },
                note: Some(e.to_string()),
            },
        })
        .collect();
    let ok = records.iter().all(|r| !r.failed());
    let report = SweepReport {
        function: a.func.function.clone(),
        center: x0,
        degree: a.func.degree,
        records,
        slopes,
    };
    let body = match format {
        Format::Json => json(&report)?,
        Format::Csv => sweep_csv(&report, a.func.degree)?,
    };
    Ok(Rendered { body, ok })
}

fn sweep_csv(report: &SweepReport, k: usize) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "epsilon", "i", "a_i", "taylor_i", "abs_err", "bound", "method", "status",
    ])?;
    for r in &report.records {
        let eps = r.epsilon.to_string();
        let method = r.method.to_string();
        if r.failed() {
            let note = r.status.clone().unwrap_or_default();
            for i in 0..=k {
                w.write_record([eps.as_str(), &i.to_string(), "", "", "", "", &method, &note])?;
            }
            continue;
        }
        for i in 0..=k {
            w.write_record([
                eps.clone(),
                i.to_string(),
                r.coefficients[i].to_string(),
                r.taylor[i].to_string(),
                r.coef_errors[i].to_string(),
                format_f64(r.bounds[i]),
                method.clone(),
                String::new(),
            ])?;
        }
    }
    let method = report
        .records
        .first()
        .map(|r| r.method.to_string())
        .unwrap_or_default();
    for s in &report.slopes {
        let status = match (&s.r_squared, &s.note) {
            (Some(r2), _) => format!("r2={}", format_f64(*r2)),
            (None, Some(note)) => note.clone(),
            _ => String::new(),
        };
        w.write_record([
            format!("slope_{}", s.i),
            s.i.to_string(),
            String::new(),
            String::new(),
            s.slope.map(format_f64).unwrap_or_default(),
            String::new(),
            method.clone(),
            status,
        ])?;
    }
    finish_csv(w)
}

fn finish_csv(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w
        .into_inner()
        .map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?;
    String::from_utf8(bytes).map_err(|e| Error::invalid(e.to_string()))
}

pub fn cmd_matrix(action: &MatrixAction) -> Result<Rendered> {
    match action {
        MatrixAction::Det(a) => {
            let mode = Mode::from(a.mode);
            let eps = Scalar::parse(mode, &a.epsilon)?;
            let k = a.degree;
            let direct = build_moment(k, &eps)?.det_direct();
            let factorization = det_via_factorization(k, &eps)?;
            let split = block_decompose(k);
            let n = k as i32 + 1;
            let scale =
                to_mode(BigRational::from_integer(2.into()).pow(n), mode).mul(&eps.powi(n * n))?;
            let tilde = to_mode(split.b.det() * split.c.det(), mode);
            let blocks = scale.mul(&tilde)?;
            let agree = close(&direct, &factorization) && close(&factorization, &blocks);
            let report = DetReport {
                degree: k,
                epsilon: eps,
                direct,
                factorization,
                blocks,
                agree,
            };
            Ok(Rendered {
                body: json(&report)?,
                ok: agree,
            })
        }
        MatrixAction::Blocks(a) => {
            let mode = Mode::from(a.mode);
            let split = block_decompose(a.degree);
            let det_b = split.b.det();
            let det_c = split.c.det();
            let det_normalized = crate::moment::normalized_exact(a.degree).det();
            let product_matches = det_b.clone() * det_c.clone() == det_normalized;
            let ok = product_matches && split.off_diagonal_zero && split.shape.is_bijection();
            let report = BlocksReport {
                degree: a.degree,
                u: split.shape.u,
                v: split.shape.v,
                permutation: split.shape.permutation.clone(),
                b: rows(&split.b, mode),
                c: rows(&split.c, mode),
                off_diagonal_zero: split.off_diagonal_zero,
                det_b: to_mode(det_b, mode),
                det_c: to_mode(det_c, mode),
                det_normalized: to_mode(det_normalized, mode),
                product_matches,
            };
            Ok(Rendered {
                body: json(&report)?,
                ok,
            })
        }
        MatrixAction::Inverse(a) => {
            let mode = Mode::from(a.mode);
            let epsilons = a
                .eps_list
                .split(',')
                .map(|s| Scalar::parse(mode, s))
                .collect::<Result<Vec<_>>>()?;
            let inv = inverse_structure(a.degree, &epsilons)?;
            let ok = inv.parity_zero && inv.cross_eps_agree;
            let report = InverseReport {
                degree: a.degree,
                epsilons,
                alpha: inv.alpha,
                parity_zero: inv.parity_zero,
                cross_eps_agree: inv.cross_eps_agree,
            };
            Ok(Rendered {
                body: json(&report)?,
                ok,
            })
        }
    }
}

fn remez_report(
    name: &str,
    f: &FunctionSpec,
    r: &RemezResult,
    k: usize,
    converged: bool,
) -> RemezReport {
    let (lo, hi) = r.interval();
    RemezReport {
        function: name.to_string(),
        center: r.poly.center().to_f64(),
        epsilon: (hi - lo) / 2.0,
        degree: k,
        coefficients: r.poly.coeffs_f64(),
        max_error: r.max_error,
        alternation_points: r.alternation_points.clone(),
        iterations: r.iterations,
        equioscillation: r.equioscillates(f),
        converged,
    }
}

pub fn cmd_remez(a: &RemezArgs) -> Result<Rendered> {
    let f = load_function(&a.function, Mode::Float)?;
    let (r, converged) = match solve_remez(&f, a.x0, a.epsilon, a.degree) {
        Ok(r) => (r, true),
        Err(Error::RemezNotConverged(last)) => (*last, false),
        Err(e) => return Err(e),
    };
    let mut report = remez_report(&a.function, &f, &r, a.degree, converged);
    report.epsilon = a.epsilon;
    Ok(Rendered {
        body: json(&report)?,
        ok: converged,
    })
}

pub fn cmd_duel(a: &DuelArgs, format: Format) -> Result<Rendered> {
    let f = load_function(&a.function, Mode::Float)?;
    let coeffs = a
        .challenger
        .split(',')
        .map(|s| Scalar::parse(Mode::Float, s).map(|v| v.to_f64()))
        .collect::<Result<Vec<_>>>()?;
    let challenger = Polynomial::from_f64(a.x0, &coeffs)?;
    let (eps_max, eps_min, steps) = a.grid.resolve((1.0, 1e-3, 13));
    if steps < 1 || !(eps_min > 0.0 && eps_min <= eps_max) {
        return Err(Error::invalid(
            "need eps_min in (0, eps_max] and at least one step",
        ));
    }
    let grid = if steps == 1 {
        vec![eps_max]
    } else {
        log_grid(eps_max, eps_min, steps)
    };
    let report = lab::duel(&f, a.x0, a.degree, &challenger, &grid, a.norm)?;
    let out = DuelOutput {
        function: a.function.clone(),
        center: a.x0,
        degree: a.degree,
        norm: report.norm,
        challenger: report.challenger.coeffs().to_vec(),
        taylor: report.taylor.coeffs().to_vec(),
        rows: report.grid.clone(),
        threshold: report.threshold,
    };
    let body = match format {
        Format::Json => json(&out)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["epsilon", "err_taylor", "err_challenger", "winner"])?;
            for r in &out.rows {
                w.write_record([
                    format_f64(r.epsilon),
                    format_f64(r.err_taylor),
                    format_f64(r.err_challenger),
                    r.winner().to_string(),
                ])?;
            }
            let mut s = finish_csv(w)?;
            match out.threshold {
                Some(t) => s.push_str(&format!("threshold={}\n", format_f64(t))),
                None => s.push_str("threshold=none\n"),
            }
            s
        }
    };
    Ok(Rendered { body, ok: true })
}

/// Writes `body` to `path` through a temporary file in the same directory
/// and a rename.
pub fn write_atomic(path: &Path, body: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(body.as_bytes())?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

/// Parses arguments, runs the command and writes the output. Returns the
/// process exit code.
pub fn main_with(args: impl IntoIterator<Item = String>) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let rendered = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    let written = match &cli.output {
        Some(path) => write_atomic(path, &rendered.body),
        None => std::io::stdout()
            .write_all(rendered.body.as_bytes())
            .map_err(Error::from),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return 1;
    }
    if !rendered.ok {
        eprintln!("error: at least one operation reported a failure; see the output");
        return 1;
    }
    0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Result<Rendered> {
        let cli =
            Cli::try_parse_from(std::iter::once("taylor-l2").chain(args.iter().copied())).unwrap();
        run(&cli)
    }

    #[test]
    fn approx_rational_recovers_polynomial() {
        let out = run_args(&[
            "approx",
            "--function",
            "poly:2,5",
            "--epsilon",
            "0.3",
            "--degree",
            "1",
            "--mode",
            "rational",
        ])
        .unwrap();
        let r: ApproxReport = serde_json::from_str(&out.body).unwrap();
        assert_eq!(
            r.coefficients,
            vec![
                Scalar::from_int(Mode::Rational, 2),
                Scalar::from_int(Mode::Rational, 5)
            ]
        );
        assert_eq!(r.residual_sq_exact, Some(Scalar::zero(Mode::Rational)));
    }

    #[test]
    fn rational_mode_needs_a_polynomial() {
        assert!(run_args(&[
            "approx",
            "--function",
            "exp",
            "--degree",
            "1",
            "--mode",
            "rational"
        ])
        .is_err());
    }

    #[test]
    fn matrix_blocks_shape() {
        let out = run_args(&["matrix", "blocks", "--degree", "4"]).unwrap();
        let r: BlocksReport = serde_json::from_str(&out.body).unwrap();
        assert_eq!((r.u, r.v), (2, 3));
        assert!(out.ok);
    }

    #[test]
    fn float_det_routes_agree() {
        let out = run_args(&[
            "matrix",
            "det",
            "--degree",
            "3",
            "--epsilon",
            "0.5",
            "--mode",
            "float",
        ])
        .unwrap();
        assert!(out.ok, "{}", out.body);
    }

    #[test]
    fn csv_rejected_for_json_commands() {
        assert!(run_args(&[
            "remez",
            "--function",
            "exp",
            "--degree",
            "0",
            "--format",
            "csv"
        ])
        .is_err());
    }
}
