//! Batch front end: reads a JSON problem description, dispatches to the
//! library, and prints a JSON report to standard output.
//!
//! Exit codes: 0 = computed (any verdict), 2 = invalid input,
//! 3 = numerical failure.

mod input;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use hardyball::{
    distance_report, eval_kernel_combo, pick_constant, pick_feasible, pick_matrix,
    poly_sphere_norm, schur_interpolant, solve_psi, unit_l2_lift_test, ComplexPoly, Config,
    Error as CoreError, InterpolationData, LiftReport, MultiIndex, RationalFn1D,
};
use num_complex::Complex64;

use input::ProblemFile;
use output::Json;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CommandKind {
    /// Pick-matrix feasibility and the Pick constant (disc data).
    Pick,
    /// Kernel-combination interpolant, plus an explicit disc witness.
    Interpolate,
    /// Two-sided lift feasibility report for interpolation data.
    LiftCheck,
    /// Unit-norm polynomial criterion.
    PolyLiftTest,
    /// Exact monomial integrals and polynomial sphere norms.
    Integrate,
    /// Matrix of a compressed polynomial multiplier on a truncation module.
    Compress,
}

#[derive(Debug, Parser)]
#[command(name = "hardyball", version, about = "Hardy-space interpolation and lifting toolkit")]
struct Cli {
    #[arg(value_enum)]
    command: CommandKind,
    /// Path to the JSON problem file.
    input: PathBuf,
    /// Monte Carlo / grid seed (overrides the problem file).
    #[arg(long)]
    seed: Option<u64>,
    /// Monte Carlo sample count (overrides the problem file).
    #[arg(long)]
    samples: Option<u64>,
    /// Polynomial degree: witness degree for lift-check, truncation degree
    /// for compress and poly-lift-test.
    #[arg(long)]
    degree: Option<u32>,
    /// Solver/verdict tolerance (overrides the problem file).
    #[arg(long)]
    tol: Option<f64>,
    /// Grid points per angular dimension (overrides the problem file).
    #[arg(long)]
    grid: Option<usize>,
    /// Worker threads; output is byte-identical for every value.
    #[arg(long)]
    threads: Option<usize>,
}

/// Error carrying its exit-code class.
#[derive(Debug)]
pub struct CliError {
    reason: String,
    numerical: bool,
}

impl CliError {
    fn invalid(reason: String) -> Self {
        CliError { reason, numerical: false }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError { reason: e.to_string(), numerical: !e.is_invalid_input() }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        // ignore rebuild errors in case a pool already exists
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    match run(&cli) {
        Ok(doc) => {
            println!("{}", doc.emit());
            ExitCode::SUCCESS
        }
        Err(e) => {
            let doc = Json::Object(vec![
                ("version", Json::Str("1".into())),
                ("error", Json::Bool(true)),
                (
                    "kind",
                    Json::Str(
                        if e.numerical { "numerical_failure" } else { "invalid_input" }.into(),
                    ),
                ),
                ("reason", Json::Str(e.reason)),
            ]);
            println!("{}", doc.emit());
            ExitCode::from(if e.numerical { 3 } else { 2 })
        }
    }
}

fn run(cli: &Cli) -> Result<Json, CliError> {
    let text = std::fs::read_to_string(&cli.input)
        .map_err(|e| CliError::invalid(format!("cannot read {}: {e}", cli.input.display())))?;
    let file = ProblemFile::parse(&text)?;
    let mut cfg = file.config();
    if let Some(v) = cli.seed {
        cfg.seed = v;
    }
    if let Some(v) = cli.samples {
        cfg.mc_samples = v;
    }
    if let Some(v) = cli.grid {
        cfg.grid_points_per_dim = v;
    }
    if let Some(v) = cli.tol {
        cfg.solver_tol = v;
    }
    cfg.validate().map_err(CliError::from)?;

    match cli.command {
        CommandKind::Pick => run_pick(&file, &cfg),
        CommandKind::Interpolate => run_interpolate(&file),
        CommandKind::LiftCheck => run_lift_check(&file, &cfg, cli.degree),
        CommandKind::PolyLiftTest => run_poly_lift_test(&file, &cfg, cli.degree),
        CommandKind::Integrate => run_integrate(&file, &cfg),
        CommandKind::Compress => run_compress(&file, cli.degree),
    }
}

fn run_pick(file: &ProblemFile, cfg: &Config) -> Result<Json, CliError> {
    let data = InterpolationData::new_relaxed(file.disc_points()?, file.target_values()?)?;
    let matrix = pick_matrix(&data)?;
    let feasible = pick_feasible(&data, cfg.tol_psd)?;
    let constant = pick_constant(&data, cfg)?;
    let rows: Vec<Json> = (0..matrix.dim())
        .map(|i| {
            let row: Vec<Complex64> = (0..matrix.dim()).map(|j| matrix.entry(i, j)).collect();
            Json::complex_row(&row)
        })
        .collect();
    Ok(Json::Object(vec![
        ("version", Json::Str("1".into())),
        ("command", Json::Str("pick".into())),
        ("feasible", Json::Bool(feasible)),
        ("pick_constant", Json::Float(constant)),
        ("matrix", Json::Array(rows)),
        ("min_eigenvalue", Json::Float(matrix.min_eigenvalue())),
    ]))
}

fn run_interpolate(file: &ProblemFile) -> Result<Json, CliError> {
    let points = file.ball_points()?;
    let values = file.target_values()?;
    let data = InterpolationData::new_relaxed(points.clone(), values.clone())?;
    let psi = solve_psi(&data)?;
    let residual = data
        .points()
        .iter()
        .zip(data.values())
        .map(|(z, w)| (eval_kernel_combo(&psi, z).expect("dimensions agree") - w).norm())
        .fold(0.0, f64::max);

    // explicit disc witness when the data is strict and strictly feasible
    let witness = if data.ambient_dim() == 1 {
        InterpolationData::new(points, values)
            .ok()
            .and_then(|strict| schur_interpolant(&strict).ok())
    } else {
        None
    };
    Ok(Json::Object(vec![
        ("version", Json::Str("1".into())),
        ("command", Json::Str("interpolate".into())),
        ("dimension", Json::UInt(data.ambient_dim() as u64)),
        ("psi_coeffs", Json::complex_row(psi.coeffs())),
        ("residual", Json::Float(residual)),
        (
            "schur_witness",
            witness.map_or(Json::Null, |w| rational_json(&w)),
        ),
    ]))
}

fn run_lift_check(file: &ProblemFile, cfg: &Config, degree: Option<u32>) -> Result<Json, CliError> {
    let data = InterpolationData::new_relaxed(file.ball_points()?, file.target_values()?)?;
    let degree = degree.unwrap_or_else(|| (data.len() as u32 + 2).min(cfg.max_degree));
    let report = distance_report(&data, degree, cfg)?;
    Ok(lift_report_json(&report, degree))
}

fn lift_report_json(report: &LiftReport, degree: u32) -> Json {
    Json::Object(vec![
        ("version", Json::Str("1".into())),
        ("command", Json::Str("lift-check".into())),
        ("degree", Json::UInt(u64::from(degree))),
        ("opnorm_lower", Json::Float(report.opnorm_lower)),
        ("supnorm_upper", Json::Float(report.supnorm_upper)),
        (
            "upper_bound_kind",
            Json::Str(report.upper_bound_kind.as_str().into()),
        ),
        (
            "distance_bracket",
            Json::Array(vec![
                Json::Float(report.distance_bracket.0),
                Json::Float(report.distance_bracket.1),
            ]),
        ),
        ("verdict", Json::Str(report.verdict.as_str().into())),
        (
            "witness",
            report.witness.as_ref().map_or(Json::Null, poly_json),
        ),
        ("witness_residual", Json::Float(report.witness_residual)),
    ])
}

fn run_poly_lift_test(
    file: &ProblemFile,
    cfg: &Config,
    degree: Option<u32>,
) -> Result<Json, CliError> {
    let p = file.polynomial()?;
    let base = p.degree().unwrap_or(0);
    let m = file.truncation_degree.or(degree).unwrap_or(base);
    let out = unit_l2_lift_test(&p, m, cfg)?;
    Ok(Json::Object(vec![
        ("version", Json::Str("1".into())),
        ("command", Json::Str("poly-lift-test".into())),
        ("truncation_degree", Json::UInt(u64::from(m))),
        ("verdict", Json::Str(out.verdict.as_str().into())),
        ("l1", estimate_json(&out.l1)),
        ("l2", Json::Float(out.l2)),
        ("grid_deviation", Json::Float(out.grid_deviation)),
    ]))
}

fn run_integrate(file: &ProblemFile, cfg: &Config) -> Result<Json, CliError> {
    if let Some(monomial) = &file.monomial {
        let alpha = MultiIndex::new(monomial.alpha.clone());
        let beta = monomial
            .beta
            .as_ref()
            .map(|b| MultiIndex::new(b.clone()))
            .unwrap_or_else(|| alpha.clone());
        let n = alpha.dim();
        let value = hardyball::monomial_integral(&alpha, &beta, n)?;
        return Ok(Json::Object(vec![
            ("version", Json::Str("1".into())),
            ("command", Json::Str("integrate".into())),
            ("kind", Json::Str("monomial".into())),
            ("value", Json::Float(value)),
            ("std_error", Json::Float(0.0)),
            ("samples", Json::UInt(0)),
            ("method", Json::Str("Exact".into())),
        ]));
    }
    if file.polynomial.is_some() {
        let p = file.polynomial()?;
        let order = file.norm_order()?;
        let est = poly_sphere_norm(&p, order, cfg)?;
        return Ok(Json::Object(vec![
            ("version", Json::Str("1".into())),
            ("command", Json::Str("integrate".into())),
            ("kind", Json::Str("polynomial_norm".into())),
            ("order", Json::Str(file.order.clone().expect("checked"))),
            ("value", Json::Float(est.value)),
            ("std_error", Json::Float(est.std_error)),
            ("samples", Json::UInt(est.samples)),
            ("method", Json::Str(est.method.as_str().into())),
        ]));
    }
    Err(CliError::invalid(
        "integrate requires either a \"monomial\" or a \"polynomial\" field".into(),
    ))
}

fn run_compress(file: &ProblemFile, degree: Option<u32>) -> Result<Json, CliError> {
    let p = file.polynomial()?;
    let base = p.degree().unwrap_or(0);
    let m = file.truncation_degree.or(degree).unwrap_or(base);
    let q = hardyball::build_qm(m, p.dim())?;
    let op = hardyball::compress_on_qm(&p, &q)?;
    let basis: Vec<Json> = q
        .basis()
        .iter()
        .map(|a| {
            Json::Array(a.exponents().iter().map(|&e| Json::UInt(u64::from(e))).collect())
        })
        .collect();
    let rows: Vec<Json> = (0..op.dim())
        .map(|i| {
            let row: Vec<Complex64> = (0..op.dim()).map(|j| op.matrix()[(i, j)]).collect();
            Json::complex_row(&row)
        })
        .collect();
    Ok(Json::Object(vec![
        ("version", Json::Str("1".into())),
        ("command", Json::Str("compress".into())),
        ("dimension", Json::UInt(p.dim() as u64)),
        ("truncation_degree", Json::UInt(u64::from(m))),
        ("basis", Json::Array(basis)),
        (
            "norms",
            Json::Array(q.norms().iter().map(|&v| Json::Float(v)).collect()),
        ),
        ("matrix", Json::Array(rows)),
    ]))
}

fn estimate_json(est: &hardyball::Estimate) -> Json {
    Json::Object(vec![
        ("value", Json::Float(est.value)),
        ("std_error", Json::Float(est.std_error)),
        ("samples", Json::UInt(est.samples)),
        ("method", Json::Str(est.method.as_str().into())),
    ])
}

fn poly_json(p: &ComplexPoly) -> Json {
    let terms: Vec<Json> = p
        .terms()
        .map(|(alpha, c)| {
            Json::Object(vec![
                (
                    "exponents",
                    Json::Array(
                        alpha
                            .exponents()
                            .iter()
                            .map(|&e| Json::UInt(u64::from(e)))
                            .collect(),
                    ),
                ),
                ("coeff", Json::complex(*c)),
            ])
        })
        .collect();
    Json::Object(vec![
        ("dimension", Json::UInt(p.dim() as u64)),
        ("terms", Json::Array(terms)),
    ])
}

fn rational_json(r: &RationalFn1D) -> Json {
    Json::Object(vec![
        ("numerator", dense_univariate(r.numerator())),
        ("denominator", dense_univariate(r.denominator())),
    ])
}

/// Univariate polynomial as a dense ascending coefficient list.
fn dense_univariate(p: &ComplexPoly) -> Json {
    let deg = p.degree().unwrap_or(0) as usize;
    let coeffs: Vec<Complex64> = (0..=deg)
        .map(|k| p.coeff(&MultiIndex::new(vec![k as u32])))
        .collect();
    Json::complex_row(&coeffs)
}
