//! Command-line front end for `dualbern`.
//!
//! Exit status: 0 on success, 2 for invalid flags or input files, 3 when an
//! oracle check exceeds its tolerance, 1 for any other failure.

pub mod files;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use dualbern::approx::{distance, solve_with, ApproxProblem, IntegralMethod, SolveOptions};
use dualbern::oracles::{constrained_table_via_gram_inverse, dual_table_direct, dual_table_via_gram_inverse, GRAM_MAX_DEGREE};
use dualbern::{compute_table, constrained_table, AlphaParams, CoeffTable, ConstraintVector, DomainPoint, Error};

use files::{fmt_real, read_boundary, read_patch, write_patch, write_table, TableFile};

/// Largest accepted row-relative deviation for `--check`.
pub const CHECK_TOL: f64 = 1e-8;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, unreadable or malformed input.
    Input(String),
    /// An oracle disagreed with the computed table.
    Check(String),
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Check(_) => 3,
            CliError::Runtime(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) | CliError::Check(m) | CliError::Runtime(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter(_)
            | Error::IndexOutOfRange(..)
            | Error::ConstraintTooLarge { .. }
            | Error::Domain(..)
            | Error::Dimension(_) => CliError::Input(e.to_string()),
            _ => CliError::Runtime(e.to_string()),
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "dualbern", version, about = "Dual Bernstein coefficient tables and constrained patch approximation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute the coefficient table of the (constrained) dual basis.
    DualTable(DualTableArgs),
    /// Best constrained polynomial approximation of a patch.
    Reduce(ReduceArgs),
    /// Evaluate a patch at points of the triangle.
    Eval(EvalArgs),
    /// Weighted squared L2 distance between two patches.
    Distance(DistanceArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CheckKind {
    Gram,
    Direct,
    None,
}

#[derive(Debug, Args)]
pub struct DualTableArgs {
    #[arg(long)]
    pub n: usize,
    /// Weight exponents a1,a2,a3, each > -1.
    #[arg(long, value_parser = parse_alpha, allow_hyphen_values = true)]
    pub alpha: AlphaParams,
    /// Constraint orders c1,c2,c3 with c1+c2+c3 < n.
    #[arg(long, value_parser = parse_constraint)]
    pub c: Option<ConstraintVector>,
    #[arg(long)]
    pub out: PathBuf,
    /// Compare against an independent computation (n <= 12).
    #[arg(long, value_enum, default_value_t = CheckKind::None)]
    pub check: CheckKind,
}

#[derive(Debug, Args)]
pub struct ReduceArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Target degree.
    #[arg(long)]
    pub m: usize,
    #[arg(long, value_parser = parse_alpha, allow_hyphen_values = true, default_value = "0,0,0")]
    pub alpha: AlphaParams,
    #[arg(long, value_parser = parse_constraint)]
    pub c: Option<ConstraintVector>,
    /// Prescribed control values for the constrained-out indices.
    #[arg(long)]
    pub g: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
    /// Print the distance between the input and the result.
    #[arg(long)]
    pub report: bool,
    /// Tolerance of the adaptive quadrature.
    #[arg(long, default_value_t = 1e-12)]
    pub qtol: f64,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Point x1,x2 in the triangle; repeatable.
    #[arg(long = "at", value_parser = parse_point, allow_hyphen_values = true, required = true)]
    pub at: Vec<DomainPoint>,
}

#[derive(Debug, Args)]
pub struct DistanceArgs {
    #[arg(long)]
    pub a: PathBuf,
    #[arg(long)]
    pub b: PathBuf,
    #[arg(long, value_parser = parse_alpha, allow_hyphen_values = true, default_value = "0,0,0")]
    pub alpha: AlphaParams,
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
}

fn parse_triple<T: std::str::FromStr>(s: &str) -> std::result::Result<[T; 3], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(format!("expected three comma-separated values, got '{s}'"));
    }
    let mut out = Vec::with_capacity(3);
    for p in parts {
        out.push(p.parse::<T>().map_err(|_| format!("cannot parse '{p}'"))?);
    }
    out.try_into().map_err(|_| unreachable!())
}

fn parse_alpha(s: &str) -> std::result::Result<AlphaParams, String> {
    let [a1, a2, a3] = parse_triple::<f64>(s)?;
    AlphaParams::new(a1, a2, a3).map_err(|e| e.to_string())
}

fn parse_constraint(s: &str) -> std::result::Result<ConstraintVector, String> {
    let [c1, c2, c3] = parse_triple::<usize>(s)?;
    Ok(ConstraintVector::new(c1, c2, c3))
}

fn parse_point(s: &str) -> std::result::Result<DomainPoint, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [a, b] => {
            let x1 = a.parse::<f64>().map_err(|_| format!("cannot parse '{a}'"))?;
            let x2 = b.parse::<f64>().map_err(|_| format!("cannot parse '{b}'"))?;
            Ok(DomainPoint::new(x1, x2))
        }
        _ => Err(format!("expected x1,x2, got '{s}'")),
    }
}

fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))
}

fn load_patch(path: &Path) -> Result<dualbern::TriPatch> {
    read_patch(&read_file(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub fn run(cli: Cli, out: &mut impl Write) -> Result<()> {
    match cli.command {
        Command::DualTable(a) => dual_table(a, out),
        Command::Reduce(a) => reduce(a, out),
        Command::Eval(a) => eval(a, out),
        Command::Distance(a) => distance_cmd(a, out),
    }
}

fn emit(out: &mut impl Write, line: std::fmt::Arguments<'_>) -> Result<()> {
    out.write_fmt(line)
        .and_then(|_| out.write_all(b"\n"))
        .map_err(|e| CliError::Runtime(format!("cannot write output: {e}")))
}

/// Largest `|a - b|` over all entries, each relative to the largest
/// magnitude in its row.
fn max_row_deviation(a: &CoeffTable, b: &CoeffTable) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..a.size() {
        let (ra, rb) = (a.row(i), b.row(i));
        let scale = ra.iter().chain(&rb).fold(0.0f64, |m, v| m.max(v.abs()));
        if scale > 0.0 {
            for (x, y) in ra.iter().zip(&rb) {
                worst = worst.max((x - y).abs() / scale);
            }
        }
    }
    worst
}

fn dual_table(a: DualTableArgs, out: &mut impl Write) -> Result<()> {
    let n = a.n;
    if let Some(c) = a.c {
        c.check_degree(n)?;
    }
    if a.check != CheckKind::None && n > GRAM_MAX_DEGREE {
        return Err(CliError::Input(format!("--check supports n <= {GRAM_MAX_DEGREE}, got {n}")));
    }
    let c = a.c.filter(|c| !c.is_none());
    let values = match c {
        None => compute_table(&a.alpha, n)?,
        Some(c) => {
            let e = constrained_table(&a.alpha, c, n)?;
            let size = e.domain().len();
            let mut t = CoeffTable::zeros(n - c.total());
            for i in 0..size {
                for j in i..size {
                    t.set_position(i, j, e.at(i, j));
                }
            }
            t
        }
    };

    if a.check != CheckKind::None {
        let (reference, subject) = match (a.check, c) {
            (CheckKind::Gram, None) => (dual_table_via_gram_inverse(&a.alpha, n)?, values.clone()),
            (CheckKind::Gram, Some(c)) => (constrained_table_via_gram_inverse(&a.alpha, c, n)?, values.clone()),
            // the constrained table is a rescaling of the shifted table,
            // which is what the direct sum can check
            (_, Some(c)) => {
                let shifted = a.alpha.shifted(c);
                let deg = n - c.total();
                (dual_table_direct(&shifted, deg)?, compute_table(&shifted, deg)?)
            }
            (_, None) => (dual_table_direct(&a.alpha, n)?, values.clone()),
        };
        let dev = max_row_deviation(&subject, &reference);
        emit(out, format_args!("max relative deviation {}", fmt_real(dev)))?;
        if !(dev <= CHECK_TOL) {
            return Err(CliError::Check(format!(
                "oracle deviation {dev:e} exceeds {CHECK_TOL:e}"
            )));
        }
    }

    let file = TableFile {
        n,
        alpha: a.alpha,
        c,
        values,
    };
    write_file(&a.out, &write_table(&file))
}

fn reduce(a: ReduceArgs, out: &mut impl Write) -> Result<()> {
    if !(a.qtol > 0.0) {
        return Err(CliError::Input(format!("--qtol must be positive, got {}", a.qtol)));
    }
    let source = load_patch(&a.input)?;
    let c = a.c.unwrap_or(ConstraintVector::NONE);
    if a.m == 0 {
        return Err(CliError::Input("--m must be at least 1".into()));
    }
    c.check_degree(a.m)?;
    let g = match (&a.g, c.is_none()) {
        (Some(path), _) => read_boundary(&read_file(path)?, a.m, c, source.dim())
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?,
        (None, true) => Vec::new(),
        (None, false) => {
            return Err(CliError::Input(
                "--c needs boundary values; pass them with --g".into(),
            ))
        }
    };
    let problem = ApproxProblem::new(source, a.m, c, g, a.alpha)?;
    let opts = SolveOptions {
        integral_tol: a.qtol,
        distance_tol: a.qtol,
        compute_distance: a.report,
    };
    let sol = solve_with(&problem, &opts)?;
    write_file(&a.out, &write_patch(&sol.result))?;
    if a.report {
        let method = match sol.diagnostics.integrals {
            IntegralMethod::ClosedForm => "closed form".to_string(),
            IntegralMethod::Quadrature { order } => format!("quadrature order {order}"),
        };
        emit(out, format_args!("distance {}", fmt_real(sol.distance)))?;
        emit(out, format_args!("integrals {method}"))?;
    }
    Ok(())
}

fn eval(a: EvalArgs, out: &mut impl Write) -> Result<()> {
    let patch = load_patch(&a.input)?;
    for x in &a.at {
        let v = patch.eval(*x)?;
        let line: Vec<String> = v.iter().map(|v| fmt_real(*v)).collect();
        emit(out, format_args!("{}", line.join(" ")))?;
    }
    Ok(())
}

fn distance_cmd(a: DistanceArgs, out: &mut impl Write) -> Result<()> {
    if !(a.tol > 0.0) {
        return Err(CliError::Input(format!("--tol must be positive, got {}", a.tol)));
    }
    let p = load_patch(&a.a)?;
    let q = load_patch(&a.b)?;
    let (d, _) = distance(&p, &q, &a.alpha, a.tol)?;
    emit(out, format_args!("{}", fmt_real(d)))
}
