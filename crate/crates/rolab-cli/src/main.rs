//! Command-line front end: generate matrix pairs realizing a chosen
//! inverse class, classify pairs from files, emit families of singular
//! value decompositions, and rerun the bundled regression fixtures.
//!
//! Exit codes: 0 success, 2 infeasible construction plan, 3 I/O or parse
//! or shape error, 4 internal consistency violation (the equivalence
//! batteries disagreed, which signals a numerical bug).

mod fixtures;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rolab::{
    classify_123_124, classify_pair, compute_svd, construct_pair_12, construct_pair_123,
    construct_pair_124, construct_partner, group_spectrum, io, random_matrix_with_rank,
    random_unitary, reparametrize_svd, twelve_way_suite, Cls123124, ConstructionPlan, Error,
    Field, Matrix, RolReport, Tolerances, TwelveWay,
};
use serde_json::json;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

const EXIT_INFEASIBLE: u8 = 2;
const EXIT_IO: u8 = 3;
const EXIT_INCONSISTENT: u8 = 4;

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FieldOpt {
    Real,
    Complex,
}

impl From<FieldOpt> for Field {
    fn from(opt: FieldOpt) -> Field {
        match opt {
            FieldOpt::Real => Field::Real,
            FieldOpt::Complex => Field::Complex,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatOpt {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    /// Full reverse-order law via the partner construction.
    Rol,
    /// `{1,2}` class via prescribed principal angles.
    Cls12,
    /// `{1,2,3}` class via a range spanned by singular vectors.
    Cls123,
    /// `{1,2,4}` class, the adjoint mirror.
    Cls124,
    /// Zero product: the partner is built entirely inside the null space.
    Zero,
}

impl Kind {
    fn name(self) -> &'static str {
        match self {
            Kind::Rol => "rol",
            Kind::Cls12 => "cls12",
            Kind::Cls123 => "cls123",
            Kind::Cls124 => "cls124",
            Kind::Zero => "zero",
        }
    }
}

#[derive(Clone, Copy)]
struct Dims(usize, usize, usize);

impl FromStr for Dims {
    type Err = String;
    fn from_str(s: &str) -> Result<Dims, String> {
        let parts: Vec<usize> = s
            .split(',')
            .map(|p| p.trim().parse().map_err(|_| format!("bad dimension {p:?}")))
            .collect::<Result<_, _>>()?;
        match parts.as_slice() {
            [m, n, k] if *m > 0 && *n > 0 && *k > 0 => Ok(Dims(*m, *n, *k)),
            _ => Err("expected three positive integers m,n,k".into()),
        }
    }
}

#[derive(Clone, Copy)]
struct Ranks(usize, usize);

impl FromStr for Ranks {
    type Err = String;
    fn from_str(s: &str) -> Result<Ranks, String> {
        let parts: Vec<usize> = s
            .split(',')
            .map(|p| p.trim().parse().map_err(|_| format!("bad rank {p:?}")))
            .collect::<Result<_, _>>()?;
        match parts.as_slice() {
            [a, b] => Ok(Ranks(*a, *b)),
            _ => Err("expected two integers rA,rB".into()),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "rolab",
    about = "Construct, verify, and classify matrix pairs for the reverse-order law of the pseudoinverse"
)]
struct Cli {
    /// Relative residual below which an identity is accepted.
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol: f64,
    /// Radians within which an angle counts as 0 or a right angle.
    #[arg(long = "angle-tol", global = true, default_value_t = 1e-7)]
    angle_tol: f64,
    /// Seed for every random draw; identical seeds give identical bytes.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Matrix file format written by `generate` (CSV is real-only).
    #[arg(long, global = true, value_enum, default_value_t = FormatOpt::Json)]
    format: FormatOpt,
    /// Scalar field for generated data and fixture reruns.
    #[arg(long, global = true, value_enum, default_value_t = FieldOpt::Real)]
    field: FieldOpt,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a pair (A, B) realizing the requested class and write
    /// A, B, and a classification report into a directory.
    Generate {
        #[arg(value_enum)]
        kind: Kind,
        /// Shape m,n,k of A (m x n) and B (n x k).
        #[arg(long)]
        dims: Dims,
        /// Ranks rA,rB of the two factors.
        #[arg(long)]
        ranks: Ranks,
        /// Shared dimension: rank(AB) for rol/cls12, overlap for cls123/cls124.
        #[arg(long = "N")]
        n_shared: Option<usize>,
        /// Output directory.
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Classify a pair read from matrix files; the report goes to stdout.
    Check { path_a: PathBuf, path_b: PathBuf },
    /// Emit a stream of distinct decompositions of one matrix, one JSON
    /// document per line.
    SvdFamily {
        path: PathBuf,
        #[arg(long, default_value_t = 3)]
        count: usize,
    },
    /// Rerun every bundled regression fixture and print a pass/fail table.
    Repro,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let tols = Tolerances {
        residual: cli.tol,
        angle: cli.angle_tol,
    };
    let tol_ok = |t: f64| t.is_finite() && t > 0.0;
    if !tol_ok(cli.tol) || !tol_ok(cli.angle_tol) {
        eprintln!("error: tolerances must be positive");
        return ExitCode::from(EXIT_IO);
    }
    let result = match &cli.command {
        Command::Generate {
            kind,
            dims,
            ranks,
            n_shared,
            out,
        } => cmd_generate(*kind, *dims, *ranks, *n_shared, &out.clone(), &cli, &tols),
        Command::Check { path_a, path_b } => cmd_check(&path_a.clone(), &path_b.clone(), &cli, &tols),
        Command::SvdFamily { path, count } => cmd_svd_family(&path.clone(), *count, &cli),
        Command::Repro => cmd_repro(&cli, &tols),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(match err {
                Error::PlanInfeasible(_) => EXIT_INFEASIBLE,
                Error::RolNotSatisfied(_) => EXIT_INCONSISTENT,
                _ => EXIT_IO,
            })
        }
    }
}

struct GeneratedPair {
    a: Matrix,
    b: Matrix,
    report: RolReport,
    twelve: TwelveWay,
    cls: Cls123124,
    achieved: bool,
    guaranteed: bool,
}

fn build_pair(
    kind: Kind,
    dims: Dims,
    ranks: Ranks,
    n_shared: usize,
    seed: u64,
    field: Field,
    tols: &Tolerances,
) -> Result<GeneratedPair, Error> {
    let Dims(m, n, k) = dims;
    let Ranks(r_a, r_b) = ranks;
    let (a, b) = match kind {
        Kind::Rol | Kind::Zero => {
            let s = if kind == Kind::Zero { 0 } else { n_shared };
            if s > r_b {
                return Err(Error::PlanInfeasible(format!(
                    "shared dimension {s} exceeds rank {r_b}"
                )));
            }
            if r_a > m.min(n) {
                return Err(Error::PlanInfeasible(format!(
                    "rank {r_a} exceeds min(m, n) = {}",
                    m.min(n)
                )));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_matrix_with_rank(m, n, r_a, field, &mut rng);
            let plan = ConstructionPlan::new(s, r_b - s, k, rng.gen());
            let b = construct_partner(&a, &plan)?;
            (a, b)
        }
        Kind::Cls12 => construct_pair_12((m, n, k), (r_a, r_b), n_shared, seed, field)?,
        Kind::Cls123 => construct_pair_123((m, n, k), (r_a, r_b), n_shared, seed, field)?,
        Kind::Cls124 => construct_pair_124((m, n, k), (r_a, r_b), n_shared, seed, field)?,
    };
    let report = classify_pair(&a, &b, tols)?;
    let twelve = twelve_way_suite(&a, &b, tols)?;
    let cls = classify_123_124(&a, &b, tols)?;
    let (guaranteed, achieved) = match kind {
        Kind::Rol => (report.full_rol, report.full_rol),
        Kind::Zero => (report.full_rol, report.full_rol && report.rank_ab == 0),
        Kind::Cls12 => (cls.is12, cls.is12 && !cls.is123 && !cls.is124),
        Kind::Cls123 => (cls.is123, cls.is123 && !cls.is124),
        Kind::Cls124 => (cls.is124, cls.is124 && !cls.is123),
    };
    Ok(GeneratedPair {
        a,
        b,
        report,
        twelve,
        cls,
        achieved,
        guaranteed,
    })
}

fn cmd_generate(
    kind: Kind,
    dims: Dims,
    ranks: Ranks,
    n_shared: Option<usize>,
    out: &Path,
    cli: &Cli,
    tols: &Tolerances,
) -> Result<u8, Error> {
    let n_shared = match (kind, n_shared) {
        (Kind::Zero, v) => v.unwrap_or(0),
        (_, Some(v)) => v,
        (_, None) => {
            return Err(Error::PlanInfeasible(format!(
                "kind {} requires --N",
                kind.name()
            )))
        }
    };
    let field = cli.field.into();

    // a draw can land in the measure-zero set where a stronger class also
    // holds; redraw once with the next seed and record the event
    let mut seed_used = cli.seed;
    let mut pair = build_pair(kind, dims, ranks, n_shared, seed_used, field, tols)?;
    let mut retried = false;
    if !pair.achieved && pair.guaranteed {
        retried = true;
        seed_used = cli.seed.wrapping_add(1);
        pair = build_pair(kind, dims, ranks, n_shared, seed_used, field, tols)?;
    }
    if !pair.guaranteed || !pair.report.consistent || !pair.twelve.all_agree() || !pair.cls.consistent
    {
        eprintln!("error: generated pair failed its guaranteed classification");
        return Ok(EXIT_INCONSISTENT);
    }

    std::fs::create_dir_all(out).map_err(|e| Error::Format(format!("{}: {e}", out.display())))?;
    let (path_a, path_b) = match cli.format {
        FormatOpt::Json => (out.join("A.json"), out.join("B.json")),
        FormatOpt::Csv => (out.join("A.csv"), out.join("B.csv")),
    };
    write_matrix(&path_a, &pair.a, cli.format)?;
    write_matrix(&path_b, &pair.b, cli.format)?;

    let doc = json!({
        "command": "generate",
        "kind": kind.name(),
        "dims": [dims.0, dims.1, dims.2],
        "ranks": [ranks.0, ranks.1],
        "shared": n_shared,
        "field": Field::from(cli.field).to_string(),
        "seed": cli.seed,
        "seed_used": seed_used,
        "degenerate_retry": retried,
        "achieved": pair.achieved,
        "report": pair.report,
        "twelve_way": pair.twelve,
        "cls_123_124": pair.cls,
    });
    let text = serde_json::to_string_pretty(&doc).expect("report serialization");
    std::fs::write(out.join("report.json"), text + "\n")
        .map_err(|e| Error::Format(format!("report.json: {e}")))?;

    println!(
        "{} pair written to {} (rol residual {:.3e}{})",
        kind.name(),
        out.display(),
        pair.report.rol_residual,
        if retried { ", retried once" } else { "" }
    );
    Ok(if pair.achieved { 0 } else { EXIT_INCONSISTENT })
}

fn write_matrix(path: &Path, m: &Matrix, format: FormatOpt) -> Result<(), Error> {
    let text = match format {
        FormatOpt::Json => io::matrix_to_json(m) + "\n",
        FormatOpt::Csv => io::matrix_to_csv(m)?,
    };
    std::fs::write(path, text).map_err(|e| Error::Format(format!("{}: {e}", path.display())))
}

fn cmd_check(path_a: &Path, path_b: &Path, cli: &Cli, tols: &Tolerances) -> Result<u8, Error> {
    let mut a = io::read_matrix(path_a)?;
    let mut b = io::read_matrix(path_b)?;
    if cli.field == FieldOpt::Complex {
        a = a.as_complex();
        b = b.as_complex();
    }
    if a.cols() != b.rows() {
        return Err(Error::Format(format!(
            "matrices are not conformable: {}x{} times {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    let report = classify_pair(&a, &b, tols)?;
    let twelve = twelve_way_suite(&a, &b, tols)?;
    let cls = classify_123_124(&a, &b, tols)?;
    let consistent = report.consistent && twelve.all_agree() && cls.consistent;
    let doc = json!({
        "command": "check",
        "a": path_a.display().to_string(),
        "b": path_b.display().to_string(),
        "report": report,
        "twelve_way": twelve,
        "cls_123_124": cls,
        "consistent": consistent,
    });
    println!("{}", serde_json::to_string_pretty(&doc).expect("report serialization"));
    Ok(if consistent { 0 } else { EXIT_INCONSISTENT })
}

fn cmd_svd_family(path: &Path, count: usize, cli: &Cli) -> Result<u8, Error> {
    let mut a = io::read_matrix(path)?;
    if cli.field == FieldOpt::Complex {
        a = a.as_complex();
    }
    let svd = compute_svd(&a);
    let blocks = group_spectrum(&svd);
    let field = a.field();
    for i in 0..count {
        let mut rng = ChaCha8Rng::seed_from_u64(cli.seed.wrapping_add(i as u64));
        let qs: Vec<Matrix> = blocks
            .blocks
            .iter()
            .map(|b| random_unitary(b.len(), field, &mut rng))
            .collect();
        let q_right = random_unitary(blocks.null_dim_right, field, &mut rng);
        let q_left = random_unitary(blocks.null_dim_left, field, &mut rng);
        let member = reparametrize_svd(&svd, &blocks, &qs, &q_right, &q_left)?;
        println!("{}", serde_json::to_string(&member).expect("factor serialization"));
    }
    Ok(0)
}

fn cmd_repro(cli: &Cli, tols: &Tolerances) -> Result<u8, Error> {
    let field: Field = cli.field.into();
    let rows = fixtures::run_all(tols, field);
    let width = rows.iter().map(|r| r.name.len()).max().unwrap_or(0);
    let mut all_pass = true;
    for row in &rows {
        all_pass &= row.pass;
        println!(
            "{:<width$}  {}  residual={:<12}  {}",
            row.name,
            if row.pass { "PASS" } else { "FAIL" },
            format!("{:.3e}", row.residual),
            row.note,
        );
    }
    println!(
        "{} of {} fixtures pass (tol {:.1e}, field {field})",
        rows.iter().filter(|r| r.pass).count(),
        rows.len(),
        tols.residual,
    );
    Ok(if all_pass { 0 } else { EXIT_INCONSISTENT })
}
