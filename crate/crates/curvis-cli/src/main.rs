//! `curvis` — lattice-point visibility counts and densities as CSV.
//!
//! Exit codes: 0 success, 1 usage error, 2 domain error (bad sets, bad
//! parameters, parse failures), 3 resource guard (size or memory limits).

use std::fmt;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use curvis::{
    count_brute, count_sieve, empirical_error_report, level1_density, level2_density,
    parse_base_set_text, CountResult, CurveExponent, DensityResult, Engine, ErrorReport,
    LatticePoint, ValidatedBaseSet, VisibilityLevel, DEFAULT_TOLERANCE,
};

#[derive(Parser)]
#[command(
    name = "curvis",
    version,
    about = "Count lattice points visible along power curves and compute their densities"
)]
struct Cli {
    /// Write output to FILE instead of standard output.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a base set is pairwise k-visible; print N and its bound.
    Validate(ValidateArgs),
    /// Count jointly visible points over [1, x]^2 (CSV).
    Count(CountArgs),
    /// Compute a level-1 or level-2 density with a certified bound (CSV).
    Density(DensityArgs),
    /// Reproduce a density table: k = 2..9, both levels, counts vs theory (CSV).
    Table(TableArgs),
    /// Compare counts against the density main term at several sizes (CSV).
    ErrorReport(ErrorReportArgs),
}

/// `--set` accepts either a file in the `u v`-per-line format or an inline
/// list `(u,v);(u,v);...` (whitespace-insensitive).
const SET_HELP: &str = "Base set: file path, or inline \"(u,v);(u,v);...\"";

#[derive(Args)]
struct ValidateArgs {
    /// Curve exponent (1..=63).
    #[arg(long)]
    k: u32,
    #[arg(long, help = SET_HELP)]
    set: String,
}

#[derive(Args)]
struct CountArgs {
    /// Curve exponent (1..=63).
    #[arg(long)]
    k: u32,
    /// Count over the square [1, x]^2.
    #[arg(long)]
    x: u64,
    /// Visibility level (sieve engine supports 1 and 2).
    #[arg(long)]
    level: u64,
    #[arg(long, help = SET_HELP)]
    set: String,
    /// Counting engine.
    #[arg(long, value_parser = ["brute", "sieve"])]
    engine: String,
}

#[derive(Args)]
struct DensityArgs {
    /// Curve exponent (1..=63).
    #[arg(long)]
    k: u32,
    /// Number of base points N (1..=2^(k+1)).
    #[arg(long)]
    n: u64,
    /// Visibility level (1 or 2).
    #[arg(long)]
    level: u64,
    /// Certified error tolerance.
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    tol: f64,
}

#[derive(Args)]
struct TableArgs {
    /// 1: two-point base set {(0,0),(1,1)}; 2: three-point {(0,0),(1,2),(2,1)}.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    which: u8,
    /// Grid size for the numerical column.
    #[arg(long, default_value_t = 10_000)]
    x: u64,
}

#[derive(Args)]
struct ErrorReportArgs {
    /// Curve exponent (1..=63).
    #[arg(long)]
    k: u32,
    /// Visibility level (1 or 2).
    #[arg(long)]
    level: u64,
    #[arg(long, help = SET_HELP)]
    set: String,
    /// Comma-separated strictly increasing grid sizes, e.g. 500,1000,2000.
    #[arg(long)]
    xs: String,
}

enum CliError {
    Usage(String),
    Io(String),
    Domain(curvis::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Io(_) => 2,
            CliError::Domain(e) if e.is_resource_limit() => 3,
            CliError::Domain(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Io(m) => f.write_str(m),
            CliError::Domain(e) => e.fmt(f),
        }
    }
}

impl From<curvis::Error> for CliError {
    fn from(e: curvis::Error) -> Self {
        CliError::Domain(e)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            // Help and version requests arrive as "errors" but are not.
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    let out = cli.out.clone();
    match run(cli).and_then(|text| write_output(out.as_deref(), &text)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn write_output(out: Option<&std::path::Path>, text: &str) -> Result<(), CliError> {
    match out {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::Io(format!("writing `{}`: {e}", path.display()))),
    }
}

fn run(cli: Cli) -> Result<String, CliError> {
    match cli.command {
        Command::Validate(args) => cmd_validate(args),
        Command::Count(args) => cmd_count(args),
        Command::Density(args) => cmd_density(args),
        Command::Table(args) => cmd_table(args),
        Command::ErrorReport(args) => cmd_error_report(args),
    }
}

fn exponent(k: u32) -> Result<CurveExponent, CliError> {
    CurveExponent::new(k).map_err(Into::into)
}

fn level(l: u64) -> Result<VisibilityLevel, CliError> {
    VisibilityLevel::new(l).map_err(Into::into)
}

/// Resolves `--set`: inline `(u,v);...` when it looks like one, file
/// contents otherwise.
fn load_set(source: &str, k: CurveExponent) -> Result<ValidatedBaseSet, CliError> {
    let points = if source.trim_start().starts_with('(') {
        parse_inline_set(source)?
    } else {
        let text = fs::read_to_string(source)
            .map_err(|e| CliError::Io(format!("reading base set `{source}`: {e}")))?;
        parse_base_set_text(&text)?
    };
    ValidatedBaseSet::new(points, k).map_err(Into::into)
}

fn parse_inline_set(source: &str) -> Result<Vec<LatticePoint>, CliError> {
    let compact: String = source.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = |part: &str| {
        CliError::Usage(format!(
            "bad inline point `{part}`: expected (u,v) with integer coordinates"
        ))
    };
    compact
        .split(';')
        .filter(|part| !part.is_empty())
        .map(|part| {
            let inner = part
                .strip_prefix('(')
                .and_then(|p| p.strip_suffix(')'))
                .ok_or_else(|| bad(part))?;
            let (u, v) = inner.split_once(',').ok_or_else(|| bad(part))?;
            Ok(LatticePoint::new(
                u.parse().map_err(|_| bad(part))?,
                v.parse().map_err(|_| bad(part))?,
            ))
        })
        .collect()
}

fn cmd_validate(args: ValidateArgs) -> Result<String, CliError> {
    let k = exponent(args.k)?;
    let set = load_set(&args.set, k)?;
    let n = set.cardinality();
    let pairs = n * (n - 1) / 2;
    let mut out = String::new();
    out.push_str(&format!("points: {n}\n"));
    out.push_str(&format!(
        "pairwise: all {pairs} pairs k-visible for k = {}\n",
        k.get()
    ));
    out.push_str(&format!(
        "bound: N = {n} <= 2^(k+1) = {}\n",
        set.cardinality_bound()
    ));
    out.push_str("ok\n");
    Ok(out)
}

fn cmd_count(args: CountArgs) -> Result<String, CliError> {
    let k = exponent(args.k)?;
    let lvl = level(args.level)?;
    let set = load_set(&args.set, k)?;
    let engine: Engine = args.engine.parse()?;
    let result = match engine {
        Engine::Brute => count_brute(&set, args.x, lvl)?,
        Engine::Sieve => count_sieve(&set, args.x, lvl)?,
        Engine::Moebius => unreachable!("clap restricts --engine to brute|sieve"),
    };
    Ok(format!(
        "{}\n{}\n",
        CountResult::CSV_HEADER,
        result.csv_row()
    ))
}

fn cmd_density(args: DensityArgs) -> Result<String, CliError> {
    let k = exponent(args.k)?;
    let result = match args.level {
        1 => level1_density(args.n, k, args.tol)?,
        2 => level2_density(args.n, k, args.tol)?,
        l => {
            return Err(curvis::Error::UnsupportedLevel {
                what: "density formulas",
                level: l,
            }
            .into())
        }
    };
    Ok(format!(
        "{}\n{}\n",
        DensityResult::CSV_HEADER,
        result.csv_row()
    ))
}

fn table_base_set(which: u8, k: CurveExponent) -> Result<ValidatedBaseSet, CliError> {
    let coords: &[(i64, i64)] = match which {
        1 => &[(0, 0), (1, 1)],
        _ => &[(0, 0), (1, 2), (2, 1)],
    };
    let points = coords
        .iter()
        .map(|&(u, v)| LatticePoint::new(u, v))
        .collect();
    ValidatedBaseSet::new(points, k).map_err(Into::into)
}

fn cmd_table(args: TableArgs) -> Result<String, CliError> {
    let mut out = String::from("k,level,numerical,theoretical\n");
    for lvl in 1..=2u64 {
        let vis = level(lvl)?;
        for kk in 2..=9u32 {
            let k = exponent(kk)?;
            let set = table_base_set(args.which, k)?;
            let n = set.cardinality() as u64;
            let counted = count_sieve(&set, args.x, vis)?;
            let theory = match lvl {
                1 => level1_density(n, k, DEFAULT_TOLERANCE)?,
                _ => level2_density(n, k, DEFAULT_TOLERANCE)?,
            };
            out.push_str(&format!(
                "{},{},{:.8},{:.8}\n",
                kk,
                lvl,
                counted.empirical_density(),
                theory.value
            ));
        }
    }
    Ok(out)
}

fn cmd_error_report(args: ErrorReportArgs) -> Result<String, CliError> {
    let k = exponent(args.k)?;
    let lvl = level(args.level)?;
    let set = load_set(&args.set, k)?;
    let xs: Vec<u64> = args
        .xs
        .split(',')
        .map(|part| {
            part.trim()
                .parse::<u64>()
                .map_err(|_| CliError::Usage(format!("bad grid size `{part}` in --xs")))
        })
        .collect::<Result<_, _>>()?;
    let report: ErrorReport = empirical_error_report(&set, lvl, &xs)?;
    let mut out = String::from(ErrorReport::CSV_HEADER);
    out.push('\n');
    for row in &report.rows {
        out.push_str(&row.csv_row());
        out.push('\n');
    }
    Ok(out)
}
