use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use mp2e::numerics::DEFAULT_ORDER;
use mp2e::pair::{Convention, SectorPair};
use mp2e::sweep::{parse_assignment, run_sweep, Axis, Family, Method, SweepSpec};
use mp2e::verify::{verify_all, DEFAULT_TOLERANCE};

const OUT_DIR_VAR: &str = "MP2E_OUT_DIR";

#[derive(Parser)]
#[command(name = "mp2e", version, about = "Mp(2)-projected entanglement probabilities: grids and verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Circle states
    Circle(SweepArgs),
    /// Cylinder states
    Cylinder(SweepArgs),
    /// Coset circle states
    Coset(SweepArgs),
    /// Schrodinger-cat states
    Cat(SweepArgs),
    /// Run every closed-form and limit comparison
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum PairArg {
    Pp,
    Pm,
    Mm,
    Total,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConventionArg {
    Stripped,
    Full,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Series,
    ClosedForm,
    Both,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, value_enum, default_value = "pp")]
    pair: PairArg,
    /// name:min:max:steps; angles accept a pi suffix (0.5pi)
    #[arg(long)]
    axis1: Option<String>,
    #[arg(long)]
    axis2: Option<String>,
    /// name=value, repeatable
    #[arg(long = "set")]
    set: Vec<String>,
    #[arg(long, default_value_t = DEFAULT_ORDER)]
    trunc: usize,
    #[arg(long, value_enum, default_value = "stripped")]
    convention: ConventionArg,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[arg(long, value_enum, default_value = "series")]
    method: MethodArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    tol: f64,
    #[arg(long, default_value_t = DEFAULT_ORDER)]
    trunc: usize,
    /// JSON report path
    #[arg(long)]
    report: Option<PathBuf>,
}

enum Failure {
    Invalid(String),
    Verification,
    Io(String),
}

impl From<mp2e::Error> for Failure {
    fn from(e: mp2e::Error) -> Self {
        Failure::Invalid(e.to_string())
    }
}

fn build_spec(family: Family, a: &SweepArgs) -> Result<SweepSpec, Failure> {
    let pair = match a.pair {
        PairArg::Pp => SectorPair::PP,
        PairArg::Pm => SectorPair::PM,
        PairArg::Mm => SectorPair::MM,
        PairArg::Total => SectorPair::Total,
    };
    let mut spec = SweepSpec::new(family, pair);
    match (&a.axis1, &a.axis2) {
        (Some(x), y) => {
            spec.axis1 = x.parse::<Axis>()?;
            spec.axis2 = y.as_deref().map(str::parse::<Axis>).transpose()?;
        }
        (None, Some(_)) => return Err(Failure::Invalid("--axis2 requires --axis1".into())),
        (None, None) => {}
    }
    for s in &a.set {
        let (k, v) = parse_assignment(s)?;
        if spec.fixed.insert(k.clone(), v).is_some() {
            return Err(Failure::Invalid(format!("parameter '{k}' set twice")));
        }
    }
    spec.truncation = a.trunc;
    spec.convention = match a.convention {
        ConventionArg::Stripped => Convention::Stripped,
        ConventionArg::Full => Convention::Full,
    };
    spec.method = match a.method {
        MethodArg::Series => Method::Series,
        MethodArg::ClosedForm => Method::ClosedForm,
        MethodArg::Both => Method::Both,
    };
    Ok(spec)
}

fn default_path(stem: &str, ext: &str) -> Option<PathBuf> {
    std::env::var_os(OUT_DIR_VAR).map(|d| Path::new(&d).join(format!("{stem}.{ext}")))
}

fn write_with_sidecar(path: &Path, data: &str) -> Result<(), Failure> {
    let io = |e: std::io::Error| Failure::Io(format!("{}: {e}", path.display()));
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(io)?;
    }
    std::fs::write(path, data).map_err(io)?;
    let stamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let meta = serde_json::json!({
        "generated_unix_seconds": stamp,
        "args": std::env::args().skip(1).collect::<Vec<_>>(),
        "tool_version": env!("CARGO_PKG_VERSION"),
    });
    let mut side = path.as_os_str().to_owned();
    side.push(".meta.json");
    std::fs::write(PathBuf::from(side), serde_json::to_string_pretty(&meta).expect("meta serializes") + "\n").map_err(io)
}

fn sweep(family: Family, a: &SweepArgs) -> Result<(), Failure> {
    let spec = build_spec(family, a)?;
    let grid = run_sweep(&spec)?;
    let (data, ext) = match a.format {
        Format::Csv => (grid.to_csv(), "csv"),
        Format::Json => (grid.to_json(), "json"),
    };
    let stem = format!("{}_{}", family.name(), spec.pair);
    match a.out.clone().or_else(|| default_path(&stem, ext)) {
        Some(p) => write_with_sidecar(&p, &data),
        None => {
            print!("{data}");
            Ok(())
        }
    }
}

fn verify(a: &VerifyArgs) -> Result<(), Failure> {
    let report = verify_all(a.tol, a.trunc)?;
    for c in &report.comparisons {
        let status = serde_json::to_value(c.status).expect("status serializes");
        println!(
            "{:<22} {:<5} {:<42} max_dev={:.3e}",
            status.as_str().unwrap_or_default(),
            if c.must_match { "MUST" } else { "info" },
            c.id,
            c.max_deviation
        );
    }
    println!(
        "{} comparisons, {} must-match failures",
        report.comparisons.len(),
        report.must_match_failures
    );
    if let Some(p) = a.report.clone().or_else(|| default_path("verify_report", "json")) {
        write_with_sidecar(&p, &report.to_json())?;
    }
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Circle(a) => sweep(Family::Circle, a),
        Command::Cylinder(a) => sweep(Family::Cylinder, a),
        Command::Coset(a) => sweep(Family::Coset, a),
        Command::Cat(a) => sweep(Family::Cat, a),
        Command::Verify(a) => verify(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Verification) => {
            eprintln!("verification failed");
            ExitCode::from(3)
        }
        Err(Failure::Io(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
