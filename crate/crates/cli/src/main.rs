use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dment::io::{
    parse_axis, parse_env, parse_list, parse_measures, records, write_sidecar, write_sweep_csv,
    write_sweep_json, FormatError, Sidecar, SweepRecord,
};
use dment::repro::{self, ReproError, ReproOptions, Target};
use dment::scan::{
    crossings_in, detect_esd, run_sweep_with_jobs, swept_parameter, SweepPoint, SweepResult,
    SweepRow,
};
use dment::states::normalize_real;
use dment::{
    full_report, Axis, CouplingSite, DmCoupling, Measure, NegativityConvention, StateFamily,
    SweepGrid, C64,
};

#[derive(Parser)]
#[command(
    name = "dment",
    version,
    about = "Tripartite entanglement under Dzyaloshinskii-Moriya coupling"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve one initial state and print every measure.
    Measure(MeasureArgs),
    /// Evaluate measures over a parameter grid.
    Sweep(SweepArgs),
    /// Regenerate a named data set.
    Repro(ReproArgs),
    /// Print the tool version.
    Version,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    W,
    Ghz,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct Common {
    /// Environment amplitudes c0re,c0im,c1re,c1im.
    #[arg(long, default_value = "1,0,0,0", allow_hyphen_values = true)]
    env: String,
    /// Renormalize state and environment amplitudes instead of rejecting them.
    #[arg(long)]
    normalize: bool,
    /// doubled or raw.
    #[arg(long, default_value = "doubled")]
    negativity_convention: String,
    /// Pair of qubits carrying the coupling: ab or cd.
    #[arg(long, default_value = "ab")]
    coupling: String,
    #[arg(long, default_value_t = dment::scan::DEFAULT_ESD_TOLERANCE)]
    esd_tolerance: f64,
    #[arg(long, default_value_t = dment::scan::DEFAULT_CROSS_TOLERANCE)]
    cross_tolerance: f64,
    /// Recorded in manifests; every computation is deterministic.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Worker threads for grid evaluation.
    #[arg(long, env = "DMENT_JOBS")]
    jobs: Option<usize>,
}

#[derive(Args)]
struct MeasureArgs {
    #[arg(long, value_enum)]
    family: Family,
    /// W amplitudes w0,w1,w2.
    #[arg(long)]
    w: Option<String>,
    /// GHZ amplitudes g0,g1.
    #[arg(long, allow_hyphen_values = true)]
    g: Option<String>,
    #[arg(long, conflicts_with_all = ["dz", "t"])]
    theta: Option<f64>,
    #[arg(long, requires = "t")]
    dz: Option<f64>,
    #[arg(long, requires = "dz")]
    t: Option<f64>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, value_enum)]
    family: Family,
    #[arg(long, conflicts_with = "theta_range")]
    theta: Option<f64>,
    /// start:stop:step
    #[arg(long)]
    theta_range: Option<String>,
    /// start:stop:step
    #[arg(long)]
    w1_range: Option<String>,
    #[arg(long, conflicts_with = "w2_range")]
    w2: Option<f64>,
    /// start:stop:step
    #[arg(long)]
    w2_range: Option<String>,
    /// start:stop:step
    #[arg(long, allow_hyphen_values = true)]
    g0_range: Option<String>,
    /// Comma-separated measure names, or `all`.
    #[arg(long)]
    measures: Option<String>,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Also write sudden-death intervals and crossings as JSON.
    #[arg(long)]
    sidecar: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct ReproArgs {
    target: String,
    /// Output directory.
    #[arg(long, default_value = "repro")]
    out: PathBuf,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug)]
enum CliError {
    Validation(String),
    Output(String),
    Compute(dment::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Output(_) => 3,
            CliError::Compute(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Validation(m) | CliError::Output(m) => f.write_str(m),
            CliError::Compute(e) => write!(f, "{e}"),
        }
    }
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<dment::Error> for CliError {
    fn from(e: dment::Error) -> Self {
        match e {
            dment::Error::NoConvergence { .. } => CliError::Compute(e),
            other => CliError::Validation(other.to_string()),
        }
    }
}

impl From<ReproError> for CliError {
    fn from(e: ReproError) -> Self {
        match e {
            ReproError::UnknownTarget(_) => CliError::Validation(e.to_string()),
            ReproError::Compute(inner) => inner.into(),
            ReproError::Write { .. } => CliError::Output(e.to_string()),
        }
    }
}

fn invalid(field: &str, reason: impl std::fmt::Display) -> CliError {
    CliError::Validation(format!("{field}: {reason}"))
}

fn output_error(path: &Path, reason: impl std::fmt::Display) -> CliError {
    CliError::Output(format!("cannot write {}: {reason}", path.display()))
}

struct Settings {
    env: [C64; 2],
    normalize: bool,
    convention: NegativityConvention,
    site: CouplingSite,
}

impl Common {
    fn settings(&self) -> Result<Settings, CliError> {
        if self.esd_tolerance.is_nan() || self.esd_tolerance <= 0.0 {
            return Err(invalid("--esd-tolerance", "must be positive"));
        }
        if self.cross_tolerance.is_nan() || self.cross_tolerance <= 0.0 {
            return Err(invalid("--cross-tolerance", "must be positive"));
        }
        if self.jobs == Some(0) {
            return Err(invalid("--jobs", "must be at least 1"));
        }
        let mut env = parse_env("--env", &self.env)?;
        let norm = (env[0].norm_sqr() + env[1].norm_sqr()).sqrt();
        if self.normalize && norm > 0.0 {
            env = [env[0] / norm, env[1] / norm];
        }
        dment::env_qubit(env[0], env[1]).map_err(|e| invalid("--env", e))?;
        Ok(Settings {
            env,
            normalize: self.normalize,
            convention: self
                .negativity_convention
                .parse()
                .map_err(|e| invalid("--negativity-convention", e))?,
            site: self
                .coupling
                .parse()
                .map_err(|e| invalid("--coupling", e))?,
        })
    }
}

fn amplitudes(
    field: &str,
    text: Option<&str>,
    len: usize,
    normalize: bool,
) -> Result<Vec<f64>, CliError> {
    let text = text.ok_or_else(|| invalid(field, "required for this family"))?;
    let values = parse_list(field, text, len)?;
    if normalize {
        normalize_real(&values).map_err(|e| invalid(field, e))
    } else {
        Ok(values)
    }
}

fn cmd_measure(args: &MeasureArgs) -> Result<(), CliError> {
    let s = args.common.settings()?;
    let (state, w1, w2, g0) = match args.family {
        Family::W => {
            let w = amplitudes("--w", args.w.as_deref(), 3, s.normalize)?;
            let state = dment::w_state(w[0], w[1], w[2]).map_err(|e| invalid("--w", e))?;
            (state, Some(w[1]), Some(w[2]), None)
        }
        Family::Ghz => {
            let g = amplitudes("--g", args.g.as_deref(), 2, s.normalize)?;
            let state = dment::ghz_state(g[0], g[1]).map_err(|e| invalid("--g", e))?;
            (state, None, None, Some(g[0]))
        }
    };
    let coupling = match (args.theta, args.dz, args.t) {
        (Some(theta), None, None) => {
            DmCoupling::from_theta(theta).map_err(|e| invalid("--theta", e))?
        }
        (None, Some(dz), Some(t)) => DmCoupling::new(dz, t).map_err(|e| invalid("--dz/--t", e))?,
        _ => return Err(invalid("--theta", "give --theta or both --dz and --t")),
    }
    .with_site(s.site);
    let env = dment::env_qubit(s.env[0], s.env[1])?;
    let reduced = dment::reduced_dynamics(&state, &env, &coupling)?;
    let report = full_report(&reduced, true, None, s.convention)?;

    let row = SweepRow {
        point: SweepPoint {
            theta: coupling.theta(),
            w1,
            w2,
            g0,
        },
        report,
    };
    let record = SweepRecord::from_row(&row, &Measure::ALL.into_iter().collect());
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let written = match args.format {
        Format::Csv => write_sweep_csv(&mut out, &[record]),
        Format::Json => serde_json::to_writer_pretty(&mut out, &record)
            .map_err(FormatError::from)
            .and_then(|()| writeln!(out).map_err(FormatError::from)),
    };
    written.map_err(|e| CliError::Output(format!("standard output: {e}")))
}

fn optional_axis(field: &str, text: Option<&str>) -> Result<Option<Axis>, CliError> {
    text.map(|t| parse_axis(field, t))
        .transpose()
        .map_err(CliError::from)
}

fn sweep_grid(args: &SweepArgs, s: &Settings) -> Result<SweepGrid, CliError> {
    let theta = match (
        args.theta,
        optional_axis("--theta-range", args.theta_range.as_deref())?,
    ) {
        (Some(t), None) => Axis::fixed(t).map_err(|e| invalid("--theta", e))?,
        (None, Some(axis)) => axis,
        _ => return Err(invalid("--theta", "give --theta or --theta-range")),
    };
    let family = match args.family {
        Family::W => {
            let w1 = optional_axis("--w1-range", args.w1_range.as_deref())?
                .ok_or_else(|| invalid("--w1-range", "required for the w family"))?;
            let w2 = match (
                args.w2,
                optional_axis("--w2-range", args.w2_range.as_deref())?,
            ) {
                (Some(v), None) => Axis::fixed(v).map_err(|e| invalid("--w2", e))?,
                (None, Some(axis)) => axis,
                _ => return Err(invalid("--w2", "give --w2 or --w2-range")),
            };
            StateFamily::W { w1, w2 }
        }
        Family::Ghz => StateFamily::Ghz {
            g0: optional_axis("--g0-range", args.g0_range.as_deref())?
                .ok_or_else(|| invalid("--g0-range", "required for the ghz family"))?,
        },
    };
    let mut grid = SweepGrid::new(theta, family)
        .with_env(s.env[0], s.env[1])
        .with_convention(s.convention)
        .with_site(s.site);
    if let Some(list) = &args.measures {
        grid = grid.with_measures(parse_measures("--measures", list)?);
    }
    Ok(grid)
}

fn sidecar_for(result: &SweepResult, common: &Common) -> Result<Sidecar, CliError> {
    let mut intervals = Vec::new();
    match swept_parameter(&result.rows) {
        Ok(_) => {
            for &m in &result.measures {
                intervals.extend(detect_esd(result, m, common.esd_tolerance)?);
            }
        }
        Err(e) => eprintln!("warning: sudden-death intervals not computed: {e}"),
    }
    let crossings = crossings_in(result, common.cross_tolerance, common.esd_tolerance);
    Ok(Sidecar::new(intervals, crossings))
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| output_error(path, e))
}

fn cmd_sweep(args: &SweepArgs) -> Result<(), CliError> {
    let s = args.common.settings()?;
    let grid = sweep_grid(args, &s)?;
    let mut out: Box<dyn Write> = match &args.out {
        Some(path) => Box::new(create(path)?),
        None => Box::new(io::stdout().lock()),
    };
    let sidecar_out = args.sidecar.as_deref().map(create).transpose()?;

    let result = run_sweep_with_jobs(&grid, args.common.jobs)?;
    if result.skipped > 0 {
        eprintln!(
            "skipped {} grid points outside the unit disk",
            result.skipped
        );
    }
    let target = args.out.as_deref().unwrap_or(Path::new("<stdout>"));
    match args.format {
        Format::Csv => write_sweep_csv(&mut out, &records(&result)),
        Format::Json => write_sweep_json(&mut out, &result),
    }
    .and_then(|()| out.flush().map_err(FormatError::from))
    .map_err(|e| output_error(target, e))?;

    if let (Some(mut w), Some(path)) = (sidecar_out, args.sidecar.as_deref()) {
        let sidecar = sidecar_for(&result, &args.common)?;
        write_sidecar(&mut w, &sidecar)
            .and_then(|()| w.flush().map_err(FormatError::from))
            .map_err(|e| output_error(path, e))?;
    }
    Ok(())
}

fn cmd_repro(args: &ReproArgs) -> Result<(), CliError> {
    let target: Target = args.target.parse()?;
    let s = args.common.settings()?;
    let options = ReproOptions {
        convention: s.convention,
        site: s.site,
        env: s.env,
        esd_tolerance: args.common.esd_tolerance,
        cross_tolerance: args.common.cross_tolerance,
        seed: args.common.seed,
        jobs: args.common.jobs,
    };
    let manifest = repro::run(target, &args.out, &options)?;
    for file in manifest
        .files
        .iter()
        .map(String::as_str)
        .chain([repro::MANIFEST_FILE])
    {
        println!("{}", args.out.join(file).display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Measure(args) => cmd_measure(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Repro(args) => cmd_repro(args),
        Command::Version => {
            println!("dment {}", repro::TOOL_VERSION);
            Ok(())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
