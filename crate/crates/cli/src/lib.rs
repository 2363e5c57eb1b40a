//! Command-line front end for `fmd-core`.
//!
//! Three subcommands: `decompose` runs a filter mode decomposition on a CSV
//! or PGM file and writes the components, an energy table and a JSON report;
//! `spiral` exports a spiral of Theodorus as CSV and SVG; `probe` measures
//! additivity, homogeneity or circular-shift invariance of a decomposition.

pub mod fixtures;
pub mod io;
pub mod report;
pub mod spiral_export;

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fmd_core::epcheck::PROBE_TOL;
use fmd_core::signal::DEFAULT_ORTHO_TOL;
use fmd_core::{Algorithm, FilterSpec, Shape, Signal};

use crate::fixtures::Fixture;
use crate::io::{Format, DISPLAY_MAXVAL};
use crate::report::*;

#[derive(Debug)]
pub enum CliError {
    /// Flags that cannot be combined or are out of range.
    Usage(String),
    /// Rejected by the library (bad schedule, shape, parameter).
    Invalid(fmd_core::Error),
    /// Input file that does not parse.
    Parse { path: PathBuf, msg: String },
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io { path: path.to_path_buf(), source }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } => 1,
            _ => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::Invalid(e) => write!(f, "{e}"),
            CliError::Parse { path, msg } => write!(f, "{}: {msg}", path.display()),
            CliError::Io { path, source } => write!(f, "{}: {source}", path.display()),
        }
    }
}

impl std::error::Error for CliError {}

impl From<fmd_core::Error> for CliError {
    fn from(e: fmd_core::Error) -> Self {
        CliError::Invalid(e)
    }
}

#[derive(Debug, Parser)]
#[command(name = "fmd", version, about = "Filter mode decomposition toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decompose a signal or image into components.
    Decompose(DecomposeArgs),
    /// Export a discrete spiral of Theodorus.
    Spiral(SpiralArgs),
    /// Probe a decomposition for linearity or shift invariance.
    Probe(ProbeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FilterKind {
    Gaussian,
    Ideal,
    Movavg,
}

#[derive(Debug, Args)]
pub struct FilterArgs {
    #[arg(long, value_enum)]
    pub filter: FilterKind,
    /// First Gaussian sigma in DFT bins, halved each stage [default: N/8].
    #[arg(long)]
    pub sigma0: Option<f64>,
    /// Ideal low-pass cutoffs in cycles per sample, one per stage.
    #[arg(long, value_delimiter = ',')]
    pub cutoffs: Option<Vec<f64>>,
    /// Odd moving-average windows, one per stage.
    #[arg(long, value_delimiter = ',')]
    pub windows: Option<Vec<usize>>,
}

impl FilterArgs {
    pub fn build(&self, stages: usize, shape: Shape) -> Result<FilterSpec, CliError> {
        let stray = |flag: &str| {
            CliError::Usage(format!("{flag} does not apply to --filter {}", self.kind_flag()))
        };
        let spec = match self.filter {
            FilterKind::Gaussian => {
                if self.cutoffs.is_some() {
                    return Err(stray("--cutoffs"));
                }
                if self.windows.is_some() {
                    return Err(stray("--windows"));
                }
                match self.sigma0 {
                    Some(s) => FilterSpec::gaussian_halving(s, stages),
                    None => FilterSpec::default_gaussian(shape, stages),
                }
            }
            FilterKind::Ideal => {
                if self.sigma0.is_some() {
                    return Err(stray("--sigma0"));
                }
                if self.windows.is_some() {
                    return Err(stray("--windows"));
                }
                match &self.cutoffs {
                    Some(c) => FilterSpec::IdealLowpass { cutoffs: c.clone() },
                    None => FilterSpec::default_ideal(stages),
                }
            }
            FilterKind::Movavg => {
                if self.sigma0.is_some() {
                    return Err(stray("--sigma0"));
                }
                if self.cutoffs.is_some() {
                    return Err(stray("--cutoffs"));
                }
                match &self.windows {
                    Some(w) => FilterSpec::MovingAverage { windows: w.clone() },
                    None => FilterSpec::default_moving_average(stages),
                }
            }
        };
        spec.validate(stages, shape)?;
        Ok(spec)
    }

    fn kind_flag(&self) -> &'static str {
        match self.filter {
            FilterKind::Gaussian => "gaussian",
            FilterKind::Ideal => "ideal",
            FilterKind::Movavg => "movavg",
        }
    }
}

fn filter_info(spec: &FilterSpec) -> FilterInfo {
    FilterInfo {
        kind: spec.kind_name(),
        schedule: spec.schedule(),
    }
}

#[derive(Debug, Args)]
pub struct DecomposeArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub format: Format,
    /// 1 = plain, 2 = LINOEP residue side, 3 = LINOEP filter side.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
    pub algorithm: u8,
    #[command(flatten)]
    pub filter: FilterArgs,
    #[arg(long)]
    pub stages: usize,
    #[arg(long)]
    pub out: PathBuf,
    /// Report path [default: OUT/report.json].
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Record wall-clock timings in the report.
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SteeringRule {
    /// Rotate in the plane of the previous step.
    Previous,
    /// Random direction from `--seed`.
    Random,
}

#[derive(Debug, Args)]
pub struct SpiralArgs {
    #[arg(long)]
    pub dims: usize,
    #[arg(long)]
    pub steps: usize,
    /// Tilt in degrees for `--dims 3`.
    #[arg(long, default_value_t = -0.25, allow_negative_numbers = true)]
    pub tilt: f64,
    /// Steps that stay planar before the tilt starts, for `--dims 3`.
    #[arg(long, default_value_t = fmd_core::spiral::DEFAULT_TILT_STEP)]
    pub tilt_step: usize,
    /// Steering rule for `--dims` above 3.
    #[arg(long, value_enum, default_value_t = SteeringRule::Previous)]
    pub steering: SteeringRule,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub svg: Option<PathBuf>,
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SystemKind {
    Alg1,
    Alg2,
    Alg3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PropertyKind {
    Additivity,
    Homogeneity,
    Shift,
}

#[derive(Debug, Args)]
pub struct ProbeArgs {
    #[arg(long, value_enum)]
    pub system: SystemKind,
    #[command(flatten)]
    pub filter: FilterArgs,
    #[arg(long, default_value_t = 6)]
    pub stages: usize,
    #[arg(long, value_enum)]
    pub property: PropertyKind,
    #[arg(long, value_enum)]
    pub fixture: Fixture,
    /// Seed for the random fixture (ChaCha8).
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1024)]
    pub length: usize,
    /// Scale factor for the homogeneity probe.
    #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
    pub scale: f64,
    /// Circular shift in samples for the shift probe.
    #[arg(long, default_value_t = 17, allow_negative_numbers = true)]
    pub shift: i64,
    #[arg(long, default_value_t = PROBE_TOL)]
    pub tol: f64,
}

pub fn run(cli: Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Decompose(args) => decompose(&args, stdout),
        Command::Spiral(args) => spiral_export::run(&args, stdout),
        Command::Probe(args) => probe(&args, stdout),
    }
}

fn ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

fn stdout_io(e: std::io::Error) -> CliError {
    CliError::io(Path::new("<stdout>"), e)
}

fn decompose(args: &DecomposeArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let algorithm = Algorithm::from_number(args.algorithm)
        .ok_or_else(|| CliError::Usage(format!("unknown algorithm {}", args.algorithm)))?;

    let t0 = Instant::now();
    let x = io::read_signal(&args.input, args.format)?;
    let read_ms = ms(t0);

    let spec = args.filter.build(args.stages, x.shape())?;

    let t1 = Instant::now();
    let res = fmd_core::decompose(&x, &spec, algorithm)?;
    let decompose_ms = ms(t1);

    let t2 = Instant::now();
    let verdict = fmd_core::verify_sequence(&res.components, DEFAULT_ORTHO_TOL)?;
    let verify_ms = ms(t2);

    let t3 = Instant::now();
    std::fs::create_dir_all(&args.out).map_err(|e| CliError::io(&args.out, e))?;
    let width = res.components.len().to_string().len().max(2);
    let mut components = Vec::with_capacity(res.components.len());
    for (i, c) in res.components.iter().enumerate() {
        let stem = format!("component_{:0width$}", i + 1);
        let (name, format) = match x.shape() {
            Shape::D1(_) => (format!("{stem}.csv"), Format::Csv1d),
            Shape::D2 { .. } => (format!("{stem}.pgm"), Format::Pgm),
        };
        let written = io::write_signal(c, &args.out.join(&name), format)?;
        components.push(ComponentInfo {
            index: i + 1,
            file: file_name(&written.exact),
            display: written.display.map(|(path, map)| DisplayInfo {
                file: file_name(&path),
                maxval: DISPLAY_MAXVAL,
                offset: map.offset,
                scale: map.scale,
            }),
            energy: res.ledger.component_energies[i],
            alpha: res.alphas.get(i).copied(),
        });
    }

    let table_name = "energy_table.csv";
    io::write_file(
        &args.out.join(table_name),
        energy_table(res.ledger.total_energy, &res.ledger.component_energies),
    )?;
    let write_ms = ms(t3);

    let report = RunReport {
        schema: SCHEMA,
        input: InputInfo {
            path: args.input.display().to_string(),
            format: args.format.name(),
            shape: x.shape().dims(),
            energy: res.ledger.total_energy,
        },
        algorithm: AlgorithmInfo {
            number: algorithm.number(),
            name: algorithm.name(),
        },
        filter: filter_info(&spec),
        stages_requested: res.stages_requested,
        stages_run: res.stages_run,
        components,
        energy_table: table_name.to_string(),
        total_energy: res.ledger.total_energy,
        sum_component_energy: res.ledger.component_sum(),
        pee_percent: res.ledger.pee_percent,
        orthogonality: OrthogonalitySummary {
            max_telescoping_residual: verdict.max_residual(),
            max_pairwise_off_diagonal: verdict.max_pairwise,
        },
        verdict: VerdictInfo {
            tolerance: DEFAULT_ORTHO_TOL,
            is_energy_preserving: verdict.is_energy_preserving,
            classification: verdict.classification.name(),
            energy_identity_gap: verdict.energy_identity_gap,
            per_index_residuals: verdict.per_index_residuals.clone(),
        },
        gram: res.gram.iter().map(|row| row.iter().map(|z| z.re).collect()).collect(),
        warnings: res.warnings.clone(),
        timing_ms: args.timing.then_some(Timing {
            read: read_ms,
            decompose: decompose_ms,
            verify: verify_ms,
            write: write_ms,
        }),
    };
    let report_path = args.report.clone().unwrap_or_else(|| args.out.join("report.json"));
    let mut json = serde_json::to_string_pretty(&report).expect("report serializes");
    json.push('\n');
    io::write_file(&report_path, json)?;

    for w in &res.warnings {
        eprintln!("warning: {w}");
    }
    writeln!(
        stdout,
        "{} components, pee = {:e} %, {}; report at {}",
        res.components.len(),
        res.ledger.pee_percent,
        verdict.classification.name(),
        report_path.display()
    )
    .map_err(stdout_io)
}

fn file_name(path: &Path) -> String {
    path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default()
}

fn probe(args: &ProbeArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    if args.length == 0 {
        return Err(CliError::Usage("--length must be positive".into()));
    }
    let algorithm = match args.system {
        SystemKind::Alg1 => Algorithm::Plain,
        SystemKind::Alg2 => Algorithm::LinoepResidueSide,
        SystemKind::Alg3 => Algorithm::LinoepFilterSide,
    };
    let shape = Shape::D1(args.length);
    let spec = args.filter.build(args.stages, shape)?;
    let (v1, v2) = fixtures::generate(args.fixture, args.length, args.seed);
    let x1 = Signal::real_1d(&v1)?;
    let x2 = Signal::real_1d(&v2)?;
    let system = fmd_core::fmd_system(spec.clone(), algorithm);
    let name = format!("alg{}", algorithm.number());

    let (report, parameter) = match args.property {
        PropertyKind::Additivity => {
            (fmd_core::probe_additivity(&name, &system, &x1, &x2, args.tol)?, None)
        }
        PropertyKind::Homogeneity => {
            let x = x1.add(&x2)?;
            let r = fmd_core::probe_homogeneity(&name, &system, &x, args.scale, args.tol)?;
            (r, Some(args.scale))
        }
        PropertyKind::Shift => {
            let x = x1.add(&x2)?;
            let r = fmd_core::probe_time_invariance(&name, &system, &x, args.shift, args.tol)?;
            (r, Some(args.shift as f64))
        }
    };

    let out = ProbeOutput {
        schema: SCHEMA,
        property: report.property.name(),
        system: report.system_name.clone(),
        filter: filter_info(&spec),
        fixture: FixtureInfo {
            name: args.fixture.name(),
            length: args.length,
            seed: (args.fixture == Fixture::Random).then_some(args.seed),
        },
        parameter,
        shift_convention: "circular",
        max_violation: report.max_violation,
        worst_component: report.worst_component.map(|i| i + 1),
        tolerance: report.tolerance,
        passed: report.passed,
        witness: report.witness.iter().map(Signal::real_parts).collect(),
    };
    let json = serde_json::to_string_pretty(&out).expect("probe output serializes");
    writeln!(stdout, "{json}").map_err(stdout_io)
}
