//! Command implementations behind the `qcool` binary.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qcool::methods::{build_circuit, report, simulate_method, CoolingReport};
use qcool::synth::{export_qasm, gate_count, simplify};
use qcool::thermo::{reported_temperature, EnergyGap, Temperature};
use qcool::unitary::{dense_footprint, CoolingUnitary, CycleFile, ValuePrecision};
use qcool::{MethodConfig, NoiseModel, NoisePlacement, ProtocolKind};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Largest register `bench` will build.
pub const BENCH_MAX_N: usize = 24;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Core(#[from] qcool::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    /// 2 for usage and configuration problems, 3 for resource limits.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_resource_limit() => 3,
            _ => 2,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(
    name = "qcool",
    version,
    about = "Computational cooling of qubit registers"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the OpenQASM circuit for a method config
    Generate(GenerateArgs),
    /// Final temperature, work and gate count for one config
    Analyze(AnalyzeArgs),
    /// Noiseless results over a grid of temperatures and methods
    Sweep(SweepArgs),
    /// Simulated results over a grid of noise probabilities
    NoiseSweep(SweepArgs),
    /// Sparse storage size and compose time per register size
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Method config (JSON)
    #[arg(long)]
    pub config: PathBuf,
    /// Override the config's protocol: ppa, mirror or minimal_work
    #[arg(long, conflicts_with = "cycles")]
    pub protocol: Option<String>,
    /// Override the config's protocol with a custom cycle file (JSON)
    #[arg(long)]
    pub cycles: Option<PathBuf>,
    /// Output path; stdout when absent
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Drop adjacent cancelling gates
    #[arg(long)]
    pub simplify: bool,
    /// Initial temperature, needed when the circuit depends on it
    #[arg(long, requires = "freq_ghz")]
    pub temp_mk: Option<f64>,
    #[arg(long)]
    pub freq_ghz: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WorkUnit {
    /// Multiples of the qubit energy gap
    #[default]
    Gap,
    Joule,
}

impl WorkUnit {
    fn label(self) -> &'static str {
        match self {
            WorkUnit::Gap => "gap",
            WorkUnit::Joule => "joule",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Placement {
    #[default]
    PerGate,
    PerLayer,
}

impl From<Placement> for NoisePlacement {
    fn from(p: Placement) -> Self {
        match p {
            Placement::PerGate => NoisePlacement::PerGate,
            Placement::PerLayer => NoisePlacement::PerLayer,
        }
    }
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// Initial temperature in millikelvin
    #[arg(long)]
    pub temp_mk: f64,
    /// Qubit frequency in GHz
    #[arg(long)]
    pub freq_ghz: f64,
    /// Depolarizing probability; nonzero values simulate the circuit
    #[arg(long, default_value_t = 0.0)]
    pub noise: f64,
    #[arg(long, value_enum, default_value_t)]
    pub placement: Placement,
    #[arg(long, conflicts_with = "csv")]
    pub json: bool,
    #[arg(long)]
    pub csv: bool,
    #[arg(long, value_enum, default_value_t)]
    pub work_unit: WorkUnit,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Grid file (JSON)
    #[arg(long)]
    pub grid: PathBuf,
    /// Worker threads; 0 uses all cores
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    #[arg(long, value_enum, default_value_t)]
    pub placement: Placement,
    #[arg(long, value_enum, default_value_t)]
    pub work_unit: WorkUnit,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, default_value_t = 18)]
    pub max_n: usize,
    #[arg(long, default_value_t = 8)]
    pub min_n: usize,
    #[arg(long, default_value_t = 2)]
    pub step: usize,
    /// Seed for the random test permutations
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Also time dense matrix products up to this size
    #[arg(long, default_value_t = 0)]
    pub dense_max_n: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Sweep grid file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepGrid {
    pub temperatures_mk: Vec<f64>,
    #[serde(default)]
    pub noise_probs: Vec<f64>,
    pub methods: Vec<MethodConfig>,
    pub frequency_ghz: f64,
}

impl SweepGrid {
    pub fn from_json(text: &str) -> CliResult<Self> {
        let grid: SweepGrid =
            serde_json::from_str(text).map_err(|e| CliError::Usage(format!("grid: {e}")))?;
        if grid.temperatures_mk.is_empty() || grid.methods.is_empty() {
            return Err(CliError::Usage(
                "grid needs at least one temperature and one method".into(),
            ));
        }
        if !(grid.frequency_ghz > 0.0 && grid.frequency_ghz.is_finite()) {
            return Err(CliError::Usage("frequency_ghz must be positive".into()));
        }
        for m in &grid.methods {
            m.validate()?;
        }
        Ok(grid)
    }
}

/// One output row. `final_t_mk` is empty (CSV) or null (JSON) when the final
/// population is at least 1/2, i.e. the temperature is infinite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub method: String,
    pub n_qubits: usize,
    pub initial_t_mk: f64,
    pub noise_p: f64,
    pub final_t_mk: Option<f64>,
    pub final_p1: f64,
    pub work: f64,
    pub work_unit: String,
    pub gate_count: usize,
}

pub const RESULT_COLUMNS: [&str; 9] = [
    "method",
    "n_qubits",
    "initial_t_mk",
    "noise_p",
    "final_t_mk",
    "final_p1",
    "work",
    "work_unit",
    "gate_count",
];

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn output(path: Option<&Path>) -> CliResult<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(fs::File::create(p).map_err(|source| CliError::Io {
            path: p.to_owned(),
            source,
        })?),
        None => Box::new(std::io::stdout().lock()),
    })
}

fn io_err(path: Option<&Path>) -> impl Fn(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path
            .map(Path::to_owned)
            .unwrap_or_else(|| "<stdout>".into()),
        source,
    }
}

fn load_config(path: &Path) -> CliResult<MethodConfig> {
    let text = read(path)?;
    MethodConfig::from_json(&text).map_err(|e| match e {
        qcool::Error::InvalidConfig(msg) => CliError::Usage(format!("{}: {msg}", path.display())),
        other => other.into(),
    })
}

fn gap(freq_ghz: f64) -> CliResult<EnergyGap> {
    EnergyGap::from_ghz(freq_ghz).map_err(|_| {
        CliError::Usage(format!(
            "frequency must be positive and finite, got {freq_ghz}"
        ))
    })
}

fn temperature(mk: f64) -> CliResult<Temperature> {
    match Temperature::from_millikelvin(mk) {
        Ok(t) if mk > 0.0 && mk.is_finite() => Ok(t),
        _ => Err(CliError::Usage(format!(
            "temperature must be positive and finite, got {mk} mK"
        ))),
    }
}

pub fn generate(args: &GenerateArgs) -> CliResult<()> {
    let mut config = load_config(&args.config)?;
    if let Some(name) = &args.protocol {
        let kind = ProtocolKind::from_name(name).map_err(|e| CliError::Usage(e.to_string()))?;
        config = config.with_protocol(kind);
    }
    if let Some(path) = &args.cycles {
        let file = CycleFile::from_json(&read(path)?)
            .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        config = config.with_protocol(ProtocolKind::Custom(file));
    }
    config.validate()?;
    let p = match (args.temp_mk, args.freq_ghz) {
        (Some(t), Some(f)) => qcool::probability_from_temperature(temperature(t)?, gap(f)?),
        _ if config.needs_temperature() => {
            return Err(CliError::Usage(format!(
                "{} depends on the initial temperature; pass --temp-mk and --freq-ghz",
                config.label()
            )))
        }
        // any population works when the circuit does not depend on it
        _ => qcool::ExcitationProbability::new(0.1)?,
    };
    let built = build_circuit(&config, p)?;
    let circuit = if args.simplify {
        simplify(&built.circuit)
    } else {
        built.circuit
    };
    let mut out = output(args.out.as_deref())?;
    out.write_all(export_qasm(&circuit).as_bytes())
        .map_err(io_err(args.out.as_deref()))?;
    eprintln!("{}: {}", config.label(), gate_count(&circuit));
    Ok(())
}

fn row_from_report(
    r: &CoolingReport,
    initial_mk: f64,
    noise: f64,
    final_p1: f64,
    gap: EnergyGap,
    unit: WorkUnit,
) -> CliResult<ResultRow> {
    let final_t = reported_temperature(qcool::ExcitationProbability::new(final_p1)?, gap);
    let work = match unit {
        WorkUnit::Gap => r.work,
        WorkUnit::Joule => r.work_joules.unwrap_or(r.work * gap.value()),
    };
    Ok(ResultRow {
        method: r.method.clone(),
        n_qubits: r.total_qubits,
        initial_t_mk: initial_mk,
        noise_p: noise,
        final_t_mk: (!final_t.is_infinite()).then(|| final_t.millikelvin()),
        final_p1,
        work,
        work_unit: unit.label().into(),
        gate_count: r.gate_counts.total,
    })
}

/// Result row for one grid point: analytic when `noise` is `None` or zero,
/// otherwise from simulating the circuit.
pub fn evaluate(
    config: &MethodConfig,
    temp_mk: f64,
    freq_ghz: f64,
    noise: Option<(f64, Placement)>,
    unit: WorkUnit,
) -> CliResult<ResultRow> {
    let g = gap(freq_ghz)?;
    let r = report(config, temperature(temp_mk)?, g)?;
    let (noise_p, final_p1) = match noise {
        // zero noise is the analytic value, so noise sweeps line up with sweeps
        Some((p, placement)) if p != 0.0 => {
            let model =
                NoiseModel::new(p, placement.into()).map_err(|e| CliError::Usage(e.to_string()))?;
            let p0 = qcool::ExcitationProbability::new(r.initial_p1)?;
            (p, simulate_method(config, p0, model)?.value())
        }
        _ => (0.0, r.final_p1),
    };
    for w in &r.warnings {
        eprintln!("warning: {}: {w}", r.method);
    }
    row_from_report(&r, temp_mk, noise_p, final_p1, g, unit)
}

pub fn write_rows(rows: &[ResultRow], out: Box<dyn Write>) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(out);
    if rows.is_empty() {
        w.write_record(RESULT_COLUMNS)?;
    }
    for row in rows {
        w.serialize(row)?;
    }
    w.flush().map_err(|source| CliError::Io {
        path: "<output>".into(),
        source,
    })?;
    Ok(())
}

pub fn analyze(args: &AnalyzeArgs) -> CliResult<()> {
    let config = load_config(&args.config)?;
    let noise = (args.noise != 0.0).then_some((args.noise, args.placement));
    let row = evaluate(&config, args.temp_mk, args.freq_ghz, noise, args.work_unit)?;
    let mut out = output(args.out.as_deref())?;
    if args.csv {
        write_rows(std::slice::from_ref(&row), out)
    } else {
        // JSON is the default
        let text = serde_json::to_string_pretty(&row).expect("row serializes");
        writeln!(out, "{text}").map_err(io_err(args.out.as_deref()))
    }
}

fn run_grid<T, F>(points: Vec<T>, jobs: usize, f: F) -> CliResult<Vec<ResultRow>>
where
    T: Send + Sync,
    F: Fn(&T) -> CliResult<ResultRow> + Send + Sync,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Usage(format!("worker pool: {e}")))?;
    // par_iter().collect keeps input order
    pool.install(|| points.par_iter().map(&f).collect())
}

/// Rows for methods × temperatures, noiseless, in that nesting order.
pub fn sweep_rows(grid: &SweepGrid, jobs: usize, unit: WorkUnit) -> CliResult<Vec<ResultRow>> {
    let points: Vec<(&MethodConfig, f64)> = grid
        .methods
        .iter()
        .flat_map(|m| grid.temperatures_mk.iter().map(move |&t| (m, t)))
        .collect();
    run_grid(points, jobs, |&(m, t)| {
        evaluate(m, t, grid.frequency_ghz, None, unit)
    })
}

/// Rows for methods × temperatures × noise values, each simulated.
pub fn noise_sweep_rows(
    grid: &SweepGrid,
    jobs: usize,
    placement: Placement,
    unit: WorkUnit,
) -> CliResult<Vec<ResultRow>> {
    if grid.noise_probs.is_empty() {
        return Err(CliError::Usage("noise sweep needs noise_probs".into()));
    }
    if let Some(p) = grid.noise_probs.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(CliError::Usage(format!(
            "noise probability {p} outside [0, 1]"
        )));
    }
    let points: Vec<(&MethodConfig, f64, f64)> = grid
        .methods
        .iter()
        .flat_map(|m| {
            grid.temperatures_mk
                .iter()
                .flat_map(move |&t| grid.noise_probs.iter().map(move |&p| (m, t, p)))
        })
        .collect();
    run_grid(points, jobs, |&(m, t, p)| {
        evaluate(m, t, grid.frequency_ghz, Some((p, placement)), unit)
    })
}

pub fn sweep(args: &SweepArgs, noisy: bool) -> CliResult<()> {
    let grid = SweepGrid::from_json(&read(&args.grid)?)?;
    let rows = if noisy {
        noise_sweep_rows(&grid, args.jobs, args.placement, args.work_unit)?
    } else {
        sweep_rows(&grid, args.jobs, args.work_unit)?
    };
    write_rows(&rows, output(args.out.as_deref())?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub n: usize,
    pub sparse_bytes: usize,
    pub dense_bytes: u64,
    pub compose_seconds: f64,
    /// Empty above `--dense-max-n`.
    pub dense_compose_seconds: Option<f64>,
}

fn random_unitary(rng: &mut ChaCha8Rng, n: usize) -> CliResult<CoolingUnitary> {
    let mut map: Vec<usize> = (0..1usize << n).collect();
    map.shuffle(rng);
    Ok(CoolingUnitary::from_mapping(&map, n)?.with_precision(ValuePrecision::Real32)?)
}

pub fn bench_rows(args: &BenchArgs) -> CliResult<Vec<BenchRow>> {
    if args.max_n > BENCH_MAX_N {
        return Err(qcool::Error::ResourceLimit {
            what: "bench register",
            requested: args.max_n,
            cap: BENCH_MAX_N,
        }
        .into());
    }
    if args.min_n == 0 || args.min_n > args.max_n || args.step == 0 {
        return Err(CliError::Usage(
            "need 1 <= min-n <= max-n and step >= 1".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut rows = Vec::new();
    for n in (args.min_n..=args.max_n).step_by(args.step) {
        let a = random_unitary(&mut rng, n)?;
        let b = random_unitary(&mut rng, n)?;
        let start = Instant::now();
        let ab = a.compose(&b)?;
        let compose_seconds = start.elapsed().as_secs_f64();
        std::hint::black_box(&ab);
        let dense_compose_seconds = if n <= args.dense_max_n {
            let (da, db) = (a.to_dense()?, b.to_dense()?);
            let start = Instant::now();
            std::hint::black_box(da.matmul(&db));
            Some(start.elapsed().as_secs_f64())
        } else {
            None
        };
        rows.push(BenchRow {
            n,
            sparse_bytes: a.memory_footprint(),
            dense_bytes: dense_footprint(n),
            compose_seconds,
            dense_compose_seconds,
        });
    }
    Ok(rows)
}

pub fn bench(args: &BenchArgs) -> CliResult<()> {
    let rows = bench_rows(args)?;
    let mut w = csv::Writer::from_writer(output(args.out.as_deref())?);
    for row in &rows {
        w.serialize(row)?;
    }
    w.flush().map_err(io_err(args.out.as_deref()))?;
    Ok(())
}

pub fn run(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Generate(a) => generate(a),
        Command::Analyze(a) => analyze(a),
        Command::Sweep(a) => sweep(a, false),
        Command::NoiseSweep(a) => sweep(a, true),
        Command::Bench(a) => bench(a),
    }
}
