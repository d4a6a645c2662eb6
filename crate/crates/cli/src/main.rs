//! `locent`: construct states, localize entanglement and run bound sweeps.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use locent::harness::{
    check_propositions, figure_data, import, run_sweep, sink_for, OutputFormat, SweepConfig, SweepSummary,
};
use locent::io::{read_state, state_to_json};
use locent::localization::{localize, pauli_le, total_rle, LeTarget, OptimizerConfig, QuantumState};
use locent::noise::PhaseFlipChannel;
use locent::oracles::{
    dicke_values, gghz_values, gw_values, noisy_gghz_values, noisy_w_values, wclass3_values, ClosedForm,
};
use locent::states::{Family, FamilySpec};
use locent::{Error, C64};

const EXIT_USAGE: u8 = 1;
const EXIT_NUMERICAL: u8 = 2;
const EXIT_IO: u8 = 3;

#[derive(Parser)]
#[command(name = "locent", version, about = "Localizable entanglement toolkit")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct Global {
    /// Master seed for sampling and optimizer restarts.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Number of samples in a sweep.
    #[arg(long, global = true)]
    samples: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output file or, for `figure`, output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Record format.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Restrict measurements to Pauli bases.
    #[arg(long, global = true)]
    pauli_only: bool,
    /// Random optimizer starts on top of the warm starts.
    #[arg(long, global = true)]
    restarts: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Jsonl,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Csv => OutputFormat::Csv,
            Format::Jsonl => OutputFormat::Jsonl,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Construct a state and dump it as JSON.
    State(StateArgs),
    /// Block or pair localizable entanglement of a stored state.
    Le(LeArgs),
    /// Closed-form values for the standard families.
    Oracle(OracleArgs),
    /// Apply a phase-flip channel to a stored state.
    Noise(NoiseArgs),
    /// Run a sweep campaign.
    Sweep(SweepArgs),
    /// Check stored records against the bound propositions.
    Bounds(BoundsArgs),
    /// Run the campaigns behind a figure preset.
    Figure(FigureArgs),
}

#[derive(Args)]
struct FamilyArgs {
    /// State family, e.g. dicke, gw, haar, magnetization_sector.
    #[arg(long)]
    family: Family,
    /// Number of qubits.
    #[arg(long)]
    qubits: usize,
    /// Family parameter `n`.
    #[arg(long)]
    n: Option<usize>,
    /// Coefficients as a JSON array of `[re, im]` pairs.
    #[arg(long)]
    coeffs: Option<String>,
}

impl FamilyArgs {
    fn spec(&self) -> Result<FamilySpec, Error> {
        let mut spec = FamilySpec::new(self.family, self.qubits);
        spec.n = self.n;
        if let Some(text) = &self.coeffs {
            spec.coefficients = Some(parse_coeffs(text)?);
        }
        Ok(spec)
    }
}

#[derive(Args)]
struct StateArgs {
    #[command(flatten)]
    family: FamilyArgs,
}

#[derive(Args)]
struct LeArgs {
    /// State JSON file.
    #[arg(long)]
    state: PathBuf,
    #[arg(long, default_value_t = 0)]
    hub: usize,
    /// Localize onto (hub, partner), measuring everything else.
    #[arg(long, conflicts_with_all = ["measure", "total"])]
    partner: Option<usize>,
    /// Comma-separated measured qubits for block localization.
    #[arg(long, value_delimiter = ',', conflicts_with = "total")]
    measure: Option<Vec<usize>>,
    /// Total pair localization over the first `qubits - n0` qubits.
    #[arg(long)]
    total: bool,
    /// Measured auxiliary qubits (the last `n0`) for `--total` and the
    /// default block target.
    #[arg(long, default_value_t = 0)]
    n0: usize,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(value_enum)]
    kind: OracleKind,
    /// Total number of qubits `M`.
    #[arg(long)]
    qubits: Option<usize>,
    /// Region size `N` (defaults to all qubits).
    #[arg(long)]
    region: Option<usize>,
    /// Excitations for Dicke states.
    #[arg(long)]
    n: Option<usize>,
    /// Real amplitude of `|0…0⟩` for gGHZ.
    #[arg(long)]
    c0: Option<f64>,
    /// Coefficients as a JSON array of `[re, im]` pairs.
    #[arg(long)]
    coeffs: Option<String>,
    /// Measured coefficients for gW (taken from the end).
    #[arg(long, default_value_t = 0)]
    measured: usize,
    #[arg(long, default_value_t = 0.0)]
    q: f64,
    #[arg(long, default_value_t = 0.0)]
    eta: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleKind {
    Dicke,
    Gghz,
    Gw,
    WClass3q,
    NoisyW,
    NoisyGghz,
}

#[derive(Args)]
struct NoiseArgs {
    /// State JSON file.
    #[arg(long)]
    state: PathBuf,
    #[arg(long)]
    q: f64,
    #[arg(long, default_value_t = 0.0)]
    eta: f64,
    /// Comma-separated target qubits (default: all).
    #[arg(long, value_delimiter = ',')]
    targets: Option<Vec<usize>>,
}

#[derive(Args)]
struct SweepArgs {
    /// Sweep config JSON; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    family: Option<Family>,
    #[arg(long)]
    qubits: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    n0: Option<usize>,
    #[arg(long)]
    q: Option<f64>,
    #[arg(long)]
    eta: Option<f64>,
    /// Comma-separated proposition ids.
    #[arg(long, value_delimiter = ',')]
    propositions: Option<Vec<u8>>,
    #[arg(long)]
    tolerance: Option<f64>,
}

#[derive(Args)]
struct BoundsArgs {
    /// Records written by `sweep`.
    #[arg(long)]
    input: PathBuf,
    /// Comma-separated proposition ids (default: those stored per record).
    #[arg(long, value_delimiter = ',')]
    propositions: Option<Vec<u8>>,
    #[arg(long, default_value_t = locent::harness::DEFAULT_TOLERANCE)]
    tolerance: f64,
}

#[derive(Args)]
struct FigureArgs {
    /// Figure id, e.g. 2, 3a or 5b.
    id: String,
    /// Print the campaign configs instead of running them.
    #[arg(long)]
    dry_run: bool,
}

fn parse_coeffs(text: &str) -> Result<Vec<C64>, Error> {
    Ok(serde_json::from_str(text)?)
}

fn optimizer(g: &Global) -> OptimizerConfig {
    let mut cfg = OptimizerConfig::default();
    if let Some(s) = g.seed {
        cfg.seed = s;
    }
    if let Some(r) = g.restarts {
        cfg.restarts = r;
    }
    cfg
}

/// Writes to `--out` when given, otherwise stdout.
fn output(path: Option<&Path>) -> Result<Box<dyn Write>, Error> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn emit<T: Serialize>(g: &Global, value: &T) -> Result<(), Error> {
    let mut w = output(g.out.as_deref())?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn emit_text(g: &Global, text: &str) -> Result<(), Error> {
    let mut w = output(g.out.as_deref())?;
    writeln!(w, "{text}")?;
    w.flush()?;
    Ok(())
}

fn cmd_state(g: &Global, a: &StateArgs) -> Result<(), Error> {
    let state = a.family.spec()?.build(g.seed.unwrap_or(0))?;
    emit_text(g, &state_to_json(&state.into()))
}

fn cmd_le(g: &Global, a: &LeArgs) -> Result<(), Error> {
    let state = read_state(&a.state)?;
    let n = state.num_qubits();
    if a.n0 + 2 > n {
        return Err(Error::InvalidParameter(format!("n0 = {} leaves fewer than two of {n} qubits", a.n0)));
    }
    let cfg = optimizer(g);
    if a.total {
        let region: Vec<usize> = (0..n - a.n0).collect();
        if g.pauli_only {
            let terms = region
                .iter()
                .filter(|&&i| i != a.hub)
                .map(|&i| pauli_le(&state, &LeTarget::Pair { hub: a.hub, partner: i }, usize::MAX))
                .collect::<Result<Vec<_>, _>>()?;
            let value: f64 = terms.iter().map(|r| r.value).sum();
            return emit(g, &serde_json::json!({ "value": value, "terms": terms }));
        }
        return emit(g, &total_rle(&state, a.hub, &region, &cfg)?);
    }
    let target = match (a.partner, &a.measure) {
        (Some(partner), _) => LeTarget::Pair { hub: a.hub, partner },
        (None, Some(m)) => LeTarget::Block {
            hub: a.hub,
            measured: m.clone(),
        },
        (None, None) => LeTarget::Block {
            hub: a.hub,
            measured: (n - a.n0..n).collect(),
        },
    };
    let result = if g.pauli_only {
        pauli_le(&state, &target, usize::MAX)?
    } else {
        localize(&state, &target, &cfg)?
    };
    emit(g, &result)
}

fn require<T>(v: Option<T>, name: &str) -> Result<T, Error> {
    v.ok_or_else(|| Error::InvalidParameter(format!("this oracle needs --{name}")))
}

fn cmd_oracle(g: &Global, a: &OracleArgs) -> Result<(), Error> {
    let coeffs = || parse_coeffs(&require(a.coeffs.clone(), "coeffs")?);
    let form: ClosedForm = match a.kind {
        OracleKind::Dicke => dicke_values(require(a.qubits, "qubits")?, require(a.n, "n")?)?,
        OracleKind::Gghz => gghz_values(C64::new(require(a.c0, "c0")?, 0.0), require(a.region.or(a.qubits), "region")?)?,
        OracleKind::Gw => gw_values(&coeffs()?, a.measured)?,
        OracleKind::WClass3q => {
            let c: [C64; 4] = coeffs()?
                .try_into()
                .map_err(|_| Error::InvalidParameter("w_class_3q takes 4 coefficients".into()))?;
            wclass3_values(&c)?
        }
        OracleKind::NoisyW => {
            let m = require(a.qubits, "qubits")?;
            noisy_w_values(m, a.region.unwrap_or(m), a.q, a.eta)?
        }
        OracleKind::NoisyGghz => noisy_gghz_values(C64::new(require(a.c0, "c0")?, 0.0), require(a.qubits, "qubits")?, a.q, a.eta)?,
    };
    emit(g, &form)
}

fn cmd_noise(g: &Global, a: &NoiseArgs) -> Result<(), Error> {
    let state = read_state(&a.state)?;
    let mut ch = PhaseFlipChannel::new(a.q, a.eta)?;
    if let Some(t) = &a.targets {
        ch = ch.on_qubits(t.clone());
    }
    let rho: QuantumState = ch.apply(&state)?.into();
    emit_text(g, &state_to_json(&rho))
}

fn apply_global(cfg: &mut SweepConfig, g: &Global) {
    if let Some(s) = g.seed {
        cfg.master_seed = s;
    }
    if let Some(n) = g.samples {
        cfg.sample_count = n;
    }
    if let Some(t) = g.threads {
        cfg.threads = Some(t);
    }
    if let Some(p) = &g.out {
        cfg.output = Some(p.clone());
    }
    if let Some(f) = g.format {
        cfg.format = f.into();
    }
    if g.pauli_only {
        cfg.pauli_only = true;
    }
    if let Some(r) = g.restarts {
        cfg.optimizer.restarts = r;
    }
}

fn sweep_config(g: &Global, a: &SweepArgs) -> Result<SweepConfig, Error> {
    let mut cfg = match &a.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            serde_json::from_str::<SweepConfig>(&text)?
        }
        None => {
            let family = a.family.ok_or_else(|| Error::InvalidParameter("sweep needs --config or --family".into()))?;
            let qubits = a.qubits.ok_or_else(|| Error::InvalidParameter("sweep needs --qubits".into()))?;
            SweepConfig::new(FamilySpec::new(family, qubits))
        }
    };
    if let Some(f) = a.family {
        cfg.family.family = f;
    }
    if let Some(q) = a.qubits {
        cfg.family.num_qubits = q;
    }
    if a.n.is_some() {
        cfg.family.n = a.n;
    }
    if let Some(n0) = a.n0 {
        cfg.n0 = n0;
    }
    if a.q.is_some() || a.eta.is_some() {
        let base = cfg.channel.take();
        let q = a.q.or(base.as_ref().map(|c| c.q)).unwrap_or(0.0);
        let eta = a.eta.or(base.as_ref().map(|c| c.eta)).unwrap_or(0.0);
        cfg.channel = Some(PhaseFlipChannel::new(q, eta)?);
    }
    if a.propositions.is_some() {
        cfg.propositions = a.propositions.clone();
    }
    if let Some(t) = a.tolerance {
        cfg.tolerance = t;
    }
    apply_global(&mut cfg, g);
    cfg.validate()?;
    Ok(cfg)
}

/// Runs one campaign, writing records to `cfg.output` (or stdout).
fn run_campaign(cfg: &SweepConfig) -> Result<SweepSummary, Error> {
    let writer = output(cfg.output.as_deref())?;
    let mut sink = sink_for(cfg.format, writer)?;
    run_sweep(cfg, sink.as_mut())
}

fn cmd_sweep(g: &Global, a: &SweepArgs) -> Result<(), Error> {
    let cfg = sweep_config(g, a)?;
    let summary = run_campaign(&cfg)?;
    // Records may own stdout, so the summary goes to stderr.
    serde_json::to_writer_pretty(io::stderr().lock(), &summary)?;
    eprintln!();
    Ok(())
}

fn cmd_bounds(g: &Global, a: &BoundsArgs) -> Result<(), Error> {
    let format = match g.format {
        Some(f) => f.into(),
        None if a.input.extension().is_some_and(|e| e == "jsonl") => OutputFormat::Jsonl,
        None => OutputFormat::Csv,
    };
    let records = import(format, BufReader::new(File::open(&a.input)?))?;
    let report = check_propositions(&records, a.propositions.as_deref(), a.tolerance)?;
    emit(g, &report)
}

fn file_stem(label: &str) -> String {
    label
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '.' || c == '-' { c } else { '_' })
        .collect()
}

fn cmd_figure(g: &Global, a: &FigureArgs) -> Result<(), Error> {
    let mut cfgs = figure_data(&a.id)?;
    if a.dry_run {
        return emit(g, &cfgs);
    }
    let dir = g.out.clone().unwrap_or_else(|| PathBuf::from(format!("figure-{}", a.id)));
    std::fs::create_dir_all(&dir)?;
    let mut summaries = Vec::with_capacity(cfgs.len());
    let flags = Global { out: None, ..g.clone() };
    for cfg in &mut cfgs {
        apply_global(cfg, &flags);
        let ext = match cfg.format {
            OutputFormat::Csv => "csv",
            OutputFormat::Jsonl => "jsonl",
        };
        let label = cfg.label.clone().unwrap_or_else(|| a.id.clone());
        cfg.output = Some(dir.join(format!("{}.{ext}", file_stem(&label))));
        eprintln!("running {label}");
        summaries.push(run_campaign(cfg)?);
    }
    let mut w = BufWriter::new(File::create(dir.join("summary.json"))?);
    serde_json::to_writer_pretty(&mut w, &summaries)?;
    writeln!(w)?;
    w.flush()?;
    eprintln!("wrote {} campaigns to {}", summaries.len(), dir.display());
    Ok(())
}

fn run(cli: &Cli) -> Result<(), Error> {
    let g = &cli.global;
    match &cli.command {
        Command::State(a) => cmd_state(g, a),
        Command::Le(a) => cmd_le(g, a),
        Command::Oracle(a) => cmd_oracle(g, a),
        Command::Noise(a) => cmd_noise(g, a),
        Command::Sweep(a) => cmd_sweep(g, a),
        Command::Bounds(a) => cmd_bounds(g, a),
        Command::Figure(a) => cmd_figure(g, a),
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Io(_) => EXIT_IO,
        e if e.is_numerical() => EXIT_NUMERICAL,
        _ => EXIT_USAGE,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
