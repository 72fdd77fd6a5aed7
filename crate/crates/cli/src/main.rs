//! `wiretap`: secrecy rates, exact small-blocklength codes and eavesdropper
//! attacks for compound wiretap channels.
//!
//! Exit codes: 0 success, 1 a reproduction check failed, 2 invalid input or
//! violated precondition, 3 enumeration budget refused.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use wiretap_core::adversary::{best_decoding_attack, identification_attack, DecodingAttack, IdentificationAttack};
use wiretap_core::capacity::{
    check_saturating_structure, csi_rate_no_prefix, csi_rate_with_prefix, csi_t_lower, degraded_capacity,
    multiletter_rate, no_csi_lower, RateReport, SearchOptions,
};
use wiretap_core::channel_file::parse_compound;
use wiretap_core::codelab::{simulate, Codebook, CodingParams, CodingRegime, CodingReport, InputChoice, Overrides};
use wiretap_core::scenarios::{run_example1, run_example2, Check, Example1Params, Example2Params};
use wiretap_core::{CompoundWiretap, Error, DEFAULT_BUDGET};

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(
    name = "wiretap",
    version,
    about = "Compound wiretap channels: rates, codes, attacks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Single-letter secrecy rates, degraded capacity or the multi-letter ladder.
    Capacity(CapacityArgs),
    /// Sample a random wiretap code and evaluate it exactly.
    ///
    /// With --csv, one row per blocklength is written with the columns
    /// n, delta, seed, messages, message_rate, avg_error, leakage_bits,
    /// leakage_per_symbol (error and leakage are maxima over states).
    Simulate(SimulateArgs),
    /// Optimal eavesdropper attacks on a codebook written by `simulate`.
    Attack(AttackArgs),
    /// Reproduce the message-versus-pair transmissibility example.
    Example1(Example1Args),
    /// Reproduce the example where state information is necessary.
    Example2(Example2Args),
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum RateRegime {
    Csi,
    CsiT,
    NoCsi,
    Degraded,
    Multiletter,
    /// Worst-legitimate / best-eavesdropper degradation structure.
    Structure,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum SimRegime {
    Csi,
    NoCsi,
    CsiT,
}

impl From<SimRegime> for CodingRegime {
    fn from(r: SimRegime) -> Self {
        match r {
            SimRegime::Csi => CodingRegime::Csi,
            SimRegime::NoCsi => CodingRegime::NoCsi,
            SimRegime::CsiT => CodingRegime::CsiT,
        }
    }
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum InputArg {
    /// Per-block maximizers of the rate objective.
    Optimized,
    Uniform,
}

#[derive(Args, Serialize)]
struct SearchArgs {
    /// Grid resolution of the exhaustive fallback (inputs with at most 3 symbols).
    #[arg(long, default_value_t = 1000)]
    grid: usize,
    /// Random restarts of the ascent.
    #[arg(long, default_value_t = 32)]
    restarts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl SearchArgs {
    fn options(&self) -> SearchOptions {
        SearchOptions {
            grid: self.grid,
            restarts: self.restarts,
            seed: self.seed,
            budget: DEFAULT_BUDGET,
        }
    }
}

#[derive(Args, Serialize)]
struct CapacityArgs {
    #[arg(long)]
    channels: PathBuf,
    #[arg(long, value_enum)]
    regime: RateRegime,
    /// Auxiliary alphabet size; for `csi` this switches on the prefix channel.
    #[arg(long)]
    aux_card: Option<usize>,
    /// Blocklength of the multi-letter level.
    #[arg(long, default_value_t = 2)]
    n: usize,
    #[command(flatten)]
    search: SearchArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct SimulateArgs {
    #[arg(long)]
    channels: PathBuf,
    #[arg(long, value_enum)]
    regime: SimRegime,
    /// Blocklength; a comma-separated list runs a sweep.
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<usize>,
    /// Typicality slack; defaults to 1/n for each blocklength.
    #[arg(long)]
    delta: Option<f64>,
    /// Rate back-off per letter.
    #[arg(long, default_value_t = 0.1)]
    tau: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long = "override-J")]
    override_j: Option<usize>,
    #[arg(long = "override-L")]
    override_l: Option<usize>,
    #[arg(long, value_enum, default_value_t = InputArg::Optimized)]
    input: InputArg,
    /// Concentration tolerance; defaults to 2^(-n delta^2 / (4 ln 2)).
    #[arg(long)]
    epsilon: Option<f64>,
    /// Expurgation threshold; defaults to the largest average error.
    #[arg(long)]
    eta: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Codebook of the last blocklength, for `attack`.
    #[arg(long)]
    codebook_out: Option<PathBuf>,
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct AttackArgs {
    #[arg(long)]
    channels: PathBuf,
    #[arg(long)]
    codebook: PathBuf,
    /// Eavesdropper state index.
    #[arg(long)]
    state: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct Example1Args {
    #[arg(long, default_value_t = 0.01)]
    eta: f64,
    #[arg(long, default_value_t = 0.05)]
    tau: f64,
    #[arg(long, default_value_t = 0.45)]
    tau_hat: f64,
    #[arg(long, default_value_t = 0.01)]
    nu: f64,
    #[arg(long, default_value_t = 1000)]
    grid: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct Example2Args {
    #[arg(long, default_value_t = 0.1)]
    eta: f64,
    #[arg(long, default_value_t = 0.1)]
    tau: f64,
    /// Number of grid points for the state parameter in [0, 1].
    #[arg(long, default_value_t = 21)]
    states: usize,
    /// Grid resolution for the two-letter check.
    #[arg(long, default_value_t = 20)]
    pair_grid: usize,
    #[command(flatten)]
    search: SearchArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Lib(Error),
    Usage(String),
    Checks(usize),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

#[derive(Serialize)]
struct Envelope<'a, C: Serialize, R: Serialize> {
    schema_version: u32,
    tool: &'static str,
    version: &'static str,
    command: &'static str,
    config: &'a C,
    result: R,
}

fn write_text(path: &Path, text: &str) -> Outcome<()> {
    fs::write(path, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))
}

fn emit<C: Serialize, R: Serialize>(command: &'static str, config: &C, result: R, out: Option<&Path>) -> Outcome<()> {
    let env = Envelope {
        schema_version: SCHEMA_VERSION,
        tool: "wiretap",
        version: env!("CARGO_PKG_VERSION"),
        command,
        config,
        result,
    };
    let mut text = serde_json::to_string_pretty(&env).expect("reports serialize");
    text.push('\n');
    match out {
        Some(p) => write_text(p, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read_text(path: &Path) -> Outcome<String> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn load_channels(path: &Path) -> Outcome<CompoundWiretap> {
    let text = read_text(path)?;
    parse_compound(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn capacity(args: &CapacityArgs) -> Outcome<()> {
    let c = load_channels(&args.channels)?;
    let opts = args.search.options();
    if let RateRegime::Structure = args.regime {
        let report = check_saturating_structure(&c, &opts)?;
        return emit("capacity", args, report, args.out.as_deref());
    }
    let report: RateReport = match args.regime {
        RateRegime::Csi => match args.aux_card {
            Some(k) => csi_rate_with_prefix(&c, k, &opts)?,
            None => csi_rate_no_prefix(&c, &opts)?,
        },
        RateRegime::CsiT => csi_t_lower(&c, &opts)?,
        RateRegime::NoCsi => no_csi_lower(&c, &opts)?,
        RateRegime::Degraded => degraded_capacity(&c, &opts)?,
        RateRegime::Multiletter => multiletter_rate(&c, args.n, args.aux_card, &opts)?,
        RateRegime::Structure => unreachable!("handled above"),
    };
    emit("capacity", args, report, args.out.as_deref())
}

#[derive(Serialize)]
struct SimulateResult {
    runs: Vec<CodingReport>,
}

fn simulate_cmd(args: &SimulateArgs) -> Outcome<()> {
    let c = load_channels(&args.channels)?;
    let mut runs = Vec::with_capacity(args.n.len());
    let mut last: Option<Codebook> = None;
    for &n in &args.n {
        if n == 0 {
            return Err(Failure::Usage("blocklength must be positive".into()));
        }
        let delta = args.delta.unwrap_or(1.0 / n as f64);
        let mut p = CodingParams::new(args.regime.into(), n, delta, args.tau);
        p.seed = args.seed;
        p.overrides = Overrides {
            messages: args.override_j,
            randomization: args.override_l,
        };
        p.inputs = match args.input {
            InputArg::Optimized => InputChoice::Optimized,
            InputArg::Uniform => InputChoice::Uniform,
        };
        p.epsilon = args.epsilon;
        p.eta = args.eta;
        let outcome = simulate(&c, &p)?;
        runs.push(outcome.report);
        last = Some(outcome.codebook);
    }
    if let (Some(path), Some(code)) = (&args.codebook_out, &last) {
        let mut text = serde_json::to_string_pretty(code).expect("codebooks serialize");
        text.push('\n');
        write_text(path, &text)?;
    }
    if let Some(path) = &args.csv {
        write_csv(path, &runs)?;
    }
    emit("simulate", args, SimulateResult { runs }, args.out.as_deref())
}

fn write_csv(path: &Path, runs: &[CodingReport]) -> Outcome<()> {
    let io = |e: csv::Error| Failure::Usage(format!("cannot write {}: {e}", path.display()));
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    w.write_record([
        "n",
        "delta",
        "seed",
        "messages",
        "message_rate",
        "avg_error",
        "leakage_bits",
        "leakage_per_symbol",
    ])
    .map_err(io)?;
    for r in runs {
        let leak = r.max_leakage();
        w.write_record([
            r.n.to_string(),
            r.delta.to_string(),
            r.seed.to_string(),
            r.messages.to_string(),
            r.message_rate.to_string(),
            r.max_avg_error().to_string(),
            leak.to_string(),
            (leak / r.n as f64).to_string(),
        ])
        .map_err(io)?;
    }
    w.flush()
        .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))
}

#[derive(Serialize)]
struct BlockAttack {
    block: usize,
    decoding: DecodingAttack,
    identification: Option<IdentificationAttack>,
}

#[derive(Serialize)]
struct AttackResult {
    state: usize,
    blocks: Vec<BlockAttack>,
}

fn attack(args: &AttackArgs) -> Outcome<()> {
    let c = load_channels(&args.channels)?;
    let text = read_text(&args.codebook)?;
    let code: Codebook = serde_json::from_str(&text)
        .map_err(|e| Failure::Usage(format!("{}: line {}: {e}", args.codebook.display(), e.line())))?;
    code.validate(&c)?;
    let v = c.eaves().get(args.state).ok_or_else(|| {
        Failure::Usage(format!(
            "state {} out of range ({} eavesdropper states)",
            args.state,
            c.eaves().len()
        ))
    })?;
    let mut blocks = Vec::new();
    for (b, block) in code.blocks.iter().enumerate() {
        if !block.eaves.contains(&args.state) {
            continue;
        }
        let decoding = best_decoding_attack(&code, b, v, DEFAULT_BUDGET)?;
        let identification = if code.messages >= 2 {
            Some(identification_attack(&code, b, v, DEFAULT_BUDGET)?)
        } else {
            None
        };
        blocks.push(BlockAttack {
            block: b,
            decoding,
            identification,
        });
    }
    emit(
        "attack",
        args,
        AttackResult {
            state: args.state,
            blocks,
        },
        args.out.as_deref(),
    )
}

fn failed(checks: &[Check]) -> usize {
    checks.iter().filter(|c| !c.passed).count()
}

fn example1(args: &Example1Args) -> Outcome<()> {
    let params = Example1Params {
        eta: args.eta,
        tau: args.tau,
        tau_hat: args.tau_hat,
        nu: args.nu,
        grid: args.grid,
    };
    let report = run_example1(&params)?;
    let bad = failed(&report.checks);
    emit("example1", args, &report, args.out.as_deref())?;
    if bad > 0 {
        return Err(Failure::Checks(bad));
    }
    Ok(())
}

fn example2(args: &Example2Args) -> Outcome<()> {
    let params = Example2Params {
        eta: args.eta,
        tau: args.tau,
        states: args.states,
        grid: args.search.grid,
        pair_grid: args.pair_grid,
    };
    let report = run_example2(&params, &args.search.options())?;
    let bad = failed(&report.checks);
    emit("example2", args, &report, args.out.as_deref())?;
    if bad > 0 {
        return Err(Failure::Checks(bad));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Capacity(a) => capacity(a),
        Command::Simulate(a) => simulate_cmd(a),
        Command::Attack(a) => attack(a),
        Command::Example1(a) => example1(a),
        Command::Example2(a) => example2(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks(k)) => {
            eprintln!("error: {k} reproduction check(s) failed");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            match e {
                Error::Resource { .. } => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}
