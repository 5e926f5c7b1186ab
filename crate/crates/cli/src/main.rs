//! `distill`: command-line front end for the yield calculations.
//!
//! Exit status is 0 on success, 1 when a validation or Monte-Carlo run
//! finds a failing property, and 2 for any usage or input error.

mod config;

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use distill::ad::{rci_amp_damp, uniform_grid, ADScheme};
use distill::aepp::{aepp_outcome, aepp_star4_breakdown};
use distill::combined::{sweep_columns, Bounds, ChannelFamily, Column};
use distill::curve::YieldCurve;
use distill::mc::{simulate_aepp_checks, simulate_recurrence, McConfig};
use distill::recurrence::{greedy_sequence, macchiavello_sequence, recurrence_step};
use distill::validate::{run_suite, Suite, ValidationConfig};
use distill::vv::{hashing_yield, vv_best_over_permutations, vv_yield_general, vv_yield_iid};
use distill::{PauliDist4, PauliLabel, TwoPairDist};

use config::FileConfig;

/// Bad flags, config values or inputs; exits with status 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage<T>(msg: impl Into<String>) -> anyhow::Result<T> {
    Err(UsageError(msg.into()).into())
}

#[derive(Parser)]
#[command(name = "distill", version, about = "Yields of two-way entanglement distillation protocols")]
struct Cli {
    /// TOML config file; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write output here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Amplitude-damping yields per scheme over a gamma grid (CSV).
    AdYields(AdYieldsArgs),
    /// Reverse coherent information of the amplitude damping channel (CSV).
    Rci(RciArgs),
    /// One recurrence step (JSON).
    Recurrence(RecurrenceArgs),
    /// A schedule of recurrence rounds (JSON).
    Greedy(GreedyArgs),
    /// Interpolation-protocol yields of an i.i.d. channel (JSON).
    Vv(ChannelArgs),
    /// Four-pair check cascade outcome and yield (JSON).
    Aepp(AeppArgs),
    /// Combined-protocol sweep over a channel family (CSV).
    CombinedSweep(SweepArgs),
    /// Run a property suite (JSON report).
    Validate(ValidateArgs),
    /// Monte-Carlo cross-check of one analytic distribution (JSON report).
    Mc(McArgs),
}

#[derive(Args)]
struct ChannelArgs {
    /// Explicit channel `pI,pX,pY,pZ`.
    #[arg(long, conflicts_with_all = ["family", "p"])]
    dist: Option<String>,
    /// Channel family, used with `--p`.
    #[arg(long, requires = "p")]
    family: Option<String>,
    #[arg(long, requires = "family")]
    p: Option<f64>,
}

#[derive(Args)]
struct AdYieldsArgs {
    /// `lo:hi:count` or comma-separated gamma values.
    #[arg(long)]
    grid: Option<String>,
    /// Comma-separated scheme names (RCI, DualRail, TripleRail, H1<n>, H2<n>, H24ast).
    #[arg(long, value_delimiter = ',')]
    schemes: Option<Vec<String>>,
    /// Report each scheme's yield minus the RCI.
    #[arg(long)]
    diff: bool,
    /// Named preset: `fig2` selects the Hamming-2 difference columns.
    #[arg(long)]
    preset: Option<String>,
}

#[derive(Args)]
struct RciArgs {
    /// `lo:hi:count` or comma-separated gamma values.
    #[arg(long)]
    grid: Option<String>,
}

#[derive(Args)]
struct RecurrenceArgs {
    #[command(flatten)]
    channel: ChannelArgs,
    /// Check to apply: X, Y or Z.
    #[arg(long, default_value = "Z")]
    check: String,
}

#[derive(Args)]
struct GreedyArgs {
    #[command(flatten)]
    channel: ChannelArgs,
    #[arg(long, default_value_t = 4)]
    rounds: usize,
    /// `greedy` or `macchiavello`.
    #[arg(long, default_value = "greedy")]
    schedule: String,
}

#[derive(Args)]
struct AeppArgs {
    #[command(flatten)]
    channel: ChannelArgs,
    #[arg(long, default_value_t = 0)]
    n2: usize,
    #[arg(long, default_value_t = 0)]
    n3: usize,
}

#[derive(Args)]
struct SweepArgs {
    /// `depolarizing` or `xz`.
    #[arg(long)]
    family: Option<String>,
    /// `lo:hi:count` or comma-separated p values.
    #[arg(long)]
    grid: Option<String>,
    /// Columns to compute (Macchiavello, Greedy, AEPP4, ProposedProtocol); defaults per family.
    #[arg(long, value_delimiter = ',')]
    columns: Option<Vec<String>>,
    #[arg(long)]
    n1_max: Option<usize>,
    #[arg(long)]
    n2_max: Option<usize>,
    #[arg(long)]
    n3_max: Option<usize>,
}

#[derive(Args)]
struct ValidateArgs {
    /// `theorems`, `lemmas` or `mc`.
    #[arg(long)]
    suite: String,
    #[arg(long)]
    seed: Option<u64>,
    /// Random cases per property.
    #[arg(long)]
    cases: Option<usize>,
    /// Monte-Carlo samples per run (mc suite).
    #[arg(long)]
    samples: Option<u64>,
}

#[derive(Args)]
struct McArgs {
    #[command(flatten)]
    channel: ChannelArgs,
    /// X, Y or Z for a recurrence check, or `aepp` for the four-pair cascade.
    #[arg(long, default_value = "Z")]
    check: String,
    #[arg(long)]
    samples: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    sigmas: Option<f64>,
}

/// Parses `lo:hi:count` or `a,b,c` into a strictly increasing finite grid.
fn parse_grid(spec: &str) -> anyhow::Result<Vec<f64>> {
    let spec = spec.trim();
    let grid = if let Some((lo, rest)) = spec.split_once(':') {
        let (hi, count) = rest.split_once(':').ok_or_else(|| UsageError(format!("bad grid '{spec}'")))?;
        let lo: f64 = lo.trim().parse().map_err(|_| UsageError(format!("bad grid start '{lo}'")))?;
        let hi: f64 = hi.trim().parse().map_err(|_| UsageError(format!("bad grid end '{hi}'")))?;
        let count: usize = count.trim().parse().map_err(|_| UsageError(format!("bad grid count '{count}'")))?;
        uniform_grid(lo, hi, count)
    } else {
        spec.split(',')
            .map(|s| s.trim().parse::<f64>().map_err(|_| UsageError(format!("bad grid value '{s}'")).into()))
            .collect::<anyhow::Result<Vec<f64>>>()?
    };
    if grid.is_empty() {
        return usage("grid is empty");
    }
    if grid.iter().any(|x| !x.is_finite()) {
        return usage("grid values must be finite");
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return usage("grid must be strictly increasing");
    }
    Ok(grid)
}

fn parse_dist(spec: &str) -> anyhow::Result<PauliDist4> {
    let vals = spec
        .split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|_| UsageError(format!("bad probability '{s}'")).into()))
        .collect::<anyhow::Result<Vec<f64>>>()?;
    PauliDist4::from_slice(&vals).map_err(|e| UsageError(e.to_string()).into())
}

fn input<T>(r: distill::Result<T>) -> anyhow::Result<T> {
    r.map_err(|e| UsageError(e.to_string()).into())
}

impl ChannelArgs {
    fn resolve(&self) -> anyhow::Result<PauliDist4> {
        if let Some(d) = &self.dist {
            return parse_dist(d);
        }
        match (&self.family, self.p) {
            (Some(f), Some(p)) => input(input(f.parse::<ChannelFamily>())?.channel(p)),
            _ => usage("give --dist, or --family with --p"),
        }
    }
}

fn parse_check(s: &str) -> anyhow::Result<PauliLabel> {
    let q: PauliLabel = input(s.parse())?;
    if q == PauliLabel::I {
        return usage("check must be X, Y or Z");
    }
    Ok(q)
}

enum Outcome {
    Success,
    PropertyFailure,
}

fn emit(output: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match output {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> anyhow::Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

const FIG2_SCHEMES: [&str; 7] = ["H24", "H24ast", "H25", "H26", "H27", "H28", "TripleRail"];

fn cmd_ad_yields(args: &AdYieldsArgs, cfg: &FileConfig) -> anyhow::Result<String> {
    let (mut names, mut diff) = (args.schemes.clone().or_else(|| cfg.schemes.clone()), args.diff);
    match args.preset.as_deref() {
        Some("fig2") => {
            names = names.or_else(|| Some(FIG2_SCHEMES.iter().map(|s| s.to_string()).collect()));
            diff = true;
        }
        Some(other) => return usage(format!("unknown preset '{other}'")),
        None => {}
    }
    let names = names.ok_or_else(|| UsageError("no schemes given".into()))?;
    let schemes = names
        .iter()
        .filter(|s| !s.trim().is_empty())
        .map(|s| input(s.parse::<ADScheme>()))
        .collect::<anyhow::Result<Vec<_>>>()?;
    if schemes.is_empty() {
        return usage("scheme list is empty");
    }
    let mut columns = schemes.clone();
    if !diff && !columns.contains(&ADScheme::Rci) {
        columns.push(ADScheme::Rci);
    }
    let grid_spec = args.grid.clone().or_else(|| cfg.grid.clone()).unwrap_or_else(|| "0:1:201".into());
    let grid = parse_grid(&grid_spec)?;
    let mut curve = YieldCurve::new(std::iter::once("gamma".to_string()).chain(columns.iter().map(|s| s.to_string())));
    for &g in &grid {
        let rci = if diff { input(rci_amp_damp(g))? } else { 0.0 };
        let mut row = vec![g];
        for s in &columns {
            row.push(input(s.evaluate(g))? - rci);
        }
        curve.push_row(row)?;
    }
    Ok(curve.to_csv())
}

fn cmd_rci(args: &RciArgs, cfg: &FileConfig) -> anyhow::Result<String> {
    let spec = args.grid.clone().or_else(|| cfg.grid.clone()).unwrap_or_else(|| "0:1:201".into());
    let mut curve = YieldCurve::new(["gamma", "RCI"]);
    for g in parse_grid(&spec)? {
        curve.push_row(vec![g, input(rci_amp_damp(g))?])?;
    }
    Ok(curve.to_csv())
}

#[derive(Serialize)]
struct VvReport {
    dist: PauliDist4,
    hashing: f64,
    vv_iid: f64,
    vv_best: f64,
    best_permutation: [u8; 4],
    general_on_product: distill::vv::VVBreakdown,
}

#[derive(Serialize)]
struct AeppReport {
    dist: PauliDist4,
    n2: usize,
    n3: usize,
    outcome: distill::aepp::AeppOutcome,
    yields: distill::aepp::AeppYield,
}

fn sweep_defaults(family: ChannelFamily) -> &'static str {
    match family {
        ChannelFamily::Depolarizing => "0.2:0.5:101",
        ChannelFamily::XZ => "0:0.5:101",
    }
}

fn cmd_sweep(args: &SweepArgs, cfg: &FileConfig) -> anyhow::Result<String> {
    let family: ChannelFamily = match args.family.as_ref().or(cfg.family.as_ref()) {
        Some(f) => input(f.parse())?,
        None => return usage("--family is required"),
    };
    let grid = parse_grid(&args.grid.clone().or_else(|| cfg.grid.clone()).unwrap_or_else(|| sweep_defaults(family).into()))?;
    if grid.iter().any(|&p| !(0.0..=1.0).contains(&p)) {
        return usage("channel parameters must lie in [0, 1]");
    }
    let defaults = Bounds::default();
    let bounds = Bounds {
        n1_max: args.n1_max.or(cfg.bounds.n1_max).unwrap_or(defaults.n1_max),
        n2_max: args.n2_max.or(cfg.bounds.n2_max).unwrap_or(defaults.n2_max),
        n3_max: args.n3_max.or(cfg.bounds.n3_max).unwrap_or(defaults.n3_max),
    };
    let columns = match args.columns.clone().or_else(|| cfg.columns.clone()) {
        Some(names) => names.iter().map(|c| input(c.parse::<Column>())).collect::<anyhow::Result<Vec<_>>>()?,
        None => family.default_columns(),
    };
    if columns.is_empty() {
        return usage("column list is empty");
    }
    Ok(input(sweep_columns(family, &grid, &bounds, &columns))?.to_csv())
}

fn mc_config(samples: Option<u64>, seed: Option<u64>, sigmas: Option<f64>, cfg: &FileConfig) -> anyhow::Result<McConfig> {
    let d = McConfig::default();
    let mc = McConfig {
        samples: samples.or(cfg.mc.samples).unwrap_or(d.samples),
        seed: seed.or(cfg.seed).unwrap_or(d.seed),
        tolerance_sigmas: sigmas.or(cfg.mc.tolerance_sigmas).unwrap_or(d.tolerance_sigmas),
    };
    input(mc.validate())?;
    Ok(mc)
}

fn run(cli: &Cli) -> anyhow::Result<Outcome> {
    let cfg = config::load(cli.config.as_deref())?;
    let output = cli.output.clone().or_else(|| cfg.output.clone());
    let mut outcome = Outcome::Success;
    let text = match &cli.command {
        Command::AdYields(a) => cmd_ad_yields(a, &cfg)?,
        Command::Rci(a) => cmd_rci(a, &cfg)?,
        Command::Recurrence(a) => {
            let d = a.channel.resolve()?;
            to_json(&recurrence_step(&d, parse_check(&a.check)?)?)?
        }
        Command::Greedy(a) => {
            let d = a.channel.resolve()?;
            let run = match a.schedule.to_ascii_lowercase().as_str() {
                "greedy" => greedy_sequence(&d, a.rounds),
                "macchiavello" => macchiavello_sequence(&d, a.rounds),
                other => return usage(format!("unknown schedule '{other}'")),
            };
            if run.fidelity_warning {
                eprintln!("warning: input fidelity {} is at most 1/2; rounds need not improve it", d.fidelity());
            }
            to_json(&run)?
        }
        Command::Vv(a) => {
            let d = a.resolve()?;
            let (best, perm) = vv_best_over_permutations(&d);
            to_json(&VvReport {
                dist: d,
                hashing: hashing_yield(&d),
                vv_iid: vv_yield_iid(&d),
                vv_best: best,
                best_permutation: perm.0,
                general_on_product: vv_yield_general(&TwoPairDist::iid(&d)),
            })?
        }
        Command::Aepp(a) => {
            let d = a.channel.resolve()?;
            to_json(&AeppReport {
                dist: d,
                n2: a.n2,
                n3: a.n3,
                outcome: aepp_outcome(&d),
                yields: aepp_star4_breakdown(&d, a.n2, a.n3),
            })?
        }
        Command::CombinedSweep(a) => cmd_sweep(a, &cfg)?,
        Command::Validate(a) => {
            let suite: Suite = input(a.suite.parse())?;
            let defaults = ValidationConfig::default();
            let vcfg = ValidationConfig {
                cases: a.cases.or(cfg.cases).unwrap_or(defaults.cases),
                seed: a.seed.or(cfg.seed).unwrap_or(defaults.seed),
                mc: mc_config(a.samples, None, None, &cfg)?,
            };
            let report = input(run_suite(suite, &vcfg))?;
            if !report.passed {
                outcome = Outcome::PropertyFailure;
            }
            to_json(&report)?
        }
        Command::Mc(a) => {
            let d = a.channel.resolve()?;
            let mc = mc_config(a.samples, a.seed, a.sigmas, &cfg)?;
            let report = if a.check.eq_ignore_ascii_case("aepp") {
                input(simulate_aepp_checks(&d, &mc))?
            } else {
                input(simulate_recurrence(&d, parse_check(&a.check)?, &mc))?
            };
            if !report.passed {
                outcome = Outcome::PropertyFailure;
            }
            to_json(&report)?
        }
    };
    emit(output.as_deref(), &text)?;
    Ok(outcome)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(Outcome::Success) => ExitCode::SUCCESS,
        Ok(Outcome::PropertyFailure) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
