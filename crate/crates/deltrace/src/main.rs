//! Command-line surface: string generation, channel sampling, single
//! reconstructions, Monte Carlo experiments, exact tables, deck and mixture
//! verification, cover evaluation, and analytic bounds.
//!
//! Exit codes: 0 success, 2 invalid arguments or inputs, 1 runtime failure
//! (I/O) or a failed verification verdict.

use std::fs::File;
use std::io::{BufReader, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use deltrace::bits::{bukh_ma_code, make_periodic, read_strings, BitString, PeriodicSpec};
use deltrace::channel::{delete_direct, delete_geometric_process, Trace};
use deltrace::deck::{
    deck, geometric_schedule, parse_rational, solve_mixture, verify_deck_equality,
    MixtureSpec,
};
use deltrace::harness::{
    emit_csv, emit_json, run_experiment, run_suite, AlgoId, ExperimentConfig, SourceMode,
    DEFAULT_TRIALS,
};
use deltrace::lcs::{cover_quality, EvalMode, SEARCH_RESTARTS_DEFAULT};
use deltrace::oracle::{
    c2_upper_bound, cs_value, gamma2_estimate, series_bound, weak_upper_bound_coefficient,
};
use deltrace::recon::{
    algorithm_a, one_trace_cover, small_rate_reconstruct, zero_trace_alternating,
    zero_trace_bukh_cox, AlgAParams,
};
use deltrace::{Error, Result};

#[derive(Parser)]
#[command(
    name = "deltrace",
    version,
    about = "Trace reconstruction over the bit-deletion channel"
)]
struct Cli {
    /// Master seed for all randomized operations
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output file (stdout when omitted)
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Output format for tabular results
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads for trial parallelism (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Emit source strings: structured families or seeded uniform strings
    Generate(GenerateArgs),
    /// Push a source string through the deletion channel
    Del(DelArgs),
    /// Run one reconstruction from a given trace
    Recon(ReconArgs),
    /// Monte Carlo estimate of reconstruction quality
    Experiment(ExperimentArgs),
    /// Exact expected-LCS table for pairs of short uniform strings
    CsTable {
        /// Largest j+k to tabulate
        #[arg(long, default_value_t = 6)]
        max_sum: usize,
    },
    /// Subsequence-count deck of a string, as JSON
    Deck(DeckArgs),
    /// Solve mixture weights from moments and check deck equality
    MixtureVerify(MixtureVerifyArgs),
    /// Evaluate the guarantee h of a candidate LCS cover
    CoverEval(CoverEvalArgs),
    /// Analytic bounds and constants at a given deletion rate
    Bounds(BoundsArgs),
    /// Per-member statistics over the adversarial source suite
    Suite(SuiteArgs),
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, value_enum)]
    kind: SourceKind,
    #[arg(long)]
    n: usize,
    /// Half-period for kind=periodic
    #[arg(long)]
    period: Option<usize>,
    /// Integer 1/ε⁴ for kind=bukh-ma
    #[arg(long, default_value_t = 4)]
    inv_eps4: u64,
    /// Segment length for kind=bukh-ma (defaults to n)
    #[arg(long)]
    ell: Option<usize>,
    /// Number of strings for kind=random
    #[arg(long, default_value_t = 1)]
    count: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum SourceKind {
    Zeros,
    Ones,
    Alternating,
    Period28,
    Periodic,
    BukhMa,
    Random,
}

#[derive(Args)]
struct DelArgs {
    #[arg(long)]
    delta: f64,
    /// Source string literal
    #[arg(long)]
    bits: Option<String>,
    /// File with the source string on the first line
    #[arg(long)]
    input: Option<PathBuf>,
    /// Number of independent traces
    #[arg(long, default_value_t = 1)]
    count: usize,
    /// Use the geometric-gap sampler instead of per-bit coins
    #[arg(long)]
    geometric: bool,
}

#[derive(Args)]
struct ReconArgs {
    /// zero-alt | zero-bukhcox | cover | alg-a | small-rate
    #[arg(long)]
    algo: String,
    /// Source length to reconstruct to
    #[arg(long)]
    n: usize,
    #[arg(long)]
    delta: Option<f64>,
    /// Trace literal (for trace-consuming algorithms)
    #[arg(long)]
    bits: Option<String>,
    /// File with the trace on the first line
    #[arg(long)]
    input: Option<PathBuf>,
    /// Pure-block threshold slack override for alg-a
    #[arg(long)]
    gamma: Option<f64>,
    /// Block width for alg-a
    #[arg(long, default_value_t = 2000)]
    block_width: usize,
}

#[derive(Args)]
struct ExperimentArgs {
    /// zero-alt | zero-bukhcox | cover | alg-a | small-rate
    #[arg(long)]
    algo: String,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    delta: Option<f64>,
    /// Retention rate, alternative to --delta
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    trials: usize,
    /// average | suite | explicit
    #[arg(long, default_value = "average")]
    source: String,
    /// Explicit source literal (with --source explicit)
    #[arg(long)]
    bits: Option<String>,
    /// File with the explicit source on the first line
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long, default_value_t = 2000)]
    block_width: usize,
    /// Record per-trial LCS values (JSON output only)
    #[arg(long)]
    keep_trials: bool,
}

#[derive(Args)]
struct DeckArgs {
    /// Word length k
    #[arg(long)]
    k: usize,
    #[arg(long)]
    bits: Option<String>,
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Args)]
struct MixtureVerifyArgs {
    /// Common string length
    #[arg(long)]
    ell: usize,
    /// Number of mixture components / moment order
    #[arg(long)]
    k: usize,
    /// Comma-separated half-periods; repeat the flag for multiple sets
    #[arg(long)]
    periods: Vec<String>,
    /// Comma-separated exact moments b_0,..,b_{k-1} with b_0 = 1 (e.g. "1,5/2,25/6")
    #[arg(long)]
    b: Option<String>,
    /// Derive periods and moments from the divisor-constrained geometric
    /// schedule with this r_0 (extra --periods sets share the derived moments)
    #[arg(long)]
    schedule_r0: Option<usize>,
}

#[derive(Args)]
struct CoverEvalArgs {
    /// Length of the strings the cover must reach
    #[arg(long)]
    n: usize,
    /// Comma-separated member strings
    #[arg(long)]
    strings: Option<String>,
    /// File with one member per line
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    mode: ModeArg,
    /// Hill-climb restarts for --mode search
    #[arg(long, default_value_t = SEARCH_RESTARTS_DEFAULT)]
    restarts: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    /// Enumerate all length-n strings (n ≤ 22)
    Exact,
    /// Seeded hill-climb for a hard string (upper bound on h)
    Search,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long)]
    delta: f64,
    /// Truncation point of the average-case series
    #[arg(long, default_value_t = 6)]
    max_sum: usize,
    /// Also estimate the random-pair LCS constant at this length
    #[arg(long)]
    gamma2_n: Option<usize>,
    #[arg(long, default_value_t = 100)]
    gamma2_trials: usize,
}

#[derive(Args)]
struct SuiteArgs {
    #[arg(long)]
    algo: String,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long, default_value_t = 50)]
    trials: usize,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long, default_value_t = 2000)]
    block_width: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::InvalidArg(_)
                | Error::Divisibility(_)
                | Error::SizeLimit(_)
                | Error::Parse(_) => ExitCode::from(2),
                Error::Io { .. } => ExitCode::from(1),
            }
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(Error::InvalidArg("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .expect("thread pool is initialized once at startup");
    }
    let mut buf: Vec<u8> = Vec::new();
    let code = dispatch(&cli, &mut buf)?;
    match &cli.out {
        Some(p) => std::fs::write(p, &buf).map_err(|e| Error::Io {
            path: p.display().to_string(),
            source: e,
        })?,
        None => std::io::stdout().write_all(&buf).map_err(|e| Error::Io {
            path: "<stdout>".into(),
            source: e,
        })?,
    }
    Ok(code)
}

fn dispatch(cli: &Cli, w: &mut Vec<u8>) -> Result<ExitCode> {
    match &cli.cmd {
        Cmd::Generate(a) => cmd_generate(cli, a, w)?,
        Cmd::Del(a) => cmd_del(cli, a, w)?,
        Cmd::Recon(a) => cmd_recon(cli, a, w)?,
        Cmd::Experiment(a) => cmd_experiment(cli, a, w)?,
        Cmd::CsTable { max_sum } => cmd_cs_table(cli, *max_sum, w)?,
        Cmd::Deck(a) => cmd_deck(a, w)?,
        Cmd::MixtureVerify(a) => return cmd_mixture_verify(a, w),
        Cmd::CoverEval(a) => cmd_cover_eval(cli, a, w)?,
        Cmd::Bounds(a) => cmd_bounds(cli, a, w)?,
        Cmd::Suite(a) => cmd_suite(cli, a, w)?,
    }
    Ok(ExitCode::SUCCESS)
}

fn load_one(bits: &Option<String>, input: &Option<PathBuf>) -> Result<BitString> {
    match (bits, input) {
        (Some(b), None) => b.parse(),
        (None, Some(p)) => {
            let f = File::open(p).map_err(|e| Error::Io {
                path: p.display().to_string(),
                source: e,
            })?;
            read_strings(BufReader::new(f))?
                .into_iter()
                .next()
                .ok_or_else(|| {
                    Error::InvalidArg(format!("{} contains no strings", p.display()))
                })
        }
        _ => Err(Error::InvalidArg(
            "provide exactly one of --bits and --input".into(),
        )),
    }
}

fn check_delta(delta: f64, open_left: bool, open_right: bool) -> Result<f64> {
    let ok = (delta > 0.0 || (!open_left && delta >= 0.0))
        && (delta < 1.0 || (!open_right && delta <= 1.0));
    if !ok {
        return Err(Error::InvalidArg(format!(
            "deletion rate {delta} outside the supported range"
        )));
    }
    Ok(delta)
}

fn resolve_delta(delta: Option<f64>, rho: Option<f64>) -> Result<f64> {
    match (delta, rho) {
        (Some(d), None) => Ok(d),
        (None, Some(r)) => Ok(1.0 - r),
        _ => Err(Error::InvalidArg(
            "specify exactly one of --delta and --rho".into(),
        )),
    }
}

fn cmd_generate(cli: &Cli, a: &GenerateArgs, w: &mut Vec<u8>) -> Result<()> {
    let strings: Vec<BitString> = match a.kind {
        SourceKind::Zeros => vec![BitString::zeros(a.n)],
        SourceKind::Ones => vec![BitString::ones(a.n)],
        SourceKind::Alternating => vec![BitString::alternating(a.n)],
        SourceKind::Period28 => vec![zero_trace_bukh_cox(a.n).x_hat],
        SourceKind::Periodic => {
            let r = a
                .period
                .ok_or_else(|| Error::InvalidArg("--period required for kind=periodic".into()))?;
            vec![make_periodic(PeriodicSpec::new(r, a.n)?)]
        }
        SourceKind::BukhMa => bukh_ma_code(a.n, a.inv_eps4, a.ell.unwrap_or(a.n))?,
        SourceKind::Random => (0..a.count)
            .map(|i| {
                let mut rng = ChaCha12Rng::seed_from_u64(cli.seed);
                rng.set_stream(i as u64);
                BitString::from_fn(a.n, |_| rng.gen_bool(0.5))
            })
            .collect(),
    };
    for s in &strings {
        writeln!(w, "{s}")?;
    }
    Ok(())
}

fn cmd_del(cli: &Cli, a: &DelArgs, w: &mut Vec<u8>) -> Result<()> {
    check_delta(a.delta, a.geometric, a.geometric)?;
    let x = load_one(&a.bits, &a.input)?;
    for i in 0..a.count {
        let mut rng = ChaCha12Rng::seed_from_u64(cli.seed);
        rng.set_stream(i as u64);
        let tr = if a.geometric {
            delete_geometric_process(&x, a.delta, &mut rng).0
        } else {
            delete_direct(&x, a.delta, &mut rng)
        };
        writeln!(w, "{}", tr.y)?;
    }
    Ok(())
}

fn cmd_recon(cli: &Cli, a: &ReconArgs, w: &mut Vec<u8>) -> Result<()> {
    let algo: AlgoId = a.algo.parse()?;
    let hyp = match algo {
        AlgoId::ZeroAlt => zero_trace_alternating(a.n),
        AlgoId::ZeroBukhCox => zero_trace_bukh_cox(a.n),
        _ => {
            let delta = a.delta.ok_or_else(|| {
                Error::InvalidArg("--delta required for trace-consuming algorithms".into())
            })?;
            let y = Trace {
                y: load_one(&a.bits, &a.input)?,
                retained: None,
            };
            match algo {
                AlgoId::Cover => {
                    check_delta(delta, false, true)?;
                    one_trace_cover(&y, a.n, 1.0 - delta)
                }
                AlgoId::AlgA => {
                    check_delta(delta, true, true)?;
                    let params = AlgAParams {
                        gamma: a.gamma,
                        block_width: a.block_width,
                    };
                    algorithm_a(&y, a.n, 1.0 - delta, &params)?
                }
                AlgoId::SmallRate => {
                    check_delta(delta, false, true)?;
                    let mut rng = ChaCha12Rng::seed_from_u64(cli.seed);
                    small_rate_reconstruct(&y, a.n, delta, &mut rng)
                }
                _ => unreachable!("zero-trace ids handled above"),
            }
        }
    };
    writeln!(w, "{}", hyp.x_hat)?;
    Ok(())
}

fn build_config(
    cli: &Cli,
    algo: &str,
    n: usize,
    delta: Option<f64>,
    rho: Option<f64>,
    trials: usize,
    gamma: Option<f64>,
    block_width: usize,
) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::new(algo.parse()?, n, resolve_delta(delta, rho)?, cli.seed);
    cfg.trials = trials;
    cfg.alg_a = AlgAParams { gamma, block_width };
    Ok(cfg)
}

fn write_result_text(
    w: &mut Vec<u8>,
    label: Option<&str>,
    r: &deltrace::harness::ExperimentResult,
) -> Result<()> {
    if let Some(l) = label {
        write!(w, "{l:<14} ")?;
    }
    writeln!(
        w,
        "algo={} n={} delta={} trials={} seed={} mean_lcs={:.3} mean/n={:.6} stderr={:.3} ci95=[{:.3},{:.3}]",
        r.algo, r.n, r.delta, r.trials, r.seed, r.mean_lcs,
        r.mean_lcs / r.n as f64, r.stderr, r.ci95_lo, r.ci95_hi
    )?;
    Ok(())
}

fn cmd_experiment(cli: &Cli, a: &ExperimentArgs, w: &mut Vec<u8>) -> Result<()> {
    let mut cfg = build_config(
        cli,
        &a.algo,
        a.n,
        a.delta,
        a.rho,
        a.trials,
        a.gamma,
        a.block_width,
    )?;
    cfg.keep_trials = a.keep_trials;
    cfg.source = match a.source.as_str() {
        "average" => SourceMode::Average,
        "suite" => SourceMode::WorstSuite,
        "explicit" => SourceMode::Explicit(load_one(&a.bits, &a.input)?),
        other => {
            return Err(Error::InvalidArg(format!(
                "unknown source mode '{other}' (expected average | suite | explicit)"
            )))
        }
    };
    let r = run_experiment(&cfg)?;
    match cli.format {
        Format::Csv => emit_csv(std::slice::from_ref(&r), &mut *w)?,
        Format::Json => emit_json(std::slice::from_ref(&r), &mut *w)?,
        Format::Text => write_result_text(w, None, &r)?,
    }
    Ok(())
}

fn cmd_cs_table(cli: &Cli, max_sum: usize, w: &mut Vec<u8>) -> Result<()> {
    if cli.format == Format::Csv {
        writeln!(w, "j,k,value")?;
    }
    for s in 2..=max_sum {
        for j in 1..s {
            let k = s - j;
            if j > k {
                continue;
            }
            let v = cs_value(j, k)?;
            match cli.format {
                Format::Csv => writeln!(w, "{j},{k},{v}")?,
                _ => writeln!(w, "{j}\t{k}\t{v}")?,
            }
        }
    }
    Ok(())
}

fn cmd_deck(a: &DeckArgs, w: &mut Vec<u8>) -> Result<()> {
    let x = load_one(&a.bits, &a.input)?;
    let d = deck(&x, a.k)?;
    serde_json::to_writer_pretty(&mut *w, &d.to_json()).map_err(std::io::Error::from)?;
    writeln!(w)?;
    Ok(())
}

fn parse_usize_list(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|e| Error::Parse(format!("bad period {t:?}: {e}")))
        })
        .collect()
}

fn rational_list(s: &str) -> Result<Vec<BigRational>> {
    s.split(',').map(|t| parse_rational(t.trim())).collect()
}

fn cmd_mixture_verify(a: &MixtureVerifyArgs, w: &mut Vec<u8>) -> Result<ExitCode> {
    let mut specs: Vec<MixtureSpec> = Vec::new();
    let b: Vec<BigRational> = if let Some(r0) = a.schedule_r0 {
        let (periods, b) = geometric_schedule(a.ell, a.k, r0)?;
        specs.push(solve_mixture(a.ell, a.k, periods, b.clone())?);
        b
    } else {
        let raw = a.b.as_ref().ok_or_else(|| {
            Error::InvalidArg("provide --b or --schedule-r0 for the moment vector".into())
        })?;
        rational_list(raw)?
    };
    for set in &a.periods {
        specs.push(solve_mixture(a.ell, a.k, parse_usize_list(set)?, b.clone())?);
    }
    if specs.is_empty() {
        return Err(Error::InvalidArg(
            "no period sets given (use --periods and/or --schedule-r0)".into(),
        ));
    }
    for spec in &specs {
        let p: Vec<String> = spec.p.iter().map(|v| v.to_string()).collect();
        writeln!(
            w,
            "periods=[{}] p=[{}] distribution={}",
            spec.periods
                .iter()
                .map(|r| r.to_string())
                .collect::<Vec<_>>()
                .join(","),
            p.join(","),
            spec.is_distribution()
        )?;
    }
    if specs.len() < 2 {
        writeln!(w, "single mixture solved; nothing to cross-check")?;
        return Ok(ExitCode::SUCCESS);
    }
    let verdict = verify_deck_equality(&specs)?;
    if verdict.ok {
        writeln!(w, "deck-equality: OK ({} mixtures, orders 1..={})", specs.len(), a.k)?;
        Ok(ExitCode::SUCCESS)
    } else {
        writeln!(
            w,
            "deck-equality: MISMATCH {}",
            verdict.mismatch.unwrap_or_default()
        )?;
        Ok(ExitCode::from(1))
    }
}

fn cmd_cover_eval(cli: &Cli, a: &CoverEvalArgs, w: &mut Vec<u8>) -> Result<()> {
    let members: Vec<BitString> = match (&a.strings, &a.input) {
        (Some(s), None) => s
            .split(',')
            .map(|t| t.trim().parse())
            .collect::<Result<_>>()?,
        (None, Some(p)) => {
            let f = File::open(p).map_err(|e| Error::Io {
                path: p.display().to_string(),
                source: e,
            })?;
            read_strings(BufReader::new(f))?
        }
        _ => {
            return Err(Error::InvalidArg(
                "provide exactly one of --strings and --input".into(),
            ))
        }
    };
    let mode = match a.mode {
        ModeArg::Exact => EvalMode::Exact,
        ModeArg::Search => EvalMode::Search {
            restarts: a.restarts,
            seed: cli.seed,
        },
    };
    let h = cover_quality(&members, a.n, mode)?;
    let kind = match a.mode {
        ModeArg::Exact => "exact",
        ModeArg::Search => "search-upper-bound",
    };
    writeln!(
        w,
        "h={h} n={} members={} h/n={:.6} mode={kind}",
        a.n,
        members.len(),
        h as f64 / a.n as f64
    )?;
    Ok(())
}

fn cmd_bounds(cli: &Cli, a: &BoundsArgs, w: &mut Vec<u8>) -> Result<()> {
    check_delta(a.delta, false, true)?;
    writeln!(
        w,
        "series_lower_bound(delta={}, max_sum={}) = {:.9}",
        a.delta,
        a.max_sum,
        series_bound(a.delta, a.max_sum)?
    )?;
    if a.delta > 0.0 && a.delta < 0.5 {
        writeln!(
            w,
            "weak_upper_bound_coefficient(delta={}) = {:.9}",
            a.delta,
            weak_upper_bound_coefficient(a.delta)?
        )?;
    }
    writeln!(w, "c2_upper_bound = {:.9}", c2_upper_bound())?;
    if let Some(n) = a.gamma2_n {
        let mut rng = ChaCha12Rng::seed_from_u64(cli.seed);
        let (mean, (lo, hi)) = gamma2_estimate(n, a.gamma2_trials, &mut rng)?;
        writeln!(
            w,
            "gamma2_estimate(n={n}, trials={}) = {mean:.6} ci95=[{lo:.6},{hi:.6}]",
            a.gamma2_trials
        )?;
    }
    Ok(())
}

fn cmd_suite(cli: &Cli, a: &SuiteArgs, w: &mut Vec<u8>) -> Result<()> {
    let mut cfg = build_config(
        cli,
        &a.algo,
        a.n,
        a.delta,
        a.rho,
        a.trials,
        a.gamma,
        a.block_width,
    )?;
    cfg.source = SourceMode::WorstSuite;
    let results = run_suite(&cfg)?;
    match cli.format {
        Format::Csv => {
            let rows: Vec<_> = results.iter().map(|(_, r)| r.clone()).collect();
            emit_csv(&rows, &mut *w)?;
        }
        Format::Json => {
            let rows: Vec<serde_json::Value> = results
                .iter()
                .map(|(label, r)| {
                    let mut v = serde_json::to_value(r).expect("result serializes");
                    v.as_object_mut()
                        .expect("result is an object")
                        .insert("member".into(), serde_json::Value::String(label.clone()));
                    v
                })
                .collect();
            serde_json::to_writer_pretty(&mut *w, &rows).map_err(std::io::Error::from)?;
            writeln!(w)?;
        }
        Format::Text => {
            let mut worst: Option<(&str, f64)> = None;
            for (label, r) in &results {
                write_result_text(w, Some(label), r)?;
                if worst.is_none() || r.mean_lcs < worst.unwrap().1 {
                    worst = Some((label, r.mean_lcs));
                }
            }
            if let Some((label, mean)) = worst {
                writeln!(
                    w,
                    "suite-min: member={label} mean_lcs={mean:.3} mean/n={:.6}",
                    mean / a.n as f64
                )?;
            }
        }
    }
    Ok(())
}
