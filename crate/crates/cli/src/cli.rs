//! Argument definitions and subcommand dispatch.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use erdos728_core::carry_chain::{
    empirical_chain_check, optimal_tilt, rate_function, tail_bounds, tilt_identity_residual, CarryChainSpec,
};
use erdos728_core::density::{
    obstruction_block, obstruction_scan_block, validate_sweep, DivisibilityKind, KRule, PrimeBoundRule, SWEEP_START,
};
use erdos728_core::divisibility::{binom_divides, factorial_divides, failing_primes, Triple};
use erdos728_core::primes::primes_up_to;
use erdos728_core::search::{ratio_to_f64, Mode, Rational, ScanOutcome, SearchParams, TPolicy};
use erdos728_core::valuation::ValuationProfile;
use erdos728_core::Prime;

use crate::emit::{fmt_f64, with_output, write_json, Csv};
use crate::error::{CliError, CliResult};
use crate::figure1::{self, Figure1Params};
use crate::parallel::Runner;
use crate::parse::{parse_natural, parse_prime_bound, parse_rational, parse_t_policy, prime_bound_name};
use crate::report::{
    oracle_mode_name, CensusJson, MonteCarloReport, ObstructionJson, ProfileJson, SearchReport, TripleReport,
    VerifyReport,
};

pub const CENSUS_HEADER: [&str; 10] = [
    "p",
    "L_p",
    "mu_p",
    "J_p",
    "t",
    "bad_carry_count",
    "bad_carry_bound",
    "bad_spike_count",
    "bad_spike_bound",
    "within_bounds",
];
pub const CHAIN_HEADER: [&str; 8] = ["p", "L", "s", "exact_tail", "tilted_bound", "chernoff_bound", "rho", "C"];
pub const RATE_HEADER: [&str; 4] = ["delta", "I_delta", "lambda_star", "identity_residual"];
pub const DENSITY_HEADER: [&str; 7] = ["N", "c", "kind", "k_rule", "total", "hits", "fraction"];
pub const SHARPNESS_HEADER: [&str; 4] = ["N", "c", "blocked", "total"];
pub const GAP_HEADER: [&str; 8] = ["N", "c", "c2", "prime_bound", "k_rule", "total", "hits", "fraction"];

fn default_threads() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

#[derive(Debug, Parser)]
#[command(name = "erdos728", version, about = "Carry-counting experiments on factorial and binomial divisibility")]
pub struct Cli {
    /// File of `key = value` lines supplying defaults for the subcommand's flags
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide C(m+k, k) | C(2m, m) and list per-prime valuations (JSON)
    Verify(VerifyArgs),
    /// Decide a! b! | n! k! for k = a + b - n and check the ε-band (JSON)
    Triple(TripleArgs),
    /// Find the smallest good m in [M, 2M] and certify it (JSON)
    Search(SearchArgs),
    /// Count bad-carry and bad-spike events over [M, 2M] beside their bounds (CSV)
    Census(SearchArgs),
    /// Exact lower tails of the carry count with Chernoff and tilted bounds (CSV)
    Chain(ChainArgs),
    /// Rate function, optimal tilt and the tilt identity on a δ grid (CSV)
    Rate(RateArgs),
    /// Seeded Monte Carlo estimate of the mean carry fraction (JSON)
    Montecarlo(MonteCarloArgs),
    /// Fraction of m ≤ N whose block divisibility holds (CSV)
    Density(DensityArgs),
    /// Count m ≤ N blocked at the prime 2 (CSV)
    Sharpness(SharpnessArgs),
    /// Primes p with κ_p(m) = 0 that divide C(m+K, K) (JSON)
    Obstruct(ObstructArgs),
    /// Raw and smoothed ν_p(C(m+k, k)) and κ_p(m), one CSV per prime
    Figure1(Figure1Args),
    /// Fraction of m ≤ N whose valuation gaps clear a c2·log m / log p margin (CSV)
    Gap(GapArgs),
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Write to this file instead of stdout
    #[arg(long, short, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ThreadArgs {
    /// Worker threads; results do not depend on this
    #[arg(long, default_value_t = default_threads())]
    pub threads: usize,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_parser = parse_natural)]
    pub m: u64,
    #[arg(long, value_parser = parse_natural)]
    pub k: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct TripleArgs {
    #[arg(long, value_parser = parse_natural)]
    pub a: u64,
    #[arg(long, value_parser = parse_natural)]
    pub b: u64,
    #[arg(long, value_parser = parse_natural)]
    pub n: u64,
    /// Band width: ε n ≤ a, b ≤ (1 − ε) n
    #[arg(long, value_parser = parse_rational, default_value = "1/5")]
    pub epsilon: Rational,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Paper,
    Direct,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Paper => Mode::Paper,
            ModeArg::Direct => Mode::Direct,
        }
    }
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    /// Scale M; the interval is [M, 2M]
    #[arg(long = "M", value_parser = parse_natural)]
    pub scale: u64,
    /// k = ⌊c ln M⌋
    #[arg(long, value_parser = parse_rational)]
    pub c: Rational,
    #[arg(long = "C1", value_parser = parse_rational, default_value = "1/2")]
    pub c1: Rational,
    #[arg(long = "C2", value_parser = parse_rational, default_value = "2")]
    pub c2: Rational,
    #[arg(long, value_parser = parse_rational, default_value = "1/5")]
    pub epsilon: Rational,
    /// Digit depth exponent: p^{L_p} ≤ M^{1-η}
    #[arg(long, value_parser = parse_rational, default_value = "1/10")]
    pub eta: Rational,
    #[arg(long, value_enum, default_value_t = ModeArg::Direct)]
    pub mode: ModeArg,
    /// paper (⌈10 ln ln M⌉), appendix (⌈ln ln M⌉) or fixed:N
    #[arg(long = "t-policy", value_parser = parse_t_policy, default_value = "paper")]
    pub t_policy: TPolicy,
    /// Exit with status 3 when no good m exists
    #[arg(long = "require-hit")]
    pub require_hit: bool,
    #[command(flatten)]
    pub threads: ThreadArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

impl SearchArgs {
    pub fn params(&self) -> SearchParams {
        SearchParams {
            scale: self.scale,
            c: self.c,
            c1: self.c1,
            c2: self.c2,
            eta: self.eta,
            t_policy: self.t_policy,
            mode: self.mode.into(),
            epsilon: self.epsilon,
        }
    }
}

#[derive(Debug, Args)]
pub struct ChainArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    pub p: Vec<u64>,
    #[arg(long = "L", value_delimiter = ',', required = true)]
    pub len: Vec<u32>,
    /// Tail thresholds s in S_L ≤ sL
    #[arg(long, value_delimiter = ',', value_parser = parse_rational)]
    pub s: Vec<Rational>,
    /// Deviations δ, giving s = (1 − δ)/2
    #[arg(long, value_delimiter = ',', value_parser = parse_rational)]
    pub delta: Vec<Rational>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct RateArgs {
    /// δ values in (0, 1); defaults to 0.05, 0.10, …, 0.95
    #[arg(long, value_delimiter = ',')]
    pub delta: Vec<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct MonteCarloArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long = "L")]
    pub len: u32,
    #[arg(long, value_parser = parse_natural, default_value = "100000")]
    pub trials: u64,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    #[value(name = "interval-product")]
    IntervalProduct,
    #[value(name = "binomial")]
    Binomial,
}

impl KindArg {
    fn core(self) -> DivisibilityKind {
        match self {
            KindArg::IntervalProduct => DivisibilityKind::IntervalProduct,
            KindArg::Binomial => DivisibilityKind::Binomial,
        }
    }

    fn name(self) -> &'static str {
        match self {
            KindArg::IntervalProduct => "interval-product",
            KindArg::Binomial => "binomial",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KRuleArg {
    #[value(name = "c-log-m")]
    CLogM,
    #[value(name = "exp-c-sqrt-log-m")]
    ExpCSqrtLogM,
}

impl KRuleArg {
    fn core(self) -> KRule {
        match self {
            KRuleArg::CLogM => KRule::CLogM,
            KRuleArg::ExpCSqrtLogM => KRule::ExpCSqrtLogM,
        }
    }

    fn name(self) -> &'static str {
        match self {
            KRuleArg::CLogM => "c-log-m",
            KRuleArg::ExpCSqrtLogM => "exp-c-sqrt-log-m",
        }
    }
}

#[derive(Debug, Args)]
pub struct DensityArgs {
    /// Sweep m over [2, N]
    #[arg(long = "N", value_parser = parse_natural)]
    pub n: u64,
    #[arg(long, value_delimiter = ',', required = true)]
    pub c: Vec<f64>,
    #[arg(long, value_enum, default_value_t = KindArg::IntervalProduct)]
    pub kind: KindArg,
    #[arg(long = "k-rule", value_enum, default_value_t = KRuleArg::CLogM)]
    pub k_rule: KRuleArg,
    #[command(flatten)]
    pub threads: ThreadArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SharpnessArgs {
    #[arg(long = "N", value_parser = parse_natural)]
    pub n: u64,
    #[arg(long, value_delimiter = ',', required = true)]
    pub c: Vec<f64>,
    #[command(flatten)]
    pub threads: ThreadArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ObstructArgs {
    /// Values of m to scan
    #[arg(long, value_delimiter = ',', value_parser = parse_natural)]
    pub m: Vec<u64>,
    /// Scan every m in [m-lo, m-hi] as well
    #[arg(long = "m-lo", value_parser = parse_natural, requires = "m_hi")]
    pub m_lo: Option<u64>,
    #[arg(long = "m-hi", value_parser = parse_natural, requires = "m_lo")]
    pub m_hi: Option<u64>,
    /// K = ⌊exp(c √ln m)⌋
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
    /// Use this K instead of the c rule
    #[arg(long = "K", value_parser = parse_natural)]
    pub block: Option<u64>,
    /// Prime window (K, (1 + δ) K]
    #[arg(long, value_parser = parse_rational, default_value = "1/2")]
    pub delta: Rational,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct Figure1Args {
    #[arg(long = "m-lo", value_parser = parse_natural, default_value = "1000")]
    pub m_lo: u64,
    #[arg(long = "m-hi", value_parser = parse_natural, default_value = "2000")]
    pub m_hi: u64,
    #[arg(long, value_parser = parse_natural, default_value = "10")]
    pub k: u64,
    #[arg(long, value_delimiter = ',', default_value = "2,13")]
    pub p: Vec<u64>,
    /// Odd moving-average width
    #[arg(long, default_value_t = 25)]
    pub window: usize,
    /// Directory receiving figure1_p<p>.csv
    #[arg(long = "out-dir", default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct GapArgs {
    #[arg(long = "N", value_parser = parse_natural)]
    pub n: u64,
    #[arg(long, value_delimiter = ',', required = true)]
    pub c: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "0")]
    pub c2: Vec<f64>,
    /// two-k, fixed:B or exp:C
    #[arg(long = "prime-bound", value_parser = parse_prime_bound, default_value = "two-k")]
    pub prime_bound: PrimeBoundRule,
    #[arg(long = "k-rule", value_enum, default_value_t = KRuleArg::CLogM)]
    pub k_rule: KRuleArg,
    #[command(flatten)]
    pub threads: ThreadArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

fn prime(p: u64) -> CliResult<Prime> {
    Ok(Prime::new(p)?)
}

fn emit_csv(out: &OutputArgs, stdout: &mut dyn Write, csv: &Csv) -> CliResult<()> {
    Ok(with_output(out.out.as_deref(), stdout, |w| csv.write_to(w))?)
}

fn emit_json<T: serde::Serialize>(out: &OutputArgs, stdout: &mut dyn Write, value: &T) -> CliResult<()> {
    Ok(with_output(out.out.as_deref(), stdout, |w| write_json(w, value))?)
}

fn runner(t: &ThreadArgs) -> CliResult<Runner> {
    if t.threads == 0 {
        return Err(CliError::Usage("--threads must be at least 1".into()));
    }
    Ok(Runner::new(t.threads)?)
}

pub fn verify(args: &VerifyArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let (m, k) = (args.m, args.k);
    let verdict = factorial_divides(&Triple::family(m, k)?)?;
    let divides = binom_divides(m, k)?;
    if divides != verdict.divides {
        return Err(CliError::internal(format!("factorial and binomial forms disagree at m={m}, k={k}")));
    }
    let failing = failing_primes(m, k)?;
    let mut primes = if k == 0 { Vec::new() } else { primes_up_to(2 * k) };
    primes.extend(failing.iter().copied().filter(|p| p.get() > 2 * k));
    let profiles = primes
        .iter()
        .map(|&p| Ok(ProfileJson::from(&ValuationProfile::compute(m, k, p)?)))
        .collect::<CliResult<Vec<_>>>()?;
    let report = VerifyReport {
        m,
        k,
        binom_divides: divides,
        profiles,
        failing_primes: failing.iter().map(|p| p.get()).collect(),
        oracle_mode: oracle_mode_name(verdict.mode),
    };
    emit_json(&args.output, stdout, &report)
}

fn check_epsilon(eps: Rational) -> CliResult<()> {
    if *eps.numer() == 0 || eps >= Rational::new(1, 2) {
        return Err(CliError::Usage(format!("epsilon must lie in (0, 1/2), got {eps}")));
    }
    Ok(())
}

pub fn triple(args: &TripleArgs, stdout: &mut dyn Write) -> CliResult<()> {
    check_epsilon(args.epsilon)?;
    let t = Triple::new(args.a, args.b, args.n);
    let verdict = factorial_divides(&t)?;
    let window = erdos728_core::search::WindowCheck::evaluate(&t, None, args.epsilon);
    let report = TripleReport {
        a: t.a,
        b: t.b,
        n: t.n,
        k: t.k,
        divides: verdict.divides,
        failing_prime: verdict.failing_prime.map(Prime::get),
        oracle_mode: oracle_mode_name(verdict.mode),
        epsilon: crate::parse::ratio_string(args.epsilon),
        log_n: window.log_n,
        k_over_log_n: window.k_over_log_n,
        band_ok: window.band_ok,
    };
    emit_json(&args.output, stdout, &report)
}

pub fn search(args: &SearchArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let sp = args.params();
    let outcome = runner(&args.threads)?.search(&sp)?;
    let report = match &outcome {
        ScanOutcome::Found(cert) => {
            if !cert.divisibility_verified {
                return Err(CliError::internal(format!("certificate for m={} failed re-verification", cert.m)));
            }
            SearchReport { found: true, params: (&sp).into(), certificate: Some(cert.into()), census: None }
        }
        ScanOutcome::NotFound(census) => SearchReport {
            found: false,
            params: (&sp).into(),
            certificate: None,
            census: Some(CensusJson::from(census)),
        },
    };
    emit_json(&args.output, stdout, &report)?;
    if args.require_hit && !report.found {
        return Err(CliError::Miss);
    }
    Ok(())
}

pub fn census(args: &SearchArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let report = runner(&args.threads)?.census(&args.params())?;
    let mut csv = Csv::new(&CENSUS_HEADER);
    for r in &report.rows {
        csv.push(vec![
            r.p.to_string(),
            r.depth.to_string(),
            fmt_f64(r.mu),
            r.spike_base.to_string(),
            r.t.to_string(),
            r.bad_carry_count.to_string(),
            fmt_f64(r.bad_carry_bound),
            r.bad_spike_count.to_string(),
            fmt_f64(r.bad_spike_bound),
            r.within_bounds.to_string(),
        ]);
    }
    emit_csv(&args.output, stdout, &csv)
}

/// A tail specification for threshold `s`: the Bernoulli optimal tilt when
/// `s < 1/2`, and no tilt otherwise.
fn chain_spec(p: Prime, len: u32, s: Rational) -> CliResult<CarryChainSpec> {
    let half = Rational::new(1, 2);
    if s < half {
        let delta = Rational::from_integer(1) - s * Rational::from_integer(2);
        Ok(CarryChainSpec::from_delta(p, len, delta)?)
    } else {
        Ok(CarryChainSpec { p, len, s, delta: None, lambda: 0.0 })
    }
}

pub fn chain(args: &ChainArgs, stdout: &mut dyn Write) -> CliResult<()> {
    if args.s.is_empty() && args.delta.is_empty() {
        return Err(CliError::Usage("give --s or --delta".into()));
    }
    if let Some(&len) = args.len.iter().find(|&&l| l > 10_000) {
        return Err(CliError::Usage(format!("L must be at most 10000, got {len}")));
    }
    let mut csv = Csv::new(&CHAIN_HEADER);
    for &p in &args.p {
        let p = prime(p)?;
        for &len in &args.len {
            let mut specs = args.s.iter().map(|&s| chain_spec(p, len, s)).collect::<CliResult<Vec<_>>>()?;
            for &d in &args.delta {
                specs.push(CarryChainSpec::from_delta(p, len, d)?);
            }
            for spec in specs {
                let res = tail_bounds(&spec)?;
                if !res.bounds_hold() {
                    return Err(CliError::internal(format!(
                        "tail bound violated at p={p}, L={len}, s={}: exact {} > bound {}",
                        spec.s, res.exact, res.tilted_bound
                    )));
                }
                csv.push(vec![
                    p.to_string(),
                    len.to_string(),
                    fmt_f64(ratio_to_f64(spec.s)),
                    fmt_f64(res.exact),
                    fmt_f64(res.tilted_bound),
                    res.chernoff_bound.map(fmt_f64).unwrap_or_default(),
                    fmt_f64(res.rho_used),
                    fmt_f64(res.c_used),
                ]);
            }
        }
    }
    emit_csv(&args.output, stdout, &csv)
}

pub fn rate(args: &RateArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let deltas: Vec<f64> =
        if args.delta.is_empty() { (1..=19).map(|j| f64::from(j) / 20.0).collect() } else { args.delta.clone() };
    let mut csv = Csv::new(&RATE_HEADER);
    for d in deltas {
        csv.push(vec![
            fmt_f64(d),
            fmt_f64(rate_function(d)?),
            fmt_f64(optimal_tilt(d)?),
            fmt_f64(tilt_identity_residual(d)?),
        ]);
    }
    emit_csv(&args.output, stdout, &csv)
}

pub fn montecarlo(args: &MonteCarloArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let est = empirical_chain_check(prime(args.p)?, args.len, args.trials, args.seed)?;
    let sigmas = |target: f64| if est.std_error > 0.0 { (est.mean - target) / est.std_error } else { 0.0 };
    let report = MonteCarloReport {
        p: args.p,
        len: args.len,
        trials: args.trials,
        seed: args.seed,
        mean: est.mean,
        std_error: est.std_error,
        expected: est.expected,
        sigmas_from_expected: sigmas(est.expected),
        sigmas_from_half: sigmas(0.5),
    };
    emit_json(&args.output, stdout, &report)
}

pub fn density(args: &DensityArgs, stdout: &mut dyn Write) -> CliResult<()> {
    validate_sweep(args.n, &args.c)?;
    let run = runner(&args.threads)?;
    let mut csv = Csv::new(&DENSITY_HEADER);
    for &c in &args.c {
        let tally = run.density(SWEEP_START, args.n, c, args.kind.core(), args.k_rule.core())?;
        csv.push(vec![
            args.n.to_string(),
            fmt_f64(c),
            args.kind.name().into(),
            args.k_rule.name().into(),
            tally.total.to_string(),
            tally.hits.to_string(),
            fmt_f64(tally.fraction()),
        ]);
    }
    emit_csv(&args.output, stdout, &csv)
}

pub fn sharpness(args: &SharpnessArgs, stdout: &mut dyn Write) -> CliResult<()> {
    validate_sweep(args.n, &args.c)?;
    let run = runner(&args.threads)?;
    let mut csv = Csv::new(&SHARPNESS_HEADER);
    for &c in &args.c {
        let tally = run.sharpness(SWEEP_START, args.n, c);
        csv.push(vec![args.n.to_string(), fmt_f64(c), tally.hits.to_string(), tally.total.to_string()]);
    }
    emit_csv(&args.output, stdout, &csv)
}

pub fn obstruct(args: &ObstructArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let mut ms = args.m.clone();
    if let (Some(lo), Some(hi)) = (args.m_lo, args.m_hi) {
        if lo > hi {
            return Err(CliError::Usage(format!("m-lo ({lo}) exceeds m-hi ({hi})")));
        }
        ms.extend(lo..=hi);
    }
    if ms.is_empty() {
        return Err(CliError::Usage("give --m or --m-lo/--m-hi".into()));
    }
    let mut witnesses = Vec::new();
    for m in ms {
        let block = match args.block {
            Some(k) => k,
            None if m < 16 => return Err(CliError::Usage(format!("m must be at least 16 without --K, got {m}"))),
            None => obstruction_block(m, args.c),
        };
        for w in obstruction_scan_block(m, block, args.delta)? {
            if binom_divides(m, block)? {
                return Err(CliError::internal(format!("witness p={} at m={m} does not block divisibility", w.p)));
            }
            witnesses.push(ObstructionJson::from(&w));
        }
    }
    emit_json(&args.output, stdout, &witnesses)
}

pub fn figure1(args: &Figure1Args) -> CliResult<Vec<PathBuf>> {
    let params = Figure1Params { m_lo: args.m_lo, m_hi: args.m_hi, k: args.k, window: args.window };
    let mut written = Vec::new();
    for &p in &args.p {
        let p = prime(p)?;
        let csv = figure1::to_csv(&figure1::rows(&params, p)?);
        let path = args.out_dir.join(figure1::file_name(p));
        with_output(Some(&path), &mut std::io::sink(), |w| csv.write_to(w))?;
        written.push(path);
    }
    Ok(written)
}

pub fn gap(args: &GapArgs, stdout: &mut dyn Write) -> CliResult<()> {
    validate_sweep(args.n, &args.c)?;
    if let Some(c2) = args.c2.iter().find(|c2| !(**c2 >= 0.0 && c2.is_finite())) {
        return Err(CliError::Usage(format!("c2 must be non-negative, got {c2}")));
    }
    let run = runner(&args.threads)?;
    let mut csv = Csv::new(&GAP_HEADER);
    for &c in &args.c {
        for &c2 in &args.c2 {
            let tally = run.gap(SWEEP_START, args.n, c, c2, args.prime_bound, args.k_rule.core())?;
            csv.push(vec![
                args.n.to_string(),
                fmt_f64(c),
                fmt_f64(c2),
                prime_bound_name(args.prime_bound),
                args.k_rule.name().into(),
                tally.total.to_string(),
                tally.hits.to_string(),
                fmt_f64(tally.fraction()),
            ]);
        }
    }
    emit_csv(&args.output, stdout, &csv)
}

pub fn dispatch(cli: &Cli, stdout: &mut dyn Write) -> CliResult<()> {
    match &cli.command {
        Command::Verify(a) => verify(a, stdout),
        Command::Triple(a) => triple(a, stdout),
        Command::Search(a) => search(a, stdout),
        Command::Census(a) => census(a, stdout),
        Command::Chain(a) => chain(a, stdout),
        Command::Rate(a) => rate(a, stdout),
        Command::Montecarlo(a) => montecarlo(a, stdout),
        Command::Density(a) => density(a, stdout),
        Command::Sharpness(a) => sharpness(a, stdout),
        Command::Obstruct(a) => obstruct(a, stdout),
        Command::Figure1(a) => {
            for path in figure1(a)? {
                writeln!(stdout, "{}", path.display())?;
            }
            Ok(())
        }
        Command::Gap(a) => gap(a, stdout),
    }
}

/// Parses `args` (config file included) and runs the subcommand. Help and
/// version requests print and return `Ok`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write) -> CliResult<()>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let args = crate::config::expand_args(args.into_iter().map(Into::into).collect()).map_err(CliError::Usage)?;
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if e.exit_code() == 0 => {
            write!(stdout, "{e}")?;
            return Ok(());
        }
        Err(e) => return Err(CliError::Usage(e.render().to_string())),
    };
    dispatch(&cli, stdout)
}
