//! Search for a good `m ∈ [M, 2M]` and census of the bad sets.
//!
//! For `k = ⌊c log M⌋` and each prime `p ≤ 2k` the scale fixes a digit depth
//! `L_p = ⌊(1−η) log M / log p⌋`, the large-digit probability `θ(p)`, the
//! mean `μ_p = L_p θ(p)`, the spike depth `J_p = ⌊log_p k⌋` and a slack
//! `t(M)`. An `m` is bad for `p` when it has fewer than `μ_p/2` large digits
//! among its first `L_p` digits (a bad carry) or when some `m+i` is divisible
//! by `p^{J_p+t}` (a bad spike).
//!
//! Two goodness predicates are offered. [`Mode::Paper`] avoids both bad
//! events; [`Mode::Direct`] asks for `V_p(m, k) ≤ κ_p(m)` outright. At desk
//! scale `μ_p/2` is far below `J_p + t`, so only the direct predicate implies
//! divisibility; paper-mode hits are re-checked with it before certification.

use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::One;

use crate::divisibility::{factorial_divides, OracleMode, Triple};
use crate::error::{Error, Result};
use crate::primes::{primes_up_to, Prime};
use crate::valuation::{big_digit_count, kappa, v_max};

pub type Rational = Ratio<u64>;

/// Slack allowed on the bound side when comparing exact counts to
/// double-precision bounds.
pub const BOUND_RELATIVE_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TPolicy {
    /// `t = ⌈10 log log M⌉`.
    PaperTenLogLog,
    /// `t = ⌈log log M⌉`.
    AppendixLogLog,
    Fixed(u32),
}

impl TPolicy {
    pub fn evaluate(self, scale: u64) -> u32 {
        let loglog = libm::log(libm::log(scale as f64));
        match self {
            TPolicy::PaperTenLogLog => libm::ceil(10.0 * loglog) as u32,
            TPolicy::AppendixLogLog => libm::ceil(loglog) as u32,
            TPolicy::Fixed(t) => t,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Paper,
    Direct,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchParams {
    /// The scale `M`; the search interval is `[M, 2M]`.
    pub scale: u64,
    pub c: Rational,
    pub c1: Rational,
    pub c2: Rational,
    pub eta: Rational,
    pub t_policy: TPolicy,
    pub mode: Mode,
    pub epsilon: Rational,
}

impl SearchParams {
    pub fn new(scale: u64, c: Rational) -> Self {
        SearchParams {
            scale,
            c,
            c1: Rational::new(1, 2),
            c2: Rational::from_integer(2),
            eta: Rational::new(1, 10),
            t_policy: TPolicy::PaperTenLogLog,
            mode: Mode::Direct,
            epsilon: Rational::new(1, 5),
        }
    }

    pub fn upper(&self) -> Result<u64> {
        self.scale.checked_mul(2).ok_or(Error::Overflow("2M"))
    }

    fn validate_window(&self) -> Result<()> {
        if !(self.c1 < self.c && self.c < self.c2) {
            return Err(Error::InvalidParam(format!(
                "window constants must satisfy C1 < c < C2 (got C1={}, c={}, C2={})",
                self.c1, self.c, self.c2
            )));
        }
        if self.epsilon.is_integer() || self.epsilon >= Rational::new(1, 2) || *self.epsilon.numer() == 0 {
            return Err(Error::InvalidParam(format!("epsilon must lie in (0, 1/2), got {}", self.epsilon)));
        }
        Ok(())
    }
}

/// Per-prime row of the derived parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeRow {
    pub p: Prime,
    /// Digit depth `L_p`.
    pub depth: u32,
    pub theta: Rational,
    pub mu: Rational,
    /// `J_p = ⌊log_p k⌋`.
    pub spike_base: u32,
}

impl PrimeRow {
    /// `X < μ_p / 2`, compared exactly.
    pub fn carry_is_bad(&self, big_digits: u32) -> bool {
        Rational::from_integer(2 * u64::from(big_digits)) < self.mu
    }

    pub fn spike_threshold(&self, t: u32) -> u32 {
        self.spike_base + t
    }

    /// `μ_p / 2 ≥ J_p + t + 3`, the regime where paper-mode goodness implies
    /// `V_p ≤ κ_p`.
    pub fn threshold_holds(&self, t: u32) -> bool {
        self.mu >= Rational::from_integer(2 * u64::from(self.spike_base + t + 3))
    }

    pub fn mu_f64(&self) -> f64 {
        ratio_to_f64(self.mu)
    }
}

/// θ(p): ½ for p = 2, (p−1)/(2p) otherwise.
pub fn theta(p: Prime) -> Rational {
    if p.get() == 2 {
        Rational::new(1, 2)
    } else {
        Rational::new(p.get() - 1, 2 * p.get())
    }
}

pub fn ratio_to_f64(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Largest `L` with `p^L ≤ M^{1−η}`, decided exactly as `p^{L·d} ≤ M^{d−n}`
/// for `η = n/d`.
pub fn digit_depth(scale: u64, p: Prime, eta: Rational) -> Result<u32> {
    let (num, den) = (*eta.numer(), *eta.denom());
    if num >= den {
        return Err(Error::InvalidParam(format!("eta must lie in (0, 1), got {eta}")));
    }
    if den > 10_000 {
        return Err(Error::InvalidParam(format!("eta denominator too large: {eta}")));
    }
    let target = num_traits::pow(BigUint::from(scale), (den - num) as usize);
    let step = num_traits::pow(BigUint::from(p.get()), den as usize);
    let mut acc = BigUint::one();
    let mut depth = 0;
    loop {
        acc *= &step;
        if acc > target {
            return Ok(depth);
        }
        depth += 1;
    }
}

/// `⌊log_p k⌋` for `k ≥ 1`.
pub fn floor_log(k: u64, p: Prime) -> u32 {
    let mut j = 0;
    let mut x = k;
    while x >= p.get() {
        x /= p.get();
        j += 1;
    }
    j
}

#[derive(Debug, Clone, PartialEq)]
pub struct DerivedParams {
    pub scale: u64,
    pub k: u64,
    pub t: u32,
    pub rows: Vec<PrimeRow>,
}

impl DerivedParams {
    pub fn row(&self, p: Prime) -> Option<&PrimeRow> {
        self.rows.iter().find(|r| r.p == p)
    }

    /// Whether `μ_p/2 ≥ J_p + t + 3` holds at every prime `p ≤ 2k`.
    pub fn threshold_holds(&self) -> bool {
        self.rows.iter().all(|r| r.threshold_holds(self.t))
    }
}

/// `k = ⌊c log M⌋`.
pub fn block_length(scale: u64, c: Rational) -> u64 {
    libm::floor(ratio_to_f64(c) * libm::log(scale as f64)) as u64
}

pub fn derive_params(sp: &SearchParams) -> Result<DerivedParams> {
    if sp.scale < 3 {
        return Err(Error::InvalidParam(format!("scale M must be at least 3, got {}", sp.scale)));
    }
    sp.upper()?;
    let k = block_length(sp.scale, sp.c);
    if k == 0 {
        return Err(Error::InvalidParam(format!(
            "k = floor(c log M) = 0 for c = {} and M = {}; increase c or M",
            sp.c, sp.scale
        )));
    }
    let t = sp.t_policy.evaluate(sp.scale);
    let rows = primes_up_to(2 * k)
        .into_iter()
        .map(|p| {
            let depth = digit_depth(sp.scale, p, sp.eta)?;
            let theta = theta(p);
            Ok(PrimeRow {
                p,
                depth,
                theta,
                mu: theta * Rational::from_integer(u64::from(depth)),
                spike_base: floor_log(k, p),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DerivedParams { scale: sp.scale, k, t, rows })
}

pub fn is_bad_carry(m: u64, row: &PrimeRow) -> bool {
    row.carry_is_bad(big_digit_count(m, row.p, row.depth))
}

pub fn is_bad_spike(m: u64, k: u64, row: &PrimeRow, t: u32) -> Result<bool> {
    Ok(v_max(m, k, row.p)? >= row.spike_threshold(t))
}

fn paper_good(m: u64, dp: &DerivedParams) -> Result<bool> {
    for row in &dp.rows {
        if is_bad_carry(m, row) || is_bad_spike(m, dp.k, row, dp.t)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn direct_good(m: u64, dp: &DerivedParams) -> Result<bool> {
    for row in &dp.rows {
        if v_max(m, dp.k, row.p)? > kappa(m, row.p) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Goodness of `m` under `mode` for every prime `p ≤ 2k`.
pub fn is_good(m: u64, dp: &DerivedParams, mode: Mode) -> Result<bool> {
    match mode {
        Mode::Paper => paper_good(m, dp),
        Mode::Direct => direct_good(m, dp),
    }
}

/// Scan predicate: in paper mode a hit must also pass the direct check.
fn is_candidate(m: u64, dp: &DerivedParams, mode: Mode) -> Result<bool> {
    Ok(match mode {
        Mode::Paper => paper_good(m, dp)? && direct_good(m, dp)?,
        Mode::Direct => direct_good(m, dp)?,
    })
}

/// Smallest candidate `m` in `[lo, hi]`.
pub fn scan_range(dp: &DerivedParams, mode: Mode, lo: u64, hi: u64) -> Result<Option<u64>> {
    for m in lo..=hi {
        if is_candidate(m, dp, mode)? {
            return Ok(Some(m));
        }
    }
    Ok(None)
}

/// Merge for first-hit scans over disjoint subranges.
pub fn merge_first_hit(a: Option<u64>, b: Option<u64>) -> Option<u64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

/// Exact bad-set counts over a range, one entry per row of the derived params.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CensusCounts {
    pub bad_carry: Vec<u64>,
    pub bad_spike: Vec<u64>,
    pub bad_union: u64,
    pub interval_size: u64,
}

impl CensusCounts {
    pub fn empty(rows: usize) -> Self {
        CensusCounts {
            bad_carry: alloc::vec![0; rows],
            bad_spike: alloc::vec![0; rows],
            bad_union: 0,
            interval_size: 0,
        }
    }

    pub fn merge(mut self, other: &CensusCounts) -> Self {
        for (a, b) in self.bad_carry.iter_mut().zip(&other.bad_carry) {
            *a += b;
        }
        for (a, b) in self.bad_spike.iter_mut().zip(&other.bad_spike) {
            *a += b;
        }
        self.bad_union += other.bad_union;
        self.interval_size += other.interval_size;
        self
    }
}

pub fn census_range(dp: &DerivedParams, lo: u64, hi: u64) -> Result<CensusCounts> {
    let mut counts = CensusCounts::empty(dp.rows.len());
    for m in lo..=hi {
        let mut bad = false;
        for (i, row) in dp.rows.iter().enumerate() {
            if is_bad_carry(m, row) {
                counts.bad_carry[i] += 1;
                bad = true;
            }
            if is_bad_spike(m, dp.k, row, dp.t)? {
                counts.bad_spike[i] += 1;
                bad = true;
            }
        }
        counts.bad_union += u64::from(bad);
        counts.interval_size += 1;
    }
    Ok(counts)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CensusRow {
    pub p: Prime,
    pub depth: u32,
    pub mu: f64,
    pub spike_base: u32,
    pub t: u32,
    pub bad_carry_count: u64,
    pub bad_carry_bound: f64,
    pub bad_spike_count: u64,
    pub bad_spike_bound: f64,
    pub within_bounds: bool,
    pub threshold_holds: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CensusReport {
    pub scale: u64,
    pub k: u64,
    pub t: u32,
    pub rows: Vec<CensusRow>,
    pub bad_union_count: u64,
    pub interval_size: u64,
}

impl CensusReport {
    pub fn all_within_bounds(&self) -> bool {
        self.rows.iter().all(|r| r.within_bounds)
    }

    /// `|Bad| ≤ Σ_p (|BadCarry_p| + |BadSpike_p|)`.
    pub fn union_within_sum(&self) -> bool {
        let sum: u64 = self.rows.iter().map(|r| r.bad_carry_count + r.bad_spike_count).sum();
        self.bad_union_count <= sum
    }
}

/// `(M+1) e^{−μ_p/8} + 2 p^{L_p}`.
pub fn bad_carry_bound(scale: u64, row: &PrimeRow) -> f64 {
    (scale as f64 + 1.0) * libm::exp(-row.mu_f64() / 8.0) + 2.0 * libm::pow(row.p.get() as f64, f64::from(row.depth))
}

/// `k ((M+1) / p^{J_p+t} + 2)`.
pub fn bad_spike_bound(scale: u64, k: u64, row: &PrimeRow, t: u32) -> f64 {
    let modulus = libm::pow(row.p.get() as f64, f64::from(row.spike_threshold(t)));
    k as f64 * ((scale as f64 + 1.0) / modulus + 2.0)
}

pub fn within_bound(count: u64, bound: f64) -> bool {
    count as f64 <= bound * (1.0 + BOUND_RELATIVE_SLACK)
}

/// Attaches the analytic bounds to exact counts over `[M, 2M]`.
pub fn census_report(dp: &DerivedParams, counts: &CensusCounts) -> CensusReport {
    let rows = dp
        .rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let carry_bound = bad_carry_bound(dp.scale, row);
            let spike_bound = bad_spike_bound(dp.scale, dp.k, row, dp.t);
            CensusRow {
                p: row.p,
                depth: row.depth,
                mu: row.mu_f64(),
                spike_base: row.spike_base,
                t: dp.t,
                bad_carry_count: counts.bad_carry[i],
                bad_carry_bound: carry_bound,
                bad_spike_count: counts.bad_spike[i],
                bad_spike_bound: spike_bound,
                within_bounds: within_bound(counts.bad_carry[i], carry_bound)
                    && within_bound(counts.bad_spike[i], spike_bound),
                threshold_holds: row.threshold_holds(dp.t),
            }
        })
        .collect();
    CensusReport {
        scale: dp.scale,
        k: dp.k,
        t: dp.t,
        rows,
        bad_union_count: counts.bad_union,
        interval_size: counts.interval_size,
    }
}

/// Single-threaded census over `[M, 2M]`.
pub fn census(sp: &SearchParams) -> Result<CensusReport> {
    let dp = derive_params(sp)?;
    let counts = census_range(&dp, sp.scale, sp.upper()?)?;
    Ok(census_report(&dp, &counts))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Witness {
    pub p: Prime,
    /// `X_p(m)`.
    pub big_digits: u32,
    pub kappa: u32,
    pub v_max: u32,
    /// `J_p + t`.
    pub spike_threshold: u32,
    pub bad_carry: bool,
    pub bad_spike: bool,
}

/// Window and band checks for a triple.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowCheck {
    pub log_n: f64,
    pub k_over_log_n: f64,
    /// `C1 log n < k < C2 log n`, when the constants are supplied.
    pub k_in_window: Option<bool>,
    /// `ε n ≤ a, b ≤ (1−ε) n`.
    pub band_ok: bool,
}

impl WindowCheck {
    pub fn evaluate(t: &Triple, window: Option<(Rational, Rational)>, epsilon: Rational) -> Self {
        let log_n = libm::log(t.n as f64);
        let k = t.k as f64;
        let k_in_window = window.map(|(c1, c2)| ratio_to_f64(c1) * log_n < k && k < ratio_to_f64(c2) * log_n);
        let (num, den) = (u128::from(*epsilon.numer()), u128::from(*epsilon.denom()));
        let n = u128::from(t.n);
        let in_band = |x: u64| {
            let x = u128::from(x);
            num * n <= den * x && den * x <= (den - num.min(den)) * n
        };
        WindowCheck { log_n, k_over_log_n: k / log_n, k_in_window, band_ok: in_band(t.a) && in_band(t.b) }
    }

    pub fn ok(&self) -> bool {
        self.band_ok && self.k_in_window.unwrap_or(true)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GoodCertificate {
    pub m: u64,
    pub k: u64,
    pub t: u32,
    pub triple: Triple,
    pub mode: Mode,
    pub witnesses: Vec<Witness>,
    pub paper_good: bool,
    pub direct_good: bool,
    pub threshold_holds: bool,
    pub window: WindowCheck,
    pub window_ok: bool,
    pub divisibility_verified: bool,
    pub oracle_mode: OracleMode,
}

/// Builds the certificate for `m`, re-verifying divisibility of the triple
/// through [`factorial_divides`].
pub fn certify(sp: &SearchParams, dp: &DerivedParams, m: u64) -> Result<GoodCertificate> {
    let witnesses = dp
        .rows
        .iter()
        .map(|row| {
            let big_digits = big_digit_count(m, row.p, row.depth);
            let v = v_max(m, dp.k, row.p)?;
            Ok(Witness {
                p: row.p,
                big_digits,
                kappa: kappa(m, row.p),
                v_max: v,
                spike_threshold: row.spike_threshold(dp.t),
                bad_carry: row.carry_is_bad(big_digits),
                bad_spike: v >= row.spike_threshold(dp.t),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let paper_good = witnesses.iter().all(|w| !w.bad_carry && !w.bad_spike);
    let direct_good = witnesses.iter().all(|w| w.v_max <= w.kappa);
    let triple = Triple::family(m, dp.k)?;
    let window = WindowCheck::evaluate(&triple, Some((sp.c1, sp.c2)), sp.epsilon);
    let verdict = factorial_divides(&triple)?;
    Ok(GoodCertificate {
        m,
        k: dp.k,
        t: dp.t,
        triple,
        mode: sp.mode,
        witnesses,
        paper_good,
        direct_good,
        threshold_holds: dp.threshold_holds(),
        window,
        window_ok: window.ok(),
        divisibility_verified: verdict.divides,
        oracle_mode: verdict.mode,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum ScanOutcome {
    Found(GoodCertificate),
    NotFound(CensusReport),
}

/// Checks the window constraints before a scan.
pub fn prepare_scan(sp: &SearchParams) -> Result<DerivedParams> {
    sp.validate_window()?;
    derive_params(sp)
}

/// Single-threaded scan of `[M, 2M]` for the smallest good `m`.
pub fn scan(sp: &SearchParams) -> Result<ScanOutcome> {
    let dp = prepare_scan(sp)?;
    match scan_range(&dp, sp.mode, sp.scale, sp.upper()?)? {
        Some(m) => Ok(ScanOutcome::Found(certify(sp, &dp, m)?)),
        None => {
            let counts = census_range(&dp, sp.scale, sp.upper()?)?;
            Ok(ScanOutcome::NotFound(census_report(&dp, &counts)))
        }
    }
}
