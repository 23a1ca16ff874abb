//! Finite-scale density experiments.
//!
//! Everything here counts exactly over `m ∈ [2, N]`; the asymptotic
//! statements these experiments probe are not certifiable at this scale, so
//! callers compare fractions and check implications instead.

use alloc::vec::Vec;

use num_traits::Zero;

use crate::divisibility::{binom_divides, binomial_big, range_product, valuation_gap};
use crate::error::{Error, Result};
use crate::primes::{block_prime_divisors, primes_in_range, primes_up_to, Prime};
use crate::search::Rational;
use crate::valuation::{digit_sum, kappa, nu_binomial, nu_factorial, w_sum};

/// Smallest `m` visited by sweeps.
pub const SWEEP_START: u64 = 2;

/// Whether `(m+1)(m+2)⋯(m+k)` divides `C(2m, m)`: `W_p(m, k) ≤ κ_p(m)` at
/// every prime dividing the block.
pub fn interval_product_divides(m: u64, k: u64) -> Result<bool> {
    if k == 0 {
        return Err(Error::EmptyBlock);
    }
    for p in block_prime_divisors(m, k)? {
        if w_sum(m, k, p)? > u64::from(kappa(m, p)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Exact-division route for [`interval_product_divides`].
pub fn interval_product_divides_exact(m: u64, k: u64) -> Result<bool> {
    if k == 0 {
        return Err(Error::EmptyBlock);
    }
    Ok((binomial_big(2 * m, m)? % range_product(m + 1, m + k)).is_zero())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DivisibilityKind {
    IntervalProduct,
    Binomial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KRule {
    /// `k = max(1, ⌊c log m⌋)`.
    CLogM,
    /// `k = ⌊exp(c √log m)⌋`.
    ExpCSqrtLogM,
}

impl KRule {
    pub fn block(self, m: u64, c: f64) -> u64 {
        let log_m = libm::log(m as f64);
        match self {
            KRule::CLogM => (libm::floor(c * log_m) as u64).max(1),
            KRule::ExpCSqrtLogM => libm::floor(libm::exp(c * libm::sqrt(log_m))) as u64,
        }
    }
}

/// Divisibility for every block length `1 ≤ j ≤ k`.
///
/// The interval product for `j` divides the one for `k`, so that kind only
/// needs `j = k`.
pub fn divides_up_to(m: u64, k: u64, kind: DivisibilityKind) -> Result<bool> {
    match kind {
        DivisibilityKind::IntervalProduct => interval_product_divides(m, k),
        DivisibilityKind::Binomial => {
            for j in 1..=k {
                if !binom_divides(m, j)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

/// Hit/total counter; merges by addition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Tally {
    pub hits: u64,
    pub total: u64,
}

impl Tally {
    pub fn merge(self, other: Tally) -> Tally {
        Tally { hits: self.hits + other.hits, total: self.total + other.total }
    }

    pub fn fraction(&self) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.hits as f64 / self.total as f64
        }
    }
}

pub fn density_range(lo: u64, hi: u64, c: f64, kind: DivisibilityKind, rule: KRule) -> Result<Tally> {
    let mut tally = Tally::default();
    for m in lo.max(SWEEP_START)..=hi {
        let k = rule.block(m, c);
        tally.hits += u64::from(divides_up_to(m, k, kind)?);
        tally.total += 1;
    }
    Ok(tally)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityPoint {
    pub n: u64,
    pub c: f64,
    pub kind: DivisibilityKind,
    pub rule: KRule,
    pub total: u64,
    pub hits: u64,
    pub fraction: f64,
}

impl DensityPoint {
    pub fn from_tally(n: u64, c: f64, kind: DivisibilityKind, rule: KRule, tally: Tally) -> Self {
        DensityPoint { n, c, kind, rule, total: tally.total, hits: tally.hits, fraction: tally.fraction() }
    }
}

pub fn validate_sweep(n: u64, c_list: &[f64]) -> Result<()> {
    if n < 100 {
        return Err(Error::InvalidParam(alloc::format!("N must be at least 100, got {n}")));
    }
    if let Some(c) = c_list.iter().find(|c| !(**c > 0.0 && c.is_finite())) {
        return Err(Error::InvalidParam(alloc::format!("c must be positive, got {c}")));
    }
    Ok(())
}

/// Single-threaded sweep over `m ∈ [2, N]` for each `c`.
pub fn density_sweep(n: u64, c_list: &[f64], kind: DivisibilityKind, rule: KRule) -> Result<Vec<DensityPoint>> {
    validate_sweep(n, c_list)?;
    c_list
        .iter()
        .map(|&c| Ok(DensityPoint::from_tally(n, c, kind, rule, density_range(SWEEP_START, n, c, kind, rule)?)))
        .collect()
}

/// `ν₂(k!) > s₂(m) = κ₂(m)` with `k = max(1, ⌊c log m⌋)`: the prime 2 alone
/// rules out `(m+1)⋯(m+k) | C(2m, m)`.
pub fn sharpness_blocked(m: u64, c: f64) -> bool {
    let two = Prime::new(2).expect("2 is prime");
    let k = KRule::CLogM.block(m, c);
    k - digit_sum(k, two) > digit_sum(m, two)
}

/// Blocked count in `hits`.
pub fn sharpness_range(lo: u64, hi: u64, c: f64) -> Tally {
    let mut tally = Tally::default();
    for m in lo.max(SWEEP_START)..=hi {
        tally.hits += u64::from(sharpness_blocked(m, c));
        tally.total += 1;
    }
    tally
}

/// `(blocked, total)` over `m ∈ [2, N]`.
pub fn sharpness_census(n: u64, c: f64) -> (u64, u64) {
    let t = sharpness_range(SWEEP_START, n, c);
    (t.hits, t.total)
}

/// A prime with `κ_p(m) = 0` dividing `C(m+k, k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ObstructionWitness {
    pub m: u64,
    pub k: u64,
    pub p: Prime,
    pub kappa_p: u32,
    pub nu_binom: u64,
}

/// `K(m) = ⌊exp(c √log m)⌋`.
pub fn obstruction_block(m: u64, c: f64) -> u64 {
    KRule::ExpCSqrtLogM.block(m, c)
}

/// Primes `p ∈ (K, (1+δ)K]` whose base-p digits of `m` are all at most
/// `(p−1)/2` and whose lowest digit lies in `[p−K, ⌊(p−1)/2⌋]`. Each
/// candidate is kept only after `ν_p(C(m+K, K)) ≥ 1` is confirmed.
pub fn obstruction_scan_block(m: u64, block: u64, delta: Rational) -> Result<Vec<ObstructionWitness>> {
    if *delta.numer() == 0 || delta >= Rational::from_integer(1) {
        return Err(Error::InvalidParam(alloc::format!("delta must lie in (0, 1), got {delta}")));
    }
    let top = u128::from(block) * u128::from(delta.denom() + delta.numer()) / u128::from(*delta.denom());
    let top = u64::try_from(top).map_err(|_| Error::Overflow("(1+δ)K"))?;
    let upper = m.checked_add(block).ok_or(Error::Overflow("m + K"))?;
    let mut out = Vec::new();
    for p in primes_in_range(block + 1, top.saturating_add(1)) {
        let pv = p.get();
        let low = m % pv;
        if low + block < pv || low > (pv - 1) / 2 || kappa(m, p) != 0 {
            continue;
        }
        let nu = nu_binomial(upper, block, p)?;
        if nu >= 1 {
            out.push(ObstructionWitness { m, k: block, p, kappa_p: 0, nu_binom: nu });
        }
    }
    Ok(out)
}

pub fn obstruction_scan(m: u64, c: f64, delta: Rational) -> Result<Vec<ObstructionWitness>> {
    if m < 16 {
        return Err(Error::InvalidParam(alloc::format!("m must be at least 16, got {m}")));
    }
    obstruction_scan_block(m, obstruction_block(m, c), delta)
}

/// Which primes carry the `c₂ log m / log p` margin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PrimeBoundRule {
    /// `p ≤ 2k`.
    TwoK,
    Fixed(u64),
    /// `p ≤ ⌊exp(c_p √log m)⌋`.
    ExpCSqrtLogM(f64),
}

impl PrimeBoundRule {
    pub fn bound(self, m: u64, k: u64) -> u64 {
        match self {
            PrimeBoundRule::TwoK => 2 * k,
            PrimeBoundRule::Fixed(b) => b,
            PrimeBoundRule::ExpCSqrtLogM(cp) => KRule::ExpCSqrtLogM.block(m, cp),
        }
    }
}

/// Whether, for every `0 ≤ k ≤ K` and every prime `p`,
/// `κ_p(m) − ν_p(C(m+k, k)) ≥ c₂ log m / log p · [p ≤ bound]`.
///
/// Primes outside both the margin range and the prime divisors of the block
/// have `ν_p(C(m+k, k)) = 0` and a zero margin, so they always pass.
pub fn gap_holds(m: u64, max_k: u64, c2: f64, rule: PrimeBoundRule) -> Result<bool> {
    let log_m = libm::log(m as f64);
    for k in 0..=max_k {
        let bound = rule.bound(m, k);
        let mut primes = primes_up_to(bound);
        if k > 0 {
            primes.extend(block_prime_divisors(m, k)?);
            primes.sort_unstable();
            primes.dedup();
        }
        for p in primes {
            let margin = if p.get() <= bound { c2 * log_m / libm::log(p.get() as f64) } else { 0.0 };
            if (valuation_gap(m, k, p)? as f64) < margin {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub fn gap_range(lo: u64, hi: u64, c: f64, c2: f64, rule: PrimeBoundRule, k_rule: KRule) -> Result<Tally> {
    let mut tally = Tally::default();
    for m in lo.max(SWEEP_START)..=hi {
        tally.hits += u64::from(gap_holds(m, k_rule.block(m, c), c2, rule)?);
        tally.total += 1;
    }
    Ok(tally)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapSummary {
    pub n: u64,
    pub c: f64,
    pub c2: f64,
    pub total: u64,
    pub hits: u64,
    pub fraction: f64,
}

pub fn gap_statistics(n: u64, c: f64, c2: f64, rule: PrimeBoundRule, k_rule: KRule) -> Result<GapSummary> {
    validate_sweep(n, &[c])?;
    let t = gap_range(SWEEP_START, n, c, c2, rule, k_rule)?;
    Ok(GapSummary { n, c, c2, total: t.total, hits: t.hits, fraction: t.fraction() })
}

/// ν₂(k!) via Legendre, for cross-checking `k − s₂(k)`.
pub fn nu2_factorial(k: u64) -> u64 {
    nu_factorial(k, Prime::new(2).expect("2 is prime"))
}
