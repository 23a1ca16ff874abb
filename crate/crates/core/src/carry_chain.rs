//! The carry chain of base-p doubling.
//!
//! For `m` uniform on `{0, …, p^L − 1}` with digits `a_i`, the carries
//! `C_0 = 0`, `C_{i+1} = [2 a_i + C_i ≥ p]` form a two-state Markov chain.
//! This module builds its transition and tilted matrices, the Perron
//! eigenvalue `ρ_p(λ)`, the tilt constant `C_p(λ) = R²`, the rate function
//! `I(δ)`, and the exact law of `S_L = C_1 + ⋯ + C_L` by dynamic programming.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::Zero;
use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::error::{Error, Result};
use crate::primes::Prime;
use crate::search::{ratio_to_f64, Rational};
use crate::valuation::truncated_carry_count;

/// Row-stochastic 2×2 matrix indexed by (incoming carry, produced carry).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionMatrix {
    pub entries: [[f64; 2]; 2],
}

/// Number of digits `a ∈ {0, …, p−1}` taking carry `u` to carry `v`.
pub fn transition_counts(p: Prime) -> [[u64; 2]; 2] {
    let p = p.get();
    let mut counts = [[0u64; 2]; 2];
    for (u, row) in counts.iter_mut().enumerate() {
        // 2a + u ≥ p  ⇔  a ≥ ⌈(p − u)/2⌉
        let first_carrying = (p - u as u64).div_ceil(2);
        row[1] = p - first_carrying;
        row[0] = first_carrying;
    }
    counts
}

/// Closed form: diagonal `½ + 1/(2p)`, off-diagonal `½ − 1/(2p)` for odd p;
/// both rows `(½, ½)` for p = 2.
pub fn transition_matrix(p: Prime) -> TransitionMatrix {
    if p.get() == 2 {
        return TransitionMatrix { entries: [[0.5, 0.5], [0.5, 0.5]] };
    }
    let shift = 0.5 / p.get() as f64;
    let stay = 0.5 + shift;
    let switch = 0.5 - shift;
    TransitionMatrix { entries: [[stay, switch], [switch, stay]] }
}

/// `T_p(λ)(u, v) = P_p(u, v) e^{λ v}`.
pub fn tilted_matrix(p: Prime, lambda: f64) -> [[f64; 2]; 2] {
    let w = libm::exp(lambda);
    let [[a, b], [c, d]] = transition_matrix(p).entries;
    [[a, b * w], [c, d * w]]
}

/// Perron eigenvalue of the tilted matrix, from the 2×2 characteristic polynomial.
pub fn tilted_eigenvalue(p: Prime, lambda: f64) -> f64 {
    let [[a, b], [c, d]] = tilted_matrix(p, lambda);
    let trace = a + d;
    let det = a * d - b * c;
    let disc = (trace * trace - 4.0 * det).max(0.0);
    0.5 * (trace + libm::sqrt(disc))
}

/// `ρ_∞(λ) = (1 + e^λ)/2`, the large-p limit.
pub fn limit_eigenvalue(lambda: f64) -> f64 {
    0.5 * (1.0 + libm::exp(lambda))
}

/// Right Perron eigenvector normalized so its smaller entry is 1.
pub fn perron_vector(p: Prime, lambda: f64) -> [f64; 2] {
    let [[a, b], _] = tilted_matrix(p, lambda);
    let rho = tilted_eigenvalue(p, lambda);
    // First row of (T − ρ) v = 0 gives v ∝ (b, ρ − a).
    let v = [b, rho - a];
    let lo = v[0].min(v[1]);
    [v[0] / lo, v[1] / lo]
}

/// `R = max(v)` for the min-normalized Perron vector.
pub fn perron_ratio(p: Prime, lambda: f64) -> f64 {
    let v = perron_vector(p, lambda);
    v[0].max(v[1])
}

/// `C_p(λ) = R²`, so that `E[e^{λ S_L}] ≤ C_p(λ) ρ_p(λ)^L` for every L.
pub fn tilt_constant(p: Prime, lambda: f64) -> f64 {
    let r = perron_ratio(p, lambda);
    r * r
}

/// `E[e^{λ S_L}] = e₀ᵀ T_p(λ)^L 𝟏`.
pub fn mgf(p: Prime, lambda: f64, len: u32) -> f64 {
    let t = tilted_matrix(p, lambda);
    let mut v = [1.0, 1.0];
    for _ in 0..len {
        v = [t[0][0] * v[0] + t[0][1] * v[1], t[1][0] * v[0] + t[1][1] * v[1]];
    }
    v[0]
}

fn check_delta(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParam(format!("delta must lie in (0, 1), got {delta}")));
    }
    Ok(())
}

/// `I(δ) = ½((1−δ) log(1−δ) + (1+δ) log(1+δ))`.
pub fn rate_function(delta: f64) -> Result<f64> {
    check_delta(delta)?;
    let lo = 1.0 - delta;
    let hi = 1.0 + delta;
    Ok(0.5 * (lo * libm::log1p(-delta) + hi * libm::log1p(delta)))
}

/// `λ* = log((1−δ)/(1+δ))`.
pub fn optimal_tilt(delta: f64) -> Result<f64> {
    check_delta(delta)?;
    Ok(libm::log1p(-delta) - libm::log1p(delta))
}

/// `λ* s − log ρ_∞(λ*) − I(δ)` at `s = (1−δ)/2`; zero up to rounding.
pub fn tilt_identity_residual(delta: f64) -> Result<f64> {
    let lambda = optimal_tilt(delta)?;
    let s = 0.5 * (1.0 - delta);
    Ok(lambda * s - libm::log(limit_eigenvalue(lambda)) - rate_function(delta)?)
}

/// Whether `log ρ_p(λ*) ≤ log ρ_∞(λ*) + ε` at the optimal tilt for `δ`.
pub fn eigenvalue_within_limit(p: Prime, delta: f64, eps: f64) -> Result<bool> {
    let lambda = optimal_tilt(delta)?;
    Ok(libm::log(tilted_eigenvalue(p, lambda)) <= libm::log(limit_eigenvalue(lambda)) + eps)
}

/// Law of `S_L`: entry `j` is `P(S_L = j)`.
pub fn carry_count_distribution(p: Prime, len: u32) -> Vec<f64> {
    let prob = transition_matrix(p).entries;
    let len = len as usize;
    // by_state[u][j] = P(C_i = u, S_i = j)
    let mut by_state = [vec![0.0; len + 1], vec![0.0; len + 1]];
    by_state[0][0] = 1.0;
    for step in 0..len {
        let mut next = [vec![0.0; len + 1], vec![0.0; len + 1]];
        for u in 0..2 {
            for j in 0..=step {
                let mass = by_state[u][j];
                if mass == 0.0 {
                    continue;
                }
                next[0][j] += mass * prob[u][0];
                next[1][j + 1] += mass * prob[u][1];
            }
        }
        by_state = next;
    }
    by_state[0].iter().zip(&by_state[1]).map(|(a, b)| a + b).collect()
}

/// Exact residue counts: entry `j` is `#{r < p^L : S_L(r) = j}`.
pub fn carry_count_histogram_exact(p: Prime, len: u32) -> Vec<BigUint> {
    let counts = transition_counts(p);
    let len = len as usize;
    let mut by_state = [vec![BigUint::zero(); len + 1], vec![BigUint::zero(); len + 1]];
    by_state[0][0] = BigUint::from(1u32);
    for step in 0..len {
        let mut next = [vec![BigUint::zero(); len + 1], vec![BigUint::zero(); len + 1]];
        for u in 0..2 {
            for j in 0..=step {
                if by_state[u][j].is_zero() {
                    continue;
                }
                next[0][j] += &by_state[u][j] * counts[u][0];
                next[1][j + 1] += &by_state[u][j] * counts[u][1];
            }
        }
        by_state = next;
    }
    let [zero, one] = by_state;
    zero.into_iter().zip(one).map(|(a, b)| a + b).collect()
}

/// Largest `j` with `j ≤ s·L`, i.e. `j · den ≤ num · L`.
fn tail_cutoff(len: u32, s: Rational) -> usize {
    let bound = u128::from(*s.numer()) * u128::from(len) / u128::from(*s.denom());
    bound.min(u128::from(len)) as usize
}

/// `P(S_L ≤ s L)` for `m` uniform below `p^L`.
pub fn exact_tail(p: Prime, len: u32, s: Rational) -> f64 {
    let dist = carry_count_distribution(p, len);
    dist[..=tail_cutoff(len, s)].iter().sum()
}

/// `P(S_L ≤ s L)` as an exact fraction `(count, p^L)`.
pub fn exact_tail_fraction(p: Prime, len: u32, s: Rational) -> (BigUint, BigUint) {
    let hist = carry_count_histogram_exact(p, len);
    let count = hist[..=tail_cutoff(len, s)].iter().sum();
    (count, num_traits::pow(BigUint::from(p.get()), len as usize))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CarryChainSpec {
    pub p: Prime,
    pub len: u32,
    pub s: Rational,
    pub delta: Option<Rational>,
    pub lambda: f64,
}

impl CarryChainSpec {
    /// `s = (1−δ)/2` with the Bernoulli(½) optimal tilt `λ*`.
    pub fn from_delta(p: Prime, len: u32, delta: Rational) -> Result<Self> {
        let one = Rational::from_integer(1);
        if delta >= one || *delta.numer() == 0 {
            return Err(Error::InvalidParam(format!("delta must lie in (0, 1), got {delta}")));
        }
        let s = (one - delta) / Rational::from_integer(2);
        Ok(CarryChainSpec { p, len, s, delta: Some(delta), lambda: optimal_tilt(ratio_to_f64(delta))? })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailResult {
    pub exact: f64,
    /// `e^{−μ/8}` with `μ = L/2`; only for p = 2 and s = 1/4.
    pub chernoff_bound: Option<f64>,
    /// `C_p(λ) exp(L (log ρ_p(λ) − λ s))`.
    pub tilted_bound: f64,
    pub c_used: f64,
    pub rho_used: f64,
}

impl TailResult {
    pub fn bounds_hold(&self) -> bool {
        self.exact <= self.tilted_bound && self.chernoff_bound.is_none_or(|b| self.exact <= b)
    }
}

pub fn tail_bounds(spec: &CarryChainSpec) -> Result<TailResult> {
    if spec.lambda > 0.0 || !spec.lambda.is_finite() {
        return Err(Error::InvalidParam(format!("tilt must be finite and non-positive, got {}", spec.lambda)));
    }
    let exact = exact_tail(spec.p, spec.len, spec.s);
    let rho = tilted_eigenvalue(spec.p, spec.lambda);
    let c = tilt_constant(spec.p, spec.lambda);
    let len = f64::from(spec.len);
    let tilted_bound = c * libm::exp(len * (libm::log(rho) - spec.lambda * ratio_to_f64(spec.s)));
    let chernoff_bound = (spec.p.get() == 2 && spec.s == Rational::new(1, 4)).then(|| libm::exp(-(len / 2.0) / 8.0));
    Ok(TailResult { exact, chernoff_bound, tilted_bound, c_used: c, rho_used: rho })
}

/// `E[S_L]/L` computed from the chain started at `C_0 = 0`.
pub fn expected_carry_fraction(p: Prime, len: u32) -> f64 {
    if len == 0 {
        return 0.0;
    }
    let prob = transition_matrix(p).entries;
    let mut state = [1.0, 0.0];
    let mut total = 0.0;
    for _ in 0..len {
        state = [state[0] * prob[0][0] + state[1] * prob[1][0], state[0] * prob[0][1] + state[1] * prob[1][1]];
        total += state[1];
    }
    total / f64::from(len)
}

/// Uniform draw from `{0, …, bound − 1}` by multiply-shift.
#[inline]
fn uniform_below(rng: &mut SplitMix64, bound: u64) -> u64 {
    ((u128::from(rng.next_u64()) * u128::from(bound)) >> 64) as u64
}

/// Monte Carlo estimate of `E[S_L]/L`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainEstimate {
    pub mean: f64,
    /// Standard error of `mean`.
    pub std_error: f64,
    /// Exact `E[S_L]/L` for the same `L`.
    pub expected: f64,
}

impl ChainEstimate {
    pub fn within_sigmas(&self, target: f64, sigmas: f64) -> bool {
        (self.mean - target).abs() <= sigmas * self.std_error
    }
}

/// Seeded SplitMix64 simulation of the digit process.
///
/// SplitMix64 advances its 64-bit state by `0x9E3779B97F4A7C15` and mixes
/// with the multipliers `0xBF58476D1CE4E5B9` and `0x94D049BB133111EB`;
/// digits are drawn by multiply-shift. `L = 0` returns a zero estimate.
pub fn empirical_chain_check(p: Prime, len: u32, trials: u64, seed: u64) -> Result<ChainEstimate> {
    if trials == 0 {
        return Err(Error::InvalidParam("trials must be at least 1".into()));
    }
    if len == 0 {
        return Ok(ChainEstimate { mean: 0.0, std_error: 0.0, expected: 0.0 });
    }
    let mut rng = SplitMix64::seed_from_u64(seed);
    let pv = p.get();
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..trials {
        let mut carry = 0u64;
        let mut count = 0u32;
        for _ in 0..len {
            let d = uniform_below(&mut rng, pv);
            carry = u64::from(d + carry >= pv - d);
            count += carry as u32;
        }
        let x = f64::from(count) / f64::from(len);
        sum += x;
        sum_sq += x * x;
    }
    let n = trials as f64;
    let mean = sum / n;
    let var = if trials > 1 { (sum_sq - n * mean * mean).max(0.0) / (n - 1.0) } else { 0.0 };
    Ok(ChainEstimate { mean, std_error: libm::sqrt(var / n), expected: expected_carry_fraction(p, len) })
}

/// Histogram of `truncated_carry_count` over `trials` uniform residues
/// below `p^L` (which must fit in a `u64`).
pub fn residue_carry_histogram(p: Prime, len: u32, trials: u64, seed: u64) -> Result<Vec<u64>> {
    let modulus = p.get().checked_pow(len).ok_or(Error::Overflow("p^L"))?;
    let mut rng = SplitMix64::seed_from_u64(seed);
    let mut hist = vec![0u64; len as usize + 1];
    for _ in 0..trials {
        let r = uniform_below(&mut rng, modulus);
        hist[truncated_carry_count(r, p, len) as usize] += 1;
    }
    Ok(hist)
}
