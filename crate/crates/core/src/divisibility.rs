//! Factorial and binomial divisibility, decided prime by prime and, where the
//! numbers stay small enough, by exact big-integer division.

use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::primes::{block_prime_divisors, primes_up_to, Prime};
use crate::valuation::{kappa, nu_binomial, nu_factorial, v_max};

/// Largest `max(a, b, n)` for which the exact big-integer route runs.
pub const ORACLE_LIMIT: u64 = 100_000;

/// A candidate `a! b! | n! k!` with `k = a + b − n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Triple {
    pub a: u64,
    pub b: u64,
    pub n: u64,
    pub k: i64,
}

impl Triple {
    pub fn new(a: u64, b: u64, n: u64) -> Self {
        Triple { a, b, n, k: a as i64 + b as i64 - n as i64 }
    }

    /// The family `(a, b, n) = (m + k, m, 2m)`.
    pub fn family(m: u64, k: u64) -> Result<Self> {
        let a = m.checked_add(k).ok_or(Error::Overflow("m + k"))?;
        let n = m.checked_mul(2).ok_or(Error::Overflow("2m"))?;
        Ok(Triple::new(a, m, n))
    }

    fn checked_k(&self) -> Result<u64> {
        u64::try_from(self.k).map_err(|_| Error::NegativeK { sum: self.a + self.b, n: self.n })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleMode {
    /// Legendre comparison and exact division both ran and agreed.
    Dual,
    /// Outside the exact range; Legendre comparison only.
    PerPrimeOnly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorialVerdict {
    pub divides: bool,
    pub mode: OracleMode,
    /// First prime where ν_p(a! b!) > ν_p(n! k!), if any.
    pub failing_prime: Option<Prime>,
}

/// Decides `a! b! | n! k!`.
///
/// Every prime up to `max(a, b, n)` is compared via Legendre's formula; when
/// `max(a, b, n) ≤ ORACLE_LIMIT` the quotient is also formed exactly and the
/// two answers must agree.
pub fn factorial_divides(t: &Triple) -> Result<FactorialVerdict> {
    let k = t.checked_k()?;
    let bound = t.a.max(t.b).max(t.n);
    let failing_prime = primes_up_to(bound)
        .into_iter()
        .find(|&p| nu_factorial(t.a, p) + nu_factorial(t.b, p) > nu_factorial(t.n, p) + nu_factorial(k, p));
    let divides = failing_prime.is_none();
    if bound > ORACLE_LIMIT {
        return Ok(FactorialVerdict { divides, mode: OracleMode::PerPrimeOnly, failing_prime });
    }
    let exact = factorial_ratio_is_integer([t.n, k], [t.a, t.b]);
    if exact != divides {
        return Err(Error::OracleDisagreement(format!(
            "a={} b={} n={}: per-prime says {divides}, exact division says {exact}",
            t.a, t.b, t.n
        )));
    }
    Ok(FactorialVerdict { divides, mode: OracleMode::Dual, failing_prime })
}

/// Product `lo · (lo+1) ⋯ hi` by binary splitting; empty ranges give 1.
pub fn range_product(lo: u64, hi: u64) -> BigUint {
    if lo > hi {
        return BigUint::one();
    }
    if hi - lo < 16 {
        return (lo..=hi).fold(BigUint::one(), |acc, x| acc * x);
    }
    let mid = lo + (hi - lo) / 2;
    range_product(lo, mid) * range_product(mid + 1, hi)
}

/// Whether `x₁! x₂! / (y₁! y₂!)` is an integer, by exact division after
/// cancelling the overlapping factorial ranges.
pub fn factorial_ratio_is_integer(num: [u64; 2], den: [u64; 2]) -> bool {
    let mut num = num;
    let mut den = den;
    num.sort_unstable();
    den.sort_unstable();
    let mut top = BigUint::one();
    let mut bottom = BigUint::one();
    for (x, y) in num.into_iter().zip(den) {
        if x >= y {
            top *= range_product(y + 1, x);
        } else {
            bottom *= range_product(x + 1, y);
        }
    }
    (top % bottom).is_zero()
}

/// Exact C(n, r).
pub fn binomial_big(n: u64, r: u64) -> Result<BigUint> {
    if r > n {
        return Err(Error::BinomialRange { n, r });
    }
    let r = r.min(n - r);
    Ok(range_product(n - r + 1, n) / range_product(1, r))
}

/// Whether C(m+k, k) divides C(2m, m).
///
/// Only primes dividing some `m + i` can divide C(m+k, k), so those are the
/// only ones checked.
pub fn binom_divides(m: u64, k: u64) -> Result<bool> {
    if k == 0 {
        return Ok(true);
    }
    for p in block_prime_divisors(m, k)? {
        if valuation_gap(m, k, p)? < 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Exact-division route for [`binom_divides`].
pub fn binom_divides_exact(m: u64, k: u64) -> Result<bool> {
    let big = binomial_big(2 * m, m)?;
    let small = binomial_big(m + k, k)?;
    Ok((big % small).is_zero())
}

/// `V_p(m, k) ≤ κ_p(m)`, which is enough for the prime `p` in `binom_divides`.
pub fn sufficient_per_prime(m: u64, k: u64, p: Prime) -> Result<bool> {
    Ok(v_max(m, k, p)? <= kappa(m, p))
}

/// [`sufficient_per_prime`] restricted to `p > 2k`, where it always holds:
/// at most one of `m+1, …, m+k` is divisible by `p`, and the low digits of
/// `m` are then forced to be large.
pub fn large_prime_check(m: u64, k: u64, p: Prime) -> Result<bool> {
    let two_k = k.checked_mul(2).ok_or(Error::Overflow("2k"))?;
    if p.get() <= two_k {
        return Err(Error::NotLargePrime { p: p.get(), two_k });
    }
    sufficient_per_prime(m, k, p)
}

/// κ_p(m) − ν_p(C(m+k, k)), possibly negative.
pub fn valuation_gap(m: u64, k: u64, p: Prime) -> Result<i64> {
    let top = m.checked_add(k).ok_or(Error::Overflow("m + k"))?;
    Ok(i64::from(kappa(m, p)) - nu_binomial(top, k, p)? as i64)
}

/// One prime's valuation gap against a required margin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapReport {
    pub p: Prime,
    pub gap: i64,
    pub threshold: f64,
}

impl GapReport {
    /// Gap at `p` with margin `c2 · log m / log p` when `p ≤ prime_bound`, else 0.
    pub fn compute(m: u64, k: u64, p: Prime, c2: f64, prime_bound: u64) -> Result<Self> {
        let threshold =
            if p.get() <= prime_bound && m > 1 { c2 * libm::log(m as f64) / libm::log(p.get() as f64) } else { 0.0 };
        Ok(GapReport { p, gap: valuation_gap(m, k, p)?, threshold })
    }

    pub fn holds(&self) -> bool {
        self.gap as f64 >= self.threshold
    }
}

/// Primes at which `C(m+k, k) ∤ C(2m, m)`, ascending.
pub fn failing_primes(m: u64, k: u64) -> Result<Vec<Prime>> {
    if k == 0 {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for p in block_prime_divisors(m, k)? {
        if valuation_gap(m, k, p)? < 0 {
            out.push(p);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn factorial_examples() {
        let v = factorial_divides(&Triple::new(5, 4, 8)).unwrap();
        assert!(v.divides);
        assert_eq!(v.mode, OracleMode::Dual);
        assert!(factorial_divides(&Triple::new(12, 0, 12)).unwrap().divides);
        let v = factorial_divides(&Triple::new(9, 7, 14)).unwrap();
        assert!(!v.divides);
        assert_eq!(v.failing_prime, Some(p(3)));
        assert_eq!(factorial_divides(&Triple::new(3, 4, 8)), Err(Error::NegativeK { sum: 7, n: 8 }));
    }

    #[test]
    fn factorial_out_of_oracle_range_is_flagged() {
        let t = Triple::family(60_000, 1).unwrap();
        let v = factorial_divides(&t).unwrap();
        assert_eq!(v.mode, OracleMode::PerPrimeOnly);
        assert_eq!(v.divides, binom_divides(60_000, 1).unwrap());
    }

    #[test]
    fn ratio_cancellation() {
        // 8! 1! / (5! 4!) = 14
        assert!(factorial_ratio_is_integer([8, 1], [5, 4]));
        // 14! 2! / (9! 7!) = 3432 / 36 is not an integer
        assert!(!factorial_ratio_is_integer([14, 2], [9, 7]));
        assert!(factorial_ratio_is_integer([0, 0], [0, 0]));
        assert_eq!(range_product(1, 20), BigUint::from(2_432_902_008_176_640_000u64));
        assert_eq!(binomial_big(20, 10).unwrap(), BigUint::from(184_756u32));
    }

    #[test]
    fn binomial_examples() {
        assert!(binom_divides(123, 0).unwrap());
        assert!(!binom_divides(7, 2).unwrap());
        assert!(binom_divides(4, 1).unwrap());
        assert!(!binom_divides_exact(7, 2).unwrap());
        assert!(binom_divides_exact(4, 1).unwrap());
        assert_eq!(failing_primes(7, 2).unwrap(), [p(3)]);
    }

    #[test]
    fn per_prime_examples() {
        assert!(sufficient_per_prime(3, 1, p(2)).unwrap());
        assert!(sufficient_per_prime(0, 1, p(5)).unwrap());
        assert!(!sufficient_per_prime(7, 2, p(3)).unwrap());
        assert!(large_prime_check(7, 1, p(7)).unwrap());
        assert!(large_prime_check(48, 1, p(7)).unwrap());
        assert_eq!(large_prime_check(48, 3, p(5)), Err(Error::NotLargePrime { p: 5, two_k: 6 }));
    }

    #[test]
    fn gap_examples() {
        assert_eq!(valuation_gap(10, 0, p(2)).unwrap(), i64::from(kappa(10, p(2))));
        assert_eq!(valuation_gap(7, 2, p(3)), Ok(-1));
        assert_eq!(valuation_gap(10, 4, p(7)), Ok(-1));
        let r = GapReport::compute(7, 2, p(3), 0.0, 100).unwrap();
        assert!(!r.holds());
        let r = GapReport::compute(4, 1, p(5), 0.0, 100).unwrap();
        assert!(r.holds());
    }
}
