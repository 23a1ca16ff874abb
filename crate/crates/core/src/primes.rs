//! Prime enumeration and small-scale factorization.
//!
//! Every prime used by the toolkit is at most a few million, so a segmented
//! sieve of Eratosthenes plus trial division is all that is needed.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Segment width of the sieve, in odd-number slots.
const SEGMENT: usize = 1 << 15;

/// A prime number, checked at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(Prime(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    #[inline]
    pub const fn get(self) -> u64 {
        self.0
    }

    /// Smallest digit value that forces a carry when doubled: ⌈p/2⌉.
    #[inline]
    pub const fn half_ceil(self) -> u64 {
        self.0.div_ceil(2)
    }
}

impl core::fmt::Display for Prime {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        self.0.fmt(f)
    }
}

impl From<Prime> for u64 {
    fn from(p: Prime) -> u64 {
        p.0
    }
}

/// Deterministic trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) || n.is_multiple_of(3) {
        return false;
    }
    let mut d = 5u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) || n.is_multiple_of(d + 2) {
            return false;
        }
        d += 6;
    }
    true
}

fn simple_sieve(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let limit = limit as usize;
    let mut composite = vec![false; limit + 1];
    let mut out = Vec::new();
    for i in 2..=limit {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j <= limit {
            composite[j] = true;
            j += i;
        }
    }
    out
}

fn isqrt(n: u64) -> u64 {
    let mut r = libm::sqrt(n as f64) as u64;
    while r.saturating_mul(r) > n {
        r -= 1;
    }
    while (r + 1).saturating_mul(r + 1) <= n {
        r += 1;
    }
    r
}

/// All primes in the half-open range `[lo, hi)`, ascending, by a segmented
/// sieve over odd numbers.
pub fn primes_in_range(lo: u64, hi: u64) -> Vec<Prime> {
    let mut out = Vec::new();
    if hi <= 2 || lo >= hi {
        return out;
    }
    if lo <= 2 {
        out.push(Prime(2));
    }
    let base = simple_sieve(isqrt(hi - 1));
    // Odd numbers only: slot i of a segment starting at `start` is start + 2i.
    let mut start = core::cmp::max(lo, 3) | 1;
    let mut flags = vec![true; SEGMENT];
    while start < hi {
        let span = core::cmp::min(SEGMENT as u64, (hi - start).div_ceil(2)) as usize;
        let end = start + 2 * span as u64;
        flags[..span].iter_mut().for_each(|f| *f = true);
        for &q in base.iter().skip(1) {
            let sq = q * q;
            if sq >= end {
                break;
            }
            let mut first = core::cmp::max(sq, start.div_ceil(q) * q);
            if first % 2 == 0 {
                first += q;
            }
            let mut j = ((first - start) / 2) as usize;
            while j < span {
                flags[j] = false;
                j += q as usize;
            }
        }
        for (i, &f) in flags[..span].iter().enumerate() {
            let v = start + 2 * i as u64;
            if f && v > 1 && v < hi {
                out.push(Prime(v));
            }
        }
        start = end;
    }
    out
}

/// All primes `p ≤ n`.
pub fn primes_up_to(n: u64) -> Vec<Prime> {
    primes_in_range(0, n.saturating_add(1))
}

/// Distinct prime factors of `n`, ascending. Returns an empty list for 0 and 1.
pub fn distinct_prime_factors(mut n: u64) -> Vec<Prime> {
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    for q in [2u64, 3] {
        if n.is_multiple_of(q) {
            out.push(Prime(q));
            while n.is_multiple_of(q) {
                n /= q;
            }
        }
    }
    let mut d = 5u64;
    while d.saturating_mul(d) <= n {
        for q in [d, d + 2] {
            if n.is_multiple_of(q) {
                out.push(Prime(q));
                while n.is_multiple_of(q) {
                    n /= q;
                }
            }
        }
        d += 6;
    }
    if n > 1 {
        out.push(Prime(n));
    }
    out
}

/// Primes dividing at least one of `m+1, …, m+k`, ascending and deduplicated.
///
/// These are exactly the primes that can divide `C(m+k, k)` or the interval
/// product `(m+1)⋯(m+k)`.
pub fn block_prime_divisors(m: u64, k: u64) -> Result<Vec<Prime>> {
    let mut out: Vec<Prime> = Vec::new();
    for i in 1..=k {
        let x = m.checked_add(i).ok_or(Error::Overflow("m + i"))?;
        out.extend(distinct_prime_factors(x));
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}
