//! Base-p digits, p-adic valuations and carry counts.
//!
//! Fast paths work on `u64` with checked arithmetic; the `*_big` variants
//! operate on arbitrary-precision integers and back the exact oracles.

use alloc::vec::Vec;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::primes::Prime;

/// Little-endian base-p expansion in canonical form (no trailing zero digits).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitExpansion {
    base: Prime,
    digits: Vec<u64>,
}

impl DigitExpansion {
    pub fn new(n: u64, p: Prime) -> Self {
        let base = p.get();
        let mut digits = Vec::new();
        let mut n = n;
        while n > 0 {
            digits.push(n % base);
            n /= base;
        }
        DigitExpansion { base: p, digits }
    }

    pub fn from_big(n: &BigUint, p: Prime) -> Self {
        let base = BigUint::from(p.get());
        let mut digits = Vec::new();
        let mut n = n.clone();
        while !n.is_zero() {
            let (q, r) = n.div_rem(&base);
            digits.push(r.to_u64().expect("digit below a u64 base"));
            n = q;
        }
        DigitExpansion { base: p, digits }
    }

    pub fn base(&self) -> Prime {
        self.base
    }

    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    /// Digit at position `j`; positions past the expansion read as 0.
    pub fn digit(&self, j: usize) -> u64 {
        self.digits.get(j).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn value(&self) -> BigUint {
        let base = BigUint::from(self.base.get());
        self.digits.iter().rev().fold(BigUint::zero(), |acc, &d| acc * &base + BigUint::from(d))
    }

    /// Carries produced by the base-p addition of this number to itself.
    pub fn doubling_carries(&self) -> u32 {
        doubling_carries(self.digits.iter().copied(), self.base.get())
    }
}

/// Canonical little-endian digits of `n` in base `p`.
pub fn digits(n: u64, p: u64) -> Result<DigitExpansion> {
    Ok(DigitExpansion::new(n, Prime::new(p)?))
}

// Carry recursion C_{i+1} = [2 a_i + C_i ≥ p], C_0 = 0, summed over the digits.
#[inline]
fn doubling_carries(digits: impl Iterator<Item = u64>, p: u64) -> u32 {
    let mut carry = 0u64;
    let mut count = 0u32;
    for d in digits {
        // 2d + carry ≥ p, rearranged to avoid overflow.
        carry = u64::from(d + carry >= p - d);
        count += carry as u32;
    }
    count
}

struct LowDigits {
    n: u64,
    p: u64,
    left: Option<u32>,
}

impl Iterator for LowDigits {
    type Item = u64;

    #[inline]
    fn next(&mut self) -> Option<u64> {
        match &mut self.left {
            Some(0) => return None,
            Some(l) => *l -= 1,
            None if self.n == 0 => return None,
            None => {}
        }
        let d = self.n % self.p;
        self.n /= self.p;
        Some(d)
    }
}

/// Digits of `n` from position 0; `Some(l)` yields exactly `l` digits (zero padded).
#[inline]
fn low_digits(n: u64, p: Prime, len: Option<u32>) -> LowDigits {
    LowDigits { n, p: p.get(), left: len }
}

/// ν_p(n) for n ≥ 1.
pub fn nu_int(n: u64, p: Prime) -> Result<u32> {
    if n == 0 {
        return Err(Error::ZeroValuation);
    }
    let p = p.get();
    let mut n = n;
    let mut e = 0;
    while n.is_multiple_of(p) {
        n /= p;
        e += 1;
    }
    Ok(e)
}

/// ν_p(n) for an arbitrary-precision n ≥ 1.
pub fn nu_big(n: &BigUint, p: Prime) -> Result<u64> {
    if n.is_zero() {
        return Err(Error::ZeroValuation);
    }
    let p = BigUint::from(p.get());
    let mut n = n.clone();
    let mut e = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return Ok(e);
        }
        n = q;
        e += 1;
    }
}

/// ν_p(n!) by Legendre's formula.
pub fn nu_factorial(n: u64, p: Prime) -> u64 {
    let p = p.get();
    let mut n = n;
    let mut total = 0;
    while n >= p {
        n /= p;
        total += n;
    }
    total
}

/// ν_p of the binomial coefficient C(n, r).
pub fn nu_binomial(n: u64, r: u64, p: Prime) -> Result<u64> {
    if r > n {
        return Err(Error::BinomialRange { n, r });
    }
    Ok(nu_factorial(n, p) - nu_factorial(r, p) - nu_factorial(n - r, p))
}

/// κ_p(m): the number of carries when adding m to itself in base p.
pub fn kappa(m: u64, p: Prime) -> u32 {
    doubling_carries(low_digits(m, p, None), p.get())
}

fn check_block(m: u64, k: u64) -> Result<()> {
    if k == 0 {
        return Err(Error::EmptyBlock);
    }
    m.checked_add(k).ok_or(Error::Overflow("m + k"))?;
    Ok(())
}

/// V_p(m, k) = max over 1 ≤ i ≤ k of ν_p(m + i).
pub fn v_max(m: u64, k: u64, p: Prime) -> Result<u32> {
    check_block(m, k)?;
    (1..=k).map(|i| nu_int(m + i, p)).try_fold(0, |acc, v| Ok(acc.max(v?)))
}

/// W_p(m, k) = Σ over 1 ≤ i ≤ k of ν_p(m + i).
pub fn w_sum(m: u64, k: u64, p: Prime) -> Result<u64> {
    check_block(m, k)?;
    (1..=k).map(|i| nu_int(m + i, p)).try_fold(0u64, |acc, v| Ok(acc + u64::from(v?)))
}

/// X_p(m) over the first `len` digits: how many are at least ⌈p/2⌉.
pub fn big_digit_count(m: u64, p: Prime, len: u32) -> u32 {
    let threshold = p.half_ceil();
    low_digits(m, p, Some(len)).filter(|&d| d >= threshold).count() as u32
}

/// S_L: carries produced in positions 0..len when doubling `m mod p^len`.
pub fn truncated_carry_count(m: u64, p: Prime, len: u32) -> u32 {
    doubling_carries(low_digits(m, p, Some(len)), p.get())
}

/// s_p(m), the base-p digit sum.
pub fn digit_sum(m: u64, p: Prime) -> u64 {
    low_digits(m, p, None).sum()
}

/// Per-prime valuation record for a block `m+1, …, m+k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ValuationProfile {
    pub p: Prime,
    pub kappa: u32,
    pub v_max: u32,
    pub w_sum: u64,
    pub nu_k_factorial: u64,
    pub nu_binom_mk: u64,
}

impl ValuationProfile {
    pub fn compute(m: u64, k: u64, p: Prime) -> Result<Self> {
        let w = w_sum(m, k, p)?;
        let nu_k = nu_factorial(k, p);
        Ok(ValuationProfile {
            p,
            kappa: kappa(m, p),
            v_max: v_max(m, k, p)?,
            w_sum: w,
            nu_k_factorial: nu_k,
            // W_p - ν_p(k!) is ν_p(C(m+k, k)); the subtraction cannot underflow.
            nu_binom_mk: w - nu_k,
        })
    }

    /// κ_p(m) − ν_p(C(m+k, k)).
    pub fn gap(&self) -> i64 {
        i64::from(self.kappa) - self.nu_binom_mk as i64
    }
}
