//! Flag value parsers.

use erdos728_core::density::PrimeBoundRule;
use erdos728_core::search::{Rational, TPolicy};

/// Plain digits or `<digits>e<digits>`, so `1e6` is accepted.
pub fn parse_natural(s: &str) -> Result<u64, String> {
    let s = s.trim();
    let bad = || format!("expected a natural number, got {s:?}");
    match s.split_once(['e', 'E']) {
        None => s.parse().map_err(|_| bad()),
        Some((mantissa, exp)) => {
            let mantissa: u64 = mantissa.parse().map_err(|_| bad())?;
            let exp: u32 = exp.parse().map_err(|_| bad())?;
            10u64.checked_pow(exp).and_then(|x| x.checked_mul(mantissa)).ok_or_else(bad)
        }
    }
}

/// Non-negative rational from `n`, `n/d` or a decimal `i.f`.
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let s = s.trim();
    let bad = || format!("expected a non-negative rational such as 3/4 or 0.75, got {s:?}");
    if let Some((num, den)) = s.split_once('/') {
        let num: u64 = num.trim().parse().map_err(|_| bad())?;
        let den: u64 = den.trim().parse().map_err(|_| bad())?;
        if den == 0 {
            return Err(format!("zero denominator in {s:?}"));
        }
        return Ok(Rational::new(num, den));
    }
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    if (int.is_empty() && frac.is_empty()) || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    if frac.len() > 18 {
        return Err(format!("at most 18 decimal places are supported, got {s:?}"));
    }
    let den = 10u64.pow(frac.len() as u32);
    let int: u64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
    let frac: u64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
    int.checked_mul(den).and_then(|x| x.checked_add(frac)).map(|num| Rational::new(num, den)).ok_or_else(bad)
}

/// `paper`, `appendix`, or `fixed:N` (also `fixed(N)` / `fixed=N`).
pub fn parse_t_policy(s: &str) -> Result<TPolicy, String> {
    match s.trim() {
        "paper" => Ok(TPolicy::PaperTenLogLog),
        "appendix" => Ok(TPolicy::AppendixLogLog),
        other => {
            let n = other
                .strip_prefix("fixed")
                .map(|rest| rest.trim_start_matches([':', '=', '(']).trim_end_matches(')'))
                .ok_or_else(|| format!("expected paper, appendix or fixed:N, got {other:?}"))?;
            n.parse().map(TPolicy::Fixed).map_err(|_| format!("bad fixed t value in {other:?}"))
        }
    }
}

pub fn t_policy_name(t: TPolicy) -> String {
    match t {
        TPolicy::PaperTenLogLog => "paper".into(),
        TPolicy::AppendixLogLog => "appendix".into(),
        TPolicy::Fixed(n) => format!("fixed:{n}"),
    }
}

/// `two-k`, `fixed:B`, or `exp:C` for `p ≤ ⌊exp(C √log m)⌋`.
pub fn parse_prime_bound(s: &str) -> Result<PrimeBoundRule, String> {
    let s = s.trim();
    if s == "two-k" {
        return Ok(PrimeBoundRule::TwoK);
    }
    if let Some(b) = s.strip_prefix("fixed:") {
        return b.parse().map(PrimeBoundRule::Fixed).map_err(|_| format!("bad prime bound {s:?}"));
    }
    if let Some(c) = s.strip_prefix("exp:") {
        return match c.parse::<f64>() {
            Ok(c) if c > 0.0 && c.is_finite() => Ok(PrimeBoundRule::ExpCSqrtLogM(c)),
            _ => Err(format!("bad prime bound {s:?}")),
        };
    }
    Err(format!("expected two-k, fixed:B or exp:C, got {s:?}"))
}

pub fn prime_bound_name(rule: PrimeBoundRule) -> String {
    match rule {
        PrimeBoundRule::TwoK => "two-k".into(),
        PrimeBoundRule::Fixed(b) => format!("fixed:{b}"),
        PrimeBoundRule::ExpCSqrtLogM(c) => format!("exp:{}", crate::emit::fmt_f64(c)),
    }
}

pub fn ratio_string(r: Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
