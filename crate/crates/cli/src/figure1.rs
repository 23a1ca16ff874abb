//! The valuation-comparison dataset: `ν_p(C(m+k, k))` against `κ_p(m)` over
//! a range of `m`, raw and smoothed.

use erdos728_core::valuation::{kappa, nu_binomial};
use erdos728_core::Prime;

use crate::emit::{fmt_f64, Csv};
use crate::error::{CliError, CliResult};

pub const HEADER: [&str; 5] = ["m", "nu_binom", "kappa", "nu_binom_smooth", "kappa_smooth"];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Figure1Params {
    pub m_lo: u64,
    pub m_hi: u64,
    pub k: u64,
    pub window: usize,
}

impl Default for Figure1Params {
    fn default() -> Self {
        Figure1Params { m_lo: 1000, m_hi: 2000, k: 10, window: 25 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Figure1Row {
    pub m: u64,
    pub nu_binom: u64,
    pub kappa: u32,
    pub nu_binom_smooth: f64,
    pub kappa_smooth: f64,
}

/// Centered moving average of odd width; near the ends the window shrinks to
/// the points that exist.
pub fn moving_average(values: &[f64], window: usize) -> Vec<f64> {
    assert!(window % 2 == 1, "window must be odd");
    let half = window / 2;
    let mut prefix = Vec::with_capacity(values.len() + 1);
    prefix.push(0.0);
    for v in values {
        prefix.push(prefix.last().unwrap() + v);
    }
    (0..values.len())
        .map(|i| {
            let lo = i.saturating_sub(half);
            let hi = (i + half + 1).min(values.len());
            (prefix[hi] - prefix[lo]) / (hi - lo) as f64
        })
        .collect()
}

pub fn rows(params: &Figure1Params, p: Prime) -> CliResult<Vec<Figure1Row>> {
    if params.m_lo > params.m_hi {
        return Err(CliError::Usage(format!("m_lo ({}) exceeds m_hi ({})", params.m_lo, params.m_hi)));
    }
    if params.window == 0 || params.window.is_multiple_of(2) {
        return Err(CliError::Usage(format!("window must be odd and at least 1, got {}", params.window)));
    }
    let raw = (params.m_lo..=params.m_hi)
        .map(|m| {
            let top = m.checked_add(params.k).ok_or_else(|| CliError::Usage("m + k overflows".into()))?;
            Ok((m, nu_binomial(top, params.k, p)?, kappa(m, p)))
        })
        .collect::<CliResult<Vec<_>>>()?;
    let nu: Vec<f64> = raw.iter().map(|r| r.1 as f64).collect();
    let ka: Vec<f64> = raw.iter().map(|r| f64::from(r.2)).collect();
    let nu_s = moving_average(&nu, params.window);
    let ka_s = moving_average(&ka, params.window);
    Ok(raw
        .iter()
        .enumerate()
        .map(|(i, &(m, nu_binom, kappa))| Figure1Row {
            m,
            nu_binom,
            kappa,
            nu_binom_smooth: nu_s[i],
            kappa_smooth: ka_s[i],
        })
        .collect())
}

pub fn to_csv(rows: &[Figure1Row]) -> Csv {
    let mut csv = Csv::new(&HEADER);
    for r in rows {
        csv.push(vec![
            r.m.to_string(),
            r.nu_binom.to_string(),
            r.kappa.to_string(),
            fmt_f64(r.nu_binom_smooth),
            fmt_f64(r.kappa_smooth),
        ]);
    }
    csv
}

pub fn file_name(p: Prime) -> String {
    format!("figure1_p{p}.csv")
}
