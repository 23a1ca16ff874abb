//! JSON views of core results, with fixed key order.

use erdos728_core::density::ObstructionWitness;
use erdos728_core::divisibility::{OracleMode, Triple};
use erdos728_core::search::{CensusReport, GoodCertificate, Mode, SearchParams, WindowCheck, Witness};
use erdos728_core::valuation::ValuationProfile;
use serde::Serialize;

use crate::parse::{ratio_string, t_policy_name};

pub fn oracle_mode_name(mode: OracleMode) -> &'static str {
    match mode {
        OracleMode::Dual => "dual",
        OracleMode::PerPrimeOnly => "per_prime_only",
    }
}

pub fn mode_name(mode: Mode) -> &'static str {
    match mode {
        Mode::Paper => "paper",
        Mode::Direct => "direct",
    }
}

#[derive(Debug, Serialize)]
pub struct ProfileJson {
    pub p: u64,
    pub kappa: u32,
    pub v_max: u32,
    pub w_sum: u64,
    pub nu_k_factorial: u64,
    pub nu_binom: u64,
    pub gap: i64,
}

impl From<&ValuationProfile> for ProfileJson {
    fn from(v: &ValuationProfile) -> Self {
        ProfileJson {
            p: v.p.get(),
            kappa: v.kappa,
            v_max: v.v_max,
            w_sum: v.w_sum,
            nu_k_factorial: v.nu_k_factorial,
            nu_binom: v.nu_binom_mk,
            gap: v.gap(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub m: u64,
    pub k: u64,
    pub binom_divides: bool,
    pub profiles: Vec<ProfileJson>,
    pub failing_primes: Vec<u64>,
    pub oracle_mode: &'static str,
}

#[derive(Debug, Serialize)]
pub struct TripleReport {
    pub a: u64,
    pub b: u64,
    pub n: u64,
    pub k: i64,
    pub divides: bool,
    pub failing_prime: Option<u64>,
    pub oracle_mode: &'static str,
    pub epsilon: String,
    pub log_n: f64,
    pub k_over_log_n: f64,
    pub band_ok: bool,
}

#[derive(Debug, Serialize)]
pub struct TripleJson {
    pub a: u64,
    pub b: u64,
    pub n: u64,
    pub k: i64,
}

impl From<&Triple> for TripleJson {
    fn from(t: &Triple) -> Self {
        TripleJson { a: t.a, b: t.b, n: t.n, k: t.k }
    }
}

#[derive(Debug, Serialize)]
pub struct WindowJson {
    pub log_n: f64,
    pub k_over_log_n: f64,
    pub k_in_window: Option<bool>,
    pub band_ok: bool,
}

impl From<&WindowCheck> for WindowJson {
    fn from(w: &WindowCheck) -> Self {
        WindowJson { log_n: w.log_n, k_over_log_n: w.k_over_log_n, k_in_window: w.k_in_window, band_ok: w.band_ok }
    }
}

#[derive(Debug, Serialize)]
pub struct WitnessJson {
    pub p: u64,
    pub big_digits: u32,
    pub kappa: u32,
    pub v_max: u32,
    pub spike_threshold: u32,
    pub bad_carry: bool,
    pub bad_spike: bool,
}

impl From<&Witness> for WitnessJson {
    fn from(w: &Witness) -> Self {
        WitnessJson {
            p: w.p.get(),
            big_digits: w.big_digits,
            kappa: w.kappa,
            v_max: w.v_max,
            spike_threshold: w.spike_threshold,
            bad_carry: w.bad_carry,
            bad_spike: w.bad_spike,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct CertificateJson {
    pub m: u64,
    pub k: u64,
    pub t: u32,
    pub triple: TripleJson,
    pub mode: &'static str,
    pub paper_good: bool,
    pub direct_good: bool,
    pub threshold_holds: bool,
    pub window: WindowJson,
    pub window_ok: bool,
    pub divisibility_verified: bool,
    pub oracle_mode: &'static str,
    pub witnesses: Vec<WitnessJson>,
}

impl From<&GoodCertificate> for CertificateJson {
    fn from(c: &GoodCertificate) -> Self {
        CertificateJson {
            m: c.m,
            k: c.k,
            t: c.t,
            triple: (&c.triple).into(),
            mode: mode_name(c.mode),
            paper_good: c.paper_good,
            direct_good: c.direct_good,
            threshold_holds: c.threshold_holds,
            window: (&c.window).into(),
            window_ok: c.window_ok,
            divisibility_verified: c.divisibility_verified,
            oracle_mode: oracle_mode_name(c.oracle_mode),
            witnesses: c.witnesses.iter().map(Into::into).collect(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ParamsJson {
    #[serde(rename = "M")]
    pub scale: u64,
    pub c: String,
    #[serde(rename = "C1")]
    pub c1: String,
    #[serde(rename = "C2")]
    pub c2: String,
    pub eta: String,
    pub epsilon: String,
    pub t_policy: String,
    pub mode: &'static str,
}

impl From<&SearchParams> for ParamsJson {
    fn from(sp: &SearchParams) -> Self {
        ParamsJson {
            scale: sp.scale,
            c: ratio_string(sp.c),
            c1: ratio_string(sp.c1),
            c2: ratio_string(sp.c2),
            eta: ratio_string(sp.eta),
            epsilon: ratio_string(sp.epsilon),
            t_policy: t_policy_name(sp.t_policy),
            mode: mode_name(sp.mode),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct CensusRowJson {
    pub p: u64,
    #[serde(rename = "L_p")]
    pub depth: u32,
    pub mu_p: f64,
    #[serde(rename = "J_p")]
    pub spike_base: u32,
    pub t: u32,
    pub bad_carry_count: u64,
    pub bad_carry_bound: f64,
    pub bad_spike_count: u64,
    pub bad_spike_bound: f64,
    pub within_bounds: bool,
    pub threshold_holds: bool,
}

#[derive(Debug, Serialize)]
pub struct CensusJson {
    pub k: u64,
    pub t: u32,
    pub interval_size: u64,
    pub bad_union_count: u64,
    pub all_within_bounds: bool,
    pub rows: Vec<CensusRowJson>,
}

impl From<&CensusReport> for CensusJson {
    fn from(r: &CensusReport) -> Self {
        CensusJson {
            k: r.k,
            t: r.t,
            interval_size: r.interval_size,
            bad_union_count: r.bad_union_count,
            all_within_bounds: r.all_within_bounds(),
            rows: r
                .rows
                .iter()
                .map(|row| CensusRowJson {
                    p: row.p.get(),
                    depth: row.depth,
                    mu_p: row.mu,
                    spike_base: row.spike_base,
                    t: row.t,
                    bad_carry_count: row.bad_carry_count,
                    bad_carry_bound: row.bad_carry_bound,
                    bad_spike_count: row.bad_spike_count,
                    bad_spike_bound: row.bad_spike_bound,
                    within_bounds: row.within_bounds,
                    threshold_holds: row.threshold_holds,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct SearchReport {
    pub found: bool,
    pub params: ParamsJson,
    pub certificate: Option<CertificateJson>,
    pub census: Option<CensusJson>,
}

#[derive(Debug, Serialize)]
pub struct ObstructionJson {
    pub m: u64,
    pub k: u64,
    pub p: u64,
    pub kappa_p: u32,
    pub nu_binom: u64,
}

impl From<&ObstructionWitness> for ObstructionJson {
    fn from(w: &ObstructionWitness) -> Self {
        ObstructionJson { m: w.m, k: w.k, p: w.p.get(), kappa_p: w.kappa_p, nu_binom: w.nu_binom }
    }
}

#[derive(Debug, Serialize)]
pub struct MonteCarloReport {
    pub p: u64,
    #[serde(rename = "L")]
    pub len: u32,
    pub trials: u64,
    pub seed: u64,
    pub mean: f64,
    pub std_error: f64,
    pub expected: f64,
    pub sigmas_from_expected: f64,
    pub sigmas_from_half: f64,
}
