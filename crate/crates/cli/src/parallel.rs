//! Deterministic multi-threaded range scans.
//!
//! A range is cut with [`split_inclusive`], the pieces are evaluated on a
//! dedicated rayon pool, and the partial results are merged in piece order
//! with the associative merges from the core crate. The merged value does not
//! depend on the thread count.

use erdos728_core::density::{
    density_range, gap_range, sharpness_range, DivisibilityKind, KRule, PrimeBoundRule, Tally,
};
use erdos728_core::range::split_inclusive;
use erdos728_core::search::{
    census_range, census_report, certify, derive_params, merge_first_hit, prepare_scan, scan_range, CensusCounts,
    CensusReport, DerivedParams, Mode, ScanOutcome, SearchParams,
};
use erdos728_core::Result;
use rayon::prelude::*;

/// Pieces handed to each worker; extra pieces even out uneven work.
const PIECES_PER_THREAD: usize = 4;
/// Width of one search block; the search stops after the first wave of
/// blocks containing a hit.
const SEARCH_BLOCK: u64 = 1 << 15;

pub struct Runner {
    pool: rayon::ThreadPool,
    threads: usize,
}

impl Runner {
    pub fn new(threads: usize) -> anyhow::Result<Self> {
        let threads = threads.max(1);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build()?;
        Ok(Runner { pool, threads })
    }

    pub fn threads(&self) -> usize {
        self.threads
    }

    fn map_pieces<T, F>(&self, pieces: &[(u64, u64)], f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(u64, u64) -> T + Sync,
    {
        self.pool.install(|| pieces.par_iter().map(|&(lo, hi)| f(lo, hi)).collect())
    }

    fn map_range<T, F>(&self, lo: u64, hi: u64, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(u64, u64) -> T + Sync,
    {
        self.map_pieces(&split_inclusive(lo, hi, self.threads * PIECES_PER_THREAD), f)
    }

    /// Smallest good `m` in `[lo, hi]`.
    pub fn first_good(&self, dp: &DerivedParams, mode: Mode, lo: u64, hi: u64) -> Result<Option<u64>> {
        let wave = SEARCH_BLOCK * (self.threads * PIECES_PER_THREAD) as u64;
        let mut start = lo;
        while start <= hi {
            let end = start.saturating_add(wave - 1).min(hi);
            let blocks: Vec<(u64, u64)> = (start..=end)
                .step_by(SEARCH_BLOCK as usize)
                .map(|b| (b, b.saturating_add(SEARCH_BLOCK - 1).min(end)))
                .collect();
            let mut hit = None;
            for found in self.map_pieces(&blocks, |a, b| scan_range(dp, mode, a, b)) {
                hit = merge_first_hit(hit, found?);
            }
            if hit.is_some() || end == hi {
                return Ok(hit);
            }
            start = end + 1;
        }
        Ok(None)
    }

    pub fn census_counts(&self, dp: &DerivedParams, lo: u64, hi: u64) -> Result<CensusCounts> {
        let mut total = CensusCounts::empty(dp.rows.len());
        for part in self.map_range(lo, hi, |a, b| census_range(dp, a, b)) {
            total = total.merge(&part?);
        }
        Ok(total)
    }

    pub fn census(&self, sp: &SearchParams) -> Result<CensusReport> {
        let dp = derive_params(sp)?;
        let counts = self.census_counts(&dp, sp.scale, sp.upper()?)?;
        Ok(census_report(&dp, &counts))
    }

    /// Parallel counterpart of `erdos728_core::search::scan`.
    pub fn search(&self, sp: &SearchParams) -> Result<ScanOutcome> {
        let dp = prepare_scan(sp)?;
        let upper = sp.upper()?;
        match self.first_good(&dp, sp.mode, sp.scale, upper)? {
            Some(m) => Ok(ScanOutcome::Found(certify(sp, &dp, m)?)),
            None => Ok(ScanOutcome::NotFound(census_report(&dp, &self.census_counts(&dp, sp.scale, upper)?))),
        }
    }

    fn merge_tallies(parts: Vec<Result<Tally>>) -> Result<Tally> {
        parts.into_iter().try_fold(Tally::default(), |acc, t| Ok(acc.merge(t?)))
    }

    pub fn density(&self, lo: u64, hi: u64, c: f64, kind: DivisibilityKind, rule: KRule) -> Result<Tally> {
        Self::merge_tallies(self.map_range(lo, hi, |a, b| density_range(a, b, c, kind, rule)))
    }

    pub fn sharpness(&self, lo: u64, hi: u64, c: f64) -> Tally {
        self.map_range(lo, hi, |a, b| sharpness_range(a, b, c)).into_iter().fold(Tally::default(), Tally::merge)
    }

    pub fn gap(&self, lo: u64, hi: u64, c: f64, c2: f64, rule: PrimeBoundRule, k_rule: KRule) -> Result<Tally> {
        Self::merge_tallies(self.map_range(lo, hi, |a, b| gap_range(a, b, c, c2, rule, k_rule)))
    }
}
