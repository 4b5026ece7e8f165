//! End-to-end estimation runs: quasirandom points through state assembly,
//! weighting and classification into the streaming estimator.
//!
//! Determinism contract: the index range is partitioned at fixed chunk
//! boundaries (2^16 indices) and at trace-block boundaries. Chunks may be
//! processed by any worker in any order; partial states are merged strictly
//! in chunk order, so the result is bit-identical for any worker count.

use crate::error::{Error, Result};
use crate::estimator::{EstimatorState, TruncationPolicy, WeightedSample};
use crate::lds::QuasirandomStream;
use crate::measures::{eig_weight_log, LogWeight, MeasureKind};
use crate::septest::{absolutely_separable, ppt_det, SepFlags};
use crate::statespace::{assemble_state, reduced_bloch_radii, STATE_DIMENSION};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::ops::Range;
use std::time::Instant;

pub const CHUNK: u64 = 1 << 16;
pub const DEFAULT_BLOCK: u64 = 2_000_000;
pub const DEFAULT_BINS: usize = 10;

/// How many chunks to farm out per parallel batch before the ordered merge.
const BATCH_CHUNKS: usize = 256;

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub measure: MeasureKind,
    pub alpha0: f64,
    pub points: u64,
    pub block: u64,
    pub policy: TruncationPolicy,
    pub bins: usize,
    pub workers: usize,
    /// Added to every sequence index (the sequence itself starts at n = 0).
    pub index_offset: u64,
}

impl RunConfig {
    pub fn new(measure: MeasureKind, points: u64) -> Self {
        RunConfig {
            measure,
            alpha0: 0.5,
            points,
            block: DEFAULT_BLOCK,
            policy: TruncationPolicy::None,
            bins: DEFAULT_BINS,
            workers: 0,
            index_offset: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.points < self.block {
            return Err(Error::Domain(format!(
                "points ({}) must be at least one block ({})",
                self.points, self.block
            )));
        }
        if self.block == 0 {
            return Err(Error::Domain("block size must be positive".into()));
        }
        if self.bins == 0 {
            return Err(Error::Domain("bin count must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RunSummary {
    pub measure: String,
    pub alpha0: f64,
    pub points: u64,
    pub block: u64,
    pub policy: String,
    pub bins: usize,
    pub workers: usize,
    pub index_offset: u64,
    pub sep_estimate: f64,
    pub abs_sep_estimate: f64,
    pub ess: f64,
    pub accepted: u64,
    pub discards: u64,
    pub floor_rejections: u64,
    pub wall_time_s: f64,
}

#[derive(Debug, Clone)]
pub struct RunResult {
    pub summary: RunSummary,
    pub state: EstimatorState,
}

/// Classify and weight the state at sequence index `n`.
pub fn weigh_point(
    stream: &QuasirandomStream,
    measure: MeasureKind,
    n: u64,
    buf: &mut [f64; STATE_DIMENSION],
) -> WeightedSample {
    stream.point_into(n, buf);
    let state = assemble_state(buf).expect("15 coordinates");
    let eig = eig_weight_log(measure, &state.spectrum);
    let log_weight = if eig.finite {
        LogWeight::new(state.haar_weight.ln() + eig.log_value)
    } else {
        LogWeight::non_finite()
    };
    let abs = absolutely_separable(&state.spectrum);
    // The spectral condition implies PPT exactly; the `|| abs` guard keeps
    // the implication intact against determinant round-off at the boundary.
    let separable = ppt_det(&state.rho) >= 0.0 || abs;
    WeightedSample {
        log_weight,
        flags: SepFlags {
            separable,
            absolutely_separable: abs,
        },
        radii: reduced_bloch_radii(&state),
        min_eigenvalue: state.spectrum.min(),
        index: n,
    }
}

fn process_range(
    stream: &QuasirandomStream,
    config: &RunConfig,
    range: Range<u64>,
) -> EstimatorState {
    let mut state = EstimatorState::new(config.bins);
    let mut buf = [0.0; STATE_DIMENSION];
    for n in range {
        let sample = weigh_point(stream, config.measure, config.index_offset + n, &mut buf);
        state.accumulate(&sample, &config.policy);
    }
    state
}

/// Fixed partition of `0..points` at chunk and block boundaries.
fn subranges(points: u64, block: u64) -> Vec<Range<u64>> {
    let mut out = Vec::new();
    let mut cur = 0u64;
    while cur < points {
        let next_chunk = (cur / CHUNK + 1) * CHUNK;
        let next_block = (cur / block + 1) * block;
        let next = next_chunk.min(next_block).min(points);
        out.push(cur..next);
        cur = next;
    }
    out
}

pub fn run(config: &RunConfig) -> Result<RunResult> {
    config.validate()?;
    let started = Instant::now();
    let stream = QuasirandomStream::new(STATE_DIMENSION as u32, config.alpha0)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| Error::Domain(format!("worker pool: {e}")))?;

    let ranges = subranges(config.points, config.block);
    let mut merged = EstimatorState::new(config.bins);
    for batch in ranges.chunks(BATCH_CHUNKS) {
        let partials: Vec<EstimatorState> = pool.install(|| {
            batch
                .par_iter()
                .map(|r| process_range(&stream, config, r.clone()))
                .collect()
        });
        for (range, partial) in batch.iter().zip(&partials) {
            merged.merge(partial);
            if range.end % config.block == 0 {
                merged.emit_trace_row(range.end / config.block);
            }
        }
    }

    let (sep, abs, ess) = merged
        .current_estimate()
        .unwrap_or((f64::NAN, f64::NAN, 0.0));
    let summary = RunSummary {
        measure: config.measure.to_string(),
        alpha0: config.alpha0,
        points: config.points,
        block: config.block,
        policy: config.policy.to_string(),
        bins: config.bins,
        workers: config.workers,
        index_offset: config.index_offset,
        sep_estimate: sep,
        abs_sep_estimate: abs,
        ess,
        accepted: merged.count(),
        discards: merged.discard_count(),
        floor_rejections: merged.floor_reject_count(),
        wall_time_s: started.elapsed().as_secs_f64(),
    };
    Ok(RunResult {
        summary,
        state: merged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subranges_partition_exactly() {
        let rs = subranges(5_000_000, 2_000_000);
        assert_eq!(rs.first().unwrap().start, 0);
        assert_eq!(rs.last().unwrap().end, 5_000_000);
        for pair in rs.windows(2) {
            assert_eq!(pair[0].end, pair[1].start);
        }
        // block boundaries must coincide with subrange edges
        for b in [2_000_000u64, 4_000_000] {
            assert!(rs.iter().any(|r| r.end == b));
        }
        for r in &rs {
            assert!(r.end - r.start <= CHUNK);
        }
    }

    #[test]
    fn config_validation() {
        let mut c = RunConfig::new(MeasureKind::HilbertSchmidt, 0);
        assert!(c.validate().is_err());
        c.points = DEFAULT_BLOCK;
        assert!(c.validate().is_ok());
        c.bins = 0;
        assert!(c.validate().is_err());
    }

    #[test]
    fn small_run_produces_trace_and_reasonable_estimate() {
        let mut c = RunConfig::new(MeasureKind::HilbertSchmidt, 400_000);
        c.block = 100_000;
        c.workers = 1;
        let res = run(&c).unwrap();
        assert_eq!(res.state.trace().len(), 4);
        assert!(res.summary.sep_estimate > 0.0 && res.summary.sep_estimate < 1.0);
        assert!(res.summary.abs_sep_estimate <= res.summary.sep_estimate);
        assert_eq!(res.summary.accepted + res.summary.discards, 400_000);
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let mut base = RunConfig::new(MeasureKind::Bures, 300_000);
        base.block = 100_000;
        let mut summaries = Vec::new();
        for workers in [1usize, 2, 4] {
            let mut c = base.clone();
            c.workers = workers;
            let mut s = run(&c).unwrap().summary;
            s.workers = 0;
            s.wall_time_s = 0.0;
            summaries.push(s);
        }
        assert_eq!(
            summaries[0].sep_estimate.to_bits(),
            summaries[1].sep_estimate.to_bits()
        );
        assert_eq!(summaries[0], summaries[1]);
        assert_eq!(summaries[1], summaries[2]);
    }
}
