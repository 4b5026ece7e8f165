//! Streaming weighted-ratio estimator.
//!
//! Weights arrive in the log domain and are accumulated as
//! `exp(log_w - shift)` with Neumaier-compensated sums, so the estimate is
//! invariant under a common additive shift of all log weights. States are
//! mergeable values: partial states over disjoint index ranges, merged in a
//! fixed order, reproduce sequential processing to round-off and make the
//! parallel pipeline scheduler-independent.

use crate::measures::LogWeight;
use crate::septest::SepFlags;
use crate::statespace::BlochRadii;
use std::io::{self, Write};

/// Shift is re-based once a weight exceeds it by this much, keeping
/// `exp` far from overflow.
const SHIFT_REBASE: f64 = 300.0;

#[derive(Debug, Clone, Copy)]
pub struct WeightedSample {
    /// Haar log-weight plus eigenvalue log-weight.
    pub log_weight: LogWeight,
    pub flags: SepFlags,
    pub radii: BlochRadii,
    /// Smallest spectrum eigenvalue, consulted by the eigen-floor policy.
    pub min_eigenvalue: f64,
    pub index: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TruncationPolicy {
    None,
    /// Clamp log-weights at `log_cap`.
    WeightCap {
        log_cap: f64,
    },
    /// Reject samples whose smallest eigenvalue is below `delta`.
    EigenFloor {
        delta: f64,
    },
}

impl std::fmt::Display for TruncationPolicy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TruncationPolicy::None => write!(f, "none"),
            TruncationPolicy::WeightCap { log_cap } => write!(f, "weight-cap:{log_cap}"),
            TruncationPolicy::EigenFloor { delta } => write!(f, "eigen-floor:{delta}"),
        }
    }
}

impl std::str::FromStr for TruncationPolicy {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> crate::error::Result<Self> {
        if s == "none" {
            return Ok(TruncationPolicy::None);
        }
        if let Some(v) = s.strip_prefix("weight-cap:") {
            let log_cap = v.parse().map_err(|_| {
                crate::error::Error::Domain(format!("bad weight-cap value in `{s}`"))
            })?;
            return Ok(TruncationPolicy::WeightCap { log_cap });
        }
        if let Some(v) = s.strip_prefix("eigen-floor:") {
            let delta: f64 = v.parse().map_err(|_| {
                crate::error::Error::Domain(format!("bad eigen-floor value in `{s}`"))
            })?;
            if delta <= 0.0 {
                return Err(crate::error::Error::Domain(
                    "eigen-floor delta must be positive".into(),
                ));
            }
            return Ok(TruncationPolicy::EigenFloor { delta });
        }
        Err(crate::error::Error::Domain(format!(
            "unknown truncation policy `{s}`"
        )))
    }
}

/// Neumaier-compensated accumulator.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
struct Comp {
    sum: f64,
    c: f64,
}

impl Comp {
    #[inline]
    fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.c += (self.sum - t) + v;
        } else {
            self.c += (v - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.c
    }

    fn scale(&mut self, k: f64) {
        self.sum *= k;
        self.c *= k;
    }

    /// Fold another accumulator in; order-sensitive by construction, so the
    /// caller must merge in a fixed order.
    fn merge(&mut self, other: &Comp) {
        self.add(other.sum);
        self.add(other.c);
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
struct BinAcc {
    total: Comp,
    sep: Comp,
    count: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow {
    pub block: u64,
    pub points: u64,
    pub sep_estimate: f64,
    pub abs_sep_estimate: f64,
    pub discards: u64,
    pub ess: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinEstimate {
    pub radius_lo: f64,
    pub radius_hi: f64,
    pub sep_probability: Option<f64>,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstimatorState {
    log_shift: Option<f64>,
    sum_total: Comp,
    sum_sep: Comp,
    sum_abs: Comp,
    /// Sum of squared shifted weights (shift counted twice), for ESS.
    sum_sq: Comp,
    count: u64,
    discard_count: u64,
    floor_reject_count: u64,
    bins: Vec<BinAcc>,
    trace: Vec<TraceRow>,
}

impl EstimatorState {
    pub fn new(bin_count: usize) -> Self {
        EstimatorState {
            log_shift: None,
            sum_total: Comp::default(),
            sum_sep: Comp::default(),
            sum_abs: Comp::default(),
            sum_sq: Comp::default(),
            count: 0,
            discard_count: 0,
            floor_reject_count: 0,
            bins: vec![BinAcc::default(); bin_count.max(1)],
            trace: Vec::new(),
        }
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    /// Non-finite-weight discards.
    pub fn discard_count(&self) -> u64 {
        self.discard_count
    }

    /// Eigen-floor policy rejections (reported separately from discards).
    pub fn floor_reject_count(&self) -> u64 {
        self.floor_reject_count
    }

    pub fn trace(&self) -> &[TraceRow] {
        &self.trace
    }

    fn rebase(&mut self, new_shift: f64) {
        if let Some(old) = self.log_shift {
            let k = (old - new_shift).exp();
            self.sum_total.scale(k);
            self.sum_sep.scale(k);
            self.sum_abs.scale(k);
            self.sum_sq.scale(k * k);
            for b in &mut self.bins {
                b.total.scale(k);
                b.sep.scale(k);
            }
        }
        self.log_shift = Some(new_shift);
    }

    pub fn accumulate(&mut self, sample: &WeightedSample, policy: &TruncationPolicy) {
        if !sample.log_weight.finite {
            self.discard_count += 1;
            return;
        }
        if let TruncationPolicy::EigenFloor { delta } = policy {
            if sample.min_eigenvalue < *delta {
                self.floor_reject_count += 1;
                return;
            }
        }
        let mut lw = sample.log_weight.log_value;
        if let TruncationPolicy::WeightCap { log_cap } = policy {
            lw = lw.min(*log_cap);
        }
        self.count += 1;
        if lw.is_finite() {
            match self.log_shift {
                None => self.log_shift = Some(lw),
                Some(shift) if lw > shift + SHIFT_REBASE => self.rebase(lw),
                _ => {}
            }
        }
        let shift = match self.log_shift {
            Some(s) => s,
            // only -inf weights seen so far: nothing to add
            None => return,
        };
        let w = (lw - shift).exp();
        self.sum_total.add(w);
        self.sum_sq.add(w * w);
        if sample.flags.separable {
            self.sum_sep.add(w);
        }
        if sample.flags.absolutely_separable {
            self.sum_abs.add(w);
        }
        let nb = self.bins.len();
        let bin = ((sample.radii.r_a * nb as f64) as usize).min(nb - 1);
        self.bins[bin].total.add(w);
        self.bins[bin].count += 1;
        if sample.flags.separable {
            self.bins[bin].sep.add(w);
        }
    }

    /// `(sep_probability, abs_sep_probability, effective_sample_size)`, or
    /// `None` when no weight has been accumulated.
    pub fn current_estimate(&self) -> Option<(f64, f64, f64)> {
        let total = self.sum_total.value();
        if !(total > 0.0) {
            return None;
        }
        let sep = self.sum_sep.value() / total;
        let abs = self.sum_abs.value() / total;
        let sq = self.sum_sq.value();
        let ess = if sq > 0.0 { total * total / sq } else { 0.0 };
        Some((sep, abs, ess))
    }

    pub fn bin_estimates(&self) -> Vec<BinEstimate> {
        let nb = self.bins.len();
        self.bins
            .iter()
            .enumerate()
            .map(|(i, b)| {
                let total = b.total.value();
                BinEstimate {
                    radius_lo: i as f64 / nb as f64,
                    radius_hi: (i + 1) as f64 / nb as f64,
                    sep_probability: if total > 0.0 {
                        Some(b.sep.value() / total)
                    } else {
                        None
                    },
                    count: b.count,
                }
            })
            .collect()
    }

    /// Append a convergence-trace row for a completed block.
    pub fn emit_trace_row(&mut self, block_index: u64) {
        if self.count + self.discard_count + self.floor_reject_count == 0 {
            return;
        }
        let (sep, abs, ess) = self.current_estimate().unwrap_or((f64::NAN, f64::NAN, 0.0));
        self.trace.push(TraceRow {
            block: block_index,
            points: self.count + self.discard_count + self.floor_reject_count,
            sep_estimate: sep,
            abs_sep_estimate: abs,
            discards: self.discard_count + self.floor_reject_count,
            ess,
        });
    }

    /// Fold `other` (covering a later index range) into `self`.
    pub fn merge(&mut self, other: &EstimatorState) {
        assert_eq!(self.bins.len(), other.bins.len(), "bin layouts differ");
        match (self.log_shift, other.log_shift) {
            (_, None) => {}
            (None, Some(s)) => self.log_shift = Some(s),
            (Some(a), Some(b)) => {
                let target = a.max(b);
                self.rebase(target);
                let k = (b - target).exp();
                let mut o = other.clone();
                o.sum_total.scale(k);
                o.sum_sep.scale(k);
                o.sum_abs.scale(k);
                o.sum_sq.scale(k * k);
                for bin in &mut o.bins {
                    bin.total.scale(k);
                    bin.sep.scale(k);
                }
                self.fold_sums(&o);
                self.fold_counts_and_trace(other);
                return;
            }
        }
        self.fold_sums(other);
        self.fold_counts_and_trace(other);
    }

    fn fold_sums(&mut self, other: &EstimatorState) {
        self.sum_total.merge(&other.sum_total);
        self.sum_sep.merge(&other.sum_sep);
        self.sum_abs.merge(&other.sum_abs);
        self.sum_sq.merge(&other.sum_sq);
        for (a, b) in self.bins.iter_mut().zip(&other.bins) {
            a.total.merge(&b.total);
            a.sep.merge(&b.sep);
            a.count += b.count;
        }
    }

    fn fold_counts_and_trace(&mut self, other: &EstimatorState) {
        self.count += other.count;
        self.discard_count += other.discard_count;
        self.floor_reject_count += other.floor_reject_count;
        self.trace.extend_from_slice(&other.trace);
    }

    /// Trace CSV: `block,points,sep_estimate,abs_sep_estimate,discards,ess`.
    pub fn write_trace_csv<W: Write>(&self, w: &mut W) -> io::Result<()> {
        writeln!(w, "block,points,sep_estimate,abs_sep_estimate,discards,ess")?;
        for row in &self.trace {
            writeln!(
                w,
                "{},{},{},{},{},{}",
                row.block,
                row.points,
                row.sep_estimate,
                row.abs_sep_estimate,
                row.discards,
                row.ess
            )?;
        }
        Ok(())
    }
}
