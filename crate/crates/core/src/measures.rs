//! The ten measures: operator monotone functions `f` and the log-domain
//! eigenvalue weights they induce.
//!
//! Each monotone `f` is symmetric and normalized: `f(1) = 1` and
//! `f(x) = x f(1/x)`. The four-eigenvalue weight is
//!
//! ```text
//! prod_{i<j} (li - lj)^2 * l1^3 l2^2 l3
//! -------------------------------------------------,  l1 >= l2 >= l3 >= l4,
//! (l1 l2 l3 l4)^{7/2} * prod_{i<j} f(li / lj)
//! ```
//!
//! which is permutation symmetric as a whole; sorting descending first just
//! fixes the convention for the asymmetric power factors. Hilbert-Schmidt
//! uses the bare squared Vandermonde, the induced(k) family adds det^k.
//! Everything is evaluated in the log domain so the single-precision
//! overflows that forced sample discards in earlier numerics cannot occur;
//! a non-finite log weight is flagged instead of silently propagating.

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::statespace::Spectrum;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MeasureKind {
    HilbertSchmidt,
    /// Induced measure with parameter `k = K - N`; `k = 0` is Hilbert-Schmidt.
    Induced(u32),
    Bures,
    Maximal,
    KuboMori,
    Geometric,
    WignerYanase,
    LogGeometric,
    ArithMinMax,
    MorozovaChentsov,
    Identric,
}

pub const MONOTONE_KINDS: [MeasureKind; 9] = [
    MeasureKind::Bures,
    MeasureKind::Maximal,
    MeasureKind::KuboMori,
    MeasureKind::Geometric,
    MeasureKind::WignerYanase,
    MeasureKind::LogGeometric,
    MeasureKind::ArithMinMax,
    MeasureKind::MorozovaChentsov,
    MeasureKind::Identric,
];

impl MeasureKind {
    pub fn is_monotone(&self) -> bool {
        !matches!(self, MeasureKind::HilbertSchmidt | MeasureKind::Induced(_))
    }

    /// Whether the two-qubit state volume under this measure is finite.
    pub fn has_finite_volume(&self) -> bool {
        !matches!(
            self,
            MeasureKind::Geometric | MeasureKind::Maximal | MeasureKind::LogGeometric
        )
    }
}

impl fmt::Display for MeasureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeasureKind::HilbertSchmidt => write!(f, "hs"),
            MeasureKind::Induced(k) => write!(f, "induced:{k}"),
            MeasureKind::Bures => write!(f, "bures"),
            MeasureKind::Maximal => write!(f, "maximal"),
            MeasureKind::KuboMori => write!(f, "kubo-mori"),
            MeasureKind::Geometric => write!(f, "geometric"),
            MeasureKind::WignerYanase => write!(f, "wigner-yanase"),
            MeasureKind::LogGeometric => write!(f, "log-geometric"),
            MeasureKind::ArithMinMax => write!(f, "arith-minmax"),
            MeasureKind::MorozovaChentsov => write!(f, "morozova-chentsov"),
            MeasureKind::Identric => write!(f, "identric"),
        }
    }
}

impl FromStr for MeasureKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if let Some(k) = s.strip_prefix("induced:") {
            let k: u32 = k
                .parse()
                .map_err(|_| Error::Domain(format!("bad induced parameter in `{s}`")))?;
            return Ok(MeasureKind::Induced(k));
        }
        match s {
            "hs" => Ok(MeasureKind::HilbertSchmidt),
            "bures" => Ok(MeasureKind::Bures),
            "maximal" => Ok(MeasureKind::Maximal),
            "kubo-mori" => Ok(MeasureKind::KuboMori),
            "geometric" => Ok(MeasureKind::Geometric),
            "wigner-yanase" => Ok(MeasureKind::WignerYanase),
            "log-geometric" => Ok(MeasureKind::LogGeometric),
            "arith-minmax" => Ok(MeasureKind::ArithMinMax),
            "morozova-chentsov" => Ok(MeasureKind::MorozovaChentsov),
            "identric" => Ok(MeasureKind::Identric),
            _ => Err(Error::Domain(format!("unknown measure `{s}`"))),
        }
    }
}

/// Log-domain weight. `finite == false` marks +inf or NaN (a divergence to
/// be counted and discarded); `log_value == -inf` with `finite == true` is
/// an ordinary zero weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogWeight {
    pub log_value: f64,
    pub finite: bool,
}

impl LogWeight {
    pub fn new(log_value: f64) -> Self {
        LogWeight {
            log_value,
            finite: !(log_value.is_nan() || log_value == f64::INFINITY),
        }
    }

    pub fn non_finite() -> Self {
        LogWeight {
            log_value: f64::INFINITY,
            finite: false,
        }
    }
}

/// Evaluate the operator monotone function of a monotone kind at `x > 0`.
///
/// The removable singularities at `x = 1` (Kubo-Mori, log-geometric,
/// Morozova-Chentsov, identric) are computed through `ln_accurate`, which
/// stays exact arbitrarily close to 1 and down to subnormal `x`; only
/// `x == 1` itself needs the limit.
pub fn f_eval<T: Real>(kind: MeasureKind, x: T) -> Result<T> {
    if !kind.is_monotone() {
        return Err(Error::Domain(format!("measure `{kind}` has no monotone f")));
    }
    if !(x > T::zero()) {
        return Err(Error::Domain(format!("f requires x > 0, got {x:?}")));
    }
    let one = T::one();
    let two = T::of(2.0);
    let t = x - one;
    Ok(match kind {
        MeasureKind::Bures => (x + one) / two,
        MeasureKind::Maximal => two * x / (x + one),
        MeasureKind::KuboMori => {
            if t == T::zero() {
                one
            } else {
                t / ln_accurate(x, t)
            }
        }
        MeasureKind::Geometric => x.sqrt(),
        MeasureKind::WignerYanase => {
            let h = (x.sqrt() + one) / two;
            h * h
        }
        MeasureKind::LogGeometric => {
            if t == T::zero() {
                one
            } else {
                two * t * x.sqrt() / ((x + one) * ln_accurate(x, t))
            }
        }
        MeasureKind::ArithMinMax => (x * x + T::of(6.0) * x + one) / (T::of(4.0) * (x + one)),
        MeasureKind::MorozovaChentsov => {
            if t == T::zero() {
                one
            } else {
                let l = ln_accurate(x, t);
                two * t * t / ((x + one) * l * l)
            }
        }
        MeasureKind::Identric => ln_f_identric(x).exp(),
        MeasureKind::HilbertSchmidt | MeasureKind::Induced(_) => unreachable!(),
    })
}

/// `ln x` through whichever form stays accurate: `ln_1p(x - 1)` near the
/// removable singularity at `x = 1`, plain `ln` for small `x`, where
/// `x - 1` would round to `-1` and `ln_1p` would return `-inf`.
fn ln_accurate<T: Real>(x: T, t: T) -> T {
    if x < T::of(0.5) {
        x.ln()
    } else {
        t.ln_1p()
    }
}

/// `ln f(x)` for the identric measure, `x ln(x)/(x-1) - 1`, safe against
/// the overflow of `x^{x/(x-1)}` at large `x`.
fn ln_f_identric<T: Real>(x: T) -> T {
    let t = x - T::one();
    if t == T::zero() {
        T::zero()
    } else {
        x * ln_accurate(x, t) / t - T::one()
    }
}

/// `ln f(x)`; identric bypasses the exponential.
fn ln_f(kind: MeasureKind, x: f64) -> f64 {
    match kind {
        MeasureKind::Identric => ln_f_identric(x),
        _ => f_eval(kind, x).expect("monotone kind, positive x").ln(),
    }
}

/// Log of the four-eigenvalue measure weight.
pub fn eig_weight_log(kind: MeasureKind, spectrum: &Spectrum) -> LogWeight {
    let l = spectrum.sorted_desc();
    let mut log_vdm2 = 0.0;
    for i in 0..4 {
        for j in i + 1..4 {
            log_vdm2 += 2.0 * (l[i] - l[j]).ln();
        }
    }
    match kind {
        MeasureKind::HilbertSchmidt => LogWeight::new(log_vdm2),
        MeasureKind::Induced(k) => {
            if k == 0 {
                return LogWeight::new(log_vdm2);
            }
            let log_det: f64 = l.iter().map(|v| v.ln()).sum();
            LogWeight::new(log_vdm2 + k as f64 * log_det)
        }
        _ => {
            if l[3] <= 0.0 {
                // f-based weights diverge on the simplex boundary
                return LogWeight::non_finite();
            }
            let log_det: f64 = l.iter().map(|v| v.ln()).sum();
            let mut lv = log_vdm2 + 3.0 * l[0].ln() + 2.0 * l[1].ln() + l[2].ln() - 3.5 * log_det;
            for i in 0..4 {
                for j in i + 1..4 {
                    lv -= ln_f(kind, l[i] / l[j]);
                }
            }
            LogWeight::new(lv)
        }
    }
}

/// Log of the single-qubit (n = 2) eigenvalue weight at `(l, 1-l)`:
/// `(l1-l2)^2 / (sqrt(l1 l2) * l2 f(l1/l2))`. Used by the single-qubit
/// volume-ratio cross-checks; monotone kinds only.
pub fn qubit_eig_weight_log(kind: MeasureKind, lambda: f64) -> Result<LogWeight> {
    if !kind.is_monotone() {
        return Err(Error::Domain(format!(
            "single-qubit weight needs a monotone kind, got `{kind}`"
        )));
    }
    if lambda <= 0.0 || lambda >= 1.0 {
        return Ok(LogWeight::non_finite());
    }
    let l1 = lambda;
    let l2 = 1.0 - lambda;
    let lv = 2.0 * (l1 - l2).abs().ln() - 0.5 * (l1.ln() + l2.ln()) - l2.ln() - ln_f(kind, l1 / l2);
    Ok(LogWeight::new(lv))
}
