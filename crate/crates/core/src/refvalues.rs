//! Deterministic reference values: separability functions, the conjecture
//! double integrals for the three exponent families, the Hilbert-Schmidt
//! absolute-separability constant, eigenvalue-simplex absolute-separability
//! quadratures and single-qubit volume ratios.
//!
//! Everything here is closed-form or quadrature-based and serves as the
//! independent check against which the quasirandom estimates are judged.

use crate::error::{Error, Result};
use crate::measures::{eig_weight_log, qubit_eig_weight_log, MeasureKind};
use crate::quad;
pub use crate::special::li2;
use crate::special::ln_gamma;
use crate::statespace::Spectrum;
use std::f64::consts::PI;

// ---------------------------------------------------------------------------
// Separability functions
// ---------------------------------------------------------------------------

/// Which separability function to evaluate at the singular-value ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SepFunction {
    /// Rebit case: dilogarithm closed form.
    D1,
    /// Qubit case: (1/3) e^2 (4 - e^2).
    D2,
    /// Quaterbit case: (1/35) e^4 (15 e^4 - 64 e^2 + 84).
    D4,
    /// Hypergeometric series for arbitrary Dyson index.
    General(f64),
    /// Induced-measure (k = 1) variant: (1/4) e^2 (3 - e^2)^2.
    InducedK1,
}

/// Evaluate a separability function at `eps` in [0, 1] (normalized so the
/// value at 1 is 1).
pub fn sep_function(kind: SepFunction, eps: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&eps) {
        return Err(Error::Domain(format!(
            "separability functions need eps in [0, 1], got {eps}"
        )));
    }
    let e2 = eps * eps;
    match kind {
        SepFunction::D2 => Ok(e2 * (4.0 - e2) / 3.0),
        SepFunction::D4 => Ok(e2 * e2 * (15.0 * e2 * e2 - 64.0 * e2 + 84.0) / 35.0),
        SepFunction::InducedK1 => Ok(0.25 * e2 * (3.0 - e2) * (3.0 - e2)),
        SepFunction::D1 => chi1(eps),
        SepFunction::General(d) => chi_general(d, eps),
    }
}

/// Dilogarithm closed form for the rebit separability function, with a
/// series fallback near 0 where the expression is a removable 0/0.
fn chi1(eps: f64) -> Result<f64> {
    if eps == 1.0 {
        return Ok(1.0);
    }
    if eps < 1e-3 {
        let e2 = eps * eps;
        return Ok(32.0 / (PI * PI) * eps * (1.0 / 3.0 - e2 / 45.0 - e2 * e2 / 525.0));
    }
    let at = eps.atanh();
    let e2 = eps * eps;
    let num = e2 * (4.0 * li2(eps)? - li2(e2)?) - e2 * e2 * at + e2 * eps - eps + at;
    Ok(2.0 * num / (PI * PI * e2))
}

/// Hypergeometric-series separability function for arbitrary Dyson index
/// `d > 0`, summed directly in eps^2 with a log-gamma leading term.
fn chi_general(d: f64, eps: f64) -> Result<f64> {
    if d <= 0.0 {
        return Err(Error::Domain(format!("series needs d > 0, got {d}")));
    }
    if eps == 0.0 {
        return Ok(0.0);
    }
    let z = eps * eps;
    let mut term =
        (3.0 * ln_gamma(d + 1.0) - 3.0 * ln_gamma(0.5 * d + 1.0) - ln_gamma(1.5 * d + 1.0)).exp();
    let mut sum = term;
    for k in 0..100_000u32 {
        let kf = f64::from(k);
        term *= (kf - 0.5 * d) * (kf + 0.5 * d) * (kf + d) * z
            / ((kf + 1.0) * (kf + 0.5 * d + 1.0) * (kf + 1.5 * d + 1.0));
        if term == 0.0 {
            break;
        }
        if !term.is_finite() {
            return Err(Error::NonConvergence {
                quantity: format!("separability-series d={d} eps={eps}"),
                err: f64::INFINITY,
            });
        }
        sum += term;
        if term.abs() <= 1e-16 * sum.abs() {
            break;
        }
    }
    Ok(eps.powf(d) * sum)
}

/// Integrand of the rebit separability function's integral form, with a
/// series branch where the direct expression loses all its digits.
pub fn chi1_integrand(s: f64) -> f64 {
    if s <= 0.0 {
        return 8.0 / 3.0;
    }
    if s >= 1.0 {
        return 2.0;
    }
    if s < 0.1 {
        let s2 = s * s;
        let mut acc = 0.0;
        let mut p = s2;
        for k in 1..=9u32 {
            let k = f64::from(k);
            acc += p / ((2.0 * k - 1.0) * (2.0 * k + 1.0) * (2.0 * k + 3.0));
            p *= s2;
        }
        return 8.0 / 3.0 - 8.0 * acc;
    }
    let d = s - 1.0 / s;
    (s + 1.0 / s - 0.5 * d * d * ((1.0 + s) / (1.0 - s)).ln()) / s
}

/// Rebit separability function by quadrature of its integral form; used as
/// an independent oracle for the dilogarithm closed form.
pub fn chi1_from_integral(eps: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&eps) {
        return Err(Error::Domain(format!("eps out of [0, 1]: {eps}")));
    }
    let r = quad::integrate(&chi1_integrand, 0.0, eps, 1e-13);
    if !r.converged {
        return Err(Error::NonConvergence {
            quantity: format!("chi1-integral eps={eps}"),
            err: r.err,
        });
    }
    Ok(4.0 / (PI * PI) * r.value)
}

// ---------------------------------------------------------------------------
// Conjecture double integrals
// ---------------------------------------------------------------------------

/// Exponent attached to the (1 - x^2) factors of the conjecture integrals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExponentFamily {
    /// Exponent d (Hilbert-Schmidt form).
    Hs,
    /// Exponent -d/4 (the sqrt(x)-measure form).
    SqrtX,
    /// Exponent (d-2)/4 (the alternative ansatz).
    Alt,
}

impl ExponentFamily {
    pub fn exponent(self, d: u32) -> f64 {
        let d = f64::from(d);
        match self {
            ExponentFamily::Hs => d,
            ExponentFamily::SqrtX => -d / 4.0,
            ExponentFamily::Alt => (d - 2.0) / 4.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ExponentFamily::Hs => "hs",
            ExponentFamily::SqrtX => "sqrtx",
            ExponentFamily::Alt => "alt",
        }
    }
}

/// A quadrature value that may be a detected non-integrable divergence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QuadOutcome {
    Finite(f64),
    Divergent,
}

impl QuadOutcome {
    pub fn value(self) -> Option<f64> {
        match self {
            QuadOutcome::Finite(v) => Some(v),
            QuadOutcome::Divergent => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConjectureQuadrature {
    pub d: u32,
    pub family: ExponentFamily,
    pub numerator: QuadOutcome,
    pub denominator: QuadOutcome,
    pub ratio: QuadOutcome,
}

fn sep_function_for(d: u32) -> Result<SepFunction> {
    match d {
        1 => Ok(SepFunction::D1),
        2 => Ok(SepFunction::D2),
        4 => Ok(SepFunction::D4),
        _ => Err(Error::Domain(format!(
            "Dyson index must be 1, 2 or 4, got {d}"
        ))),
    }
}

/// Double integral over -1 <= y <= x <= 1 of
/// `sep(eps(x, y)) (1-x^2)^p (1-y^2)^p (x-y)^d`, computed after the
/// substitution x = sin(theta), y = sin(phi) which absorbs the endpoint
/// behavior of the weight factors. `sep = None` gives the denominator.
fn conjecture_integral(d: u32, p: f64, sep: Option<SepFunction>, tol: f64) -> Result<f64> {
    let e = 2.0 * p + 1.0;
    let di = d as i32;
    let outer = |theta: f64| -> f64 {
        let st = theta.sin();
        let scale = theta.cos().powf(e);
        let tt = (0.25 * PI - 0.5 * theta).tan();
        let inner = |phi: f64| -> f64 {
            let w = phi.cos().powf(e) * (st - phi.sin()).powi(di);
            match sep {
                None => w,
                Some(kind) => {
                    let tp = (0.25 * PI - 0.5 * phi).tan();
                    let eps = (tt / tp).clamp(0.0, 1.0);
                    sep_function(kind, eps).unwrap_or(0.0) * w
                }
            }
        };
        // Rescale the inner tolerance so the cos^e prefactor (which can be
        // huge for negative exponents) does not amplify inner noise.
        let inner_tol = (0.01 * tol / scale.max(1.0)).max(1e-15);
        scale * quad::integrate(&inner, -0.5 * PI, theta, inner_tol).value
    };
    let r = quad::integrate(&outer, -0.5 * PI, 0.5 * PI, tol);
    if r.err > 100.0 * tol {
        let which = if sep.is_some() {
            "numerator"
        } else {
            "denominator"
        };
        return Err(Error::NonConvergence {
            quantity: format!("d{d} {which} quadrature"),
            err: r.err,
        });
    }
    Ok(r.value)
}

/// Detect whether the denominator integrand diverges non-integrably at the
/// y = -1 endpoint (which happens once the exponent reaches -1).
fn denominator_diverges(d: u32, p: f64) -> bool {
    let e = 2.0 * p + 1.0;
    let di = d as i32;
    let slice = |phi: f64| phi.cos().powf(e) * (-phi.sin()).powi(di);
    quad::probe_divergence(&slice, -0.5 * PI, 0.0)
}

fn conjecture_tol(d: u32) -> f64 {
    match d {
        2 => 1e-11,
        1 => 1e-9,
        _ => 1e-8,
    }
}

/// Numerator, denominator and ratio of the conjecture integral for a given
/// Dyson index and exponent family. A non-integrable denominator is reported
/// as `Divergent` (the numerator is still finite and returned).
pub fn sep_prob_quadrature(d: u32, family: ExponentFamily) -> Result<ConjectureQuadrature> {
    let sf = sep_function_for(d)?;
    let p = family.exponent(d);
    let tol = conjecture_tol(d);
    let numerator = QuadOutcome::Finite(conjecture_integral(d, p, Some(sf), tol)?);
    let (denominator, ratio) = if denominator_diverges(d, p) {
        (QuadOutcome::Divergent, QuadOutcome::Divergent)
    } else {
        let den = conjecture_integral(d, p, None, tol)?;
        let num = numerator.value().unwrap();
        (QuadOutcome::Finite(den), QuadOutcome::Finite(num / den))
    };
    Ok(ConjectureQuadrature {
        d,
        family,
        numerator,
        denominator,
        ratio,
    })
}

// ---------------------------------------------------------------------------
// Hilbert-Schmidt absolute-separability constant
// ---------------------------------------------------------------------------

// Double-double arithmetic for the heavily cancelling constant below: the
// printed forms subtract terms near 6e4 to leave 3.7e-3, so plain f64 would
// keep only ~11 digits of the result.
#[derive(Debug, Clone, Copy)]
struct Dd {
    hi: f64,
    lo: f64,
}

const DD_SQRT2: Dd = Dd {
    hi: 1.414_213_562_373_095_1,
    lo: -9.667_293_313_452_913e-17,
};
const DD_PI: Dd = Dd {
    hi: 3.141_592_653_589_793,
    lo: 1.224_646_799_147_353_2e-16,
};
const DD_ATAN_SQRT2: Dd = Dd {
    hi: 0.955_316_618_124_509_3,
    lo: -1.988_510_594_379_680_6e-17,
};

impl Dd {
    fn from(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    fn two_sum(a: f64, b: f64) -> Dd {
        let s = a + b;
        let bb = s - a;
        Dd {
            hi: s,
            lo: (a - (s - bb)) + (b - bb),
        }
    }

    fn two_prod(a: f64, b: f64) -> Dd {
        let p = a * b;
        Dd {
            hi: p,
            lo: a.mul_add(b, -p),
        }
    }

    fn add(self, o: Dd) -> Dd {
        let s = Dd::two_sum(self.hi, o.hi);
        let lo = s.lo + self.lo + o.lo;
        Dd::two_sum(s.hi, lo)
    }

    fn sub(self, o: Dd) -> Dd {
        self.add(Dd {
            hi: -o.hi,
            lo: -o.lo,
        })
    }

    fn mul(self, o: Dd) -> Dd {
        let p = Dd::two_prod(self.hi, o.hi);
        let lo = p.lo + self.hi * o.lo + self.lo * o.hi;
        Dd::two_sum(p.hi, lo)
    }

    fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self.sub(o.mul(Dd::from(q1)));
        let q2 = r.hi / o.hi;
        let r2 = r.sub(o.mul(Dd::from(q2)));
        let q3 = r2.hi / o.hi;
        Dd::two_sum(q1, q2).add(Dd::from(q3))
    }

    fn f64(self) -> f64 {
        self.hi + self.lo
    }
}

/// Closed-form Hilbert-Schmidt absolute-separability probability.
pub fn hs_abs_constant() -> f64 {
    let lead = Dd::from(29_902_415_923.0).div(Dd::from(497_664.0));
    let inner = Dd::from(-3_217_542_976.0)
        .add(Dd::from(5_120_883_075.0).mul(DD_PI))
        .sub(Dd::from(16_386_825_840.0).mul(DD_ATAN_SQRT2));
    let denom = Dd::from(32_768.0).mul(DD_SQRT2);
    lead.add(inner.div(denom)).f64()
}

/// The condensed rearrangement of the same constant.
pub fn hs_abs_constant_condensed() -> f64 {
    let a = Dd::from(29_902_415_923.0).sub(Dd::from(24_433_216_974.0).mul(DD_SQRT2));
    let b = Dd::from(5.0)
        .mul(DD_PI)
        .sub(Dd::from(16.0).mul(DD_ATAN_SQRT2));
    let num = Dd::from(32.0)
        .mul(a)
        .add(Dd::from(248_874_917_445.0).mul(DD_SQRT2).mul(b));
    // 2^16 * 3^5
    num.div(Dd::from(15_925_248.0)).f64()
}

// ---------------------------------------------------------------------------
// Absolute-separability simplex quadratures
// ---------------------------------------------------------------------------

fn simplex_weight(kind: MeasureKind, l2: f64, l3: f64, l4: f64) -> f64 {
    let l1 = 1.0 - l2 - l3 - l4;
    let w = eig_weight_log(kind, &Spectrum([l1, l2, l3, l4]));
    if w.finite {
        w.log_value.exp()
    } else {
        0.0
    }
}

/// Inner integration range for the middle eigenvalue. On the ordered simplex
/// the absolute-separability condition `l1 <= l3 + 2 sqrt(l2 l4)` is
/// equivalent to `l2 >= (sqrt(1 - 2 l3) - sqrt(l4))^2`, so the indicator
/// becomes an analytic lower limit.
fn inner_range(restricted: bool, u: f64, l3: f64) -> (f64, f64) {
    let l4 = u * u;
    let hi = 0.5 * (1.0 - l3 - l4);
    let mut lo = l3;
    if restricted {
        let s = (1.0 - 2.0 * l3).max(0.0).sqrt() - u;
        if s > 0.0 {
            lo = lo.max(s * s);
        }
    }
    (lo, hi)
}

/// Integral of the eigenvalue weight over the ordered simplex
/// (l1 >= l2 >= l3 >= l4), optionally restricted to the absolutely
/// separable region, via l4 = u^2 to tame the sqrt(l4) edge behavior of the
/// monotone-measure weights.
fn simplex_integral(kind: MeasureKind, restricted: bool, tol: f64) -> quad::QuadResult<f64> {
    let outer = |u: f64| -> f64 {
        let l4 = u * u;
        let mid_hi = (1.0 - l4) / 3.0;
        if mid_hi <= l4 {
            return 0.0;
        }
        let mid = |l3: f64| -> f64 {
            let (lo, hi) = inner_range(restricted, u, l3);
            if lo >= hi {
                return 0.0;
            }
            let inner = |l2: f64| simplex_weight(kind, l2, l3, l4);
            // The weight magnitude varies over many orders across the
            // simplex, so the inner levels carry a relative tolerance: the
            // absolute share alone would be round-off-unreachable where the
            // integrand is large.
            quad::integrate_rel(&inner, lo, hi, 0.002 * tol, 1e-12).value
        };
        2.0 * u * quad::integrate_rel(&mid, l4, mid_hi, 0.05 * tol, 1e-12).value
    };
    quad::integrate(&outer, 0.0, 0.5, tol)
}

fn simplex_integral_coarse(kind: MeasureKind, restricted: bool) -> f64 {
    let outer = |u: f64| -> f64 {
        let l4 = u * u;
        let mid_hi = (1.0 - l4) / 3.0;
        if mid_hi <= l4 {
            return 0.0;
        }
        let mid = |l3: f64| -> f64 {
            let (lo, hi) = inner_range(restricted, u, l3);
            if lo >= hi {
                return 0.0;
            }
            quad::composite(&|l2| simplex_weight(kind, l2, l3, l4), lo, hi, 2)
        };
        2.0 * u * quad::composite(&mid, l4, mid_hi, 3)
    };
    quad::composite(&outer, 0.0, 0.5, 3)
}

fn abs_sep_rel_target(kind: MeasureKind) -> f64 {
    match kind {
        MeasureKind::HilbertSchmidt => 1e-8,
        MeasureKind::Bures => 3e-4,
        _ => 3e-5,
    }
}

/// Absolute-separability probability of `kind` by deterministic quadrature
/// over the eigenvalue simplex (the unitary factor cancels in the ratio, as
/// does the ordering symmetry factor). Infinite-volume kinds are reported
/// divergent.
pub fn abs_sep_quadrature(kind: MeasureKind) -> Result<QuadOutcome> {
    if !kind.has_finite_volume() {
        return Ok(QuadOutcome::Divergent);
    }
    let rel = abs_sep_rel_target(kind);
    let mut parts = [0.0f64; 2];
    for (i, restricted) in [true, false].into_iter().enumerate() {
        let scale = simplex_integral_coarse(kind, restricted).abs().max(1e-300);
        let r = simplex_integral(kind, restricted, rel * scale);
        if r.err > 1e3 * rel * scale.max(r.value.abs()) {
            return Err(Error::NonConvergence {
                quantity: format!("abs-sep-{kind}"),
                err: r.err,
            });
        }
        parts[i] = r.value;
    }
    Ok(QuadOutcome::Finite(parts[0] / parts[1]))
}

// ---------------------------------------------------------------------------
// Single-qubit volumes
// ---------------------------------------------------------------------------

/// Single-qubit eigenvalue-weight integral for a monotone measure.
///
/// The weight is symmetric under lambda -> 1 - lambda, so the integral is
/// twice the lower-half contribution, taken with lambda = sin^2(u/2): this
/// absorbs the inverse-sqrt edge behavior exactly and keeps the small
/// eigenvalue free of cancellation (some weights retain a logarithmic edge
/// term that the adaptive quadrature resolves).
pub fn qubit_volume(kind: MeasureKind) -> Result<QuadOutcome> {
    if !kind.is_monotone() {
        return Err(Error::Domain(format!(
            "single-qubit volume is defined for monotone measures, not {kind}"
        )));
    }
    if !kind.has_finite_volume() {
        return Ok(QuadOutcome::Divergent);
    }
    let f = |u: f64| -> f64 {
        let s = (0.5 * u).sin();
        let lambda = s * s;
        match qubit_eig_weight_log(kind, lambda) {
            Ok(w) if w.finite => 2.0 * w.log_value.exp() * s * (0.5 * u).cos(),
            _ => 0.0,
        }
    };
    let r = quad::integrate(&f, 0.0, 0.5 * PI, 1e-10);
    if !r.converged {
        return Err(Error::NonConvergence {
            quantity: format!("qubit-volume-{kind}"),
            err: r.err,
        });
    }
    Ok(QuadOutcome::Finite(r.value))
}

/// Ratio of two single-qubit volumes (the angular factor cancels).
pub fn qubit_volume_ratio(a: MeasureKind, b: MeasureKind) -> Result<QuadOutcome> {
    match (qubit_volume(a)?, qubit_volume(b)?) {
        (QuadOutcome::Finite(va), QuadOutcome::Finite(vb)) => Ok(QuadOutcome::Finite(va / vb)),
        _ => Ok(QuadOutcome::Divergent),
    }
}

// ---------------------------------------------------------------------------
// Verification report
// ---------------------------------------------------------------------------

/// One row of the deviation table: a computed quantity against its
/// published reference value.
#[derive(Debug, Clone)]
pub struct RefCheck {
    pub quantity: String,
    pub computed: QuadOutcome,
    pub target: QuadOutcome,
    /// Deviation (absolute, or relative if `relative` is set); NaN on a
    /// finite/divergent mismatch.
    pub deviation: f64,
    pub tolerance: f64,
    pub relative: bool,
    pub pass: bool,
}

impl RefCheck {
    fn finite(quantity: &str, computed: f64, target: f64, tolerance: f64, relative: bool) -> Self {
        let mut deviation = (computed - target).abs();
        if relative {
            deviation /= target.abs();
        }
        RefCheck {
            quantity: quantity.to_string(),
            computed: QuadOutcome::Finite(computed),
            target: QuadOutcome::Finite(target),
            deviation,
            tolerance,
            relative,
            pass: deviation <= tolerance,
        }
    }

    fn outcome(
        quantity: &str,
        computed: QuadOutcome,
        target: QuadOutcome,
        tolerance: f64,
        relative: bool,
    ) -> Self {
        match (computed, target) {
            (QuadOutcome::Finite(c), QuadOutcome::Finite(t)) => {
                RefCheck::finite(quantity, c, t, tolerance, relative)
            }
            (QuadOutcome::Divergent, QuadOutcome::Divergent) => RefCheck {
                quantity: quantity.to_string(),
                computed,
                target,
                deviation: 0.0,
                tolerance,
                relative,
                pass: true,
            },
            _ => RefCheck {
                quantity: quantity.to_string(),
                computed,
                target,
                deviation: f64::NAN,
                tolerance,
                relative,
                pass: false,
            },
        }
    }

    /// Informational row: reported, never failing.
    fn info(quantity: &str, computed: f64, reference: f64) -> Self {
        RefCheck::finite(quantity, computed, reference, f64::INFINITY, false)
    }
}

struct ConjectureTarget {
    numerator: Option<f64>,
    denominator: Option<QuadOutcome>,
    ratio: Option<QuadOutcome>,
    tol: f64,
}

fn conjecture_target(d: u32, family: ExponentFamily) -> Option<ConjectureTarget> {
    use ExponentFamily::*;
    let t = match (d, family) {
        (2, Hs) => ConjectureTarget {
            numerator: Some(2048.0 / 51975.0),
            denominator: Some(QuadOutcome::Finite(256.0 / 1575.0)),
            ratio: Some(QuadOutcome::Finite(8.0 / 33.0)),
            tol: 1e-9,
        },
        (2, SqrtX) => ConjectureTarget {
            numerator: None,
            denominator: Some(QuadOutcome::Finite(PI * PI / 2.0)),
            ratio: Some(QuadOutcome::Finite(1.0 - 256.0 / (27.0 * PI * PI))),
            tol: 1e-6,
        },
        (2, Alt) => ConjectureTarget {
            numerator: None,
            denominator: Some(QuadOutcome::Finite(4.0 / 3.0)),
            ratio: Some(QuadOutcome::Finite((593.0 - 60.0 * PI * PI) / 9.0)),
            tol: 1e-6,
        },
        (1, Hs) => ConjectureTarget {
            numerator: None,
            denominator: None,
            ratio: Some(QuadOutcome::Finite(29.0 / 64.0)),
            tol: 1e-8,
        },
        (1, SqrtX) => ConjectureTarget {
            numerator: None,
            denominator: None,
            ratio: Some(QuadOutcome::Finite(0.26223)),
            tol: 5e-5,
        },
        (4, Alt) => ConjectureTarget {
            numerator: None,
            denominator: None,
            ratio: Some(QuadOutcome::Finite(
                3_342_341.0 / 5.0 - 72_737_619_968.0 / (11_025.0 * PI * PI),
            )),
            tol: 1e-4,
        },
        (4, SqrtX) => ConjectureTarget {
            numerator: Some(4.0 * PI * PI / 3.0 - 5513.0 / 420.0),
            denominator: Some(QuadOutcome::Divergent),
            ratio: Some(QuadOutcome::Divergent),
            tol: 1e-5,
        },
        _ => return None,
    };
    Some(t)
}

fn conjecture_rows(d: u32, family: ExponentFamily) -> Result<Vec<RefCheck>> {
    let target = conjecture_target(d, family).ok_or_else(|| {
        Error::Domain(format!(
            "no reference values for d={d}, family={}",
            family.name()
        ))
    })?;
    let q = sep_prob_quadrature(d, family)?;
    let base = format!("d{d}-{}", family.name());
    // The d=2 denominator is pinned an order tighter than the family tol.
    let den_tol = if (d, family) == (2, ExponentFamily::Alt) {
        1e-10
    } else if (d, family) == (2, ExponentFamily::SqrtX) {
        1e-8
    } else {
        target.tol
    };
    let mut rows = Vec::new();
    if let Some(t) = target.numerator {
        rows.push(RefCheck::outcome(
            &format!("{base}-numerator"),
            q.numerator,
            QuadOutcome::Finite(t),
            target.tol,
            false,
        ));
    }
    if let Some(t) = target.denominator {
        rows.push(RefCheck::outcome(
            &format!("{base}-denominator"),
            q.denominator,
            t,
            den_tol,
            false,
        ));
    }
    if let Some(t) = target.ratio {
        rows.push(RefCheck::outcome(
            &format!("{base}-ratio"),
            q.ratio,
            t,
            target.tol,
            false,
        ));
    }
    Ok(rows)
}

fn closed_form_rows() -> Result<Vec<RefCheck>> {
    let mut rows = Vec::new();
    rows.push(RefCheck::finite(
        "li2-basel",
        li2(1.0f64)?,
        PI * PI / 6.0,
        1e-14,
        false,
    ));

    let mut chi1_dev = 0.0f64;
    for i in 1..=99 {
        let eps = f64::from(i) / 100.0;
        let closed = sep_function(SepFunction::D1, eps)?;
        let integral = chi1_from_integral(eps)?;
        chi1_dev = chi1_dev.max((closed - integral).abs());
    }
    rows.push(RefCheck::finite(
        "chi1-closed-vs-integral",
        chi1_dev,
        0.0,
        1e-10,
        false,
    ));

    let mut d1_dev = 0.0f64;
    let mut d2_dev = 0.0f64;
    for i in 1..=9 {
        let eps = f64::from(i) / 10.0;
        d1_dev = d1_dev.max(
            (sep_function(SepFunction::General(1.0), eps)? - sep_function(SepFunction::D1, eps)?)
                .abs(),
        );
        d2_dev = d2_dev.max(
            (sep_function(SepFunction::General(2.0), eps)? - sep_function(SepFunction::D2, eps)?)
                .abs(),
        );
    }
    rows.push(RefCheck::finite("series-vs-d1", d1_dev, 0.0, 1e-8, false));
    rows.push(RefCheck::finite("series-vs-d2", d2_dev, 0.0, 1e-12, false));

    rows.push(RefCheck::finite(
        "hs-abs",
        hs_abs_constant(),
        0.00365826,
        1e-8,
        false,
    ));
    rows.push(RefCheck::finite(
        "hs-abs-forms",
        hs_abs_constant(),
        hs_abs_constant_condensed(),
        1e-12,
        false,
    ));

    // The general-d series at d=4 versus the quaterbit polynomial is only
    // conjectured equivalent; reported without a pass/fail verdict.
    let mut d4_dev = 0.0f64;
    for i in 1..=9 {
        let eps = f64::from(i) / 10.0;
        d4_dev = d4_dev.max(
            (sep_function(SepFunction::General(4.0), eps)? - sep_function(SepFunction::D4, eps)?)
                .abs(),
        );
    }
    rows.push(RefCheck::info("series-vs-d4", d4_dev, 0.0));
    Ok(rows)
}

fn conjecture_group() -> Result<Vec<RefCheck>> {
    use ExponentFamily::*;
    let mut rows = Vec::new();
    for (d, family) in [
        (2, Hs),
        (2, SqrtX),
        (2, Alt),
        (1, Hs),
        (1, SqrtX),
        (4, Alt),
        (4, SqrtX),
    ] {
        rows.extend(conjecture_rows(d, family)?);
    }
    Ok(rows)
}

fn abs_sep_target(kind: MeasureKind) -> Option<(f64, f64)> {
    match kind {
        MeasureKind::HilbertSchmidt => Some((hs_abs_constant(), 1e-6)),
        MeasureKind::KuboMori => Some((5.04898e-6, 1e-3)),
        MeasureKind::WignerYanase => Some((3.42309e-5, 1e-3)),
        MeasureKind::Identric => Some((7.62634e-5, 1e-3)),
        MeasureKind::Bures => Some((1.61792e-4, 1e-2)),
        MeasureKind::Induced(1) => Some((0.0232545, 1e-3)),
        MeasureKind::Induced(2) => Some((0.071066971, 1e-3)),
        MeasureKind::Induced(3) => Some((0.1499309, 1e-3)),
        MeasureKind::Induced(4) => Some((0.252828, 1e-3)),
        _ => None,
    }
}

fn abs_sep_row(kind: MeasureKind) -> Result<RefCheck> {
    let (target, tol) = abs_sep_target(kind).ok_or_else(|| {
        Error::Domain(format!(
            "no reference absolute-separability value for {kind}"
        ))
    })?;
    let computed = abs_sep_quadrature(kind)?;
    Ok(RefCheck::outcome(
        &format!("abs-sep-{kind}"),
        computed,
        QuadOutcome::Finite(target),
        tol,
        true,
    ))
}

fn abs_sep_group() -> Result<Vec<RefCheck>> {
    let kinds = [
        MeasureKind::HilbertSchmidt,
        MeasureKind::KuboMori,
        MeasureKind::WignerYanase,
        MeasureKind::Identric,
        MeasureKind::Bures,
        MeasureKind::Induced(1),
        MeasureKind::Induced(2),
        MeasureKind::Induced(3),
        MeasureKind::Induced(4),
    ];
    kinds.iter().map(|&k| abs_sep_row(k)).collect()
}

fn volume_ratio_target(a: MeasureKind) -> Option<f64> {
    match a {
        MeasureKind::KuboMori => Some(2.0),
        MeasureKind::WignerYanase => Some(4.0 * (PI - 2.0) / PI),
        MeasureKind::MorozovaChentsov => Some(PI * PI / 2.0),
        _ => None,
    }
}

fn volume_ratio_row(a: MeasureKind) -> Result<RefCheck> {
    let target = volume_ratio_target(a)
        .ok_or_else(|| Error::Domain(format!("no reference volume ratio for {a}")))?;
    let computed = qubit_volume_ratio(a, MeasureKind::Bures)?;
    Ok(RefCheck::outcome(
        &format!("ratio-{a}-bures"),
        computed,
        QuadOutcome::Finite(target),
        1e-6,
        false,
    ))
}

fn volume_ratio_group() -> Result<Vec<RefCheck>> {
    [
        MeasureKind::KuboMori,
        MeasureKind::WignerYanase,
        MeasureKind::MorozovaChentsov,
    ]
    .iter()
    .map(|&k| volume_ratio_row(k))
    .collect()
}

pub const GROUPS: [&str; 4] = ["closed-forms", "conjectures", "volume-ratios", "abs-sep"];

fn parse_conjecture_name(name: &str) -> Option<(u32, ExponentFamily, &str)> {
    let rest = name.strip_prefix('d')?;
    let (d, rest) = rest.split_once('-')?;
    let d: u32 = d.parse().ok()?;
    let (family, part) = rest.rsplit_once('-')?;
    let family = match family {
        "hs" => ExponentFamily::Hs,
        "sqrtx" => ExponentFamily::SqrtX,
        "alt" => ExponentFamily::Alt,
        _ => return None,
    };
    Some((d, family, part))
}

/// Evaluate a verification selector: `all`, a group name, or an individual
/// quantity name as printed in the deviation table.
pub fn evaluate(selector: &str) -> Result<Vec<RefCheck>> {
    match selector {
        "all" => {
            let mut rows = closed_form_rows()?;
            rows.extend(conjecture_group()?);
            rows.extend(volume_ratio_group()?);
            rows.extend(abs_sep_group()?);
            Ok(rows)
        }
        "closed-forms" => closed_form_rows(),
        "conjectures" => conjecture_group(),
        "abs-sep" => abs_sep_group(),
        "volume-ratios" => volume_ratio_group(),
        name => {
            if let Some((d, family, part)) = parse_conjecture_name(name) {
                let rows = conjecture_rows(d, family)?;
                let hit: Vec<RefCheck> = rows
                    .into_iter()
                    .filter(|r| r.quantity.ends_with(&format!("-{part}")))
                    .collect();
                if !hit.is_empty() {
                    return Ok(hit);
                }
            }
            if let Some(kind) = name.strip_prefix("abs-sep-") {
                let kind: MeasureKind = kind
                    .parse()
                    .map_err(|_| Error::Domain(format!("unknown quantity {name}")))?;
                return Ok(vec![abs_sep_row(kind)?]);
            }
            if let Some(kind) = name
                .strip_prefix("ratio-")
                .and_then(|s| s.strip_suffix("-bures"))
            {
                let kind: MeasureKind = kind
                    .parse()
                    .map_err(|_| Error::Domain(format!("unknown quantity {name}")))?;
                return Ok(vec![volume_ratio_row(kind)?]);
            }
            let closed = closed_form_rows()?;
            let hit: Vec<RefCheck> = closed.into_iter().filter(|r| r.quantity == name).collect();
            if hit.is_empty() {
                Err(Error::Domain(format!("unknown quantity {name}")))
            } else {
                Ok(hit)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn approx(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() < tol, "{a} vs {b}");
    }

    #[test]
    fn polynomial_sep_function_values() {
        approx(sep_function(SepFunction::D2, 1.0).unwrap(), 1.0, 1e-15);
        approx(sep_function(SepFunction::D2, 0.5).unwrap(), 0.3125, 1e-15);
        approx(sep_function(SepFunction::D4, 1.0).unwrap(), 1.0, 1e-15);
        approx(
            sep_function(SepFunction::InducedK1, 1.0).unwrap(),
            1.0,
            1e-15,
        );
        approx(sep_function(SepFunction::D1, 1.0).unwrap(), 1.0, 1e-15);
        assert!(sep_function(SepFunction::D2, 1.5).is_err());
        assert!(sep_function(SepFunction::D2, -0.1).is_err());
    }

    #[test]
    fn general_series_normalization() {
        for d in [1.0, 2.0, 3.0, 4.0] {
            approx(
                sep_function(SepFunction::General(d), 1.0).unwrap(),
                1.0,
                1e-8,
            );
        }
    }

    #[test]
    fn series_matches_closed_forms() {
        for i in 1..=9 {
            let eps = f64::from(i) / 10.0;
            approx(
                sep_function(SepFunction::General(2.0), eps).unwrap(),
                sep_function(SepFunction::D2, eps).unwrap(),
                1e-12,
            );
            approx(
                sep_function(SepFunction::General(1.0), eps).unwrap(),
                sep_function(SepFunction::D1, eps).unwrap(),
                1e-8,
            );
        }
    }

    #[test]
    fn sep_functions_strictly_increasing() {
        for kind in [
            SepFunction::D1,
            SepFunction::D2,
            SepFunction::D4,
            SepFunction::InducedK1,
            SepFunction::General(3.0),
        ] {
            let mut prev = 0.0;
            for i in 1..=100 {
                let v = sep_function(kind, f64::from(i) / 100.0).unwrap();
                assert!(v > prev, "{kind:?} not increasing at step {i}");
                prev = v;
            }
        }
    }

    #[test]
    fn chi1_series_branch_joins() {
        // Validate both sides of the small-eps series switch against the
        // integral form at the same points, so the function's own slope does
        // not enter the tolerance.
        for eps in [2e-4, 9e-4, 1.1e-3, 2e-3] {
            approx(
                sep_function(SepFunction::D1, eps).unwrap(),
                chi1_from_integral(eps).unwrap(),
                1e-12,
            );
        }
    }

    #[test]
    fn chi1_closed_form_matches_integral() {
        for i in (1..=99).step_by(7) {
            let eps = f64::from(i) / 100.0;
            approx(
                sep_function(SepFunction::D1, eps).unwrap(),
                chi1_from_integral(eps).unwrap(),
                1e-10,
            );
        }
    }

    #[test]
    fn chi1_integrand_branches_join() {
        // The series branch must agree with the direct formula evaluated at
        // the same point, well inside the series region where the direct
        // form is still accurate.
        // The direct form cancels ~1/s down to O(1), so grant it ~1e-12
        // of round-off headroom.
        for s in [0.02f64, 0.05, 0.09] {
            let d = s - 1.0 / s;
            let direct = (s + 1.0 / s - 0.5 * d * d * ((1.0 + s) / (1.0 - s)).ln()) / s;
            approx(chi1_integrand(s), direct, 1e-10);
        }
        // Continuity across the switch itself (slope is ~0.1 there).
        let lo = chi1_integrand(0.1 - 1e-12);
        let hi = chi1_integrand(0.1 + 1e-12);
        assert!((hi - lo).abs() < 1e-11);
    }

    #[test]
    fn hs_abs_constant_value() {
        let v = hs_abs_constant();
        approx(v, 0.00365826, 1e-8);
        assert!(v > 0.0 && v < 8.0 / 33.0);
        assert!((v - hs_abs_constant_condensed()).abs() < 1e-12);
    }

    #[test]
    fn alt_denominator_is_exactly_a_plain_moment() {
        // p = 0 for d = 2, so the denominator is the (x - y)^2 moment of the
        // triangle, 4/3.
        let q = sep_prob_quadrature(2, ExponentFamily::Alt).unwrap();
        approx(q.denominator.value().unwrap(), 4.0 / 3.0, 1e-10);
    }

    #[test]
    fn quaterbit_sqrtx_denominator_diverges() {
        let q = sep_prob_quadrature(4, ExponentFamily::SqrtX).unwrap();
        assert_eq!(q.denominator, QuadOutcome::Divergent);
        assert_eq!(q.ratio, QuadOutcome::Divergent);
        assert!(q.numerator.value().is_some());
    }

    #[test]
    fn infinite_volume_kinds_report_divergent() {
        for kind in [
            MeasureKind::Geometric,
            MeasureKind::Maximal,
            MeasureKind::LogGeometric,
        ] {
            assert_eq!(abs_sep_quadrature(kind).unwrap(), QuadOutcome::Divergent);
            assert_eq!(qubit_volume(kind).unwrap(), QuadOutcome::Divergent);
        }
    }

    #[test]
    fn qubit_volume_ratios_match_known_values() {
        let km = qubit_volume_ratio(MeasureKind::KuboMori, MeasureKind::Bures)
            .unwrap()
            .value()
            .unwrap();
        approx(km, 2.0, 1e-6);
        let mc = qubit_volume_ratio(MeasureKind::MorozovaChentsov, MeasureKind::Bures)
            .unwrap()
            .value()
            .unwrap();
        approx(mc, PI * PI / 2.0, 1e-6);
    }

    #[test]
    fn qubit_volume_rejects_non_monotone() {
        assert!(qubit_volume(MeasureKind::HilbertSchmidt).is_err());
    }

    #[test]
    fn selector_dispatch() {
        let rows = evaluate("d2-alt-denominator").unwrap();
        assert_eq!(rows.len(), 1);
        assert!(rows[0].pass);
        let rows = evaluate("hs-abs").unwrap();
        assert_eq!(rows.len(), 1);
        assert!(rows[0].pass);
        let rows = evaluate("ratio-kubo-mori-bures").unwrap();
        assert!(rows[0].pass);
        assert!(evaluate("no-such-quantity").is_err());
    }
}
