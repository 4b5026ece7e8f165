//! Generalized golden-ratio (Korobov-style) quasirandom sequence.
//!
//! The d-dimensional sequence is `(alpha0 + n * alpha) mod 1` with
//! `alpha = (1/phi_d, 1/phi_d^2, ..., 1/phi_d^d)` and `phi_d` the real root
//! greater than one of `x^(d+1) = x + 1`.
//!
//! All mod-1 arithmetic is exact: each component of `alpha` is stored as a
//! 64-bit fixed-point fraction (numerator over 2^64) and `n * alpha` is a
//! wrapping integer multiply. Floating-point `n * alpha` loses low bits
//! catastrophically by `n ~ 1e9`; the wrapping form is exact for any `u64`
//! index.

use crate::error::{Error, Result};
use num_bigint::BigUint;
use num_traits::One;

pub const MAX_DIMENSION: u32 = 64;

/// Fractional bits used while bisecting for `1/phi_d` in extended precision.
const ROOT_BITS: u32 = 192;

/// The real root `> 1` of `x^(d+1) = x + 1` (golden ratio at d=1, plastic
/// constant at d=2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiRoot {
    pub d: u32,
    pub value: f64,
}

/// Exact 64-bit fixed-point fractions `frac(1/phi_d^k)`, `k = 1..=d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphaVector {
    components: Vec<u64>,
}

impl AlphaVector {
    pub fn dimension(&self) -> usize {
        self.components.len()
    }

    /// Raw fixed-point numerators (over 2^64).
    pub fn raw(&self) -> &[u64] {
        &self.components
    }

    /// Component `k` (0-based) as a float in (0, 1).
    pub fn component(&self, k: usize) -> f64 {
        fixed_to_f64(self.components[k])
    }
}

/// Value-type stream state: `point(n)` is a pure function of
/// `(alpha0, alpha, n)`; the cursor and cached fixed-point coordinates only
/// support incremental stepping and stay consistent with direct indexing
/// bit for bit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuasirandomStream {
    alpha: AlphaVector,
    alpha0: u64,
    cursor: u64,
    state: Vec<u64>,
}

pub fn solve_phi(d: u32) -> Result<PhiRoot> {
    if d == 0 || d > MAX_DIMENSION {
        return Err(Error::Domain(format!(
            "sequence dimension must be in 1..={MAX_DIMENSION}, got {d}"
        )));
    }
    // Bisection on [1, 2]: g(x) = x^(d+1) - x - 1 is increasing there.
    let g = |x: f64| x.powi(d as i32 + 1) - x - 1.0;
    let (mut lo, mut hi) = (1.0_f64, 2.0_f64);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // Newton polish.
    let mut x = 0.5 * (lo + hi);
    for _ in 0..4 {
        let dg = (d as f64 + 1.0) * x.powi(d as i32) - 1.0;
        x -= g(x) / dg;
    }
    Ok(PhiRoot { d, value: x })
}

/// Numerator of `1/phi_d` over `2^ROOT_BITS`, by integer bisection of
/// `r^d + r^(d+1) = 1` (the reciprocal form of the defining equation).
fn inverse_phi_fixed(d: u32) -> BigUint {
    let one_shifted = BigUint::one() << (ROOT_BITS as u64 * (d as u64 + 1));
    let mut lo = BigUint::ZERO;
    let mut hi = BigUint::one() << ROOT_BITS;
    // Largest R with R^d * 2^ROOT_BITS + R^(d+1) <= 2^(ROOT_BITS*(d+1)).
    while &lo + 1u32 < hi {
        let mid: BigUint = (&lo + &hi) >> 1;
        let pd = mid.pow(d);
        let lhs = (&pd << ROOT_BITS) + pd * &mid;
        if lhs <= one_shifted {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

pub fn alpha_vector(d: u32) -> Result<AlphaVector> {
    if d == 0 || d > MAX_DIMENSION {
        return Err(Error::Domain(format!(
            "sequence dimension must be in 1..={MAX_DIMENSION}, got {d}"
        )));
    }
    let r = inverse_phi_fixed(d);
    let mut components = Vec::with_capacity(d as usize);
    let mut power = BigUint::one() << ROOT_BITS; // r^0 over 2^ROOT_BITS
    for _ in 0..d {
        power = (power * &r) >> ROOT_BITS; // r^k over 2^ROOT_BITS
                                           // Round to 64 fractional bits; 1/phi^k < 1 so no wrap is possible.
        let rounded = (&power + (BigUint::one() << (ROOT_BITS - 65))) >> (ROOT_BITS - 64);
        let digits = rounded.to_u64_digits();
        let frac = match digits.len() {
            0 => 0,
            1 => digits[0],
            _ => u64::MAX, // rounding bumped to 1.0; clamp just below
        };
        components.push(frac);
    }
    Ok(AlphaVector { components })
}

pub(crate) fn f64_to_fixed(x: f64) -> u64 {
    let frac = x - x.floor();
    let scaled = frac * 18446744073709551616.0; // 2^64
    if scaled >= 18446744073709551616.0 {
        0
    } else {
        scaled as u64
    }
}

#[inline]
pub(crate) fn fixed_to_f64(v: u64) -> f64 {
    v as f64 * (1.0 / 18446744073709551616.0)
}

impl QuasirandomStream {
    pub fn new(d: u32, alpha0: f64) -> Result<Self> {
        let alpha = alpha_vector(d)?;
        Ok(Self::from_alpha(alpha, alpha0))
    }

    pub fn from_alpha(alpha: AlphaVector, alpha0: f64) -> Self {
        let a0 = f64_to_fixed(alpha0);
        let state = vec![a0; alpha.dimension()];
        QuasirandomStream {
            alpha,
            alpha0: a0,
            cursor: 0,
            state,
        }
    }

    pub fn dimension(&self) -> usize {
        self.alpha.dimension()
    }

    pub fn cursor(&self) -> u64 {
        self.cursor
    }

    /// Direct indexing: coordinate `k` is `(alpha0 + n*alpha_k) mod 1`,
    /// computed with a wrapping 64-bit multiply.
    pub fn point(&self, n: u64) -> Vec<f64> {
        let mut out = vec![0.0; self.dimension()];
        self.point_into(n, &mut out);
        out
    }

    #[inline]
    pub fn point_into(&self, n: u64, out: &mut [f64]) {
        debug_assert_eq!(out.len(), self.dimension());
        for (o, &a) in out.iter_mut().zip(self.alpha.raw()) {
            *o = fixed_to_f64(self.alpha0.wrapping_add(n.wrapping_mul(a)));
        }
    }

    /// Fixed-point coordinates at index `n` (exact).
    pub fn point_fixed(&self, n: u64) -> Vec<u64> {
        self.alpha
            .raw()
            .iter()
            .map(|&a| self.alpha0.wrapping_add(n.wrapping_mul(a)))
            .collect()
    }

    /// Incremental stepping: returns the point at the current cursor and
    /// advances by one. Agrees bit for bit with `point(cursor)`.
    pub fn step_point(&mut self) -> Vec<f64> {
        let out = self.state.iter().map(|&v| fixed_to_f64(v)).collect();
        self.advance();
        out
    }

    /// Advance the cached fixed-point state by one index.
    #[inline]
    pub fn advance(&mut self) {
        for (s, &a) in self.state.iter_mut().zip(self.alpha.raw()) {
            *s = s.wrapping_add(a);
        }
        self.cursor = self.cursor.wrapping_add(1);
    }

    pub fn state_fixed(&self) -> &[u64] {
        &self.state
    }

    /// `count x d` row-major block of points `start .. start+count`.
    pub fn fill_block(&self, start: u64, count: u64) -> Result<Vec<f64>> {
        if count == 0 {
            return Err(Error::Domain("block count must be >= 1".into()));
        }
        start
            .checked_add(count)
            .ok_or_else(|| Error::Domain(format!("index range {start}+{count} overflows u64")))?;
        let d = self.dimension();
        let mut data = vec![0.0; d * count as usize];
        for (j, row) in data.chunks_exact_mut(d).enumerate() {
            self.point_into(start + j as u64, row);
        }
        Ok(data)
    }
}
