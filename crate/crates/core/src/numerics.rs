//! Working precision, certified series truncation, bracketed root
//! finding and least-squares slopes.
//!
//! Everything downstream funnels its real arithmetic through a
//! [`PrecisionContext`]: a binary working precision plus an absolute
//! tolerance used for root residuals and for the two-sided guard around
//! interval endpoints (digit assignment near a partition boundary is
//! reported as ambiguous rather than silently resolved).

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::real::Real;

/// Working precision and tolerance policy shared by all operations.
#[derive(Clone, Debug)]
pub struct PrecisionContext {
    precision_bits: u32,
    abs_tol: Real,
}

/// Gap between precision and default tolerance: 256 bits pairs with 2^-200.
const DEFAULT_TOL_GAP: u32 = 56;

impl PrecisionContext {
    /// Context with `precision_bits` of working precision and the default
    /// tolerance `2^-(precision_bits - 56)`.
    pub fn new(precision_bits: u32) -> Result<Self> {
        if precision_bits < 64 {
            return Err(Error::Precondition(format!(
                "precision_bits must be at least 64, got {precision_bits}"
            )));
        }
        let tol_exp = precision_bits - DEFAULT_TOL_GAP;
        Ok(PrecisionContext {
            precision_bits,
            abs_tol: Real::pow2(-(tol_exp as i64), precision_bits),
        })
    }

    /// Context with an explicit tolerance; must satisfy
    /// `abs_tol >= 2^(1 - precision_bits)` and `abs_tol > 0`.
    pub fn with_abs_tol(precision_bits: u32, abs_tol: Real) -> Result<Self> {
        if precision_bits < 64 {
            return Err(Error::Precondition(format!(
                "precision_bits must be at least 64, got {precision_bits}"
            )));
        }
        if !abs_tol.is_positive() {
            return Err(Error::Precondition("abs_tol must be positive".into()));
        }
        let floor = Real::pow2(1 - precision_bits as i64, precision_bits);
        if abs_tol < floor {
            return Err(Error::Precondition(format!(
                "abs_tol below 2^(1-precision_bits) floor (bits = {precision_bits})"
            )));
        }
        Ok(PrecisionContext { precision_bits, abs_tol })
    }

    pub fn precision_bits(&self) -> u32 {
        self.precision_bits
    }

    /// Binary scale used for `Real` values created in this context.
    pub fn scale(&self) -> u32 {
        self.precision_bits
    }

    pub fn abs_tol(&self) -> &Real {
        &self.abs_tol
    }

    /// Same tolerance, `extra` additional bits of working precision.
    /// Orbit iterations lift precision this way: an expanding map with
    /// slope `beta` loses about `log2(beta)` bits per step, so `n` steps
    /// need `n*log2(beta)` bits of headroom for the final digits to be
    /// trustworthy at the original tolerance.
    pub fn lifted(&self, extra: u32) -> Self {
        PrecisionContext {
            precision_bits: self.precision_bits + extra,
            abs_tol: self.abs_tol.clone(),
        }
    }

    pub fn real_from_int(&self, v: i64) -> Real {
        Real::from_int(v, self.scale())
    }

    pub fn real_from_ratio(&self, num: i64, den: i64) -> Real {
        Real::from_ratio_i64(num, den, self.scale())
    }

    pub fn parse_real(&self, text: &str) -> Result<Real> {
        Real::parse(text, self.scale())
    }
}

impl Default for PrecisionContext {
    fn default() -> Self {
        PrecisionContext::new(256).expect("default context is valid")
    }
}

/// Certified bound on the tail discarded by a series truncation.
#[derive(Clone, Debug)]
pub struct SeriesTailBound {
    pub num_terms: usize,
    pub tail_bound: Real,
}

/// Partial sum of `sum_{i<n} (digits[i] - offset) / base^(i+1)` together
/// with a certified bound on the discarded tail, assuming all further
/// digits stay `<= digit_bound`.
///
/// The tail bound is `(digit_bound + offset) * base^-n / (base - 1)`.
pub fn eval_power_series(
    digits: &[u64],
    digit_bound: u64,
    base: &Real,
    offset: &Real,
    ctx: &PrecisionContext,
) -> Result<(Real, SeriesTailBound)> {
    let scale = base.scale().max(ctx.scale());
    if *base <= Real::one(scale) {
        return Err(Error::Domain("series base must exceed 1".into()));
    }
    if offset.is_negative() {
        return Err(Error::Domain("series offset must be non-negative".into()));
    }
    for (i, &d) in digits.iter().enumerate() {
        if d > digit_bound {
            return Err(Error::Domain(format!(
                "digit {d} at index {i} exceeds bound {digit_bound}"
            )));
        }
    }
    let base = base.rescale(scale);
    let offset = offset.rescale(scale);
    // Horner from the innermost term: acc = (acc + d_i - offset) / base.
    let mut acc = Real::zero(scale);
    for &d in digits.iter().rev() {
        let term = Real::from_bigint(&BigInt::from(d), scale).sub(&offset);
        acc = acc.add(&term).div(&base);
    }
    let n = digits.len();
    let bound_num = Real::from_bigint(&BigInt::from(digit_bound), scale).add(&offset);
    let base_pow = base.pow_u32(n as u32);
    let denom = base_pow.mul(&base.sub(&Real::one(scale)));
    let tail = bound_num.div(&denom);
    Ok((acc, SeriesTailBound { num_terms: n, tail_bound: tail }))
}

/// Root of a continuous function with a sign change on `[lo, hi]`.
///
/// Plain bisection: the bracket is halved until both the bracket width
/// and the midpoint residual drop below `ctx.abs_tol`. Guaranteed to
/// converge for continuous monotone `f`; monotonicity itself is the
/// caller's precondition and is not verified.
pub fn find_root_bracketed<F>(f: F, lo: &Real, hi: &Real, ctx: &PrecisionContext) -> Result<Real>
where
    F: Fn(&Real) -> Real,
{
    let scale = ctx.scale().max(lo.scale()).max(hi.scale());
    let mut lo = lo.rescale(scale);
    let mut hi = hi.rescale(scale);
    if lo > hi {
        std::mem::swap(&mut lo, &mut hi);
    }
    let f_lo = f(&lo);
    let f_hi = f(&hi);
    if f_lo.is_zero() {
        return Ok(lo);
    }
    if f_hi.is_zero() {
        return Ok(hi);
    }
    if f_lo.is_negative() == f_hi.is_negative() {
        return Err(Error::Bracket {
            lo: lo.to_decimal(20),
            hi: hi.to_decimal(20),
        });
    }
    let tol = ctx.abs_tol();
    let lo_negative = f_lo.is_negative();
    let max_iter = scale as usize + 128;
    let mut mid = lo.add(&hi).div_int(2);
    for iterations in 0..max_iter {
        mid = lo.add(&hi).div_int(2);
        let f_mid = f(&mid);
        if f_mid.is_zero() {
            return Ok(mid);
        }
        if f_mid.is_negative() == lo_negative {
            lo = mid.clone();
        } else {
            hi = mid.clone();
        }
        let width = hi.sub(&lo);
        if &width <= tol && &f_mid.abs() <= tol {
            return Ok(mid);
        }
        let _ = iterations;
    }
    let residual = f(&mid).abs();
    if &residual <= tol {
        Ok(mid)
    } else {
        Err(Error::ToleranceNotReached {
            iterations: max_iter,
            residual: residual.to_decimal(20),
        })
    }
}

/// Ordinary least-squares slope of `y` against `x` with its standard
/// error. Exact-affine data yields standard error 0; two points are fit
/// exactly by convention.
pub fn fit_slope(points: &[(f64, f64)]) -> Result<(f64, f64)> {
    if points.len() < 2 {
        return Err(Error::DegenerateFit(format!(
            "need at least 2 points, got {}",
            points.len()
        )));
    }
    let n = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateFit("all abscissas equal".into()));
    }
    let sxy: f64 = points
        .iter()
        .map(|p| (p.0 - mean_x) * (p.1 - mean_y))
        .sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    if points.len() == 2 {
        return Ok((slope, 0.0));
    }
    let sse: f64 = points
        .iter()
        .map(|p| {
            let r = p.1 - (slope * p.0 + intercept);
            r * r
        })
        .sum();
    let dof = n - 2.0;
    let variance = (sse / dof / sxx).max(0.0);
    Ok((slope, variance.sqrt()))
}
