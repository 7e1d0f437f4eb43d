//! The intermediate beta-transformation `x -> beta*x + alpha mod 1`,
//! its digit partition, itineraries of the endpoints and digit-driven
//! orbit reconstruction.
//!
//! For `0 <= alpha < 1` and `beta > 1` the map acts on `[0, 1)`. With
//! `k = ceil(alpha + beta)` the unit interval splits into cells
//! `I_0 = [0, (1-alpha)/beta)`, `I_j = [(j-alpha)/beta, (j+1-alpha)/beta)`
//! and `I_{k-1} = [(k-1-alpha)/beta, 1)`; the digit of `x` is the cell
//! index, which equals `floor(beta*x + alpha)`.
//!
//! The expansion of 1 is taken as a left limit: the orbit lives in
//! `(0, 1]` and the digit of `y` is `ceil(beta*y + alpha) - 1`, the
//! index of the cell whose closure from the left contains `y`. This
//! realizes the quasi-greedy expansion without taking actual limits.
//!
//! Orbit iteration lifts the working precision by roughly
//! `n * log2(beta)` bits: the map expands by `beta` per step, so digits
//! at depth `n` need that much headroom to remain trustworthy at the
//! context tolerance. Values within `abs_tol` of a cell boundary (but
//! not exactly on it) are flagged boundary-ambiguous rather than
//! silently assigned.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::numerics::{eval_power_series, PrecisionContext, SeriesTailBound};
use crate::real::Real;

/// A parameter pair `(alpha, beta)` with its digit alphabet size.
#[derive(Clone, Debug)]
pub struct ParamPoint {
    alpha: Real,
    beta: Real,
    k: u64,
}

impl ParamPoint {
    /// Validates `0 <= alpha < 1 < beta` and computes
    /// `k = ceil(alpha + beta)`. When `alpha + beta` is an exact integer
    /// the ceiling equals that integer; the partition stays well formed
    /// (the `beta`-shift case `alpha = 0`, `beta` integral lands here).
    pub fn new(alpha: Real, beta: Real, ctx: &PrecisionContext) -> Result<Self> {
        let scale = ctx.scale().max(alpha.scale()).max(beta.scale());
        let zero = Real::zero(scale);
        let one = Real::one(scale);
        if alpha < zero || alpha >= one {
            return Err(Error::Domain(format!(
                "alpha must lie in [0, 1), got {}",
                alpha.to_decimal(12)
            )));
        }
        if beta <= one {
            return Err(Error::Domain(format!(
                "beta must exceed 1, got {}",
                beta.to_decimal(12)
            )));
        }
        let sum = alpha.add(&beta);
        let k = sum
            .ceil_int()
            .to_u64()
            .ok_or_else(|| Error::Domain("alphabet size out of range".into()))?;
        debug_assert!(k >= 2);
        Ok(ParamPoint { alpha, beta, k })
    }

    pub fn alpha(&self) -> &Real {
        &self.alpha
    }

    pub fn beta(&self) -> &Real {
        &self.beta
    }

    /// Alphabet size `k = ceil(alpha + beta)`.
    pub fn alphabet_size(&self) -> u64 {
        self.k
    }

    /// Left endpoint of cell `I_j`, `(j - alpha) / beta` (cell 0 starts at 0).
    pub fn cell_boundary(&self, j: u64) -> Real {
        if j == 0 {
            return Real::zero(self.alpha.scale());
        }
        let scale = self.alpha.scale();
        Real::from_bigint(&BigInt::from(j), scale)
            .sub(&self.alpha)
            .div(&self.beta)
    }

    fn at_scale(&self, scale: u32) -> (Real, Real) {
        (self.alpha.rescale(scale), self.beta.rescale(scale))
    }

    /// Extra bits of precision needed to iterate `n` steps.
    fn lift_bits(&self, n: usize) -> u32 {
        let b = self.beta.to_f64().max(2.0);
        (n as f64 * b.log2()).ceil() as u32 + 64
    }
}

/// One application of the map together with a nearness-to-boundary flag.
#[derive(Clone, Debug)]
pub struct StepOutcome {
    pub value: Real,
    pub digit: u64,
    /// The pre-floor value was within `abs_tol` of an integer without
    /// being one: the digit may belong to the neighboring cell.
    pub boundary_ambiguous: bool,
}

fn classify_near_integer(t: &Real, tol: &Real) -> bool {
    let (_, dist) = t.nearest_int();
    !dist.is_zero() && &dist <= tol
}

/// `T(x) = beta*x + alpha - floor(beta*x + alpha)` for `x` in `[0, 1)`.
pub fn transform_step(p: &ParamPoint, x: &Real, ctx: &PrecisionContext) -> Result<StepOutcome> {
    let scale = ctx.scale().max(x.scale()).max(p.beta.scale());
    let zero = Real::zero(scale);
    let one = Real::one(scale);
    if *x < zero || *x >= one {
        return Err(Error::Domain(format!(
            "transform input {} outside [0, 1)",
            x.to_decimal(12)
        )));
    }
    let (alpha, beta) = p.at_scale(scale);
    let t = beta.mul(&x.rescale(scale)).add(&alpha);
    let floor = t.floor_int();
    let digit = floor.to_u64().unwrap_or(0);
    let value = t.sub(&Real::from_bigint(&floor, scale));
    Ok(StepOutcome {
        value,
        digit,
        boundary_ambiguous: classify_near_integer(&t, ctx.abs_tol()),
    })
}

/// Digit of `x`: the index `j` with `x` in `I_j`, computed as
/// `floor(beta*x + alpha)`.
pub fn partition_index(p: &ParamPoint, x: &Real, ctx: &PrecisionContext) -> Result<StepOutcome> {
    transform_step(p, x, ctx)
}

/// A finite orbit with its digit word. `points[0]` is the start and
/// `digits[i]` is the partition index of `points[i]`; successive points
/// are images under the map (the left-limit variant for the expansion
/// of 1).
#[derive(Clone, Debug)]
pub struct Orbit {
    pub start: Real,
    pub points: Vec<Real>,
    pub digits: Vec<u64>,
    /// Indices whose digit assignment fell inside the boundary guard.
    pub ambiguous: Vec<usize>,
}

/// First `n` digits of the itinerary of 0 (the expansion of 0).
pub fn expansion_of_zero(p: &ParamPoint, n: usize, ctx: &PrecisionContext) -> Result<Orbit> {
    if n == 0 {
        return Err(Error::Precondition("need at least one digit".into()));
    }
    let lifted = ctx.lifted(p.lift_bits(n));
    let scale = lifted.scale().max(p.alpha().scale()).max(p.beta().scale());
    let (alpha, beta) = p.at_scale(scale);
    let tol = ctx.abs_tol();
    let mut x = Real::zero(scale);
    let mut points = Vec::with_capacity(n);
    let mut digits = Vec::with_capacity(n);
    let mut ambiguous = Vec::new();
    for i in 0..n {
        points.push(x.clone());
        let t = beta.mul(&x).add(&alpha);
        let floor = t.floor_int();
        digits.push(floor.to_u64().unwrap_or(0));
        if classify_near_integer(&t, tol) {
            ambiguous.push(i);
        }
        x = t.sub(&Real::from_bigint(&floor, scale));
    }
    Ok(Orbit { start: Real::zero(scale), points, digits, ambiguous })
}

/// First `n` digits of the left-limit itinerary of 1 (the quasi-greedy
/// expansion of 1). The orbit lives in `(0, 1]`; each digit is the
/// unique `d` with `beta*y + alpha - d` in `(0, 1]`.
pub fn expansion_of_one(p: &ParamPoint, n: usize, ctx: &PrecisionContext) -> Result<Orbit> {
    if n == 0 {
        return Err(Error::Precondition("need at least one digit".into()));
    }
    let lifted = ctx.lifted(p.lift_bits(n));
    let scale = lifted.scale().max(p.alpha().scale()).max(p.beta().scale());
    let (alpha, beta) = p.at_scale(scale);
    let tol = ctx.abs_tol();
    let mut y = Real::one(scale);
    let mut points = Vec::with_capacity(n);
    let mut digits = Vec::with_capacity(n);
    let mut ambiguous = Vec::new();
    for i in 0..n {
        points.push(y.clone());
        let t = beta.mul(&y).add(&alpha);
        // Closed-on-the-right cells: digit = ceil(t) - 1, image in (0, 1].
        let d: BigInt = t.ceil_int() - 1;
        digits.push(d.to_u64().unwrap_or(0));
        if classify_near_integer(&t, tol) {
            ambiguous.push(i);
        }
        y = t.sub(&Real::from_bigint(&d, scale));
    }
    Ok(Orbit { start: Real::one(scale), points, digits, ambiguous })
}

/// Value of the digit word under the reconstruction series
/// `sum_i (d_i - alpha) / beta^(i+1)`, with a certified tail bound.
pub fn reconstruct(
    digits: &[u64],
    p: &ParamPoint,
    ctx: &PrecisionContext,
) -> Result<(Real, SeriesTailBound)> {
    eval_power_series(digits, p.alphabet_size() - 1, &p.beta, &p.alpha, ctx)
}

/// Do the prescribed digits shadow the orbit of `start` within
/// tolerance? Drives the orbit with the expected digit at every step and
/// accepts as long as each image stays within `abs_tol` of the unit
/// interval. Unlike a digit-by-digit comparison this remains sound when
/// the true orbit rides a cell boundary exactly (the image is then 0 or
/// 1 and the recomputed value straddles it by the parameter error), a
/// situation purely periodic expansions of 0 produce routinely.
fn shadows_orbit(
    p: &ParamPoint,
    start: Real,
    digits: &[u64],
    left_limit: bool,
    ctx: &PrecisionContext,
) -> Result<()> {
    let lifted = ctx.lifted(p.lift_bits(digits.len()));
    let scale = lifted.scale().max(p.alpha().scale()).max(p.beta().scale());
    let (alpha, beta) = p.at_scale(scale);
    let slack = ctx.abs_tol();
    let lo = Real::zero(scale).sub(slack);
    let hi = Real::one(scale).add(slack);
    let mut x = start.rescale(scale);
    for (i, &d) in digits.iter().enumerate() {
        let t = beta.mul(&x).add(&alpha);
        x = t.sub(&Real::from_int(d as i64, scale));
        let ok = if left_limit {
            x > lo && x <= hi
        } else {
            x >= lo && x < hi
        };
        if !ok {
            return Err(Error::Verification(format!(
                "digit {d} at index {i} drives the orbit to {}, outside the unit interval",
                x.to_decimal(12)
            )));
        }
    }
    Ok(())
}

/// Shadow check for an expansion of 0 (orbit of 0 under the half-open
/// digit convention).
pub fn shadows_expansion_of_zero(
    p: &ParamPoint,
    digits: &[u64],
    ctx: &PrecisionContext,
) -> Result<()> {
    shadows_orbit(p, Real::zero(ctx.scale()), digits, false, ctx)
}

/// Shadow check for a left-limit expansion of 1 (orbit of 1 under the
/// closed-on-the-right convention).
pub fn shadows_expansion_of_one(
    p: &ParamPoint,
    digits: &[u64],
    ctx: &PrecisionContext,
) -> Result<()> {
    shadows_orbit(p, Real::one(ctx.scale()), digits, true, ctx)
}

/// Orbit of 1 driven by prescribed digits instead of computed ones:
/// `q_0 = beta + alpha - d_0`, `q_k = beta*q_{k-1} + alpha - d_k`.
///
/// When `digits` really is the expansion of 1 for `(alpha, beta)`, the
/// value `q_k` equals the orbit point after `k + 1` left-limit steps and
/// stays inside `[0, 1]`. Any value escaping
/// `[-abs_tol, 1 + abs_tol]` proves the digits inconsistent with the
/// parameters and aborts.
pub fn prescribed_orbit_of_one(
    alpha: &Real,
    digits: &[u64],
    beta: &Real,
    ctx: &PrecisionContext,
) -> Result<Vec<Real>> {
    if digits.is_empty() {
        return Err(Error::Precondition("need at least one digit".into()));
    }
    let b = beta.to_f64().max(2.0);
    let lift = (digits.len() as f64 * b.log2()).ceil() as u32 + 64;
    let scale = ctx
        .lifted(lift)
        .scale()
        .max(alpha.scale())
        .max(beta.scale());
    let alpha = alpha.rescale(scale);
    let beta = beta.rescale(scale);
    let tol = ctx.abs_tol();
    let lo = Real::zero(scale).sub(tol);
    let hi = Real::one(scale).add(tol);
    let mut values = Vec::with_capacity(digits.len());
    let mut q = beta.add(&alpha).sub(&Real::from_bigint(&BigInt::from(digits[0]), scale));
    for (k, &d) in digits.iter().enumerate() {
        if k > 0 {
            q = beta.mul(&q).add(&alpha).sub(&Real::from_bigint(&BigInt::from(d), scale));
        }
        if q < lo || q > hi {
            return Err(Error::InconsistentDigits {
                index: k,
                value: q.to_decimal(12),
            });
        }
        values.push(q.clone());
    }
    Ok(values)
}
