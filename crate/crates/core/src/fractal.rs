//! Iterated function systems on the line, their similarity (Moran)
//! dimension, attractor sampling and a box-counting estimator.
//!
//! Maps are affine contractions `x -> ratio*x + offset` with exact
//! rational coefficients. Sampling and box counts stay in integer
//! arithmetic throughout (numerator/denominator pairs in `i128`), so a
//! sample point landing exactly on a grid line is assigned
//! deterministically; floating point would flip such cells and the
//! self-similar examples here hit grid lines constantly.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::numerics::{find_root_bracketed, fit_slope, PrecisionContext};
use crate::real::Real;

/// Exact rational with `i128` parts. Denominators stay positive; values
/// are only reduced on construction, since the sampling pipeline keeps
/// a common denominator per depth. Equality is by value.
#[derive(Clone, Copy, Debug)]
pub struct Frac {
    num: i128,
    den: i128,
}

impl PartialEq for Frac {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_value(other) == std::cmp::Ordering::Equal
    }
}

impl Eq for Frac {}

fn gcd(mut a: i128, mut b: i128) -> i128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.abs().max(1)
}

impl Frac {
    pub fn new(num: i128, den: i128) -> Result<Self> {
        if den == 0 {
            return Err(Error::Domain("zero denominator".into()));
        }
        let (num, den) = if den < 0 { (-num, -den) } else { (num, den) };
        let g = gcd(num, den);
        Ok(Frac { num: num / g, den: den / g })
    }

    pub fn integer(n: i128) -> Self {
        Frac { num: n, den: 1 }
    }

    pub fn zero() -> Self {
        Frac::integer(0)
    }

    pub fn num(&self) -> i128 {
        self.num
    }

    pub fn den(&self) -> i128 {
        self.den
    }

    fn checked(num: Option<i128>, den: Option<i128>) -> Result<Frac> {
        match (num, den) {
            (Some(n), Some(d)) if d != 0 => Ok(Frac { num: n, den: d }),
            _ => Err(Error::Resource(
                "rational overflow in attractor arithmetic; reduce the depth".into(),
            )),
        }
    }

    pub fn add(&self, other: &Frac) -> Result<Frac> {
        if self.den == other.den {
            return Frac::checked(self.num.checked_add(other.num), Some(self.den));
        }
        let num = self
            .num
            .checked_mul(other.den)
            .and_then(|a| other.num.checked_mul(self.den).and_then(|b| a.checked_add(b)));
        Frac::checked(num, self.den.checked_mul(other.den))
    }

    pub fn sub(&self, other: &Frac) -> Result<Frac> {
        self.add(&Frac { num: -other.num, den: other.den })
    }

    pub fn mul(&self, other: &Frac) -> Result<Frac> {
        Frac::checked(
            self.num.checked_mul(other.num),
            self.den.checked_mul(other.den),
        )
    }

    pub fn cmp_value(&self, other: &Frac) -> std::cmp::Ordering {
        if self.den == other.den {
            return self.num.cmp(&other.num);
        }
        let a = self.num as i128 * other.den;
        let b = other.num as i128 * self.den;
        a.cmp(&b)
    }

    /// `floor(self / eps)` in exact integer arithmetic.
    pub fn floor_div(&self, eps: &Frac) -> Result<i128> {
        // self/eps = num*eps.den / (den*eps.num)
        let num = self
            .num
            .checked_mul(eps.den)
            .ok_or_else(|| Error::Resource("rational overflow in box count".into()))?;
        let den = self
            .den
            .checked_mul(eps.num)
            .ok_or_else(|| Error::Resource("rational overflow in box count".into()))?;
        let (num, den) = if den < 0 { (-num, -den) } else { (num, den) };
        Ok(num.div_euclid(den))
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn to_real(&self, scale: u32) -> Real {
        Real::from_ratio(&BigInt::from(self.num), &BigInt::from(self.den), scale)
    }
}

/// One affine contraction `x -> ratio*x + offset`.
#[derive(Clone, Copy, Debug)]
pub struct AffineMap {
    pub ratio: Frac,
    pub offset: Frac,
}

impl AffineMap {
    pub fn apply(&self, x: &Frac) -> Result<Frac> {
        self.ratio.mul(x)?.add(&self.offset)
    }

    /// Fixed point `offset / (1 - ratio)`.
    pub fn fixed_point(&self) -> Result<Frac> {
        let one = Frac::integer(1);
        let den = one.sub(&self.ratio)?;
        // offset/(1-r) = (o.num * den.den) / (o.den * den.num)
        Frac::new(
            self.offset
                .num
                .checked_mul(den.den)
                .ok_or_else(|| Error::Resource("overflow in fixed point".into()))?,
            self.offset
                .den
                .checked_mul(den.num)
                .ok_or_else(|| Error::Resource("overflow in fixed point".into()))?,
        )
    }
}

/// A finite system of affine contractions with an ambient interval that
/// every map sends into itself.
#[derive(Clone, Debug)]
pub struct IfsSpec {
    maps: Vec<AffineMap>,
    ambient: (Frac, Frac),
}

impl IfsSpec {
    pub fn new(maps: Vec<AffineMap>, ambient: (Frac, Frac)) -> Result<Self> {
        if maps.is_empty() {
            return Err(Error::Precondition("need at least one map".into()));
        }
        let zero = Frac::zero();
        let one = Frac::integer(1);
        for (i, m) in maps.iter().enumerate() {
            if m.ratio.cmp_value(&zero) != std::cmp::Ordering::Greater
                || m.ratio.cmp_value(&one) != std::cmp::Ordering::Less
            {
                return Err(Error::Precondition(format!(
                    "map {i} ratio must lie strictly in (0, 1)"
                )));
            }
            for endpoint in [&ambient.0, &ambient.1] {
                let image = m.apply(endpoint)?;
                if image.cmp_value(&ambient.0) == std::cmp::Ordering::Less
                    || image.cmp_value(&ambient.1) == std::cmp::Ordering::Greater
                {
                    return Err(Error::Precondition(format!(
                        "map {i} does not send the ambient interval into itself"
                    )));
                }
            }
        }
        Ok(IfsSpec { maps, ambient })
    }

    /// The band family `x -> (x + i)/n` for `i = 1..=n-2` on `[0, 1]`.
    pub fn band_family(n: u64) -> Result<Self> {
        if n < 3 {
            return Err(Error::Precondition("band family needs n >= 3".into()));
        }
        let maps = (1..=(n - 2) as i128)
            .map(|i| {
                Ok(AffineMap {
                    ratio: Frac::new(1, n as i128)?,
                    offset: Frac::new(i, n as i128)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        IfsSpec::new(maps, (Frac::zero(), Frac::integer(1)))
    }

    /// The middle-thirds system: ratios 1/3, offsets 0 and 2/3.
    pub fn cantor() -> Result<Self> {
        let maps = vec![
            AffineMap { ratio: Frac::new(1, 3)?, offset: Frac::zero() },
            AffineMap { ratio: Frac::new(1, 3)?, offset: Frac::new(2, 3)? },
        ];
        IfsSpec::new(maps, (Frac::zero(), Frac::integer(1)))
    }

    pub fn maps(&self) -> &[AffineMap] {
        &self.maps
    }

    pub fn ambient(&self) -> &(Frac, Frac) {
        &self.ambient
    }
}

/// Which route produced a dimension value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DimMethod {
    Moran,
    BoxCount,
}

/// A dimension value with an error estimate and the scales that fed it.
#[derive(Clone, Debug)]
pub struct DimEstimate {
    pub value: Real,
    pub stderr: f64,
    pub method: DimMethod,
    pub scales_used: Vec<f64>,
}

/// Similarity dimension: the root of `sum_i ratio_i^s = 1`.
///
/// Equal ratios use the closed form `log m / log(1/r)`; otherwise the
/// equation is monotone in `s` and bisection on
/// `[0, log m / log(1/min_ratio)]` applies. The residual at the
/// returned `s` is below `ctx.abs_tol` either way.
pub fn moran_dimension(ifs: &IfsSpec, ctx: &PrecisionContext) -> Result<DimEstimate> {
    let scale = ctx.scale() + 32;
    let ratios: Vec<Real> = ifs.maps.iter().map(|m| m.ratio.to_real(scale)).collect();
    let m = ratios.len();
    let equal = ifs.maps.iter().all(|map| map.ratio == ifs.maps[0].ratio);
    let value = if equal {
        if m == 1 {
            Real::zero(scale)
        } else {
            // s = ln(m) / ln(1/r)
            let ln_m = Real::from_int(m as i64, scale).ln();
            let ln_inv_r = Real::one(scale).div(&ratios[0]).ln();
            ln_m.div(&ln_inv_r)
        }
    } else {
        // At s = 0 the sum is m >= 2; with r_max the largest ratio,
        // m * r_max^s = 1 at s = ln m / ln(1/r_max) and the true sum is
        // already <= 1 there, so that value brackets the root from above.
        let max_ratio = ratios.iter().max().expect("nonempty").clone();
        let upper = Real::from_int(m as i64, scale)
            .ln()
            .div(&Real::one(scale).div(&max_ratio).ln());
        let ln_ratios: Vec<Real> = ratios.iter().map(|r| r.ln()).collect();
        let one = Real::one(scale);
        let objective = |s: &Real| -> Real {
            let mut sum = Real::zero(scale);
            for lr in &ln_ratios {
                sum = sum.add(&lr.mul(s).exp());
            }
            sum.sub(&one)
        };
        find_root_bracketed(objective, &Real::zero(scale), &upper, ctx)?
    };
    Ok(DimEstimate {
        value: value.rescale(ctx.scale()),
        stderr: 0.0,
        method: DimMethod::Moran,
        scales_used: Vec::new(),
    })
}

/// Similarity dimension `log m / log n` of `m` equal ratio-`1/n` maps,
/// without materializing the maps (the band family for huge `n`).
pub fn uniform_moran_value(map_count: u64, inv_ratio: u64, ctx: &PrecisionContext) -> Real {
    let scale = ctx.scale() + 32;
    let ln_m = Real::from_int(map_count as i64, scale).ln();
    let ln_n = Real::from_int(inv_ratio as i64, scale).ln();
    ln_m.div(&ln_n).rescale(ctx.scale())
}

/// All images of the seed (the first map's fixed point) under `depth`
/// fold compositions, sorted ascending. The sample has exactly
/// `maps^depth` entries (duplicates kept) and covers the attractor to
/// resolution `max_ratio^depth * |ambient|`.
pub fn attractor_sample(ifs: &IfsSpec, depth: usize, budget: u64) -> Result<Vec<Frac>> {
    let m = ifs.maps.len() as u64;
    let mut size = 1u64;
    for _ in 0..depth {
        size = size
            .checked_mul(m)
            .filter(|&s| s <= budget)
            .ok_or_else(|| {
                Error::Resource(format!(
                    "attractor sample of {}^{depth} points exceeds budget {budget}",
                    m
                ))
            })?;
    }
    let seed = ifs.maps[0].fixed_point()?;
    let mut points = vec![seed];
    for _ in 0..depth {
        let mut next = Vec::with_capacity(points.len() * ifs.maps.len());
        for map in &ifs.maps {
            for p in &points {
                next.push(map.apply(p)?);
            }
        }
        points = next;
    }
    points.sort_by(|a, b| a.cmp_value(b));
    Ok(points)
}

/// Number of half-open grid cells `[lo + m*eps, lo + (m+1)*eps)` meeting
/// the point set, for each scale. Points must be sorted ascending;
/// scales must be positive and decreasing.
pub fn box_count(points: &[Frac], lo: &Frac, epsilons: &[Frac]) -> Result<Vec<(Frac, u64)>> {
    if points.is_empty() {
        return Err(Error::Precondition("empty point set".into()));
    }
    let zero = Frac::zero();
    for w in epsilons.windows(2) {
        if w[1].cmp_value(&w[0]) != std::cmp::Ordering::Less {
            return Err(Error::Precondition("scales must be strictly decreasing".into()));
        }
    }
    if let Some(last) = epsilons.last() {
        if last.cmp_value(&zero) != std::cmp::Ordering::Greater {
            return Err(Error::Precondition("scales must be positive".into()));
        }
    }
    debug_assert!(points
        .windows(2)
        .all(|w| w[0].cmp_value(&w[1]) != std::cmp::Ordering::Greater));
    let mut out = Vec::with_capacity(epsilons.len());
    for eps in epsilons {
        let mut count = 0u64;
        let mut last_cell: Option<i128> = None;
        for p in points {
            let cell = p.sub(lo)?.floor_div(eps)?;
            if last_cell != Some(cell) {
                // Sorted input: cells appear in nondecreasing order.
                count += 1;
                last_cell = Some(cell);
            }
        }
        out.push((*eps, count));
    }
    Ok(out)
}

/// Box-counting dimension: least-squares slope of `ln(count)` against
/// `ln(1/eps)` over at least three scales.
pub fn box_dimension(
    points: &[Frac],
    lo: &Frac,
    epsilons: &[Frac],
    ctx: &PrecisionContext,
) -> Result<DimEstimate> {
    if epsilons.len() < 3 {
        return Err(Error::Precondition(format!(
            "need at least 3 scales, got {}",
            epsilons.len()
        )));
    }
    let counts = box_count(points, lo, epsilons)?;
    let pts: Vec<(f64, f64)> = counts
        .iter()
        .map(|(eps, c)| ((1.0 / eps.to_f64()).ln(), (*c as f64).ln()))
        .collect();
    let (slope, stderr) = fit_slope(&pts)?;
    Ok(DimEstimate {
        value: Real::from_f64(slope, ctx.scale())?,
        stderr,
        method: DimMethod::BoxCount,
        scales_used: epsilons.iter().map(|e| e.to_f64()).collect(),
    })
}

/// The aligned scale schedule `(1/n)^k` for `k = 1..=levels`.
pub fn power_scales(n: u64, levels: usize) -> Result<Vec<Frac>> {
    (1..=levels)
        .map(|k| {
            let mut den: i128 = 1;
            for _ in 0..k {
                den = den
                    .checked_mul(n as i128)
                    .ok_or_else(|| Error::Resource("scale overflow".into()))?;
            }
            Frac::new(1, den)
        })
        .collect()
}
