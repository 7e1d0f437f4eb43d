//! Fixed-point arbitrary-precision reals.
//!
//! A [`Real`] stores a value as `raw / 2^scale` with a `BigInt` numerator.
//! Addition, subtraction, comparison, floor and ceiling are exact;
//! multiplication, division and square root round to the nearest
//! representable value, so each rounds with error at most half an ulp
//! (`2^-scale`). This is all the directed control the toolkit needs:
//! series truncations carry explicit tail bounds instead of interval
//! arithmetic.
//!
//! Mixed-scale operands are aligned to the larger scale, which is exact.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision real number with a fixed binary scale.
#[derive(Clone, Debug)]
pub struct Real {
    raw: BigInt,
    scale: u32,
}

/// Round `a / b` to the nearest integer, ties away from zero. `b > 0`.
fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    debug_assert!(b.is_positive());
    let two_a = a << 1u32;
    if a.is_negative() {
        (two_a - b).div_floor(&(b << 1u32)) + 1
    } else {
        (two_a + b).div_floor(&(b << 1u32))
    }
}

/// Shift right by `bits` with round-to-nearest.
fn shr_round(x: &BigInt, bits: u32) -> BigInt {
    if bits == 0 {
        return x.clone();
    }
    let half = BigInt::from(1) << (bits - 1);
    (x + half) >> bits
}

impl Real {
    pub fn new_raw(raw: BigInt, scale: u32) -> Self {
        Real { raw, scale }
    }

    pub fn zero(scale: u32) -> Self {
        Real { raw: BigInt::zero(), scale }
    }

    pub fn one(scale: u32) -> Self {
        Real::from_int(1, scale)
    }

    pub fn from_int(value: i64, scale: u32) -> Self {
        Real { raw: BigInt::from(value) << scale, scale }
    }

    pub fn from_bigint(value: &BigInt, scale: u32) -> Self {
        Real { raw: value.clone() << scale, scale }
    }

    /// `num / den` rounded to the nearest representable value.
    pub fn from_ratio(num: &BigInt, den: &BigInt, scale: u32) -> Self {
        assert!(!den.is_zero(), "Real::from_ratio: zero denominator");
        let (num, den) = if den.is_negative() {
            (-num, -den)
        } else {
            (num.clone(), den.clone())
        };
        Real { raw: div_round(&(num << scale), &den), scale }
    }

    pub fn from_ratio_i64(num: i64, den: i64, scale: u32) -> Self {
        Real::from_ratio(&BigInt::from(num), &BigInt::from(den), scale)
    }

    pub fn from_rational(r: &BigRational, scale: u32) -> Self {
        Real::from_ratio(r.numer(), r.denom(), scale)
    }

    pub fn from_f64(value: f64, scale: u32) -> Result<Self> {
        let r = BigRational::from_float(value)
            .ok_or_else(|| Error::Domain(format!("non-finite input {value}")))?;
        Ok(Real::from_rational(&r, scale))
    }

    /// `2^exp` (requires `scale + exp >= 0` when `exp < 0`).
    pub fn pow2(exp: i64, scale: u32) -> Self {
        let shift = scale as i64 + exp;
        assert!(shift >= 0, "Real::pow2: exponent below resolution");
        Real { raw: BigInt::from(1) << (shift as u32), scale }
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    pub fn raw(&self) -> &BigInt {
        &self.raw
    }

    /// Change the binary scale. Enlarging is exact; shrinking rounds.
    pub fn rescale(&self, new_scale: u32) -> Self {
        if new_scale >= self.scale {
            Real { raw: &self.raw << (new_scale - self.scale), scale: new_scale }
        } else {
            Real { raw: shr_round(&self.raw, self.scale - new_scale), scale: new_scale }
        }
    }

    fn aligned(&self, other: &Real) -> (BigInt, BigInt, u32) {
        let scale = self.scale.max(other.scale);
        let a = &self.raw << (scale - self.scale);
        let b = &other.raw << (scale - other.scale);
        (a, b, scale)
    }

    pub fn add(&self, other: &Real) -> Real {
        let (a, b, scale) = self.aligned(other);
        Real { raw: a + b, scale }
    }

    pub fn sub(&self, other: &Real) -> Real {
        let (a, b, scale) = self.aligned(other);
        Real { raw: a - b, scale }
    }

    pub fn neg(&self) -> Real {
        Real { raw: -&self.raw, scale: self.scale }
    }

    pub fn mul(&self, other: &Real) -> Real {
        let scale = self.scale.max(other.scale);
        let product = &self.raw * &other.raw;
        Real { raw: shr_round(&product, self.scale + other.scale - scale), scale }
    }

    /// `self / other`, rounded to nearest. Panics on division by zero.
    pub fn div(&self, other: &Real) -> Real {
        assert!(!other.raw.is_zero(), "Real::div: division by zero");
        let scale = self.scale.max(other.scale);
        // (ra / 2^sa) / (rb / 2^sb) = ra * 2^(sb + scale - sa) / rb at `scale`.
        let shift = other.scale + scale - self.scale;
        let num = &self.raw << shift;
        let (num, den) = if other.raw.is_negative() {
            (-num, -&other.raw)
        } else {
            (num, other.raw.clone())
        };
        Real { raw: div_round(&num, &den), scale }
    }

    pub fn mul_int(&self, k: i64) -> Real {
        Real { raw: &self.raw * k, scale: self.scale }
    }

    pub fn div_int(&self, k: i64) -> Real {
        assert!(k != 0);
        let (num, den) = if k < 0 {
            (-&self.raw, BigInt::from(-k))
        } else {
            (self.raw.clone(), BigInt::from(k))
        };
        Real { raw: div_round(&num, &den), scale: self.scale }
    }

    /// Multiply by `2^k` exactly (for `k < -scale` the result underflows to
    /// the nearest representable value).
    pub fn mul_pow2(&self, k: i64) -> Real {
        if k >= 0 {
            Real { raw: &self.raw << (k as u32), scale: self.scale }
        } else {
            let down = (-k) as u32;
            Real { raw: shr_round(&self.raw, down), scale: self.scale }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.raw.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.raw.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.raw.is_positive()
    }

    pub fn abs(&self) -> Real {
        Real { raw: self.raw.abs(), scale: self.scale }
    }

    pub fn min(self, other: Real) -> Real {
        if self <= other { self } else { other }
    }

    pub fn max(self, other: Real) -> Real {
        if self >= other { self } else { other }
    }

    /// Largest integer `<= self`, exactly.
    pub fn floor_int(&self) -> BigInt {
        self.raw.div_floor(&(BigInt::from(1) << self.scale))
    }

    /// Smallest integer `>= self`, exactly.
    pub fn ceil_int(&self) -> BigInt {
        self.raw.div_ceil(&(BigInt::from(1) << self.scale))
    }

    /// Nearest integer (ties away from zero), exactly.
    pub fn round_int(&self) -> BigInt {
        div_round(&self.raw, &(BigInt::from(1) << self.scale))
    }

    /// Distance to the nearest integer together with that integer.
    pub fn nearest_int(&self) -> (BigInt, Real) {
        let n = self.round_int();
        let dist = self.sub(&Real::from_bigint(&n, self.scale)).abs();
        (n, dist)
    }

    /// Is the value exactly an integer?
    pub fn is_integer(&self) -> bool {
        if self.scale == 0 {
            return true;
        }
        let mask = (BigInt::from(1) << self.scale) - 1;
        let frac: BigInt = &self.raw & &mask;
        frac.is_zero()
    }

    /// `self^n` by binary exponentiation, rounding once per multiply.
    pub fn pow_u32(&self, n: u32) -> Real {
        let mut result = Real::one(self.scale);
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Square root, correct to within one ulp. Requires `self >= 0`.
    pub fn sqrt(&self) -> Real {
        assert!(!self.is_negative(), "Real::sqrt of negative value");
        let shifted = &self.raw << self.scale;
        Real { raw: shifted.sqrt(), scale: self.scale }
    }

    /// Natural logarithm of `ln 2` at the given scale.
    pub fn ln2(scale: u32) -> Real {
        // ln 2 = 2 atanh(1/3)
        let third = Real::from_ratio_i64(1, 3, scale + 32);
        atanh_small(&third).mul_int(2).rescale(scale)
    }

    /// Natural logarithm. Requires `self > 0`.
    pub fn ln(&self) -> Real {
        assert!(self.is_positive(), "Real::ln of non-positive value");
        let gs = self.scale + 64;
        let x = self.rescale(gs);
        // Normalize x = m * 2^t with m in [1, 2).
        let t = x.raw.bits() as i64 - 1 - gs as i64;
        let m = x.mul_pow2(-t);
        // ln m = 2 atanh((m-1)/(m+1)), argument in [0, 1/3).
        let num = m.sub(&Real::one(gs));
        let den = m.add(&Real::one(gs));
        let y = num.div(&den);
        let ln_m = atanh_small(&y).mul_int(2);
        let result = if t == 0 {
            ln_m
        } else {
            ln_m.add(&Real::ln2(gs).mul_int(t))
        };
        result.rescale(self.scale)
    }

    /// Exponential function.
    pub fn exp(&self) -> Real {
        let gs = self.scale + 64;
        let z = self.rescale(gs);
        let ln2 = Real::ln2(gs);
        let q = z.div(&ln2).round_int();
        let r = z.sub(&Real { raw: (&ln2.raw) * &q, scale: gs });
        // |r| <= ln2/2; Taylor series converges quickly.
        let mut term = Real::one(gs);
        let mut sum = Real::one(gs);
        let eps = Real::pow2(-(gs as i64) + 2, gs);
        for n in 1..1000 {
            term = term.mul(&r).div_int(n);
            sum = sum.add(&term);
            if term.abs() < eps {
                break;
            }
        }
        let q64 = q.to_i64().expect("Real::exp: exponent out of range");
        sum.mul_pow2(q64).rescale(self.scale)
    }

    /// `self^e` for positive `self`.
    pub fn pow_real(&self, e: &Real) -> Real {
        self.ln().mul(e).exp()
    }

    /// Round through a scale-64 intermediate to stay inside f64 range.
    pub fn to_f64(&self) -> f64 {
        let r = self.rescale(64);
        r.raw.to_f64().unwrap_or(f64::INFINITY) / 2f64.powi(64)
    }

    /// Decimal rendering with `sig` significant digits.
    pub fn to_decimal(&self, sig: usize) -> String {
        let sig = sig.max(1);
        if self.raw.is_zero() {
            return "0".to_string();
        }
        let neg = self.raw.is_negative();
        let mag = self.abs();
        // Decimal exponent: 10^e10 <= mag < 10^(e10+1).
        let approx = mag.to_f64();
        let mut e10 = if approx > 0.0 && approx.is_finite() {
            approx.log10().floor() as i64
        } else {
            // Very small or very large: derive from the bit length.
            let bits = mag.raw.bits() as i64 - mag.scale as i64;
            (bits as f64 * std::f64::consts::LOG10_2).floor() as i64
        };
        let digits_of = |e10: i64| -> BigInt {
            // round(mag * 10^(sig-1-e10))
            let p = sig as i64 - 1 - e10;
            if p >= 0 {
                let scaled = &mag.raw * BigInt::from(10).pow(p as u32);
                shr_round(&scaled, mag.scale)
            } else {
                let den = BigInt::from(10).pow((-p) as u32) << mag.scale;
                div_round(&mag.raw, &den)
            }
        };
        let mut d = digits_of(e10);
        let mut s = d.to_string();
        if s.len() > sig {
            e10 += 1;
            d = digits_of(e10);
            s = d.to_string();
        }
        while s.len() < sig {
            s.insert(0, '0');
        }
        let body = if e10 >= 0 && (e10 as usize) < sig.max(e10 as usize + 1) && e10 < 18 {
            // Plain positional notation.
            let int_len = e10 as usize + 1;
            if int_len >= s.len() {
                let zeros = "0".repeat(int_len - s.len());
                format!("{s}{zeros}")
            } else {
                let (int_part, frac_part) = s.split_at(int_len);
                let frac = frac_part.trim_end_matches('0');
                if frac.is_empty() {
                    int_part.to_string()
                } else {
                    format!("{int_part}.{frac}")
                }
            }
        } else if e10 < 0 && e10 >= -6 {
            let zeros = "0".repeat((-e10 - 1) as usize);
            let frac = s.trim_end_matches('0');
            format!("0.{zeros}{frac}")
        } else {
            let (first, rest) = s.split_at(1);
            let rest = rest.trim_end_matches('0');
            if rest.is_empty() {
                format!("{first}e{e10}")
            } else {
                format!("{first}.{rest}e{e10}")
            }
        };
        if neg {
            format!("-{body}")
        } else {
            body
        }
    }

    /// Exact hexadecimal-float rendering (C99 style), bit-for-bit.
    pub fn to_hex(&self) -> String {
        if self.raw.is_zero() {
            return "0x0p+0".to_string();
        }
        let neg = self.raw.is_negative();
        let mag = self.raw.abs();
        let bits = mag.bits();
        let exp = bits as i64 - 1 - self.scale as i64;
        // Mantissa bits after the leading 1, left-padded to a nibble multiple.
        let frac_bits = (bits - 1) as u32;
        let pad = (4 - frac_bits % 4) % 4;
        let frac_mask = (BigInt::from(1) << frac_bits) - 1;
        let masked: BigInt = &mag & &frac_mask;
        let frac = masked << pad;
        let mut hex = String::new();
        let total_nibbles = (frac_bits + pad) / 4;
        let frac_str = frac.to_str_radix(16);
        for _ in 0..(total_nibbles as usize).saturating_sub(frac_str.len()) {
            hex.push('0');
        }
        hex.push_str(&frac_str);
        let hex = hex.trim_end_matches('0');
        let sign = if neg { "-" } else { "" };
        let e = if exp >= 0 {
            format!("+{exp}")
        } else {
            format!("{exp}")
        };
        if hex.is_empty() {
            format!("{sign}0x1p{e}")
        } else {
            format!("{sign}0x1.{hex}p{e}")
        }
    }

    /// Parse `"p/q"` rationals or plain decimal strings.
    pub fn parse(text: &str, scale: u32) -> Result<Real> {
        let s = text.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty number".into()));
        }
        if let Some((num, den)) = s.split_once('/') {
            let n: BigInt = num
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad numerator in {s:?}")))?;
            let d: BigInt = den
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad denominator in {s:?}")))?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            return Ok(Real::from_ratio(&n, &d, scale));
        }
        let (sign, rest) = match s.strip_prefix('-') {
            Some(r) => (-1, r),
            None => (1, s.strip_prefix('+').unwrap_or(s)),
        };
        let (int_part, frac_part) = match rest.split_once('.') {
            Some((i, f)) => (i, f),
            None => (rest, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(Error::Parse(format!("bad number {s:?}")));
        }
        let digits = format!("{int_part}{frac_part}");
        if !digits.chars().all(|c| c.is_ascii_digit()) {
            return Err(Error::Parse(format!("bad number {s:?}")));
        }
        let num: BigInt = digits
            .parse()
            .map_err(|_| Error::Parse(format!("bad number {s:?}")))?;
        let den = BigInt::from(10).pow(frac_part.len() as u32);
        Ok(Real::from_ratio(&(num * sign), &den, scale))
    }
}

/// atanh by its odd Taylor series; accurate for |y| <= 1/3.
fn atanh_small(y: &Real) -> Real {
    let scale = y.scale();
    let y2 = y.mul(y);
    let mut term = y.clone();
    let mut sum = y.clone();
    let eps = Real::pow2(-(scale as i64) + 2, scale);
    for k in 1..10_000u32 {
        term = term.mul(&y2);
        let contribution = term.div_int(2 * k as i64 + 1);
        sum = sum.add(&contribution);
        if contribution.abs() < eps {
            break;
        }
    }
    sum
}

impl PartialEq for Real {
    fn eq(&self, other: &Self) -> bool {
        let (a, b, _) = self.aligned(other);
        a == b
    }
}

impl Eq for Real {}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Real {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let (a, b, _) = self.aligned(other);
        a.cmp(&b)
    }
}

impl std::fmt::Display for Real {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.to_decimal(24))
    }
}
