//! Parameters realizing prescribed endpoint expansions.
//!
//! Fix an eventually periodic digit sequence `u` with `u_0 = 0`,
//! `u <= shift^n(u)` for all `n` and maximal digit `K`. Every `beta > 1`
//! then determines `alpha(beta) = (beta - 1) * sum_j u_j beta^-(j+1)`,
//! the unique offset whose expansion of 0 is `u`. For an alphabet size
//! `N >= K + 3` this module solves for the `beta` whose expansion of 1
//! is a prescribed word `v` with `v_0 = N - 1` and all later digits in
//! the interior band `1..=N-2`, scans the band-membership window
//! `(N-2, N]`, evaluates the digit-fraction map
//! `phi(beta) = sum_{k>=1} v_k N^-k`, and checks the separation
//! machinery (`Delta_N`, its positive floor `C_N`, and the empirical
//! Lipschitz ratio of `phi`) underlying the bi-Lipschitz comparison of
//! the window with a self-similar attractor.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::expansion::{
    expansion_of_one, expansion_of_zero, shadows_expansion_of_one, shadows_expansion_of_zero,
    ParamPoint,
};
use crate::numerics::{find_root_bracketed, PrecisionContext};
use crate::real::Real;
use crate::symbolic::{DigitSeq, SubshiftSpec};

/// An eventually periodic expansion of 0, validated against the three
/// standing hypotheses: leading digit 0, shift-minimality, and a finite
/// maximal digit.
#[derive(Clone, Debug)]
pub struct ZeroExpansionSpec {
    u: DigitSeq,
    max_digit: u64,
    strict: bool,
}

impl ZeroExpansionSpec {
    /// Validate `u`. With `strict` set, shifted copies must be strictly
    /// above `u`; purely periodic `u` only satisfies the non-strict
    /// form (a shift by the period reproduces `u`), which is the
    /// default.
    pub fn new(u: DigitSeq, strict: bool) -> Result<Self> {
        use std::cmp::Ordering;
        if !u.is_infinite() {
            return Err(Error::Precondition(
                "expansion of 0 must be an infinite (eventually periodic) sequence".into(),
            ));
        }
        if u.get(0) != Some(0) {
            return Err(Error::Precondition("expansion of 0 must start with digit 0".into()));
        }
        let window = u.preperiod().len() + u.period().len();
        for n in 1..=window {
            let shifted = u.shift_by(n)?;
            match u.cmp_exact(&shifted) {
                Ordering::Greater => {
                    return Err(Error::Precondition(format!(
                        "shift by {n} falls below the sequence (shift-minimality fails)"
                    )));
                }
                Ordering::Equal if strict => {
                    return Err(Error::Precondition(format!(
                        "shift by {n} reproduces the sequence (strict minimality fails)"
                    )));
                }
                _ => {}
            }
        }
        let max_digit = u.max_digit();
        Ok(ZeroExpansionSpec { u, max_digit, strict })
    }

    /// The zero sequence `0^infinity` (plain beta-shift case).
    pub fn zero() -> Self {
        ZeroExpansionSpec {
            u: DigitSeq::constant(0, 1).expect("constant sequence"),
            max_digit: 0,
            strict: false,
        }
    }

    pub fn u(&self) -> &DigitSeq {
        &self.u
    }

    /// Maximal digit `K`.
    pub fn max_digit(&self) -> u64 {
        self.max_digit
    }

    pub fn is_strict(&self) -> bool {
        self.strict
    }

    /// Copy of `u` over the alphabet `{0..N-1}`.
    pub fn u_with_alphabet(&self, alphabet_size: u64) -> Result<DigitSeq> {
        DigitSeq::new(
            self.u.preperiod().to_vec(),
            self.u.period().to_vec(),
            alphabet_size,
        )
    }
}

/// `sum_{j>=0} seq_j * base^-(j+1)` evaluated exactly through the
/// periodic structure (preperiod by Horner, period as a geometric
/// block).
fn periodic_power_sum(seq: &DigitSeq, base: &Real, scale: u32) -> Real {
    let b = base.rescale(scale);
    let horner = |word: &[u64]| -> Real {
        let mut acc = Real::zero(scale);
        for &d in word.iter().rev() {
            acc = acc.add(&Real::from_int(d as i64, scale)).div(&b);
        }
        acc
    };
    let head = horner(seq.preperiod());
    if seq.period().is_empty() {
        return head;
    }
    let block = horner(seq.period());
    let bp = b.pow_u32(seq.period().len() as u32);
    let geom = bp.div(&bp.sub(&Real::one(scale)));
    let tail = if seq.preperiod().is_empty() {
        block.mul(&geom)
    } else {
        block.mul(&geom).div(&b.pow_u32(seq.preperiod().len() as u32))
    };
    head.add(&tail)
}

/// Exact rational value of `sum_{j>=0} seq_j * base^-(j+1)` for an
/// integer base.
fn rational_power_sum(seq: &DigitSeq, base: u64) -> BigRational {
    let b = BigInt::from(base);
    let horner_num = |word: &[u64]| -> BigInt {
        let mut acc = BigInt::zero();
        for &d in word {
            acc = acc * &b + BigInt::from(d);
        }
        acc
    };
    let p = seq.preperiod().len() as u32;
    let head = BigRational::new(horner_num(seq.preperiod()), b.pow(p));
    if seq.period().is_empty() {
        return head;
    }
    let per = seq.period().len() as u32;
    let tail = BigRational::new(
        horner_num(seq.period()),
        (b.pow(per) - BigInt::one()) * b.pow(p),
    );
    head + tail
}

/// `alpha(beta) = (beta - 1) * sum_j u_j beta^-(j+1)`, the offset whose
/// expansion of 0 is `u`. Errors if the value reaches 1 (the pairing is
/// invalid there).
pub fn alpha_of_beta(spec: &ZeroExpansionSpec, beta: &Real, ctx: &PrecisionContext) -> Result<Real> {
    let scale = ctx.scale().max(beta.scale());
    let one = Real::one(scale);
    if *beta <= one {
        return Err(Error::Domain("alpha(beta) needs beta > 1".into()));
    }
    let u_sum = periodic_power_sum(&spec.u, beta, scale);
    let alpha = beta.rescale(scale).sub(&one).mul(&u_sum);
    if alpha >= one {
        return Err(Error::Domain(format!(
            "alpha(beta) = {} >= 1: invalid spec/beta pairing",
            alpha.to_decimal(12)
        )));
    }
    Ok(alpha)
}

/// Number of series terms that push truncation error below the working
/// precision for `beta > 2` (terms decay at least geometrically with
/// ratio 1/2).
fn derivative_terms(ctx: &PrecisionContext) -> usize {
    ctx.precision_bits() as usize + 64
}

/// Analytic derivative of `alpha(beta)` for `beta > 2`:
/// `sum_j u_j beta^-(j+1) - (beta - 1) * sum_j u_j (j+1) beta^-(j+2)`,
/// truncated far below the context tolerance.
pub fn alpha_derivative(
    spec: &ZeroExpansionSpec,
    beta: &Real,
    ctx: &PrecisionContext,
) -> Result<Real> {
    let scale = ctx.scale().max(beta.scale());
    let two = Real::from_int(2, scale);
    if *beta <= two {
        return Err(Error::Precondition("alpha_derivative needs beta > 2".into()));
    }
    let (u_sum, weighted) = derivative_sums(spec, beta, scale, derivative_terms(ctx));
    Ok(u_sum.sub(&beta.rescale(scale).sub(&Real::one(scale)).mul(&weighted)))
}

/// Truncations of `sum u_j beta^-(j+1)` and `sum u_j (j+1) beta^-(j+2)`.
fn derivative_sums(
    spec: &ZeroExpansionSpec,
    beta: &Real,
    scale: u32,
    terms: usize,
) -> (Real, Real) {
    let b = beta.rescale(scale);
    let inv = Real::one(scale).div(&b);
    let mut power = inv.clone(); // beta^-(j+1)
    let mut u_sum = Real::zero(scale);
    let mut weighted = Real::zero(scale);
    for j in 0..terms {
        let d = spec.u.get(j).unwrap_or(0);
        if d != 0 {
            let dj = Real::from_int(d as i64, scale);
            u_sum = u_sum.add(&dj.mul(&power));
            weighted = weighted.add(&dj.mul_int(j as i64 + 1).mul(&power).mul(&inv));
        }
        power = power.mul(&inv);
    }
    (u_sum, weighted)
}

/// Upper bound for `sup |alpha'|` over `[beta_lo, infinity)`, valid for
/// `beta_lo >= 2`: both series in the derivative are term-wise
/// decreasing in `beta` there, so evaluating at the left endpoint (plus
/// an explicit truncation allowance) dominates.
pub fn alpha_derivative_sup_bound(
    spec: &ZeroExpansionSpec,
    beta_lo: &Real,
    ctx: &PrecisionContext,
) -> Result<Real> {
    let scale = ctx.scale().max(beta_lo.scale());
    if spec.max_digit == 0 {
        return Ok(Real::zero(scale));
    }
    let two = Real::from_int(2, scale);
    if *beta_lo < two {
        return Err(Error::Precondition(
            "derivative bound requires the window to start at beta >= 2".into(),
        ));
    }
    let terms = derivative_terms(ctx);
    let (u_sum, weighted) = derivative_sums(spec, beta_lo, scale, terms);
    let bound = u_sum.add(&beta_lo.rescale(scale).sub(&Real::one(scale)).mul(&weighted));
    // Truncation allowance: K * (terms + 3) * 2^-terms dominates both tails.
    let allowance_scale = (terms as u32).saturating_add(16);
    let allowance = Real::from_int((spec.max_digit * (terms as u64 + 3)) as i64, allowance_scale)
        .mul(&Real::pow2(-(terms as i64 - 4), allowance_scale));
    Ok(bound.add(&allowance).rescale(scale))
}

/// Validate a prescribed expansion of 1 for alphabet size `N`: leading
/// digit `N - 1`, all later digits in the interior band `1..=N-2`.
fn validate_v_word(v: &DigitSeq, n_alphabet: u64) -> Result<()> {
    if !v.is_infinite() {
        return Err(Error::Precondition("v must be eventually periodic".into()));
    }
    if v.get(0) != Some(n_alphabet - 1) {
        return Err(Error::Precondition(format!(
            "v must start with digit {}",
            n_alphabet - 1
        )));
    }
    let check = |d: u64| d >= 1 && d <= n_alphabet - 2;
    for (i, &d) in v.preperiod().iter().enumerate().skip(1) {
        if !check(d) {
            return Err(Error::Precondition(format!(
                "v digit {d} at index {i} outside band 1..={}",
                n_alphabet - 2
            )));
        }
    }
    let offset = v.preperiod().len().max(1);
    for (i, &d) in v.period().iter().enumerate() {
        // Period digits repeat forever; index 0 is only reachable when the
        // preperiod is empty, which the leading-digit check already covers.
        if v.preperiod().is_empty() && i == 0 {
            continue;
        }
        if !check(d) {
            return Err(Error::Precondition(format!(
                "v period digit {d} (first at index {}) outside band 1..={}",
                offset + i,
                n_alphabet - 2
            )));
        }
    }
    Ok(())
}

/// Solve for the parameter pair realizing expansions `(u, v)`.
///
/// The defining equation is `sum_i (v_i - alpha(beta)) beta^-(i+1) = 1`;
/// with `U` and `V` the digit series of `u` and `v` this is
/// `V(beta) - U(beta) - 1 = 0`, which changes sign on `[N-2, N]`.
/// After bisection the expansions of 0 and 1 are recomputed at the
/// solved point and compared against the inputs for `verify_depth`
/// digits; any mismatch or boundary-ambiguous digit is a verification
/// error.
pub fn solve_beta(
    spec: &ZeroExpansionSpec,
    v: &DigitSeq,
    n_alphabet: u64,
    verify_depth: usize,
    ctx: &PrecisionContext,
) -> Result<ParamPoint> {
    if n_alphabet < spec.max_digit + 3 {
        return Err(Error::Precondition(format!(
            "alphabet size {n_alphabet} below K + 3 = {}",
            spec.max_digit + 3
        )));
    }
    validate_v_word(v, n_alphabet)?;
    // Verifying `depth` digits downstream needs beta pinned to roughly
    // beta^-depth: the orbit of 1 amplifies a parameter perturbation by
    // beta each step. Solve in a context lifted accordingly.
    let verify_bits = (verify_depth as f64 * (n_alphabet as f64).log2()).ceil() as u32 + 128;
    let solve_ctx = PrecisionContext::new(ctx.precision_bits() + verify_bits)?;
    let scale = solve_ctx.scale();
    let one = Real::one(scale);
    let objective = |beta: &Real| -> Real {
        let v_sum = periodic_power_sum(v, beta, scale);
        let u_sum = periodic_power_sum(&spec.u, beta, scale);
        v_sum.sub(&u_sum).sub(&one)
    };
    let lo = Real::from_int(n_alphabet as i64 - 2, scale);
    let hi = Real::from_int(n_alphabet as i64, scale);
    let beta = find_root_bracketed(objective, &lo, &hi, &solve_ctx)?;
    let alpha = alpha_of_beta(spec, &beta, &solve_ctx)?;
    let point = ParamPoint::new(alpha, beta, ctx)?;

    if verify_depth > 0 {
        // Digit-by-digit comparison where the recomputed orbit stays
        // clear of cell boundaries; shadowing otherwise (an orbit riding
        // a boundary exactly cannot be confirmed digit by digit from an
        // approximate parameter).
        let u_prefix = spec.u.prefix(verify_depth);
        let zero_orbit = expansion_of_zero(&point, verify_depth, ctx)?;
        if zero_orbit.ambiguous.is_empty() {
            if zero_orbit.digits != u_prefix {
                return Err(Error::Verification(
                    "recomputed expansion of 0 does not match u".into(),
                ));
            }
        } else {
            shadows_expansion_of_zero(&point, &u_prefix, ctx).map_err(|e| {
                Error::Verification(format!("expansion of 0 fails to shadow u: {e}"))
            })?;
        }
        let v_prefix = v.prefix(verify_depth);
        let one_orbit = expansion_of_one(&point, verify_depth, ctx)?;
        if one_orbit.ambiguous.is_empty() {
            if one_orbit.digits != v_prefix {
                return Err(Error::Verification(
                    "recomputed expansion of 1 does not match v".into(),
                ));
            }
        } else {
            shadows_expansion_of_one(&point, &v_prefix, ctx).map_err(|e| {
                Error::Verification(format!("expansion of 1 fails to shadow v: {e}"))
            })?;
        }
    }
    Ok(point)
}

/// A parameter in the scanned window, carrying its digit data and the
/// digit-fraction value `phi`.
#[derive(Clone, Debug)]
pub struct WindowWitness {
    pub n_alphabet: u64,
    pub beta: Real,
    pub alpha: Real,
    pub v_prefix: Vec<u64>,
    pub depth: usize,
    /// `sum_{k=1}^{depth-1} v_k N^-k` (exact when `v_seq` is known).
    pub phi: Real,
    /// Certified bound on the discarded phi tail (zero for exact).
    pub phi_tail: Real,
    /// Built from a solved periodic word (as opposed to a grid probe).
    pub exact: bool,
    pub v_seq: Option<DigitSeq>,
}

impl WindowWitness {
    /// The subshift pinned by `u` and this witness's `v` over `{0..N-1}`.
    pub fn subshift_spec(&self, spec: &ZeroExpansionSpec) -> Result<SubshiftSpec> {
        let u = spec.u_with_alphabet(self.n_alphabet)?;
        let v = match &self.v_seq {
            Some(seq) => seq.clone(),
            None => DigitSeq::finite(&self.v_prefix, self.n_alphabet)?,
        };
        SubshiftSpec::new(u, v)
    }
}

/// `phi` from a digit prefix: partial sum over `k = 1..depth-1` plus a
/// tail bound `(N-2)/(N-1) * N^(1-depth)` covering band digits beyond.
pub fn phi_from_prefix(v_prefix: &[u64], n_alphabet: u64, ctx: &PrecisionContext) -> (Real, Real) {
    let scale = ctx.scale();
    let b = BigInt::from(n_alphabet);
    let mut num = BigInt::zero();
    for &d in v_prefix.iter().skip(1) {
        num = num * &b + BigInt::from(d);
    }
    let depth = v_prefix.len();
    let den = b.pow(depth.saturating_sub(1) as u32);
    let partial = Real::from_ratio(&num, &den, scale);
    let tail = BigRational::new(
        BigInt::from(n_alphabet - 2) * b.pow(1),
        BigInt::from(n_alphabet - 1) * b.pow(depth as u32),
    );
    (partial, Real::from_rational(&tail, scale))
}

/// Exact `phi` for an eventually periodic `v`.
pub fn phi_exact(v: &DigitSeq, n_alphabet: u64, ctx: &PrecisionContext) -> Result<Real> {
    let shifted = v.shift_by(1)?;
    Ok(Real::from_rational(
        &rational_power_sum(&shifted, n_alphabet),
        ctx.scale(),
    ))
}

/// Outcome of a finite-depth membership test of the scanned window.
#[derive(Clone, Debug)]
pub enum Membership {
    Member(Box<WindowWitness>),
    NotMember { first_bad_index: usize, digit: u64 },
    /// A boundary-ambiguous digit appeared before the window test could
    /// be decided; deliberately distinct from `NotMember`.
    Inconclusive { ambiguous_index: usize },
}

/// Does `beta` belong to the scanned window, judged from `depth` digits
/// of its expansion of 1? Digits must open with `N - 1` and then stay in
/// the interior band.
pub fn window_membership(
    spec: &ZeroExpansionSpec,
    n_alphabet: u64,
    beta: &Real,
    depth: usize,
    ctx: &PrecisionContext,
) -> Result<Membership> {
    if n_alphabet < spec.max_digit + 3 {
        return Err(Error::Precondition(format!(
            "alphabet size {n_alphabet} below K + 3 = {}",
            spec.max_digit + 3
        )));
    }
    let scale = ctx.scale().max(beta.scale());
    let lo = Real::from_int(n_alphabet as i64 - 2, scale);
    let hi = Real::from_int(n_alphabet as i64, scale);
    if *beta <= lo || *beta > hi {
        return Err(Error::Precondition(format!(
            "beta {} outside ({}, {}]",
            beta.to_decimal(12),
            n_alphabet - 2,
            n_alphabet
        )));
    }
    let alpha = alpha_of_beta(spec, beta, ctx)?;
    let point = ParamPoint::new(alpha.clone(), beta.clone(), ctx)?;
    let orbit = expansion_of_one(&point, depth, ctx)?;
    let first_ambiguous = orbit.ambiguous.first().copied();
    for (i, &d) in orbit.digits.iter().enumerate() {
        let ok = if i == 0 {
            d == n_alphabet - 1
        } else {
            d >= 1 && d <= n_alphabet - 2
        };
        if !ok {
            // A decisive violation before any guard hit is a clean reject.
            match first_ambiguous {
                Some(a) if a <= i => return Ok(Membership::Inconclusive { ambiguous_index: a }),
                _ => return Ok(Membership::NotMember { first_bad_index: i, digit: d }),
            }
        }
    }
    if let Some(a) = first_ambiguous {
        return Ok(Membership::Inconclusive { ambiguous_index: a });
    }
    let (phi, phi_tail) = phi_from_prefix(&orbit.digits, n_alphabet, ctx);
    let witness = WindowWitness {
        n_alphabet,
        beta: beta.clone(),
        alpha,
        v_prefix: orbit.digits,
        depth,
        phi,
        phi_tail,
        exact: false,
        v_seq: None,
    };
    debug_assert!(witness_in_window(&witness, spec, ctx));
    Ok(Membership::Member(Box::new(witness)))
}

/// `beta` lies in `(N - 1 - alpha_N, N]` with `alpha_N = K/(N-2)`.
fn witness_in_window(w: &WindowWitness, spec: &ZeroExpansionSpec, ctx: &PrecisionContext) -> bool {
    let scale = ctx.scale();
    let lo = Real::from_int(w.n_alphabet as i64 - 1, scale).sub(&Real::from_ratio_i64(
        spec.max_digit as i64,
        w.n_alphabet as i64 - 2,
        scale,
    ));
    let hi = Real::from_int(w.n_alphabet as i64, scale);
    w.beta > lo && w.beta <= hi
}

/// The two-branch separation function `Delta_N(x, y)`: the minimum over
/// the two digit-difference orientations of the gap between the lowest
/// expansion value with the larger leading digit and the highest with
/// the smaller one. Closed geometric forms, with
/// `sum_{k>=2} c/t^k = c/(t(t-1))`.
pub fn delta_separation(
    spec: &ZeroExpansionSpec,
    n_alphabet: u64,
    x: &Real,
    y: &Real,
    ctx: &PrecisionContext,
) -> Result<Real> {
    let scale = ctx.scale().max(x.scale()).max(y.scale());
    let ax = alpha_of_beta(spec, x, ctx)?.rescale(scale);
    let ay = alpha_of_beta(spec, y, ctx)?.rescale(scale);
    let x = x.rescale(scale);
    let y = y.rescale(scale);
    let one = Real::one(scale);
    let n2 = Real::from_int(n_alphabet as i64 - 2, scale);
    let n3 = Real::from_int(n_alphabet as i64 - 3, scale);
    let two = Real::from_int(2, scale);
    let tail = |c: &Real, t: &Real| -> Real { c.div(&t.mul(&t.sub(&one))) };

    let b1 = two
        .sub(&ax)
        .div(&x)
        .add(&tail(&one.sub(&ax), &x))
        .sub(&one.sub(&ay).div(&y))
        .sub(&tail(&n2.sub(&ay), &y));
    let b2 = n2
        .sub(&ay)
        .div(&y)
        .add(&tail(&one.sub(&ay), &y))
        .sub(&n3.sub(&ax).div(&x))
        .sub(&tail(&n2.sub(&ax), &x));
    Ok(b1.min(b2))
}

/// Positive floor for the diagonal separation:
/// `C_N = (1/N) * (1 - (N-3)/(N-2-alpha_N))` with `alpha_N = K/(N-2)`.
/// Requires `N >= K + 3` (the constant is not positive below that).
pub fn min_separation_constant(n_alphabet: u64, max_digit: u64, ctx: &PrecisionContext) -> Result<Real> {
    if n_alphabet < max_digit + 3 {
        return Err(Error::Domain(format!(
            "C_N is only positive for N >= K + 3 (N = {n_alphabet}, K = {max_digit})"
        )));
    }
    let n = BigInt::from(n_alphabet);
    let n2 = BigInt::from(n_alphabet - 2);
    // N - 2 - alpha_N = ((N-2)^2 - K) / (N-2)
    let denom = &n2 * &n2 - BigInt::from(max_digit);
    let ratio = BigRational::new(BigInt::from(n_alphabet - 3) * &n2, denom);
    let c = (BigRational::one() - ratio) / BigRational::from_integer(n);
    debug_assert!(c.is_positive());
    Ok(Real::from_rational(&c, ctx.scale()))
}

/// Every interior-band word of the given length, used to enumerate
/// solvable `v` words `(N-1) (word)^infinity`.
pub fn band_words(n_alphabet: u64, len: usize) -> Vec<Vec<u64>> {
    let lo = 1u64;
    let hi = n_alphabet - 2;
    let mut out = Vec::new();
    let mut word = vec![lo; len];
    loop {
        out.push(word.clone());
        let mut i = len;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if word[i] < hi {
                word[i] += 1;
                for w in word.iter_mut().skip(i + 1) {
                    *w = lo;
                }
                break;
            }
        }
    }
}

/// Result of a window scan: solved witnesses and grid diagnostics.
#[derive(Clone, Debug)]
pub struct WindowScan {
    /// All witnesses (constructed and grid), sorted by `beta`.
    pub witnesses: Vec<WindowWitness>,
    /// Grid points whose digits hit the boundary guard.
    pub inconclusive: Vec<Real>,
    pub grid_members: usize,
    pub grid_rejected: usize,
}

/// Scan the window `(N-2, N]`: probe a uniform grid for membership up
/// to `depth` digits, and construct exact members by solving every
/// periodized interior-band word of length `vlen`.
pub fn scan_window(
    spec: &ZeroExpansionSpec,
    n_alphabet: u64,
    grid: usize,
    vlen: usize,
    depth: usize,
    ctx: &PrecisionContext,
) -> Result<WindowScan> {
    if grid < 2 {
        return Err(Error::Precondition("grid must have at least 2 points".into()));
    }
    let mut witnesses = Vec::new();
    let mut inconclusive = Vec::new();
    let mut grid_members = 0usize;
    let mut grid_rejected = 0usize;
    let scale = ctx.scale();
    for i in 1..=grid {
        // beta = (N-2) + 2i/grid, right endpoint included.
        let beta = Real::from_ratio(
            &BigInt::from((n_alphabet - 2) * grid as u64 + 2 * i as u64),
            &BigInt::from(grid as u64),
            scale,
        );
        match window_membership(spec, n_alphabet, &beta, depth, ctx)? {
            Membership::Member(w) => {
                grid_members += 1;
                witnesses.push(*w);
            }
            Membership::NotMember { .. } => grid_rejected += 1,
            Membership::Inconclusive { .. } => inconclusive.push(beta),
        }
    }
    if vlen > 0 {
        for word in band_words(n_alphabet, vlen) {
            let mut v_word = vec![n_alphabet - 1];
            let _ = &word;
            let v = DigitSeq::new(v_word.drain(..).collect(), word, n_alphabet)?;
            let point = solve_beta(spec, &v, n_alphabet, depth.min(100), ctx)?;
            let phi = phi_exact(&v, n_alphabet, ctx)?;
            let witness = WindowWitness {
                n_alphabet,
                beta: point.beta().clone(),
                alpha: point.alpha().clone(),
                v_prefix: v.prefix(depth),
                depth,
                phi,
                phi_tail: Real::zero(scale),
                exact: true,
                v_seq: Some(v),
            };
            debug_assert!(witness_in_window(&witness, spec, ctx));
            witnesses.push(witness);
        }
    }
    witnesses.sort_by(|a, b| a.beta.cmp(&b.beta));
    Ok(WindowScan { witnesses, inconclusive, grid_members, grid_rejected })
}

/// Empirical Lipschitz data for `phi` over a witness sample, compared
/// against the separation-chain bound `N^2 (2 + 2 sup|alpha'|) /
/// min Delta_N`, with `sup |alpha'|` taken over the whole window in
/// place of the (uncomputable) mean-value point.
#[derive(Clone, Debug)]
pub struct LipschitzReport {
    pub pairs: usize,
    /// Pairs skipped because their `beta` values coincide within tolerance.
    pub skipped: usize,
    pub max_ratio: Option<Real>,
    pub min_delta: Option<Real>,
    pub sup_alpha_deriv: Real,
    /// The diagonal floor `C_N`.
    pub separation_floor: Real,
    /// Finite whenever `min_delta > 0`.
    pub bound: Option<Real>,
}

pub fn lipschitz_ratio_report(
    witnesses: &[WindowWitness],
    spec: &ZeroExpansionSpec,
    ctx: &PrecisionContext,
) -> Result<LipschitzReport> {
    if witnesses.len() < 2 {
        return Err(Error::Precondition("need at least 2 witnesses".into()));
    }
    let n_alphabet = witnesses[0].n_alphabet;
    if witnesses.iter().any(|w| w.n_alphabet != n_alphabet) {
        return Err(Error::Precondition("witnesses mix alphabet sizes".into()));
    }
    let scale = ctx.scale();
    let tol = ctx.abs_tol();
    let mut pairs = 0usize;
    let mut skipped = 0usize;
    let mut max_ratio: Option<Real> = None;
    let mut min_delta: Option<Real> = None;
    for i in 0..witnesses.len() {
        for j in (i + 1)..witnesses.len() {
            let a = &witnesses[i];
            let b = &witnesses[j];
            let d_beta = a.beta.sub(&b.beta).abs();
            if &d_beta <= tol {
                skipped += 1;
                continue;
            }
            pairs += 1;
            let ratio = a.phi.sub(&b.phi).abs().div(&d_beta);
            if max_ratio.as_ref().map_or(true, |m| &ratio > m) {
                max_ratio = Some(ratio);
            }
            let (x, y) = if a.beta <= b.beta { (a, b) } else { (b, a) };
            let delta = delta_separation(spec, n_alphabet, &x.beta, &y.beta, ctx)?;
            if min_delta.as_ref().map_or(true, |m| &delta < m) {
                min_delta = Some(delta);
            }
        }
    }
    let window_lo = Real::from_int(n_alphabet as i64 - 1, scale).sub(&Real::from_ratio_i64(
        spec.max_digit() as i64,
        n_alphabet as i64 - 2,
        scale,
    ));
    let sup_alpha_deriv = alpha_derivative_sup_bound(spec, &window_lo, ctx)?;
    let separation_floor = min_separation_constant(n_alphabet, spec.max_digit(), ctx)?;
    let bound = min_delta.as_ref().and_then(|delta| {
        if delta.is_positive() {
            let n2 = Real::from_int(n_alphabet as i64, scale).pow_u32(2);
            let factor = Real::from_int(2, scale).add(&sup_alpha_deriv.mul_int(2));
            Some(n2.mul(&factor).div(delta))
        } else {
            None
        }
    });
    Ok(LipschitzReport {
        pairs,
        skipped,
        max_ratio,
        min_delta,
        sup_alpha_deriv,
        separation_floor,
        bound,
    })
}
