//! One-sided symbolic dynamics on a finite alphabet: eventually periodic
//! digit sequences, lexicographic order, subshifts pinned between two
//! extremal sequences, language enumeration, topological entropy and the
//! overlap sets that decide the specification property.
//!
//! A subshift here is the set of sequences `x` with
//! `u <= shift^n(x) <= v` for every `n >= 0`, where `u` and `v` are the
//! itineraries of the endpoints of an interval map. Word admissibility,
//! language counts and overlap searches are exact whenever `u` and `v`
//! are eventually periodic; truncated sequences get honest
//! "up to this depth" semantics instead.

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::numerics::{fit_slope, PrecisionContext};

/// Cap on the window used to compare eventually periodic sequences
/// exactly. Two such sequences agreeing on `max(preperiods) +
/// lcm(periods)` symbols are equal; periods large enough to overflow
/// this cap are outside the supported range.
const EXACT_HORIZON_CAP: usize = 1 << 20;

/// A one-sided digit sequence: a finite preperiod followed by a
/// repeating period. An empty period denotes a plain finite word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DigitSeq {
    preperiod: Vec<u64>,
    period: Vec<u64>,
    alphabet_size: u64,
}

impl DigitSeq {
    pub fn new(preperiod: Vec<u64>, period: Vec<u64>, alphabet_size: u64) -> Result<Self> {
        if alphabet_size == 0 {
            return Err(Error::Precondition("alphabet_size must be positive".into()));
        }
        if preperiod.is_empty() && period.is_empty() {
            return Err(Error::Precondition("empty digit sequence".into()));
        }
        for &d in preperiod.iter().chain(period.iter()) {
            if d >= alphabet_size {
                return Err(Error::Precondition(format!(
                    "digit {d} outside alphabet of size {alphabet_size}"
                )));
            }
        }
        Ok(DigitSeq { preperiod, period, alphabet_size })
    }

    /// Purely periodic sequence `word^infinity`.
    pub fn periodic(word: &[u64], alphabet_size: u64) -> Result<Self> {
        DigitSeq::new(Vec::new(), word.to_vec(), alphabet_size)
    }

    /// Finite word (no periodic tail).
    pub fn finite(word: &[u64], alphabet_size: u64) -> Result<Self> {
        DigitSeq::new(word.to_vec(), Vec::new(), alphabet_size)
    }

    /// The constant sequence `d^infinity`.
    pub fn constant(d: u64, alphabet_size: u64) -> Result<Self> {
        DigitSeq::periodic(&[d], alphabet_size)
    }

    pub fn alphabet_size(&self) -> u64 {
        self.alphabet_size
    }

    pub fn preperiod(&self) -> &[u64] {
        &self.preperiod
    }

    pub fn period(&self) -> &[u64] {
        &self.period
    }

    pub fn is_infinite(&self) -> bool {
        !self.period.is_empty()
    }

    /// Length when the sequence is a finite word.
    pub fn finite_len(&self) -> Option<usize> {
        if self.is_infinite() {
            None
        } else {
            Some(self.preperiod.len())
        }
    }

    /// Digit at position `i`, `None` past the end of a finite word.
    pub fn get(&self, i: usize) -> Option<u64> {
        if i < self.preperiod.len() {
            Some(self.preperiod[i])
        } else if self.period.is_empty() {
            None
        } else {
            Some(self.period[(i - self.preperiod.len()) % self.period.len()])
        }
    }

    /// First `n` digits (shorter if the word is finite).
    pub fn prefix(&self, n: usize) -> Vec<u64> {
        (0..n).map_while(|i| self.get(i)).collect()
    }

    /// All digits that occur anywhere in the sequence.
    pub fn digit_set(&self) -> std::collections::BTreeSet<u64> {
        self.preperiod.iter().chain(self.period.iter()).copied().collect()
    }

    pub fn max_digit(&self) -> u64 {
        self.digit_set().iter().last().copied().unwrap_or(0)
    }

    /// The shifted sequence (drop the first `n` digits). The preperiod
    /// shrinks and, once exhausted, the period rotates.
    pub fn shift_by(&self, n: usize) -> Result<DigitSeq> {
        if n == 0 {
            return Ok(self.clone());
        }
        if n < self.preperiod.len() {
            return DigitSeq::new(
                self.preperiod[n..].to_vec(),
                self.period.clone(),
                self.alphabet_size,
            );
        }
        if self.period.is_empty() {
            if n > self.preperiod.len() {
                return Err(Error::Length(format!(
                    "cannot shift a word of length {} by {n}",
                    self.preperiod.len()
                )));
            }
            if n == self.preperiod.len() {
                return Err(Error::Length("shift exhausts the finite word".into()));
            }
        }
        let r = (n - self.preperiod.len()) % self.period.len();
        let mut rotated = self.period[r..].to_vec();
        rotated.extend_from_slice(&self.period[..r]);
        DigitSeq::new(Vec::new(), rotated, self.alphabet_size)
    }

    /// Window length after which two eventually periodic sequences that
    /// still agree must be equal.
    fn exact_horizon(&self, other: &DigitSeq) -> usize {
        let pre = self.preperiod.len().max(other.preperiod.len());
        let lcm = if self.period.is_empty() || other.period.is_empty() {
            self.period.len().max(other.period.len()).max(1)
        } else {
            self.period.len().lcm(&other.period.len())
        };
        (pre + lcm + 1).min(EXACT_HORIZON_CAP)
    }

    /// Index of the first differing digit, `None` if the sequences are
    /// equal (decided exactly via periodicity for infinite inputs).
    /// A finite word that runs out while agreeing counts as smaller, and
    /// the difference index is its length.
    pub fn first_difference(&self, other: &DigitSeq) -> Option<(usize, std::cmp::Ordering)> {
        use std::cmp::Ordering;
        let horizon = self.exact_horizon(other);
        for i in 0..horizon {
            match (self.get(i), other.get(i)) {
                (Some(a), Some(b)) => match a.cmp(&b) {
                    Ordering::Equal => continue,
                    ord => return Some((i, ord)),
                },
                (None, None) => return None,
                (None, Some(_)) => return Some((i, Ordering::Less)),
                (Some(_), None) => return Some((i, Ordering::Greater)),
            }
        }
        None
    }

    /// Exact lexicographic comparison of eventually periodic sequences.
    pub fn cmp_exact(&self, other: &DigitSeq) -> std::cmp::Ordering {
        match self.first_difference(other) {
            Some((_, ord)) => ord,
            None => std::cmp::Ordering::Equal,
        }
    }
}

/// Outcome of a horizon-limited lexicographic comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LexOrder {
    Less,
    EqUpToHorizon,
    Greater,
}

/// Compare two sequences digit by digit up to `horizon`. The first
/// differing index decides; agreement throughout is reported as
/// [`LexOrder::EqUpToHorizon`]. A finite word that ends while agreeing
/// precedes any proper extension.
pub fn lex_compare(a: &DigitSeq, b: &DigitSeq, horizon: usize) -> LexOrder {
    for i in 0..horizon {
        match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) if x == y => continue,
            (Some(x), Some(y)) => {
                return if x < y { LexOrder::Less } else { LexOrder::Greater }
            }
            (None, None) => return LexOrder::EqUpToHorizon,
            (None, Some(_)) => return LexOrder::Less,
            (Some(_), None) => return LexOrder::Greater,
        }
    }
    LexOrder::EqUpToHorizon
}

/// Shift applied `n` times; alias for [`DigitSeq::shift_by`].
pub fn shift_by(s: &DigitSeq, n: usize) -> Result<DigitSeq> {
    s.shift_by(n)
}

/// A subshift pinned between two extremal sequences.
#[derive(Clone, Debug)]
pub struct SubshiftSpec {
    pub u: DigitSeq,
    pub v: DigitSeq,
    pub alphabet_size: u64,
}

impl SubshiftSpec {
    pub fn new(u: DigitSeq, v: DigitSeq) -> Result<Self> {
        if u.alphabet_size() != v.alphabet_size() {
            return Err(Error::Precondition(format!(
                "alphabet mismatch: {} vs {}",
                u.alphabet_size(),
                v.alphabet_size()
            )));
        }
        let alphabet_size = u.alphabet_size();
        Ok(SubshiftSpec { u, v, alphabet_size })
    }

    /// Do `u <= shift^n(u) <= v` and `u <= shift^n(v) <= v` hold for all
    /// `n <= depth`? Comparisons use a horizon past the exact window so
    /// eventually periodic inputs are decided exactly.
    pub fn order_invariants_hold(&self, depth: usize) -> bool {
        use std::cmp::Ordering;
        for seq in [&self.u, &self.v] {
            for n in 0..=depth {
                let shifted = match seq.shift_by(n) {
                    Ok(s) => s,
                    Err(_) => break,
                };
                if self.u.cmp_exact(&shifted) == Ordering::Greater {
                    return false;
                }
                if shifted.cmp_exact(&self.v) == Ordering::Greater {
                    return false;
                }
            }
        }
        true
    }

    /// Degenerate interval: both endpoints coincide.
    pub fn is_degenerate(&self) -> bool {
        self.u.cmp_exact(&self.v) == std::cmp::Ordering::Equal
    }
}

/// Distinct shifted copies of an eventually periodic sequence, with a
/// precomputed order rank so follower-interval bounds can be maximized
/// by table lookup.
struct ShiftTable {
    shifts: Vec<DigitSeq>,
    rank: Vec<usize>,
    pre_len: usize,
    per_len: usize,
}

impl ShiftTable {
    fn build(seq: &DigitSeq) -> Option<ShiftTable> {
        if !seq.is_infinite() {
            return None;
        }
        let pre_len = seq.preperiod().len();
        let per_len = seq.period().len();
        let count = pre_len + per_len;
        let shifts: Vec<DigitSeq> = (0..count)
            .map(|m| seq.shift_by(m).expect("infinite sequences shift freely"))
            .collect();
        let mut rank = vec![0usize; count];
        for i in 0..count {
            rank[i] = (0..count)
                .filter(|&j| shifts[j].cmp_exact(&shifts[i]) == std::cmp::Ordering::Less)
                .count();
        }
        Some(ShiftTable { shifts, rank, pre_len, per_len })
    }

    /// Canonical id of the shift by `m`.
    fn canon(&self, m: usize) -> usize {
        if m < self.pre_len {
            m
        } else {
            self.pre_len + (m - self.pre_len) % self.per_len
        }
    }
}

/// Incremental admissibility checker for words against a subshift.
///
/// The state tracks, for every suffix of the word read so far, whether
/// that suffix is still tied with a prefix of `u` (a pending lower
/// constraint) or of `v` (a pending upper constraint). A digit below a
/// live `u`-tie or above a live `v`-tie kills the word outright; after
/// every step the follower interval is checked for emptiness via the
/// precomputed shift tables.
pub struct LanguageWalker<'a> {
    spec: &'a SubshiftSpec,
    u_table: Option<ShiftTable>,
    v_table: Option<ShiftTable>,
    /// cross[u_id][v_id] = cmp(shift^a u, shift^b v)
    cross: Vec<Vec<std::cmp::Ordering>>,
}

/// Tie depths for the walker; depth `m` means the last `m` symbols of
/// the word equal the first `m` symbols of the bounding sequence.
#[derive(Clone, Debug, Default)]
pub struct WalkState {
    u_ties: Vec<usize>,
    v_ties: Vec<usize>,
}

impl<'a> LanguageWalker<'a> {
    pub fn new(spec: &'a SubshiftSpec) -> Self {
        let u_table = ShiftTable::build(&spec.u);
        let v_table = ShiftTable::build(&spec.v);
        let cross = match (&u_table, &v_table) {
            (Some(ut), Some(vt)) => ut
                .shifts
                .iter()
                .map(|su| vt.shifts.iter().map(|sv| su.cmp_exact(sv)).collect())
                .collect(),
            _ => Vec::new(),
        };
        LanguageWalker { spec, u_table, v_table, cross }
    }

    pub fn initial(&self) -> WalkState {
        WalkState::default()
    }

    /// Extend by one digit. `None` means no sequence in the subshift
    /// starts with the extended word.
    pub fn step(&self, state: &WalkState, digit: u64) -> Option<WalkState> {
        if digit >= self.spec.alphabet_size {
            return None;
        }
        let mut next = WalkState::default();
        // Lower bound u: suffix must not drop below a prefix of u.
        for &m in state.u_ties.iter().chain(std::iter::once(&0usize)) {
            match self.spec.u.get(m) {
                Some(um) if digit < um => return None,
                Some(um) if digit == um => next.u_ties.push(m + 1),
                _ => {}
            }
        }
        // Upper bound v: suffix must not rise above a prefix of v.
        for &m in state.v_ties.iter().chain(std::iter::once(&0usize)) {
            match self.spec.v.get(m) {
                Some(vm) if digit > vm => return None,
                Some(vm) if digit == vm => next.v_ties.push(m + 1),
                _ => {}
            }
        }
        if !self.follower_interval_nonempty(&next) {
            return None;
        }
        Some(next)
    }

    /// Is there an admissible tail meeting every pending constraint?
    /// The best candidate is the largest pending lower bound (a shift of
    /// `u`, itself inside the shift); the interval is nonempty iff that
    /// candidate does not exceed any pending upper bound.
    fn follower_interval_nonempty(&self, state: &WalkState) -> bool {
        let (ut, vt) = match (&self.u_table, &self.v_table) {
            (Some(ut), Some(vt)) => (ut, vt),
            // Truncated endpoint data: no exact table, stay permissive.
            _ => return true,
        };
        let mut best = ut.canon(0);
        for &m in &state.u_ties {
            let id = ut.canon(m);
            if ut.rank[id] > ut.rank[best] {
                best = id;
            }
        }
        let mut uppers = vec![vt.canon(0)];
        uppers.extend(state.v_ties.iter().map(|&m| vt.canon(m)));
        uppers
            .into_iter()
            .all(|vid| self.cross[best][vid] != std::cmp::Ordering::Greater)
    }
}

/// Is the cylinder of `w` nonempty in the subshift?
pub fn is_admissible_word(w: &[u64], spec: &SubshiftSpec) -> bool {
    let walker = LanguageWalker::new(spec);
    let mut state = walker.initial();
    for &d in w {
        match walker.step(&state, d) {
            Some(next) => state = next,
            None => return false,
        }
    }
    true
}

/// Number of admissible words of each length `1..=max_len`, by
/// depth-first extension. Aborts with a resource error once more than
/// `budget` words have been visited.
pub fn count_language(spec: &SubshiftSpec, max_len: usize, budget: u64) -> Result<Vec<u64>> {
    let walker = LanguageWalker::new(spec);
    let mut counts = vec![0u64; max_len];
    let mut visited = 0u64;
    let mut stack: Vec<(WalkState, usize)> = vec![(walker.initial(), 0)];
    while let Some((state, depth)) = stack.pop() {
        for d in 0..spec.alphabet_size {
            if let Some(next) = walker.step(&state, d) {
                visited += 1;
                if visited > budget {
                    return Err(Error::Resource(format!(
                        "language enumeration exceeded {budget} words"
                    )));
                }
                counts[depth] += 1;
                if depth + 1 < max_len {
                    stack.push((next, depth + 1));
                }
            }
        }
    }
    Ok(counts)
}

/// Topological entropy estimate: least-squares slope of `ln #L_n`
/// against `n` over `1..=max_len`, with its standard error.
pub fn entropy_estimate(
    spec: &SubshiftSpec,
    max_len: usize,
    budget: u64,
    _ctx: &PrecisionContext,
) -> Result<(f64, f64)> {
    let counts = count_language(spec, max_len, budget)?;
    let points: Vec<(f64, f64)> = counts
        .iter()
        .enumerate()
        .take_while(|(_, &c)| c > 0)
        .map(|(i, &c)| ((i + 1) as f64, (c as f64).ln()))
        .collect();
    fit_slope(&points)
}

/// Verdict of an overlap search at finite depth.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OverlapVerdict {
    EmptyUpToDepth,
    BoundedUpToDepth(usize),
    GrowingUpToDepth,
}

/// Exact classification available when both sequences are eventually
/// periodic: the overlap set is then decidable in full.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExactOverlap {
    Empty,
    Bounded { max: usize },
    Unbounded,
}

/// Report of the overlap set `{n : target[0..=n] occurs in source}`.
#[derive(Clone, Debug)]
pub struct OverlapReport {
    /// All found `n`, sorted. The set is downward closed: a length-(n+1)
    /// occurrence witnesses every shorter prefix at the same offset.
    pub found: Vec<usize>,
    pub depth_n: usize,
    pub depth_j: usize,
    pub search_start: usize,
    pub verdict: OverlapVerdict,
    /// Exact classification (offsets unrestricted), when decidable.
    pub exact: Option<ExactOverlap>,
}

/// Longest match of `target[0..]` against `source[j..]`, capped.
fn match_length(target: &DigitSeq, source: &DigitSeq, j: usize, cap: usize) -> usize {
    let mut len = 0;
    while len < cap {
        match (target.get(len), source.get(j + len)) {
            (Some(a), Some(b)) if a == b => len += 1,
            _ => break,
        }
    }
    len
}

/// Search for prefixes of `target` occurring as factors of `source`.
///
/// Each `n <= depth_n` with `(target_0..target_n) = (source_j..source_{j+n})`
/// for some offset `j` in `[start, depth_j]` is collected. When `start`
/// is `None` it defaults to 1 if the two sequences are equal (self
/// search) and 0 otherwise. For eventually periodic inputs the report
/// also carries the exact, depth-free classification.
pub fn overlap_set(
    target: &DigitSeq,
    source: &DigitSeq,
    depth_n: usize,
    depth_j: usize,
    start: Option<usize>,
) -> OverlapReport {
    let self_search = target.cmp_exact(source) == std::cmp::Ordering::Equal;
    let search_start = start.unwrap_or(usize::from(self_search));
    let cap = depth_n + 1;
    let mut max_len = 0usize;
    for j in search_start..=depth_j {
        let len = match_length(target, source, j, cap);
        if len > max_len {
            max_len = len;
            if max_len >= cap {
                break;
            }
        }
    }
    let found: Vec<usize> = (0..max_len.min(cap)).collect();
    let verdict = if found.is_empty() {
        OverlapVerdict::EmptyUpToDepth
    } else if max_len >= cap {
        OverlapVerdict::GrowingUpToDepth
    } else {
        OverlapVerdict::BoundedUpToDepth(max_len - 1)
    };
    let exact = exact_overlap(target, source, search_start);
    OverlapReport {
        found,
        depth_n,
        depth_j,
        search_start,
        verdict,
        exact,
    }
}

/// Depth-free overlap classification for eventually periodic inputs.
/// Offsets at or past the source preperiod repeat modulo its period, so
/// a finite window of offsets covers every possible occurrence, and each
/// match either ends at a computable index or certifies equality of
/// `target` with a shifted source (an unbounded overlap).
fn exact_overlap(target: &DigitSeq, source: &DigitSeq, start: usize) -> Option<ExactOverlap> {
    if !target.is_infinite() || !source.is_infinite() {
        return None;
    }
    let window = source.preperiod().len() + source.period().len();
    let mut max_finite: Option<usize> = None;
    for j in start..window.max(start + 1) {
        let shifted = source.shift_by(j).ok()?;
        match target.first_difference(&shifted) {
            None => return Some(ExactOverlap::Unbounded),
            Some((0, _)) => {}
            Some((idx, _)) => {
                let n = idx - 1;
                if max_finite.map_or(true, |m| n > m) {
                    max_finite = Some(n);
                }
            }
        }
    }
    Some(match max_finite {
        None => ExactOverlap::Empty,
        Some(max) => ExactOverlap::Bounded { max },
    })
}

/// Per-side certificate that an overlap set is finite.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SideCertificate {
    /// The leading digit of the searched prefix never occurs in the
    /// source, so the overlap set is empty outright.
    DigitDisjoint,
    /// Eventually periodic search window exhausted; the set is exactly
    /// empty or exactly bounded.
    PeriodicExact { max: Option<usize> },
}

/// Decision for the specification property.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpecVerdict {
    /// Both overlap sets certified finite.
    Yes { certificate: String },
    /// At least one overlap set keeps growing to the examined depth
    /// (with `certified` set, the set is provably unbounded).
    LikelyNo { du_growing: bool, dv_growing: bool, certified: bool },
    /// Bounded up to depth but no structural certificate.
    Inconclusive,
}

/// Full output of the specification check.
#[derive(Clone, Debug)]
pub struct SpecificationReport {
    /// Overlap of the upper endpoint's prefixes inside `u`.
    pub du: OverlapReport,
    /// Overlap of the lower endpoint's prefixes inside `v`.
    pub dv: OverlapReport,
    pub du_certificate: Option<SideCertificate>,
    pub dv_certificate: Option<SideCertificate>,
    pub verdict: SpecVerdict,
    /// The boundedness criterion is established for expanding slopes
    /// greater than 2; set when the caller's slope does not qualify.
    pub applicability_flag: bool,
    /// `u` and `v` coincide (single-orbit shift).
    pub degenerate: bool,
}

fn side_certificate(target: &DigitSeq, source: &DigitSeq, report: &OverlapReport) -> Option<SideCertificate> {
    if let Some(first) = target.get(0) {
        if source.is_infinite() && !source.digit_set().contains(&first) {
            return Some(SideCertificate::DigitDisjoint);
        }
    }
    match report.exact {
        Some(ExactOverlap::Empty) => Some(SideCertificate::PeriodicExact { max: None }),
        Some(ExactOverlap::Bounded { max }) => {
            Some(SideCertificate::PeriodicExact { max: Some(max) })
        }
        _ => None,
    }
}

/// Decide the specification property by boundedness of the two overlap
/// sets. `Yes` requires a certificate on both sides (digit-disjoint or
/// periodic-exact); a growing overlap yields `LikelyNo`, flagged as
/// certified when periodicity proves the set unbounded.
pub fn has_specification(
    spec: &SubshiftSpec,
    depth_n: usize,
    depth_j: usize,
    beta_hint: Option<f64>,
) -> SpecificationReport {
    let du = overlap_set(&spec.v, &spec.u, depth_n, depth_j, None);
    let dv = overlap_set(&spec.u, &spec.v, depth_n, depth_j, None);
    let du_cert = side_certificate(&spec.v, &spec.u, &du);
    let dv_cert = side_certificate(&spec.u, &spec.v, &dv);
    let du_unbounded = du.exact == Some(ExactOverlap::Unbounded);
    let dv_unbounded = dv.exact == Some(ExactOverlap::Unbounded);
    let du_growing = du.verdict == OverlapVerdict::GrowingUpToDepth || du_unbounded;
    let dv_growing = dv.verdict == OverlapVerdict::GrowingUpToDepth || dv_unbounded;

    let verdict = if du_unbounded || dv_unbounded || du_growing || dv_growing {
        SpecVerdict::LikelyNo {
            du_growing,
            dv_growing,
            certified: du_unbounded || dv_unbounded,
        }
    } else if let (Some(cu), Some(cv)) = (&du_cert, &dv_cert) {
        let kind = if matches!(cu, SideCertificate::DigitDisjoint)
            && matches!(cv, SideCertificate::DigitDisjoint)
        {
            "digit-disjoint"
        } else {
            "periodic-exact"
        };
        SpecVerdict::Yes { certificate: kind.to_string() }
    } else {
        SpecVerdict::Inconclusive
    };

    SpecificationReport {
        du,
        dv,
        du_certificate: du_cert,
        dv_certificate: dv_cert,
        verdict,
        applicability_flag: beta_hint.map_or(false, |b| b <= 2.0),
        degenerate: spec.is_degenerate(),
    }
}
