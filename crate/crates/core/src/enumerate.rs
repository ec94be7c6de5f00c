//! Exhaustive analysis over all `2^n` assignments.
//!
//! Models are first rewritten as QUBOs and scaled to integer coefficients over
//! a common denominator. Assignments are then visited in Gray-code order so
//! each step costs `O(n)` integer additions. Every reported energy is turned
//! back into an exact [`Rational`].
//!
//! The assignment space is cut into chunks by the high bits and chunks are
//! handed to worker threads. Per-chunk results are merged with exact
//! comparisons and lexicographic tie-breaking, so the output does not depend
//! on the worker count.

use std::sync::atomic::{AtomicUsize, Ordering};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::bits::{lex_key, Bitstring};
use crate::model::{PenaltyModel, Qubo};
use crate::rational::Rational;

/// Largest variable count accepted by the exhaustive routines.
pub const ENUMERATION_LIMIT: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumerationError {
    #[error("{n} variables exceeds the enumeration limit of {ENUMERATION_LIMIT}")]
    Capacity { n: usize },
    #[error("target weight {r} outside 0..={n}")]
    Weight { r: usize, n: usize },
    #[error("model is constant, so it has no energy gap")]
    NoGap,
}

pub fn default_workers() -> usize {
    std::thread::available_parallelism()
        .map(|p| p.get())
        .unwrap_or(1)
}

/// Integer accumulator used by the scan.
trait Acc: Clone + Ord + Send + Sync + 'static {
    fn add(&mut self, other: &Self);
    fn sub(&mut self, other: &Self);
    fn to_big(&self) -> BigInt;
    fn from_big(value: BigInt) -> Self;
}

impl Acc for i128 {
    fn add(&mut self, other: &Self) {
        *self += *other;
    }
    fn sub(&mut self, other: &Self) {
        *self -= *other;
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn from_big(value: BigInt) -> Self {
        value
            .to_i128()
            .expect("value fits the narrowed accumulator")
    }
}

impl Acc for BigInt {
    fn add(&mut self, other: &Self) {
        *self += other;
    }
    fn sub(&mut self, other: &Self) {
        *self -= other;
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn from_big(value: BigInt) -> Self {
        value
    }
}

/// QUBO scaled by `denom` so every coefficient is an integer.
struct ScaledQubo<T> {
    n: usize,
    denom: BigInt,
    offset: T,
    linear: Vec<T>,
    /// Dense symmetric `n x n` with a zero diagonal.
    quad: Vec<T>,
}

struct ScaledBig {
    n: usize,
    denom: BigInt,
    offset: BigInt,
    linear: Vec<BigInt>,
    quad: Vec<BigInt>,
}

impl ScaledBig {
    fn new(q: &Qubo) -> Self {
        let n = q.n();
        let all = std::iter::once(q.offset())
            .chain(q.linear().iter())
            .chain(q.quadratic().values());
        let denom = all.fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let scale = |c: &Rational| c.numer() * (&denom / c.denom());
        let mut quad = vec![<BigInt as Zero>::zero(); n * n];
        for (&(j, k), c) in q.quadratic() {
            let v = scale(c);
            quad[j * n + k] = v.clone();
            quad[k * n + j] = v;
        }
        ScaledBig {
            n,
            offset: scale(q.offset()),
            linear: q.linear().iter().map(scale).collect(),
            quad,
            denom,
        }
    }

    /// Narrows to `i128` when no partial sum can overflow.
    fn narrow(&self) -> Option<ScaledQubo<i128>> {
        let total: BigInt = std::iter::once(&self.offset)
            .chain(self.linear.iter())
            .chain(self.quad.iter())
            .map(|v| v.abs())
            .sum();
        if total >= BigInt::one() << 120 {
            return None;
        }
        let conv = |v: &BigInt| v.to_i128().expect("bounded above");
        Some(ScaledQubo {
            n: self.n,
            denom: self.denom.clone(),
            offset: conv(&self.offset),
            linear: self.linear.iter().map(conv).collect(),
            quad: self.quad.iter().map(conv).collect(),
        })
    }

    fn into_wide(self) -> ScaledQubo<BigInt> {
        ScaledQubo {
            n: self.n,
            denom: self.denom,
            offset: self.offset,
            linear: self.linear,
            quad: self.quad,
        }
    }
}

impl<T: Acc> ScaledQubo<T> {
    fn rational(&self, value: &T) -> Rational {
        Rational::from_bigints(value.to_big(), self.denom.clone()).expect("positive denominator")
    }
}

/// Per-chunk accumulator for a scan.
trait ScanState<T>: Send {
    fn visit(&mut self, mask: u64, weight: u32, value: &T);
    fn merge(&mut self, other: Self);
}

fn chunk_bits(n: usize) -> usize {
    if n > 12 {
        (n - 10).min(8)
    } else {
        0
    }
}

fn scan_chunk<T: Acc, S: ScanState<T>>(
    form: &ScaledQubo<T>,
    low: usize,
    chunk: u64,
    state: &mut S,
) {
    let n = form.n;
    let mut mask = chunk << low;
    let mut value = form.offset.clone();
    let mut field = form.linear.clone();
    for j in 0..n {
        if mask >> j & 1 == 1 {
            value.add(&field[j]);
            for (f, q) in field.iter_mut().zip(&form.quad[j * n..(j + 1) * n]) {
                f.add(q);
            }
        }
    }
    let mut weight = mask.count_ones();
    state.visit(mask, weight, &value);
    for i in 1u64..(1u64 << low) {
        let j = i.trailing_zeros() as usize;
        let row = &form.quad[j * n..(j + 1) * n];
        if mask >> j & 1 == 0 {
            value.add(&field[j]);
            for (f, c) in field.iter_mut().zip(row) {
                f.add(c);
            }
            weight += 1;
        } else {
            value.sub(&field[j]);
            for (f, c) in field.iter_mut().zip(row) {
                f.sub(c);
            }
            weight -= 1;
        }
        mask ^= 1u64 << j;
        state.visit(mask, weight, &value);
    }
}

fn scan<T, S, F>(form: &ScaledQubo<T>, workers: usize, make: F) -> S
where
    T: Acc,
    S: ScanState<T>,
    F: Fn() -> S + Sync,
{
    let high = chunk_bits(form.n);
    let low = form.n - high;
    let chunks = 1usize << high;
    let workers = workers.clamp(1, chunks);
    if workers == 1 {
        let mut state = make();
        for c in 0..chunks {
            scan_chunk(form, low, c as u64, &mut state);
        }
        return state;
    }
    let next = AtomicUsize::new(0);
    let partials: Vec<S> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|_| {
                scope.spawn(|| {
                    let mut state = make();
                    loop {
                        let c = next.fetch_add(1, Ordering::Relaxed);
                        if c >= chunks {
                            break;
                        }
                        scan_chunk(form, low, c as u64, &mut state);
                    }
                    state
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("scan worker panicked"))
            .collect()
    });
    let mut iter = partials.into_iter();
    let mut merged = iter.next().expect("at least one worker");
    for part in iter {
        merged.merge(part);
    }
    merged
}

/// Runs `f` on the narrowest exact integer form of the model.
macro_rules! with_scaled {
    ($model:expr, |$form:ident| $body:expr) => {{
        let qubo = $model.to_qubo();
        if qubo.n() > ENUMERATION_LIMIT {
            return Err(EnumerationError::Capacity { n: qubo.n() });
        }
        let big = ScaledBig::new(&qubo);
        match big.narrow() {
            Some($form) => $body,
            None => {
                let $form = big.into_wide();
                $body
            }
        }
    }};
}

#[derive(Clone)]
struct ClassBest<T> {
    min: T,
    min_key: u64,
    min_mask: u64,
    min_count: u64,
    max: T,
}

struct ProfileState<T> {
    n: usize,
    classes: Vec<Option<ClassBest<T>>>,
}

impl<T: Acc> ScanState<T> for ProfileState<T> {
    fn visit(&mut self, mask: u64, weight: u32, value: &T) {
        let slot = &mut self.classes[weight as usize];
        match slot {
            None => {
                *slot = Some(ClassBest {
                    min: value.clone(),
                    min_key: lex_key(self.n, mask),
                    min_mask: mask,
                    min_count: 1,
                    max: value.clone(),
                })
            }
            Some(best) => {
                match value.cmp(&best.min) {
                    std::cmp::Ordering::Less => {
                        best.min = value.clone();
                        best.min_key = lex_key(self.n, mask);
                        best.min_mask = mask;
                        best.min_count = 1;
                    }
                    std::cmp::Ordering::Equal => {
                        best.min_count += 1;
                        let key = lex_key(self.n, mask);
                        if key < best.min_key {
                            best.min_key = key;
                            best.min_mask = mask;
                        }
                    }
                    std::cmp::Ordering::Greater => {}
                }
                if *value > best.max {
                    best.max = value.clone();
                }
            }
        }
    }

    fn merge(&mut self, other: Self) {
        for (mine, theirs) in self.classes.iter_mut().zip(other.classes) {
            let Some(theirs) = theirs else { continue };
            match mine {
                None => *mine = Some(theirs),
                Some(best) => {
                    match theirs.min.cmp(&best.min) {
                        std::cmp::Ordering::Less => {
                            best.min = theirs.min;
                            best.min_key = theirs.min_key;
                            best.min_mask = theirs.min_mask;
                            best.min_count = theirs.min_count;
                        }
                        std::cmp::Ordering::Equal => {
                            best.min_count += theirs.min_count;
                            if theirs.min_key < best.min_key {
                                best.min_key = theirs.min_key;
                                best.min_mask = theirs.min_mask;
                            }
                        }
                        std::cmp::Ordering::Greater => {}
                    }
                    if theirs.max > best.max {
                        best.max = theirs.max;
                    }
                }
            }
        }
    }
}

/// Exact per-weight minima of a model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightProfile {
    pub n: usize,
    /// Entry `w` is the minimum value over strings of weight `w`.
    pub minima: Vec<Rational>,
    /// Lexicographically smallest minimizer of each weight class.
    pub witnesses: Vec<Bitstring>,
    /// How many strings of each weight attain the class minimum.
    pub minimizer_counts: Vec<u64>,
    /// Entry `w` is the maximum value over strings of weight `w`.
    pub maxima: Vec<Rational>,
}

impl WeightProfile {
    pub fn global_minimum(&self) -> &Rational {
        self.minima.iter().min().expect("profile is never empty")
    }

    /// True when every string of weight `w` has value exactly `value`.
    pub fn class_is_constant(&self, w: usize, value: &Rational) -> bool {
        &self.minima[w] == value && &self.maxima[w] == value
    }
}

/// Minimum of the model over each Hamming-weight class.
pub fn weight_profile<M: PenaltyModel>(
    model: &M,
    workers: usize,
) -> Result<WeightProfile, EnumerationError> {
    with_scaled!(model, |form| Ok(profile_of(&form, workers)))
}

fn profile_of<T: Acc>(form: &ScaledQubo<T>, workers: usize) -> WeightProfile {
    let n = form.n;
    let state = scan(form, workers, || ProfileState::<T> {
        n,
        classes: vec![None; n + 1],
    });
    let mut profile = WeightProfile {
        n,
        minima: Vec::with_capacity(n + 1),
        witnesses: Vec::with_capacity(n + 1),
        minimizer_counts: Vec::with_capacity(n + 1),
        maxima: Vec::with_capacity(n + 1),
    };
    for best in state.classes {
        let best = best.expect("every weight class is visited");
        profile.minima.push(form.rational(&best.min));
        profile
            .witnesses
            .push(Bitstring::from_mask_unchecked(n, best.min_mask));
        profile.minimizer_counts.push(best.min_count);
        profile.maxima.push(form.rational(&best.max));
    }
    profile
}

/// Outcome of checking a model as a penalty for the weight-`r` class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PenaltyReport {
    pub target_weight: usize,
    /// Minimum value over the weight-`r` class.
    pub ground_energy: Rational,
    /// Number of strings, of any weight, whose value equals `ground_energy`.
    pub ground_set_size: u64,
    /// Minimum over other weights minus `ground_energy`.
    pub gap: Rational,
    /// Lexicographically smallest string of weight != r attaining the gap.
    #[serde(serialize_with = "serialize_display")]
    pub witness: Bitstring,
    /// The zero set of `value - ground_energy` is exactly the weight-`r` class.
    pub exact_penalty: bool,
}

fn serialize_display<S: serde::Serializer>(
    value: &Bitstring,
    serializer: S,
) -> Result<S::Ok, S::Error> {
    serializer.collect_str(value)
}

pub(crate) fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

pub fn min_penalty<M: PenaltyModel>(
    model: &M,
    r: usize,
) -> Result<PenaltyReport, EnumerationError> {
    min_penalty_with(model, r, default_workers())
}

pub fn min_penalty_with<M: PenaltyModel>(
    model: &M,
    r: usize,
    workers: usize,
) -> Result<PenaltyReport, EnumerationError> {
    let n = model.coefficients().n();
    if r > n {
        return Err(EnumerationError::Weight { r, n });
    }
    with_scaled!(model, |form| Ok(report_of(&form, r, workers)))
}

fn report_of<T: Acc>(form: &ScaledQubo<T>, r: usize, workers: usize) -> PenaltyReport {
    let n = form.n;
    let profile = profile_of(form, workers);
    let ground = profile.minima[r].clone();
    let (witness_weight, _) = (0..=n)
        .filter(|&w| w != r)
        .map(|w| (w, (&profile.minima[w], profile.witnesses[w])))
        .min_by(|a, b| a.1.cmp(&b.1))
        .expect("n >= 1 leaves another weight class");
    let witness = profile.witnesses[witness_weight];
    let gap = &profile.minima[witness_weight] - &ground;

    let below = (0..=n).any(|w| w != r && profile.minima[w] < ground);
    let ground_set_size = if below {
        let target = scaled_value(form, &ground);
        count_equal(form, &target, workers)
    } else {
        (0..=n)
            .filter(|&w| profile.minima[w] == ground)
            .map(|w| profile.minimizer_counts[w])
            .sum()
    };
    let whole_class = profile.minimizer_counts[r] == binomial(n, r);
    PenaltyReport {
        target_weight: r,
        exact_penalty: whole_class && gap.is_positive(),
        ground_energy: ground,
        ground_set_size,
        gap,
        witness,
    }
}

fn scaled_value<T: Acc>(form: &ScaledQubo<T>, value: &Rational) -> T {
    // value is attained by the model, so value * denom is an integer.
    T::from_big(value.numer() * (&form.denom / value.denom()))
}

struct CountEqual<T> {
    target: T,
    count: u64,
}

impl<T: Acc> ScanState<T> for CountEqual<T> {
    fn visit(&mut self, _mask: u64, _weight: u32, value: &T) {
        if *value == self.target {
            self.count += 1;
        }
    }
    fn merge(&mut self, other: Self) {
        self.count += other.count;
    }
}

fn count_equal<T: Acc>(form: &ScaledQubo<T>, target: &T, workers: usize) -> u64 {
    scan(form, workers, || CountEqual {
        target: target.clone(),
        count: 0,
    })
    .count
}

struct LowestTwo<T> {
    lowest: Option<T>,
    second: Option<T>,
}

impl<T: Acc> LowestTwo<T> {
    fn offer(&mut self, value: &T) {
        match &self.lowest {
            None => self.lowest = Some(value.clone()),
            Some(low) if value < low => {
                self.second = self.lowest.replace(value.clone());
            }
            Some(low) if value == low => {}
            Some(_) => match &self.second {
                Some(s) if value >= s => {}
                _ => self.second = Some(value.clone()),
            },
        }
    }
}

impl<T: Acc> ScanState<T> for LowestTwo<T> {
    fn visit(&mut self, _mask: u64, _weight: u32, value: &T) {
        self.offer(value);
    }
    fn merge(&mut self, other: Self) {
        if let Some(v) = other.lowest {
            self.offer(&v);
        }
        if let Some(v) = other.second {
            self.offer(&v);
        }
    }
}

/// Difference between the two lowest distinct energies over all assignments.
pub fn spectral_gap<M: PenaltyModel>(model: &M) -> Result<Rational, EnumerationError> {
    spectral_gap_with(model, default_workers())
}

pub fn spectral_gap_with<M: PenaltyModel>(
    model: &M,
    workers: usize,
) -> Result<Rational, EnumerationError> {
    with_scaled!(model, |form| {
        let state = scan(&form, workers, || LowestTwo::<_> {
            lowest: None,
            second: None,
        });
        match (state.lowest, state.second) {
            (Some(low), Some(second)) => Ok(&form.rational(&second) - &form.rational(&low)),
            _ => Err(EnumerationError::NoGap),
        }
    })
}

/// Global minimum energy and every assignment attaining it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundSet {
    pub n: usize,
    pub energy: Rational,
    /// Masks of the minimizers in increasing numeric order.
    masks: Vec<u64>,
}

impl GroundSet {
    pub fn len(&self) -> usize {
        self.masks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }

    pub fn contains(&self, x: &Bitstring) -> bool {
        x.len() == self.n && self.masks.binary_search(&x.mask()).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = Bitstring> + '_ {
        self.masks
            .iter()
            .map(move |&m| Bitstring::from_mask_unchecked(self.n, m))
    }
}

struct Minimizers<T> {
    min: Option<T>,
    masks: Vec<u64>,
}

impl<T: Acc> ScanState<T> for Minimizers<T> {
    fn visit(&mut self, mask: u64, _weight: u32, value: &T) {
        match &self.min {
            Some(m) if value > m => {}
            Some(m) if value == m => self.masks.push(mask),
            _ => {
                self.min = Some(value.clone());
                self.masks.clear();
                self.masks.push(mask);
            }
        }
    }
    fn merge(&mut self, other: Self) {
        let Some(theirs) = other.min else { return };
        match &self.min {
            Some(m) if &theirs > m => {}
            Some(m) if &theirs == m => self.masks.extend(other.masks),
            _ => {
                self.min = Some(theirs);
                self.masks = other.masks;
            }
        }
    }
}

pub fn ground_set<M: PenaltyModel>(
    model: &M,
    workers: usize,
) -> Result<GroundSet, EnumerationError> {
    with_scaled!(model, |form| {
        let state = scan(&form, workers, || Minimizers::<_> {
            min: None,
            masks: Vec::new(),
        });
        let mut masks = state.masks;
        masks.sort_unstable();
        Ok(GroundSet {
            n: form.n,
            energy: form.rational(&state.min.expect("at least one assignment")),
            masks,
        })
    })
}
