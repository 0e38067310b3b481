//! Admissibility of deletion sets, exhaustive classification by `|det C|`,
//! D-optimal search and the determinant spectrum of small sign matrices.
//!
//! Determinants are evaluated on whichever block is smaller: `C` (order d)
//! when `d <= n`, otherwise `D` (order n), with the other recovered through
//! `|det D| = N^((n-d)/2) |det C|`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::factorial::{sign_bits, Effect, ModelSpec, Run};
use crate::linalg::{det_i64, det_in_place_i64, rank_i64};
use crate::partition::{abs_det_c_from_d, abs_det_d_from_c, make_partition};

/// Default ceiling on the number of subsets an exhaustive search may visit.
pub const DEFAULT_SUBSET_CAP: u128 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMethod {
    Exhaustive,
    Exchange,
}

/// How a report's optimality information was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportMethod {
    /// Single deletion set evaluated on its own.
    Check,
    Exhaustive,
    Exchange,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub method: SearchMethod,
    pub subset_cap: u128,
    /// Run an exhaustive search even above `subset_cap`.
    pub force: bool,
    pub restarts: usize,
    pub max_iters: usize,
    pub seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            method: SearchMethod::Exhaustive,
            subset_cap: DEFAULT_SUBSET_CAP,
            force: false,
            restarts: 20,
            max_iters: 1000,
            seed: 0,
        }
    }
}

impl SearchConfig {
    pub fn exchange(seed: u64) -> Self {
        Self { method: SearchMethod::Exchange, seed, ..Self::default() }
    }

    fn validate(&self) -> Result<()> {
        if self.subset_cap == 0 || self.restarts == 0 || self.max_iters == 0 {
            return Err(Error::Invalid("search caps must be positive".into()));
        }
        Ok(())
    }
}

/// Evaluation of one deletion set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DesignReport {
    pub k: u32,
    pub n: usize,
    pub d: usize,
    pub negligible: Vec<Effect>,
    pub deleted: Vec<Run>,
    pub kept: Vec<Run>,
    pub admissible: bool,
    pub abs_det_c: BigInt,
    pub abs_det_d: BigInt,
    /// `|det C| / max |det C|` when a reference maximum is known.
    pub efficiency_ratio: Option<BigRational>,
    pub optimal: bool,
    pub method: ReportMethod,
    /// True when the reference maximum came from an exhaustive search.
    pub certified: bool,
}

impl DesignReport {
    /// Fills in efficiency and optimality against a reference maximum.
    pub fn with_reference(mut self, max_abs_det_c: &BigInt, method: ReportMethod, certified: bool) -> Self {
        if !max_abs_det_c.is_zero() {
            self.efficiency_ratio = Some(BigRational::new(self.abs_det_c.clone(), max_abs_det_c.clone()));
        }
        self.optimal = self.admissible && &self.abs_det_c == max_abs_det_c;
        self.method = method;
        self.certified = certified;
        self
    }

    /// Deleted-run labels sorted lexicographically; the tie-break key.
    pub fn sort_key(&self) -> Vec<String> {
        label_key(&self.deleted)
    }
}

fn label_key(runs: &[Run]) -> Vec<String> {
    let mut labels: Vec<String> = runs.iter().map(ToString::to_string).collect();
    labels.sort();
    labels
}

/// Precomputed masks for fast block determinants.
struct Evaluator {
    k: u32,
    runs: usize,
    neg: Vec<u16>,
    nonneg: Vec<u16>,
}

impl Evaluator {
    fn new(spec: &ModelSpec) -> Self {
        Self {
            k: spec.k(),
            runs: spec.runs(),
            neg: spec.negligible().iter().map(Effect::mask).collect(),
            nonneg: spec.nonneg().iter().map(Effect::mask).collect(),
        }
    }

    fn n(&self) -> usize {
        self.nonneg.len()
    }

    fn d(&self) -> usize {
        self.neg.len()
    }

    /// The smaller of the C and D blocks as `i64` entries, and whether it is C.
    fn small_block(&self, deleted: &[u16]) -> (Vec<i64>, usize, bool) {
        if self.d() <= self.n() {
            let mut a = Vec::with_capacity(self.d() * self.d());
            for &r in deleted {
                a.extend(self.neg.iter().map(|&e| sign_bits(r, e)));
            }
            (a, self.d(), true)
        } else {
            let gone: BTreeSet<u16> = deleted.iter().copied().collect();
            let mut a = Vec::with_capacity(self.n() * self.n());
            for r in (0..self.runs as u16).filter(|r| !gone.contains(r)) {
                a.extend(self.nonneg.iter().map(|&e| sign_bits(r, e)));
            }
            (a, self.n(), false)
        }
    }

    fn abs_det_c(&self, deleted: &[u16]) -> BigInt {
        let (a, order, is_c) = self.small_block(deleted);
        let det = det_i64(&a, order).abs();
        if is_c {
            det
        } else {
            abs_det_c_from_d(self.runs, self.n(), &det)
        }
    }

    /// `(|det C|, rank of the evaluated block)`; the rank orders singular sets.
    fn score(&self, deleted: &[u16]) -> (BigInt, usize) {
        let (a, order, _) = self.small_block(deleted);
        let rank = rank_i64(&a, order, order);
        (self.abs_det_c(deleted), rank)
    }

    fn runs_of(&self, masks: &[u16]) -> Vec<Run> {
        masks.iter().map(|&m| Run::new(self.k, m).expect("valid mask")).collect()
    }
}

fn report_from(spec: &ModelSpec, eval: &Evaluator, deleted: &[u16], abs_det_c: BigInt) -> DesignReport {
    let gone: BTreeSet<u16> = deleted.iter().copied().collect();
    let kept: Vec<u16> = (0..eval.runs as u16).filter(|r| !gone.contains(r)).collect();
    let mut deleted_sorted: Vec<u16> = gone.into_iter().collect();
    deleted_sorted.sort_unstable();
    DesignReport {
        k: spec.k(),
        n: spec.n(),
        d: spec.d(),
        negligible: spec.negligible().to_vec(),
        deleted: eval.runs_of(&deleted_sorted),
        kept: eval.runs_of(&kept),
        admissible: !abs_det_c.is_zero(),
        abs_det_d: abs_det_d_from_c(eval.runs, spec.n(), &abs_det_c),
        abs_det_c,
        efficiency_ratio: None,
        optimal: false,
        method: ReportMethod::Check,
        certified: false,
    }
}

/// Evaluates one deletion set exactly.
pub fn is_admissible(spec: &ModelSpec, deleted: &[Run]) -> Result<DesignReport> {
    // Validates size, duplicates and k.
    let p = make_partition(spec, deleted)?;
    let eval = Evaluator::new(spec);
    let masks: Vec<u16> = p.deleted().iter().map(Run::mask).collect();
    let abs_det_c = eval.abs_det_c(&masks);
    Ok(report_from(spec, &eval, &masks, abs_det_c))
}

/// `C(n, r)` without overflow for the sizes in scope (n <= 1024).
pub fn binomial(n: usize, r: usize) -> u128 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        // acc * (n - i) / (i + 1) stays integral at every step.
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// The `rank`-th r-subset of `0..n` in lexicographic order.
fn unrank_combination(n: usize, r: usize, mut rank: u128) -> Vec<u16> {
    let mut out = Vec::with_capacity(r);
    let mut next = 0usize;
    for slot in 0..r {
        loop {
            let remaining = binomial(n - next - 1, r - slot - 1);
            if rank < remaining {
                out.push(next as u16);
                next += 1;
                break;
            }
            rank -= remaining;
            next += 1;
        }
    }
    out
}

/// Advances to the next r-subset of `0..n`; false once exhausted.
fn next_combination(c: &mut [u16], n: usize) -> bool {
    let r = c.len();
    let mut i = r;
    while i > 0 {
        i -= 1;
        if usize::from(c[i]) < n - r + i {
            c[i] += 1;
            for j in i + 1..r {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Visits every d-subset of runs, in parallel over contiguous rank ranges.
/// `visit` folds one chunk; the per-chunk results come back in chunk order.
fn for_each_subset<T, F>(runs: usize, d: usize, visit: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut dyn Iterator<Item = Vec<u16>>) -> T + Sync,
{
    let total = binomial(runs, d);
    let chunks = total.clamp(1, 1024);
    let chunk_len = total.div_ceil(chunks);
    let run_chunk = |c: u128| -> T {
        let start = c * chunk_len;
        let end = (start + chunk_len).min(total);
        let mut current = unrank_combination(runs, d, start.min(total.saturating_sub(1)));
        let mut left = end.saturating_sub(start);
        let mut first = true;
        let mut iter = std::iter::from_fn(|| {
            if left == 0 {
                return None;
            }
            if !first && !next_combination(&mut current, runs) {
                return None;
            }
            first = false;
            left -= 1;
            Some(current.clone())
        });
        visit(&mut iter)
    };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..chunks).into_par_iter().map(run_chunk).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..chunks).map(run_chunk).collect()
    }
}

fn check_cap(spec: &ModelSpec, config: &SearchConfig) -> Result<u128> {
    config.validate()?;
    let count = binomial(spec.runs(), spec.d());
    if count > config.subset_cap && !config.force {
        return Err(Error::CapExceeded { count, cap: config.subset_cap });
    }
    Ok(count)
}

/// A group of deletion sets sharing the same `|det C|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DetClass {
    pub abs_det_c: BigInt,
    pub abs_det_d: BigInt,
    pub count: u128,
    /// 1 for the largest determinant.
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enumeration {
    pub spec: ModelSpec,
    pub total: u128,
    pub inadmissible: u128,
    /// Admissible classes, largest `|det C|` first.
    pub classes: Vec<DetClass>,
    /// Every admissible deletion set, sorted by deleted-run labels.
    pub designs: Vec<DesignReport>,
}

impl Enumeration {
    pub fn max_abs_det_c(&self) -> BigInt {
        self.classes.first().map_or_else(BigInt::zero, |c| c.abs_det_c.clone())
    }

    pub fn class_rank(&self, abs_det_c: &BigInt) -> Option<usize> {
        self.classes.iter().find(|c| &c.abs_det_c == abs_det_c).map(|c| c.rank)
    }
}

/// Evaluates every deletion set of size d and groups the admissible ones by
/// `|det C|`.
pub fn enumerate_admissible(spec: &ModelSpec, config: &SearchConfig) -> Result<Enumeration> {
    let total = check_cap(spec, config)?;
    let eval = Evaluator::new(spec);
    let chunks = for_each_subset(eval.runs, eval.d(), |subsets| {
        let mut found = Vec::new();
        let mut singular = 0u128;
        for s in subsets {
            let det = eval.abs_det_c(&s);
            if det.is_zero() {
                singular += 1;
            } else {
                found.push((s, det));
            }
        }
        (found, singular)
    });

    let mut inadmissible = 0u128;
    let mut counts: BTreeMap<BigInt, u128> = BTreeMap::new();
    let mut designs = Vec::new();
    for (found, singular) in chunks {
        inadmissible += singular;
        for (s, det) in found {
            *counts.entry(det.clone()).or_default() += 1;
            designs.push(report_from(spec, &eval, &s, det));
        }
    }
    let classes: Vec<DetClass> = counts
        .into_iter()
        .rev()
        .enumerate()
        .map(|(i, (abs_det_c, count))| DetClass {
            abs_det_d: abs_det_d_from_c(eval.runs, eval.n(), &abs_det_c),
            abs_det_c,
            count,
            rank: i + 1,
        })
        .collect();
    let max = classes.first().map_or_else(BigInt::zero, |c| c.abs_det_c.clone());
    let mut keyed: Vec<(Vec<String>, DesignReport)> = designs
        .into_iter()
        .map(|r| (r.sort_key(), r.with_reference(&max, ReportMethod::Exhaustive, true)))
        .collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(Enumeration {
        spec: spec.clone(),
        total,
        inadmissible,
        classes,
        designs: keyed.into_iter().map(|(_, r)| r).collect(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OptimalDesign {
    /// Lexicographically first maximizer.
    pub best: DesignReport,
    /// Every maximizer found, in tie-break order.
    pub optima: Vec<DesignReport>,
    pub certified: bool,
    /// Number of deletion sets evaluated.
    pub evaluated: u128,
}

/// Maximizes `|det C|` over deletion sets. Exhaustive mode certifies the
/// maximum; exchange mode returns the best design it found.
pub fn d_optimal(spec: &ModelSpec, config: &SearchConfig) -> Result<OptimalDesign> {
    match config.method {
        SearchMethod::Exhaustive => d_optimal_exhaustive(spec, config),
        SearchMethod::Exchange => d_optimal_exchange(spec, config),
    }
}

fn d_optimal_exhaustive(spec: &ModelSpec, config: &SearchConfig) -> Result<OptimalDesign> {
    let total = check_cap(spec, config)?;
    let eval = Evaluator::new(spec);
    let chunks = for_each_subset(eval.runs, eval.d(), |subsets| {
        let mut best = BigInt::zero();
        let mut holders: Vec<Vec<u16>> = Vec::new();
        for s in subsets {
            let det = eval.abs_det_c(&s);
            match det.cmp(&best) {
                Ordering::Greater => {
                    best = det;
                    holders = vec![s];
                }
                Ordering::Equal => holders.push(s),
                Ordering::Less => {}
            }
        }
        (best, holders)
    });
    let max = chunks.iter().map(|(b, _)| b.clone()).max().unwrap_or_default();
    let mut optima: Vec<DesignReport> = chunks
        .into_iter()
        .filter(|(b, _)| *b == max)
        .flat_map(|(_, h)| h)
        .map(|s| report_from(spec, &eval, &s, max.clone()))
        .map(|r| r.with_reference(&max, ReportMethod::Exhaustive, true))
        .collect();
    optima.sort_by_key(DesignReport::sort_key);
    Ok(OptimalDesign { best: optima[0].clone(), optima, certified: true, evaluated: total })
}

/// Steepest-ascent single-run exchange with seeded random restarts.
fn d_optimal_exchange(spec: &ModelSpec, config: &SearchConfig) -> Result<OptimalDesign> {
    config.validate()?;
    let eval = Evaluator::new(spec);
    let d = eval.d();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let all: Vec<u16> = (0..eval.runs as u16).collect();
    let mut evaluated = 0u128;
    let mut found: BTreeMap<Vec<u16>, BigInt> = BTreeMap::new();

    for _ in 0..config.restarts {
        let mut pool = all.clone();
        pool.shuffle(&mut rng);
        let mut current: Vec<u16> = pool[..d].to_vec();
        current.sort_unstable();
        let mut score = eval.score(&current);
        evaluated += 1;
        for _ in 0..config.max_iters {
            let mut best_move: Option<(Vec<u16>, (BigInt, usize))> = None;
            for out_pos in 0..d {
                for &candidate in all.iter().filter(|r| !current.contains(r)) {
                    let mut trial = current.clone();
                    trial[out_pos] = candidate;
                    trial.sort_unstable();
                    let s = eval.score(&trial);
                    evaluated += 1;
                    let better = match &best_move {
                        None => s > score,
                        Some((_, bs)) => s > *bs,
                    };
                    if better {
                        best_move = Some((trial, s));
                    }
                }
            }
            match best_move {
                Some((trial, s)) => {
                    current = trial;
                    score = s;
                }
                None => break,
            }
        }
        found.insert(current, score.0);
    }

    let max = found.values().max().cloned().unwrap_or_default();
    let mut optima: Vec<DesignReport> = found
        .into_iter()
        .filter(|(_, det)| *det == max)
        .map(|(s, det)| report_from(spec, &eval, &s, det))
        .map(|r| r.with_reference(&max, ReportMethod::Exchange, false))
        .collect();
    optima.sort_by_key(DesignReport::sort_key);
    Ok(OptimalDesign { best: optima[0].clone(), optima, certified: false, evaluated })
}

/// Attained `|det|` values of sign matrices of one order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Spectrum {
    pub order: usize,
    /// Raw `|det|` values, ascending.
    pub raw: Vec<BigInt>,
    /// `raw / 2^(order-1)`, ascending.
    pub normalized: Vec<BigInt>,
    pub matrices_enumerated: u64,
}

/// Largest order the spectrum enumeration accepts.
pub const MAX_SPECTRUM_ORDER: usize = 6;

/// Enumerates all sign matrices of the given order with first row and
/// column fixed to +1. Negating rows or columns only flips the sign of the
/// determinant, so this covers every attainable `|det|`.
pub fn spectrum(order: usize) -> Result<Spectrum> {
    if order == 0 || order > MAX_SPECTRUM_ORDER {
        return Err(Error::SpectrumOrder(order));
    }
    let n = order;
    let free = (n - 1) * (n - 1);
    let total: u64 = 1 << free;
    // Split on the top bits so each task enumerates a contiguous range.
    let split_bits = free.min(8);
    let tasks: u64 = 1 << split_bits;
    let per_task = total / tasks;

    let scan = |task: u64| -> BTreeSet<i64> {
        let mut seen = BTreeSet::new();
        let mut a = vec![0i64; n * n];
        for bits in task * per_task..(task + 1) * per_task {
            a[..n].fill(1);
            for i in 1..n {
                a[i * n] = 1;
                for j in 1..n {
                    let bit = (i - 1) * (n - 1) + (j - 1);
                    a[i * n + j] = if bits >> bit & 1 == 1 { -1 } else { 1 };
                }
            }
            let det = det_in_place_i64(&mut a, n).expect("sign matrices of order <= 6 fit in i64");
            seen.insert(det.abs());
        }
        seen
    };
    #[cfg(feature = "parallel")]
    let parts: Vec<BTreeSet<i64>> = {
        use rayon::prelude::*;
        (0..tasks).into_par_iter().map(scan).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let parts: Vec<BTreeSet<i64>> = (0..tasks).map(scan).collect();

    let values: BTreeSet<i64> = parts.into_iter().flatten().collect();
    let unit = 1i64 << (n - 1);
    let raw: Vec<BigInt> = values.iter().map(|&v| BigInt::from(v)).collect();
    let normalized = values
        .iter()
        .map(|&v| {
            assert_eq!(v % unit, 0, "|det| of a sign matrix is a multiple of 2^(n-1)");
            BigInt::from(v / unit)
        })
        .collect();
    Ok(Spectrum { order, raw, normalized, matrices_enumerated: total })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factorial::all_runs;

    fn spec(k: u32, labels: &[&str]) -> ModelSpec {
        ModelSpec::from_labels(k, labels).unwrap()
    }

    fn runs(s: &ModelSpec, labels: &str) -> Vec<Run> {
        let labels: Vec<&str> = labels.split_whitespace().collect();
        s.parse_runs(&labels).unwrap()
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(16, 5), 4368);
        assert_eq!(binomial(8, 0), 1);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(binomial(64, 32), 1_832_624_140_942_590_534);
    }

    #[test]
    fn unrank_agrees_with_successor() {
        let mut c = unrank_combination(7, 3, 0);
        for rank in 0..binomial(7, 3) {
            assert_eq!(unrank_combination(7, 3, rank), c);
            next_combination(&mut c, 7);
        }
    }

    #[test]
    fn pair_admissibility() {
        let s = spec(3, &["F23", "F123"]);
        assert!(is_admissible(&s, &runs(&s, "000 100")).unwrap().admissible);
        assert!(is_admissible(&s, &runs(&s, "011 111")).unwrap().admissible);
        let r = is_admissible(&s, &runs(&s, "000 010")).unwrap();
        assert!(!r.admissible);
        assert!(r.abs_det_c.is_zero() && r.abs_det_d.is_zero());
        assert_eq!(
            is_admissible(&s, &runs(&s, "000")),
            Err(Error::DeletionSize { expected: 2, found: 1 })
        );
    }

    #[test]
    fn pair_rule_brute_force() {
        // The C block [[a, s1 a], [b, t1 b]] is singular iff factor 1 agrees.
        let s = spec(3, &["F23", "F123"]);
        let all = all_runs(3).unwrap();
        for (i, a) in all.iter().enumerate() {
            for b in &all[i + 1..] {
                let r = is_admissible(&s, &[*a, *b]).unwrap();
                assert_eq!(r.admissible, (a.mask() ^ b.mask()) & 1 == 1, "{a} {b}");
            }
        }
    }

    #[test]
    fn singletons_all_admissible() {
        let e = enumerate_admissible(&spec(3, &["F123"]), &SearchConfig::default()).unwrap();
        assert_eq!((e.total, e.inadmissible, e.designs.len()), (8, 0, 8));
        assert_eq!(e.classes.len(), 1);
        let opt = d_optimal(&spec(3, &["F123"]), &SearchConfig::default()).unwrap();
        assert_eq!(opt.optima.len(), 8);
        assert!(opt.optima.iter().all(|r| r.abs_det_c == BigInt::from(1)));
    }

    #[test]
    fn enumeration_is_sorted_and_ranked() {
        let e = enumerate_admissible(&spec(3, &["F23", "F123"]), &SearchConfig::default()).unwrap();
        assert_eq!(e.designs.len(), 16);
        assert_eq!(e.inadmissible, 12);
        let keys: Vec<Vec<String>> = e.designs.iter().map(DesignReport::sort_key).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        assert!(e.designs.iter().all(|r| r.certified && r.optimal));
        assert_eq!(e.class_rank(&BigInt::from(2)), Some(1));
    }

    #[test]
    fn d_greater_than_n_uses_design_side() {
        // k = 3, only the mean is kept: n = 1, d = 7.
        let s = ModelSpec::from_nonnegligible(3, []).unwrap();
        let e = enumerate_admissible(&s, &SearchConfig::default()).unwrap();
        assert_eq!(e.total, 8);
        assert_eq!(e.inadmissible, 0);
        // |det D| = 1 for every single kept run, so |det C| = 8^3.
        assert!(e.designs.iter().all(|r| r.abs_det_c == BigInt::from(512)));
        for r in &e.designs {
            let p = make_partition(&s, &r.deleted).unwrap();
            assert_eq!(crate::linalg::det_exact(p.c()).unwrap().abs(), r.abs_det_c);
        }
    }

    #[test]
    fn cap_is_enforced() {
        let s = spec(4, &["F123", "F124", "F134", "F234", "F1234"]);
        let config = SearchConfig { subset_cap: 100, ..SearchConfig::default() };
        assert_eq!(
            enumerate_admissible(&s, &config),
            Err(Error::CapExceeded { count: 4368, cap: 100 })
        );
        assert!(d_optimal(&s, &config).is_err());
        let forced = SearchConfig { force: true, ..config };
        assert!(d_optimal(&s, &forced).is_ok());
    }

    #[test]
    fn exchange_finds_order_five_optimum() {
        let s = spec(4, &["F123", "F124", "F134", "F234", "F1234"]);
        let opt = d_optimal(&s, &SearchConfig::exchange(11)).unwrap();
        assert!(!opt.certified);
        assert_eq!(opt.best.method, ReportMethod::Exchange);
        assert!(opt.best.abs_det_c <= BigInt::from(48));
        assert_eq!(opt.best.abs_det_c, BigInt::from(48));
    }

    #[test]
    fn exchange_is_seed_deterministic() {
        let s = spec(4, &["F12", "F34", "F123", "F1234"]);
        let a = d_optimal(&s, &SearchConfig::exchange(3)).unwrap();
        let b = d_optimal(&s, &SearchConfig::exchange(3)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn small_spectra() {
        let s1 = spectrum(1).unwrap();
        assert_eq!(s1.raw, vec![BigInt::from(1)]);
        let s2 = spectrum(2).unwrap();
        assert_eq!(s2.raw, vec![BigInt::from(0), BigInt::from(2)]);
        assert_eq!(s2.normalized, vec![BigInt::from(0), BigInt::from(1)]);
        assert_eq!(spectrum(0), Err(Error::SpectrumOrder(0)));
        assert_eq!(spectrum(7), Err(Error::SpectrumOrder(7)));
    }
}
