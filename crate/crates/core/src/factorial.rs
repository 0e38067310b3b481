//! Effects, runs, model specifications and the full 2^k model matrix.
//!
//! Runs and effects are bitmasks: bit `i - 1` stands for factor `i`. A run
//! has factor `i` at level 1 when its bit is set; an effect involves factor
//! `i` when its bit is set. Level 0 is coded as -1 and level 1 as +1.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::IntMatrix;

/// Largest supported number of factors (N = 1024 runs).
pub const MAX_FACTORS: u32 = 10;

fn check_k(k: u32) -> Result<()> {
    if (1..=MAX_FACTORS).contains(&k) {
        Ok(())
    } else {
        Err(Error::UnsupportedK(k))
    }
}

/// A factorial effect `F_S`; the empty set is the general mean `F0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Effect {
    k: u8,
    mask: u16,
}

impl Effect {
    pub fn new(k: u32, mask: u16) -> Result<Self> {
        check_k(k)?;
        if u32::from(mask) >> k != 0 {
            let index = 16 - mask.leading_zeros();
            return Err(Error::FactorOutOfRange { index, k });
        }
        Ok(Self { k: k as u8, mask })
    }

    pub fn from_factors(k: u32, factors: &[u32]) -> Result<Self> {
        check_k(k)?;
        let mut mask = 0u16;
        for &f in factors {
            if f == 0 || f > k {
                return Err(Error::FactorOutOfRange { index: f, k });
            }
            mask |= 1 << (f - 1);
        }
        Ok(Self { k: k as u8, mask })
    }

    pub fn mean(k: u32) -> Result<Self> {
        Self::new(k, 0)
    }

    pub fn k(&self) -> u32 {
        u32::from(self.k)
    }

    pub fn mask(&self) -> u16 {
        self.mask
    }

    pub fn is_mean(&self) -> bool {
        self.mask == 0
    }

    /// Number of factors involved (0 for the mean, 1 for a main effect, ...).
    pub fn order(&self) -> u32 {
        self.mask.count_ones()
    }

    /// Factor indices in ascending order, 1-based.
    pub fn factors(&self) -> impl Iterator<Item = u32> + '_ {
        (0..self.k()).filter(|i| self.mask >> i & 1 == 1).map(|i| i + 1)
    }
}

impl fmt::Display for Effect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_mean() {
            return f.write_str("F0");
        }
        let factors: Vec<u32> = self.factors().collect();
        let sep = if factors.iter().any(|&x| x >= 10) { "." } else { "" };
        let body: Vec<String> = factors.iter().map(u32::to_string).collect();
        write!(f, "F{}", body.join(sep))
    }
}

/// Parses an effect label: `F0`, `F123` (one digit per factor) or `F1.10`
/// (dot-separated indices).
pub fn parse_effect(label: &str, k: u32) -> Result<Effect> {
    check_k(k)?;
    let bad = |reason: &str| Error::InvalidEffect { label: label.to_string(), reason: reason.into() };
    let body = label.trim().strip_prefix('F').ok_or_else(|| bad("must start with 'F'"))?;
    if body.is_empty() {
        return Err(bad("no factor indices"));
    }
    if body == "0" {
        return Effect::mean(k);
    }
    let indices: Vec<u32> = if body.contains('.') {
        body.split('.')
            .map(|part| {
                if part.is_empty() || !part.bytes().all(|b| b.is_ascii_digit()) {
                    Err(bad("malformed dot-separated index"))
                } else {
                    part.parse::<u32>().map_err(|_| bad("index too large"))
                }
            })
            .collect::<Result<_>>()?
    } else {
        body.chars()
            .map(|c| c.to_digit(10).ok_or_else(|| bad("non-digit character")))
            .collect::<Result<_>>()?
    };
    let mut seen = BTreeSet::new();
    for &i in &indices {
        if i == 0 {
            return Err(bad("factor index 0 is not valid inside an interaction"));
        }
        if i > k {
            return Err(Error::FactorOutOfRange { index: i, k });
        }
        if !seen.insert(i) {
            return Err(bad("duplicate factor"));
        }
    }
    Effect::from_factors(k, &indices)
}

/// A level combination of the k factors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Run {
    k: u8,
    mask: u16,
}

impl Run {
    pub fn new(k: u32, mask: u16) -> Result<Self> {
        check_k(k)?;
        if u32::from(mask) >> k != 0 {
            return Err(Error::InvalidRun {
                label: format!("#{mask}"),
                reason: format!("index outside 0..{}", 1u32 << k),
            });
        }
        Ok(Self { k: k as u8, mask })
    }

    pub fn k(&self) -> u32 {
        u32::from(self.k)
    }

    /// Position of the run in standard order.
    pub fn index(&self) -> usize {
        usize::from(self.mask)
    }

    pub fn mask(&self) -> u16 {
        self.mask
    }

    /// Levels in {0,1}, factor 1 first.
    pub fn levels(&self) -> Vec<u8> {
        (0..self.k).map(|i| (self.mask >> i & 1) as u8).collect()
    }
}

impl fmt::Display for Run {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for level in self.levels() {
            f.write_str(if level == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Parses a run label of exactly `k` binary characters, factor 1 first.
pub fn parse_run(label: &str, k: u32) -> Result<Run> {
    check_k(k)?;
    let label = label.trim();
    let bad = |reason: String| Error::InvalidRun { label: label.to_string(), reason };
    if label.chars().count() != k as usize {
        return Err(bad(format!("expected {k} levels, found {}", label.chars().count())));
    }
    let mut mask = 0u16;
    for (i, c) in label.chars().enumerate() {
        match c {
            '0' => {}
            '1' => mask |= 1 << i,
            other => return Err(bad(format!("non-binary level {other:?}"))),
        }
    }
    Run::new(k, mask)
}

/// All 2^k runs in standard order.
pub fn all_runs(k: u32) -> Result<Vec<Run>> {
    check_k(k)?;
    Ok((0..1u32 << k).map(|m| Run { k: k as u8, mask: m as u16 }).collect())
}

/// All 2^k effects in standard order (F0 first).
pub fn all_effects(k: u32) -> Result<Vec<Effect>> {
    check_k(k)?;
    Ok((0..1u32 << k).map(|m| Effect { k: k as u8, mask: m as u16 }).collect())
}

/// Sign of `effect` at `run` on raw masks: the product of +1/-1 levels over
/// the factors in the effect.
#[inline]
pub(crate) fn sign_bits(run: u16, effect: u16) -> i64 {
    if (effect & !run).count_ones().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Entry of the model matrix at (`run`, `effect`).
pub fn sign_of(run: Run, effect: Effect) -> Result<i8> {
    if u32::from(effect.mask) >> run.k() != 0 || effect.k != run.k {
        let index = 16 - effect.mask.leading_zeros();
        return Err(Error::FactorOutOfRange { index, k: run.k() });
    }
    Ok(sign_bits(run.mask, effect.mask) as i8)
}

/// The full model matrix `H_N`, rows = runs and columns = effects, both in
/// standard order. It is a Hadamard matrix: `H^T H = N I`.
pub fn build_model_matrix(k: u32) -> Result<IntMatrix> {
    check_k(k)?;
    let n = 1usize << k;
    Ok(IntMatrix::from_fn(n, n, |i, j| sign_bits(i as u16, j as u16)))
}

/// Which effects are assumed negligible in a 2^k experiment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelSpec {
    k: u32,
    negligible: Vec<Effect>,
    nonneg: Vec<Effect>,
}

impl ModelSpec {
    pub fn new(k: u32, negligible: impl IntoIterator<Item = Effect>) -> Result<Self> {
        check_k(k)?;
        let mut set = BTreeSet::new();
        for e in negligible {
            if e.k() != k {
                return Err(Error::Invalid(format!("effect {e} belongs to k = {}, not {k}", e.k())));
            }
            if e.is_mean() {
                return Err(Error::NegligibleMean);
            }
            if !set.insert(e) {
                return Err(Error::DuplicateEffect(e.to_string()));
            }
        }
        let negligible: Vec<Effect> = set.iter().copied().collect();
        let nonneg = all_effects(k)?.into_iter().filter(|e| !set.contains(e)).collect();
        Ok(Self { k, negligible, nonneg })
    }

    /// Builds a spec from effect labels such as `["F23", "F123"]`.
    pub fn from_labels<S: AsRef<str>>(k: u32, labels: &[S]) -> Result<Self> {
        let effects = labels
            .iter()
            .map(|l| parse_effect(l.as_ref(), k))
            .collect::<Result<Vec<_>>>()?;
        Self::new(k, effects)
    }

    /// Keeps the listed non-negligible effects (the mean is always kept);
    /// everything else is negligible.
    pub fn from_nonnegligible(k: u32, keep: impl IntoIterator<Item = Effect>) -> Result<Self> {
        let keep: BTreeSet<Effect> = keep.into_iter().collect();
        let negligible = all_effects(k)?
            .into_iter()
            .filter(|e| !e.is_mean() && !keep.contains(e));
        Self::new(k, negligible)
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// Total number of runs `N = 2^k`.
    pub fn runs(&self) -> usize {
        1 << self.k
    }

    /// Number of non-negligible parameters (design size).
    pub fn n(&self) -> usize {
        self.nonneg.len()
    }

    /// Number of negligible parameters (runs to delete).
    pub fn d(&self) -> usize {
        self.negligible.len()
    }

    /// Negligible effects in standard order.
    pub fn negligible(&self) -> &[Effect] {
        &self.negligible
    }

    /// Non-negligible effects in standard order; the mean is first.
    pub fn nonneg(&self) -> &[Effect] {
        &self.nonneg
    }

    pub fn parse_runs<S: AsRef<str>>(&self, labels: &[S]) -> Result<Vec<Run>> {
        labels.iter().map(|l| parse_run(l.as_ref(), self.k)).collect()
    }
}

impl FromStr for ModelSpec {
    type Err = Error;

    /// `"k=3: F23,F123"`.
    fn from_str(s: &str) -> Result<Self> {
        let (k, effects) = s
            .split_once(':')
            .ok_or_else(|| Error::Invalid(format!("expected 'k=<k>: <effects>', got {s:?}")))?;
        let k: u32 = k
            .trim()
            .strip_prefix("k=")
            .and_then(|v| v.trim().parse().ok())
            .ok_or_else(|| Error::Invalid(format!("bad factor count in {s:?}")))?;
        let labels: Vec<&str> =
            effects.split(',').map(str::trim).filter(|l| !l.is_empty()).collect();
        Self::from_labels(k, &labels)
    }
}
