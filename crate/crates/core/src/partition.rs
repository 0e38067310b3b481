//! Block partition of the model matrix for a given deletion set.
//!
//! With kept runs `R1`, deleted runs `R2`, non-negligible effects `T1` and
//! negligible effects `T2`, the model matrix splits as
//!
//! ```text
//!          T1   T2
//!   R1  [  D    E  ]
//!   R2  [  V    C  ]
//! ```
//!
//! Because `H^T H = N I`, the blocks satisfy `|det D| = N^((n-d)/2) |det C|`
//! and `D^{-1} = (D - E C^{-1} V)^T / N`. Both are checked exactly here.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::factorial::{sign_bits, ModelSpec, Run};
use crate::linalg::{adjugate, det_exact, rational_scale, IntMatrix, RatMatrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    spec: ModelSpec,
    kept: Vec<Run>,
    deleted: Vec<Run>,
    d: IntMatrix,
    e: IntMatrix,
    v: IntMatrix,
    c: IntMatrix,
}

/// Splits the model matrix of `spec` by the runs in `deleted`. Runs and
/// effects inside every block are in standard order.
pub fn make_partition(spec: &ModelSpec, deleted: &[Run]) -> Result<Partition> {
    if deleted.len() != spec.d() {
        return Err(Error::DeletionSize { expected: spec.d(), found: deleted.len() });
    }
    let mut set = BTreeSet::new();
    for r in deleted {
        if r.k() != spec.k() {
            return Err(Error::InvalidRun {
                label: r.to_string(),
                reason: format!("run has {} levels, model has k = {}", r.k(), spec.k()),
            });
        }
        if !set.insert(*r) {
            return Err(Error::DuplicateRun(r.to_string()));
        }
    }
    let all = crate::factorial::all_runs(spec.k())?;
    let deleted: Vec<Run> = set.iter().copied().collect();
    let kept: Vec<Run> = all.into_iter().filter(|r| !set.contains(r)).collect();

    let block = |runs: &[Run], effects: &[crate::factorial::Effect]| {
        IntMatrix::from_fn(runs.len(), effects.len(), |i, j| {
            sign_bits(runs[i].mask(), effects[j].mask())
        })
    };
    Ok(Partition {
        d: block(&kept, spec.nonneg()),
        e: block(&kept, spec.negligible()),
        v: block(&deleted, spec.nonneg()),
        c: block(&deleted, spec.negligible()),
        spec: spec.clone(),
        kept,
        deleted,
    })
}

impl Partition {
    pub fn spec(&self) -> &ModelSpec {
        &self.spec
    }

    /// The saturated design (kept runs), standard order.
    pub fn kept(&self) -> &[Run] {
        &self.kept
    }

    /// The deletion set, standard order.
    pub fn deleted(&self) -> &[Run] {
        &self.deleted
    }

    /// Kept runs x non-negligible effects.
    pub fn d(&self) -> &IntMatrix {
        &self.d
    }

    /// Kept runs x negligible effects.
    pub fn e(&self) -> &IntMatrix {
        &self.e
    }

    /// Deleted runs x non-negligible effects.
    pub fn v(&self) -> &IntMatrix {
        &self.v
    }

    /// Deleted runs x negligible effects.
    pub fn c(&self) -> &IntMatrix {
        &self.c
    }

    /// `N = 2^k`.
    pub fn runs(&self) -> usize {
        self.spec.runs()
    }

    /// Reassembles `[[D, E], [V, C]]`; a row/column permutation of `H_N`.
    pub fn reassemble(&self) -> IntMatrix {
        let n = self.kept.len();
        let size = self.runs();
        IntMatrix::from_fn(size, size, |i, j| {
            let entry = match (i < n, j < n) {
                (true, true) => self.d.get(i, j),
                (true, false) => self.e.get(i, j - n),
                (false, true) => self.v.get(i - n, j),
                (false, false) => self.c.get(i - n, j - n),
            };
            i64::try_from(entry).expect("sign entries fit in i64")
        })
    }
}

/// `|det D|` implied by `|det C|`: `N^(n - N/2) |det C|`. For `n < N/2` the
/// power is negative and the division is exact.
pub fn abs_det_d_from_c(runs: usize, n: usize, abs_det_c: &BigInt) -> BigInt {
    assert!(runs.is_multiple_of(2), "N must be even");
    let half = runs / 2;
    let base = BigInt::from(runs);
    if n >= half {
        abs_det_c * num_traits::pow(base, n - half)
    } else {
        abs_det_c / num_traits::pow(base, half - n)
    }
}

/// `|det C|` implied by `|det D|`.
pub fn abs_det_c_from_d(runs: usize, n: usize, abs_det_d: &BigInt) -> BigInt {
    assert!(runs.is_multiple_of(2), "N must be even");
    let half = runs / 2;
    let base = BigInt::from(runs);
    if n >= half {
        abs_det_d / num_traits::pow(base, n - half)
    } else {
        abs_det_d * num_traits::pow(base, half - n)
    }
}

/// Exact values from the determinant identity check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Theorem1Check {
    pub abs_det_d: BigInt,
    pub abs_det_c: BigInt,
    /// `(n - d) / 2 = n - N/2`; may be negative when `n < d`.
    pub exponent: i64,
    pub holds: bool,
}

/// Computes both determinants directly and checks
/// `|det D| = N^((n-d)/2) |det C|` in integers.
pub fn verify_theorem1(p: &Partition) -> Theorem1Check {
    let abs_det_d = det_exact(&p.d).expect("D is square").abs();
    let abs_det_c = det_exact(&p.c).expect("C is square").abs();
    let size = p.runs();
    let n = p.kept.len();
    let half = size / 2;
    let base = BigInt::from(size);
    // Cross-multiply so a negative exponent stays in integers.
    let holds = if n >= half {
        abs_det_d == &abs_det_c * num_traits::pow(base, n - half)
    } else {
        &abs_det_d * num_traits::pow(base, half - n) == abs_det_c
    };
    Theorem1Check { abs_det_d, abs_det_c, exponent: n as i64 - half as i64, holds }
}

/// `D^{-1}` obtained through the negligible-effect block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplementInverse {
    /// `D^{-1} = (D - E C^{-1} V)^T / N`.
    pub matrix: RatMatrix,
    /// `D - E C^{-1} V`.
    pub adjusted: RatMatrix,
    /// `det(C) * (D - E C^{-1} V)`, always an integer matrix.
    pub adjusted_scaled: IntMatrix,
    pub det_c: BigInt,
    pub runs: usize,
}

/// Inverts `D` via `D^{-1} = (D - E C^{-1} V)^T / N`. The work happens in
/// integers through `adj(C)`; only the final scaling is rational.
pub fn inverse_via_complement(p: &Partition) -> Result<ComplementInverse> {
    let (adj_c, det_c) = match adjugate(&p.c) {
        Ok(pair) => pair,
        Err(Error::Singular { .. }) => return Err(Error::Inadmissible),
        Err(e) => return Err(e),
    };
    // det(C) D - E adj(C) V
    let correction = p.e.matmul(&adj_c)?.matmul(&p.v)?;
    let adjusted_scaled = p.d.scale(&det_c).sub(&correction)?;
    let adjusted = rational_scale(&adjusted_scaled, &det_c);
    let denom = &det_c * BigInt::from(p.runs());
    let matrix = rational_scale(&adjusted_scaled.transpose(), &denom);
    Ok(ComplementInverse { matrix, adjusted, adjusted_scaled, det_c, runs: p.runs() })
}

/// Checks `(D - E C^{-1} V)^T 1 = (N, 0, ..., 0)^T` exactly, i.e. row F0 of
/// `D^{-1}` sums to 1 and every other row sums to 0.
pub fn contrast_check(p: &Partition) -> Result<bool> {
    let inv = inverse_via_complement(p)?;
    Ok(contrast_holds(&inv.matrix))
}

/// Row sums of an inverse are `(1, 0, ..., 0)`.
pub fn contrast_holds(inverse: &RatMatrix) -> bool {
    inverse.row_sums().iter().enumerate().all(|(i, s)| {
        if i == 0 {
            s.is_one()
        } else {
            s.is_zero()
        }
    })
}

/// Column sums of `D - E C^{-1} V` as exact rationals.
pub fn adjusted_column_sums(inv: &ComplementInverse) -> Vec<BigRational> {
    inv.adjusted.transpose().row_sums()
}
