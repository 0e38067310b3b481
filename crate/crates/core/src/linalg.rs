//! Exact dense linear algebra over arbitrary-precision integers and rationals.
//!
//! Determinants use fraction-free (Bareiss) elimination, with an overflow-checked
//! `i128` fast path that falls back to `BigInt` transparently. Inverses go
//! through the fraction-free Gauss-Jordan form, which yields the adjugate and
//! determinant in integers; the only division happens at the very end.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

/// Dense rational matrix, row-major. Entries are always in lowest terms
/// (guaranteed by `BigRational`).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigRational>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> i64) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(BigInt::from(f(i, j)));
            }
        }
        Self { rows, cols, entries }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(Self::from_fn(rows.len(), cols, |i, j| rows[i][j]))
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, entries: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| i64::from(i == j))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j).clone());
            }
        }
        Self { rows: self.cols, cols: self.rows, entries }
    }

    /// Selects the given rows and columns, in the given order.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut entries = Vec::with_capacity(rows.len() * cols.len());
        for &i in rows {
            for &j in cols {
                entries.push(self.get(i, j).clone());
            }
        }
        Self { rows: rows.len(), cols: cols.len(), entries }
    }

    pub fn matmul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        check_inner(self.rows, self.cols, other.rows, other.cols)?;
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = BigInt::zero();
                for l in 0..self.cols {
                    acc += self.get(i, l) * other.get(l, j);
                }
                entries.push(acc);
            }
        }
        Ok(IntMatrix { rows: self.rows, cols: other.cols, entries })
    }

    pub fn scale(&self, factor: &BigInt) -> IntMatrix {
        let entries = self.entries.iter().map(|x| x * factor).collect();
        IntMatrix { rows: self.rows, cols: self.cols, entries }
    }

    pub fn sub(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension("subtraction of differently shaped matrices".into()));
        }
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect();
        Ok(IntMatrix { rows: self.rows, cols: self.cols, entries })
    }

    /// True when every entry is +1 or -1.
    pub fn is_sign_matrix(&self) -> bool {
        self.entries.iter().all(|x| x.abs().is_one())
    }

    /// Entries as `i64`, if they all fit.
    pub fn to_i64(&self) -> Option<Vec<i64>> {
        self.entries.iter().map(ToPrimitive::to_i64).collect()
    }

    pub fn to_rational(&self) -> RatMatrix {
        RatMatrix::from(self)
    }
}

impl RatMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigRational>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![BigRational::zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = BigRational::one();
        }
        Self { rows: n, cols: n, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[BigRational] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[BigRational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j).clone());
            }
        }
        Self { rows: self.cols, cols: self.rows, entries }
    }

    pub fn matmul(&self, other: &RatMatrix) -> Result<RatMatrix> {
        check_inner(self.rows, self.cols, other.rows, other.cols)?;
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = BigRational::zero();
                for l in 0..self.cols {
                    let a = self.get(i, l);
                    if a.is_zero() {
                        continue;
                    }
                    acc += a * other.get(l, j);
                }
                entries.push(acc);
            }
        }
        Ok(RatMatrix { rows: self.rows, cols: other.cols, entries })
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[BigRational]) -> Result<Vec<BigRational>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn scale(&self, factor: &BigRational) -> RatMatrix {
        let entries = self.entries.iter().map(|x| x * factor).collect();
        RatMatrix { rows: self.rows, cols: self.cols, entries }
    }

    pub fn row_sums(&self) -> Vec<BigRational> {
        (0..self.rows).map(|i| self.row(i).iter().sum()).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = self.get(i, j);
                    if i == j {
                        x.is_one()
                    } else {
                        x.is_zero()
                    }
                })
            })
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.entries.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect()
    }
}

impl From<&IntMatrix> for RatMatrix {
    fn from(m: &IntMatrix) -> Self {
        let entries = m.entries.iter().map(|x| BigRational::from_integer(x.clone())).collect();
        RatMatrix { rows: m.rows, cols: m.cols, entries }
    }
}

impl From<IntMatrix> for RatMatrix {
    fn from(m: IntMatrix) -> Self {
        let entries = m.entries.into_iter().map(BigRational::from_integer).collect();
        RatMatrix { rows: m.rows, cols: m.cols, entries }
    }
}

impl From<&RatMatrix> for RatMatrix {
    fn from(m: &RatMatrix) -> Self {
        m.clone()
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "  {}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RatMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "  {}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

fn check_inner(ar: usize, ac: usize, br: usize, bc: usize) -> Result<()> {
    if ac != br {
        return Err(Error::Dimension(format!("cannot multiply {ar}x{ac} by {br}x{bc}")));
    }
    Ok(())
}

/// Exact product of any mix of integer and rational matrices.
pub fn matmul(a: impl Into<RatMatrix>, b: impl Into<RatMatrix>) -> Result<RatMatrix> {
    a.into().matmul(&b.into())
}

/// Scalar used by fraction-free elimination. `cross` computes
/// `(pivot * x - lead * y) / prev`, returning `None` on overflow.
trait ElimScalar: Clone + Zero + PartialEq {
    fn cross(pivot: &Self, x: &Self, lead: &Self, y: &Self, prev: &Self) -> Option<Self>;
    fn negate(&self) -> Self;
}

impl ElimScalar for i128 {
    fn cross(pivot: &i128, x: &i128, lead: &i128, y: &i128, prev: &i128) -> Option<i128> {
        let num = pivot.checked_mul(*x)?.checked_sub(lead.checked_mul(*y)?)?;
        debug_assert_eq!(num % prev, 0);
        Some(num / prev)
    }

    fn negate(&self) -> i128 {
        -self
    }
}

impl ElimScalar for BigInt {
    fn cross(pivot: &BigInt, x: &BigInt, lead: &BigInt, y: &BigInt, prev: &BigInt) -> Option<BigInt> {
        let num = pivot * x - lead * y;
        let (q, r) = num.div_rem(prev);
        debug_assert!(r.is_zero());
        Some(q)
    }

    fn negate(&self) -> BigInt {
        -self
    }
}

/// Result of fraction-free forward elimination.
struct Echelon<T> {
    rank: usize,
    /// Last pivot; for a full-rank square matrix this is `sign * det`.
    last_pivot: T,
    swaps_odd: bool,
}

/// Bareiss forward elimination with column skipping. Consumes `a` (row-major,
/// `rows x cols`). Returns `None` if an intermediate overflows `T`.
fn bareiss<T: ElimScalar + From<i8>>(a: &mut [T], rows: usize, cols: usize) -> Option<Echelon<T>> {
    let mut prev = T::from(1);
    let mut swaps_odd = false;
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i * cols + c].is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                a.swap(p * cols + j, r * cols + j);
            }
            swaps_odd = !swaps_odd;
        }
        let pivot = a[r * cols + c].clone();
        for i in r + 1..rows {
            let lead = a[i * cols + c].clone();
            for j in c + 1..cols {
                let v = T::cross(&pivot, &a[i * cols + j], &lead, &a[r * cols + j], &prev)?;
                a[i * cols + j] = v;
            }
            a[i * cols + c] = T::zero();
        }
        prev = pivot;
        r += 1;
    }
    Some(Echelon { rank: r, last_pivot: prev, swaps_odd })
}

fn det_generic<T: ElimScalar + From<i8>>(mut a: Vec<T>, n: usize) -> Option<T> {
    if n == 0 {
        return Some(T::from(1));
    }
    let e = bareiss(&mut a, n, n)?;
    if e.rank < n {
        return Some(T::zero());
    }
    Some(if e.swaps_odd { e.last_pivot.negate() } else { e.last_pivot })
}

/// Determinant of a small integer matrix given as `i64` entries.
/// Uses checked `i128` arithmetic and falls back to `BigInt` on overflow.
pub fn det_i64(entries: &[i64], n: usize) -> BigInt {
    assert_eq!(entries.len(), n * n, "det_i64 expects an n x n matrix");
    let small: Vec<i128> = entries.iter().map(|&x| i128::from(x)).collect();
    match det_generic(small, n) {
        Some(d) => BigInt::from(d),
        None => {
            let big: Vec<BigInt> = entries.iter().map(|&x| BigInt::from(x)).collect();
            det_generic(big, n).expect("BigInt elimination cannot overflow")
        }
    }
}

/// Rank of a small integer matrix given as `i64` entries.
pub fn rank_i64(entries: &[i64], rows: usize, cols: usize) -> usize {
    assert_eq!(entries.len(), rows * cols, "rank_i64 expects a rows x cols matrix");
    let mut small: Vec<i128> = entries.iter().map(|&x| i128::from(x)).collect();
    match bareiss(&mut small, rows, cols) {
        Some(e) => e.rank,
        None => {
            let mut big: Vec<BigInt> = entries.iter().map(|&x| BigInt::from(x)).collect();
            bareiss(&mut big, rows, cols).expect("BigInt elimination cannot overflow").rank
        }
    }
}

/// In-place Bareiss determinant on a small `i64` matrix; no allocation.
/// Returns `None` if an intermediate overflows.
pub fn det_in_place_i64(a: &mut [i64], n: usize) -> Option<i64> {
    debug_assert_eq!(a.len(), n * n);
    let mut prev = 1i64;
    let mut negate = false;
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| a[i * n + c] != 0) else {
            return Some(0);
        };
        if p != c {
            for j in c..n {
                a.swap(p * n + j, c * n + j);
            }
            negate = !negate;
        }
        let pivot = a[c * n + c];
        for i in c + 1..n {
            let lead = a[i * n + c];
            for j in c + 1..n {
                let num = pivot
                    .checked_mul(a[i * n + j])?
                    .checked_sub(lead.checked_mul(a[c * n + j])?)?;
                a[i * n + j] = num / prev;
            }
        }
        prev = pivot;
    }
    Some(if negate { -prev } else { prev })
}

/// Exact determinant via Bareiss elimination. The 0x0 matrix has determinant 1.
pub fn det_exact(m: &IntMatrix) -> Result<BigInt> {
    if !m.is_square() {
        return Err(Error::Dimension(format!(
            "determinant of a non-square {}x{} matrix",
            m.rows, m.cols
        )));
    }
    if let Some(small) = m.to_i64() {
        return Ok(det_i64(&small, m.rows));
    }
    Ok(det_generic(m.entries.clone(), m.rows).expect("BigInt elimination cannot overflow"))
}

pub fn rank(m: &IntMatrix) -> usize {
    if let Some(small) = m.to_i64() {
        return rank_i64(&small, m.rows, m.cols);
    }
    let mut a = m.entries.clone();
    bareiss(&mut a, m.rows, m.cols).expect("BigInt elimination cannot overflow").rank
}

/// Adjugate and determinant, computed with fraction-free Gauss-Jordan
/// elimination on `[A | I]`. Satisfies `A * adj = det * I`.
///
/// Fails with [`Error::Singular`] when `det = 0`.
pub fn adjugate(m: &IntMatrix) -> Result<(IntMatrix, BigInt)> {
    if !m.is_square() {
        return Err(Error::Dimension(format!(
            "inverse of a non-square {}x{} matrix",
            m.rows, m.cols
        )));
    }
    let n = m.rows;
    if n == 0 {
        return Ok((IntMatrix::zeros(0, 0), BigInt::one()));
    }
    let w = 2 * n;
    let mut a: Vec<BigInt> = Vec::with_capacity(n * w);
    for i in 0..n {
        a.extend(m.row(i).iter().cloned());
        a.extend((0..n).map(|j| BigInt::from(i64::from(i == j))));
    }

    let mut prev = BigInt::one();
    let mut swaps_odd = false;
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i * w + k].is_zero()) else {
            return Err(Error::Singular { det: BigInt::zero() });
        };
        if p != k {
            for j in 0..w {
                a.swap(p * w + j, k * w + j);
            }
            swaps_odd = !swaps_odd;
        }
        let pivot = a[k * w + k].clone();
        for i in (0..n).filter(|&i| i != k) {
            let lead = a[i * w + k].clone();
            for j in 0..w {
                if j == k {
                    continue;
                }
                a[i * w + j] = BigInt::cross(&pivot, &a[i * w + j], &lead, &a[k * w + j], &prev)
                    .expect("BigInt elimination cannot overflow");
            }
            a[i * w + k] = BigInt::zero();
        }
        prev = pivot;
    }

    // Left block is now prev * I, right block is prev * A^{-1}.
    let det = if swaps_odd { -&prev } else { prev.clone() };
    let mut adj = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let x = &a[i * w + n + j];
            adj.push(if swaps_odd { -x } else { x.clone() });
        }
    }
    Ok((IntMatrix { rows: n, cols: n, entries: adj }, det))
}

/// Exact inverse. Singular input yields [`Error::Singular`] carrying `det = 0`.
pub fn inverse_exact(m: &IntMatrix) -> Result<RatMatrix> {
    let (adj, det) = adjugate(m)?;
    Ok(rational_scale(&adj, &det))
}

/// `m / denom` as a rational matrix.
pub fn rational_scale(m: &IntMatrix, denom: &BigInt) -> RatMatrix {
    let entries = m
        .entries
        .iter()
        .map(|x| BigRational::new(x.clone(), denom.clone()))
        .collect();
    RatMatrix { rows: m.rows, cols: m.cols, entries }
}

/// Hadamard's bound for sign matrices: `|det| <= n^(n/2)`, checked as
/// `det^2 <= n^n` to stay in integers.
pub fn within_hadamard_bound(n: usize, det: &BigInt) -> bool {
    let bound = num_traits::pow(BigInt::from(n), n);
    det * det <= bound
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn identity_det_is_one() {
        assert_eq!(det_exact(&IntMatrix::identity(3)).unwrap(), BigInt::one());
    }

    #[test]
    fn empty_matrix() {
        let m = IntMatrix::zeros(0, 0);
        assert_eq!(det_exact(&m).unwrap(), BigInt::one());
        let inv = inverse_exact(&m).unwrap();
        assert_eq!((inv.rows(), inv.cols()), (0, 0));
    }

    #[test]
    fn non_square_det_is_dimension_error() {
        let m = IntMatrix::zeros(2, 3);
        assert!(matches!(det_exact(&m), Err(Error::Dimension(_))));
        assert!(matches!(inverse_exact(&m), Err(Error::Dimension(_))));
    }

    #[test]
    fn small_hadamard_inverse() {
        let h = int(&[&[1, 1], &[1, -1]]);
        let inv = inverse_exact(&h).unwrap();
        let expected =
            RatMatrix::new(2, 2, vec![q(1, 2), q(1, 2), q(1, 2), q(-1, 2)]).unwrap();
        assert_eq!(inv, expected);
    }

    #[test]
    fn singular_inverse_reports_zero_det() {
        let m = int(&[&[1, 1], &[1, 1]]);
        assert_eq!(inverse_exact(&m), Err(Error::Singular { det: BigInt::zero() }));
    }

    #[test]
    fn inverse_needs_pivoting() {
        let m = int(&[&[0, 1, 1], &[1, 0, 1], &[1, 1, 0]]);
        assert_eq!(det_exact(&m).unwrap(), BigInt::from(2));
        let inv = inverse_exact(&m).unwrap();
        assert!(matmul(&m, &inv).unwrap().is_identity());
        assert!(matmul(&inv, &m).unwrap().is_identity());
    }

    #[test]
    fn hadamard_product_with_transpose() {
        let h = int(&[&[1, 1, 1, 1], &[1, -1, 1, -1], &[1, 1, -1, -1], &[1, -1, -1, 1]]);
        let p = h.matmul(&h.transpose()).unwrap();
        assert_eq!(p, IntMatrix::identity(4).scale(&BigInt::from(4)));
        assert_eq!(h.matmul(&IntMatrix::identity(4)).unwrap(), h);
    }

    #[test]
    fn matmul_dimension_mismatch() {
        let a = IntMatrix::zeros(2, 3);
        assert!(matches!(a.matmul(&a), Err(Error::Dimension(_))));
        assert!(matches!(matmul(&a, &a), Err(Error::Dimension(_))));
    }

    #[test]
    fn bigint_fallback_matches_fast_path() {
        // Entries near i64::MAX force the i128 path to overflow.
        let big = i64::MAX / 2;
        let entries = [big, 3, 7, big - 1];
        let d = det_i64(&entries, 2);
        let expected = BigInt::from(big) * BigInt::from(big - 1) - BigInt::from(21);
        assert_eq!(d, expected);
    }

    #[test]
    fn rank_with_skipped_columns() {
        let m = int(&[&[0, 1, 2], &[0, 2, 4], &[0, 1, 3]]);
        assert_eq!(rank(&m), 2);
        assert_eq!(det_exact(&m).unwrap(), BigInt::zero());
    }

    #[test]
    fn hadamard_bound() {
        assert!(within_hadamard_bound(2, &BigInt::from(2)));
        assert!(!within_hadamard_bound(2, &BigInt::from(3)));
        assert!(within_hadamard_bound(5, &BigInt::from(48)));
        // 5^(5/2) ~ 55.9
        assert!(within_hadamard_bound(5, &BigInt::from(55)));
        assert!(!within_hadamard_bound(5, &BigInt::from(56)));
    }
}
