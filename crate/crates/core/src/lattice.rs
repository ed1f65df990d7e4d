//! Integer vectors and matrices, kernel lattice bases and the conformal order.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Index;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

#[cfg(test)]
use crate::error::Error;
use crate::error::{check_dim, Result};
use crate::scalar::{ExactInt, Overflow};

/// A fixed-length integer vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntVector<T = BigInt> {
    entries: Vec<T>,
}

impl<T: ExactInt> IntVector<T> {
    pub fn new(entries: Vec<T>) -> Self {
        Self { entries }
    }

    pub fn zeros(len: usize) -> Self {
        Self {
            entries: vec![T::zero(); len],
        }
    }

    pub fn from_i64s(values: &[i64]) -> Self {
        Self::new(values.iter().map(|&x| T::from_i64_exact(x)).collect())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn as_slice(&self) -> &[T] {
        &self.entries
    }

    pub fn into_vec(self) -> Vec<T> {
        self.entries
    }

    pub fn iter(&self) -> std::slice::Iter<'_, T> {
        self.entries.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.entries.iter().all(|x| !x.is_negative())
    }

    pub fn support(&self) -> Vec<usize> {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(i, _)| i)
            .collect()
    }

    pub fn one_norm(&self) -> Result<T, Overflow> {
        self.entries
            .iter()
            .try_fold(T::zero(), |acc, x| acc.add_c(&x.abs_c()?))
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        check_dim(self.len(), other.len())?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.add_c(b))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::new(entries))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        check_dim(self.len(), other.len())?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.sub_c(b))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::new(entries))
    }

    pub fn checked_neg(&self) -> Result<Self, Overflow> {
        let entries = self
            .entries
            .iter()
            .map(|x| x.neg_c())
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::new(entries))
    }

    /// Greatest common divisor of the entries (0 for the zero vector).
    pub fn content(&self) -> T {
        self.entries.iter().fold(T::zero(), |g, x| g.gcd(x))
    }

    pub fn convert<U: ExactInt>(&self) -> Option<IntVector<U>> {
        let entries = self
            .entries
            .iter()
            .map(|x| U::from_big(&x.to_big()))
            .collect::<Option<Vec<_>>>()?;
        Some(IntVector::new(entries))
    }

    pub fn to_big(&self) -> IntVector<BigInt> {
        IntVector::new(self.entries.iter().map(ExactInt::to_big).collect())
    }
}

impl<T> Index<usize> for IntVector<T> {
    type Output = T;
    fn index(&self, i: usize) -> &T {
        &self.entries[i]
    }
}

impl<T: ExactInt> From<Vec<T>> for IntVector<T> {
    fn from(entries: Vec<T>) -> Self {
        Self::new(entries)
    }
}

impl<T: fmt::Display> fmt::Display for IntVector<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// An integer vector `u = u⁺ − u⁻` viewed through its positive and negative
/// parts. `u⁺` and `u⁻` are nonnegative with disjoint supports.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedVector<T = BigInt> {
    base: IntVector<T>,
}

impl<T: ExactInt> SignedVector<T> {
    pub fn new(base: IntVector<T>) -> Self {
        Self { base }
    }

    pub fn from_i64s(values: &[i64]) -> Self {
        Self::new(IntVector::from_i64s(values))
    }

    pub fn base(&self) -> &IntVector<T> {
        &self.base
    }

    pub fn into_base(self) -> IntVector<T> {
        self.base
    }

    pub fn len(&self) -> usize {
        self.base.len()
    }

    pub fn is_empty(&self) -> bool {
        self.base.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.base.is_zero()
    }

    pub fn plus(&self) -> IntVector<T> {
        IntVector::new(
            self.base
                .iter()
                .map(|x| {
                    if x.is_positive() {
                        x.clone()
                    } else {
                        T::zero()
                    }
                })
                .collect(),
        )
    }

    pub fn minus(&self) -> Result<IntVector<T>, Overflow> {
        let entries = self
            .base
            .iter()
            .map(|x| {
                if x.is_negative() {
                    x.neg_c()
                } else {
                    Ok(T::zero())
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(IntVector::new(entries))
    }

    pub fn support(&self) -> Vec<usize> {
        self.base.support()
    }

    pub fn one_norm(&self) -> Result<T, Overflow> {
        self.base.one_norm()
    }

    pub fn negated(&self) -> Result<Self, Overflow> {
        Ok(Self::new(self.base.checked_neg()?))
    }

    /// True when the first nonzero entry is positive (or the vector is zero).
    pub fn is_canonical(&self) -> bool {
        self.base
            .iter()
            .find(|x| !x.is_zero())
            .is_none_or(|x| x.is_positive())
    }

    /// The representative of `{u, −u}` whose first nonzero entry is positive.
    pub fn canonical(&self) -> Result<Self, Overflow> {
        if self.is_canonical() {
            Ok(self.clone())
        } else {
            self.negated()
        }
    }

    pub fn convert<U: ExactInt>(&self) -> Option<SignedVector<U>> {
        Some(SignedVector::new(self.base.convert()?))
    }

    pub fn to_big(&self) -> SignedVector<BigInt> {
        SignedVector::new(self.base.to_big())
    }
}

impl<T> Index<usize> for SignedVector<T> {
    type Output = T;
    fn index(&self, i: usize) -> &T {
        &self.base.entries[i]
    }
}

impl<T: ExactInt> From<IntVector<T>> for SignedVector<T> {
    fn from(base: IntVector<T>) -> Self {
        Self::new(base)
    }
}

impl<T: fmt::Display> fmt::Display for SignedVector<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.base.fmt(f)
    }
}

/// Output order for vector sets: 1-norm first, then lexicographic.
pub fn norm_lex_cmp<T: ExactInt>(a: &SignedVector<T>, b: &SignedVector<T>) -> Ordering {
    let na = a
        .base
        .iter()
        .fold(BigInt::zero(), |s, x| s + x.to_big().abs());
    let nb = b
        .base
        .iter()
        .fold(BigInt::zero(), |s, x| s + x.to_big().abs());
    na.cmp(&nb).then_with(|| a.base.cmp(&b.base))
}

/// Dense row-major integer matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix<T = BigInt> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: ExactInt> IntMatrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        check_dim(rows * cols, data.len())?;
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    /// Builds a matrix from rows; `cols` is needed for the zero-row case.
    pub fn from_rows(rows: Vec<Vec<T>>, cols: usize) -> Result<Self> {
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for row in rows {
            check_dim(cols, row.len())?;
            data.extend(row);
        }
        Ok(Self {
            rows: nrows,
            cols,
            data,
        })
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| T::from_i64_exact(x)).collect())
                .collect(),
            cols,
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &T {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: T) {
        self.data[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<T> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.data.iter().all(|x| !x.is_negative())
    }

    pub fn has_zero_column(&self) -> bool {
        (0..self.cols).any(|c| (0..self.rows).all(|r| self.get(r, c).is_zero()))
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let mut data = Vec::with_capacity(self.rows * cols.len());
        for r in 0..self.rows {
            for &c in cols {
                data.push(self.get(r, c).clone());
            }
        }
        Self {
            rows: self.rows,
            cols: cols.len(),
            data,
        }
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * self.cols);
        for &r in rows {
            data.extend_from_slice(self.row(r));
        }
        Self {
            rows: rows.len(),
            cols: self.cols,
            data,
        }
    }

    /// Removes rows consisting only of zeros.
    pub fn without_zero_rows(&self) -> Self {
        let keep: Vec<usize> = (0..self.rows)
            .filter(|&r| self.row(r).iter().any(|x| !x.is_zero()))
            .collect();
        self.select_rows(&keep)
    }

    pub fn convert<U: ExactInt>(&self) -> Option<IntMatrix<U>> {
        let data = self
            .data
            .iter()
            .map(|x| U::from_big(&x.to_big()))
            .collect::<Option<Vec<_>>>()?;
        Some(IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn to_big(&self) -> IntMatrix<BigInt> {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(ExactInt::to_big).collect(),
        }
    }

    pub(crate) fn mul_slice(&self, u: &[T]) -> Result<Vec<T>> {
        check_dim(self.cols, u.len())?;
        let mut out = Vec::with_capacity(self.rows);
        for r in 0..self.rows {
            let mut acc = T::zero();
            for (a, x) in self.row(r).iter().zip(u) {
                if !a.is_zero() && !x.is_zero() {
                    acc = acc.add_c(&a.mul_c(x)?)?;
                }
            }
            out.push(acc);
        }
        Ok(out)
    }
}

impl<T: fmt::Display> fmt::Display for IntMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            write!(f, "[")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.data[r * self.cols + c])?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// The exact product `A·u`.
pub fn matvec<T: ExactInt>(a: &IntMatrix<T>, u: &IntVector<T>) -> Result<IntVector<T>> {
    Ok(IntVector::new(a.mul_slice(u.as_slice())?))
}

/// A basis of the saturated lattice `ker_Z(A)`.
///
/// Column operations bring `A` to column echelon form while the same
/// operations are recorded on an identity block; the recorded columns whose
/// `A`-part vanished span the kernel. Pivots are chosen by smallest absolute
/// value, ties broken by the lowest column index.
pub fn kernel_lattice_basis(a: &IntMatrix) -> Vec<IntVector> {
    let (d, n) = (a.rows(), a.cols());
    // cols[c] = (A-part, identity-part)
    let mut top: Vec<Vec<BigInt>> = (0..n).map(|c| a.column(c)).collect();
    let mut tail: Vec<Vec<BigInt>> = (0..n)
        .map(|c| {
            (0..n)
                .map(|i| {
                    if i == c {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect();
    let mut next = 0;
    for r in 0..d {
        loop {
            let pivot = (next..n)
                .filter(|&c| !top[c][r].is_zero())
                .min_by(|&x, &y| top[x][r].abs().cmp(&top[y][r].abs()).then(x.cmp(&y)));
            let Some(p) = pivot else { break };
            let mut others = false;
            for c in next..n {
                if c == p || top[c][r].is_zero() {
                    continue;
                }
                let q = top[c][r].div_floor(&top[p][r]);
                for i in 0..d {
                    let delta = &q * &top[p][i];
                    top[c][i] -= delta;
                }
                for i in 0..n {
                    let delta = &q * &tail[p][i];
                    tail[c][i] -= delta;
                }
                if !top[c][r].is_zero() {
                    others = true;
                }
            }
            if !others {
                top.swap(next, p);
                tail.swap(next, p);
                next += 1;
                break;
            }
        }
    }
    tail.drain(next..).map(IntVector::new).collect()
}

/// `v ⊑ u`: `v⁺ ≤ u⁺` and `v⁻ ≤ u⁻` componentwise.
pub fn conformal_leq<T: ExactInt>(v: &SignedVector<T>, u: &SignedVector<T>) -> Result<bool> {
    check_dim(u.len(), v.len())?;
    Ok(v.base
        .iter()
        .zip(u.base.iter())
        .all(|(x, y)| conformal_entry(x, y)))
}

#[inline]
pub(crate) fn conformal_entry<T: ExactInt>(x: &T, y: &T) -> bool {
    if x.is_zero() {
        true
    } else if x.is_positive() {
        y >= x
    } else {
        y <= x
    }
}

/// Number of blocks in which `u` has a nonzero entry.
pub fn block_type<T: ExactInt>(u: &IntVector<T>, block_sizes: &[usize]) -> Result<usize> {
    check_dim(u.len(), block_sizes.iter().sum())?;
    let mut start = 0;
    let mut count = 0;
    for &size in block_sizes {
        if u.as_slice()[start..start + size]
            .iter()
            .any(|x| !x.is_zero())
        {
            count += 1;
        }
        start += size;
    }
    Ok(count)
}

/// Convenience constructor for a `BigInt` vector.
pub fn ivec(values: &[i64]) -> IntVector {
    IntVector::from_i64s(values)
}

/// Convenience constructor for a `BigInt` signed vector.
pub fn svec(values: &[i64]) -> SignedVector {
    SignedVector::from_i64s(values)
}

/// Convenience constructor for a `BigInt` matrix.
pub fn imat(rows: &[&[i64]]) -> IntMatrix {
    IntMatrix::from_i64_rows(rows).expect("rows of equal length")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matvec_examples() {
        let a = imat(&[&[1, 2, 3, 4, 5, 6, 7], &[1, 1, 1, 1, 1, 1, 1]]);
        assert_eq!(
            matvec(&a, &ivec(&[1, -1, 1, -1, -1, 0, 1])).unwrap(),
            ivec(&[0, 0])
        );
        assert_eq!(
            matvec(&a, &ivec(&[1, 0, 1, 0, 0, 0, 1])).unwrap(),
            ivec(&[11, 3])
        );
        assert_eq!(matvec(&a, &IntVector::zeros(7)).unwrap(), ivec(&[0, 0]));
        assert!(matches!(
            matvec(&a, &ivec(&[1, 2])),
            Err(Error::DimensionMismatch {
                expected: 7,
                found: 2
            })
        ));
    }

    #[test]
    fn kernel_of_one_two() {
        let basis = kernel_lattice_basis(&imat(&[&[1, 2]]));
        assert_eq!(basis.len(), 1);
        let b = SignedVector::new(basis[0].clone()).canonical().unwrap();
        assert_eq!(b, svec(&[2, -1]));
    }

    #[test]
    fn kernel_of_identity_is_empty() {
        let a = imat(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert!(kernel_lattice_basis(&a).is_empty());
    }

    #[test]
    fn kernel_of_ones_row_has_rank_two() {
        let a = imat(&[&[1, 1, 1]]);
        let basis = kernel_lattice_basis(&a);
        assert_eq!(basis.len(), 2);
        for b in &basis {
            assert!(matvec(&a, b).unwrap().is_zero());
        }
        // (1,-1,0) and (0,1,-1) must be integer combinations: the 2x2 minors
        // of a saturated basis of this lattice have gcd 1.
        let m = |i: usize, j: usize| &basis[0][i] * &basis[1][j] - &basis[0][j] * &basis[1][i];
        let g = m(0, 1).gcd(&m(0, 2)).gcd(&m(1, 2));
        assert!(g.is_one());
    }

    #[test]
    fn kernel_with_zero_matrix_and_empty_shapes() {
        let a: IntMatrix = IntMatrix::zeros(0, 3);
        assert_eq!(kernel_lattice_basis(&a).len(), 3);
        let a: IntMatrix = IntMatrix::zeros(2, 0);
        assert!(kernel_lattice_basis(&a).is_empty());
    }

    #[test]
    fn conformal_examples() {
        assert!(conformal_leq(&svec(&[1, -1, 0]), &svec(&[2, -1, 1])).unwrap());
        assert!(!conformal_leq(&svec(&[1, 1]), &svec(&[1, -1])).unwrap());
        let u = svec(&[3, 0, -2]);
        assert!(conformal_leq(&u, &u).unwrap());
        assert!(conformal_leq(&svec(&[1]), &svec(&[1, 2])).is_err());
    }

    #[test]
    fn block_type_examples() {
        assert_eq!(block_type(&ivec(&[1, -1, 0, 0]), &[2, 2]).unwrap(), 1);
        assert_eq!(block_type(&ivec(&[0, 0, 0]), &[1, 2]).unwrap(), 0);
        assert_eq!(
            block_type(&ivec(&[1, -1, 1, -1, -1, 0, 1]), &[7]).unwrap(),
            1
        );
        assert!(block_type(&ivec(&[1, 2, 3]), &[1, 1]).is_err());
    }

    #[test]
    fn signed_parts() {
        let u = svec(&[3, -2, 0, -1]);
        assert_eq!(u.plus(), ivec(&[3, 0, 0, 0]));
        assert_eq!(u.minus().unwrap(), ivec(&[0, 2, 0, 1]));
        assert_eq!(svec(&[0, -1, 2]).canonical().unwrap(), svec(&[0, 1, -2]));
    }

    #[test]
    fn i64_overflow_is_reported() {
        let u: IntVector<i64> = IntVector::new(vec![i64::MAX, 1]);
        assert_eq!(u.one_norm(), Err(Overflow));
        let a: IntMatrix<i64> = IntMatrix::from_i64_rows(&[&[i64::MAX, 1]]).unwrap();
        assert_eq!(
            matvec(&a, &IntVector::new(vec![2, 0])),
            Err(Error::Overflow)
        );
    }
}
