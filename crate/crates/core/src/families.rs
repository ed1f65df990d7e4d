//! The two partition-indexed matrix families, N-fold matrices and the
//! dominance order.
//!
//! A partition `n₁ ≥ … ≥ n_c ≥ 1` describes `c` blocks of columns. The scroll
//! matrix carries the weights `1..nᵢ` in its first row and one block
//! indicator row per block; the `H` matrix swaps the roles, putting an
//! all-ones row on top and the weights of block `i` in row `i`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::lattice::IntMatrix;
use crate::scalar::ExactInt;

/// A nonincreasing sequence of positive parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Partition(Vec<usize>);

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidPartition(
                "a partition needs at least one part".into(),
            ));
        }
        if parts.contains(&0) {
            return Err(Error::InvalidPartition(format!(
                "{parts:?}: parts must be positive"
            )));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!(
                "{parts:?}: parts must be nonincreasing"
            )));
        }
        Ok(Self(parts))
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    /// Number of parts `c`.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Sum of the parts, i.e. the number of matrix columns.
    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn to_scroll_label(&self) -> ScrollLabel {
        ScrollLabel(self.0.iter().map(|p| p - 1).collect())
    }

    /// All partitions of `n`, in reverse lexicographic order.
    pub fn all_of(n: usize) -> Vec<Partition> {
        fn rec(rest: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Partition>) {
            if rest == 0 {
                out.push(Partition(prefix.clone()));
                return;
            }
            for p in (1..=rest.min(max)).rev() {
                prefix.push(p);
                rec(rest - p, p, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if n > 0 {
            rec(n, n, &mut Vec::new(), &mut out);
        }
        out
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, &self.0)
    }
}

impl FromStr for Partition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Partition::new(parse_tuple(s)?)
    }
}

/// Scroll degrees `m₁ ≥ … ≥ m_c ≥ 0`; `S(m₁,…,m_c)` has partition `(m₁+1,…,m_c+1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ScrollLabel(Vec<usize>);

impl ScrollLabel {
    pub fn new(degrees: Vec<usize>) -> Result<Self> {
        if degrees.is_empty() {
            return Err(Error::InvalidPartition(
                "a scroll needs at least one degree".into(),
            ));
        }
        if degrees.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!(
                "{degrees:?}: degrees must be nonincreasing"
            )));
        }
        Ok(Self(degrees))
    }

    pub fn degrees(&self) -> &[usize] {
        &self.0
    }

    pub fn to_partition(&self) -> Partition {
        Partition(self.0.iter().map(|m| m + 1).collect())
    }
}

impl fmt::Display for ScrollLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, &self.0)
    }
}

impl FromStr for ScrollLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ScrollLabel::new(parse_tuple(s)?)
    }
}

fn write_tuple(f: &mut fmt::Formatter<'_>, xs: &[usize]) -> fmt::Result {
    write!(f, "(")?;
    for (i, x) in xs.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{x}")?;
    }
    write!(f, ")")
}

/// Parses `6`, `5,4`, `(5,4)` or `5 4`.
pub(crate) fn parse_tuple(s: &str) -> Result<Vec<usize>> {
    let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
    inner
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| Error::InvalidPartition(format!("cannot parse {t:?} in {s:?}")))
        })
        .collect()
}

/// Which of the two families a label belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    S,
    H,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::S => "S",
            Family::H => "H",
        })
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "S" | "s" => Ok(Family::S),
            "H" | "h" => Ok(Family::H),
            other => Err(Error::InvalidArgument(format!(
                "unknown family {other:?} (expected S or H)"
            ))),
        }
    }
}

/// A member of one of the two families, stored by its partition.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FamilyLabel {
    pub family: Family,
    pub partition: Partition,
}

impl FamilyLabel {
    pub fn scroll(degrees: &[usize]) -> Result<Self> {
        Ok(Self {
            family: Family::S,
            partition: ScrollLabel::new(degrees.to_vec())?.to_partition(),
        })
    }

    pub fn h(parts: &[usize]) -> Result<Self> {
        Ok(Self {
            family: Family::H,
            partition: Partition::new(parts.to_vec())?,
        })
    }

    pub fn matrix<T: ExactInt>(&self) -> IntMatrix<T> {
        match self.family {
            Family::S => scroll_matrix(&self.partition),
            Family::H => h_matrix(&self.partition),
        }
    }

    /// Parses `S(5,4)`, `S5,4`, `S6`, `H(4,3)`, `H4_3`. Scroll labels are
    /// degrees, `H` labels are partition parts.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut chars = s.chars();
        let family: Family = chars
            .next()
            .ok_or_else(|| Error::InvalidArgument("empty label".into()))?
            .to_string()
            .parse()?;
        let rest = chars.as_str().replace('_', ",");
        let values = parse_tuple(&rest)?;
        match family {
            Family::S => Self::scroll(&values),
            Family::H => Self::h(&values),
        }
    }
}

impl fmt::Display for FamilyLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::S => write!(f, "S{}", self.partition.to_scroll_label()),
            Family::H => write!(f, "H{}", self.partition),
        }
    }
}

fn block_starts(p: &Partition) -> Vec<usize> {
    p.parts()
        .iter()
        .scan(0, |acc, &n| {
            let start = *acc;
            *acc += n;
            Some(start)
        })
        .collect()
}

/// The `(c+1)×n` matrix of the scroll `S(n₁−1,…,n_c−1)`.
pub fn scroll_matrix<T: ExactInt>(p: &Partition) -> IntMatrix<T> {
    let c = p.len();
    let mut m = IntMatrix::zeros(c + 1, p.total());
    for (i, (&size, start)) in p.parts().iter().zip(block_starts(p)).enumerate() {
        for k in 0..size {
            m.set(0, start + k, T::from_usize(k + 1).expect("small"));
            m.set(i + 1, start + k, T::one());
        }
    }
    m
}

/// The `(c+1)×n` matrix `A_H(n₁,…,n_c)`.
pub fn h_matrix<T: ExactInt>(p: &Partition) -> IntMatrix<T> {
    let c = p.len();
    let mut m = IntMatrix::zeros(c + 1, p.total());
    for (i, (&size, start)) in p.parts().iter().zip(block_starts(p)).enumerate() {
        for k in 0..size {
            m.set(0, start + k, T::one());
            m.set(i + 1, start + k, T::from_usize(k + 1).expect("small"));
        }
    }
    m
}

/// `[A,B]^(N)`: `B` repeated along the top, `A` on the block diagonal.
pub fn nfold_matrix<T: ExactInt>(
    a: &IntMatrix<T>,
    b: &IntMatrix<T>,
    n: usize,
) -> Result<IntMatrix<T>> {
    check_dim(a.cols(), b.cols())?;
    if n < 1 {
        return Err(Error::InvalidArgument("N-fold requires N >= 1".into()));
    }
    let k = a.cols();
    let mut m = IntMatrix::zeros(b.rows() + n * a.rows(), n * k);
    for blk in 0..n {
        for r in 0..b.rows() {
            for c in 0..k {
                m.set(r, blk * k + c, b.get(r, c).clone());
            }
        }
        for r in 0..a.rows() {
            for c in 0..k {
                m.set(
                    b.rows() + blk * a.rows() + r,
                    blk * k + c,
                    a.get(r, c).clone(),
                );
            }
        }
    }
    Ok(m)
}

/// `small ⪯ big`: `small` has at most as many parts and each is bounded by
/// the corresponding part of `big`.
pub fn dominates(big: &Partition, small: &Partition) -> bool {
    small.len() <= big.len() && small.parts().iter().zip(big.parts()).all(|(s, b)| s <= b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::imat;
    use num_bigint::BigInt;

    fn part(xs: &[usize]) -> Partition {
        Partition::new(xs.to_vec()).unwrap()
    }

    #[test]
    fn scroll_matrix_of_seven() {
        let m: IntMatrix<BigInt> = scroll_matrix(&part(&[7]));
        assert_eq!(m, imat(&[&[1, 2, 3, 4, 5, 6, 7], &[1, 1, 1, 1, 1, 1, 1]]));
    }

    #[test]
    fn scroll_matrix_of_five_four_three() {
        let m: IntMatrix<BigInt> = scroll_matrix(&part(&[5, 4, 3]));
        assert_eq!(
            m,
            imat(&[
                &[1, 2, 3, 4, 5, 1, 2, 3, 4, 1, 2, 3],
                &[1, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0],
                &[0, 0, 0, 0, 0, 1, 1, 1, 1, 0, 0, 0],
                &[0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1],
            ])
        );
    }

    #[test]
    fn scroll_matrix_single_column() {
        let m: IntMatrix<BigInt> = scroll_matrix(&part(&[1]));
        assert_eq!(m, imat(&[&[1], &[1]]));
    }

    #[test]
    fn s54_uses_six_ones_in_the_first_indicator_row() {
        let m: IntMatrix<BigInt> = FamilyLabel::scroll(&[5, 4]).unwrap().matrix();
        assert_eq!(
            m.row(1).iter().filter(|x| **x == BigInt::from(1)).count(),
            6
        );
        assert_eq!(
            m.row(2).iter().filter(|x| **x == BigInt::from(1)).count(),
            5
        );
    }

    #[test]
    fn h_matrix_examples() {
        let m: IntMatrix<BigInt> = h_matrix(&part(&[6, 2]));
        assert_eq!(
            m,
            imat(&[
                &[1, 1, 1, 1, 1, 1, 1, 1],
                &[1, 2, 3, 4, 5, 6, 0, 0],
                &[0, 0, 0, 0, 0, 0, 1, 2]
            ])
        );
        let m: IntMatrix<BigInt> = h_matrix(&part(&[4, 3]));
        assert_eq!(
            m,
            imat(&[
                &[1, 1, 1, 1, 1, 1, 1],
                &[1, 2, 3, 4, 0, 0, 0],
                &[0, 0, 0, 0, 1, 2, 3]
            ])
        );
        let m: IntMatrix<BigInt> = h_matrix(&part(&[2, 2]));
        assert_eq!(m, imat(&[&[1, 1, 1, 1], &[1, 2, 0, 0], &[0, 0, 1, 2]]));
    }

    #[test]
    fn nfold_examples() {
        let a = imat(&[&[1, 1]]);
        let b = imat(&[&[1, 2]]);
        assert_eq!(
            nfold_matrix(&a, &b, 2).unwrap(),
            imat(&[&[1, 2, 1, 2], &[1, 1, 0, 0], &[0, 0, 1, 1]])
        );
        assert_eq!(nfold_matrix(&a, &b, 1).unwrap(), imat(&[&[1, 2], &[1, 1]]));
        assert!(nfold_matrix(&a, &b, 0).is_err());
        assert!(nfold_matrix(&a, &imat(&[&[1, 2, 3]]), 2).is_err());

        let c = imat(&[&[1, 1, 1, 1]]);
        let d = imat(&[&[1, 2, 3, 4]]);
        let s: IntMatrix<BigInt> = scroll_matrix(&part(&[4, 4]));
        assert_eq!(nfold_matrix(&c, &d, 2).unwrap(), s);
        let h: IntMatrix<BigInt> = h_matrix(&part(&[4, 4, 4]));
        assert_eq!(nfold_matrix(&d, &c, 3).unwrap(), h);
    }

    #[test]
    fn dominance_examples() {
        assert!(dominates(&part(&[7, 1]), &part(&[7])));
        assert!(!dominates(&part(&[6, 3]), &part(&[5, 4])));
        assert!(!dominates(&part(&[5, 4]), &part(&[6, 3])));
        assert!(dominates(&part(&[5, 4]), &part(&[5, 4])));
    }

    #[test]
    fn one_part_matrices_differ_by_a_row_swap() {
        for n in 1..9 {
            let s: IntMatrix<BigInt> = scroll_matrix(&part(&[n]));
            let h: IntMatrix<BigInt> = h_matrix(&part(&[n]));
            assert_eq!(s.row(0), h.row(1));
            assert_eq!(s.row(1), h.row(0));
        }
    }

    #[test]
    fn partitions_are_validated() {
        assert!(Partition::new(vec![]).is_err());
        assert!(Partition::new(vec![2, 3]).is_err());
        assert!(Partition::new(vec![2, 0]).is_err());
        assert!(ScrollLabel::new(vec![3, 0]).is_ok());
    }

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (1..=8).map(|n| Partition::all_of(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 3, 5, 7, 11, 15, 22]);
    }

    #[test]
    fn label_parsing() {
        assert_eq!(FamilyLabel::parse("S6").unwrap().partition, part(&[7]));
        assert_eq!(
            FamilyLabel::parse("S(5,4)").unwrap().partition,
            part(&[6, 5])
        );
        assert_eq!(FamilyLabel::parse("H4_3").unwrap().partition, part(&[4, 3]));
        assert_eq!(
            FamilyLabel::parse("S(4,3,2)").unwrap().to_string(),
            "S(4,3,2)"
        );
        assert_eq!(FamilyLabel::parse("H(6,2)").unwrap().to_string(), "H(6,2)");
        assert!(FamilyLabel::parse("X3").is_err());
        assert!(FamilyLabel::parse("S3,4").is_err());
    }
}
