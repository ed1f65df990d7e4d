//! Graver complexity `g(C,D) = max{‖v‖₁ : v ∈ G(D·G(C))}` of a pair of
//! matrices with the same number of columns.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{check_dim, Error, Result};
use crate::families::Family;
use crate::graver::{graver_basis_with, GraverOptions};
use crate::lattice::IntMatrix;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComplexityReport {
    #[serde(serialize_with = "display")]
    pub c: IntMatrix,
    #[serde(serialize_with = "display")]
    pub d: IntMatrix,
    /// Size of `G(C)` counting both signs.
    pub graver_of_c_size: usize,
    #[serde(serialize_with = "display")]
    pub complexity: BigInt,
}

fn display<S: serde::Serializer, V: std::fmt::Display>(
    v: &V,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

/// Columns `D·g` for every `g ∈ G(C)`, both signs, in basis order.
fn lifted_columns(
    c: &IntMatrix,
    d: &IntMatrix,
    opts: &GraverOptions,
) -> Result<(usize, Vec<Vec<BigInt>>)> {
    check_dim(c.cols(), d.cols())?;
    let g = graver_basis_with(c, opts)?;
    let full = g.full_set()?;
    let cols = full
        .iter()
        .map(|v| d.mul_slice(v.base().as_slice()))
        .collect::<Result<Vec<_>>>()?;
    Ok((full.len(), cols))
}

fn from_columns(rows: usize, cols: &[Vec<BigInt>]) -> Result<IntMatrix> {
    let data = (0..rows)
        .flat_map(|r| cols.iter().map(move |c| c[r].clone()))
        .collect();
    IntMatrix::new(rows, cols.len(), data)
}

/// `g(C,D)` computed on the reduced column set of `D·G(C)`.
///
/// Columns of `D·G(C)` come in pairs `±w`. Graver elements of a matrix with
/// repeated or negated columns are lifts of Graver elements of the matrix
/// with one representative per column (same 1-norm), the circuits
/// `e_i ∓ e_j` between copies (1-norm 2) and, for a zero column, its unit
/// vector (1-norm 1). So the maximum is read off the reduced matrix.
pub fn graver_complexity(c: &IntMatrix, d: &IntMatrix) -> Result<ComplexityReport> {
    graver_complexity_with(c, d, &GraverOptions::default())
}

pub fn graver_complexity_with(
    c: &IntMatrix,
    d: &IntMatrix,
    opts: &GraverOptions,
) -> Result<ComplexityReport> {
    let (size, cols) = lifted_columns(c, d, opts)?;
    let mut distinct: BTreeSet<Vec<BigInt>> = BTreeSet::new();
    let mut repeated = false;
    let mut zero = false;
    for col in cols {
        if col.iter().all(Zero::is_zero) {
            zero = true;
            continue;
        }
        let canonical = match col.iter().find(|x| !x.is_zero()) {
            Some(x) if x.is_negative() => col.iter().map(|x| -x).collect(),
            _ => col,
        };
        repeated |= !distinct.insert(canonical);
    }
    let reduced: Vec<Vec<BigInt>> = distinct.into_iter().collect();
    let mut complexity = BigInt::zero();
    if !reduced.is_empty() {
        let m = from_columns(d.rows(), &reduced)?;
        complexity = graver_basis_with(&m, opts)?.max_one_norm();
    }
    if repeated {
        complexity = complexity.max(BigInt::from(2));
    }
    if zero {
        complexity = complexity.max(BigInt::from(1));
    }
    Ok(ComplexityReport {
        c: c.clone(),
        d: d.clone(),
        graver_of_c_size: size,
        complexity,
    })
}

/// `g(C,D)` from the Graver basis of the full matrix `D·G(C)`.
pub fn graver_complexity_literal(c: &IntMatrix, d: &IntMatrix) -> Result<ComplexityReport> {
    let opts = GraverOptions::default();
    let (size, cols) = lifted_columns(c, d, &opts)?;
    let complexity = if cols.is_empty() {
        BigInt::zero()
    } else {
        graver_basis_with(&from_columns(d.rows(), &cols)?, &opts)?.max_one_norm()
    };
    Ok(ComplexityReport {
        c: c.clone(),
        d: d.clone(),
        graver_of_c_size: size,
        complexity,
    })
}

/// The row `(1,…,1)` of length `m`.
pub fn ones_row(m: usize) -> IntMatrix {
    IntMatrix::from_rows(vec![vec![BigInt::from(1); m]], m).expect("one row")
}

/// The row `(1,2,…,m)`.
pub fn ramp_row(m: usize) -> IntMatrix {
    IntMatrix::from_rows(vec![(1..=m).map(BigInt::from).collect()], m).expect("one row")
}

/// The pair whose Graver complexity bounds the block type of the family's
/// Graver elements with blocks of size `m`.
pub fn family_pair(family: Family, m: usize) -> (IntMatrix, IntMatrix) {
    match family {
        Family::S => (ones_row(m), ramp_row(m)),
        Family::H => (ramp_row(m), ones_row(m)),
    }
}

/// `2m−3` for the scroll family, the bound `4m−7` for the H family.
pub fn type_bound_for_family(family: Family, m: usize) -> Result<usize> {
    if m < 2 {
        return Err(Error::InvalidArgument(format!("block size {m} is below 2")));
    }
    Ok(match family {
        Family::S => 2 * m - 3,
        Family::H => 4 * m - 7,
    })
}
