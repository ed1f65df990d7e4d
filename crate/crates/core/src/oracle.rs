//! Brute-force reference computations used to cross-check the engines.
//!
//! Nothing here calls into `graver` or `fiber`.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::lattice::{norm_lex_cmp, IntMatrix, IntVector, SignedVector};

fn small_entries(a: &IntMatrix) -> Result<Vec<Vec<i128>>> {
    (0..a.rows())
        .map(|r| {
            a.row(r)
                .iter()
                .map(|x| {
                    x.to_i128().ok_or_else(|| {
                        Error::InvalidArgument("oracle entries must fit in i128".into())
                    })
                })
                .collect()
        })
        .collect()
}

/// All nonzero `u` with `Au = 0` and `‖u‖₁ ≤ norm_bound`, one per `±` pair,
/// sorted by 1-norm and then lexicographically.
pub fn enumerate_kernel_bounded(a: &IntMatrix, norm_bound: usize) -> Result<Vec<SignedVector>> {
    if norm_bound == 0 {
        return Err(Error::InvalidArgument(
            "norm bound must be at least 1".into(),
        ));
    }
    let rows = small_entries(a)?;
    let n = a.cols();
    // Largest |A[r][i]| over columns i ≥ c, per row.
    let mut tail_max = vec![vec![0i128; n + 1]; rows.len()];
    for (r, row) in rows.iter().enumerate() {
        for c in (0..n).rev() {
            tail_max[r][c] = tail_max[r][c + 1].max(row[c].abs());
        }
    }
    let mut out = Vec::new();
    let mut current = vec![0i64; n];
    let mut residual = vec![0i128; rows.len()];
    walk(
        &rows,
        &tail_max,
        0,
        norm_bound as i128,
        false,
        &mut current,
        &mut residual,
        &mut out,
    );
    out.sort_by(norm_lex_cmp);
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn walk(
    rows: &[Vec<i128>],
    tail_max: &[Vec<i128>],
    col: usize,
    budget: i128,
    started: bool,
    current: &mut [i64],
    residual: &mut [i128],
    out: &mut Vec<SignedVector>,
) {
    for (r, res) in residual.iter().enumerate() {
        if res.abs() > budget * tail_max[r][col] {
            return;
        }
    }
    if col == current.len() {
        if started && residual.iter().all(|&x| x == 0) {
            out.push(SignedVector::new(IntVector::new(
                current.iter().map(|&x| BigInt::from(x)).collect(),
            )));
        }
        return;
    }
    // Before the first nonzero entry only positive values are tried.
    let low = if started { -budget } else { 0 };
    for value in low..=budget {
        let cost = value.abs();
        current[col] = value as i64;
        for (r, row) in rows.iter().enumerate() {
            residual[r] += row[col] * value;
        }
        walk(
            rows,
            tail_max,
            col + 1,
            budget - cost,
            started || value != 0,
            current,
            residual,
            out,
        );
        for (r, row) in rows.iter().enumerate() {
            residual[r] -= row[col] * value;
        }
    }
    current[col] = 0;
}

fn below(v: &[i128], u: &[i128]) -> bool {
    v.iter()
        .zip(u)
        .all(|(&x, &y)| x == 0 || (x.signum() == y.signum() && x.abs() <= y.abs()))
}

/// Drops every vector that has a different input (or its negation) below it
/// in the conformal order.
pub fn filter_primitive(vectors: &[SignedVector]) -> Vec<SignedVector> {
    let small: Vec<Vec<i128>> = vectors
        .iter()
        .map(|v| {
            v.base()
                .iter()
                .map(|x| x.to_i128().expect("oracle entries fit in i128"))
                .collect()
        })
        .collect();
    let negated: Vec<Vec<i128>> = small
        .iter()
        .map(|v| v.iter().map(|x| -x).collect())
        .collect();
    vectors
        .iter()
        .enumerate()
        .filter(|&(i, _)| {
            !(0..small.len()).any(|j| {
                j != i
                    && small[j] != small[i]
                    && (below(&small[j], &small[i]) || below(&negated[j], &small[i]))
            })
        })
        .map(|(_, v)| v.clone())
        .collect()
}

/// Number of multisets of `degree` integers from `1..=max_part` summing to
/// `weight`.
pub fn count_curve_fiber(weight: usize, degree: usize, max_part: usize) -> u128 {
    // table[k][w]: multisets of size k with sum w using the parts seen so far.
    let mut table = vec![vec![0u128; weight + 1]; degree + 1];
    table[0][0] = 1;
    for part in 1..=max_part.min(weight) {
        for k in 1..=degree {
            for w in part..=weight {
                table[k][w] += table[k - 1][w - part];
            }
        }
    }
    table[degree][weight]
}
