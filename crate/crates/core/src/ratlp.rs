//! Exact feasibility of `{x ≥ 0 : Mx = r}` over the rationals.
//!
//! Phase-I simplex on a dense tableau with Bland's rule. The answer is
//! always a certificate: a feasible point, or a Farkas vector `y` with
//! `yᵀM ≥ 0` and `yᵀr < 0`. Every certificate is re-checked by substitution
//! before it is returned.

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

use crate::error::{check_dim, Result};
use crate::scalar::{ratio, with_fallback, ExactInt, Overflow};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpProblem<T: ExactInt = BigInt> {
    rows: usize,
    cols: usize,
    matrix: Vec<Ratio<T>>,
    rhs: Vec<Ratio<T>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpCertificate<T: ExactInt = BigInt> {
    Feasible { x: Vec<Ratio<T>> },
    Infeasible { y: Vec<Ratio<T>> },
}

impl<T: ExactInt> LpCertificate<T> {
    pub fn is_feasible(&self) -> bool {
        matches!(self, LpCertificate::Feasible { .. })
    }

    pub fn to_big(&self) -> LpCertificate<BigInt> {
        match self {
            LpCertificate::Feasible { x } => LpCertificate::Feasible {
                x: x.iter().map(ratio::to_big).collect(),
            },
            LpCertificate::Infeasible { y } => LpCertificate::Infeasible {
                y: y.iter().map(ratio::to_big).collect(),
            },
        }
    }
}

impl<T: ExactInt> LpProblem<T> {
    /// `matrix` is row-major with `rows × cols` entries.
    pub fn new(
        rows: usize,
        cols: usize,
        matrix: Vec<Ratio<T>>,
        rhs: Vec<Ratio<T>>,
    ) -> Result<Self> {
        check_dim(rows * cols, matrix.len())?;
        check_dim(rows, rhs.len())?;
        Ok(Self {
            rows,
            cols,
            matrix,
            rhs,
        })
    }

    /// Builds `Σ λ_c · columns[c] = rhs` from integer data.
    pub fn from_integer_columns(columns: &[Vec<T>], rhs: &[T]) -> Result<Self> {
        let rows = rhs.len();
        let cols = columns.len();
        for c in columns {
            check_dim(rows, c.len())?;
        }
        let mut matrix = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in columns {
                matrix.push(Ratio::from_integer(c[r].clone()));
            }
        }
        Ok(Self {
            rows,
            cols,
            matrix,
            rhs: rhs.iter().cloned().map(Ratio::from_integer).collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, r: usize, c: usize) -> &Ratio<T> {
        &self.matrix[r * self.cols + c]
    }

    pub fn rhs(&self) -> &[Ratio<T>] {
        &self.rhs
    }

    /// Exact check of a certificate against this system.
    pub fn verify(&self, cert: &LpCertificate<T>) -> Result<bool, Overflow> {
        match cert {
            LpCertificate::Feasible { x } => {
                if x.len() != self.cols || x.iter().any(Signed::is_negative) {
                    return Ok(false);
                }
                for r in 0..self.rows {
                    let mut acc = Ratio::zero();
                    for (c, xc) in x.iter().enumerate() {
                        if !xc.is_zero() {
                            acc = ratio::add(&acc, &ratio::mul(self.entry(r, c), xc)?)?;
                        }
                    }
                    if acc != self.rhs[r] {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            LpCertificate::Infeasible { y } => {
                if y.len() != self.rows {
                    return Ok(false);
                }
                for c in 0..self.cols {
                    let mut acc = Ratio::zero();
                    for (r, yr) in y.iter().enumerate() {
                        if !yr.is_zero() {
                            acc = ratio::add(&acc, &ratio::mul(yr, self.entry(r, c))?)?;
                        }
                    }
                    if acc.is_negative() {
                        return Ok(false);
                    }
                }
                let mut acc = Ratio::zero();
                for (yr, br) in y.iter().zip(&self.rhs) {
                    acc = ratio::add(&acc, &ratio::mul(yr, br)?)?;
                }
                Ok(acc.is_negative())
            }
        }
    }

    pub fn convert<U: ExactInt>(&self) -> Option<LpProblem<U>> {
        let conv = |v: &Vec<Ratio<T>>| -> Option<Vec<Ratio<U>>> {
            v.iter()
                .map(|q| ratio::from_big(&ratio::to_big(q)))
                .collect()
        };
        Some(LpProblem {
            rows: self.rows,
            cols: self.cols,
            matrix: conv(&self.matrix)?,
            rhs: conv(&self.rhs)?,
        })
    }
}

/// Decides feasibility, returning a verified certificate.
pub fn solve_feasibility(p: &LpProblem) -> LpCertificate {
    with_fallback(
        || match p.convert::<i64>() {
            Some(small) => Ok(solve_generic(&small)?.to_big()),
            None => Err(Overflow),
        },
        || solve_generic(p),
    )
    .expect("arbitrary precision never overflows")
}

/// The simplex over scalar `T`; fails only on machine overflow.
pub fn solve_generic<T: ExactInt>(p: &LpProblem<T>) -> Result<LpCertificate<T>, Overflow> {
    let cert = phase_one(p)?;
    assert!(p.verify(&cert)?, "simplex produced an invalid certificate");
    Ok(cert)
}

fn phase_one<T: ExactInt>(p: &LpProblem<T>) -> Result<LpCertificate<T>, Overflow> {
    let (m, k) = (p.rows, p.cols);
    if m == 0 {
        return Ok(LpCertificate::Feasible {
            x: vec![Ratio::zero(); k],
        });
    }
    let width = k + m;
    let flip: Vec<bool> = p.rhs.iter().map(Signed::is_negative).collect();
    let mut tab: Vec<Vec<Ratio<T>>> = Vec::with_capacity(m);
    let mut rhs: Vec<Ratio<T>> = Vec::with_capacity(m);
    for r in 0..m {
        let mut row = Vec::with_capacity(width);
        for c in 0..k {
            let v = p.entry(r, c).clone();
            row.push(if flip[r] { -v } else { v });
        }
        for a in 0..m {
            row.push(if a == r { Ratio::one() } else { Ratio::zero() });
        }
        tab.push(row);
        rhs.push(if flip[r] {
            -p.rhs[r].clone()
        } else {
            p.rhs[r].clone()
        });
    }
    let mut basis: Vec<usize> = (k..width).collect();
    // Reduced costs of the phase-I objective and the negated objective value.
    let mut cost = vec![Ratio::zero(); width];
    let mut neg_value = Ratio::zero();
    for r in 0..m {
        for c in 0..k {
            cost[c] = ratio::sub(&cost[c], &tab[r][c])?;
        }
        neg_value = ratio::sub(&neg_value, &rhs[r])?;
    }

    while let Some(enter) = cost.iter().position(Signed::is_negative) {
        let mut leave: Option<(usize, Ratio<T>)> = None;
        for r in 0..m {
            if !tab[r][enter].is_positive() {
                continue;
            }
            let q = ratio::div(&rhs[r], &tab[r][enter])?;
            let better = match &leave {
                None => true,
                Some((lr, lq)) => q < *lq || (q == *lq && basis[r] < basis[*lr]),
            };
            if better {
                leave = Some((r, q));
            }
        }
        let (pr, _) = leave.expect("phase-I objective is bounded below");
        pivot(&mut tab, &mut rhs, &mut cost, &mut neg_value, pr, enter)?;
        basis[pr] = enter;
    }

    if neg_value.is_zero() {
        let mut x = vec![Ratio::zero(); k];
        for (r, &b) in basis.iter().enumerate() {
            if b < k {
                x[b] = rhs[r].clone();
            }
        }
        Ok(LpCertificate::Feasible { x })
    } else {
        // The duals of the flipped system are 1 − (reduced cost of each
        // artificial); undo the row flips and negate.
        let mut y = Vec::with_capacity(m);
        for r in 0..m {
            let dual = ratio::sub(&Ratio::one(), &cost[k + r])?;
            y.push(if flip[r] { dual } else { -dual });
        }
        Ok(LpCertificate::Infeasible { y })
    }
}

fn pivot<T: ExactInt>(
    tab: &mut [Vec<Ratio<T>>],
    rhs: &mut [Ratio<T>],
    cost: &mut [Ratio<T>],
    neg_value: &mut Ratio<T>,
    pr: usize,
    pc: usize,
) -> Result<(), Overflow> {
    let width = tab[pr].len();
    let inv = ratio::div(&Ratio::one(), &tab[pr][pc])?;
    for c in 0..width {
        if !tab[pr][c].is_zero() {
            tab[pr][c] = ratio::mul(&tab[pr][c], &inv)?;
        }
    }
    rhs[pr] = ratio::mul(&rhs[pr], &inv)?;
    let (before, rest) = tab.split_at_mut(pr);
    let (prow, after) = rest.split_first_mut().expect("pivot row exists");
    for (offset, row) in before.iter_mut().chain(after.iter_mut()).enumerate() {
        let r = if offset < pr { offset } else { offset + 1 };
        let f = row[pc].clone();
        if f.is_zero() {
            continue;
        }
        for c in 0..width {
            if !prow[c].is_zero() {
                row[c] = ratio::sub(&row[c], &ratio::mul(&f, &prow[c])?)?;
            }
        }
        rhs[r] = ratio::sub(&rhs[r], &ratio::mul(&f, &rhs[pr])?)?;
    }
    let f = cost[pc].clone();
    if !f.is_zero() {
        for c in 0..width {
            if !prow[c].is_zero() {
                cost[c] = ratio::sub(&cost[c], &ratio::mul(&f, &prow[c])?)?;
            }
        }
        *neg_value = ratio::sub(neg_value, &ratio::mul(&f, &rhs[pr])?)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Ratio<BigInt> {
        Ratio::from_integer(BigInt::from(n))
    }

    fn problem(rows: &[&[i64]], rhs: &[i64]) -> LpProblem {
        let cols = rows.first().map_or(0, |r| r.len());
        LpProblem::new(
            rows.len(),
            cols,
            rows.iter().flat_map(|r| r.iter().map(|&x| q(x))).collect(),
            rhs.iter().map(|&x| q(x)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn two_variable_infeasible() {
        let p = problem(&[&[1, 1], &[1, -1]], &[1, 3]);
        let cert = solve_feasibility(&p);
        assert_eq!(
            cert,
            LpCertificate::Infeasible {
                y: vec![q(1), q(-1)]
            }
        );
        assert!(p.verify(&cert).unwrap());
    }

    #[test]
    fn half_half_combination() {
        // g⁺ of the S(5,4) witness as a convex combination of two fiber points.
        let u1 = [0, 0, 0, 0, 2, 0, 2, 0, 0, 0, 0];
        let u2 = [2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 2];
        let gp = [1, 0, 0, 0, 1, 0, 1, 0, 0, 0, 1];
        let mut cols: Vec<Vec<BigInt>> = [u1, u2]
            .iter()
            .map(|u| u.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        for c in cols.iter_mut() {
            c.push(BigInt::one());
        }
        let mut rhs: Vec<BigInt> = gp.iter().map(|&x| BigInt::from(x)).collect();
        rhs.push(BigInt::one());
        let p = LpProblem::from_integer_columns(&cols, &rhs).unwrap();
        let half = Ratio::new(BigInt::one(), BigInt::from(2));
        assert_eq!(
            solve_feasibility(&p),
            LpCertificate::Feasible {
                x: vec![half.clone(), half]
            }
        );
    }

    #[test]
    fn no_rows_is_feasible() {
        let p: LpProblem = LpProblem::new(0, 3, vec![], vec![]).unwrap();
        assert_eq!(
            solve_feasibility(&p),
            LpCertificate::Feasible {
                x: vec![q(0), q(0), q(0)]
            }
        );
    }

    #[test]
    fn negative_rhs_and_zero_rows() {
        let p = problem(&[&[-1, -2], &[0, 0]], &[-4, 0]);
        let cert = solve_feasibility(&p);
        assert!(cert.is_feasible());
        let p = problem(&[&[1, 1], &[0, 0]], &[1, 2]);
        assert!(!solve_feasibility(&p).is_feasible());
    }

    #[test]
    fn degenerate_cycling_prone_instance() {
        // A classic degenerate system; Bland's rule must terminate.
        let p = problem(
            &[
                &[1, -2, -3, 1, 0, 0],
                &[2, -1, -1, 0, 1, 0],
                &[0, 0, 0, 0, 0, 1],
            ],
            &[0, 0, 1],
        );
        assert!(solve_feasibility(&p).is_feasible());
    }

    #[test]
    fn machine_overflow_falls_back() {
        let big = i64::MAX / 3;
        let p = problem(&[&[big, 1], &[1, big]], &[big, big]);
        let cert = solve_feasibility(&p);
        assert!(p.verify(&cert).unwrap());
    }
}
