//! Fibers `{u ≥ 0 : Au = b}` of nonnegative matrices and the edge test for
//! universal Gröbner basis membership.
//!
//! A primitive `u` belongs to the universal Gröbner basis iff `[u⁻, u⁺]` is an
//! edge of the convex hull of its fiber. Both endpoints are checked for
//! vertexhood first, then the segment itself.

use std::time::Instant;

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

use crate::error::{check_dim, Error, Result};
use crate::lattice::{IntMatrix, IntVector, SignedVector};
use crate::ratlp::{solve_generic, LpCertificate, LpProblem};
use crate::scalar::{ratio, with_fallback, ExactInt};

/// All lattice points of one fiber, sorted lexicographically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fiber<T = BigInt> {
    matrix: IntMatrix<T>,
    rhs: IntVector<T>,
    points: Vec<IntVector<T>>,
}

impl<T: ExactInt> Fiber<T> {
    pub fn matrix(&self) -> &IntMatrix<T> {
        &self.matrix
    }

    pub fn rhs(&self) -> &IntVector<T> {
        &self.rhs
    }

    pub fn points(&self) -> &[IntVector<T>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, u: &IntVector<T>) -> bool {
        self.points
            .binary_search_by(|p| p.as_slice().cmp(u.as_slice()))
            .is_ok()
    }
}

/// Which end of the segment `[u⁻, u⁺]` a certificate talks about.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Endpoint {
    Plus,
    Minus,
}

/// Fiber points with their coefficients.
pub type Combination<T> = Vec<(IntVector<T>, Ratio<T>)>;

/// Outcome of the membership test with the evidence behind a rejection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UgbVerdict<T: ExactInt = BigInt> {
    Member,
    /// The endpoint is a convex combination of other fiber points.
    NotVertex {
        endpoint: Endpoint,
        combination: Combination<T>,
    },
    /// `u⁺ − u⁻ = Σ λ_v (v − u⁻)` with `λ ≥ 0` over other fiber points.
    NotEdge {
        decomposition: Combination<T>,
    },
}

impl<T: ExactInt> UgbVerdict<T> {
    pub fn is_member(&self) -> bool {
        matches!(self, UgbVerdict::Member)
    }

    pub fn to_big(&self) -> UgbVerdict<BigInt> {
        let conv = |c: &Combination<T>| {
            c.iter()
                .map(|(v, l)| (v.to_big(), ratio::to_big(l)))
                .collect()
        };
        match self {
            UgbVerdict::Member => UgbVerdict::Member,
            UgbVerdict::NotVertex {
                endpoint,
                combination,
            } => UgbVerdict::NotVertex {
                endpoint: *endpoint,
                combination: conv(combination),
            },
            UgbVerdict::NotEdge { decomposition } => UgbVerdict::NotEdge {
                decomposition: conv(decomposition),
            },
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct MembershipOptions {
    /// Enumerate the whole fiber instead of the part supported on `supp(u)`.
    pub full_fiber: bool,
    pub deadline: Option<Instant>,
}

fn check_fiber_matrix<T: ExactInt>(a: &IntMatrix<T>) -> Result<()> {
    if !a.is_nonnegative() {
        return Err(Error::InvalidArgument(
            "fiber matrix has a negative entry".into(),
        ));
    }
    if a.has_zero_column() {
        return Err(Error::UnboundedFiber);
    }
    Ok(())
}

/// Enumerates `{u ∈ ℤⁿ : u ≥ 0, Au = b}` by depth-first search.
pub fn enumerate_fiber<T: ExactInt>(a: &IntMatrix<T>, b: &IntVector<T>) -> Result<Fiber<T>> {
    enumerate_fiber_until(a, b, None)
}

/// As [`enumerate_fiber`], giving up with [`Error::Timeout`] after `deadline`.
pub fn enumerate_fiber_until<T: ExactInt>(
    a: &IntMatrix<T>,
    b: &IntVector<T>,
    deadline: Option<Instant>,
) -> Result<Fiber<T>> {
    check_dim(a.rows(), b.len())?;
    check_fiber_matrix(a)?;
    if b.iter().any(Signed::is_negative) {
        return Err(Error::NegativeRhs);
    }
    let mut search = Search {
        a,
        last_positive: (0..a.rows())
            .map(|r| (0..a.cols()).rev().find(|&c| a.get(r, c).is_positive()))
            .collect(),
        residual: b.as_slice().to_vec(),
        current: vec![T::zero(); a.cols()],
        points: Vec::new(),
        deadline,
        nodes: 0,
    };
    search.descend(0)?;
    Ok(Fiber {
        matrix: a.clone(),
        rhs: b.clone(),
        points: search.points,
    })
}

struct Search<'a, T> {
    a: &'a IntMatrix<T>,
    last_positive: Vec<Option<usize>>,
    residual: Vec<T>,
    current: Vec<T>,
    points: Vec<IntVector<T>>,
    deadline: Option<Instant>,
    nodes: u64,
}

impl<T: ExactInt> Search<'_, T> {
    fn descend(&mut self, col: usize) -> Result<()> {
        self.nodes += 1;
        if self.nodes.is_multiple_of(4096) && self.deadline.is_some_and(|d| Instant::now() >= d) {
            return Err(Error::Timeout);
        }
        // A row with leftover weight and no positive entry at or after `col`
        // can never be filled.
        for (r, res) in self.residual.iter().enumerate() {
            if res.is_positive() && self.last_positive[r].is_none_or(|last| last < col) {
                return Ok(());
            }
        }
        if col == self.a.cols() {
            self.points.push(IntVector::new(self.current.clone()));
            return Ok(());
        }
        let mut cap: Option<T> = None;
        for r in 0..self.a.rows() {
            let e = self.a.get(r, col);
            if e.is_positive() {
                let q = self.residual[r].div_floor(e);
                if cap.as_ref().is_none_or(|c| q < *c) {
                    cap = Some(q);
                }
            }
        }
        let cap = cap.expect("fiber matrices have no zero column");
        let mut value = T::zero();
        loop {
            self.current[col] = value.clone();
            self.descend(col + 1)?;
            if value >= cap {
                break;
            }
            value = value.add_c(&T::one())?;
            for r in 0..self.a.rows() {
                let e = self.a.get(r, col);
                if !e.is_zero() {
                    self.residual[r] = self.residual[r].sub_c(e)?;
                }
            }
        }
        for r in 0..self.a.rows() {
            let e = self.a.get(r, col);
            if !e.is_zero() {
                self.residual[r] = self.residual[r].add_c(&e.mul_c(&value)?)?;
            }
        }
        self.current[col] = T::zero();
        Ok(())
    }
}

fn within<T: ExactInt>(v: &IntVector<T>, support: &[bool]) -> bool {
    v.iter().zip(support).all(|(x, &s)| s || x.is_zero())
}

fn support_mask<T: ExactInt>(v: &IntVector<T>) -> Vec<bool> {
    v.iter().map(|x| !x.is_zero()).collect()
}

/// Solves `Σ λ_c · columns[c] = rhs, λ ≥ 0` over the coordinates in `rows`.
fn combination<T: ExactInt>(
    columns: &[IntVector<T>],
    rhs: &IntVector<T>,
    rows: &[usize],
    with_sum: bool,
) -> Result<Option<Vec<Ratio<T>>>> {
    let mut cols: Vec<Vec<T>> = columns
        .iter()
        .map(|c| rows.iter().map(|&r| c[r].clone()).collect())
        .collect();
    let mut b: Vec<T> = rows.iter().map(|&r| rhs[r].clone()).collect();
    if with_sum {
        for c in cols.iter_mut() {
            c.push(T::one());
        }
        b.push(T::one());
    }
    let p = LpProblem::from_integer_columns(&cols, &b)?;
    Ok(match solve_generic(&p)? {
        LpCertificate::Feasible { x } => Some(x),
        LpCertificate::Infeasible { .. } => None,
    })
}

fn nonzero_terms<T: ExactInt>(points: Vec<IntVector<T>>, lambda: Vec<Ratio<T>>) -> Combination<T> {
    points
        .into_iter()
        .zip(lambda)
        .filter(|(_, l)| !l.is_zero())
        .collect()
}

/// Writes `u` as a convex combination of the other fiber points, if possible.
fn vertex_certificate<T: ExactInt>(
    u: &IntVector<T>,
    points: &[IntVector<T>],
) -> Result<Option<Combination<T>>> {
    // Points in a convex combination of u are supported inside supp(u).
    let mask = support_mask(u);
    let candidates: Vec<IntVector<T>> = points
        .iter()
        .filter(|v| *v != u && within(v, &mask))
        .cloned()
        .collect();
    if candidates.is_empty() {
        return Ok(None);
    }
    let rows = u.support();
    Ok(combination(&candidates, u, &rows, true)?.map(|x| nonzero_terms(candidates, x)))
}

/// Whether `u` is a vertex of the convex hull of the fiber.
pub fn is_vertex<T: ExactInt>(u: &IntVector<T>, f: &Fiber<T>) -> Result<bool> {
    check_dim(f.matrix.cols(), u.len())?;
    if !f.contains(u) {
        return Err(Error::NotInFiber);
    }
    Ok(vertex_certificate(u, &f.points)?.is_none())
}

/// Column restriction `(u_σ, A_σ)`; `σ` is sorted and deduplicated first.
pub fn restrict_support<T: ExactInt>(
    u: &SignedVector<T>,
    a: &IntMatrix<T>,
    sigma: &[usize],
    drop_zero_rows: bool,
) -> Result<(SignedVector<T>, IntMatrix<T>)> {
    check_dim(a.cols(), u.len())?;
    let mut sigma = sigma.to_vec();
    sigma.sort_unstable();
    sigma.dedup();
    if let Some(&bad) = sigma.iter().find(|&&i| i >= a.cols()) {
        return Err(Error::InvalidArgument(format!(
            "column index {bad} out of range"
        )));
    }
    if u.support().iter().any(|i| sigma.binary_search(i).is_err()) {
        return Err(Error::SupportNotContained);
    }
    let v = SignedVector::new(IntVector::new(
        sigma.iter().map(|&i| u[i].clone()).collect(),
    ));
    let mut sub = a.select_columns(&sigma);
    if drop_zero_rows {
        sub = sub.without_zero_rows();
    }
    Ok((v, sub))
}

fn check_membership_input<T: ExactInt>(u: &SignedVector<T>, a: &IntMatrix<T>) -> Result<()> {
    check_dim(a.cols(), u.len())?;
    check_fiber_matrix(a)?;
    if u.is_zero() {
        return Err(Error::ZeroVector);
    }
    if a.mul_slice(u.base().as_slice())?
        .iter()
        .any(|x| !x.is_zero())
    {
        return Err(Error::NotInKernel);
    }
    Ok(())
}

/// Universal Gröbner basis membership with the evidence for a rejection.
pub fn ugb_verdict<T: ExactInt>(
    u: &SignedVector<T>,
    a: &IntMatrix<T>,
    opts: &MembershipOptions,
) -> Result<UgbVerdict<T>> {
    check_membership_input(u, a)?;
    if opts.full_fiber {
        return verdict_on(u, a, opts.deadline);
    }
    let sigma = u.support();
    let (v, sub) = restrict_support(u, a, &sigma, true)?;
    let lift = |terms: Combination<T>| -> Combination<T> {
        terms
            .into_iter()
            .map(|(p, l)| {
                let mut full = vec![T::zero(); u.len()];
                for (&i, x) in sigma.iter().zip(p.into_vec()) {
                    full[i] = x;
                }
                (IntVector::new(full), l)
            })
            .collect()
    };
    Ok(match verdict_on(&v, &sub, opts.deadline)? {
        UgbVerdict::Member => UgbVerdict::Member,
        UgbVerdict::NotVertex {
            endpoint,
            combination,
        } => UgbVerdict::NotVertex {
            endpoint,
            combination: lift(combination),
        },
        UgbVerdict::NotEdge { decomposition } => UgbVerdict::NotEdge {
            decomposition: lift(decomposition),
        },
    })
}

fn verdict_on<T: ExactInt>(
    u: &SignedVector<T>,
    a: &IntMatrix<T>,
    deadline: Option<Instant>,
) -> Result<UgbVerdict<T>> {
    let plus = u.plus();
    let minus = u.minus()?;
    let b = IntVector::new(a.mul_slice(plus.as_slice())?);
    let fiber = enumerate_fiber_until(a, &b, deadline)?;
    debug_assert!(fiber.contains(&plus) && fiber.contains(&minus));

    for (endpoint, point) in [(Endpoint::Plus, &plus), (Endpoint::Minus, &minus)] {
        if let Some(combination) = vertex_certificate(point, &fiber.points)? {
            return Ok(UgbVerdict::NotVertex {
                endpoint,
                combination,
            });
        }
    }

    let others: Vec<IntVector<T>> = fiber
        .points
        .iter()
        .filter(|v| **v != plus && **v != minus)
        .cloned()
        .collect();
    if others.is_empty() {
        return Ok(UgbVerdict::Member);
    }
    let shifted = others
        .iter()
        .map(|v| v.checked_sub(&minus))
        .collect::<Result<Vec<_>>>()?;
    let target = plus.checked_sub(&minus)?;
    let rows: Vec<usize> = (0..target.len()).collect();
    Ok(match combination(&shifted, &target, &rows, false)? {
        Some(lambda) => UgbVerdict::NotEdge {
            decomposition: nonzero_terms(others, lambda),
        },
        None => UgbVerdict::Member,
    })
}

/// Whether `u` lies in the universal Gröbner basis of `A`.
///
/// Only fiber points supported on `supp(u)` can take part in the vertex and
/// edge systems, so the search is run on the column restriction `A_σ`.
pub fn ugb_member(u: &SignedVector, a: &IntMatrix) -> Result<bool> {
    Ok(ugb_verdict_big(u, a, &MembershipOptions::default())?.is_member())
}

/// Same test over the whole, unrestricted fiber.
pub fn ugb_member_full(u: &SignedVector, a: &IntMatrix) -> Result<bool> {
    let opts = MembershipOptions {
        full_fiber: true,
        ..Default::default()
    };
    Ok(ugb_verdict_big(u, a, &opts)?.is_member())
}

/// [`ugb_verdict`] on arbitrary-precision data, trying machine integers first.
pub fn ugb_verdict_big(
    u: &SignedVector,
    a: &IntMatrix,
    opts: &MembershipOptions,
) -> Result<UgbVerdict> {
    with_fallback(
        || match (u.convert::<i64>(), a.convert::<i64>()) {
            (Some(us), Some(as_)) => Ok(ugb_verdict(&us, &as_, opts)?.to_big()),
            _ => Err(Error::Overflow),
        },
        || ugb_verdict(u, a, opts),
    )
}

/// Checks a rejection certificate by exact substitution.
pub fn check_verdict(u: &SignedVector, a: &IntMatrix, verdict: &UgbVerdict) -> Result<bool> {
    let plus = u.plus();
    let minus = u.minus()?;
    let b = a.mul_slice(plus.as_slice())?;
    let in_fiber = |v: &IntVector| -> Result<bool> {
        Ok(v.is_nonnegative() && a.mul_slice(v.as_slice())? == b)
    };
    let weighted_sum = |terms: &[(IntVector, Ratio<BigInt>)],
                        shift: Option<&IntVector>|
     -> Result<Vec<Ratio<BigInt>>> {
        let mut acc = vec![Ratio::zero(); u.len()];
        for (v, l) in terms {
            let v = match shift {
                Some(s) => v.checked_sub(s)?,
                None => v.clone(),
            };
            for (x, vi) in acc.iter_mut().zip(v.iter()) {
                *x += l * Ratio::from_integer(vi.clone());
            }
        }
        Ok(acc)
    };
    let as_ratio = |v: &IntVector| -> Vec<Ratio<BigInt>> {
        v.iter().cloned().map(Ratio::from_integer).collect()
    };
    match verdict {
        UgbVerdict::Member => Ok(true),
        UgbVerdict::NotVertex {
            endpoint,
            combination,
        } => {
            let point = if *endpoint == Endpoint::Plus {
                &plus
            } else {
                &minus
            };
            for (v, l) in combination {
                if v == point || !in_fiber(v)? || !l.is_positive() {
                    return Ok(false);
                }
            }
            let total: Ratio<BigInt> = combination.iter().map(|(_, l)| l.clone()).sum();
            Ok(total.is_one() && weighted_sum(combination, None)? == as_ratio(point))
        }
        UgbVerdict::NotEdge { decomposition } => {
            for (v, l) in decomposition {
                if *v == plus || *v == minus || !in_fiber(v)? || !l.is_positive() {
                    return Ok(false);
                }
            }
            Ok(weighted_sum(decomposition, Some(&minus))? == as_ratio(&plus.checked_sub(&minus)?))
        }
    }
}
