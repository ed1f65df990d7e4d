//! Seeded randomized cross-checks between independent routes.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::families::FamilyLabel;
use crate::fiber::{restrict_support, ugb_member, ugb_member_full};
use crate::graver::{graver_basis, graver_basis_with, Engine, GraverBasis, GraverOptions};
use crate::lattice::{conformal_leq, IntMatrix, SignedVector};
use crate::oracle::{enumerate_kernel_bounded, filter_primitive};
use crate::ratlp::{solve_feasibility, LpCertificate, LpProblem};

pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteResult {
    pub name: String,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SelfCheckReport {
    pub seed: u64,
    pub suites: Vec<SuiteResult>,
}

impl SelfCheckReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteResult::passed)
    }

    pub fn render(&self) -> String {
        let mut out = format!("selfcheck seed {}\n", self.seed);
        for s in &self.suites {
            let status = if s.passed() { "PASS" } else { "FAIL" };
            out.push_str(&format!("{status} {} ({} cases)\n", s.name, s.cases));
            for f in &s.failures {
                out.push_str(&format!("  {f}\n"));
            }
        }
        out
    }
}

pub fn run_selfcheck(seed: u64) -> Result<SelfCheckReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let suites = vec![
        oracle_equivalence(&mut rng, 50, 12)?,
        lp_soundness(&mut rng, 200),
        graver_invariants()?,
        projection_invariance(&mut rng, 25)?,
    ];
    Ok(SelfCheckReport { seed, suites })
}

/// A matrix with `1..=2` rows, `2..=5` columns, entries in `0..=4` and no
/// zero column.
pub fn random_matrix(rng: &mut impl Rng) -> IntMatrix {
    let rows = rng.gen_range(1..=2);
    let cols = rng.gen_range(2..=5);
    loop {
        let data: Vec<BigInt> = (0..rows * cols)
            .map(|_| BigInt::from(rng.gen_range(0..=4)))
            .collect();
        let m = IntMatrix::new(rows, cols, data).expect("sizes match");
        if !m.has_zero_column() {
            return m;
        }
    }
}

fn truncated(g: &GraverBasis, bound: usize) -> Vec<SignedVector> {
    let bound = BigInt::from(bound);
    g.elements()
        .iter()
        .filter(|e| e.one_norm().expect("BigInt") <= bound)
        .cloned()
        .collect()
}

/// Both completion engines and the brute-force oracle agree on every
/// Graver element up to the norm bound.
pub fn oracle_equivalence(rng: &mut impl Rng, cases: usize, bound: usize) -> Result<SuiteResult> {
    let mut failures = Vec::new();
    for _ in 0..cases {
        let a = random_matrix(rng);
        let lifted = graver_basis(&a);
        let pottier = graver_basis_with(
            &a,
            &GraverOptions {
                engine: Engine::Pottier,
                ..Default::default()
            },
        )?;
        if lifted.elements() != pottier.elements() {
            failures.push(format!("engines disagree on {a}"));
        }
        let oracle = filter_primitive(&enumerate_kernel_bounded(&a, bound)?);
        if oracle != truncated(&lifted, bound) {
            failures.push(format!("oracle disagrees on {a}"));
        }
    }
    Ok(SuiteResult {
        name: "oracle equivalence".into(),
        cases,
        failures,
    })
}

fn rational(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// Solves `M_S x = r` for linearly independent columns `S`, if consistent.
fn solve_on_columns(
    m: &[Vec<BigRational>],
    r: &[BigRational],
    cols: &[usize],
) -> Option<Vec<BigRational>> {
    let rows = m.len();
    let k = cols.len();
    let mut aug: Vec<Vec<BigRational>> = (0..rows)
        .map(|i| {
            cols.iter()
                .map(|&c| m[i][c].clone())
                .chain([r[i].clone()])
                .collect()
        })
        .collect();
    let mut rank = 0;
    for c in 0..k {
        let pivot = (rank..rows).find(|&i| !aug[i][c].is_zero())?;
        aug.swap(rank, pivot);
        let p = aug[rank][c].clone();
        for x in aug[rank].iter_mut() {
            *x /= p.clone();
        }
        for i in 0..rows {
            if i != rank && !aug[i][c].is_zero() {
                let f = aug[i][c].clone();
                for j in 0..=k {
                    let delta = f.clone() * aug[rank][j].clone();
                    aug[i][j] -= delta;
                }
            }
        }
        rank += 1;
    }
    if aug[rank..].iter().any(|row| !row[k].is_zero()) {
        return None;
    }
    Some((0..k).map(|c| aug[c][k].clone()).collect())
}

/// Feasibility by trying every basic solution.
pub fn brute_force_feasible(m: &[Vec<BigRational>], r: &[BigRational], k: usize) -> bool {
    if r.iter().all(Zero::is_zero) {
        return true;
    }
    (1u32..(1 << k)).any(|mask| {
        let cols: Vec<usize> = (0..k).filter(|c| mask & (1 << c) != 0).collect();
        cols.len() <= m.len()
            && solve_on_columns(m, r, &cols).is_some_and(|x| x.iter().all(|v| !v.is_negative()))
    })
}

/// Random systems: every certificate verifies and the verdict matches a
/// brute-force enumeration of basic solutions.
pub fn lp_soundness(rng: &mut impl Rng, cases: usize) -> SuiteResult {
    let mut failures = Vec::new();
    for case in 0..cases {
        let rows = rng.gen_range(0..=3);
        let cols = rng.gen_range(1..=4);
        let m: Vec<Vec<BigRational>> = (0..rows)
            .map(|_| (0..cols).map(|_| rational(rng.gen_range(-3..=3))).collect())
            .collect();
        let r: Vec<BigRational> = (0..rows).map(|_| rational(rng.gen_range(-3..=3))).collect();
        let p = LpProblem::new(rows, cols, m.iter().flatten().cloned().collect(), r.clone())
            .expect("sizes match");
        let cert = solve_feasibility(&p);
        if !p.verify(&cert).expect("BigInt") {
            failures.push(format!("case {case}: certificate does not verify"));
        }
        if matches!(cert, LpCertificate::Feasible { .. }) != brute_force_feasible(&m, &r, cols) {
            failures.push(format!(
                "case {case}: verdict differs from basic-solution enumeration"
            ));
        }
    }
    SuiteResult {
        name: "lp certificate soundness".into(),
        cases,
        failures,
    }
}

/// Kernel membership, gcd 1, canonical sign and pairwise incomparability.
pub fn check_graver_invariants(g: &GraverBasis) -> Vec<String> {
    let a = g.matrix();
    let mut failures = Vec::new();
    let elements = g.elements();
    for e in elements {
        if a.mul_slice(e.base().as_slice())
            .map_or(true, |v| v.iter().any(|x| !x.is_zero()))
        {
            failures.push(format!("{e} is not in the kernel"));
        }
        let gcd = e.base().iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        if gcd != BigInt::from(1) {
            failures.push(format!("{e} has content {gcd}"));
        }
        if !e.is_canonical() {
            failures.push(format!("{e} is not canonical"));
        }
    }
    // Sign patterns as bit masks; `v ⊑ u` needs pos(v) ⊆ pos(u) and
    // neg(v) ⊆ neg(u), so most pairs are rejected without touching entries.
    let masks: Vec<(Vec<u64>, Vec<u64>)> = elements
        .iter()
        .map(|e| {
            let words = e.len().div_ceil(64).max(1);
            let (mut pos, mut neg) = (vec![0u64; words], vec![0u64; words]);
            for (i, x) in e.base().iter().enumerate() {
                if x.is_positive() {
                    pos[i / 64] |= 1 << (i % 64);
                } else if x.is_negative() {
                    neg[i / 64] |= 1 << (i % 64);
                }
            }
            (pos, neg)
        })
        .collect();
    let subset = |a: &[u64], b: &[u64]| a.iter().zip(b).all(|(x, y)| x & !y == 0);
    for (i, v) in elements.iter().enumerate() {
        let (vp, vn) = &masks[i];
        for (j, u) in elements.iter().enumerate() {
            let (up, un) = &masks[j];
            if i == j {
                continue;
            }
            let same = subset(vp, up) && subset(vn, un);
            let flipped = subset(vp, un) && subset(vn, up);
            if !same && !flipped {
                continue;
            }
            let neg = v.negated().expect("BigInt");
            if (same && conformal_leq(v, u).unwrap_or(false))
                || (flipped && conformal_leq(&neg, u).unwrap_or(false))
            {
                failures.push(format!("{u} reduces by {v}"));
            }
        }
    }
    failures
}

fn invariant_labels() -> Vec<FamilyLabel> {
    [
        "S(2)", "S(6)", "S(3,3)", "S(5,4)", "S(4,3,2)", "H(7)", "H(6,2)", "H(4,3)", "H(3,3,3)",
    ]
    .iter()
    .map(|l| FamilyLabel::parse(l).expect("valid label"))
    .collect()
}

pub fn graver_invariants() -> Result<SuiteResult> {
    let labels = invariant_labels();
    let mut failures = Vec::new();
    for l in &labels {
        let g = graver_basis(&l.matrix());
        failures.extend(
            check_graver_invariants(&g)
                .into_iter()
                .map(|f| format!("{l}: {f}")),
        );
    }
    Ok(SuiteResult {
        name: "graver invariants".into(),
        cases: labels.len(),
        failures,
    })
}

/// Membership and primitivity are unchanged by deleting columns outside the
/// support.
pub fn projection_invariance(rng: &mut impl Rng, cases: usize) -> Result<SuiteResult> {
    let labels: Vec<FamilyLabel> = [
        "S(6)", "S(5,4)", "S(4,3,2)", "H(6,2)", "H(4,3)", "S(3,3)", "H(3,3,3)",
    ]
    .iter()
    .map(|l| FamilyLabel::parse(l).expect("valid label"))
    .collect();
    let bases: Vec<(IntMatrix, GraverBasis)> = labels
        .iter()
        .map(|l| {
            let a: IntMatrix = l.matrix();
            let g = graver_basis(&a);
            (a, g)
        })
        .collect();
    let mut failures = Vec::new();
    for case in 0..cases {
        let which = rng.gen_range(0..labels.len());
        let (a, g) = &bases[which];
        let u = g.elements().choose(rng).expect("nonempty basis").clone();
        let mut sigma = u.support();
        for c in 0..a.cols() {
            if !sigma.contains(&c) && rng.gen_bool(0.5) {
                sigma.push(c);
            }
        }
        let (v, sub) = restrict_support(&u, a, &sigma, true)?;
        let whole = ugb_member_full(&u, a)?;
        if whole != ugb_member_full(&v, &sub)? || whole != ugb_member(&u, a)? {
            failures.push(format!(
                "case {case}: membership of {u} in {} changes under restriction",
                labels[which]
            ));
        }
        if !graver_basis(&sub).contains(&v) {
            failures.push(format!(
                "case {case}: {u} is not primitive after restriction"
            ));
        }
    }
    Ok(SuiteResult {
        name: "projection invariance".into(),
        cases,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lp_brute_force_basics() {
        let m = vec![
            vec![rational(1), rational(1)],
            vec![rational(1), rational(-1)],
        ];
        assert!(!brute_force_feasible(&m, &[rational(1), rational(3)], 2));
        assert!(brute_force_feasible(&m, &[rational(3), rational(1)], 2));
    }

    #[test]
    fn short_run_passes() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        assert!(oracle_equivalence(&mut rng, 5, 10).unwrap().passed());
        assert!(lp_soundness(&mut rng, 30).passed());
        assert!(projection_invariance(&mut rng, 3).unwrap().passed());
    }
}
