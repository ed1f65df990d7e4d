//! Which family members have universal Gröbner basis equal to Graver basis.
//!
//! A member fails equality exactly when it dominates one of three minimal
//! counterexamples of its family. This module predicts the answer, checks it
//! by computing both bases, and replays the counterexample certificates.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::families::{dominates, Family, FamilyLabel, Partition};
use crate::fiber::{
    check_verdict, restrict_support, ugb_verdict, ugb_verdict_big, Endpoint, MembershipOptions,
    UgbVerdict,
};
use crate::graver::{graver_basis_with, GraverOptions};
use crate::lattice::{IntMatrix, IntVector, SignedVector};

fn as_string<S: Serializer, V: std::fmt::Display>(
    v: &V,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

fn as_strings<S: Serializer, V: std::fmt::Display>(
    v: &[V],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(ToString::to_string))
}

/// The three minimal members of `family` whose bases differ.
pub fn minimal_counterexamples(family: Family) -> Vec<FamilyLabel> {
    let parts: [&[usize]; 3] = match family {
        Family::S => [&[7], &[6, 5], &[5, 4, 3]],
        Family::H => [&[7], &[6, 2], &[4, 3]],
    };
    parts
        .iter()
        .map(|p| FamilyLabel {
            family,
            partition: Partition::new(p.to_vec()).expect("valid partition"),
        })
        .collect()
}

/// Predicted equality of the two bases: true iff the label dominates none of
/// its family's minimal counterexamples.
pub fn predict(label: &FamilyLabel) -> bool {
    !minimal_counterexamples(label.family)
        .iter()
        .any(|m| dominates(&label.partition, &m.partition))
}

#[derive(Clone, Copy, Debug, Default)]
pub struct EqualityOptions {
    pub deadline: Option<Instant>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EqualityCheck {
    pub equal: bool,
    pub graver_size: usize,
    /// Graver elements outside the universal Gröbner basis, in basis order.
    pub witnesses: Vec<SignedVector>,
}

/// Computes the Graver basis and tests every element for membership.
pub fn check_equality(a: &IntMatrix, opts: &EqualityOptions) -> Result<EqualityCheck> {
    let graver = graver_basis_with(
        a,
        &GraverOptions {
            deadline: opts.deadline,
            ..Default::default()
        },
    )?;
    let member_opts = MembershipOptions {
        deadline: opts.deadline,
        ..Default::default()
    };
    let small: Option<IntMatrix<i64>> = a.convert();
    // Elements come sorted by 1-norm, so short witnesses are found first.
    let verdicts: Vec<bool> = graver
        .elements()
        .par_iter()
        .map(|g| {
            if let (Some(sa), Some(sg)) = (&small, g.convert::<i64>()) {
                match ugb_verdict(&sg, sa, &member_opts) {
                    Err(Error::Overflow) => {}
                    other => return other.map(|v| v.is_member()),
                }
            }
            ugb_verdict(g, a, &member_opts).map(|v| v.is_member())
        })
        .collect::<Result<_>>()?;
    let witnesses: Vec<SignedVector> = graver
        .elements()
        .iter()
        .zip(verdicts)
        .filter(|(_, member)| !member)
        .map(|(g, _)| g.clone())
        .collect();
    Ok(EqualityCheck {
        equal: witnesses.is_empty(),
        graver_size: graver.len(),
        witnesses,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CaseStatus {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
    #[serde(rename = "SKIPPED")]
    Skipped,
}

impl std::fmt::Display for CaseStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            CaseStatus::Pass => "PASS",
            CaseStatus::Fail => "FAIL",
            CaseStatus::Skipped => "SKIPPED(timeout)",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassificationResult {
    pub family: Family,
    #[serde(serialize_with = "as_string")]
    pub label: FamilyLabel,
    pub predicted_equal: bool,
    /// `None` when the computation hit its time guard.
    pub computed_equal: Option<bool>,
    pub graver_size: Option<usize>,
    pub witness_count: usize,
    #[serde(serialize_with = "as_strings")]
    pub witnesses: Vec<SignedVector>,
    pub verified: bool,
    pub status: CaseStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

/// Predicts and computes; the status is PASS when they agree.
pub fn classify_label(
    label: &FamilyLabel,
    guard: Option<Duration>,
) -> Result<ClassificationResult> {
    let start = Instant::now();
    let opts = EqualityOptions {
        deadline: guard.map(|g| start + g),
    };
    let predicted_equal = predict(label);
    let mut result = ClassificationResult {
        family: label.family,
        label: label.clone(),
        predicted_equal,
        computed_equal: None,
        graver_size: None,
        witness_count: 0,
        witnesses: Vec::new(),
        verified: false,
        status: CaseStatus::Skipped,
        elapsed_ms: None,
    };
    match check_equality(&label.matrix(), &opts) {
        Ok(check) => {
            result.computed_equal = Some(check.equal);
            result.graver_size = Some(check.graver_size);
            result.witness_count = check.witnesses.len();
            result.witnesses = check.witnesses;
            result.verified = true;
            result.status = if check.equal == predicted_equal {
                CaseStatus::Pass
            } else {
                CaseStatus::Fail
            };
        }
        Err(Error::Timeout) => {}
        Err(e) => return Err(e),
    }
    result.elapsed_ms = Some(start.elapsed().as_millis() as u64);
    Ok(result)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Budget {
    Small,
    Extended,
}

impl std::str::FromStr for Budget {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "small" => Ok(Budget::Small),
            "extended" => Ok(Budget::Extended),
            other => Err(Error::InvalidArgument(format!(
                "unknown budget {other:?} (expected small or extended)"
            ))),
        }
    }
}

fn label(s: &str) -> FamilyLabel {
    FamilyLabel::parse(s).expect("valid built-in label")
}

/// Members whose bases are known to agree, checked by computation.
pub fn equality_cases(budget: Budget) -> Vec<FamilyLabel> {
    let mut cases: Vec<&str> = vec![
        "S(2)", "S(5)", "H(6)", "S(3,3)", "H(3,3)", "H(2,2)", "S(4,4)",
    ];
    if budget == Budget::Extended {
        cases.extend([
            "S(3,3,3)",
            "H(3,3,3)",
            "S(3,3,3,3,3)",
            "H(3,3,3,3,3)",
            "S(4,4,1,1,1,1,1)",
            "S(5,2,2,2,2,2,2,2,2)",
            "S(5,3,1,1,1,1,1,1,1)",
            "H(5,2,2,2,2,2,2,2,2,2,2,2,2)",
        ]);
    }
    cases.into_iter().map(label).collect()
}

/// Runs [`classify_label`] on every equality case. A computed inequality is
/// reported as FAIL; a timeout as SKIPPED.
pub fn verify_equality_cases(
    budget: Budget,
    guard: Option<Duration>,
) -> Result<Vec<ClassificationResult>> {
    equality_cases(budget)
        .iter()
        .map(|l| {
            let mut r = classify_label(l, guard)?;
            if r.computed_equal == Some(false) {
                r.status = CaseStatus::Fail;
            }
            Ok(r)
        })
        .collect()
}

/// A published counterexample: the witness and the fiber points printed
/// alongside it.
#[derive(Clone, Debug)]
pub struct Counterexample {
    pub label: FamilyLabel,
    pub witness: SignedVector,
    pub printed: UgbVerdict,
}

fn points(terms: &[(&[i64], (i64, i64))]) -> Vec<(IntVector, Ratio<BigInt>)> {
    terms
        .iter()
        .map(|(p, (n, d))| {
            (
                IntVector::from_i64s(p),
                Ratio::new(BigInt::from(*n), BigInt::from(*d)),
            )
        })
        .collect()
}

/// The six minimal counterexamples with their printed certificates.
pub fn counterexample_cases() -> Vec<Counterexample> {
    let s6_points: &[(&[i64], (i64, i64))] = &[
        (&[1, 0, 0, 0, 2, 0, 0], (1, 1)),
        (&[0, 2, 0, 0, 0, 0, 1], (1, 1)),
        (&[0, 0, 1, 2, 0, 0, 0], (1, 1)),
    ];
    let s6_witness = [1, -1, 1, -1, -1, 0, 1];
    vec![
        Counterexample {
            label: label("S(6)"),
            witness: SignedVector::from_i64s(&s6_witness),
            printed: UgbVerdict::NotEdge {
                decomposition: points(s6_points),
            },
        },
        Counterexample {
            label: label("S(5,4)"),
            witness: SignedVector::from_i64s(&[1, -1, 0, 0, 1, -1, 1, -2, 0, 0, 1]),
            printed: UgbVerdict::NotVertex {
                endpoint: Endpoint::Plus,
                combination: points(&[
                    (&[0, 0, 0, 0, 2, 0, 2, 0, 0, 0, 0], (1, 2)),
                    (&[2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 2], (1, 2)),
                ]),
            },
        },
        Counterexample {
            label: label("S(4,3,2)"),
            witness: SignedVector::from_i64s(&[-1, 0, 0, 0, 1, 1, -1, 1, -1, 1, 0, -1]),
            printed: UgbVerdict::NotEdge {
                decomposition: points(&[
                    (&[0, 0, 0, 0, 1, 0, 2, 0, 0, 1, 0, 0], (1, 2)),
                    (&[1, 0, 0, 0, 0, 0, 0, 0, 2, 1, 0, 0], (1, 2)),
                    (&[0, 0, 0, 0, 1, 2, 0, 0, 0, 0, 0, 1], (1, 2)),
                    (&[1, 0, 0, 0, 0, 0, 0, 2, 0, 0, 0, 1], (1, 2)),
                ]),
            },
        },
        Counterexample {
            label: label("H(7)"),
            witness: SignedVector::from_i64s(&s6_witness),
            printed: UgbVerdict::NotEdge {
                decomposition: points(s6_points),
            },
        },
        Counterexample {
            label: label("H(6,2)"),
            witness: SignedVector::from_i64s(&[-1, 1, -1, -1, 0, 1, 2, -1]),
            printed: UgbVerdict::NotEdge {
                decomposition: points(&[
                    (&[0, 0, 0, 2, 2, 0, 0, 0], (1, 1)),
                    (&[2, 0, 0, 0, 0, 1, 0, 1], (1, 1)),
                    (&[0, 1, 2, 0, 0, 0, 1, 0, 0], (1, 1)),
                ]),
            },
        },
        Counterexample {
            label: label("H(4,3)"),
            witness: SignedVector::from_i64s(&[1, 2, 1, -2, -3, 0, 1]),
            printed: UgbVerdict::NotVertex {
                endpoint: Endpoint::Plus,
                combination: points(&[
                    (&[2, 0, 2, 0, 0, 0, 1], (1, 2)),
                    (&[0, 4, 0, 0, 0, 0, 1], (1, 2)),
                ]),
            },
        },
    ]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertificateTerm {
    pub point: String,
    pub coefficient: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CounterexampleRecord {
    #[serde(serialize_with = "as_string")]
    pub label: FamilyLabel,
    #[serde(serialize_with = "as_string")]
    pub witness: SignedVector,
    pub in_graver_basis: bool,
    pub ugb_member: bool,
    /// `"g+ not a vertex"`, `"g- not a vertex"` or `"not an edge"`.
    pub certificate_kind: String,
    pub certificate: Vec<CertificateTerm>,
    pub certificate_checked: bool,
    pub fiber_size: usize,
    /// Whether the printed fiber points and coefficients check out.
    pub printed_certificate_valid: bool,
    pub status: CaseStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

fn describe(verdict: &UgbVerdict) -> (String, Vec<CertificateTerm>) {
    let terms = |t: &[(IntVector, Ratio<BigInt>)]| {
        t.iter()
            .map(|(p, l)| CertificateTerm {
                point: p.to_string(),
                coefficient: l.to_string(),
            })
            .collect()
    };
    match verdict {
        UgbVerdict::Member => ("member".into(), Vec::new()),
        UgbVerdict::NotVertex {
            endpoint: Endpoint::Plus,
            combination,
        } => ("g+ not a vertex".into(), terms(combination)),
        UgbVerdict::NotVertex {
            endpoint: Endpoint::Minus,
            combination,
        } => ("g- not a vertex".into(), terms(combination)),
        UgbVerdict::NotEdge { decomposition } => ("not an edge".into(), terms(decomposition)),
    }
}

/// Checks one counterexample: the witness is a Graver element, it fails the
/// membership test, and a certificate recomputed from the full fiber holds.
pub fn verify_counterexample(case: &Counterexample) -> Result<CounterexampleRecord> {
    let start = Instant::now();
    let a: IntMatrix = case.label.matrix();
    let graver = graver_basis_with(&a, &GraverOptions::default())?;
    let in_graver_basis = graver.contains(&case.witness);
    let restricted = ugb_verdict_big(&case.witness, &a, &MembershipOptions::default())?;
    let full = ugb_verdict_big(
        &case.witness,
        &a,
        &MembershipOptions {
            full_fiber: true,
            ..Default::default()
        },
    )?;
    let certificate_checked = !full.is_member() && check_verdict(&case.witness, &a, &full)?;
    let b = IntVector::new(a.mul_slice(case.witness.plus().as_slice())?);
    let fiber_size = crate::fiber::enumerate_fiber(&a, &b)?.len();
    let printed_certificate_valid =
        check_verdict(&case.witness, &a, &case.printed).unwrap_or(false);
    let (certificate_kind, certificate) = describe(&full);
    let ugb_member = restricted.is_member();
    let ok = in_graver_basis
        && !ugb_member
        && restricted.is_member() == full.is_member()
        && certificate_checked;
    Ok(CounterexampleRecord {
        label: case.label.clone(),
        witness: case.witness.clone(),
        in_graver_basis,
        ugb_member,
        certificate_kind,
        certificate,
        certificate_checked,
        fiber_size,
        printed_certificate_valid,
        status: if ok {
            CaseStatus::Pass
        } else {
            CaseStatus::Fail
        },
        elapsed_ms: Some(start.elapsed().as_millis() as u64),
    })
}

pub fn verify_counterexamples() -> Result<Vec<CounterexampleRecord>> {
    counterexample_cases()
        .iter()
        .map(verify_counterexample)
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DominanceViolation {
    pub equal: String,
    pub dominated_unequal: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub max_columns: usize,
    pub results: Vec<ClassificationResult>,
    pub agreement: bool,
    pub monotone: bool,
    pub violations: Vec<DominanceViolation>,
}

/// Predicts and computes every member of both families with at most
/// `max_columns` columns, then checks that equality passes down the
/// dominance order.
pub fn classification_sweep(max_columns: usize, guard: Option<Duration>) -> Result<SweepReport> {
    let mut results = Vec::new();
    for family in [Family::S, Family::H] {
        for n in 1..=max_columns {
            for partition in Partition::all_of(n) {
                results.push(classify_label(&FamilyLabel { family, partition }, guard)?);
            }
        }
    }
    let agreement = results.iter().all(|r| r.status == CaseStatus::Pass);
    let mut violations = Vec::new();
    for big in &results {
        if big.computed_equal != Some(true) {
            continue;
        }
        for small in &results {
            if small.family == big.family
                && dominates(&big.label.partition, &small.label.partition)
                && small.computed_equal == Some(false)
            {
                violations.push(DominanceViolation {
                    equal: big.label.to_string(),
                    dominated_unequal: small.label.to_string(),
                });
            }
        }
    }
    Ok(SweepReport {
        max_columns,
        results,
        agreement,
        monotone: violations.is_empty(),
        violations,
    })
}

/// Drops the all-zero blocks of `g` together with their columns and the
/// rows that become zero. Returns the reduced vector, matrix and label.
pub fn reduce_by_type(
    g: &SignedVector,
    label: &FamilyLabel,
) -> Result<(SignedVector, IntMatrix, FamilyLabel)> {
    let a: IntMatrix = label.matrix();
    let mut sigma = Vec::new();
    let mut kept = Vec::new();
    let mut start = 0;
    for &size in label.partition.parts() {
        let block = start..start + size;
        if block
            .clone()
            .any(|i| i < g.len() && !num_traits::Zero::is_zero(&g[i]))
        {
            sigma.extend(block);
            kept.push(size);
        }
        start += size;
    }
    let (v, sub) = restrict_support(g, &a, &sigma, true)?;
    if kept.is_empty() {
        return Err(Error::ZeroVector);
    }
    let reduced = FamilyLabel {
        family: label.family,
        partition: Partition::new(kept)?,
    };
    Ok((v, sub, reduced))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graver::graver_basis;
    use crate::lattice::svec;

    #[test]
    fn predictions() {
        assert!(predict(&label("S(5)")));
        assert!(!predict(&label("S(6)")));
        assert!(predict(&label("H(3,3,3)")));
        assert!(!predict(&label("H(7)")));
        assert!(!predict(&label("H(6,2)")));
        assert!(!predict(&label("S(4,3,2)")));
        assert!(predict(&label("S(4,3,1)")));
        assert!(!predict(&label("S(5,4,1)")));
    }

    #[test]
    fn equality_on_small_matrices() {
        let s2 = check_equality(&label("S(2)").matrix(), &EqualityOptions::default()).unwrap();
        assert_eq!(
            s2,
            EqualityCheck {
                equal: true,
                graver_size: 1,
                witnesses: vec![]
            }
        );
        let s6 = check_equality(&label("S(6)").matrix(), &EqualityOptions::default()).unwrap();
        assert!(!s6.equal);
        assert!(s6.witnesses.contains(&svec(&[1, -1, 1, -1, -1, 0, 1])));
    }

    #[test]
    fn counterexamples_replay() {
        for record in verify_counterexamples().unwrap() {
            assert_eq!(record.status, CaseStatus::Pass, "{}", record.label);
            let printed_ok = record.label.to_string() != "H(6,2)";
            assert_eq!(
                record.printed_certificate_valid, printed_ok,
                "{}",
                record.label
            );
        }
    }

    #[test]
    fn repaired_h62_points() {
        let a: IntMatrix = label("H(6,2)").matrix();
        let g = svec(&[-1, 1, -1, -1, 0, 1, 2, -1]);
        let repaired = UgbVerdict::NotEdge {
            decomposition: points(&[
                (&[0, 0, 0, 2, 0, 0, 2, 0], (1, 1)),
                (&[2, 0, 0, 0, 0, 1, 0, 1], (1, 1)),
                (&[0, 1, 2, 0, 0, 0, 0, 1], (1, 1)),
            ]),
        };
        assert!(check_verdict(&g, &a, &repaired).unwrap());
    }

    #[test]
    fn small_equality_cases() {
        for r in verify_equality_cases(Budget::Small, None).unwrap() {
            assert_eq!(r.status, CaseStatus::Pass, "{}", r.label);
            assert_eq!(r.computed_equal, Some(true));
        }
    }

    #[test]
    fn type_reduction() {
        let l = label("S(3,3,3,3,3)");
        let mut entries = vec![0i64; 20];
        entries[4..8].copy_from_slice(&[1, -1, -1, 1]);
        entries[12..16].copy_from_slice(&[-1, 1, 1, -1]);
        let g = svec(&entries);
        let (v, sub, reduced) = reduce_by_type(&g, &l).unwrap();
        assert_eq!(reduced, label("S(3,3)"));
        assert_eq!(sub, reduced.matrix());
        assert_eq!(v, svec(&[1, -1, -1, 1, -1, 1, 1, -1]));

        let s6 = label("S(6)");
        let w = svec(&[1, -1, 1, -1, -1, 0, 1]);
        assert_eq!(
            reduce_by_type(&w, &s6).unwrap(),
            (w.clone(), s6.matrix(), s6.clone())
        );

        let h = label("H(3,3,3)");
        for e in graver_basis(&h.matrix()).elements() {
            let (v, sub, reduced) = reduce_by_type(e, &h).unwrap();
            assert_eq!(sub, reduced.matrix());
            assert!(graver_basis(&sub).contains(&v));
        }
    }

    #[test]
    fn tiny_sweep_is_consistent() {
        let sweep = classification_sweep(7, None).unwrap();
        assert!(sweep.agreement);
        assert!(sweep.monotone);
    }
}
