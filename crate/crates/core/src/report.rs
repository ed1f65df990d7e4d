//! The full verification run: counterexamples, equality cases, Graver
//! complexity, the norm law and the classification sweep.

use std::fmt::Write as _;
use std::time::Duration;

use num_bigint::BigInt;
use serde::Serialize;

use crate::classify::{
    classification_sweep, counterexample_cases, equality_cases, verify_counterexample, Budget,
    CaseStatus, ClassificationResult, CounterexampleRecord, SweepReport,
};
use crate::complexity::{family_pair, graver_complexity, ramp_row, type_bound_for_family};
use crate::error::{Error, Result};
use crate::families::{Family, FamilyLabel};
use crate::graver::graver_basis;

#[derive(Clone, Debug)]
pub struct PaperOptions {
    pub budget: Budget,
    /// Restrict the run to one counterexample or equality case.
    pub case: Option<FamilyLabel>,
    /// Wall-clock guard per equality case.
    pub guard: Option<Duration>,
    /// Largest column count in the classification sweep.
    pub sweep_columns: usize,
}

impl Default for PaperOptions {
    fn default() -> Self {
        Self {
            budget: Budget::Small,
            case: None,
            guard: None,
            sweep_columns: 8,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComplexityCheck {
    pub family: Family,
    pub m: usize,
    pub value: String,
    /// The exact value when it is known in closed form.
    pub expected: Option<usize>,
    /// The upper bound when only a bound is known.
    pub bound: Option<usize>,
    pub status: CaseStatus,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NormCheck {
    pub m: usize,
    pub value: String,
    pub expected: usize,
    pub status: CaseStatus,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PaperReport {
    pub budget: Budget,
    pub counterexamples: Vec<CounterexampleRecord>,
    pub equality: Vec<ClassificationResult>,
    pub complexity: Vec<ComplexityCheck>,
    pub norm_law: Vec<NormCheck>,
    pub sweep: Option<SweepReport>,
}

fn status(ok: bool) -> CaseStatus {
    if ok {
        CaseStatus::Pass
    } else {
        CaseStatus::Fail
    }
}

pub fn complexity_checks() -> Result<Vec<ComplexityCheck>> {
    let mut out = Vec::new();
    for family in [Family::S, Family::H] {
        for m in 3..=6 {
            let (c, d) = family_pair(family, m);
            let value = graver_complexity(&c, &d)?.complexity;
            let limit = type_bound_for_family(family, m)?;
            let (expected, bound, ok) = match family {
                Family::S => (Some(limit), None, value == BigInt::from(limit)),
                Family::H => (None, Some(limit), value <= BigInt::from(limit)),
            };
            out.push(ComplexityCheck {
                family,
                m,
                value: value.to_string(),
                expected,
                bound,
                status: status(ok),
            });
        }
    }
    Ok(out)
}

pub fn norm_law_checks() -> Vec<NormCheck> {
    (3..=7)
        .map(|m| {
            let value = graver_basis(&ramp_row(m)).max_one_norm();
            let expected = 2 * m - 1;
            NormCheck {
                m,
                value: value.to_string(),
                expected,
                status: status(value == BigInt::from(expected)),
            }
        })
        .collect()
}

/// Runs every check selected by `opts`.
pub fn verify_paper(opts: &PaperOptions) -> Result<PaperReport> {
    let equality_pool = equality_cases(opts.budget);
    let counter_pool = counterexample_cases();
    if let Some(case) = &opts.case {
        let known = counter_pool.iter().any(|c| &c.label == case) || equality_pool.contains(case);
        if !known {
            return Err(Error::InvalidArgument(format!(
                "{case} is not a case of the {:?} budget",
                opts.budget
            )));
        }
    }
    let selected = |l: &FamilyLabel| opts.case.as_ref().is_none_or(|c| c == l);
    let counterexamples = counter_pool
        .iter()
        .filter(|c| selected(&c.label))
        .map(verify_counterexample)
        .collect::<Result<Vec<_>>>()?;
    let mut equality = Vec::new();
    for l in equality_pool.iter().filter(|l| selected(l)) {
        let mut r = crate::classify::classify_label(l, opts.guard)?;
        if r.computed_equal == Some(false) {
            r.status = CaseStatus::Fail;
        }
        equality.push(r);
    }
    let whole_run = opts.case.is_none();
    Ok(PaperReport {
        budget: opts.budget,
        counterexamples,
        equality,
        complexity: if whole_run {
            complexity_checks()?
        } else {
            Vec::new()
        },
        norm_law: if whole_run {
            norm_law_checks()
        } else {
            Vec::new()
        },
        sweep: if whole_run {
            Some(classification_sweep(opts.sweep_columns, opts.guard)?)
        } else {
            None
        },
    })
}

impl PaperReport {
    /// True when no check failed; skipped cases do not count as failures.
    pub fn passed(&self) -> bool {
        self.counterexamples
            .iter()
            .all(|c| c.status == CaseStatus::Pass)
            && self.equality.iter().all(|e| e.status != CaseStatus::Fail)
            && self.complexity.iter().all(|c| c.status == CaseStatus::Pass)
            && self.norm_law.iter().all(|n| n.status == CaseStatus::Pass)
            && self
                .sweep
                .as_ref()
                .is_none_or(|s| s.agreement && s.monotone)
    }

    /// Names of the failed checks.
    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        out.extend(
            self.counterexamples
                .iter()
                .filter(|c| c.status != CaseStatus::Pass)
                .map(|c| c.label.to_string()),
        );
        out.extend(
            self.equality
                .iter()
                .filter(|e| e.status == CaseStatus::Fail)
                .map(|e| e.label.to_string()),
        );
        out.extend(
            self.complexity
                .iter()
                .filter(|c| c.status != CaseStatus::Pass)
                .map(|c| format!("complexity {} m={}", c.family, c.m)),
        );
        out.extend(
            self.norm_law
                .iter()
                .filter(|n| n.status != CaseStatus::Pass)
                .map(|n| format!("norm law m={}", n.m)),
        );
        if let Some(s) = &self.sweep {
            out.extend(
                s.results
                    .iter()
                    .filter(|r| r.status != CaseStatus::Pass)
                    .map(|r| format!("sweep {}", r.label)),
            );
            out.extend(
                s.violations
                    .iter()
                    .map(|v| format!("dominance {} over {}", v.equal, v.dominated_unequal)),
            );
        }
        out
    }

    /// Drops wall-clock measurements so that reports are reproducible.
    pub fn without_timings(mut self) -> Self {
        for c in &mut self.counterexamples {
            c.elapsed_ms = None;
        }
        for e in &mut self.equality {
            e.elapsed_ms = None;
        }
        if let Some(s) = &mut self.sweep {
            for r in &mut s.results {
                r.elapsed_ms = None;
            }
        }
        self
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let time = |ms: Option<u64>| ms.map(|t| format!(" [{t} ms]")).unwrap_or_default();
        let _ = writeln!(out, "budget: {:?}", self.budget);
        if !self.counterexamples.is_empty() {
            let _ = writeln!(out, "\ncounterexamples");
            for c in &self.counterexamples {
                let _ = writeln!(
                    out,
                    "  {} {}: witness {} in graver basis {}, ugb member {}, {} (fiber {} points), printed certificate {}{}",
                    c.status,
                    c.label,
                    c.witness,
                    c.in_graver_basis,
                    c.ugb_member,
                    c.certificate_kind,
                    c.fiber_size,
                    if c.printed_certificate_valid { "valid" } else { "invalid" },
                    time(c.elapsed_ms),
                );
                for t in &c.certificate {
                    let _ = writeln!(out, "      {} * {}", t.coefficient, t.point);
                }
            }
        }
        if !self.equality.is_empty() {
            let _ = writeln!(out, "\nequality cases");
            for e in &self.equality {
                let _ = writeln!(out, "  {}{}", case_line(e), time(e.elapsed_ms));
            }
        }
        if !self.complexity.is_empty() {
            let _ = writeln!(out, "\ngraver complexity");
            for c in &self.complexity {
                let target = match (c.expected, c.bound) {
                    (Some(e), _) => format!("expected {e}"),
                    (_, Some(b)) => format!("bound {b}"),
                    _ => String::new(),
                };
                let _ = writeln!(
                    out,
                    "  {} {} m={}: {} ({target})",
                    c.status, c.family, c.m, c.value
                );
            }
        }
        if !self.norm_law.is_empty() {
            let _ = writeln!(out, "\nmax 1-norm of G(1..m)");
            for n in &self.norm_law {
                let _ = writeln!(
                    out,
                    "  {} m={}: {} (expected {})",
                    n.status, n.m, n.value, n.expected
                );
            }
        }
        if let Some(s) = &self.sweep {
            let _ = writeln!(out, "\nsweep up to {} columns", s.max_columns);
            for r in &s.results {
                let _ = writeln!(out, "  {}{}", case_line(r), time(r.elapsed_ms));
            }
            let _ = writeln!(out, "  prediction agreement: {}", s.agreement);
            let _ = writeln!(out, "  dominance monotone: {}", s.monotone);
        }
        let _ = writeln!(
            out,
            "\nresult: {}",
            if self.passed() { "PASS" } else { "FAIL" }
        );
        out
    }
}

fn case_line(r: &ClassificationResult) -> String {
    let computed = match r.computed_equal {
        Some(true) => "equal".to_string(),
        Some(false) => format!("differ ({} witnesses)", r.witness_count),
        None => "not computed".to_string(),
    };
    let graver = r
        .graver_size
        .map(|g| format!(", graver {g}"))
        .unwrap_or_default();
    let predicted = if r.predicted_equal { "equal" } else { "differ" };
    format!(
        "{} {}: predicted {predicted}, computed {computed}{graver}",
        r.status, r.label
    )
}
