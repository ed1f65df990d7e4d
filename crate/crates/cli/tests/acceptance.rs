//! Acceptance gate: one PASS/FAIL line per criterion, non-zero exit on any
//! FAIL. All comparisons are exact; there are no tolerances.

use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use graver_ugb::classify::{equality_cases, verify_counterexamples, Budget, CaseStatus};
use graver_ugb::selfcheck::check_graver_invariants;
use graver_ugb::{
    check_equality, classification_sweep, classify_label, family_pair, graver_basis,
    graver_complexity, ramp_row, run_selfcheck, EqualityOptions, Family, FamilyLabel, Integer,
    DEFAULT_SEED,
};
use graver_ugb_cli::{DEFAULT_TIMEOUT_SECS, TIMEOUT_ENV};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn guard() -> Duration {
    let secs = std::env::var(TIMEOUT_ENV)
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_TIMEOUT_SECS);
    Duration::from_secs(secs)
}

fn counterexamples() -> Outcome {
    let records = verify_counterexamples().map_err(|e| e.to_string())?;
    let mut names = Vec::new();
    for r in &records {
        if !(r.in_graver_basis
            && !r.ugb_member
            && r.certificate_checked
            && r.status == CaseStatus::Pass)
        {
            return Err(format!("{} failed: {r:?}", r.label));
        }
        names.push(format!("{} ({})", r.label, r.certificate_kind));
    }
    if records.len() != 6 {
        return Err(format!("expected 6 cases, ran {}", records.len()));
    }
    Ok(names.join(", "))
}

fn small_equality() -> Outcome {
    let mut done = Vec::new();
    for l in ["S(2)", "S(5)", "H(6)", "S(3,3)", "H(3,3)", "S(4,4)"] {
        let label = FamilyLabel::parse(l).expect("label");
        let check = check_equality(&label.matrix(), &EqualityOptions::default())
            .map_err(|e| e.to_string())?;
        if !check.equal {
            return Err(format!(
                "{label}: {} Graver elements outside the UGB",
                check.witnesses.len()
            ));
        }
        done.push(format!("{label} [{}]", check.graver_size));
    }
    Ok(done.join(", "))
}

fn extended_equality() -> Outcome {
    let small = equality_cases(Budget::Small);
    let mut done = Vec::new();
    for label in equality_cases(Budget::Extended)
        .iter()
        .filter(|l| !small.contains(l))
    {
        let r = classify_label(label, Some(guard())).map_err(|e| e.to_string())?;
        match (r.status, r.computed_equal) {
            (CaseStatus::Skipped, _) => done.push(format!("{label} SKIPPED(timeout)")),
            (_, Some(true)) => done.push(format!("{label} [{}]", r.graver_size.unwrap_or(0))),
            _ => {
                return Err(format!(
                    "{label}: computed inequality ({} witnesses)",
                    r.witness_count
                ))
            }
        }
    }
    Ok(done.join(", "))
}

fn complexity() -> Outcome {
    let mut values = Vec::new();
    for m in 3..=6 {
        let (c, d) = family_pair(Family::S, m);
        let g = graver_complexity(&c, &d)
            .map_err(|e| e.to_string())?
            .complexity;
        if g != Integer::from(2 * m - 3) {
            return Err(format!("g((1..1),(1..{m})) = {g}, expected {}", 2 * m - 3));
        }
        values.push(format!("S m={m}: {g}"));
    }
    for m in 3..=4 {
        let (c, d) = family_pair(Family::H, m);
        let g = graver_complexity(&c, &d)
            .map_err(|e| e.to_string())?
            .complexity;
        if g > Integer::from(4 * m - 7) {
            return Err(format!("g((1..{m}),(1..1)) = {g} exceeds {}", 4 * m - 7));
        }
        values.push(format!("H m={m}: {g} <= {}", 4 * m - 7));
    }
    Ok(values.join(", "))
}

fn norm_law() -> Outcome {
    let mut values = Vec::new();
    for m in 3..=7 {
        let n = graver_basis(&ramp_row(m)).max_one_norm();
        if n != Integer::from(2 * m - 1) {
            return Err(format!("m={m}: max norm {n}, expected {}", 2 * m - 1));
        }
        values.push(n.to_string());
    }
    Ok(format!("max norms {}", values.join(",")))
}

fn sweep() -> Outcome {
    let report = classification_sweep(8, None).map_err(|e| e.to_string())?;
    if !report.agreement {
        let bad: Vec<String> = report
            .results
            .iter()
            .filter(|r| r.status != CaseStatus::Pass)
            .map(|r| r.label.to_string())
            .collect();
        return Err(format!("prediction differs on {}", bad.join(", ")));
    }
    if !report.monotone {
        return Err(format!("dominance violations: {:?}", report.violations));
    }
    let unequal = report
        .results
        .iter()
        .filter(|r| r.computed_equal == Some(false))
        .count();
    Ok(format!(
        "{} labels, {unequal} with differing bases",
        report.results.len()
    ))
}

fn property_suites() -> Outcome {
    let report = run_selfcheck(DEFAULT_SEED).map_err(|e| e.to_string())?;
    if !report.passed() {
        return Err(report.render());
    }
    // Graver invariants on every basis the suite computes.
    let mut labels: Vec<FamilyLabel> = equality_cases(Budget::Extended);
    labels.extend(
        ["S(6)", "S(5,4)", "S(4,3,2)", "H(7)", "H(6,2)", "H(4,3)"]
            .map(|l| FamilyLabel::parse(l).expect("label")),
    );
    for family in [Family::S, Family::H] {
        for n in 1..=8 {
            for partition in graver_ugb::Partition::all_of(n) {
                labels.push(FamilyLabel { family, partition });
            }
        }
    }
    let mut elements = 0;
    for l in &labels {
        let g = graver_basis(&l.matrix());
        let failures = check_graver_invariants(&g);
        if !failures.is_empty() {
            return Err(format!(
                "{l}: {}",
                failures[..failures.len().min(3)].join("; ")
            ));
        }
        elements += g.len();
    }
    let suites: Vec<String> = report
        .suites
        .iter()
        .map(|s| format!("{} x{}", s.name, s.cases))
        .collect();
    Ok(format!(
        "{}; invariants on {} bases ({elements} elements)",
        suites.join(", "),
        labels.len()
    ))
}

fn run_verify(dir: &Path) -> Result<(), String> {
    let status = Command::new(env!("CARGO_BIN_EXE_graver-ugb"))
        .args(["verify-paper", "--budget", "small", "--out"])
        .arg(dir)
        .stdout(std::process::Stdio::null())
        .status()
        .map_err(|e| e.to_string())?;
    if status.success() {
        Ok(())
    } else {
        Err(format!("verify-paper exited with {status}"))
    }
}

fn determinism() -> Outcome {
    let first = tempfile::tempdir().map_err(|e| e.to_string())?;
    let second = tempfile::tempdir().map_err(|e| e.to_string())?;
    run_verify(first.path())?;
    run_verify(second.path())?;
    for name in ["report.txt", "report.json"] {
        let a = std::fs::read(first.path().join(name)).map_err(|e| e.to_string())?;
        let b = std::fs::read(second.path().join(name)).map_err(|e| e.to_string())?;
        if a != b {
            return Err(format!("{name} differs between runs"));
        }
    }
    Ok("report.txt and report.json byte-identical".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("1 counterexample suite", counterexamples),
        ("2 equality suite, small budget", small_equality),
        ("3 equality suite, extended budget", extended_equality),
        ("4 graver complexity", complexity),
        ("5 norm law", norm_law),
        ("6 classification sweep", sweep),
        ("7 property suites", property_suites),
        ("8 determinism", determinism),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {name}: {detail} ({secs:.1}s)"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name}: {detail} ({secs:.1}s)");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
