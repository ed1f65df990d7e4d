//! Graver bases and universal Gröbner basis membership for integer matrices,
//! computed with exact arithmetic, together with the rational normal scroll
//! and homogeneous colored-partition matrix families.
//!
//! Algorithms are generic over an [`ExactInt`] scalar. The aliases below fix
//! the scalar to arbitrary precision, which is what the public entry points
//! use; they switch to checked `i64` internally when the data allows it.

#![allow(clippy::needless_range_loop)]

pub mod classify;
pub mod complexity;
pub mod error;
pub mod families;
pub mod fiber;
pub mod graver;
pub mod lattice;
pub mod oracle;
pub mod ratlp;
pub mod report;
pub mod scalar;
pub mod selfcheck;

pub use classify::{
    check_equality, classification_sweep, classify_label, counterexample_cases, equality_cases,
    predict, reduce_by_type, verify_counterexamples, verify_equality_cases, Budget, CaseStatus,
    ClassificationResult, CounterexampleRecord, EqualityCheck, EqualityOptions, SweepReport,
};
pub use complexity::{
    family_pair, graver_complexity, graver_complexity_literal, graver_complexity_with, ones_row,
    ramp_row, type_bound_for_family, ComplexityReport,
};
pub use error::{Error, Result};
pub use families::{
    dominates, h_matrix, nfold_matrix, scroll_matrix, Family, FamilyLabel, Partition, ScrollLabel,
};
pub use fiber::{
    check_verdict, enumerate_fiber, is_vertex, restrict_support, ugb_member, ugb_member_full,
    ugb_verdict, ugb_verdict_big, Endpoint, Fiber, MembershipOptions, UgbVerdict,
};
pub use graver::{
    graver_basis, graver_basis_with, is_primitive, max_one_norm, Engine, GraverBasis, GraverOptions,
};
pub use lattice::{block_type, conformal_leq, imat, ivec, kernel_lattice_basis, matvec, svec};
pub use oracle::{count_curve_fiber, enumerate_kernel_bounded, filter_primitive};
pub use ratlp::{solve_feasibility, LpCertificate, LpProblem};
pub use report::{verify_paper, PaperOptions, PaperReport};
pub use scalar::{ExactInt, Overflow};
pub use selfcheck::{run_selfcheck, SelfCheckReport, DEFAULT_SEED};

/// Arbitrary-precision integer.
pub type Integer = num_bigint::BigInt;
/// Exact rational over [`Integer`].
pub type Rational = num_rational::BigRational;
/// Machine-integer rational used on the fast path.
pub type SmallRational = num_rational::Rational64;

pub type IntVector = lattice::IntVector<Integer>;
pub type SignedVector = lattice::SignedVector<Integer>;
pub type IntMatrix = lattice::IntMatrix<Integer>;

pub type SmallVector = lattice::IntVector<i64>;
pub type SmallSignedVector = lattice::SignedVector<i64>;
pub type SmallMatrix = lattice::IntMatrix<i64>;
