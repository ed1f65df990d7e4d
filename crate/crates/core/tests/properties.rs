use graver_ugb::oracle::{count_curve_fiber, enumerate_kernel_bounded, filter_primitive};
use graver_ugb::selfcheck::brute_force_feasible;
use graver_ugb::{
    conformal_leq, enumerate_fiber, graver_basis, graver_basis_with, ivec, kernel_lattice_basis,
    solve_feasibility, ugb_member, Engine, FamilyLabel, GraverOptions, IntMatrix, Integer,
    LpCertificate, LpProblem, Rational, SignedVector,
};
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn matrix_strategy(
    max_rows: usize,
    max_cols: usize,
    max_entry: i64,
) -> impl Strategy<Value = IntMatrix> {
    (1..=max_rows, 2..=max_cols).prop_flat_map(move |(r, c)| {
        prop::collection::vec(0..=max_entry, r * c).prop_map(move |data| {
            IntMatrix::new(r, c, data.into_iter().map(Integer::from).collect())
                .expect("sizes match")
        })
    })
}

fn vector_strategy(len: usize, bound: i64) -> impl Strategy<Value = SignedVector> {
    prop::collection::vec(-bound..=bound, len).prop_map(|v| SignedVector::from_i64s(&v))
}

fn det(m: Vec<Vec<Integer>>) -> Integer {
    // Fraction-free elimination over the integers (Bareiss).
    let n = m.len();
    let mut a = m;
    let mut sign = Integer::from(1);
    let mut prev = Integer::from(1);
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return Integer::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    (0..n)
        .flat_map(|first| {
            combinations(n, k - 1)
                .into_iter()
                .filter(move |rest| rest.iter().all(|&r| r > first))
                .map(move |mut rest| {
                    rest.insert(0, first);
                    rest
                })
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn plus_minus_split(u in vector_strategy(6, 5)) {
        let plus = u.plus();
        let minus = u.minus().unwrap();
        prop_assert!(plus.is_nonnegative() && minus.is_nonnegative());
        prop_assert_eq!(plus.checked_sub(&minus).unwrap(), u.base().clone());
        prop_assert!(plus.iter().zip(minus.iter()).all(|(p, m)| p.is_zero() || m.is_zero()));
    }

    #[test]
    fn conformal_order_is_a_partial_order(
        u in vector_strategy(4, 2), v in vector_strategy(4, 2), w in vector_strategy(4, 2)
    ) {
        prop_assert!(conformal_leq(&u, &u).unwrap());
        if conformal_leq(&u, &v).unwrap() && conformal_leq(&v, &u).unwrap() {
            prop_assert_eq!(&u, &v);
        }
        if conformal_leq(&u, &v).unwrap() && conformal_leq(&v, &w).unwrap() {
            prop_assert!(conformal_leq(&u, &w).unwrap());
        }
    }

    #[test]
    fn kernel_basis_is_saturated(a in matrix_strategy(2, 5, 3)) {
        let basis = kernel_lattice_basis(&a);
        for b in &basis {
            let image = graver_ugb::matvec(&a, b).unwrap();
            prop_assert!(image.is_zero());
        }
        // The lattice is saturated iff the maximal minors have gcd 1.
        let k = basis.len();
        if k > 0 {
            let mut g = Integer::zero();
            for cols in combinations(a.cols(), k) {
                let m: Vec<Vec<Integer>> = basis.iter().map(|b| cols.iter().map(|&c| b[c].clone()).collect()).collect();
                g = num_integer::Integer::gcd(&g, &det(m));
            }
            prop_assert_eq!(g, Integer::from(1));
        }
        // Every short kernel vector is in the span: the rank matches.
        let short = enumerate_kernel_bounded(&a, 4).unwrap();
        if !short.is_empty() {
            prop_assert!(k > 0);
        }
    }

    #[test]
    fn engines_agree_and_are_deterministic(a in matrix_strategy(2, 5, 4)) {
        let first = graver_basis(&a);
        prop_assert_eq!(first.clone(), graver_basis(&a));
        let pottier = graver_basis_with(&a, &GraverOptions { engine: Engine::Pottier, ..Default::default() }).unwrap();
        prop_assert_eq!(first.elements(), pottier.elements());
    }

    #[test]
    fn lp_duality(
        rows in 0usize..=3,
        cols in 1usize..=4,
        entries in prop::collection::vec(-3i64..=3, 12),
        rhs in prop::collection::vec(-3i64..=3, 3),
    ) {
        let q = |x: i64| Rational::from_integer(Integer::from(x));
        let m: Vec<Vec<Rational>> = (0..rows).map(|r| (0..cols).map(|c| q(entries[r * 4 + c])).collect()).collect();
        let b: Vec<Rational> = rhs[..rows].iter().map(|&x| q(x)).collect();
        let p = LpProblem::new(rows, cols, m.iter().flatten().cloned().collect(), b.clone()).unwrap();
        let cert = solve_feasibility(&p);
        prop_assert!(p.verify(&cert).unwrap());
        prop_assert_eq!(matches!(cert, LpCertificate::Feasible { .. }), brute_force_feasible(&m, &b, cols));
    }
}

#[test]
fn curve_fibers_match_partition_counts() {
    for m in 1..=7usize {
        let a: IntMatrix = FamilyLabel::h(&[m]).unwrap().matrix();
        // Rows of H(m) are (degree, weight).
        for w in 0..=15i64 {
            for d in 0..=4i64 {
                let f = enumerate_fiber(&a, &ivec(&[d, w])).unwrap();
                assert_eq!(
                    f.len() as u128,
                    count_curve_fiber(w as usize, d as usize, m),
                    "w={w} d={d} m={m}"
                );
            }
        }
    }
}

#[test]
fn oracle_matches_family_bases() {
    for label in [
        "S(2)", "S(3)", "S(4)", "S(5)", "S(6)", "S(1,1)", "S(2,1)", "S(2,2)", "S(3,1)", "H(4,3)",
        "H(3,2)", "H(2,2,2)",
    ] {
        let l = FamilyLabel::parse(label).unwrap();
        let a: IntMatrix = l.matrix();
        assert!(a.cols() <= 7, "{label}");
        let g = graver_basis(&a);
        let bound = g.max_one_norm().try_into().unwrap_or(1usize).max(1);
        let oracle = filter_primitive(&enumerate_kernel_bounded(&a, bound).unwrap());
        assert_eq!(oracle, g.elements(), "{label}");
    }
}

#[test]
fn ugb_members_are_primitive() {
    for label in ["S(3)", "S(4)", "S(2,2)", "H(4,3)"] {
        let a: IntMatrix = FamilyLabel::parse(label).unwrap().matrix();
        let g = graver_basis(&a);
        for u in enumerate_kernel_bounded(&a, 8).unwrap() {
            if ugb_member(&u, &a).unwrap() {
                assert!(g.contains(&u), "{label}: {u}");
            }
        }
    }
}

#[test]
fn graver_elements_have_unit_content() {
    for label in ["S(5,4)", "H(6,2)", "S(4,3,2)"] {
        let g = graver_basis(&FamilyLabel::parse(label).unwrap().matrix());
        for e in g.elements() {
            let content = e
                .base()
                .iter()
                .fold(Integer::zero(), |acc, x| num_integer::Integer::gcd(&acc, x));
            assert_eq!(content, Integer::from(1));
            assert!(e.base().iter().any(|x| x.is_positive()));
        }
    }
}
