//! Ball-size counting, size bounds and the redundancy table, checked against
//! exhaustive classification and exact searches.

use burstdel::bounds::*;
use burstdel::exec::Exec;
use burstdel::verify::{
    classify_ball_sizes, max_code_exact, max_perm_code_exact, Family, DEFAULT_BUDGET,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

fn pow(q: u32, n: usize) -> BigInt {
    num_traits::pow(BigInt::from(q), n)
}

#[test]
fn ball_counts_match_exhaustive_classification() {
    for (n, t, q) in [
        (4, 2, 2),
        (6, 2, 2),
        (6, 3, 2),
        (6, 2, 3),
        (8, 2, 2),
        (6, 1, 3),
    ] {
        let counts = classify_ball_sizes(n, t, q, DEFAULT_BUDGET, Exec::default()).unwrap();
        let mut total = BigInt::from(0);
        for (i, &c) in counts.iter().enumerate().skip(1) {
            let formula = ball_count(n, t, i, q).unwrap();
            assert_eq!(formula, BigInt::from(c), "N({n},{t},{i}) over q = {q}");
            total += formula;
        }
        assert_eq!(counts[0], 0);
        assert_eq!(total, pow(q, n));
    }
}

#[test]
fn ball_count_needs_t_dividing_n() {
    assert!(ball_count(5, 2, 1, 2).is_err());
    assert!(ball_count(6, 2, 0, 2).is_err());
    assert!(ball_count(6, 2, 6, 2).is_err());
}

#[test]
fn closed_form_equals_the_direct_sum() {
    for (n, t, q) in [
        (4, 2, 2),
        (6, 2, 2),
        (6, 3, 2),
        (6, 2, 3),
        (9, 3, 4),
        (12, 2, 5),
        (20, 4, 2),
    ] {
        assert_eq!(
            lp_bound(n, t, q).unwrap().value,
            lp_bound_direct(n, t, q).unwrap(),
            "({n},{t},{q})"
        );
    }
}

#[test]
fn bound_values() {
    let b = lp_bound(4, 2, 2).unwrap();
    assert_eq!(b.floor, BigInt::from(4));
    let b = lp_bound(6, 2, 2).unwrap();
    assert_eq!(b.value, BigRational::new(28.into(), 3.into()));
    assert_eq!(b.floor, BigInt::from(9));
    assert_eq!(perm_bound(5, 2).unwrap().floor, BigInt::from(15));
    assert_eq!(perm_bound(6, 2).unwrap().floor, BigInt::from(72));
    for n in 2..=8 {
        let fact: u64 = (1..n as u64).product();
        assert_eq!(perm_bound(n, 1).unwrap().floor, BigInt::from(fact));
    }
}

#[test]
fn exact_maximum_codes_respect_the_bounds() {
    for (n, t) in [(4, 2), (6, 2), (6, 3)] {
        let exact = max_code_exact(n, 2, t, DEFAULT_BUDGET).unwrap();
        let bound = lp_bound(n, t, 2).unwrap();
        assert!(
            BigInt::from(exact) <= bound.floor,
            "n={n} t={t}: {exact} > {}",
            bound.floor
        );
    }
    for n in 3..=5 {
        let exact = max_perm_code_exact(n, 2, DEFAULT_BUDGET).unwrap();
        assert!(BigInt::from(exact) <= perm_bound(n, 2).unwrap().floor);
    }
}

#[test]
fn redundancy_table_rows() {
    let rows = redundancy_table(
        &[Family::Levenshtein, Family::Vt],
        &[8, 10],
        2,
        2,
        DEFAULT_BUDGET,
        Exec::default(),
    );
    let lev: Vec<_> = rows.iter().filter(|r| r.family == "levenshtein").collect();
    assert_eq!(lev.len(), 2);
    for r in &lev {
        let n = r.n as f64;
        assert!((r.formula_bits.unwrap() - (n.log2() + 1.0)).abs() < 1e-12);
        let measured = r.measured_bits.unwrap();
        // The best residue keeps at least 2^n / 2n words.
        assert!(measured <= n.log2() + 1.0 + 1e-9);
    }
    assert!(rows.iter().any(|r| r.family == "lower-bound" && r.n == 8));
    let csv = table_csv(&rows);
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "schema_version,family,burst,n,q,t,formula,formula_bits,measured_bits"
    );
    assert_eq!(lines.count(), rows.len());
}

#[test]
fn minimum_redundancy_from_the_bound() {
    let b = lp_bound(4, 2, 2).unwrap();
    assert!((b.min_redundancy(4.0) - 2.0).abs() < 1e-12);
    assert_eq!(b.value.to_integer().to_u64(), Some(4));
}
