use flatcensus::enumerate::oracle::{brute_cusp_data, brute_gluing_classes, brute_irreducible};
use flatcensus::enumerate::{
    canonical_pair, enumerate_cusp_data, enumerate_gluings, enumerate_irreducible, enumerate_pa_matrices,
};
use flatcensus::exactnum::{parse_rational, Rational};
use flatcensus::pfcore::NonNegIntMatrix;
use proptest::prelude::*;

fn thresholds() -> Vec<Rational> {
    ["1", "2", "2.1", "3", "4"].iter().map(|s| parse_rational(s).unwrap()).collect()
}

fn m(rows: &[&[u64]]) -> NonNegIntMatrix {
    NonNegIntMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
}

#[test]
fn irreducible_matches_brute_force() {
    for d in 1..=2 {
        for t in thresholds() {
            assert_eq!(enumerate_irreducible(d, &t), brute_irreducible(d, &t, false), "d={d} T={t}");
            assert_eq!(enumerate_pa_matrices(d, &t, true), brute_irreducible(d, &t, true), "d={d} T={t}");
        }
    }
}

#[test]
fn cusp_data_matches_brute_force() {
    for d in 1..=2 {
        for t in thresholds() {
            assert_eq!(enumerate_cusp_data(d, &t), brute_cusp_data(d, &t), "m={d} T={t}");
        }
    }
}

#[test]
fn gluing_classes_match_exhaustive_search() {
    for a in [m(&[&[1]]), m(&[&[2]]), m(&[&[3]]), m(&[&[4]]), m(&[&[1, 1], &[1, 1]]), m(&[&[0, 2], &[2, 0]]), m(&[&[0, 1], &[1, 2]])] {
        let fast = enumerate_gluings(&a).unwrap();
        let brute = brute_gluing_classes(&a);
        assert_eq!(fast.len(), brute.len(), "A={a}");
        // Every brute-force class has its fast canonical form in the list.
        let lifted: std::collections::BTreeSet<_> = brute.iter().map(|g| canonical_pair(g, &a)).collect();
        assert_eq!(lifted.into_iter().collect::<Vec<_>>(), fast, "A={a}");
    }
}

#[test]
fn three_dimensional_census_matches_brute_force() {
    let t = parse_rational("1.4").unwrap();
    let fast = enumerate_irreducible(3, &t);
    assert_eq!(fast, brute_irreducible(3, &t, false));
    assert!(fast.len() > 2);
}

#[test]
fn three_dimensional_census_is_sorted_and_unique() {
    let out = enumerate_irreducible(3, &parse_rational("2.5").unwrap());
    assert!(out.windows(2).all(|w| w[0] < w[1]));
    assert!(!out.is_empty());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]
    #[test]
    fn monotone_in_threshold(a in 1u32..40, b in 1u32..40) {
        let (lo, hi) = (a.min(b), a.max(b));
        let t1 = Rational::new(lo.into(), 10.into());
        let t2 = Rational::new(hi.into(), 10.into());
        let small = enumerate_irreducible(2, &t1);
        let big = enumerate_irreducible(2, &t2);
        prop_assert!(small.iter().all(|x| big.binary_search(x).is_ok()));
        let small = enumerate_cusp_data(2, &t1);
        let big = enumerate_cusp_data(2, &t2);
        prop_assert!(small.iter().all(|x| big.binary_search(x).is_ok()));
    }
}
