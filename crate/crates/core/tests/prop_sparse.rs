mod common;

use std::collections::BTreeSet;

use algcurve::polybasis::graded_support;
use algcurve::sparse::{min_residual_table, psi_set, solve_with_zeros, sparse_type_scan, ZeroSet};
use algcurve::Rat;
use common::*;
use itertools::Itertools;
use num_traits::Zero;
use proptest::prelude::*;

fn distinct(pts: &[(Rat, Rat)]) -> bool {
    pts.iter().collect::<BTreeSet<_>>().len() == pts.len()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn pinned_solutions_vanish(pts in points(1..=5), zeros in prop::collection::btree_set(0usize..6, 0..4)) {
        let s = graded_support(2);
        let j = ZeroSet::new(zeros.into_iter().collect());
        for sol in solve_with_zeros(&pts, &s, &j).unwrap() {
            let f = sol.to_rat();
            for (x, y) in &pts {
                prop_assert!(f.eval(x, y).is_zero());
            }
            for &i in j.indices() {
                prop_assert!(sol.coeffs()[i].is_zero());
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn s_prime_is_where_psi_grows(pts in points(4..=4)) {
        prop_assume!(distinct(&pts));
        let s = graded_support(3);
        let report = sparse_type_scan(&pts, 3, &[]).unwrap();
        let s_prime: BTreeSet<ZeroSet> = report.s_prime.iter().cloned().collect();
        for idx in (0..s.len()).combinations(s.len() - pts.len() - 1) {
            let j = ZeroSet::new(idx);
            let mut grows = false;
            for sol in solve_with_zeros(&pts, &s, &j).unwrap() {
                let psi = psi_set(sol.to_rat().coeffs()).unwrap();
                prop_assert!(j.is_subset(&psi));
                grows |= psi.len() > j.len();
            }
            prop_assert_eq!(grows, s_prime.contains(&j));
        }
    }

    #[test]
    fn residual_table_is_monotone_and_verified(pts in points(6..=9)) {
        let basis = graded_support(2);
        let table = min_residual_table(&pts, &basis, 1..=basis.len()).unwrap();
        let rs: Vec<_> = table.entries.values().collect();
        for e in &rs {
            prop_assert!(e.verified);
            // 1/q <= max_j v_j^2 <= 1 for a unit vector.
            if let Some(m) = &e.r_maxnorm {
                let q = Rat::from_integer(e.q.into());
                prop_assert!(m.hi() >= e.r.lo());
                prop_assert!(m.lo() <= &(e.r.hi() * q));
            }
        }
        for w in rs.windows(2) {
            prop_assert!(w[1].r.lo() <= w[0].r.hi());
        }
    }
}
