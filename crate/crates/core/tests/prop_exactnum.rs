mod common;

use algcurve::exactnum::{
    char_poly, continued_fraction, det_exact, det_interval, isolate_real_roots, nullspace_integer,
    rank_exact, RealRooted, Sturm, UniPoly,
};
use algcurve::{Ival, Matrix, Rat};
use common::*;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn mat(rows: &[Vec<Rat>]) -> Matrix<Rat> {
    Matrix::from_rows(rows.to_vec()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn det_matches_cofactor(rows in rat_matrix(6)) {
        prop_assert_eq!(det_exact(&mat(&rows)).unwrap(), cofactor_det(&rows));
    }

    #[test]
    fn det_interval_on_points(rows in rat_matrix(5)) {
        let m = mat(&rows);
        let d = det_interval(&m.map(|r| Ival::point(r.clone()))).unwrap();
        prop_assert_eq!(d, Ival::point(det_exact(&m).unwrap()));
    }

    #[test]
    fn nullspace_is_kernel(r in 1usize..5, c in 1usize..6, seed in prop::collection::vec(-3i64..=3, 30)) {
        // Low-rank-ish entries from a small alphabet.
        let rows: Vec<Vec<Rat>> = (0..r).map(|i| (0..c).map(|j| Rat::from_integer(int(seed[(i * c + j) % 30] * ((i + j) as i64 % 2)))).collect()).collect();
        let m = mat(&rows);
        let ns = nullspace_integer(&m);
        prop_assert_eq!(ns.len(), c - rank_oracle(&rows));
        prop_assert_eq!(rank_exact(&m), rank_oracle(&rows));
        for v in &ns {
            for row in &rows {
                let s: Rat = row.iter().zip(v).map(|(a, b)| a * Rat::from_integer(b.clone())).sum();
                prop_assert!(s.is_zero());
            }
        }
    }

    #[test]
    fn char_poly_vanishes_on_diagonal(diag in prop::collection::vec(small_rat(), 1..6)) {
        let n = diag.len();
        let m = Matrix::from_fn(n, n, |i, j| if i == j { diag[i].clone() } else { Rat::zero() });
        let cp = char_poly(&m).unwrap();
        for d in &diag {
            prop_assert!(cp.eval(d).is_zero());
        }
    }

    #[test]
    fn last_convergent_is_exact(r in small_rat(), extra in 0usize..4) {
        let full = continued_fraction(&r, usize::MAX);
        prop_assert_eq!(full.convergents.last().unwrap(), &r);
        // Truncating at the full length or beyond changes nothing.
        let again = continued_fraction(&r, full.quotients.len() + extra);
        prop_assert_eq!(again, full);
    }

    #[test]
    fn isolation_count_matches_sturm(roots in prop::collection::vec(-8i64..=8, 1..6), lo in -10i64..0, hi in 0i64..10) {
        let p = roots.iter().fold(UniPoly::constant(Rat::one()), |acc, &r| {
            acc.mul(&UniPoly::new(vec![Rat::from_integer(int(-r)), Rat::one()]))
        });
        let window = Ival::new(Rat::from_integer(int(lo)), Rat::from_integer(int(hi)));
        let iso = isolate_real_roots(&p, &window, &Rat::new(int(1), int(64))).unwrap();
        let s = Sturm::new(&p);
        prop_assert_eq!(iso.len(), s.count_closed(window.lo(), window.hi()));
    }

    #[test]
    fn descartes_counts_match_roots(roots in prop::collection::vec(-6i64..=6, 1..7), t in small_rat()) {
        let p = roots.iter().fold(UniPoly::constant(Rat::one()), |acc, &r| {
            acc.mul(&UniPoly::new(vec![Rat::from_integer(int(-r)), Rat::one()]))
        });
        let rr = RealRooted::new(p.coeffs().iter().map(|c| c.to_integer()).collect());
        let below = roots.iter().filter(|&&r| Rat::from_integer(int(r)) < t).count();
        let at = roots.iter().filter(|&&r| Rat::from_integer(int(r)) == t).count();
        prop_assert_eq!(rr.count_below(&t), (below, at));
        let sign = p.eval(&t);
        prop_assert_eq!(rr.sign_at(&t), if sign.is_zero() { 0 } else if sign.is_positive() { 1 } else { -1 });
    }
}

#[test]
fn convergents_round_trip_1000_rationals() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    for _ in 0..1000 {
        let n: i64 = rng.gen_range(-1_000_000_000..1_000_000_000);
        let d: i64 = rng.gen_range(1..1_000_000_000);
        let r = Rat::new(int(n), int(d));
        let cf = continued_fraction(&r, usize::MAX);
        assert_eq!(cf.convergents.last(), Some(&r));
    }
}
