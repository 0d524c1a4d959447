mod common;

use algcurve::polybasis::{
    dy_square_sum, even_support, graded_support, mono_vector, normalize_integer, poly_eval,
};
use algcurve::{Poly, Rat};
use common::*;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

#[test]
fn graded_sizes() {
    for d in 0..=12u32 {
        let n = d as usize;
        assert_eq!(graded_support(d).len(), (n + 1) * (n + 2) / 2);
    }
}

fn coeffs_for(d: u32) -> impl Strategy<Value = Vec<Rat>> {
    prop::collection::vec(small_rat(), graded_support(d).len())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mono_vector_dot_is_eval((d, c) in (0u32..5).prop_flat_map(|d| (Just(d), coeffs_for(d))), x in small_rat(), y in small_rat()) {
        let s = graded_support(d);
        let f = Poly::new(s.clone(), c.clone()).unwrap();
        let dot: Rat = mono_vector(&s, &x, &y).iter().zip(&c).map(|(m, k)| m * k).sum();
        prop_assert_eq!(dot, poly_eval(&f, &x, &y));
    }

    #[test]
    fn dy_square_sum_nonnegative(d in 0u32..5, even in any::<bool>(), x in small_rat(), y in small_rat()) {
        let s = if even { even_support(d) } else { graded_support(d) };
        let h = dy_square_sum(&s);
        prop_assert!(!h.eval(&x, &y).is_negative());
        // Same value as summing the squared derivatives term by term.
        let direct: Rat = s.monomials().iter().map(|m| {
            if m.ky == 0 {
                return Rat::zero();
            }
            let k = Rat::from_integer(int(m.ky as i64));
            let v = &k * x.pow(m.kx as i32) * y.pow(m.ky as i32 - 1);
            &v * &v
        }).sum();
        prop_assert_eq!(h.eval(&x, &y), direct);
    }

    #[test]
    fn normalize_idempotent_and_scale_free((d, c) in (1u32..4).prop_flat_map(|d| (Just(d), coeffs_for(d))), q in nonzero_rat()) {
        prop_assume!(c.iter().any(|v| !v.is_zero()));
        let s = graded_support(d);
        let n = normalize_integer(&c, &s).unwrap();
        let again = normalize_integer(n.to_rat().coeffs(), n.support()).unwrap();
        prop_assert_eq!(&again, &n);
        let scaled: Vec<Rat> = c.iter().map(|v| v * &q).collect();
        prop_assert_eq!(normalize_integer(&scaled, &s).unwrap(), n);
    }
}
