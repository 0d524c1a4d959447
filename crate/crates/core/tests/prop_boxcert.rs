mod common;

use algcurve::boxcert::{
    box_pd_certificate, default_radius_width, delta_bound_poly, Box, BoxCertOptions,
};
use algcurve::exactnum::det_exact;
use algcurve::gram::{build_gram, degree_degenerate, Verdict};
use algcurve::polybasis::{graded_support, support_size};
use algcurve::Rat;
use common::*;
use num_traits::Zero;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};

fn sample_in(rng: &mut impl Rng, lo: &Rat, hi: &Rat) -> Rat {
    let t = Rat::new(int(rng.gen_range(0..=1000)), int(1000));
    lo + (hi - lo) * t
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn constant_term_squares_to_aggregate_det((d, centers) in (1u32..=2).prop_flat_map(|d| (Just(d), points(support_size(d)..=support_size(d))))) {
        let p = centers.len();
        let cert = delta_bound_poly(&centers, d, &vec![true; p], &default_radius_width()).unwrap();
        let agg = build_gram(&centers, &graded_support(d)).unwrap().aggregate;
        prop_assert_eq!(&cert.constant_term * &cert.constant_term, det_exact(&agg).unwrap());
    }

    #[test]
    fn radius_survives_random_perturbation(centers in points(3..=3), seed in any::<u64>()) {
        let cert = delta_bound_poly(&centers, 1, &[true; 3], &default_radius_width()).unwrap();
        prop_assume!(!cert.constant_term.is_zero());
        let delta = cert.pd_radius.expect("nonzero determinant has a radius").lo().clone();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let neg = -delta.clone();
        for _ in 0..20 {
            let moved: Vec<(Rat, Rat)> = centers
                .iter()
                .map(|(x, y)| (x + sample_in(&mut rng, &neg, &delta), y + sample_in(&mut rng, &neg, &delta)))
                .collect();
            prop_assert_eq!(degree_degenerate(&moved, 1).unwrap().degenerate, Verdict::ProvedNo);
        }
    }

    #[test]
    fn proved_certificate_rejects_samples(centers in points(3..=4), hw in 1i64..=50, seed in any::<u64>()) {
        let h = Rat::new(int(hw), int(1000));
        let boxes: Vec<Box> = centers.iter().map(|c| Box::around(c, &h, &h)).collect();
        let opts = BoxCertOptions { max_depth: 6, random_subsets: 4, seed, ..BoxCertOptions::default() };
        let cert = box_pd_certificate(&boxes, 1, None, &opts).unwrap();
        if cert.is_proved() {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..100 {
                let pts: Vec<(Rat, Rat)> = cert
                    .subset
                    .iter()
                    .map(|&i| {
                        let b = &boxes[i];
                        (sample_in(&mut rng, b.x().lo(), b.x().hi()), sample_in(&mut rng, b.y().lo(), b.y().hi()))
                    })
                    .collect();
                prop_assert_eq!(degree_degenerate(&pts, 1).unwrap().degenerate, Verdict::ProvedNo);
            }
        }
    }
}

#[test]
fn expansion_degree_formula() {
    let centers: Vec<(Rat, Rat)> = [(0, 1), (1, 3), (2, 2), (3, 7), (5, 4), (7, 1)]
        .iter()
        .map(|&(x, y)| (Rat::from_integer(int(x)), Rat::from_integer(int(y))))
        .collect();
    for d in 1..=2u32 {
        let p = support_size(d);
        let cert =
            delta_bound_poly(&centers[..p], d, &vec![true; p], &default_radius_width()).unwrap();
        let n = d as usize;
        assert_eq!(cert.expansion_degree(), n * (n + 1) * (n + 2) / 3);
    }
    let cert = delta_bound_poly(&centers, 2, &[true; 6], &default_radius_width()).unwrap();
    assert_eq!(cert.leibniz_terms(), 720);
}
