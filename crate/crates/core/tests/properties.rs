//! Property tests over seeded random instances: structural invariants that
//! should survive any sampling.

use proptest::prelude::*;

use filtra::complex::FilteredComplex;
use filtra::invariants::profile;
use filtra::io::{complex_to_json, parse_complex};
use filtra::persistence::barcode;
use filtra::random::{random_complex, random_filtered_map};
use filtra::verify::DEFAULT_GRID;

fn arb_complex() -> impl Strategy<Value = FilteredComplex> {
    (0usize..12, 0u64..1_000_000, 0u8..=10).prop_map(|(n, seed, density)| {
        random_complex(n, &DEFAULT_GRID, density as f64 / 10.0, seed)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generated_complexes_are_valid(c in arb_complex()) {
        prop_assert!(c.validate().is_empty());
    }

    #[test]
    fn sublevels_are_closed_under_the_differential(c in arb_complex()) {
        for alpha in c.evaluation_points() {
            let level: std::collections::HashSet<usize> =
                c.level_indices(alpha).into_iter().collect();
            for &i in &level {
                prop_assert!(c.boundary(i).iter_ones().all(|t| level.contains(&t)));
            }
        }
    }

    #[test]
    fn shift_round_trip_is_bit_exact(c in arb_complex(), s in 0u8..=16) {
        let s = s as f64 / 4.0;
        let back = c.shifted(s).shifted(-s);
        prop_assert!(back.same_shape(&c));
    }

    #[test]
    fn barcode_ignores_tie_breaking_order(c in arb_complex(), rotation in 0usize..12) {
        // rotate positions inside each equal-filtration block
        let n = c.len();
        if n > 1 {
            let mut perm: Vec<usize> = (0..n).collect();
            perm.sort_by(|&a, &b| {
                c.filtration(a).total_cmp(&c.filtration(b))
                    .then(((a + rotation) % n).cmp(&((b + rotation) % n)))
            });
            let permuted = c.permuted(&perm);
            prop_assert!(permuted.is_valid());
            prop_assert_eq!(barcode(&permuted).unwrap(), barcode(&c).unwrap());
        }
    }

    #[test]
    fn direct_sum_merges_barcodes_and_profiles(a in arb_complex(), b in arb_complex()) {
        let sum = a.direct_sum(&b);
        let merged = barcode(&a).unwrap().merged(&barcode(&b).unwrap());
        prop_assert_eq!(barcode(&sum).unwrap(), merged);

        let (pa, pb, ps) = (profile(&a).unwrap(), profile(&b).unwrap(), profile(&sum).unwrap());
        prop_assert_eq!(ps.sigma_plus, pa.sigma_plus.max(pb.sigma_plus));
        prop_assert_eq!(ps.sigma_minus, pa.sigma_minus.min(pb.sigma_minus));
        prop_assert_eq!(ps.beta, pa.beta.max(pb.beta));
    }

    #[test]
    fn serialization_round_trips_canonically(c in arb_complex()) {
        let text = complex_to_json(&c);
        let parsed = parse_complex(&text, "prop").unwrap();
        prop_assert!(parsed.same_shape(&c));
        prop_assert_eq!(complex_to_json(&parsed), text);
    }

    #[test]
    fn minimal_shift_is_the_threshold(
        a in arb_complex(),
        b in arb_complex(),
        declared in 0u8..=8,
        seed in 0u64..1_000_000,
    ) {
        let f = random_filtered_map(&a, &b, declared as f64 / 4.0, seed);
        let report = f.validate();
        prop_assert!(report.ok());
        let s0 = report.minimal_shift;
        // passes at every grid shift above the threshold
        for step in 0..4 {
            let mut probe = f.linear.clone();
            probe.shift = s0 + step as f64 * 0.5;
            prop_assert!(filtra::FilteredMap::new(probe).validate().ok());
        }
        // fails just below it whenever the map is nonzero with positive shift
        if !f.is_zero() && s0 > 0.0 {
            let mut probe = f.linear.clone();
            probe.shift = s0 - 0.25;
            prop_assert!(!filtra::FilteredMap::new(probe).validate().ok());
        }
    }
}
