//! Acceptance battery: one test per criterion, each printing a pass line
//! with the measured numbers. Run with `cargo test --test acceptance`
//! (add `-- --nocapture` to see the lines).

use std::time::Instant;

use filtra::complex::FilteredComplex;
use filtra::cone::{mapping_cone, ConeInput};
use filtra::ext::ExtReal;
use filtra::invariants::{map_boundary_depth, profile, profile_oracle};
use filtra::map::{FilteredLinearMap, FilteredMap};
use filtra::persistence::barcode;
use filtra::random::{derive_seed, random_complex};
use filtra::verify::{
    bound_constants, duality_holds, homotopy_diff_probe, run_campaign, theorem_demo,
    CampaignConfig, Suite, TheoremDemoConfig, DEFAULT_GRID,
};

fn interval(b: f64, d: f64) -> FilteredComplex {
    FilteredComplex::interval(b, d)
}

fn point(f: f64) -> FilteredComplex {
    FilteredComplex::point("g", f)
}

#[test]
fn criterion_01_oracle_equivalence() {
    let start = Instant::now();
    for index in 0..500u64 {
        let seed = derive_seed(0xACCE_0001, index);
        let n = 1 + (seed % 12) as usize;
        let density = 0.2 + 0.6 * ((seed >> 8) % 100) as f64 / 100.0;
        let c = random_complex(n, &DEFAULT_GRID, density, seed);
        let fast = profile(&c).unwrap();
        let oracle = profile_oracle(&c).unwrap();
        assert_eq!(fast, oracle, "profile disagrees with the rank oracle at seed {seed}");
        assert!(duality_holds(&c), "barcode/rank duality fails at seed {seed}");
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "oracle equivalence took {elapsed:?}");
    println!(
        "acceptance criterion 1: PASS — 500 complexes, profile == rank oracle and full \
         barcode/rank duality, in {elapsed:.2?}"
    );
}

#[test]
fn criterion_02_cone_estimates() {
    let report = run_campaign(&CampaignConfig::new(Suite::Cone, 1000, 0xACCE_0002)).unwrap();
    assert!(report.ok(), "cone campaign failed: {:?}", report.instances.last());
    assert_eq!(report.passes, 1000);

    // fixture with the depth estimate tight: cone of P(1) -> P(0)
    let a = point(1.0);
    let b = FilteredComplex::point("b", 0.0);
    let f = FilteredMap::new(
        FilteredLinearMap::from_entries(
            a.clone(),
            b.clone(),
            0.0,
            &[("g".into(), vec!["b".into()])],
        )
        .unwrap(),
    );
    let cone = mapping_cone(&ConeInput::new(f, 0.0).unwrap());
    let pc = profile(&cone).unwrap();
    let pa = profile(&a).unwrap();
    let pb = profile(&b).unwrap();
    let depth_bound = pa.beta
        + pb.beta
        + (pa.sigma_plus.value() - pb.sigma_minus.value() + 0.0).max(0.0);
    assert_eq!(pc.beta, 1.0);
    assert_eq!(depth_bound, 1.0, "depth estimate is tight on the fixture");

    // fixture with the lower spectral edge tight: P(0) ⊕ I(1,4) as a cone of 0
    let a2 = point(0.0);
    let b2 = interval(1.0, 4.0);
    let cone2 =
        mapping_cone(&ConeInput::new(FilteredMap::zero(a2.clone(), b2.clone(), 0.0), 0.0).unwrap());
    let pc2 = profile(&cone2).unwrap();
    let pa2 = profile(&a2).unwrap();
    let pb2 = profile(&b2).unwrap();
    let lower = pb2
        .sigma_minus
        .checked_sub(ExtReal::finite(pa2.beta))
        .unwrap()
        .min(pa2.sigma_minus.checked_add(ExtReal::finite(0.0)).unwrap());
    assert_eq!(pc2.sigma_minus, ExtReal::finite(0.0));
    assert_eq!(lower, ExtReal::finite(0.0), "lower edge estimate is tight on the fixture");

    println!(
        "acceptance criterion 2: PASS — 1000 cones ({} vacuous), worst slack {:?}, both \
         fixtures tight",
        report.vacuous_instances, report.worst_slack
    );
}

#[test]
fn criterion_03_equivalence_invariance_and_shift_law() {
    let report = run_campaign(&CampaignConfig::new(Suite::Quasieq, 300, 0xACCE_0003)).unwrap();
    assert!(report.ok(), "quasieq campaign failed: {:?}", report.instances.last());
    assert_eq!(report.passes, 300);

    // fixture chain for the map-depth shift law
    let f = FilteredMap::new(
        FilteredLinearMap::from_entries(
            point(0.0),
            interval(0.0, 2.0),
            0.0,
            &[("g".into(), vec!["x".into()])],
        )
        .unwrap(),
    );
    assert_eq!(map_boundary_depth(&f, 0.0).unwrap(), 2.0);
    assert_eq!(map_boundary_depth(&f, 1.0).unwrap(), 1.0);
    assert_eq!(map_boundary_depth(&f, 3.0).unwrap(), 0.0);

    println!(
        "acceptance criterion 3: PASS — 300 homotopy equivalences (invariance + round-trip \
         depth + shift law, {} vacuous), fixture chain 2/1/0 exact",
        report.vacuous_instances
    );
}

#[test]
fn criterion_04_homotopy_difference_probe() {
    let report = homotopy_diff_probe(500, 0xACCE_0004);
    assert_eq!(report.corrected_violations, 0, "corrected max-form must hold everywhere");
    assert!(report.counterexample_violates_literal);
    assert!(report.counterexample_satisfies_corrected);
    assert_eq!(report.counterexample_depth, 2.0);
    assert_eq!(report.counterexample_literal_bound, 0.0);
    println!(
        "acceptance criterion 4: PASS — corrected bound holds on 500 instances; literal \
         min-form violated by the fixed counterexample (depth 2 > 0) and by {} random \
         instances",
        report.literal_violations
    );
}

#[test]
fn criterion_05_tensor_products() {
    let report = run_campaign(&CampaignConfig::new(Suite::Tensor, 300, 0xACCE_0005)).unwrap();
    assert!(report.ok(), "tensor campaign failed: {:?}", report.instances.last());
    assert_eq!(report.passes, 300);

    let t = filtra::cone::tensor_product(&interval(0.0, 2.0), &interval(0.0, 3.0));
    let bars: Vec<(f64, f64)> =
        barcode(&t).unwrap().bars().iter().map(|b| (b.birth, b.death)).collect();
    assert_eq!(bars, vec![(0.0, 2.0), (3.0, 5.0)]);

    println!(
        "acceptance criterion 5: PASS — 300 tensor pairs (additivity exact, depth bounded, \
         {} vacuous); interval fixture barcode exact",
        report.vacuous_instances
    );
}

#[test]
fn criterion_06_refilter_and_reassociate() {
    let refit = run_campaign(&CampaignConfig::new(Suite::Refilter, 200, 0xACCE_0006)).unwrap();
    assert!(refit.ok(), "refilter campaign failed: {:?}", refit.instances.last());
    let reassoc = run_campaign(&CampaignConfig::new(Suite::Reassoc, 200, 0xACCE_0007)).unwrap();
    assert!(reassoc.ok(), "reassoc campaign failed: {:?}", reassoc.instances.last());
    println!(
        "acceptance criterion 6: PASS — 200 refilterings and 200 reassociations within \
         their stability bounds"
    );
}

#[test]
fn criterion_07_iterated_bound() {
    // 200 instances per stage count r = 1..=5 (the suite cycles r with the
    // instance index)
    let report = run_campaign(&CampaignConfig::new(Suite::Iterated, 1000, 0xACCE_0008)).unwrap();
    assert!(report.ok(), "iterated campaign failed: {:?}", report.instances.last());
    assert_eq!(report.passes, 1000);

    let c1 = bound_constants(1).unwrap();
    assert_eq!((c1.a, c1.b, c1.e), (1.0, 1.0, 1.0));
    let mut prev = c1;
    for r in 2..=5 {
        let c = bound_constants(r).unwrap();
        assert!(
            c.a >= prev.a && c.b >= prev.b && c.e >= prev.e,
            "constants must be monotone in r"
        );
        prev = c;
    }
    println!(
        "acceptance criterion 7: PASS — 1000 iterated cones (200 per stage count 1..=5) \
         within the recursive bound; constants start at (1,1,1) and grow monotonically"
    );
}

#[test]
fn criterion_08_cone_equivalence() {
    let report = run_campaign(&CampaignConfig::new(Suite::ConeEquiv, 100, 0xACCE_0009)).unwrap();
    assert!(report.ok(), "cone equivalence campaign failed: {:?}", report.instances.last());
    assert_eq!(report.passes, 100);
    let ratio = report.max_shift_ratio.unwrap();
    assert!(
        ratio <= 3.0,
        "measured shift ratio {ratio} exceeds the candidate constant 3; the candidate \
         needs revisiting, not the data"
    );
    println!(
        "acceptance criterion 8: PASS — 100 squares, all homotopy identities exact over F2; \
         max measured-shift ratio {ratio:.3} <= 3"
    );
}

#[test]
fn criterion_09_decomposition_demo() {
    let start = Instant::now();
    let config = TheoremDemoConfig::new(3, 100, 17);
    let report = theorem_demo(&config).unwrap();
    assert_eq!(report.attachments, 7, "k = 3 flattens to seven items over the tail");
    assert!(report.all_pass, "failed trials: {:?}", report
        .trial_records
        .iter()
        .filter(|t| !t.pass)
        .collect::<Vec<_>>());
    assert_eq!(report.trial_records.len(), 100);

    // the bound constants may not depend on the trial seed
    let other = theorem_demo(&TheoremDemoConfig::new(3, 5, 18)).unwrap();
    assert_eq!(report.bound_offset.to_bits(), other.bound_offset.to_bits());
    assert_eq!(report.bound_slope.to_bits(), other.bound_slope.to_bits());

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "demo took {elapsed:?}");
    println!(
        "acceptance criterion 9: PASS — 100/100 trials with rho <= {:.3} + {:.3}·max_beta, \
         constants bitwise-stable across trial seeds, in {elapsed:.2?}",
        report.bound_offset, report.bound_slope
    );
}

#[test]
fn criterion_10_full_battery() {
    let start = Instant::now();
    let report = run_campaign(&CampaignConfig::new(Suite::All, 1, 0xACCE_000A)).unwrap();
    let elapsed = start.elapsed();
    assert!(report.ok(), "full battery failed");
    assert!(elapsed.as_secs_f64() < 60.0, "full battery took {elapsed:?}");
    let total: usize = report.sub_reports.iter().map(|r| r.passes).sum();
    println!(
        "acceptance criterion 10: PASS — full battery ({} suites, {total} instances) green \
         in {elapsed:.2?}",
        report.sub_reports.len()
    );
}
