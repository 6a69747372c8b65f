//! One-off stress sweep beyond the acceptance sizes.
fn main() {
    use filtra::invariants::{profile, profile_oracle};
    use filtra::random::{derive_seed, random_complex};
    use filtra::verify::{duality_holds, run_campaign, CampaignConfig, Suite};

    // dense grids with heavy ties
    let grid = [0.0, 0.0, 0.5, 1.0, 1.0, 2.0];
    for index in 0..2000u64 {
        let seed = derive_seed(0x57E55, index);
        let n = 1 + (seed % 20) as usize;
        let c = random_complex(n, &grid, 0.8, seed);
        assert!(c.is_valid());
        assert_eq!(profile(&c).unwrap(), profile_oracle(&c).unwrap(), "seed {seed}");
        if index % 10 == 0 {
            assert!(duality_holds(&c), "seed {seed}");
        }
    }
    println!("stress: 2000 dense tie-heavy complexes agree with the oracle");

    for (suite, count) in [
        (Suite::Cone, 3000),
        (Suite::Quasieq, 800),
        (Suite::Tensor, 800),
        (Suite::Iterated, 2000),
        (Suite::ConeEquiv, 300),
        (Suite::Refilter, 600),
        (Suite::Reassoc, 600),
        (Suite::HomotopyDiff, 1500),
    ] {
        let mut config = CampaignConfig::new(suite, count, 0xBEEF ^ count as u64);
        config.max_generators = 14;
        let report = run_campaign(&config).unwrap();
        assert!(report.ok(), "suite {} failed: {:?}", report.suite, report.instances.last());
        println!(
            "stress: suite {} x{count}: {} passed, {} vacuous, worst slack {:?}",
            report.suite, report.passes, report.vacuous_instances, report.worst_slack
        );
    }
}
