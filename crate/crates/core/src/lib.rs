//! Filtered chain complexes over F2 and their persistence invariants:
//! barcodes, spectral edges, boundary depth, filtered mapping cones, tensor
//! products, and a randomized verifier that cross-checks every computed
//! inequality against independent brute-force oracles.

pub mod complex;
pub mod cone;
pub mod error;
pub mod ext;
pub mod f2;
pub mod invariants;
pub mod io;
pub mod map;
pub mod persistence;
pub mod random;
pub mod report;
pub mod verify;

pub use complex::{FilteredComplex, Generator, Violation};
pub use cone::{
    cone_equivalence, iterated_bound, iterated_cone, mapping_cone, reassociate, refilter_cone,
    tensor_product, BoundConstants, ConeEquivalence, ConeEquivalenceInput, ConeInput,
    IteratedCone, IteratedConeBuilder, IteratedConeSpec,
};
pub use error::Error;
pub use ext::ExtReal;
pub use invariants::{
    aggregate, map_boundary_depth, profile, profile_oracle, spectral_invariant,
    AggregateProfile, InvariantProfile,
};
pub use map::{FilteredLinearMap, FilteredMap, MapReport};
pub use persistence::{
    barcode, homology_classes, persistence_rank, Bar, Barcode, PersistenceQuery,
};
pub use random::{
    random_complex, random_filtered_map, random_homotopy_equivalence, HomotopyEquivalence,
};
pub use report::Check;
pub use verify::{
    homotopy_diff_probe, run_campaign, theorem_demo, CampaignConfig, CampaignReport,
    DemoReport, HomotopyDiffReport, Suite, TheoremDemoConfig,
};
