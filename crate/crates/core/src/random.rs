//! Deterministic, seeded generators for complexes, chain maps and homotopy
//! equivalences. Every generator is a pure function of its arguments; the
//! verifier leans on that to reproduce any failing instance from its seed.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::complex::{FilteredComplex, Generator};
use crate::f2::F2Vec;
use crate::map::{FilteredLinearMap, FilteredMap};

pub(crate) fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Stable derivation of per-instance seeds from a campaign seed.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    // splitmix64 step over the pair
    let mut z = seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// A random valid complex: pair some generators into a strictly
/// filtration-respecting matching, then conjugate by a random filtration
/// preserving change of basis. The matching guarantees d² = 0 and the
/// conjugation keeps it while mixing supports.
pub fn random_complex(
    gen_count: usize,
    filtration_grid: &[f64],
    density: f64,
    seed: u64,
) -> FilteredComplex {
    let mut rng = rng_for(seed);
    let name = format!("rand{seed}");
    if gen_count == 0 || filtration_grid.is_empty() {
        return FilteredComplex::empty(name);
    }

    let mut gens: Vec<Generator> = (0..gen_count)
        .map(|i| Generator {
            id: format!("g{i}"),
            filtration: filtration_grid[rng.random_range(0..filtration_grid.len())],
        })
        .collect();
    gens.sort_by(|a, b| a.filtration.total_cmp(&b.filtration));

    // partial matching j -> i with i < j and filtration(i) <= filtration(j);
    // each generator is used at most once, on one side only
    let mut cols = vec![F2Vec::zero(); gen_count];
    let mut used = vec![false; gen_count];
    for j in (1..gen_count).rev() {
        if used[j] || !rng.random_bool(density.clamp(0.0, 1.0)) {
            continue;
        }
        let candidates: Vec<usize> = (0..j).filter(|&i| !used[i]).collect();
        if let Some(&i) = pick(&mut rng, &candidates) {
            cols[j] = F2Vec::unit(i);
            used[i] = true;
            used[j] = true;
        }
    }

    let complex = FilteredComplex::from_parts(name, gens, cols);
    let ops = (density * gen_count as f64 * 4.0).round() as usize;
    conjugate_by_random_basis(&complex, ops, &mut rng)
}

/// Conjugate the differential by a random product of filtration-preserving
/// transvections. The transvections square to the identity over F2, so the
/// inverse is the reversed product.
fn conjugate_by_random_basis(
    complex: &FilteredComplex,
    ops: usize,
    rng: &mut ChaCha8Rng,
) -> FilteredComplex {
    let n = complex.len();
    if n < 2 {
        return complex.clone();
    }
    let transvections = sample_transvections(complex, ops, rng);
    let d: Vec<F2Vec> = (0..n)
        .map(|g| {
            // d' = Q d Q⁻¹ column by column
            let mut pre = F2Vec::unit(g);
            for &(row, col) in transvections.iter().rev() {
                apply_transvection(&mut pre, row, col);
            }
            let mut out = complex.apply_boundary(&pre);
            for &(row, col) in transvections.iter() {
                apply_transvection(&mut out, row, col);
            }
            out
        })
        .collect();
    FilteredComplex::from_parts(
        complex.name().to_string(),
        complex.generators().to_vec(),
        d,
    )
}

/// Sample index pairs (row, col) with filtration(row) <= filtration(col),
/// usable as 0-shifted elementary operations v ↦ v + v[col]·e_row.
fn sample_transvections(
    complex: &FilteredComplex,
    ops: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<(usize, usize)> {
    let n = complex.len();
    let mut out = Vec::with_capacity(ops);
    for _ in 0..ops {
        let col = rng.random_range(0..n);
        let rows: Vec<usize> = (0..n)
            .filter(|&r| r != col && complex.filtration(r) <= complex.filtration(col))
            .collect();
        if let Some(&row) = pick(rng, &rows) {
            out.push((row, col));
        }
    }
    out
}

fn apply_transvection(v: &mut F2Vec, row: usize, col: usize) {
    if v.get(col) {
        v.flip(row);
    }
}

fn pick<'a, T>(rng: &mut ChaCha8Rng, items: &'a [T]) -> Option<&'a T> {
    if items.is_empty() {
        None
    } else {
        Some(&items[rng.random_range(0..items.len())])
    }
}

/// A random shift-filtered chain map, built as d∘λ + λ∘d for a random
/// filtered λ, optionally plus a rank-one strict chain map (cocycle ⊗ cycle)
/// when one fits inside the shift. Chain-map validity holds by construction.
pub fn random_filtered_map(
    source: &FilteredComplex,
    target: &FilteredComplex,
    shift: f64,
    seed: u64,
) -> FilteredMap {
    assert!(shift >= 0.0, "admissible shifts are non-negative");
    let mut rng = rng_for(seed);
    let lambda = random_linear_map(source, target, shift, 0.4, &mut rng);
    let mut f = lambda.d_commutator();

    if rng.random_bool(0.5) {
        if let Some(strict) = rank_one_chain_map(source, target, shift, &mut rng) {
            f = f.add(&strict);
        }
    }
    f.shift = shift;
    debug_assert!(f.is_chain_map());
    debug_assert!(f.minimal_shift() <= shift);
    FilteredMap::new(f)
}

/// Random filtered linear map with entries allowed wherever the shift permits.
pub(crate) fn random_linear_map(
    source: &FilteredComplex,
    target: &FilteredComplex,
    shift: f64,
    density: f64,
    rng: &mut ChaCha8Rng,
) -> FilteredLinearMap {
    let mut cols = Vec::with_capacity(source.len());
    for g in 0..source.len() {
        let mut col = F2Vec::zero();
        for t in 0..target.len() {
            if target.filtration(t) <= source.filtration(g) + shift && rng.random_bool(density) {
                col.set(t, true);
            }
        }
        cols.push(col);
    }
    FilteredLinearMap::from_columns(source.clone(), target.clone(), shift, cols)
}

/// x ↦ ξ(x)·w for a cocycle ξ of the source and a cycle w of the target;
/// always a chain map, kept only when it fits the shift.
fn rank_one_chain_map(
    source: &FilteredComplex,
    target: &FilteredComplex,
    shift: f64,
    rng: &mut ChaCha8Rng,
) -> Option<FilteredLinearMap> {
    let cocycles = cocycle_supports(source);
    let cycles = cycle_supports(target);
    if cocycles.is_empty() || cycles.is_empty() {
        return None;
    }
    let xi = pick(rng, &cocycles)?.clone();
    let w = pick(rng, &cycles)?.clone();
    let lowest_source = xi
        .iter_ones()
        .map(|i| source.filtration(i))
        .fold(f64::INFINITY, f64::min);
    let highest_target =
        w.iter_ones().map(|i| target.filtration(i)).fold(f64::NEG_INFINITY, f64::max);
    if highest_target > lowest_source + shift {
        return None;
    }
    let cols = (0..source.len())
        .map(|g| if xi.get(g) { w.clone() } else { F2Vec::zero() })
        .collect();
    Some(FilteredLinearMap::from_columns(source.clone(), target.clone(), shift, cols))
}

fn cycle_supports(complex: &FilteredComplex) -> Vec<F2Vec> {
    crate::f2::kernel_basis(complex.boundary_columns())
}

/// Kernels of the transposed differential: functionals vanishing on boundaries.
fn cocycle_supports(complex: &FilteredComplex) -> Vec<F2Vec> {
    let n = complex.len();
    let mut rows = vec![F2Vec::zero(); n];
    for g in 0..n {
        for t in complex.boundary(g).iter_ones() {
            rows[t].set(g, true);
        }
    }
    crate::f2::kernel_basis(&rows)
}

/// Explicit homotopy-equivalence data between a complex and a padded,
/// basis-twisted copy.
///
/// The construction keeps `backward ∘ forward` equal to the identity on the
/// nose (`homotopy_source` is zero) and kills the padding with a homotopy
/// that vanishes on the image of `forward`. Downstream constructions exploit
/// those side conditions.
#[derive(Debug, Clone)]
pub struct HomotopyEquivalence {
    pub source: FilteredComplex,
    pub padded: FilteredComplex,
    pub forward: FilteredMap,
    pub backward: FilteredMap,
    /// Witness for backward∘forward ≃ id on `source` (zero here).
    pub homotopy_source: FilteredLinearMap,
    /// Witness for forward∘backward ≃ id on `padded`.
    pub homotopy_padded: FilteredLinearMap,
    /// Common admissible shift of the four maps.
    pub shift: f64,
}

impl HomotopyEquivalence {
    /// Exact check of both homotopy identities and the shift declarations.
    pub fn verify(&self) -> bool {
        let round = self.backward.linear.compose(&self.forward.linear);
        let id_src = FilteredLinearMap::identity(&self.source, 0.0);
        let lhs_src = round.add(&id_src);
        let rhs_src = self.homotopy_source.d_commutator();

        let round2 = self.forward.linear.compose(&self.backward.linear);
        let id_pad = FilteredLinearMap::identity(&self.padded, 0.0);
        let lhs_pad = round2.add(&id_pad);
        let rhs_pad = self.homotopy_padded.d_commutator();

        lhs_src.columns() == rhs_src.columns()
            && lhs_pad.columns() == rhs_pad.columns()
            && self.forward.minimal_shift() <= self.shift
            && self.backward.minimal_shift() <= self.shift
            && self.homotopy_source.minimal_shift() <= self.shift
            && self.homotopy_padded.minimal_shift() <= self.shift
    }
}

/// Pad `complex` with short acyclic pairs, twist by a random change of basis,
/// and return the explicit equivalence. With no padding the witness is the
/// identity.
pub fn random_homotopy_equivalence(
    complex: &FilteredComplex,
    pad_pairs: usize,
    shift_budget: f64,
    seed: u64,
) -> HomotopyEquivalence {
    assert!(shift_budget >= 0.0);
    let mut rng = rng_for(seed);

    if pad_pairs == 0 {
        return HomotopyEquivalence {
            source: complex.clone(),
            padded: complex.clone(),
            forward: FilteredMap::identity(complex, 0.0),
            backward: FilteredMap::identity(complex, 0.0),
            homotopy_source: FilteredLinearMap::zero(complex.clone(), complex.clone(), 0.0),
            homotopy_padded: FilteredLinearMap::zero(complex.clone(), complex.clone(), 0.0),
            shift: 0.0,
        };
    }

    let base_filts: Vec<f64> = if complex.is_empty() {
        vec![0.0, 1.0]
    } else {
        complex.critical_values()
    };

    let mut padded = complex.clone();
    let mut pad_homotopy_pairs = Vec::new(); // (x index, y index) in padded
    let mut max_delta = 0.0f64;
    for p in 0..pad_pairs {
        let birth = *pick(&mut rng, &base_filts).unwrap();
        let quarters = rng.random_range(0..=((shift_budget * 4.0) as u64)) as f64;
        let delta = (quarters / 4.0).min(shift_budget);
        max_delta = max_delta.max(delta);
        let pair = FilteredComplex::new(
            format!("pad{p}"),
            vec![(format!("px{p}"), birth), (format!("py{p}"), birth + delta)],
            &[(format!("py{p}"), vec![format!("px{p}")])],
        )
        .unwrap();
        padded = padded.direct_sum(&pair);
        pad_homotopy_pairs.push((padded.len() - 2, padded.len() - 1));
    }
    padded.set_name(format!("{}~{seed}", complex.name()));

    // pad-killing homotopy before the twist: x_i ↦ y_i, zero elsewhere
    let mut h0_cols = vec![F2Vec::zero(); padded.len()];
    for &(x, y) in &pad_homotopy_pairs {
        h0_cols[x] = F2Vec::unit(y);
    }

    // filtration-preserving change of basis Q (an involution-free product of
    // transvections; inverse is the reversed product)
    let ops = rng.random_range(0..=(2 * padded.len()));
    let transvections = sample_transvections(&padded, ops, &mut rng);
    let apply_q = |v: &F2Vec| {
        let mut out = v.clone();
        for &(row, col) in transvections.iter() {
            apply_transvection(&mut out, row, col);
        }
        out
    };
    let apply_q_inv = |v: &F2Vec| {
        let mut out = v.clone();
        for &(row, col) in transvections.iter().rev() {
            apply_transvection(&mut out, row, col);
        }
        out
    };

    // twisted complex: d' = Q d Q⁻¹ on the padded generators
    let twisted_cols: Vec<F2Vec> = (0..padded.len())
        .map(|g| apply_q(&padded.apply_boundary(&apply_q_inv(&F2Vec::unit(g)))))
        .collect();
    let twisted = FilteredComplex::from_parts(
        padded.name().to_string(),
        padded.generators().to_vec(),
        twisted_cols,
    );
    debug_assert!(twisted.is_valid());

    let n_src = complex.len();
    // forward = Q ∘ inclusion, backward = projection ∘ Q⁻¹
    let fwd_cols: Vec<F2Vec> = (0..n_src).map(|g| apply_q(&F2Vec::unit(g))).collect();
    let bwd_cols: Vec<F2Vec> = (0..twisted.len())
        .map(|g| apply_q_inv(&F2Vec::unit(g)).restricted_below(n_src))
        .collect();
    // homotopy on the twisted side: Q h₀ Q⁻¹
    let h_cols: Vec<F2Vec> = (0..twisted.len())
        .map(|g| {
            let pre = apply_q_inv(&F2Vec::unit(g));
            let mut mid = F2Vec::zero();
            for i in pre.iter_ones() {
                mid.xor_assign(&h0_cols[i]);
            }
            apply_q(&mid)
        })
        .collect();

    let shift = max_delta;
    let witness = HomotopyEquivalence {
        source: complex.clone(),
        padded: twisted.clone(),
        forward: FilteredMap::new(FilteredLinearMap::from_columns(
            complex.clone(),
            twisted.clone(),
            shift,
            fwd_cols,
        )),
        backward: FilteredMap::new(FilteredLinearMap::from_columns(
            twisted.clone(),
            complex.clone(),
            shift,
            bwd_cols,
        )),
        homotopy_source: FilteredLinearMap::zero(complex.clone(), complex.clone(), shift),
        homotopy_padded: FilteredLinearMap::from_columns(
            twisted.clone(),
            twisted,
            shift,
            h_cols,
        ),
        shift,
    };
    debug_assert!(witness.verify());
    witness
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_complex_is_deterministic_and_valid() {
        let grid = [0.0, 1.0, 2.0, 3.0];
        let a = random_complex(5, &grid, 0.3, 42);
        let b = random_complex(5, &grid, 0.3, 42);
        assert!(a.same_shape(&b));
        assert!(a.is_valid());
        for seed in 0..50 {
            assert!(random_complex(9, &grid, 0.6, seed).is_valid());
        }
    }

    #[test]
    fn empty_request_gives_empty_complex() {
        assert!(random_complex(0, &[], 0.5, 7).is_empty());
    }

    #[test]
    fn random_map_is_valid_and_deterministic() {
        let grid = [0.0, 0.5, 1.0, 2.0];
        for seed in 0..30 {
            let a = random_complex(6, &grid, 0.5, seed);
            let b = random_complex(7, &grid, 0.5, seed + 1000);
            let f = random_filtered_map(&a, &b, 1.0, 9 + seed);
            let report = f.validate();
            assert!(report.ok(), "{:?}", report.violations);
        }
        let a = random_complex(6, &grid, 0.5, 3);
        let b = random_complex(7, &grid, 0.5, 4);
        let f1 = random_filtered_map(&a, &b, 1.0, 9);
        let f2 = random_filtered_map(&a, &b, 1.0, 9);
        assert_eq!(f1.columns(), f2.columns());
    }

    #[test]
    fn zero_source_gives_zero_map() {
        let z = FilteredComplex::empty("Z");
        let b = random_complex(4, &[0.0, 1.0], 0.5, 1);
        let f = random_filtered_map(&z, &b, 1.0, 5);
        assert!(f.is_zero());
    }

    #[test]
    fn trivial_witness_is_identity() {
        let c = FilteredComplex::interval(0.0, 2.0);
        let w = random_homotopy_equivalence(&c, 0, 0.0, 11);
        assert!(w.verify());
        assert_eq!(w.shift, 0.0);
        assert!(w.padded.same_shape(&c));
    }

    #[test]
    fn single_pad_on_a_point_stays_within_the_depth_bound() {
        let c = FilteredComplex::point("g", 0.0);
        for seed in 0..20 {
            let w = random_homotopy_equivalence(&c, 1, 2.0, seed);
            assert!(w.verify());
            let before = crate::invariants::profile(&c).unwrap().beta;
            let after = crate::invariants::profile(&w.padded).unwrap().beta;
            assert!((after - before).abs() <= 2.0 * w.shift + 1e-12);
        }
    }

    #[test]
    fn padded_witnesses_verify_exactly() {
        let grid = [0.0, 0.5, 1.0, 2.0, 3.0];
        for seed in 0..40 {
            let c = random_complex(6, &grid, 0.5, seed);
            let w = random_homotopy_equivalence(&c, 2, 1.5, seed * 7 + 1);
            assert!(w.verify(), "witness failed at seed {seed}");
            assert!(w.shift <= 1.5);
            assert!(w.padded.is_valid());
            // side conditions used by the cone equivalence construction
            let hf = w.homotopy_padded.compose(&w.forward.linear);
            assert!(hf.is_zero());
            assert!(w.homotopy_source.is_zero());
        }
    }
}
