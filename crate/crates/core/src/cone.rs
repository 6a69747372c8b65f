//! Filtered mapping cones and the calculus around them: refiltering,
//! reassociation of nested cones, equivalences of cones induced by homotopy
//! equivalent inputs, iterated cones, the recursive spectral-range bound,
//! and tensor products.
//!
//! The cone of an s-filtered chain map f: A → B keeps B at its own
//! filtration and raises A by s, so the inclusion of B is filtration
//! preserving. A-side generators are renamed with the source complex's name
//! as a prefix, which keeps provenance readable in deeply iterated cones.

use std::collections::HashSet;

use crate::complex::{fresh_id, FilteredComplex, Generator};
use crate::error::Error;
use crate::ext::ExtReal;
use crate::f2::{self, F2Vec};
use crate::invariants::{profile, AggregateProfile, InvariantProfile};
use crate::map::{FilteredLinearMap, FilteredMap};
use crate::report::{Check, DEFAULT_TOL};

/// A chain map together with the admissible shift used for the cone
/// filtration. Construction validates both the chain identity and the shift.
#[derive(Debug, Clone)]
pub struct ConeInput {
    map: FilteredMap,
    shift: f64,
}

impl ConeInput {
    pub fn new(map: FilteredMap, shift: f64) -> Result<ConeInput, Error> {
        let chain_failures = map.chain_failures();
        if !chain_failures.is_empty() {
            return Err(Error::InvalidMap {
                violations: chain_failures
                    .into_iter()
                    .map(|gen| crate::map::MapViolation::NotChain { gen })
                    .collect(),
            });
        }
        if shift < 0.0 {
            return Err(Error::bad_input("cone shift must be non-negative"));
        }
        let minimal = map.minimal_shift();
        if shift < minimal {
            return Err(Error::bad_input(format!(
                "cone shift {shift} is below the map's minimal admissible shift {minimal}"
            )));
        }
        Ok(ConeInput { map, shift })
    }

    /// Use the map's declared shift.
    pub fn at_declared(map: FilteredMap) -> Result<ConeInput, Error> {
        let shift = map.shift();
        ConeInput::new(map, shift)
    }

    pub fn map(&self) -> &FilteredMap {
        &self.map
    }

    pub fn shift(&self) -> f64 {
        self.shift
    }
}

/// The filtered mapping cone as a complex plus the A/B position split.
#[derive(Debug, Clone)]
pub struct ConeLayout {
    pub complex: FilteredComplex,
    /// Positions 0..a_count are the (shifted) source generators, the rest
    /// are target generators in their original order.
    pub a_count: usize,
}

impl ConeLayout {
    pub fn b_offset(&self) -> usize {
        self.a_count
    }

    /// The filtration-preserving inclusion of the target complex.
    pub fn inclusion(&self, target: &FilteredComplex) -> FilteredMap {
        let cols = (0..target.len()).map(|j| F2Vec::unit(self.a_count + j)).collect();
        FilteredMap::new(FilteredLinearMap::from_columns(
            target.clone(),
            self.complex.clone(),
            0.0,
            cols,
        ))
    }

    /// The projection onto the source complex (0-filtered, since the cone
    /// raises the source side).
    pub fn projection(&self, source: &FilteredComplex) -> FilteredMap {
        let cols = (0..self.complex.len())
            .map(|i| if i < self.a_count { F2Vec::unit(i) } else { F2Vec::zero() })
            .collect();
        FilteredMap::new(FilteredLinearMap::from_columns(
            self.complex.clone(),
            source.clone(),
            0.0,
            cols,
        ))
    }
}

pub(crate) fn build_cone(input: &ConeInput) -> ConeLayout {
    let f = &input.map;
    let s = input.shift;
    let a = f.source();
    let b = f.target();

    let mut taken: HashSet<String> = b.generators().iter().map(|g| g.id.clone()).collect();
    let mut gens = Vec::with_capacity(a.len() + b.len());
    for g in a.generators() {
        let id = fresh_id(&mut taken, format!("{}.{}", a.name(), g.id));
        gens.push(Generator { id, filtration: g.filtration + s });
    }
    gens.extend(b.generators().iter().cloned());

    let offset = a.len();
    let mut cols = Vec::with_capacity(gens.len());
    for i in 0..a.len() {
        // d(a) = d_A(a) + f(a)
        let mut col: F2Vec = a.boundary(i).clone();
        for t in f.column(i).iter_ones() {
            col.flip(offset + t);
        }
        cols.push(col);
    }
    for j in 0..b.len() {
        cols.push(b.boundary(j).iter_ones().map(|t| offset + t).collect());
    }

    let complex =
        FilteredComplex::from_parts(format!("[{}->{}]", a.name(), b.name()), gens, cols);
    debug_assert!(complex.is_valid(), "cone of a filtered chain map is valid");
    ConeLayout { complex, a_count: offset }
}

/// The filtered mapping cone of a validated (map, shift) pair.
pub fn mapping_cone(input: &ConeInput) -> FilteredComplex {
    build_cone(input).complex
}

/// Both filtrations of the same underlying cone, at shift `s` and at a larger
/// shift `s_prime`, with the stability checks between their profiles.
#[derive(Debug, Clone)]
pub struct RefilterReport {
    pub cone_low: FilteredComplex,
    pub cone_high: FilteredComplex,
    pub profile_low: InvariantProfile,
    pub profile_high: InvariantProfile,
    pub checks: Vec<Check>,
}

impl RefilterReport {
    pub fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }
}

pub fn refilter_cone(map: &FilteredMap, s: f64, s_prime: f64) -> Result<RefilterReport, Error> {
    if s_prime < s {
        return Err(Error::bad_input("refilter needs s' >= s"));
    }
    let low = ConeInput::new(map.clone(), s)?;
    let high = ConeInput::new(map.clone(), s_prime)?;
    let cone_low = mapping_cone(&low);
    let cone_high = mapping_cone(&high);
    let profile_low = profile(&cone_low)?;
    let profile_high = profile(&cone_high)?;

    let gap = s_prime - s;
    let checks = vec![
        Check::abs_diff_le(
            "refilter sigma+ stability",
            profile_high.sigma_plus,
            profile_low.sigma_plus,
            gap,
            DEFAULT_TOL,
        ),
        Check::abs_diff_le(
            "refilter sigma- stability",
            profile_high.sigma_minus,
            profile_low.sigma_minus,
            gap,
            DEFAULT_TOL,
        ),
        Check::abs_diff_le(
            "refilter rho stability",
            profile_high.rho,
            profile_low.rho,
            2.0 * gap,
            DEFAULT_TOL,
        ),
        Check::abs_diff_le(
            "refilter beta stability",
            ExtReal::finite(profile_high.beta),
            ExtReal::finite(profile_low.beta),
            2.0 * gap,
            DEFAULT_TOL,
        ),
    ];
    Ok(RefilterReport { cone_low, cone_high, profile_low, profile_high, checks })
}

/// Reassociation of a nested cone `[E -> [F -> G]]` into `[[E -> F] -> G]`.
#[derive(Debug, Clone)]
pub struct ReassocReport {
    pub cone_nested: FilteredComplex,
    pub cone_flat: FilteredComplex,
    pub profile_nested: InvariantProfile,
    pub profile_flat: InvariantProfile,
    /// Minimal shift of the underlying identity map, nested -> flat.
    pub identity_shift_forward: f64,
    /// And of its inverse.
    pub identity_shift_backward: f64,
    pub checks: Vec<Check>,
}

impl ReassocReport {
    pub fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }
}

/// `inner` is the cone data for f: F → G; `outer_map` sends E into the built
/// inner cone with admissible shift `outer_shift`.
pub fn reassociate(
    inner: &ConeInput,
    outer_map: &FilteredMap,
    outer_shift: f64,
) -> Result<ReassocReport, Error> {
    let inner_layout = build_cone(inner);
    if !outer_map.target().same_shape(&inner_layout.complex) {
        return Err(Error::bad_input(
            "reassociate: the outer map's target is not the inner mapping cone",
        ));
    }
    let outer = ConeInput::new(outer_map.clone(), outer_shift)?;
    let nested = mapping_cone(&outer);

    let e = outer_map.source();
    let f_complex = inner.map.source();
    let g_complex = inner.map.target();
    let s_f = inner.shift;
    let s_g = outer_shift;
    let s_g_flat = (s_g - s_f).max(0.0);

    // split the outer map into its F and G components
    let f_count = inner_layout.a_count;
    let mut into_f_cols = Vec::with_capacity(e.len());
    let mut into_g_cols: Vec<F2Vec> = Vec::with_capacity(e.len());
    for i in 0..e.len() {
        let col = outer_map.column(i);
        into_f_cols.push(col.restricted_below(f_count));
        into_g_cols
            .push(col.iter_ones().filter(|&t| t >= f_count).map(|t| t - f_count).collect());
    }
    let into_f = FilteredMap::new(FilteredLinearMap::from_columns(
        e.clone(),
        f_complex.clone(),
        s_g_flat,
        into_f_cols,
    ));
    let report = into_f.validate();
    assert!(
        report.ok(),
        "F-component of the outer map must be a {s_g_flat}-filtered chain map: {:?}",
        report.violations
    );

    let flat_inner = build_cone(&ConeInput::new(into_f, s_g_flat)?);

    // the flattened second-stage map acts as f on F generators and as the
    // G-component of the outer map on E generators
    let mut flat_map_cols: Vec<F2Vec> = into_g_cols.clone();
    flat_map_cols.extend((0..f_complex.len()).map(|i| inner.map.column(i).clone()));
    let flat_map = FilteredMap::new(FilteredLinearMap::from_columns(
        flat_inner.complex.clone(),
        g_complex.clone(),
        s_f,
        flat_map_cols,
    ));
    let flat = mapping_cone(&ConeInput::new(flat_map, s_f)?);

    assert_eq!(nested.len(), flat.len(), "reassociation preserves the generator set");
    assert_eq!(
        nested.boundary_columns(),
        flat.boundary_columns(),
        "reassociation preserves the differential"
    );

    let mut fwd = 0.0f64;
    let mut bwd = 0.0f64;
    for i in 0..nested.len() {
        fwd = fwd.max(flat.filtration(i) - nested.filtration(i));
        bwd = bwd.max(nested.filtration(i) - flat.filtration(i));
    }

    let profile_nested = profile(&nested)?;
    let profile_flat = profile(&flat)?;
    let gap = (s_f - s_g).abs();
    let checks = vec![
        Check::abs_diff_le(
            "reassociation sigma+ stability",
            profile_flat.sigma_plus,
            profile_nested.sigma_plus,
            gap,
            DEFAULT_TOL,
        ),
        Check::abs_diff_le(
            "reassociation sigma- stability",
            profile_flat.sigma_minus,
            profile_nested.sigma_minus,
            gap,
            DEFAULT_TOL,
        ),
        Check::abs_diff_le(
            "reassociation beta stability",
            ExtReal::finite(profile_flat.beta),
            ExtReal::finite(profile_nested.beta),
            2.0 * gap,
            DEFAULT_TOL,
        ),
        Check::le(
            "identity shift forward",
            ExtReal::finite(fwd),
            ExtReal::finite((s_f - s_g).max(0.0)),
            DEFAULT_TOL,
        ),
        Check::le(
            "identity shift backward",
            ExtReal::finite(bwd),
            ExtReal::finite((s_g - s_f).max(0.0)),
            DEFAULT_TOL,
        ),
    ];
    Ok(ReassocReport {
        cone_nested: nested,
        cone_flat: flat,
        profile_nested,
        profile_flat,
        identity_shift_forward: fwd,
        identity_shift_backward: bwd,
        checks,
    })
}

/// Tensor product with the sum filtration and the F2 Leibniz differential.
/// Pairs are ordered by (filtration sum, source index pair).
pub fn tensor_product(a: &FilteredComplex, b: &FilteredComplex) -> FilteredComplex {
    let mut order: Vec<(usize, usize)> = Vec::with_capacity(a.len() * b.len());
    for i in 0..a.len() {
        for j in 0..b.len() {
            order.push((i, j));
        }
    }
    order.sort_by(|&(i1, j1), &(i2, j2)| {
        let f1 = a.filtration(i1) + b.filtration(j1);
        let f2v = a.filtration(i2) + b.filtration(j2);
        f1.total_cmp(&f2v).then((i1, j1).cmp(&(i2, j2)))
    });
    let mut position = vec![usize::MAX; a.len() * b.len()];
    for (pos, &(i, j)) in order.iter().enumerate() {
        position[i * b.len() + j] = pos;
    }

    let mut taken = HashSet::new();
    let mut gens = Vec::with_capacity(order.len());
    for &(i, j) in &order {
        let id = fresh_id(&mut taken, format!("{}*{}", a.id(i), b.id(j)));
        gens.push(Generator { id, filtration: a.filtration(i) + b.filtration(j) });
    }

    let mut cols = Vec::with_capacity(order.len());
    for &(i, j) in &order {
        let mut col = F2Vec::zero();
        for di in a.boundary(i).iter_ones() {
            col.flip(position[di * b.len() + j]);
        }
        for dj in b.boundary(j).iter_ones() {
            col.flip(position[i * b.len() + dj]);
        }
        cols.push(col);
    }
    let out =
        FilteredComplex::from_parts(format!("{}(x){}", a.name(), b.name()), gens, cols);
    debug_assert!(out.is_valid());
    out
}

/// An iterated cone: a base complex and a sequence of attachments, each a
/// validated-at-build chain map into the partial cone built so far.
#[derive(Debug, Clone)]
pub struct IteratedConeSpec {
    pub base: FilteredComplex,
    /// (map from the i-th attachment into the (i-1)-st partial cone, shift).
    pub stages: Vec<(FilteredMap, f64)>,
}

#[derive(Debug, Clone)]
pub struct IteratedCone {
    /// partials[0] is the base, partials[r] the final cone.
    pub partials: Vec<FilteredComplex>,
}

impl IteratedCone {
    pub fn final_cone(&self) -> &FilteredComplex {
        self.partials.last().expect("at least the base")
    }
}

/// Left-fold of mapping cones, checking each stage against the partial cone
/// actually built.
pub fn iterated_cone(spec: &IteratedConeSpec) -> Result<IteratedCone, Error> {
    let mut partials = vec![spec.base.clone()];
    for (stage, (map, shift)) in spec.stages.iter().enumerate() {
        let current = partials.last().unwrap();
        if !map.target().same_shape(current) {
            return Err(Error::bad_input(format!(
                "iterated cone stage {}: map target does not match the partial cone",
                stage + 1
            )));
        }
        let input = ConeInput::new(map.clone(), *shift)
            .map_err(|e| Error::bad_input(format!("iterated cone stage {}: {e}", stage + 1)))?;
        partials.push(mapping_cone(&input));
    }
    Ok(IteratedCone { partials })
}

/// Incremental builder for iterated cones; each attachment is sampled or
/// supplied against the current partial cone.
#[derive(Debug, Clone)]
pub struct IteratedConeBuilder {
    spec: IteratedConeSpec,
    current: FilteredComplex,
}

impl IteratedConeBuilder {
    pub fn new(base: FilteredComplex) -> Self {
        IteratedConeBuilder {
            current: base.clone(),
            spec: IteratedConeSpec { base, stages: Vec::new() },
        }
    }

    pub fn current(&self) -> &FilteredComplex {
        &self.current
    }

    pub fn attach(&mut self, map: FilteredMap, shift: f64) -> Result<(), Error> {
        if !map.target().same_shape(&self.current) {
            return Err(Error::bad_input("attachment target must be the current partial cone"));
        }
        let input = ConeInput::new(map.clone(), shift)?;
        self.current = mapping_cone(&input);
        self.spec.stages.push((map, shift));
        Ok(())
    }

    pub fn finish(self) -> (IteratedConeSpec, FilteredComplex) {
        (self.spec, self.current)
    }
}

/// The r-only constants of the iterated spectral-range bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundConstants {
    pub r: usize,
    pub a: f64,
    pub b: f64,
    pub e: f64,
}

/// Upper bound for ρ(C_r) from the per-stage cone estimates, unrolled with
/// every max resolved to its summed branch.
///
/// Maintains a running bound V ≥ σ+(C_i) + (−σ−(C_i)) and U ≥ β(C_i):
///   V_i = V_{i-1} + U_{i-1} + β_i + s_i,
///   U_i = U_{i-1} + V_{i-1} + β_i + s_i,
/// seeded with V_0 = ρ̃ and U_0 = β_0. The returned constants are the
/// coefficients of ρ̃, of the worst β_j, and of the worst s_j in the final
/// linear form; they depend on r only.
pub fn iterated_bound(
    r: usize,
    tilde: &AggregateProfile,
    betas: &[f64],
    shifts: &[f64],
) -> Result<(ExtReal, BoundConstants), Error> {
    if r < 1 {
        return Err(Error::bad_input("iterated bound needs r >= 1"));
    }
    if betas.len() != r + 1 || shifts.len() != r {
        return Err(Error::bad_input(format!(
            "iterated bound for r = {r} needs {} betas and {r} shifts",
            r + 1
        )));
    }
    let rho_tilde = tilde
        .rho_tilde
        .as_finite()
        .ok_or_else(|| Error::bad_input("iterated bound assumes finite spectral ranges"))?;
    if betas.iter().chain(shifts).any(|v| !v.is_finite() || *v < 0.0) {
        return Err(Error::bad_input("betas and shifts must be finite and non-negative"));
    }

    let bound = unroll(r, rho_tilde, betas, shifts);

    // extract the linear coefficients by evaluating on indicator inputs
    let zeros_b = vec![0.0; r + 1];
    let zeros_s = vec![0.0; r];
    let a = unroll(r, 1.0, &zeros_b, &zeros_s);
    let mut b = 0.0f64;
    for j in 0..=r {
        let mut betas_ind = zeros_b.clone();
        betas_ind[j] = 1.0;
        b = b.max(unroll(r, 0.0, &betas_ind, &zeros_s));
    }
    let mut e = 0.0f64;
    for j in 0..r {
        let mut shifts_ind = zeros_s.clone();
        shifts_ind[j] = 1.0;
        e = e.max(unroll(r, 0.0, &zeros_b, &shifts_ind));
    }

    Ok((ExtReal::finite(bound), BoundConstants { r, a, b, e }))
}

fn unroll(r: usize, rho_tilde: f64, betas: &[f64], shifts: &[f64]) -> f64 {
    let mut range_bound = rho_tilde; // ≥ σ+(C_i) − σ−(C_i)
    let mut depth_bound = betas[0]; // ≥ β(C_i)
    for i in 1..=r {
        let next_range = range_bound + depth_bound + betas[i] + shifts[i - 1];
        let next_depth = depth_bound + range_bound + betas[i] + shifts[i - 1];
        range_bound = next_range;
        depth_bound = next_depth;
    }
    range_bound
}

/// Input square for comparing the cones of two homotopy-equivalent maps:
/// rows f_src: A' → B' and f_dst: A'' → B'', legs ψ (left) and φ (right)
/// with homotopy inverses, connecting homotopies for the square and for all
/// four round trips. Each map carries its declared shift.
#[derive(Debug, Clone)]
pub struct ConeEquivalenceInput {
    pub f_src: FilteredMap,
    pub f_dst: FilteredMap,
    pub left: FilteredMap,
    pub right: FilteredMap,
    /// h': A' → B'' with right∘f_src + f_dst∘left = d h' + h' d.
    pub square_homotopy: FilteredLinearMap,
    pub left_inverse: FilteredMap,
    pub right_inverse: FilteredMap,
    /// k': left_inverse∘left ≃ id on A'.
    pub left_round_src: FilteredLinearMap,
    /// k'': left∘left_inverse ≃ id on A''.
    pub left_round_dst: FilteredLinearMap,
    /// r': right_inverse∘right ≃ id on B'.
    pub right_round_src: FilteredLinearMap,
    /// r'': right∘right_inverse ≃ id on B''.
    pub right_round_dst: FilteredLinearMap,
}

impl ConeEquivalenceInput {
    /// All input identities, exactly over F2, with the failing one named.
    pub fn validate(&self) -> Result<(), Error> {
        let named = |name: &str, map: &FilteredMap| -> Result<(), Error> {
            let report = map.validate();
            if report.ok() {
                Ok(())
            } else {
                Err(Error::bad_input(format!(
                    "{name} is not a valid filtered chain map at its declared shift: {}",
                    report
                        .violations
                        .iter()
                        .map(|v| v.to_string())
                        .collect::<Vec<_>>()
                        .join("; ")
                )))
            }
        };
        named("f_src", &self.f_src)?;
        named("f_dst", &self.f_dst)?;
        named("left leg", &self.left)?;
        named("right leg", &self.right)?;
        named("left inverse", &self.left_inverse)?;
        named("right inverse", &self.right_inverse)?;

        let homotopy_identity = |name: &str,
                                 composite: FilteredLinearMap,
                                 on: &FilteredComplex,
                                 witness: &FilteredLinearMap|
         -> Result<(), Error> {
            let lhs = composite.add(&FilteredLinearMap::identity(on, 0.0));
            if lhs.columns() == witness.d_commutator().columns() {
                Ok(())
            } else {
                Err(Error::bad_input(format!("homotopy identity {name} fails over F2")))
            }
        };
        homotopy_identity(
            "left_inverse∘left ≃ id",
            self.left_inverse.linear.compose(&self.left.linear),
            self.left.source(),
            &self.left_round_src,
        )?;
        homotopy_identity(
            "left∘left_inverse ≃ id",
            self.left.linear.compose(&self.left_inverse.linear),
            self.left_inverse.source(),
            &self.left_round_dst,
        )?;
        homotopy_identity(
            "right_inverse∘right ≃ id",
            self.right_inverse.linear.compose(&self.right.linear),
            self.right.source(),
            &self.right_round_src,
        )?;
        homotopy_identity(
            "right∘right_inverse ≃ id",
            self.right.linear.compose(&self.right_inverse.linear),
            self.right_inverse.source(),
            &self.right_round_dst,
        )?;

        let square = self
            .right
            .linear
            .compose(&self.f_src.linear)
            .add(&self.f_dst.linear.compose(&self.left.linear));
        if square.columns() != self.square_homotopy.d_commutator().columns() {
            return Err(Error::bad_input(
                "square homotopy identity right∘f_src + f_dst∘left = d h' + h' d fails over F2",
            ));
        }

        let floor = self
            .f_src
            .shift()
            .max(self.f_dst.shift())
            .max(self.left.shift())
            .max(self.right.shift());
        if self.square_homotopy.shift < floor {
            return Err(Error::bad_input(format!(
                "the square homotopy's declared shift {} must dominate the square's shifts {floor}",
                self.square_homotopy.shift
            )));
        }
        Ok(())
    }

    pub fn shift_sum(&self) -> f64 {
        self.f_src.shift()
            + self.f_dst.shift()
            + self.left.shift()
            + self.right.shift()
            + self.left_inverse.shift()
            + self.right_inverse.shift()
            + self.square_homotopy.shift
            + self.left_round_src.shift
            + self.left_round_dst.shift
            + self.right_round_src.shift
            + self.right_round_dst.shift
    }
}

/// Minimal measured shifts of the five constructed maps, against the sum of
/// the declared input shifts.
#[derive(Debug, Clone, Copy)]
pub struct MeasuredShifts {
    pub forward: f64,
    pub backward: f64,
    pub homotopy_src: f64,
    pub homotopy_dst: f64,
    pub square_homotopy: f64,
    pub input_sum: f64,
}

impl MeasuredShifts {
    pub fn max_measured(&self) -> f64 {
        self.forward
            .max(self.backward)
            .max(self.homotopy_src)
            .max(self.homotopy_dst)
            .max(self.square_homotopy)
    }

    /// Largest measured shift per unit of declared input shift; zero inputs
    /// with zero outputs count as ratio zero.
    pub fn max_ratio(&self) -> f64 {
        let m = self.max_measured();
        if m == 0.0 {
            0.0
        } else if self.input_sum == 0.0 {
            f64::INFINITY
        } else {
            m / self.input_sum
        }
    }
}

/// The comparison of the two cones: explicit maps both ways, homotopies
/// witnessing that the round trips are the identities, and the homotopy for
/// the reversed square.
#[derive(Debug, Clone)]
pub struct ConeEquivalence {
    pub cone_src: FilteredComplex,
    pub cone_dst: FilteredComplex,
    pub forward: FilteredMap,
    pub backward: FilteredMap,
    /// Reversed-square homotopy: right_inverse∘f_dst + f_src∘left_inverse ≃ 0.
    pub square_homotopy: FilteredLinearMap,
    /// backward∘forward ≃ id on cone_src.
    pub homotopy_src: FilteredLinearMap,
    /// forward∘backward ≃ id on cone_dst.
    pub homotopy_dst: FilteredLinearMap,
    pub shifts: MeasuredShifts,
}

/// Build a cone-to-cone map from component blocks (a, cross, b).
fn cone_block_map(
    src: &ConeLayout,
    dst: &ConeLayout,
    a_block: &FilteredLinearMap,
    cross_block: &FilteredLinearMap,
    b_block: &FilteredLinearMap,
) -> FilteredLinearMap {
    let mut cols = Vec::with_capacity(src.complex.len());
    for i in 0..src.complex.len() {
        let mut col = F2Vec::zero();
        if i < src.a_count {
            for t in a_block.column(i).iter_ones() {
                col.flip(t);
            }
            for t in cross_block.column(i).iter_ones() {
                col.flip(dst.a_count + t);
            }
        } else {
            for t in b_block.column(i - src.a_count).iter_ones() {
                col.flip(dst.a_count + t);
            }
        }
        cols.push(col);
    }
    FilteredLinearMap::from_columns(src.complex.clone(), dst.complex.clone(), 0.0, cols)
}

/// Extract the A→B cross block of a cone self-map.
fn cross_block_of(
    defect: &FilteredLinearMap,
    layout: &ConeLayout,
    a_complex: &FilteredComplex,
    b_complex: &FilteredComplex,
) -> FilteredLinearMap {
    let cols = (0..a_complex.len())
        .map(|i| {
            defect
                .column(i)
                .iter_ones()
                .filter(|&t| t >= layout.a_count)
                .map(|t| t - layout.a_count)
                .collect()
        })
        .collect();
    FilteredLinearMap::from_columns(a_complex.clone(), b_complex.clone(), 0.0, cols)
}

fn defect_is_cross_only(defect: &FilteredLinearMap, layout: &ConeLayout) -> bool {
    for i in 0..defect.source.len() {
        let col = defect.column(i);
        if i >= layout.a_count && !col.is_zero() {
            return false;
        }
        if i < layout.a_count && col.iter_ones().any(|t| t < layout.a_count) {
            return false;
        }
    }
    true
}

/// Solve d∘h + h∘d = rhs for h: source → target over F2, preferring the
/// smallest admissible shift: candidate supports grow one filtration
/// difference at a time until the linear system becomes consistent.
pub(crate) fn solve_homotopy(
    source: &FilteredComplex,
    target: &FilteredComplex,
    rhs: &FilteredLinearMap,
) -> Option<FilteredLinearMap> {
    let ns = source.len();
    let nt = target.len();
    if rhs.is_zero() {
        return Some(FilteredLinearMap::zero(source.clone(), target.clone(), 0.0));
    }
    let flat = |e: usize, w: usize| e * nt + w;

    let mut diffs: Vec<f64> = Vec::new();
    for e in 0..ns {
        for w in 0..nt {
            diffs.push((target.filtration(w) - source.filtration(e)).max(0.0));
        }
    }
    diffs.sort_by(f64::total_cmp);
    diffs.dedup();

    let rhs_flat: F2Vec = (0..ns)
        .flat_map(|e| rhs.column(e).iter_ones().map(move |w| flat(e, w)).collect::<Vec<_>>())
        .collect();

    for &cap in &diffs {
        let mut unknowns = Vec::new(); // (e, w)
        for e in 0..ns {
            for w in 0..nt {
                if target.filtration(w) - source.filtration(e) <= cap {
                    unknowns.push((e, w));
                }
            }
        }
        let cols: Vec<F2Vec> = unknowns
            .iter()
            .map(|&(e0, w0)| {
                let mut col = F2Vec::zero();
                // d(h(e0)) contribution
                for w in target.boundary(w0).iter_ones() {
                    col.flip(flat(e0, w));
                }
                // h(d(e)) contribution wherever e0 ∈ d(e)
                for e in 0..ns {
                    if source.boundary(e).get(e0) {
                        col.flip(flat(e, w0));
                    }
                }
                col
            })
            .collect();
        if let Some(combo) = f2::solve(&cols, &rhs_flat) {
            let mut h_cols = vec![F2Vec::zero(); ns];
            for j in combo.iter_ones() {
                let (e, w) = unknowns[j];
                h_cols[e].flip(w);
            }
            let h = FilteredLinearMap::from_columns(source.clone(), target.clone(), cap, h_cols);
            debug_assert_eq!(h.d_commutator().columns(), rhs.columns());
            return Some(h);
        }
    }
    None
}

/// Compare the cones of the two rows of a homotopy-commutative square.
///
/// The forward map is (a, b) ↦ (left a, right b + h' a); the backward map
/// uses the reversed-square homotopy assembled from the round-trip data. The
/// round-trip homotopies start from explicit block formulas; when the input
/// homotopy data does not satisfy the side conditions that make those exact,
/// the remaining cross defect is closed by a shift-minimizing linear solve.
pub fn cone_equivalence(input: &ConeEquivalenceInput) -> Result<ConeEquivalence, Error> {
    input.validate()?;

    let src_layout = build_cone(&ConeInput::new(input.f_src.clone(), input.f_src.shift())?);
    let dst_layout = build_cone(&ConeInput::new(input.f_dst.clone(), input.f_dst.shift())?);

    let forward = cone_block_map(
        &src_layout,
        &dst_layout,
        &input.left.linear,
        &input.square_homotopy,
        &input.right.linear,
    );
    assert!(forward.is_chain_map(), "forward cone map is a chain map by construction");

    // reversed-square homotopy:
    // right_inv∘f_dst∘k'' + r'∘f_src∘left_inv + right_inv∘h'∘left_inv
    let h_back = input
        .right_inverse
        .linear
        .compose(&input.f_dst.linear)
        .compose(&input.left_round_dst)
        .add(
            &input
                .right_round_src
                .compose(&input.f_src.linear)
                .compose(&input.left_inverse.linear),
        )
        .add(
            &input
                .right_inverse
                .linear
                .compose(&input.square_homotopy)
                .compose(&input.left_inverse.linear),
        );
    {
        // it must witness right_inv∘f_dst + f_src∘left_inv ≃ 0
        let reversed = input
            .right_inverse
            .linear
            .compose(&input.f_dst.linear)
            .add(&input.f_src.linear.compose(&input.left_inverse.linear));
        assert_eq!(
            h_back.d_commutator().columns(),
            reversed.columns(),
            "reversed-square homotopy identity holds by construction"
        );
    }

    let backward = cone_block_map(
        &dst_layout,
        &src_layout,
        &input.left_inverse.linear,
        &h_back,
        &input.right_inverse.linear,
    );
    assert!(backward.is_chain_map());

    let a_src = input.f_src.source();
    let b_src = input.f_src.target();
    let a_dst = input.f_dst.source();
    let b_dst = input.f_dst.target();

    // homotopy on the source cone: blocks (k', cross, r') with the cross
    // seeded by the explicit formula and any residual closed by a solve
    let homotopy_src = {
        let composite = backward.compose(&forward);
        let target_map = composite.add(&FilteredLinearMap::identity(&src_layout.complex, 0.0));
        let seed_cross = input
            .right_round_src
            .compose(&input.f_src.linear)
            .compose(&input.left_round_src)
            .add(
                &input
                    .right_inverse
                    .linear
                    .compose(&input.square_homotopy)
                    .compose(&input.left_round_src),
            );
        close_cone_homotopy(
            &src_layout,
            a_src,
            b_src,
            &input.left_round_src,
            &input.right_round_src,
            seed_cross,
            &target_map,
            "backward∘forward ≃ id",
        )?
    };

    let homotopy_dst = {
        let composite = forward.compose(&backward);
        let target_map = composite.add(&FilteredLinearMap::identity(&dst_layout.complex, 0.0));
        let seed_cross = input.right_round_dst.compose(
            &input
                .f_dst
                .linear
                .compose(&input.left_round_dst)
                .add(&input.square_homotopy.compose(&input.left_inverse.linear)),
        );
        close_cone_homotopy(
            &dst_layout,
            a_dst,
            b_dst,
            &input.left_round_dst,
            &input.right_round_dst,
            seed_cross,
            &target_map,
            "forward∘backward ≃ id",
        )?
    };

    let shifts = MeasuredShifts {
        forward: forward.minimal_shift(),
        backward: backward.minimal_shift(),
        homotopy_src: homotopy_src.minimal_shift(),
        homotopy_dst: homotopy_dst.minimal_shift(),
        square_homotopy: h_back.minimal_shift(),
        input_sum: input.shift_sum(),
    };

    Ok(ConeEquivalence {
        cone_src: src_layout.complex,
        cone_dst: dst_layout.complex,
        forward: FilteredMap::new(forward),
        backward: FilteredMap::new(backward),
        square_homotopy: h_back,
        homotopy_src,
        homotopy_dst,
        shifts,
    })
}

/// Assemble a cone self-homotopy with prescribed diagonal blocks and some
/// cross block solving d H + H d = target_map.
#[allow(clippy::too_many_arguments)]
fn close_cone_homotopy(
    layout: &ConeLayout,
    a_complex: &FilteredComplex,
    b_complex: &FilteredComplex,
    a_block: &FilteredLinearMap,
    b_block: &FilteredLinearMap,
    seed_cross: FilteredLinearMap,
    target_map: &FilteredLinearMap,
    label: &str,
) -> Result<FilteredLinearMap, Error> {
    let seeded = cone_block_map(layout, layout, a_block, &seed_cross, b_block);
    let defect = seeded.d_commutator().add(target_map);
    if defect.is_zero() {
        return Ok(seeded);
    }
    if defect_is_cross_only(&defect, layout) {
        let cross_defect = cross_block_of(&defect, layout, a_complex, b_complex);
        if let Some(correction) = solve_homotopy(a_complex, b_complex, &cross_defect) {
            let fixed =
                cone_block_map(layout, layout, a_block, &seed_cross.add(&correction), b_block);
            debug_assert!(fixed.d_commutator().add(target_map).is_zero());
            return Ok(fixed);
        }
    }
    // incompatible round-trip homotopies can obstruct the block ansatz even
    // though a homotopy with different diagonal blocks exists; retry over
    // all four blocks at once
    solve_homotopy(&layout.complex, &layout.complex, target_map).ok_or_else(|| {
        Error::Construction(format!(
            "{label}: no filtered homotopy closes the defect for this input; the round-trip \
             homotopies are incompatible with the square data"
        ))
    })
}
