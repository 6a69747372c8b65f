//! Numerical invariants of filtered complexes and maps: spectral invariants
//! of classes, the spectral edges σ± and range ρ, boundary depth β of a
//! complex, and boundary depth β_s of a map.
//!
//! Two independent routes exist on purpose. [`profile`] reads everything off
//! the barcode; [`profile_oracle`] recomputes the same numbers from the
//! definitions using only rank computations on the persistence maps. The
//! verifier asserts their equality on every instance it touches.

use std::collections::HashMap;

use crate::complex::FilteredComplex;
use crate::error::Error;
use crate::ext::{ExtReal, INF, NEG_INF};
use crate::f2::{self, F2Vec};
use crate::map::FilteredMap;
use crate::persistence::{self, PersistenceQuery};

/// The (σ+, σ−, ρ, β) tuple of one complex. For an acyclic complex the
/// spectral data degenerates to σ+ = -inf, σ− = inf, ρ = -inf.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvariantProfile {
    pub sigma_plus: ExtReal,
    pub sigma_minus: ExtReal,
    pub rho: ExtReal,
    pub beta: f64,
}

impl InvariantProfile {
    pub fn is_degenerate(&self) -> bool {
        !self.sigma_plus.is_finite()
    }

    fn from_edges(sigma_plus: Option<f64>, sigma_minus: Option<f64>, beta: f64) -> Self {
        match (sigma_plus, sigma_minus) {
            (Some(p), Some(m)) => InvariantProfile {
                sigma_plus: ExtReal::finite(p),
                sigma_minus: ExtReal::finite(m),
                rho: ExtReal::finite(p - m),
                beta,
            },
            _ => InvariantProfile { sigma_plus: NEG_INF, sigma_minus: INF, rho: NEG_INF, beta },
        }
    }
}

/// σ̃± and ρ̃ of a collection of profiles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AggregateProfile {
    pub sigma_plus_tilde: ExtReal,
    pub sigma_minus_tilde: ExtReal,
    pub rho_tilde: ExtReal,
}

/// Componentwise max/min over a nonempty collection.
pub fn aggregate(profiles: &[InvariantProfile]) -> Result<AggregateProfile, Error> {
    if profiles.is_empty() {
        return Err(Error::bad_input("aggregate needs a nonempty profile list"));
    }
    let sigma_plus_tilde =
        profiles.iter().map(|p| p.sigma_plus).fold(NEG_INF, ExtReal::max);
    let sigma_minus_tilde = profiles.iter().map(|p| p.sigma_minus).fold(INF, ExtReal::min);
    let rho_tilde = sigma_plus_tilde.checked_sub(sigma_minus_tilde)?;
    Ok(AggregateProfile { sigma_plus_tilde, sigma_minus_tilde, rho_tilde })
}

fn ensure_valid(complex: &FilteredComplex) -> Result<(), Error> {
    let violations = complex.validate();
    if violations.is_empty() {
        Ok(())
    } else {
        Err(Error::InvalidComplex { name: complex.name().to_string(), violations })
    }
}

/// Profile via the barcode: β is the longest finite bar, σ+ / σ− the largest
/// and smallest births among infinite bars.
pub fn profile(complex: &FilteredComplex) -> Result<InvariantProfile, Error> {
    ensure_valid(complex)?;
    Ok(profile_unchecked(complex))
}

pub(crate) fn profile_unchecked(complex: &FilteredComplex) -> InvariantProfile {
    let barcode = persistence::reduce_barcode(complex);
    let beta = barcode.finite_bars().map(|b| b.length()).fold(0.0f64, f64::max);
    let sigma_plus = barcode.infinite_bars().map(|b| b.birth).fold(None, fold_max);
    let sigma_minus = barcode.infinite_bars().map(|b| b.birth).fold(None, fold_min);
    InvariantProfile::from_edges(sigma_plus, sigma_minus, beta)
}

fn fold_max(acc: Option<f64>, v: f64) -> Option<f64> {
    Some(acc.map_or(v, |a| a.max(v)))
}

fn fold_min(acc: Option<f64>, v: f64) -> Option<f64> {
    Some(acc.map_or(v, |a| a.min(v)))
}

/// Memoized rank(i^{β,α}) on the evaluation grid of one complex.
struct RankTable<'a> {
    complex: &'a FilteredComplex,
    points: Vec<f64>,
    dim_h: usize,
    cache: HashMap<(usize, Option<usize>), usize>,
}

impl<'a> RankTable<'a> {
    fn new(complex: &'a FilteredComplex) -> Self {
        RankTable {
            complex,
            points: complex.evaluation_points(),
            dim_h: persistence::total_homology_dim(complex),
            cache: HashMap::new(),
        }
    }

    /// rank of i^{points[bi], points[ai]}, or of i^{points[ai]} when bi is None.
    fn rank(&mut self, ai: usize, bi: Option<usize>) -> usize {
        if let Some(&r) = self.cache.get(&(ai, bi)) {
            return r;
        }
        let alpha = self.points[ai];
        let beta = bi.map_or(f64::INFINITY, |b| self.points[b]);
        let r = persistence::rank_unchecked(self.complex, PersistenceQuery::new(alpha, beta));
        self.cache.insert((ai, bi), r);
        r
    }

    /// Largest grid index whose point is ≤ value (the module is constant
    /// between grid points, so this is exact for rank queries).
    fn floor_index(&self, value: f64) -> Option<usize> {
        match self.points.partition_point(|&p| p <= value) {
            0 => None,
            n => Some(n - 1),
        }
    }
}

/// Profile from the definitions, by rank computations only — never touches
/// the barcode. σ+ scans for the lowest level at which i^t is onto from
/// there on, σ− for the highest level below which i^t vanishes, and β tries
/// every candidate window until kernels stabilize at all levels.
pub fn profile_oracle(complex: &FilteredComplex) -> Result<InvariantProfile, Error> {
    ensure_valid(complex)?;
    let mut table = RankTable::new(complex);
    let n = table.points.len();
    let dim_h = table.dim_h;

    let sigma_plus = if dim_h == 0 {
        None
    } else {
        let mut found = None;
        for i in 0..n {
            if (i..n).all(|j| table.rank(j, None) == dim_h) {
                found = Some(table.points[i]);
                break;
            }
        }
        Some(found.expect("i^t is onto at the top critical value"))
    };

    let sigma_minus = if dim_h == 0 {
        None
    } else {
        (0..n).find(|&i| table.rank(i, None) > 0).map(|i| table.points[i])
    };

    let beta = {
        let crit = complex.critical_values();
        let mut candidates = vec![0.0f64];
        for (i, &a) in crit.iter().enumerate() {
            for &b in &crit[i + 1..] {
                candidates.push(b - a);
            }
        }
        candidates.sort_by(f64::total_cmp);
        candidates.dedup();
        let mut chosen = 0.0;
        'candidate: for &b in &candidates {
            for ai in 0..n {
                let bi = table.floor_index(table.points[ai] + b);
                if table.rank(ai, bi) != table.rank(ai, None) {
                    continue 'candidate;
                }
            }
            chosen = b;
            break;
        }
        chosen
    };

    Ok(InvariantProfile::from_edges(sigma_plus, sigma_minus, beta))
}

/// Spectral invariant of a homology class given by a representing cycle:
/// the lowest level at which the class appears in the image from below.
/// Returns -inf exactly when the class vanishes in H(C).
pub fn spectral_invariant(complex: &FilteredComplex, cycle: &F2Vec) -> Result<ExtReal, Error> {
    ensure_valid(complex)?;
    if !complex.apply_boundary(cycle).is_zero() {
        return Err(Error::bad_input(format!(
            "spectral_invariant needs a cycle; d of the given chain is nonzero in {:?}",
            complex.name()
        )));
    }
    let boundaries: Vec<F2Vec> =
        (0..complex.len()).map(|i| complex.boundary(i).clone()).collect();
    if f2::solve(&boundaries, cycle).is_some() {
        return Ok(NEG_INF);
    }
    for alpha in complex.critical_values() {
        let level = complex.level_indices(alpha);
        let mut cols: Vec<F2Vec> = Vec::new();
        // cycles of the sublevel complex, in ambient coordinates
        let level_cols: Vec<F2Vec> =
            level.iter().map(|&i| complex.boundary(i).clone()).collect();
        for combo in f2::kernel_basis(&level_cols) {
            cols.push(combo.iter_ones().map(|j| level[j]).collect());
        }
        cols.extend(boundaries.iter().cloned());
        if f2::solve(&cols, cycle).is_some() {
            return Ok(ExtReal::finite(alpha));
        }
    }
    unreachable!("a nonzero class appears at the top critical value")
}

/// Boundary depth of a map viewed as s-filtered: the smallest window b such
/// that at every level, image classes that die at all die within b.
pub fn map_boundary_depth(map: &FilteredMap, s: f64) -> Result<f64, Error> {
    let chain_failures = map.chain_failures();
    if !chain_failures.is_empty() {
        return Err(Error::InvalidMap {
            violations: chain_failures
                .into_iter()
                .map(|gen| crate::map::MapViolation::NotChain { gen })
                .collect(),
        });
    }
    let minimal = map.minimal_shift();
    if s < minimal {
        return Err(Error::bad_input(format!(
            "shift {s} is below the minimal admissible shift {minimal} of the map"
        )));
    }
    ensure_valid(map.source())?;
    ensure_valid(map.target())?;

    let source = map.source();
    let target = map.target();
    let target_crit = target.critical_values();

    // Breakpoints of everything involved: source levels and target levels
    // pulled back by s.
    let mut alphas = source.critical_values();
    alphas.extend(target_crit.iter().map(|c| c - s));
    alphas.sort_by(f64::total_cmp);
    alphas.dedup();
    let mids: Vec<f64> = alphas.windows(2).map(|w| (w[0] + w[1]) / 2.0).collect();
    alphas.extend(mids);
    alphas.sort_by(f64::total_cmp);

    let total_boundaries: Vec<F2Vec> =
        (0..target.len()).map(|i| target.boundary(i).clone()).collect();
    let total_boundary_span = f2::Echelon::from_spanning(total_boundaries.iter());

    let mut beta = 0.0f64;
    for &alpha in &alphas {
        let level = alpha + s;

        // chain-level image of f on sublevel cycles, together with sublevel
        // boundaries of the target
        let source_level = source.level_indices(alpha);
        let source_cols: Vec<F2Vec> =
            source_level.iter().map(|&i| source.boundary(i).clone()).collect();
        let mut image: Vec<F2Vec> = f2::kernel_basis(&source_cols)
            .into_iter()
            .map(|combo| {
                let cycle: F2Vec = combo.iter_ones().map(|j| source_level[j]).collect();
                map.apply(&cycle)
            })
            .collect();
        let sublevel_boundaries = sublevel_boundary_vectors(target, level);
        image.extend(sublevel_boundaries.iter().cloned());

        // chain-level kernel of i^{level}: total boundaries that already live
        // at this level, plus sublevel boundaries
        let level_units: Vec<F2Vec> =
            target.level_indices(level).into_iter().map(F2Vec::unit).collect();
        let mut dying =
            f2::intersection_basis(total_boundary_span.rows(), &level_units);
        dying.extend(sublevel_boundaries.iter().cloned());

        let meet = f2::intersection_basis(&image, &dying);
        if meet.is_empty() {
            continue;
        }

        // smallest window at which everything in the meet is already a
        // boundary; the window-zero candidate is the level itself, the rest
        // are the critical values above it
        let mut needed = f64::INFINITY;
        for &c in std::iter::once(&level).chain(target_crit.iter().filter(|&&c| c > level)) {
            let span = f2::Echelon::from_spanning(sublevel_boundary_vectors(target, c).iter());
            if meet.iter().all(|v| span.contains(v)) {
                needed = (c - level).max(0.0);
                break;
            }
        }
        if needed == f64::INFINITY {
            // everything dead dies in the total complex
            debug_assert!(meet.iter().all(|v| total_boundary_span.contains(v)));
            let top = target_crit.last().copied().unwrap_or(level);
            needed = (top - level).max(0.0);
        }
        beta = beta.max(needed.max(0.0));
    }
    Ok(beta)
}

fn sublevel_boundary_vectors(complex: &FilteredComplex, level: f64) -> Vec<F2Vec> {
    complex
        .level_indices(level)
        .into_iter()
        .map(|i| complex.boundary(i).clone())
        .filter(|v| !v.is_zero())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::FilteredLinearMap;

    fn finite(p: &InvariantProfile) -> (f64, f64, f64, f64) {
        (p.sigma_plus.value(), p.sigma_minus.value(), p.rho.value(), p.beta)
    }

    #[test]
    fn point_profile() {
        let p = profile(&FilteredComplex::point("g", 2.0)).unwrap();
        assert_eq!(finite(&p), (2.0, 2.0, 0.0, 0.0));
        assert_eq!(profile_oracle(&FilteredComplex::point("g", 2.0)).unwrap(), p);
    }

    #[test]
    fn interval_profile_is_degenerate_with_beta() {
        let c = FilteredComplex::interval(1.0, 4.0);
        let p = profile(&c).unwrap();
        assert!(p.is_degenerate());
        assert_eq!(p.sigma_plus, NEG_INF);
        assert_eq!(p.sigma_minus, INF);
        assert_eq!(p.rho, NEG_INF);
        assert_eq!(p.beta, 3.0);
        assert_eq!(profile_oracle(&c).unwrap(), p);
    }

    #[test]
    fn two_points_have_spectral_range() {
        let c = FilteredComplex::point("g0", 0.0).direct_sum(&FilteredComplex::point("g2", 2.0));
        let p = profile(&c).unwrap();
        assert_eq!(finite(&p), (2.0, 0.0, 2.0, 0.0));
        assert_eq!(profile_oracle(&c).unwrap(), p);
    }

    #[test]
    fn empty_complex_oracle() {
        let p = profile_oracle(&FilteredComplex::empty("Z")).unwrap();
        assert_eq!(p.sigma_plus, NEG_INF);
        assert_eq!(p.sigma_minus, INF);
        assert_eq!(p.rho, NEG_INF);
        assert_eq!(p.beta, 0.0);
    }

    #[test]
    fn spectral_invariant_examples() {
        let i = FilteredComplex::interval(1.0, 4.0);
        assert_eq!(spectral_invariant(&i, &F2Vec::unit(0)).unwrap(), NEG_INF);

        let p = FilteredComplex::point("g", 2.0);
        assert_eq!(spectral_invariant(&p, &F2Vec::unit(0)).unwrap(), ExtReal::finite(2.0));

        let c = FilteredComplex::point("g0", 0.0).direct_sum(&FilteredComplex::point("g2", 2.0));
        let sum = F2Vec::from_indices([0, 1]);
        assert_eq!(spectral_invariant(&c, &sum).unwrap(), ExtReal::finite(2.0));
    }

    #[test]
    fn spectral_invariant_rejects_non_cycles() {
        let i = FilteredComplex::interval(1.0, 4.0);
        assert!(spectral_invariant(&i, &F2Vec::unit(1)).is_err());
    }

    #[test]
    fn map_depth_of_identity_is_complex_depth() {
        let c = FilteredComplex::interval(1.0, 4.0);
        let id = FilteredMap::identity(&c, 0.0);
        assert_eq!(map_boundary_depth(&id, 0.0).unwrap(), 3.0);
    }

    #[test]
    fn map_depth_of_zero_map_is_zero() {
        let a = FilteredComplex::point("g", 0.0);
        let b = FilteredComplex::interval(0.0, 2.0);
        let z = FilteredMap::zero(a, b, 0.0);
        assert_eq!(map_boundary_depth(&z, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn map_depth_shift_law_on_fixture() {
        // f: P(0) -> I(0,2), g ↦ x
        let a = FilteredComplex::point("g", 0.0);
        let b = FilteredComplex::interval(0.0, 2.0);
        let f = FilteredMap::new(
            FilteredLinearMap::from_entries(a, b, 0.0, &[("g".into(), vec!["x".into()])])
                .unwrap(),
        );
        assert_eq!(map_boundary_depth(&f, 0.0).unwrap(), 2.0);
        assert_eq!(map_boundary_depth(&f, 1.0).unwrap(), 1.0);
        assert_eq!(map_boundary_depth(&f, 3.0).unwrap(), 0.0);
    }

    #[test]
    fn map_depth_rejects_understated_shift() {
        let a = FilteredComplex::point("g", 0.0);
        let b = FilteredComplex::point("h", 1.0);
        let f = FilteredMap::new(
            FilteredLinearMap::from_entries(a, b, 1.0, &[("g".into(), vec!["h".into()])])
                .unwrap(),
        );
        assert!(map_boundary_depth(&f, 0.5).is_err());
    }

    #[test]
    fn class_invariants_sit_between_the_spectral_edges() {
        use crate::persistence::{barcode, homology_classes, persistence_rank, PersistenceQuery};
        for seed in 0..30u64 {
            let c = crate::random::random_complex(
                1 + (seed as usize % 9),
                &[0.0, 0.5, 1.0, 2.0, 3.0],
                0.5,
                seed,
            );
            let p = profile(&c).unwrap();
            let classes = homology_classes(&c).unwrap();
            let bc = barcode(&c).unwrap();
            assert_eq!(classes.len(), bc.infinite_bars().count());
            for z in &classes {
                let sigma = spectral_invariant(&c, z).unwrap();
                assert!(p.sigma_minus <= sigma, "class below sigma- at seed {seed}");
                assert!(sigma <= p.sigma_plus.max(sigma), "sanity");
            }
            // sigma+ is the first level from which i^α is onto, by ranks
            if !p.is_degenerate() {
                let dim_h = classes.len();
                let onto_from = c
                    .critical_values()
                    .into_iter()
                    .find(|&alpha| {
                        persistence_rank(&c, PersistenceQuery::into_total(alpha)).unwrap()
                            == dim_h
                    })
                    .expect("onto at the top critical value");
                assert_eq!(ExtReal::finite(onto_from), p.sigma_plus);
            }
        }
    }

    #[test]
    fn aggregate_examples() {
        let p0 = profile(&FilteredComplex::point("g", 0.0)).unwrap();
        let p2 = profile(&FilteredComplex::point("g", 2.0)).unwrap();
        let acyclic = profile(&FilteredComplex::interval(1.0, 4.0)).unwrap();

        let single = aggregate(&[p0]).unwrap();
        assert_eq!(single.rho_tilde, ExtReal::finite(0.0));

        let pair = aggregate(&[p0, p2]).unwrap();
        assert_eq!(pair.sigma_plus_tilde, ExtReal::finite(2.0));
        assert_eq!(pair.sigma_minus_tilde, ExtReal::finite(0.0));
        assert_eq!(pair.rho_tilde, ExtReal::finite(2.0));

        let with_acyclic = aggregate(&[acyclic, p0]).unwrap();
        assert_eq!(with_acyclic.sigma_plus_tilde, ExtReal::finite(0.0));
        assert_eq!(with_acyclic.sigma_minus_tilde, ExtReal::finite(0.0));
        assert_eq!(with_acyclic.rho_tilde, ExtReal::finite(0.0));

        assert!(aggregate(&[]).is_err());
    }
}
