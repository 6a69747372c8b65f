//! Barcodes via boundary-matrix column reduction, and an independent
//! rank oracle for the persistence maps.
//!
//! [`barcode`] orders generators by (filtration, declared index) and runs the
//! standard left-to-right reduction, pairing each nonzero reduced column with
//! its highest surviving row. [`persistence_rank`] never looks at the
//! reduction: it computes rank(i^{β,α}) from explicit cycle and boundary
//! bases by Gaussian elimination, so the two sides can cross-validate each
//! other.

use crate::complex::FilteredComplex;
use crate::error::Error;
use crate::f2::{self, Echelon, F2Vec};

/// A half-open bar [birth, death), death = +inf for essential classes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bar {
    pub birth: f64,
    /// `f64::INFINITY` for bars that never die.
    pub death: f64,
}

impl Bar {
    pub fn is_infinite(&self) -> bool {
        self.death == f64::INFINITY
    }

    pub fn length(&self) -> f64 {
        self.death - self.birth
    }
}

/// Multiset of bars, kept sorted by (birth, death) so equality is multiset
/// equality.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Barcode {
    bars: Vec<Bar>,
}

impl Barcode {
    fn from_bars(mut bars: Vec<Bar>) -> Barcode {
        bars.sort_by(|a, b| a.birth.total_cmp(&b.birth).then(a.death.total_cmp(&b.death)));
        Barcode { bars }
    }

    pub fn bars(&self) -> &[Bar] {
        &self.bars
    }

    pub fn is_empty(&self) -> bool {
        self.bars.is_empty()
    }

    pub fn infinite_bars(&self) -> impl Iterator<Item = &Bar> {
        self.bars.iter().filter(|b| b.is_infinite())
    }

    pub fn finite_bars(&self) -> impl Iterator<Item = &Bar> {
        self.bars.iter().filter(|b| !b.is_infinite())
    }

    /// Multiset union.
    pub fn merged(&self, other: &Barcode) -> Barcode {
        let mut bars = self.bars.clone();
        bars.extend_from_slice(&other.bars);
        Barcode::from_bars(bars)
    }

    /// Bars alive on [alpha, beta]: born at or before alpha, dead after beta.
    pub fn alive_through(&self, alpha: f64, beta: f64) -> usize {
        self.bars.iter().filter(|b| b.birth <= alpha && b.death > beta).count()
    }
}

/// The persistence map query i^{β,α}: H(C^{≤α}) → H(C^{≤β}).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PersistenceQuery {
    pub alpha: f64,
    /// `f64::INFINITY` queries the map into the total homology.
    pub beta: f64,
}

impl PersistenceQuery {
    pub fn new(alpha: f64, beta: f64) -> PersistenceQuery {
        assert!(alpha <= beta, "persistence query needs alpha <= beta");
        PersistenceQuery { alpha, beta }
    }

    pub fn into_total(alpha: f64) -> PersistenceQuery {
        PersistenceQuery { alpha, beta: f64::INFINITY }
    }
}

fn ensure_valid(complex: &FilteredComplex) -> Result<(), Error> {
    let violations = complex.validate();
    if violations.is_empty() {
        Ok(())
    } else {
        Err(Error::InvalidComplex { name: complex.name().to_string(), violations })
    }
}

/// Barcode of the sublevel persistence module, by column reduction.
///
/// Zero-length pairs are discarded: they contribute to no sublevel homology
/// and none of the invariants sees them.
pub fn barcode(complex: &FilteredComplex) -> Result<Barcode, Error> {
    ensure_valid(complex)?;
    Ok(reduce_barcode(complex))
}

pub(crate) fn reduce_barcode(complex: &FilteredComplex) -> Barcode {
    let order = complex.sorted_order();
    let mut rank_of = vec![0usize; complex.len()]; // original index -> sorted position
    for (pos, &orig) in order.iter().enumerate() {
        rank_of[orig] = pos;
    }
    let n = complex.len();
    let mut columns: Vec<F2Vec> = order
        .iter()
        .map(|&orig| complex.boundary(orig).iter_ones().map(|t| rank_of[t]).collect())
        .collect();

    let mut pivot_owner: Vec<Option<usize>> = vec![None; n]; // row -> column with that low
    let mut bars = Vec::new();
    for j in 0..n {
        while let Some(owner) = columns[j].top_bit().and_then(|low| pivot_owner[low]) {
            let (a, b) = columns.split_at_mut(j);
            b[0].xor_assign(&a[owner]);
        }
        if let Some(low) = columns[j].top_bit() {
            pivot_owner[low] = Some(j);
            let birth = complex.filtration(order[low]);
            let death = complex.filtration(order[j]);
            if birth < death {
                bars.push(Bar { birth, death });
            }
        }
    }
    for j in 0..n {
        if columns[j].is_zero() && pivot_owner[j].is_none() {
            bars.push(Bar { birth: complex.filtration(order[j]), death: f64::INFINITY });
        }
    }
    Barcode::from_bars(bars)
}

/// Cycle space of the sublevel complex at `alpha`, as vectors in the ambient
/// index space.
fn cycle_basis_at(complex: &FilteredComplex, alpha: f64) -> Vec<F2Vec> {
    let level = complex.level_indices(alpha);
    let cols: Vec<F2Vec> = level.iter().map(|&i| complex.boundary(i).clone()).collect();
    f2::kernel_basis(&cols)
        .into_iter()
        .map(|combo| combo.iter_ones().map(|j| level[j]).collect())
        .collect()
}

/// Boundary space of the sublevel complex at `beta` (+inf for the whole
/// complex), as an echelon basis.
fn boundary_space_at(complex: &FilteredComplex, beta: f64) -> Echelon {
    let mut image = Echelon::new();
    for i in 0..complex.len() {
        if complex.filtration(i) <= beta {
            image.insert(complex.boundary(i).clone());
        }
    }
    image
}

/// rank(i^{β,α}) over F2, from first principles: dim Z_α − dim(Z_α ∩ B_β).
///
/// This is the oracle side of the barcode cross-check and deliberately shares
/// no code with [`barcode`].
pub fn persistence_rank(complex: &FilteredComplex, query: PersistenceQuery) -> Result<usize, Error> {
    ensure_valid(complex)?;
    Ok(rank_unchecked(complex, query))
}

pub(crate) fn rank_unchecked(complex: &FilteredComplex, query: PersistenceQuery) -> usize {
    let cycles = cycle_basis_at(complex, query.alpha);
    if cycles.is_empty() {
        return 0;
    }
    // rank = dim Z_α − dim(Z_α ∩ B_β) = number of cycle basis vectors that
    // stay independent after the boundary space is already in the span.
    let mut joint = boundary_space_at(complex, query.beta);
    cycles.into_iter().filter(|z| joint.insert(z.clone())).count()
}

/// Representing cycles for a basis of H(C).
pub fn homology_classes(complex: &FilteredComplex) -> Result<Vec<F2Vec>, Error> {
    ensure_valid(complex)?;
    let cycles = cycle_basis_at(complex, f64::INFINITY);
    let mut span = boundary_space_at(complex, f64::INFINITY);
    let mut classes = Vec::new();
    for z in cycles {
        if span.insert(z.clone()) {
            classes.push(z);
        }
    }
    Ok(classes)
}

/// dim H(C) over F2.
pub(crate) fn total_homology_dim(complex: &FilteredComplex) -> usize {
    let cycles = cycle_basis_at(complex, f64::INFINITY);
    let boundaries = boundary_space_at(complex, f64::INFINITY);
    cycles.len() - boundaries.dim()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bars_of(c: &FilteredComplex) -> Vec<(f64, f64)> {
        barcode(c).unwrap().bars().iter().map(|b| (b.birth, b.death)).collect()
    }

    #[test]
    fn empty_complex_has_empty_barcode() {
        let z = FilteredComplex::empty("Z");
        assert!(barcode(&z).unwrap().is_empty());
        assert_eq!(persistence_rank(&z, PersistenceQuery::new(0.0, 1.0)).unwrap(), 0);
        assert!(homology_classes(&z).unwrap().is_empty());
    }

    #[test]
    fn point_is_one_essential_bar() {
        let p = FilteredComplex::point("g", 2.0);
        assert_eq!(bars_of(&p), vec![(2.0, f64::INFINITY)]);
        assert_eq!(homology_classes(&p).unwrap().len(), 1);
    }

    #[test]
    fn interval_bar_and_ranks() {
        let i = FilteredComplex::interval(1.0, 4.0);
        assert_eq!(bars_of(&i), vec![(1.0, 4.0)]);
        assert_eq!(persistence_rank(&i, PersistenceQuery::new(2.0, 3.0)).unwrap(), 1);
        assert_eq!(persistence_rank(&i, PersistenceQuery::new(2.0, 5.0)).unwrap(), 0);
        assert!(homology_classes(&i).unwrap().is_empty());
    }

    #[test]
    fn direct_sum_takes_multiset_union() {
        let c = FilteredComplex::point("g", 0.0).direct_sum(&FilteredComplex::interval(1.0, 4.0));
        assert_eq!(bars_of(&c), vec![(0.0, f64::INFINITY), (1.0, 4.0)]);
        let twice = FilteredComplex::interval(0.0, 1.0)
            .direct_sum(&FilteredComplex::interval(0.0, 1.0));
        assert_eq!(bars_of(&twice), vec![(0.0, 1.0), (0.0, 1.0)]);
    }

    #[test]
    fn zero_length_pairs_are_discarded() {
        let c = FilteredComplex::interval(2.0, 2.0);
        assert!(barcode(&c).unwrap().is_empty());
    }

    #[test]
    fn invalid_complex_is_rejected() {
        let c = FilteredComplex::new(
            "bad",
            vec![("x".into(), 3.0), ("y".into(), 1.0)],
            &[("y".into(), vec!["x".into()])],
        )
        .unwrap();
        assert!(matches!(barcode(&c), Err(Error::InvalidComplex { .. })));
        assert!(persistence_rank(&c, PersistenceQuery::into_total(0.0)).is_err());
    }

    #[test]
    fn reduction_handles_ties_that_break_triangularity() {
        // All four generators at filtration 0 with a cyclic support relation;
        // d² = 0 still holds and H is zero.
        let c = FilteredComplex::new(
            "tie",
            vec![("a".into(), 0.0), ("b".into(), 0.0), ("c".into(), 0.0), ("e".into(), 0.0)],
            &[
                ("a".into(), vec!["b".into(), "c".into()]),
                ("b".into(), vec!["a".into(), "e".into()]),
                ("c".into(), vec!["a".into(), "e".into()]),
                ("e".into(), vec!["b".into(), "c".into()]),
            ],
        )
        .unwrap();
        assert!(c.is_valid());
        assert!(barcode(&c).unwrap().is_empty());
        assert_eq!(total_homology_dim(&c), 0);
    }

    #[test]
    fn infinite_bar_count_matches_homology_dimension() {
        let c = FilteredComplex::point("g", 0.0)
            .direct_sum(&FilteredComplex::point("h", 2.0))
            .direct_sum(&FilteredComplex::interval(0.0, 3.0));
        let bc = barcode(&c).unwrap();
        assert_eq!(bc.infinite_bars().count(), total_homology_dim(&c));
        let d = c.boundary_columns();
        let rank_d = f2::rank(d.iter());
        let dim_ker = c.len() - rank_d;
        assert_eq!(bc.infinite_bars().count(), dim_ker - rank_d);
    }

    #[test]
    fn duality_with_rank_oracle_on_a_fixture() {
        let c = FilteredComplex::point("g", 0.0).direct_sum(&FilteredComplex::interval(1.0, 4.0));
        let bc = barcode(&c).unwrap();
        let points = c.evaluation_points();
        for (ai, &alpha) in points.iter().enumerate() {
            for &beta in &points[ai..] {
                let rank = persistence_rank(&c, PersistenceQuery::new(alpha, beta)).unwrap();
                assert_eq!(rank, bc.alive_through(alpha, beta), "alpha={alpha} beta={beta}");
            }
        }
    }
}
