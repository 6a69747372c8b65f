//! Filtered linear maps and filtered chain maps between complexes.
//!
//! A map is `s`-filtered when every matrix entry raises filtration by at
//! most `s`; the minimal such `s ≥ 0` is the map's admissible shift. Chain
//! maps additionally commute with the differentials. Homotopies and other
//! non-chain maps use [`FilteredLinearMap`] directly.

use thiserror::Error;

use crate::complex::FilteredComplex;
use crate::f2::F2Vec;

/// An F2-linear map between filtered complexes with a declared shift.
/// No chain-map requirement; this is the type for homotopies.
#[derive(Clone, PartialEq)]
pub struct FilteredLinearMap {
    pub source: FilteredComplex,
    pub target: FilteredComplex,
    pub shift: f64,
    /// Image support per source generator, indices into `target`.
    cols: Vec<F2Vec>,
}

/// A filtered chain map: same data as [`FilteredLinearMap`] plus the
/// chain-map axiom, which [`validate`](FilteredMap::validate) checks.
#[derive(Clone, PartialEq)]
pub struct FilteredMap {
    pub linear: FilteredLinearMap,
}

#[derive(Debug, Clone, PartialEq)]
pub enum MapViolation {
    /// f(d(gen)) ≠ d(f(gen)).
    NotChain { gen: String },
    /// An entry raises filtration by more than the declared shift.
    ShiftExceeded { gen: String, target: String, required: f64, declared: f64 },
}

impl std::fmt::Display for MapViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MapViolation::NotChain { gen } => write!(f, "chain identity fails at {gen}"),
            MapViolation::ShiftExceeded { gen, target, required, declared } => write!(
                f,
                "entry {gen} -> {target} needs shift {required} > declared {declared}"
            ),
        }
    }
}

/// Validation outcome for a map: violations plus the minimal admissible shift.
#[derive(Debug, Clone, PartialEq)]
pub struct MapReport {
    pub violations: Vec<MapViolation>,
    pub minimal_shift: f64,
}

impl MapReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MapBuildError {
    #[error("matrix row references unknown source generator {0:?}")]
    UnknownSource(String),
    #[error("matrix entry for {gen:?} references unknown target generator {unknown:?}")]
    UnknownTarget { gen: String, unknown: String },
}

impl FilteredLinearMap {
    pub fn zero(source: FilteredComplex, target: FilteredComplex, shift: f64) -> Self {
        let cols = vec![F2Vec::zero(); source.len()];
        FilteredLinearMap { source, target, shift, cols }
    }

    pub fn identity(complex: &FilteredComplex, shift: f64) -> Self {
        let cols = (0..complex.len()).map(F2Vec::unit).collect();
        FilteredLinearMap { source: complex.clone(), target: complex.clone(), shift, cols }
    }

    /// Build from id-level matrix entries.
    pub fn from_entries(
        source: FilteredComplex,
        target: FilteredComplex,
        shift: f64,
        matrix: &[(String, Vec<String>)],
    ) -> Result<Self, MapBuildError> {
        let mut cols = vec![F2Vec::zero(); source.len()];
        for (gen, support) in matrix {
            let g = source
                .position(gen)
                .ok_or_else(|| MapBuildError::UnknownSource(gen.clone()))?;
            for t in support {
                let ti = target.position(t).ok_or_else(|| MapBuildError::UnknownTarget {
                    gen: gen.clone(),
                    unknown: t.clone(),
                })?;
                cols[g].flip(ti);
            }
        }
        Ok(FilteredLinearMap { source, target, shift, cols })
    }

    /// Build from index-level columns (one per source generator, bits
    /// indexing the target's generators).
    pub fn from_columns(
        source: FilteredComplex,
        target: FilteredComplex,
        shift: f64,
        cols: Vec<F2Vec>,
    ) -> Self {
        debug_assert_eq!(cols.len(), source.len());
        FilteredLinearMap { source, target, shift, cols }
    }

    pub fn column(&self, i: usize) -> &F2Vec {
        &self.cols[i]
    }

    pub fn columns(&self) -> &[F2Vec] {
        &self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(F2Vec::is_zero)
    }

    pub fn apply(&self, chain: &F2Vec) -> F2Vec {
        let mut out = F2Vec::zero();
        for i in chain.iter_ones() {
            out.xor_assign(&self.cols[i]);
        }
        out
    }

    /// Minimal s ≥ 0 such that the map is s-filtered (0 for the zero map).
    pub fn minimal_shift(&self) -> f64 {
        let mut s = 0.0f64;
        for (g, col) in self.cols.iter().enumerate() {
            for t in col.iter_ones() {
                s = s.max(self.target.filtration(t) - self.source.filtration(g));
            }
        }
        s
    }

    pub fn is_filtered_at(&self, shift: f64) -> bool {
        self.minimal_shift() <= shift
    }

    /// Pointwise sum over F2; the declared shift is the max of the two.
    pub fn add(&self, other: &FilteredLinearMap) -> FilteredLinearMap {
        debug_assert!(self.source.same_shape(&other.source));
        debug_assert!(self.target.same_shape(&other.target));
        let cols =
            self.cols.iter().zip(&other.cols).map(|(a, b)| a.xored(b)).collect();
        FilteredLinearMap {
            source: self.source.clone(),
            target: self.target.clone(),
            shift: self.shift.max(other.shift),
            cols,
        }
    }

    /// `self ∘ inner`; declared shift is the sum of the declared shifts.
    pub fn compose(&self, inner: &FilteredLinearMap) -> FilteredLinearMap {
        debug_assert!(inner.target.same_shape(&self.source));
        let cols = inner.cols.iter().map(|c| self.apply(c)).collect();
        FilteredLinearMap {
            source: inner.source.clone(),
            target: self.target.clone(),
            shift: self.shift + inner.shift,
            cols,
        }
    }

    /// The commutator-with-d of this map: `d∘m + m∘d`. Always a chain map,
    /// and null-homotopic by construction (this map itself is the homotopy).
    pub fn d_commutator(&self) -> FilteredLinearMap {
        let mut cols = Vec::with_capacity(self.source.len());
        for g in 0..self.source.len() {
            let mut v = self.target.apply_boundary(&self.cols[g]);
            v.xor_assign(&self.apply(self.source.boundary(g)));
            cols.push(v);
        }
        FilteredLinearMap {
            source: self.source.clone(),
            target: self.target.clone(),
            shift: self.shift,
            cols,
        }
    }

    /// Does the map commute with the differentials?
    pub fn is_chain_map(&self) -> bool {
        self.d_commutator().is_zero()
    }

    /// Generators where the chain identity fails.
    pub fn chain_failures(&self) -> Vec<String> {
        let comm = self.d_commutator();
        (0..self.source.len())
            .filter(|&g| !comm.cols[g].is_zero())
            .map(|g| self.source.id(g).to_string())
            .collect()
    }
}

impl std::fmt::Debug for FilteredLinearMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(
            f,
            "map {} -> {} (shift {})",
            self.source.name(),
            self.target.name(),
            self.shift
        )?;
        for (g, col) in self.cols.iter().enumerate() {
            if !col.is_zero() {
                let support: Vec<&str> = col.iter_ones().map(|t| self.target.id(t)).collect();
                writeln!(f, "  {} -> {:?}", self.source.id(g), support)?;
            }
        }
        Ok(())
    }
}

impl FilteredMap {
    pub fn new(linear: FilteredLinearMap) -> FilteredMap {
        FilteredMap { linear }
    }

    pub fn zero(source: FilteredComplex, target: FilteredComplex, shift: f64) -> FilteredMap {
        FilteredMap { linear: FilteredLinearMap::zero(source, target, shift) }
    }

    pub fn identity(complex: &FilteredComplex, shift: f64) -> FilteredMap {
        FilteredMap { linear: FilteredLinearMap::identity(complex, shift) }
    }

    pub fn source(&self) -> &FilteredComplex {
        &self.linear.source
    }

    pub fn target(&self) -> &FilteredComplex {
        &self.linear.target
    }

    pub fn shift(&self) -> f64 {
        self.linear.shift
    }

    /// Chain and shift axioms for the declared shift, plus the minimal shift.
    pub fn validate(&self) -> MapReport {
        let mut violations = Vec::new();
        for gen in self.linear.chain_failures() {
            violations.push(MapViolation::NotChain { gen });
        }
        let mut minimal = 0.0f64;
        for (g, col) in self.linear.cols.iter().enumerate() {
            for t in col.iter_ones() {
                let required =
                    self.linear.target.filtration(t) - self.linear.source.filtration(g);
                minimal = minimal.max(required);
                if required > self.linear.shift {
                    violations.push(MapViolation::ShiftExceeded {
                        gen: self.linear.source.id(g).to_string(),
                        target: self.linear.target.id(t).to_string(),
                        required,
                        declared: self.linear.shift,
                    });
                }
            }
        }
        MapReport { violations, minimal_shift: minimal }
    }
}

impl std::ops::Deref for FilteredMap {
    type Target = FilteredLinearMap;

    fn deref(&self) -> &FilteredLinearMap {
        &self.linear
    }
}

impl std::fmt::Debug for FilteredMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.linear.fmt(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn downhill_map_is_zero_shifted() {
        let a = FilteredComplex::point("g", 1.0);
        let b = FilteredComplex::point("h", 0.0);
        let f = FilteredMap::new(
            FilteredLinearMap::from_entries(a, b, 0.0, &[("g".into(), vec!["h".into()])])
                .unwrap(),
        );
        let report = f.validate();
        assert!(report.ok());
        assert_eq!(report.minimal_shift, 0.0);
    }

    #[test]
    fn uphill_map_needs_shift_one() {
        let a = FilteredComplex::point("g", 0.0);
        let b = FilteredComplex::point("h", 1.0);
        let f = FilteredMap::new(
            FilteredLinearMap::from_entries(a, b, 0.0, &[("g".into(), vec!["h".into()])])
                .unwrap(),
        );
        let report = f.validate();
        assert!(!report.ok());
        assert_eq!(report.minimal_shift, 1.0);
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, MapViolation::ShiftExceeded { required, .. } if *required == 1.0)));
    }

    #[test]
    fn identity_validates_at_zero() {
        let c = FilteredComplex::interval(1.0, 4.0);
        let report = FilteredMap::identity(&c, 0.0).validate();
        assert!(report.ok());
        assert_eq!(report.minimal_shift, 0.0);
    }

    #[test]
    fn non_chain_map_is_reported() {
        let a = FilteredComplex::interval(0.0, 1.0);
        let b = FilteredComplex::point("h", 0.0);
        // send the cycle x to h but y to nothing: f(d y) = h, d(f y) = 0
        let f = FilteredMap::new(
            FilteredLinearMap::from_entries(a, b, 0.0, &[("x".into(), vec!["h".into()])])
                .unwrap(),
        );
        let report = f.validate();
        assert_eq!(report.violations, vec![MapViolation::NotChain { gen: "y".into() }]);
    }

    #[test]
    fn commutator_is_chain_and_null_homotopic() {
        let a = FilteredComplex::interval(0.0, 2.0);
        let b = FilteredComplex::interval(1.0, 3.0);
        let lambda = FilteredLinearMap::from_entries(
            a,
            b,
            1.0,
            &[("x".into(), vec!["x".into()]), ("y".into(), vec!["y".into()])],
        )
        .unwrap();
        let f = lambda.d_commutator();
        assert!(f.is_chain_map());
        assert!(f.minimal_shift() <= lambda.minimal_shift());
    }
}
