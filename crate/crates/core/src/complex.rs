//! Filtered chain complexes over F2.
//!
//! A complex is a finite ordered list of named generators, each carrying a
//! real filtration value, together with the F2 support of the differential
//! on each generator. Validity means `d∘d = 0` and filtration monotonicity
//! (the boundary of a generator never lives above it), which is exactly what
//! makes every sublevel set a subcomplex.

use std::collections::HashMap;

use thiserror::Error;

use crate::f2::F2Vec;

/// Structural problems that make a description unusable as a complex at all.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BuildError {
    #[error("duplicate generator id {0:?}")]
    DuplicateId(String),
    #[error("empty generator id")]
    EmptyId,
    #[error("boundary of {gen:?} references unknown generator {unknown:?}")]
    UnknownId { gen: String, unknown: String },
    #[error("generator {0:?} has a non-finite filtration value")]
    BadFiltration(String),
}

/// Axiom violations reported by [`FilteredComplex::validate`]. These are data,
/// not failures: an invalid complex can be built, inspected and repaired.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    /// d∘d ≠ 0 starting from this generator.
    SquareNonzero { gen: String },
    /// filtration(bound) > filtration(gen) for bound ∈ d(gen).
    FiltrationBreak { gen: String, gen_filtration: f64, bound: String, bound_filtration: f64 },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::SquareNonzero { gen } => write!(f, "d∘d ≠ 0 at {gen}"),
            Violation::FiltrationBreak { gen, gen_filtration, bound, bound_filtration } => write!(
                f,
                "filtration({bound})={bound_filtration} > filtration({gen})={gen_filtration}"
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Generator {
    pub id: String,
    pub filtration: f64,
}

/// A finite filtered chain complex over F2.
#[derive(Clone, PartialEq)]
pub struct FilteredComplex {
    name: String,
    gens: Vec<Generator>,
    /// Boundary support per generator, as indices into `gens`.
    cols: Vec<F2Vec>,
    index: HashMap<String, usize>,
}

impl FilteredComplex {
    /// Build from (id, filtration) pairs and id-level boundary supports.
    /// Rejects structurally broken input; axiom violations are left to
    /// [`validate`](Self::validate).
    pub fn new<S: Into<String>>(
        name: S,
        generators: Vec<(String, f64)>,
        boundary: &[(String, Vec<String>)],
    ) -> Result<FilteredComplex, BuildError> {
        let mut index = HashMap::new();
        let mut gens = Vec::with_capacity(generators.len());
        for (id, filtration) in generators {
            if id.is_empty() {
                return Err(BuildError::EmptyId);
            }
            if !filtration.is_finite() {
                return Err(BuildError::BadFiltration(id));
            }
            if index.insert(id.clone(), gens.len()).is_some() {
                return Err(BuildError::DuplicateId(id));
            }
            gens.push(Generator { id, filtration });
        }
        let mut cols = vec![F2Vec::zero(); gens.len()];
        for (gen, support) in boundary {
            let &g = index
                .get(gen)
                .ok_or_else(|| BuildError::UnknownId { gen: gen.clone(), unknown: gen.clone() })?;
            for target in support {
                let &t = index.get(target).ok_or_else(|| BuildError::UnknownId {
                    gen: gen.clone(),
                    unknown: target.clone(),
                })?;
                cols[g].flip(t);
            }
        }
        Ok(FilteredComplex { name: name.into(), gens, cols, index })
    }

    /// Index-level constructor for internal builders that already hold valid data.
    pub(crate) fn from_parts(
        name: String,
        gens: Vec<Generator>,
        cols: Vec<F2Vec>,
    ) -> FilteredComplex {
        debug_assert_eq!(gens.len(), cols.len());
        let index = gens.iter().enumerate().map(|(i, g)| (g.id.clone(), i)).collect();
        FilteredComplex { name, gens, cols, index }
    }

    pub fn empty<S: Into<String>>(name: S) -> FilteredComplex {
        FilteredComplex::from_parts(name.into(), Vec::new(), Vec::new())
    }

    /// One generator at the given filtration, zero differential.
    pub fn point(id: &str, filtration: f64) -> FilteredComplex {
        FilteredComplex::from_parts(
            format!("P({})", crate::ext::render(filtration)),
            vec![Generator { id: id.to_string(), filtration }],
            vec![F2Vec::zero()],
        )
    }

    /// Two generators `x@birth`, `y@death` with `d(y) = {x}`; acyclic when
    /// `birth < death`, a zero-length pair when equal.
    pub fn interval(birth: f64, death: f64) -> FilteredComplex {
        assert!(birth <= death, "interval needs birth <= death");
        FilteredComplex::from_parts(
            format!("I({},{})", crate::ext::render(birth), crate::ext::render(death)),
            vec![
                Generator { id: "x".to_string(), filtration: birth },
                Generator { id: "y".to_string(), filtration: death },
            ],
            vec![F2Vec::zero(), F2Vec::unit(0)],
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name<S: Into<String>>(&mut self, name: S) {
        self.name = name.into();
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn id(&self, i: usize) -> &str {
        &self.gens[i].id
    }

    pub fn filtration(&self, i: usize) -> f64 {
        self.gens[i].filtration
    }

    pub fn position(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    /// Boundary support of generator `i`, as indices.
    pub fn boundary(&self, i: usize) -> &F2Vec {
        &self.cols[i]
    }

    pub fn boundary_columns(&self) -> &[F2Vec] {
        &self.cols
    }

    /// d applied to an arbitrary F2 chain.
    pub fn apply_boundary(&self, chain: &F2Vec) -> F2Vec {
        let mut out = F2Vec::zero();
        for i in chain.iter_ones() {
            out.xor_assign(&self.cols[i]);
        }
        out
    }

    /// Same generators and differential, ignoring names.
    pub fn same_shape(&self, other: &FilteredComplex) -> bool {
        self.gens == other.gens && self.cols == other.cols
    }

    /// All axiom violations, empty iff the complex is valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for (g, col) in self.cols.iter().enumerate() {
            for t in col.iter_ones() {
                if self.gens[t].filtration > self.gens[g].filtration {
                    out.push(Violation::FiltrationBreak {
                        gen: self.gens[g].id.clone(),
                        gen_filtration: self.gens[g].filtration,
                        bound: self.gens[t].id.clone(),
                        bound_filtration: self.gens[t].filtration,
                    });
                }
            }
            if !self.apply_boundary(col).is_zero() {
                out.push(Violation::SquareNonzero { gen: self.gens[g].id.clone() });
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// Sorted distinct filtration values.
    pub fn critical_values(&self) -> Vec<f64> {
        let mut vals: Vec<f64> = self.gens.iter().map(|g| g.filtration).collect();
        vals.sort_by(f64::total_cmp);
        vals.dedup();
        vals
    }

    /// Critical values plus a midpoint between each consecutive pair. All the
    /// persistence modules here are constant between critical values, so
    /// universally quantified claims are checked on this grid.
    pub fn evaluation_points(&self) -> Vec<f64> {
        let crit = self.critical_values();
        let mut out = Vec::with_capacity(crit.len() * 2);
        for (i, &c) in crit.iter().enumerate() {
            out.push(c);
            if let Some(&next) = crit.get(i + 1) {
                out.push((c + next) / 2.0);
            }
        }
        out
    }

    /// Generator positions ordered by (filtration, declared index).
    pub fn sorted_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.gens.len()).collect();
        order.sort_by(|&a, &b| {
            self.gens[a].filtration.total_cmp(&self.gens[b].filtration).then(a.cmp(&b))
        });
        order
    }

    /// Indices of generators in the sublevel complex at `alpha`.
    pub fn level_indices(&self, alpha: f64) -> Vec<usize> {
        (0..self.gens.len()).filter(|&i| self.gens[i].filtration <= alpha).collect()
    }

    /// The shifted complex: membership at level α of the output equals
    /// membership at level α + s of the input, so every filtration drops by s.
    pub fn shifted(&self, s: f64) -> FilteredComplex {
        let gens = self
            .gens
            .iter()
            .map(|g| Generator { id: g.id.clone(), filtration: g.filtration - s })
            .collect();
        FilteredComplex::from_parts(self.name.clone(), gens, self.cols.clone())
    }

    /// Disjoint union with block-diagonal differential. Clashing ids on the
    /// right acquire primes.
    pub fn direct_sum(&self, other: &FilteredComplex) -> FilteredComplex {
        let mut gens = self.gens.clone();
        let mut taken: std::collections::HashSet<String> =
            gens.iter().map(|g| g.id.clone()).collect();
        for g in &other.gens {
            let id = fresh_id(&mut taken, g.id.clone());
            gens.push(Generator { id, filtration: g.filtration });
        }
        let offset = self.len();
        let mut cols = self.cols.clone();
        for col in &other.cols {
            cols.push(col.iter_ones().map(|i| i + offset).collect());
        }
        FilteredComplex::from_parts(format!("{}+{}", self.name, other.name), gens, cols)
    }

    /// Reorder generators by `perm` (new position i holds old generator perm[i]).
    /// Used by the tie-break independence tests.
    pub fn permuted(&self, perm: &[usize]) -> FilteredComplex {
        assert_eq!(perm.len(), self.len());
        let mut inverse = vec![0usize; perm.len()];
        for (new, &old) in perm.iter().enumerate() {
            inverse[old] = new;
        }
        let gens = perm.iter().map(|&old| self.gens[old].clone()).collect();
        let cols = perm
            .iter()
            .map(|&old| self.cols[old].iter_ones().map(|t| inverse[t]).collect())
            .collect();
        FilteredComplex::from_parts(self.name.clone(), gens, cols)
    }
}

impl std::fmt::Debug for FilteredComplex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "complex {:?} ({} generators)", self.name, self.gens.len())?;
        for (i, g) in self.gens.iter().enumerate() {
            let support: Vec<&str> =
                self.cols[i].iter_ones().map(|t| self.gens[t].id.as_str()).collect();
            writeln!(f, "  {}@{} -> {:?}", g.id, g.filtration, support)?;
        }
        Ok(())
    }
}

/// Append primes until the id is unused, then claim it.
pub(crate) fn fresh_id(taken: &mut std::collections::HashSet<String>, mut id: String) -> String {
    while taken.contains(&id) {
        id.push('\'');
    }
    taken.insert(id.clone());
    id
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validate_accepts_monotone_interval() {
        let c = FilteredComplex::new(
            "c",
            vec![("x".into(), 1.0), ("y".into(), 3.0)],
            &[("y".into(), vec!["x".into()])],
        )
        .unwrap();
        assert!(c.validate().is_empty());
    }

    #[test]
    fn validate_reports_filtration_break() {
        let c = FilteredComplex::new(
            "c",
            vec![("x".into(), 3.0), ("y".into(), 1.0)],
            &[("y".into(), vec!["x".into()])],
        )
        .unwrap();
        let v = c.validate();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].to_string(), "filtration(x)=3 > filtration(y)=1");
    }

    #[test]
    fn validate_reports_square_nonzero() {
        let c = FilteredComplex::new(
            "c",
            vec![("x".into(), 0.0), ("y".into(), 0.0), ("z".into(), 0.0)],
            &[("z".into(), vec!["y".into()]), ("y".into(), vec!["x".into()])],
        )
        .unwrap();
        let v = c.validate();
        assert!(v.iter().any(|v| v.to_string() == "d∘d ≠ 0 at z"), "{v:?}");
    }

    #[test]
    fn unknown_boundary_id_is_a_build_error() {
        let err = FilteredComplex::new(
            "c",
            vec![("x".into(), 0.0)],
            &[("x".into(), vec!["nope".into()])],
        )
        .unwrap_err();
        assert!(matches!(err, BuildError::UnknownId { unknown, .. } if unknown == "nope"));
    }

    #[test]
    fn shift_round_trip_is_exact() {
        let c = FilteredComplex::interval(1.0, 4.0);
        let back = c.shifted(1.5).shifted(-1.5);
        assert!(c.same_shape(&back));
        assert_eq!(back.filtration(0), 1.0);
    }

    #[test]
    fn shift_moves_levels() {
        let p = FilteredComplex::point("g", 2.0);
        assert_eq!(p.shifted(0.0).filtration(0), 2.0);
        assert_eq!(p.shifted(2.0).filtration(0), 0.0);
        let i = FilteredComplex::interval(1.0, 4.0).shifted(1.0);
        assert_eq!((i.filtration(0), i.filtration(1)), (0.0, 3.0));
        let bc = crate::persistence::barcode(&i).unwrap();
        assert_eq!((bc.bars()[0].birth, bc.bars()[0].death), (0.0, 3.0));
    }

    #[test]
    fn direct_sum_is_block_diagonal_and_renames() {
        let a = FilteredComplex::interval(0.0, 1.0);
        let s = a.direct_sum(&a);
        assert_eq!(s.len(), 4);
        assert_eq!(s.id(2), "x'");
        assert_eq!(s.boundary(3), &F2Vec::unit(2));
        assert!(s.is_valid());
        let z = FilteredComplex::empty("Z");
        assert!(z.direct_sum(&FilteredComplex::point("g", 0.0)).same_shape(
            &FilteredComplex::point("g", 0.0)
        ));
    }

    #[test]
    fn sublevels_are_subcomplexes_iff_valid() {
        let c = FilteredComplex::interval(1.0, 4.0);
        for alpha in c.evaluation_points() {
            let level: std::collections::HashSet<usize> =
                c.level_indices(alpha).into_iter().collect();
            for &i in &level {
                assert!(c.boundary(i).iter_ones().all(|t| level.contains(&t)));
            }
        }
    }
}
