//! Dense bit-vector linear algebra over the two-element field.
//!
//! Everything downstream (boundary operators, chain maps, rank oracles)
//! stores supports as [`F2Vec`] bitsets and reduces them by XOR. The
//! elimination helpers here use the *lowest* set bit as pivot; the
//! persistence reduction in [`crate::persistence`] keeps its own
//! highest-bit pivot loop so the two never share an algorithm.

const BITS: usize = u64::BITS as usize;

/// A vector over F2, stored as 64-bit blocks with trailing zero blocks trimmed.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct F2Vec {
    blocks: Vec<u64>,
}

impl F2Vec {
    pub fn zero() -> Self {
        F2Vec { blocks: Vec::new() }
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        let mut v = F2Vec::zero();
        for i in indices {
            v.flip(i);
        }
        v
    }

    pub fn unit(i: usize) -> Self {
        let mut v = F2Vec::zero();
        v.set(i, true);
        v
    }

    pub fn get(&self, i: usize) -> bool {
        let (b, o) = (i / BITS, i % BITS);
        b < self.blocks.len() && (self.blocks[b] >> o) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        let (b, o) = (i / BITS, i % BITS);
        if value {
            if b >= self.blocks.len() {
                self.blocks.resize(b + 1, 0);
            }
            self.blocks[b] |= 1 << o;
        } else if b < self.blocks.len() {
            self.blocks[b] &= !(1 << o);
            self.trim();
        }
    }

    pub fn flip(&mut self, i: usize) {
        let (b, o) = (i / BITS, i % BITS);
        if b >= self.blocks.len() {
            self.blocks.resize(b + 1, 0);
        }
        self.blocks[b] ^= 1 << o;
        self.trim();
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn xor_assign(&mut self, other: &F2Vec) {
        if other.blocks.len() > self.blocks.len() {
            self.blocks.resize(other.blocks.len(), 0);
        }
        for (b, o) in self.blocks.iter_mut().zip(other.blocks.iter()) {
            *b ^= *o;
        }
        self.trim();
    }

    pub fn xored(&self, other: &F2Vec) -> F2Vec {
        let mut v = self.clone();
        v.xor_assign(other);
        v
    }

    /// Largest set index, if any.
    pub fn top_bit(&self) -> Option<usize> {
        let b = self.blocks.len().checked_sub(1)?;
        Some(b * BITS + (BITS - 1 - self.blocks[b].leading_zeros() as usize))
    }

    /// Smallest set index, if any.
    pub fn bottom_bit(&self) -> Option<usize> {
        self.blocks
            .iter()
            .position(|&b| b != 0)
            .map(|i| i * BITS + self.blocks[i].trailing_zeros() as usize)
    }

    pub fn count_ones(&self) -> usize {
        self.blocks.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.blocks.iter().enumerate().flat_map(|(bi, &block)| {
            (0..BITS).filter(move |o| (block >> o) & 1 == 1).map(move |o| bi * BITS + o)
        })
    }

    /// Restriction to indices `< n` (used to cut a vector down to a filtration level).
    pub fn restricted_below(&self, n: usize) -> F2Vec {
        F2Vec::from_indices(self.iter_ones().filter(|&i| i < n))
    }

    fn trim(&mut self) {
        while self.blocks.last() == Some(&0) {
            self.blocks.pop();
        }
    }
}

impl std::fmt::Debug for F2Vec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.iter_ones()).finish()
    }
}

impl FromIterator<usize> for F2Vec {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        F2Vec::from_indices(iter)
    }
}

/// Incremental echelon basis, pivoting on the lowest set bit.
///
/// `insert` reduces the candidate against the stored rows and keeps it when
/// independent; `reduce` alone answers membership questions.
#[derive(Clone, Default)]
pub struct Echelon {
    rows: Vec<F2Vec>, // each with a distinct bottom_bit, kept sorted by pivot
}

impl Echelon {
    pub fn new() -> Self {
        Echelon::default()
    }

    pub fn from_spanning<'a, I: IntoIterator<Item = &'a F2Vec>>(vectors: I) -> Self {
        let mut e = Echelon::new();
        for v in vectors {
            e.insert(v.clone());
        }
        e
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Reduce `v` against the basis; the result is zero iff `v` is in the span.
    pub fn reduce(&self, mut v: F2Vec) -> F2Vec {
        for row in &self.rows {
            let p = row.bottom_bit().expect("echelon rows are nonzero");
            if v.get(p) {
                v.xor_assign(row);
            }
        }
        v
    }

    pub fn contains(&self, v: &F2Vec) -> bool {
        self.reduce(v.clone()).is_zero()
    }

    /// Returns true when the vector enlarged the span.
    pub fn insert(&mut self, v: F2Vec) -> bool {
        let r = self.reduce(v);
        match r.bottom_bit() {
            None => false,
            Some(p) => {
                let at = self.rows.partition_point(|row| row.bottom_bit().unwrap() < p);
                self.rows.insert(at, r);
                true
            }
        }
    }

    pub fn rows(&self) -> &[F2Vec] {
        &self.rows
    }
}

/// Rank of the subspace spanned by `vectors`.
pub fn rank<'a, I: IntoIterator<Item = &'a F2Vec>>(vectors: I) -> usize {
    Echelon::from_spanning(vectors).dim()
}

/// Basis of the kernel of the linear map whose j-th column is `cols[j]`,
/// as coefficient vectors over the column index.
pub fn kernel_basis(cols: &[F2Vec]) -> Vec<F2Vec> {
    let mut pivots: Vec<(F2Vec, F2Vec)> = Vec::new(); // (reduced column, combination)
    let mut kernel = Vec::new();
    for (j, col) in cols.iter().enumerate() {
        let mut v = col.clone();
        let mut combo = F2Vec::unit(j);
        for (row, c) in &pivots {
            let p = row.bottom_bit().unwrap();
            if v.get(p) {
                v.xor_assign(row);
                combo.xor_assign(c);
            }
        }
        if v.is_zero() {
            kernel.push(combo);
        } else {
            pivots.push((v, combo));
        }
    }
    kernel
}

/// Coefficients `x` with `sum x_j cols[j] = target`, if the system is consistent.
pub fn solve(cols: &[F2Vec], target: &F2Vec) -> Option<F2Vec> {
    let mut pivots: Vec<(F2Vec, F2Vec)> = Vec::new();
    for (j, col) in cols.iter().enumerate() {
        let mut v = col.clone();
        let mut combo = F2Vec::unit(j);
        for (row, c) in &pivots {
            let p = row.bottom_bit().unwrap();
            if v.get(p) {
                v.xor_assign(row);
                combo.xor_assign(c);
            }
        }
        if !v.is_zero() {
            pivots.push((v, combo));
        }
    }
    let mut t = target.clone();
    let mut combo = F2Vec::zero();
    for (row, c) in &pivots {
        let p = row.bottom_bit().unwrap();
        if t.get(p) {
            t.xor_assign(row);
            combo.xor_assign(c);
        }
    }
    t.is_zero().then_some(combo)
}

/// Basis of the intersection of the spans of `a` and `b`.
pub fn intersection_basis(a: &[F2Vec], b: &[F2Vec]) -> Vec<F2Vec> {
    let mut cols: Vec<F2Vec> = a.to_vec();
    cols.extend_from_slice(b);
    let mut out = Echelon::new();
    let mut basis = Vec::new();
    for combo in kernel_basis(&cols) {
        // A-part of a kernel combination lands in span(a) ∩ span(b).
        let mut v = F2Vec::zero();
        for j in combo.iter_ones().filter(|&j| j < a.len()) {
            v.xor_assign(&a[j]);
        }
        if out.insert(v.clone()) {
            basis.push(v);
        }
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bit_round_trip() {
        let mut v = F2Vec::zero();
        v.set(3, true);
        v.set(70, true);
        assert!(v.get(3) && v.get(70) && !v.get(4));
        assert_eq!(v.top_bit(), Some(70));
        assert_eq!(v.bottom_bit(), Some(3));
        v.set(70, false);
        assert_eq!(v.top_bit(), Some(3));
        assert_eq!(v.count_ones(), 1);
    }

    #[test]
    fn xor_cancels() {
        let a = F2Vec::from_indices([0, 2, 5]);
        let b = F2Vec::from_indices([2, 5, 9]);
        let c = a.xored(&b);
        assert_eq!(c, F2Vec::from_indices([0, 9]));
        assert!(a.xored(&a).is_zero());
    }

    #[test]
    fn rank_and_kernel() {
        // columns: e0, e0+e1, e1 -> rank 2, kernel spanned by (1,1,1)
        let cols = vec![
            F2Vec::from_indices([0]),
            F2Vec::from_indices([0, 1]),
            F2Vec::from_indices([1]),
        ];
        assert_eq!(rank(&cols), 2);
        let k = kernel_basis(&cols);
        assert_eq!(k.len(), 1);
        assert_eq!(k[0], F2Vec::from_indices([0, 1, 2]));
    }

    #[test]
    fn solve_consistent_and_not() {
        let cols = vec![F2Vec::from_indices([0, 1]), F2Vec::from_indices([1])];
        let x = solve(&cols, &F2Vec::from_indices([0])).unwrap();
        let mut check = F2Vec::zero();
        for j in x.iter_ones() {
            check.xor_assign(&cols[j]);
        }
        assert_eq!(check, F2Vec::from_indices([0]));
        assert!(solve(&cols, &F2Vec::from_indices([2])).is_none());
    }

    #[test]
    fn intersection_of_planes() {
        // span{e0, e1} ∩ span{e1, e2} = span{e1}
        let a = vec![F2Vec::unit(0), F2Vec::unit(1)];
        let b = vec![F2Vec::unit(1), F2Vec::unit(2)];
        let i = intersection_basis(&a, &b);
        assert_eq!(i.len(), 1);
        assert_eq!(i[0], F2Vec::unit(1));
    }
}
