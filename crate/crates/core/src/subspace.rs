//! Subspaces of F_p^n stored in canonical reduced row-echelon form.

use std::fmt;

use serde::Serialize;

use crate::linalg::{FpMatrix, FpVector, Prime};

/// An F_p-subspace of F_p^n. Two subspaces are equal iff their canonical
/// bases are equal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    p: Prime,
    n: usize,
    /// Nonzero RREF rows.
    basis: Vec<Vec<u16>>,
    pivots: Vec<usize>,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim={}, basis={:?})", self.dim(), self.basis)
    }
}

#[derive(Serialize)]
struct SubspaceRepr<'a> {
    dim: usize,
    basis: &'a [Vec<u16>],
}

impl Serialize for Subspace {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SubspaceRepr { dim: self.dim(), basis: &self.basis }.serialize(s)
    }
}

impl Subspace {
    pub fn zero(p: Prime, n: usize) -> Self {
        Subspace { p, n, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(p: Prime, n: usize) -> Self {
        let basis = (0..n).map(|j| (0..n).map(|c| (c == j) as u16).collect()).collect();
        Subspace { p, n, basis, pivots: (0..n).collect() }
    }

    /// Span of coordinate rows.
    pub fn span_rows<I, R>(p: Prime, n: usize, rows: I) -> Self
    where
        I: IntoIterator<Item = R>,
        R: AsRef<[u16]>,
    {
        let mut s = Subspace::zero(p, n);
        for r in rows {
            s.insert(r.as_ref());
        }
        s
    }

    pub fn span(p: Prime, n: usize, vectors: &[FpVector]) -> Self {
        Self::span_rows(p, n, vectors.iter().map(|v| v.coords()))
    }

    /// Canonicalizes an arbitrary matrix's row space.
    pub fn row_space(m: &FpMatrix) -> Self {
        let (r, pivots) = m.rref_with_pivots();
        let basis = (0..pivots.len()).map(|i| r.row(i).to_vec()).collect();
        Subspace { p: m.prime(), n: m.cols(), basis, pivots }
    }

    /// Builds from rows already in canonical form; used by the enumerator.
    pub(crate) fn from_canonical(p: Prime, n: usize, basis: Vec<Vec<u16>>, pivots: Vec<usize>) -> Self {
        Subspace { p, n, basis, pivots }
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.n
    }

    pub fn basis(&self) -> &[Vec<u16>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn basis_vectors(&self) -> Vec<FpVector> {
        self.basis
            .iter()
            .map(|r| FpVector::from_ints(self.p, &r.iter().map(|&x| x as i64).collect::<Vec<_>>()))
            .collect()
    }

    pub fn basis_matrix(&self) -> FpMatrix {
        FpMatrix::from_vectors(self.p, self.n, &self.basis_vectors())
    }

    /// `v` minus its projection along the pivot rows; zero iff `v` is in the span.
    fn residue(&self, v: &[u16]) -> Vec<u16> {
        let p = self.p;
        let mut r = v.to_vec();
        for (row, &pc) in self.basis.iter().zip(&self.pivots) {
            let f = r[pc];
            if f != 0 {
                for (x, &b) in r.iter_mut().zip(row) {
                    *x = p.sub(*x, p.mul(f, b));
                }
            }
        }
        r
    }

    pub fn contains(&self, v: &[u16]) -> bool {
        debug_assert_eq!(v.len(), self.n);
        if self.is_full() {
            return true;
        }
        self.residue(v).iter().all(|&x| x == 0)
    }

    /// Adds `v` to the span; returns whether the dimension grew.
    pub fn insert(&mut self, v: &[u16]) -> bool {
        if self.is_full() {
            return false;
        }
        let mut r = self.residue(v);
        let Some(pc) = r.iter().position(|&x| x != 0) else {
            return false;
        };
        let p = self.p;
        let inv = p.inv(r[pc]).expect("nonzero pivot");
        for x in r.iter_mut() {
            *x = p.mul(*x, inv);
        }
        for row in self.basis.iter_mut() {
            let f = row[pc];
            if f != 0 {
                for (x, &b) in row.iter_mut().zip(&r) {
                    *x = p.sub(*x, p.mul(f, b));
                }
            }
        }
        let pos = self.pivots.partition_point(|&q| q < pc);
        self.pivots.insert(pos, pc);
        self.basis.insert(pos, r);
        true
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.basis.iter().all(|r| other.contains(r))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut s = self.clone();
        for r in &other.basis {
            s.insert(r);
        }
        s
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        // the space is tiny, so filter elements
        Subspace::span_rows(self.p, self.n, self.elements().filter(|v| other.contains(v)))
    }

    /// Every vector of the subspace, `p^dim` in total.
    pub fn elements(&self) -> impl Iterator<Item = Vec<u16>> + '_ {
        let p = self.p.get() as u64;
        let total = p.pow(self.dim() as u32);
        (0..total).map(move |mut idx| {
            let mut v = vec![0u16; self.n];
            for row in &self.basis {
                let c = (idx % p) as u16;
                idx /= p;
                if c != 0 {
                    for (x, &b) in v.iter_mut().zip(row) {
                        *x = self.p.add(*x, self.p.mul(c, b));
                    }
                }
            }
            v
        })
    }

    pub fn cardinality(&self) -> u64 {
        (self.p.get() as u64).pow(self.dim() as u32)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p5() -> Prime {
        Prime::new(5).unwrap()
    }

    #[test]
    fn insert_keeps_canonical_form() {
        let a = Subspace::span_rows(p5(), 4, [[2u16, 0, 0, 0], [0, 0, 0, 3]]);
        let b = Subspace::span_rows(p5(), 4, [[0u16, 0, 0, 1], [1, 0, 0, 4]]);
        assert_eq!(a, b);
        assert_eq!(a.basis(), &[vec![1, 0, 0, 0], vec![0, 0, 0, 1]]);
        let m = FpMatrix::from_rows(p5(), &[[2, 0, 0, 0], [0, 0, 0, 3], [2, 0, 0, 3]]).unwrap();
        assert_eq!(Subspace::row_space(&m), a);
    }

    #[test]
    fn membership_and_elements() {
        let s = Subspace::span_rows(p5(), 4, [[0u16, 1, 2, 0]]);
        assert!(s.contains(&[0, 2, 4, 0]));
        assert!(!s.contains(&[0, 2, 3, 0]));
        assert_eq!(s.elements().count(), 5);
        assert!(s.elements().all(|v| s.contains(&v)));
        assert!(Subspace::zero(p5(), 4).contains(&[0, 0, 0, 0]));
    }

    #[test]
    fn lattice_operations() {
        let x = Subspace::span_rows(p5(), 3, [[1u16, 0, 0], [0, 1, 0]]);
        let y = Subspace::span_rows(p5(), 3, [[0u16, 1, 0], [0, 0, 1]]);
        assert!(x.sum(&y).is_full());
        assert_eq!(x.intersection(&y), Subspace::span_rows(p5(), 3, [[0u16, 1, 0]]));
        assert!(Subspace::zero(p5(), 3).is_subspace_of(&x));
        assert!(!x.is_subspace_of(&y));
    }
}
