//! A four-dimensional pre-Lie algebra over F_p that is left nilpotent but
//! not right nilpotent.
//!
//! Basis order is `(P, Q, R, S)`. The nonzero basis products are
//! `RR = jP + kS`, `QQ = −yS`, `RP = yS`, `SQ = −P`, `PR = yS`, `SR = −Q`.

use serde::Serialize;
use thiserror::Error;

use crate::linalg::{FpVector, Prime};
use crate::report::{Check, Report};
use crate::subspace::Subspace;

pub const BASIS: [&str; 4] = ["P", "Q", "R", "S"];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PreLieError {
    #[error("y must be nonzero mod p")]
    ZeroY,
    #[error("structure table must be {n}×{n} vectors of length {n}")]
    BadShape { n: usize },
}

/// A bilinear product on F_p^n given by basis products.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreLieAlgebra {
    p: Prime,
    /// `table[a][b]` is the product of basis vectors `a` and `b`.
    table: Vec<Vec<FpVector>>,
}

fn product_vector(p: Prime, coords: [i64; 4]) -> FpVector {
    FpVector::from_ints(p, &coords)
}

impl PreLieAlgebra {
    pub fn new(p: Prime, j: i64, k: i64, y: i64) -> Result<Self, PreLieError> {
        if p.reduce(y) == 0 {
            return Err(PreLieError::ZeroY);
        }
        let zero = FpVector::zero(p, 4);
        let mut table = vec![vec![zero; 4]; 4];
        let [pp, q, r, s] = [0, 1, 2, 3];
        table[r][r] = product_vector(p, [j, 0, 0, k]);
        table[q][q] = product_vector(p, [0, 0, 0, -y]);
        table[r][pp] = product_vector(p, [0, 0, 0, y]);
        table[s][q] = product_vector(p, [-1, 0, 0, 0]);
        table[pp][r] = product_vector(p, [0, 0, 0, y]);
        table[s][r] = product_vector(p, [0, -1, 0, 0]);
        Ok(PreLieAlgebra { p, table })
    }

    pub fn zero(p: Prime, n: usize) -> Self {
        PreLieAlgebra { p, table: vec![vec![FpVector::zero(p, n); n]; n] }
    }

    pub fn from_table(p: Prime, table: Vec<Vec<FpVector>>) -> Result<Self, PreLieError> {
        let n = table.len();
        if table.iter().any(|row| row.len() != n || row.iter().any(|v| v.len() != n || v.prime() != p)) {
            return Err(PreLieError::BadShape { n });
        }
        Ok(PreLieAlgebra { p, table })
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.table.len()
    }

    pub fn basis(&self, j: usize) -> FpVector {
        FpVector::unit(self.p, self.dim(), j)
    }

    /// Basis vector by label, for the four-dimensional algebra.
    pub fn named(&self, label: &str) -> Option<FpVector> {
        BASIS.iter().position(|&b| b == label).filter(|&j| j < self.dim()).map(|j| self.basis(j))
    }

    pub fn product(&self, a: &FpVector, b: &FpVector) -> FpVector {
        let mut out = FpVector::zero(self.p, self.dim());
        for (i, &ai) in a.coords().iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.coords().iter().enumerate() {
                if bj == 0 {
                    continue;
                }
                let coeff = self.p.mul(ai, bj);
                out = out.add(&self.table[i][j].scale(coeff));
            }
        }
        out
    }
}

pub fn plproduct(v: &PreLieAlgebra, a: &FpVector, b: &FpVector) -> FpVector {
    v.product(a, b)
}

/// `(AB)C − A(BC) = (BA)C − B(AC)` on every ordered basis triple; bilinearity
/// extends it to all triples.
pub fn verify_prelie_identity(v: &PreLieAlgebra) -> Report {
    let n = v.dim();
    let mut witness = None;
    'outer: for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let (ea, eb, ec) = (v.basis(a), v.basis(b), v.basis(c));
                let lhs = v.product(&v.product(&ea, &eb), &ec).sub(&v.product(&ea, &v.product(&eb, &ec)));
                let rhs = v.product(&v.product(&eb, &ea), &ec).sub(&v.product(&eb, &v.product(&ea, &ec)));
                if lhs != rhs {
                    witness = Some(vec![a as u64, b as u64, c as u64]);
                    break 'outer;
                }
            }
        }
    }
    let mut r = Report::new(vec![Check::from_witness("prelie_identity", witness)]);
    r.examined = (n * n * n) as u64;
    r
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PreLieNilpotency {
    pub left: bool,
    pub right: bool,
    pub left_dims: Vec<usize>,
    pub right_dims: Vec<usize>,
}

fn span_products(v: &PreLieAlgebra, left: &Subspace, right: &Subspace) -> Subspace {
    let mut out = Subspace::zero(v.p, v.dim());
    for a in left.basis_vectors() {
        for b in right.basis_vectors() {
            out.insert(v.product(&a, &b).coords());
        }
    }
    out
}

fn chain(v: &PreLieAlgebra, step: impl Fn(&Subspace) -> Subspace) -> Vec<Subspace> {
    let mut terms = vec![Subspace::full(v.p, v.dim())];
    loop {
        let last = terms.last().expect("nonempty");
        if last.is_zero() {
            return terms;
        }
        let next = step(last);
        let stop = next == *last;
        terms.push(next);
        if stop {
            return terms;
        }
    }
}

/// Left chain `V^{i+1} = V·V^i` and right chain `V^{(i+1)} = V^{(i)}·V`,
/// each spanned from bases since the product is bilinear.
pub fn prelie_chains(v: &PreLieAlgebra) -> (Vec<Subspace>, Vec<Subspace>) {
    let full = Subspace::full(v.p, v.dim());
    let left = chain(v, |t| span_products(v, &full, t));
    let right = chain(v, |t| span_products(v, t, &full));
    (left, right)
}

pub fn prelie_nilpotency(v: &PreLieAlgebra) -> PreLieNilpotency {
    let (left, right) = prelie_chains(v);
    let dims = |c: &[Subspace]| c.iter().map(Subspace::dim).collect::<Vec<_>>();
    PreLieNilpotency {
        left: left.last().is_some_and(Subspace::is_zero),
        right: right.last().is_some_and(Subspace::is_zero),
        left_dims: dims(&left),
        right_dims: dims(&right),
    }
}
