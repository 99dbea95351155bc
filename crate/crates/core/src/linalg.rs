//! Dense linear algebra over a prime field F_p.
//!
//! Scalars are `u16` values reduced eagerly modulo `p`; all products are
//! accumulated in `u32` and reduced once per entry.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("{0} does not fit in 16 bits")]
    ModulusTooLarge(u32),
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("dimension mismatch: {left:?} vs {right:?}")]
    DimensionMismatch { left: (usize, usize), right: (usize, usize) },
    #[error("operands use different moduli ({0} and {1})")]
    ModulusMismatch(u32, u32),
    #[error("matrix is not square ({0}x{1})")]
    NotSquare(usize, usize),
    #[error("matrix is singular")]
    Singular,
}

/// Trial-division primality test; moduli here are tiny.
pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// A verified prime modulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Prime(u16);

impl Prime {
    pub fn new(p: u32) -> Result<Self, LinalgError> {
        if p > u16::MAX as u32 {
            return Err(LinalgError::ModulusTooLarge(p));
        }
        if !is_prime(p) {
            return Err(LinalgError::NotPrime(p));
        }
        Ok(Prime(p as u16))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0 as u32
    }

    #[inline]
    pub fn reduce(self, x: i64) -> u16 {
        x.rem_euclid(self.0 as i64) as u16
    }

    #[inline]
    pub fn add(self, a: u16, b: u16) -> u16 {
        ((a as u32 + b as u32) % self.get()) as u16
    }

    #[inline]
    pub fn sub(self, a: u16, b: u16) -> u16 {
        ((a as u32 + self.get() - b as u32) % self.get()) as u16
    }

    #[inline]
    pub fn mul(self, a: u16, b: u16) -> u16 {
        ((a as u32 * b as u32) % self.get()) as u16
    }

    #[inline]
    pub fn neg(self, a: u16) -> u16 {
        if a == 0 {
            0
        } else {
            (self.get() - a as u32) as u16
        }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm.
    pub fn inv(self, a: u16) -> Result<u16, LinalgError> {
        let a = a as i64 % self.0 as i64;
        if a == 0 {
            return Err(LinalgError::ZeroInverse);
        }
        let (mut r0, mut r1) = (self.0 as i64, a);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        Ok(self.reduce(t0))
    }

    pub fn scalar(self, value: i64) -> FpScalar {
        FpScalar { value: self.reduce(value), p: self }
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An element of F_p carrying its modulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FpScalar {
    value: u16,
    p: Prime,
}

impl FpScalar {
    pub fn value(self) -> u16 {
        self.value
    }

    pub fn prime(self) -> Prime {
        self.p
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn inv(self) -> Result<FpScalar, LinalgError> {
        Ok(FpScalar { value: self.p.inv(self.value)?, p: self.p })
    }
}

impl Add for FpScalar {
    type Output = FpScalar;
    fn add(self, rhs: FpScalar) -> FpScalar {
        debug_assert_eq!(self.p, rhs.p);
        FpScalar { value: self.p.add(self.value, rhs.value), p: self.p }
    }
}

impl Sub for FpScalar {
    type Output = FpScalar;
    fn sub(self, rhs: FpScalar) -> FpScalar {
        debug_assert_eq!(self.p, rhs.p);
        FpScalar { value: self.p.sub(self.value, rhs.value), p: self.p }
    }
}

impl Mul for FpScalar {
    type Output = FpScalar;
    fn mul(self, rhs: FpScalar) -> FpScalar {
        debug_assert_eq!(self.p, rhs.p);
        FpScalar { value: self.p.mul(self.value, rhs.value), p: self.p }
    }
}

impl Neg for FpScalar {
    type Output = FpScalar;
    fn neg(self) -> FpScalar {
        FpScalar { value: self.p.neg(self.value), p: self.p }
    }
}

impl fmt::Display for FpScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FpVector {
    p: Prime,
    coords: Vec<u16>,
}

impl FpVector {
    pub fn zero(p: Prime, n: usize) -> Self {
        FpVector { p, coords: vec![0; n] }
    }

    pub fn unit(p: Prime, n: usize, j: usize) -> Self {
        let mut v = Self::zero(p, n);
        v.coords[j] = 1;
        v
    }

    /// Builds a vector from arbitrary integers, reducing each mod p.
    pub fn from_ints(p: Prime, values: &[i64]) -> Self {
        FpVector { p, coords: values.iter().map(|&x| p.reduce(x)).collect() }
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coords(&self) -> &[u16] {
        &self.coords
    }

    pub fn get(&self, j: usize) -> u16 {
        self.coords[j]
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &FpVector) -> FpVector {
        let p = self.p;
        FpVector { p, coords: self.coords.iter().zip(&other.coords).map(|(&a, &b)| p.add(a, b)).collect() }
    }

    pub fn sub(&self, other: &FpVector) -> FpVector {
        let p = self.p;
        FpVector { p, coords: self.coords.iter().zip(&other.coords).map(|(&a, &b)| p.sub(a, b)).collect() }
    }

    pub fn scale(&self, alpha: u16) -> FpVector {
        let p = self.p;
        FpVector { p, coords: self.coords.iter().map(|&a| p.mul(a, alpha)).collect() }
    }

    pub fn neg(&self) -> FpVector {
        let p = self.p;
        FpVector { p, coords: self.coords.iter().map(|&a| p.neg(a)).collect() }
    }
}

/// Row-major dense matrix over F_p.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpMatrix {
    p: Prime,
    rows: usize,
    cols: usize,
    data: Vec<u16>,
}

impl fmt::Debug for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FpMatrix(p={}, ", self.p)?;
        f.debug_list().entries(self.data.chunks(self.cols.max(1))).finish()?;
        write!(f, ")")
    }
}

/// Serialized form: `{p, rows, cols, data}` with row-major entries.
#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    p: u32,
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl Serialize for FpMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        MatrixRepr {
            p: self.p.get(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| x as i64).collect(),
        }
        .serialize(s)
    }
}

impl FpMatrix {
    pub fn zero(p: Prime, rows: usize, cols: usize) -> Self {
        FpMatrix { p, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(p: Prime, n: usize) -> Self {
        let mut m = Self::zero(p, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Scalar matrix `alpha * Id`.
    pub fn scalar(p: Prime, n: usize, alpha: i64) -> Self {
        let mut m = Self::zero(p, n, n);
        let a = p.reduce(alpha);
        for i in 0..n {
            m.data[i * n + i] = a;
        }
        m
    }

    /// Builds a matrix from row slices of arbitrary integers (reduced mod p).
    pub fn from_rows<R: AsRef<[i64]>>(p: Prime, rows: &[R]) -> Result<Self, LinalgError> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(LinalgError::DimensionMismatch { left: (rows.len(), cols), right: (1, r.len()) });
            }
            data.extend(r.iter().map(|&x| p.reduce(x)));
        }
        Ok(FpMatrix { p, rows: rows.len(), cols, data })
    }

    /// Builds a matrix from a flat row-major list of integers.
    pub fn from_flat(p: Prime, rows: usize, cols: usize, values: &[i64]) -> Result<Self, LinalgError> {
        if values.len() != rows * cols {
            return Err(LinalgError::DimensionMismatch { left: (rows, cols), right: (1, values.len()) });
        }
        Ok(FpMatrix { p, rows, cols, data: values.iter().map(|&x| p.reduce(x)).collect() })
    }

    /// Matrix whose rows are the given vectors.
    pub fn from_vectors(p: Prime, cols: usize, vectors: &[FpVector]) -> Self {
        let mut data = Vec::with_capacity(vectors.len() * cols);
        for v in vectors {
            debug_assert_eq!(v.len(), cols);
            data.extend_from_slice(v.coords());
        }
        FpMatrix { p, rows: vectors.len(), cols, data }
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u16 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: i64) {
        self.data[r * self.cols + c] = self.p.reduce(value);
    }

    pub fn data(&self) -> &[u16] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[u16] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vector(&self, r: usize) -> FpVector {
        FpVector { p: self.p, coords: self.row(r).to_vec() }
    }

    pub fn column(&self, c: usize) -> FpVector {
        FpVector { p: self.p, coords: (0..self.rows).map(|r| self.get(r, c)).collect() }
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && (0..self.rows).all(|r| (0..self.cols).all(|c| self.get(r, c) == (r == c) as u16))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    /// Sub-block of `h` rows and `w` columns starting at `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, h: usize, w: usize) -> FpMatrix {
        let mut out = FpMatrix::zero(self.p, h, w);
        for r in 0..h {
            out.data[r * w..(r + 1) * w].copy_from_slice(&self.row(r0 + r)[c0..c0 + w]);
        }
        out
    }

    pub fn transpose(&self) -> FpMatrix {
        let mut out = FpMatrix::zero(self.p, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.data[c * self.rows + r] = self.get(r, c);
            }
        }
        out
    }

    fn check_compatible(&self, other: &FpMatrix) -> Result<(), LinalgError> {
        if self.p != other.p {
            return Err(LinalgError::ModulusMismatch(self.p.get(), other.p.get()));
        }
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch {
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        Ok(())
    }

    pub fn matmul(&self, other: &FpMatrix) -> Result<FpMatrix, LinalgError> {
        self.check_compatible(other)?;
        let p = self.p.get();
        let mut out = FpMatrix::zero(self.p, self.rows, other.cols);
        for r in 0..self.rows {
            let lhs = self.row(r);
            for c in 0..other.cols {
                let mut acc = 0u32;
                for (k, &a) in lhs.iter().enumerate() {
                    acc += a as u32 * other.data[k * other.cols + c] as u32;
                    if acc >= 1 << 30 {
                        acc %= p;
                    }
                }
                out.data[r * other.cols + c] = (acc % p) as u16;
            }
        }
        Ok(out)
    }

    /// Product of a chain of matrices, left to right.
    pub fn product<'a, I>(p: Prime, n: usize, factors: I) -> Result<FpMatrix, LinalgError>
    where
        I: IntoIterator<Item = &'a FpMatrix>,
    {
        factors.into_iter().try_fold(FpMatrix::identity(p, n), |acc, m| acc.matmul(m))
    }

    pub fn add(&self, other: &FpMatrix) -> Result<FpMatrix, LinalgError> {
        if self.p != other.p {
            return Err(LinalgError::ModulusMismatch(self.p.get(), other.p.get()));
        }
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(LinalgError::DimensionMismatch {
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        let p = self.p;
        Ok(FpMatrix {
            p,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| p.add(a, b)).collect(),
        })
    }

    pub fn mul_vec(&self, v: &FpVector) -> Result<FpVector, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::DimensionMismatch { left: (self.rows, self.cols), right: (v.len(), 1) });
        }
        let mut out = vec![0u16; self.rows];
        self.mul_slice(v.coords(), &mut out);
        Ok(FpVector { p: self.p, coords: out })
    }

    /// `out = self * v` on raw coordinate slices.
    #[inline]
    pub fn mul_slice(&self, v: &[u16], out: &mut [u16]) {
        let p = self.p.get();
        for (r, o) in out.iter_mut().enumerate().take(self.rows) {
            let row = &self.data[r * self.cols..(r + 1) * self.cols];
            let acc: u32 = row.iter().zip(v).map(|(&a, &b)| a as u32 * b as u32).sum();
            *o = (acc % p) as u16;
        }
    }

    pub fn pow(&self, mut e: u64) -> Result<FpMatrix, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare(self.rows, self.cols));
        }
        let mut base = self.clone();
        let mut acc = FpMatrix::identity(self.p, self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.matmul(&base)?;
            }
            base = base.matmul(&base)?;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Reduced row-echelon form together with the pivot columns.
    pub fn rref_with_pivots(&self) -> (FpMatrix, Vec<usize>) {
        let p = self.p;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut lead = 0usize;
        for c in 0..m.cols {
            if lead == m.rows {
                break;
            }
            let Some(r) = (lead..m.rows).find(|&r| m.get(r, c) != 0) else {
                continue;
            };
            if r != lead {
                for j in 0..m.cols {
                    m.data.swap(r * m.cols + j, lead * m.cols + j);
                }
            }
            let inv = p.inv(m.get(lead, c)).expect("pivot is nonzero");
            for j in 0..m.cols {
                let x = m.get(lead, j);
                m.data[lead * m.cols + j] = p.mul(x, inv);
            }
            for r2 in 0..m.rows {
                if r2 == lead {
                    continue;
                }
                let f = m.get(r2, c);
                if f == 0 {
                    continue;
                }
                for j in 0..m.cols {
                    let x = m.get(r2, j);
                    let y = m.get(lead, j);
                    m.data[r2 * m.cols + j] = p.sub(x, p.mul(f, y));
                }
            }
            pivots.push(c);
            lead += 1;
        }
        (m, pivots)
    }

    pub fn rref(&self) -> FpMatrix {
        self.rref_with_pivots().0
    }

    pub fn rank(&self) -> usize {
        self.rref_with_pivots().1.len()
    }

    /// Inverse by Gauss-Jordan elimination on `[A | Id]`.
    pub fn inverse(&self) -> Result<FpMatrix, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare(self.rows, self.cols));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(self.clone());
        }
        let mut aug = FpMatrix::zero(self.p, n, 2 * n);
        for r in 0..n {
            aug.data[r * 2 * n..r * 2 * n + n].copy_from_slice(self.row(r));
            aug.data[r * 2 * n + n + r] = 1;
        }
        let (red, pivots) = aug.rref_with_pivots();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(LinalgError::Singular);
        }
        Ok(red.block(0, n, n, n))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }
}
