//! Finite F_p-braces represented by their λ-table.
//!
//! The additive group is F_p^n with coordinates in a fixed basis order. An
//! element is addressed by the base-p number formed by its coordinates, most
//! significant first, so `(c_R, c_Q, c_P, c_S)` has index
//! `c_R p^3 + c_Q p^2 + c_P p + c_S`.

mod io;
mod verify;

pub use io::{load_brace_file, parse_brace, validate_loaded, write_circle_csv, BraceFile, IoError};
pub use verify::{verify_brace_axioms, verify_fp_linearity, verify_lambda_homomorphism, CayleyTables, AXIOMS};

use thiserror::Error;

use crate::family::FamilyParams;
use crate::linalg::{FpMatrix, FpVector, LinalgError, Prime};

/// Largest additive dimension handled by the fixed-size coordinate buffers.
pub const MAX_DIM: usize = 8;
/// Largest cardinality accepted for an in-memory λ-table.
pub const MAX_ORDER: usize = 1 << 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BraceError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("dimension {0} is outside 1..={MAX_DIM}")]
    BadDimension(usize),
    #[error("p^n = {0} exceeds the supported size")]
    TooLarge(u64),
    #[error("expected {expected} λ-matrices, got {got}")]
    WrongTableSize { expected: usize, got: usize },
    #[error("λ-matrix {index} has the wrong shape or modulus")]
    BadMatrix { index: usize },
    #[error("λ-matrix {index} is not invertible")]
    NotInvertible { index: usize },
    #[error("λ of the identity element is not the identity matrix")]
    IdentityLambda,
    #[error("element index {0} out of range")]
    IndexOutOfRange(u64),
    #[error("expected {expected} basis names, got {got}")]
    BasisNames { expected: usize, got: usize },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
}

/// Index of a brace element (its base-p coordinate number).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default, serde::Serialize)]
#[serde(transparent)]
pub struct Element(u32);

impl Element {
    pub const ZERO: Element = Element(0);

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub(crate) fn from_index(i: usize) -> Element {
        Element(i as u32)
    }
}

impl From<Element> for u64 {
    fn from(e: Element) -> u64 {
        e.0 as u64
    }
}

/// Coordinate arithmetic on element indices for F_p^n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coords {
    p: Prime,
    n: usize,
    order: usize,
    /// `weights[j] = p^(n-1-j)`.
    weights: [u32; MAX_DIM],
}

pub type Digits = [u16; MAX_DIM];

impl Coords {
    pub fn new(p: Prime, n: usize) -> Result<Self, BraceError> {
        if n == 0 || n > MAX_DIM {
            return Err(BraceError::BadDimension(n));
        }
        let order = (p.get() as u64).checked_pow(n as u32).unwrap_or(u64::MAX);
        if order > MAX_ORDER as u64 {
            return Err(BraceError::TooLarge(order));
        }
        let mut weights = [0u32; MAX_DIM];
        let mut w = 1u32;
        for j in (0..n).rev() {
            weights[j] = w;
            w *= p.get();
        }
        Ok(Coords { p, n, order: order as usize, weights })
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn element(&self, index: u64) -> Result<Element, BraceError> {
        if index < self.order as u64 {
            Ok(Element(index as u32))
        } else {
            Err(BraceError::IndexOutOfRange(index))
        }
    }

    #[inline]
    pub fn digits(&self, e: Element) -> Digits {
        let p = self.p.get();
        let mut d = [0u16; MAX_DIM];
        let mut x = e.0;
        for j in (0..self.n).rev() {
            d[j] = (x % p) as u16;
            x /= p;
        }
        d
    }

    #[inline]
    pub fn from_digits(&self, d: &[u16]) -> Element {
        let mut x = 0u32;
        for (&c, &w) in d.iter().zip(&self.weights[..self.n]) {
            x += c as u32 * w;
        }
        Element(x)
    }

    pub fn vector(&self, e: Element) -> FpVector {
        let d = self.digits(e);
        FpVector::from_ints(self.p, &d[..self.n].iter().map(|&x| x as i64).collect::<Vec<_>>())
    }

    pub fn from_vector(&self, v: &FpVector) -> Element {
        self.from_digits(v.coords())
    }

    /// Element with the given integer coordinates (reduced mod p).
    pub fn from_ints(&self, coords: &[i64]) -> Element {
        let d: Vec<u16> = coords.iter().map(|&x| self.p.reduce(x)).collect();
        self.from_digits(&d)
    }

    pub fn basis(&self, j: usize) -> Element {
        Element(self.weights[j])
    }

    #[inline]
    pub fn add(&self, a: Element, b: Element) -> Element {
        let (x, y) = (self.digits(a), self.digits(b));
        let mut d = [0u16; MAX_DIM];
        for j in 0..self.n {
            d[j] = self.p.add(x[j], y[j]);
        }
        self.from_digits(&d[..self.n])
    }

    #[inline]
    pub fn sub(&self, a: Element, b: Element) -> Element {
        let (x, y) = (self.digits(a), self.digits(b));
        let mut d = [0u16; MAX_DIM];
        for j in 0..self.n {
            d[j] = self.p.sub(x[j], y[j]);
        }
        self.from_digits(&d[..self.n])
    }

    pub fn neg(&self, a: Element) -> Element {
        self.sub(Element::ZERO, a)
    }

    pub fn scale(&self, alpha: u16, a: Element) -> Element {
        let x = self.digits(a);
        let mut d = [0u16; MAX_DIM];
        for j in 0..self.n {
            d[j] = self.p.mul(alpha, x[j]);
        }
        self.from_digits(&d[..self.n])
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> {
        (0..self.order as u32).map(Element)
    }
}

/// Anything that can evaluate the circle operation on F_p^n.
///
/// Addition is always coordinatewise; the star and λ maps are derived from
/// the circle product unless an implementation has a faster route.
pub trait BraceOps: Sync {
    fn coords(&self) -> &Coords;

    fn circle(&self, a: Element, b: Element) -> Element;

    fn prime(&self) -> Prime {
        self.coords().prime()
    }

    fn dim(&self) -> usize {
        self.coords().dim()
    }

    fn order(&self) -> usize {
        self.coords().order()
    }

    /// `a * b = a∘b − a − b`.
    fn star(&self, a: Element, b: Element) -> Element {
        let c = self.coords();
        c.sub(c.sub(self.circle(a, b), a), b)
    }

    /// `λ_a(b) = a∘b − a`.
    fn lambda_apply(&self, a: Element, b: Element) -> Element {
        let c = self.coords();
        c.sub(self.circle(a, b), a)
    }

    /// Right inverse under ∘, by search.
    fn circle_inv(&self, a: Element) -> Option<Element> {
        self.coords().elements().find(|&x| self.circle(a, x) == Element::ZERO)
    }
}

/// A finite F_p-brace stored as one λ-matrix per element.
#[derive(Clone, Debug)]
pub struct BraceTable {
    coords: Coords,
    basis_names: Vec<String>,
    lambda: Vec<FpMatrix>,
    lambda_inv: Vec<FpMatrix>,
    /// Row-major λ entries, `n*n` per element, for the hot paths.
    flat: Vec<u16>,
    flat_inv: Vec<u16>,
    meta: Option<FamilyParams>,
}

impl PartialEq for BraceTable {
    fn eq(&self, other: &Self) -> bool {
        self.coords == other.coords && self.lambda == other.lambda
    }
}

impl Eq for BraceTable {}

pub fn default_basis_names(n: usize) -> Vec<String> {
    if n == 4 {
        ["R", "Q", "P", "S"].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=n).map(|j| format!("e{j}")).collect()
    }
}

impl BraceTable {
    /// Validates shape, `λ(0) = Id` and invertibility. The homomorphism
    /// property is checked separately by [`verify_lambda_homomorphism`].
    pub fn from_lambda(
        p: Prime,
        n: usize,
        basis_names: Vec<String>,
        lambda: Vec<FpMatrix>,
    ) -> Result<Self, BraceError> {
        let coords = Coords::new(p, n)?;
        if basis_names.len() != n {
            return Err(BraceError::BasisNames { expected: n, got: basis_names.len() });
        }
        if lambda.len() != coords.order() {
            return Err(BraceError::WrongTableSize { expected: coords.order(), got: lambda.len() });
        }
        let mut lambda_inv = Vec::with_capacity(lambda.len());
        for (index, m) in lambda.iter().enumerate() {
            if m.rows() != n || m.cols() != n || m.prime() != p {
                return Err(BraceError::BadMatrix { index });
            }
            let inv = m.inverse().map_err(|_| BraceError::NotInvertible { index })?;
            lambda_inv.push(inv);
        }
        if !lambda[0].is_identity() {
            return Err(BraceError::IdentityLambda);
        }
        let flat = lambda.iter().flat_map(|m| m.data().iter().copied()).collect();
        let flat_inv = lambda_inv.iter().flat_map(|m| m.data().iter().copied()).collect();
        Ok(BraceTable { coords, basis_names, lambda, lambda_inv, flat, flat_inv, meta: None })
    }

    /// λ-table produced by evaluating `f` on each element's coordinates.
    pub fn from_lambda_fn<F>(p: Prime, n: usize, basis_names: Vec<String>, f: F) -> Result<Self, BraceError>
    where
        F: Fn(&FpVector) -> FpMatrix,
    {
        let coords = Coords::new(p, n)?;
        let lambda = coords.elements().map(|e| f(&coords.vector(e))).collect();
        Self::from_lambda(p, n, basis_names, lambda)
    }

    /// The zero-multiplication brace: `λ ≡ Id`, so `a∘b = a+b`.
    pub fn trivial(p: Prime, n: usize) -> Result<Self, BraceError> {
        Self::from_lambda_fn(p, n, default_basis_names(n), |_| FpMatrix::identity(p, n))
    }

    pub fn with_meta(mut self, meta: FamilyParams) -> Self {
        self.meta = Some(meta);
        self
    }

    pub fn meta(&self) -> Option<&FamilyParams> {
        self.meta.as_ref()
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis_names
    }

    pub fn element(&self, index: u64) -> Result<Element, BraceError> {
        self.coords.element(index)
    }

    /// Element named by a basis label, e.g. `"R"`.
    pub fn named(&self, label: &str) -> Option<Element> {
        self.basis_names.iter().position(|s| s == label).map(|j| self.coords.basis(j))
    }

    pub fn basis_element(&self, j: usize) -> Element {
        self.coords.basis(j)
    }

    pub fn vector(&self, e: Element) -> FpVector {
        self.coords.vector(e)
    }

    pub fn from_vector(&self, v: &FpVector) -> Element {
        self.coords.from_vector(v)
    }

    pub fn from_ints(&self, coords: &[i64]) -> Element {
        self.coords.from_ints(coords)
    }

    pub fn add(&self, a: Element, b: Element) -> Element {
        self.coords.add(a, b)
    }

    pub fn sub(&self, a: Element, b: Element) -> Element {
        self.coords.sub(a, b)
    }

    pub fn neg(&self, a: Element) -> Element {
        self.coords.neg(a)
    }

    pub fn scale(&self, alpha: u16, a: Element) -> Element {
        self.coords.scale(alpha, a)
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> {
        self.coords.elements()
    }

    pub fn lambda(&self, a: Element) -> &FpMatrix {
        &self.lambda[a.index()]
    }

    pub fn lambda_inverse(&self, a: Element) -> &FpMatrix {
        &self.lambda_inv[a.index()]
    }

    pub fn lambdas(&self) -> &[FpMatrix] {
        &self.lambda
    }

    #[inline]
    fn apply_flat(&self, flat: &[u16], a: Element, b: Element) -> Element {
        let n = self.coords.n;
        let p = self.coords.p.get();
        let m = &flat[a.index() * n * n..(a.index() + 1) * n * n];
        let x = self.coords.digits(b);
        let mut out = [0u16; MAX_DIM];
        for r in 0..n {
            let row = &m[r * n..(r + 1) * n];
            let acc: u32 = row.iter().zip(&x[..n]).map(|(&u, &v)| u as u32 * v as u32).sum();
            out[r] = (acc % p) as u16;
        }
        self.coords.from_digits(&out[..n])
    }

    /// `λ_a^{-1}(b)` from the stored inverse matrices.
    pub fn lambda_inv_apply(&self, a: Element, b: Element) -> Element {
        self.apply_flat(&self.flat_inv, a, b)
    }

    /// `e`-fold circle power; negative exponents use the inverse, `a^0 = 0`.
    pub fn circle_pow(&self, a: Element, e: i64) -> Element {
        let base = if e < 0 { BraceOps::circle_inv(self, a).expect("λ-table braces have inverses") } else { a };
        let mut k = e.unsigned_abs();
        let (mut acc, mut sq) = (Element::ZERO, base);
        while k > 0 {
            if k & 1 == 1 {
                acc = self.circle(acc, sq);
            }
            sq = self.circle(sq, sq);
            k >>= 1;
        }
        acc
    }

    /// Same additive basis, λ-table rewritten by `f` (used for mutation tests).
    pub fn map_lambda<F>(&self, f: F) -> Result<BraceTable, BraceError>
    where
        F: Fn(Element, &FpMatrix) -> FpMatrix,
    {
        let lambda = self.elements().map(|e| f(e, self.lambda(e))).collect();
        BraceTable::from_lambda(self.prime(), self.dim(), self.basis_names.clone(), lambda)
    }
}

impl BraceOps for BraceTable {
    fn coords(&self) -> &Coords {
        &self.coords
    }

    #[inline]
    fn circle(&self, a: Element, b: Element) -> Element {
        self.coords.add(a, self.apply_flat(&self.flat, a, b))
    }

    #[inline]
    fn star(&self, a: Element, b: Element) -> Element {
        self.coords.sub(self.apply_flat(&self.flat, a, b), b)
    }

    #[inline]
    fn lambda_apply(&self, a: Element, b: Element) -> Element {
        self.apply_flat(&self.flat, a, b)
    }

    /// `a∘x = 0` iff `x = λ_a^{-1}(−a)`.
    fn circle_inv(&self, a: Element) -> Option<Element> {
        Some(self.lambda_inv_apply(a, self.coords.neg(a)))
    }
}

/// An explicit `p^n × p^n` circle table, e.g. one read back from CSV.
///
/// Nothing forces its λ maps to be linear, which is what the F_p-linearity
/// check exists to catch.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircleTable {
    coords: Coords,
    table: Vec<u32>,
}

impl CircleTable {
    pub fn from_brace<B: BraceOps>(brace: &B) -> Self {
        let coords = brace.coords().clone();
        let n = coords.order();
        let mut table = Vec::with_capacity(n * n);
        for a in coords.elements() {
            for b in coords.elements() {
                table.push(brace.circle(a, b).0);
            }
        }
        CircleTable { coords, table }
    }

    pub fn from_entries(p: Prime, n: usize, table: Vec<u32>) -> Result<Self, BraceError> {
        let coords = Coords::new(p, n)?;
        let order = coords.order();
        if table.len() != order * order {
            return Err(BraceError::WrongTableSize { expected: order * order, got: table.len() });
        }
        if let Some(&bad) = table.iter().find(|&&x| x as usize >= order) {
            return Err(BraceError::IndexOutOfRange(bad as u64));
        }
        Ok(CircleTable { coords, table })
    }

    pub fn set(&mut self, a: Element, b: Element, value: Element) {
        let n = self.coords.order();
        self.table[a.index() * n + b.index()] = value.0;
    }

    pub fn entries(&self) -> &[u32] {
        &self.table
    }
}

impl BraceOps for CircleTable {
    fn coords(&self) -> &Coords {
        &self.coords
    }

    fn circle(&self, a: Element, b: Element) -> Element {
        Element(self.table[a.index() * self.coords.order() + b.index()])
    }
}

/// Evaluates `λ_a^{-1}(b) = b − a*b + a*(a*b) − a*(a*(a*b))`, valid when `A^5 = 0`.
#[derive(Debug)]
pub struct QuarticInverse<'a> {
    brace: &'a BraceTable,
}

impl<'a> QuarticInverse<'a> {
    pub fn new(brace: &'a BraceTable) -> Result<Self, BraceError> {
        let chain = crate::chains::left_chain(brace);
        if chain.terms.len() > 5 || !chain.reaches_zero() {
            return Err(BraceError::PreconditionViolated("A^5 != 0".into()));
        }
        Ok(QuarticInverse { brace })
    }

    pub fn apply(&self, a: Element, b: Element) -> Element {
        let br = self.brace;
        let ab = br.star(a, b);
        let aab = br.star(a, ab);
        let aaab = br.star(a, aab);
        br.sub(br.add(br.sub(b, ab), aab), aaab)
    }
}

/// One-shot form of [`QuarticInverse::apply`]; recomputes the left chain.
pub fn lambda_inv_quartic(brace: &BraceTable, a: Element, b: Element) -> Result<Element, BraceError> {
    Ok(QuarticInverse::new(brace)?.apply(a, b))
}
