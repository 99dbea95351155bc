//! The holomorph of (F_p^n, +), the regular embedding `a ↦ (a, λ_a)` and
//! braces transported along additive automorphisms.

use std::collections::HashSet;

use rand::Rng;
use thiserror::Error;

use crate::brace::{BraceError, BraceOps, BraceTable, Element};
use crate::exec::{Budget, Exec};
use crate::linalg::{FpMatrix, FpVector, LinalgError, Prime};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HolError {
    #[error("λ_a λ_b ≠ λ_(a∘b) for a = {a}, b = {b}")]
    ClosureFailure { a: u64, b: u64 },
    #[error("set is not a subgroup: {0}")]
    NotASubgroup(String),
    #[error("matrix is singular or has the wrong shape")]
    Singular,
    #[error(transparent)]
    Brace(#[from] BraceError),
}

impl From<LinalgError> for HolError {
    fn from(_: LinalgError) -> Self {
        HolError::Singular
    }
}

/// The affine map `b ↦ v + M·b`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HolElement {
    pub v: FpVector,
    pub m: FpMatrix,
}

impl HolElement {
    pub fn identity(p: Prime, n: usize) -> Self {
        HolElement { v: FpVector::zero(p, n), m: FpMatrix::identity(p, n) }
    }

    pub fn new(v: FpVector, m: FpMatrix) -> Result<Self, HolError> {
        if !m.is_square() || m.rows() != v.len() || !m.is_invertible() {
            return Err(HolError::Singular);
        }
        Ok(HolElement { v, m })
    }

    pub fn apply(&self, b: &FpVector) -> FpVector {
        self.v.add(&self.m.mul_vec(b).expect("shapes checked at construction"))
    }

    /// `(v, M)·(w, N) = (v + M·w, M·N)`, i.e. apply the right factor first.
    pub fn compose(&self, other: &HolElement) -> HolElement {
        HolElement { v: self.apply(&other.v), m: self.m.matmul(&other.m).expect("shapes checked at construction") }
    }

    pub fn inverse(&self) -> HolElement {
        let mi = self.m.inverse().expect("invertible at construction");
        let v = mi.mul_vec(&self.v).expect("shapes checked at construction").neg();
        HolElement { v, m: mi }
    }

    pub fn is_identity(&self) -> bool {
        self.v.is_zero() && self.m.is_identity()
    }

    /// Order in the holomorph, by repeated composition.
    pub fn order(&self) -> u64 {
        let mut x = self.clone();
        let mut k = 1;
        while !x.is_identity() {
            x = x.compose(self);
            k += 1;
        }
        k
    }
}

/// The pairs `(a, λ_a)`, after checking `(a, λ_a)(b, λ_b) = (a∘b, λ_{a∘b})`
/// on all pairs.
pub fn embed(brace: &BraceTable, exec: Exec) -> Result<Vec<HolElement>, HolError> {
    let n = brace.order();
    let bad = exec.find_first(n, |a| {
        let ae = Element::from_index(a);
        let la = brace.lambda(ae);
        brace.elements().find_map(|b| {
            let prod = la.matmul(brace.lambda(b)).expect("square");
            let ab = brace.circle(ae, b);
            let translation = brace.add(ae, brace.lambda_apply(ae, b));
            (prod != *brace.lambda(ab) || translation != ab).then_some((a as u64, b.into()))
        })
    });
    if let Some((a, b)) = bad {
        return Err(HolError::ClosureFailure { a, b });
    }
    Ok(brace.elements().map(|a| HolElement { v: brace.vector(a), m: brace.lambda(a).clone() }).collect())
}

/// Whether a subgroup of the holomorph acts regularly: `g ↦ g(0)` is a
/// bijection onto F_p^n. The subgroup property is checked first.
pub fn is_regular(group: &[HolElement], p: Prime, n: usize) -> Result<bool, HolError> {
    let set: HashSet<&HolElement> = group.iter().collect();
    if set.len() != group.len() {
        return Err(HolError::NotASubgroup("repeated elements".into()));
    }
    if !set.contains(&HolElement::identity(p, n)) {
        return Err(HolError::NotASubgroup("identity missing".into()));
    }
    for g in group {
        if g.v.len() != n || g.m.rows() != n || g.v.prime() != p || g.m.prime() != p {
            return Err(HolError::NotASubgroup("element of the wrong shape".into()));
        }
        if !set.contains(&g.inverse()) {
            return Err(HolError::NotASubgroup("not closed under inverses".into()));
        }
        for h in group {
            if !set.contains(&g.compose(h)) {
                return Err(HolError::NotASubgroup("not closed under composition".into()));
            }
        }
    }
    let translations: HashSet<&FpVector> = group.iter().map(|g| &g.v).collect();
    Ok(group.len() as u64 == (p.get() as u64).pow(n as u32) && translations.len() == group.len())
}

/// `a ∘_γ b = γ⁻¹(γa ∘ γb)`, i.e. `λ'_a = γ⁻¹ λ_{γa} γ`.
pub fn conjugate_brace(brace: &BraceTable, gamma: &FpMatrix) -> Result<BraceTable, HolError> {
    let n = brace.dim();
    if gamma.rows() != n || gamma.cols() != n || gamma.prime() != brace.prime() {
        return Err(HolError::Singular);
    }
    let gi = gamma.inverse()?;
    Ok(BraceTable::from_lambda_fn(brace.prime(), n, brace.basis_names().to_vec(), |a| {
        let ga = brace.from_vector(&gamma.mul_vec(a).expect("square"));
        gi.matmul(&brace.lambda(ga).matmul(gamma).expect("square")).expect("square")
    })?)
}

/// Both characterizations of `γ ∈ Aut(A, +, ∘)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AutomorphismVerdict {
    /// `γ(a∘b) = γ(a)∘γ(b)` on all pairs.
    pub preserves_circle: bool,
    /// `conjugate_brace(A, γ)` has the same table as `A`.
    pub fixes_table: bool,
}

pub fn automorphism_verdict(brace: &BraceTable, gamma: &FpMatrix, exec: Exec) -> Result<AutomorphismVerdict, HolError> {
    let conj = conjugate_brace(brace, gamma)?;
    let image: Vec<Element> =
        brace.elements().map(|a| brace.from_vector(&gamma.mul_vec(&brace.vector(a)).expect("square"))).collect();
    let n = brace.order();
    let broken = exec.find_first(n, |a| {
        let ae = Element::from_index(a);
        brace
            .elements()
            .find(|&b| image[brace.circle(ae, b).index()] != brace.circle(image[a], image[b.index()]))
            .map(|_| ())
    });
    Ok(AutomorphismVerdict { preserves_circle: broken.is_none(), fixes_table: conj.lambdas() == brace.lambdas() })
}

pub fn is_brace_automorphism(brace: &BraceTable, gamma: &FpMatrix, exec: Exec) -> Result<bool, HolError> {
    let v = automorphism_verdict(brace, gamma, exec)?;
    Ok(v.preserves_circle && v.fixes_table)
}

/// Uniform random element of GL(n, p) by rejection.
pub fn random_invertible<R: Rng + ?Sized>(p: Prime, n: usize, rng: &mut R) -> FpMatrix {
    loop {
        let flat: Vec<i64> = (0..n * n).map(|_| rng.gen_range(0..p.get() as i64)).collect();
        let m = FpMatrix::from_flat(p, n, n, &flat).expect("n×n entries");
        if m.is_invertible() {
            return m;
        }
    }
}

/// Streams GL(n, p) in lexicographic order of row-major entries until the
/// budget runs out; [`GlIter::exhausted_budget`] tells the two endings apart.
pub struct GlIter {
    p: Prime,
    n: usize,
    digits: Option<Vec<u16>>,
    budget: Budget,
    out_of_time: bool,
}

impl GlIter {
    pub fn new(p: Prime, n: usize, budget: Budget) -> Self {
        GlIter { p, n, digits: Some(vec![0; n * n]), budget, out_of_time: false }
    }

    pub fn exhausted_budget(&self) -> bool {
        self.out_of_time
    }

    fn advance(&mut self) {
        let q = self.p.get() as u16;
        if let Some(d) = &mut self.digits {
            for x in d.iter_mut().rev() {
                *x += 1;
                if *x < q {
                    return;
                }
                *x = 0;
            }
            self.digits = None;
        }
    }
}

impl Iterator for GlIter {
    type Item = FpMatrix;

    fn next(&mut self) -> Option<FpMatrix> {
        let mut steps = 0u32;
        loop {
            if steps.is_multiple_of(1024) && self.budget.exceeded() {
                self.out_of_time = true;
                self.digits = None;
            }
            steps = steps.wrapping_add(1);
            let d = self.digits.as_ref()?;
            let flat: Vec<i64> = d.iter().map(|&x| x as i64).collect();
            let m = FpMatrix::from_flat(self.p, self.n, self.n, &flat).expect("n×n entries");
            self.advance();
            if m.is_invertible() {
                return Some(m);
            }
        }
    }
}
