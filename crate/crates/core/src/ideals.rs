//! Ideals, ideal products, primeness, and the center of the circle group.
//!
//! An ideal is an F_p-subspace `V` with `A*V ⊆ V` and `V*A ⊆ V`, where the
//! left factor ranges over all elements (the star product is not additive
//! on the left).

use serde::Serialize;
use thiserror::Error;

use crate::brace::{BraceOps, Element};
use crate::chains::{star_span, SpanSpec};
use crate::exec::Exec;
use crate::linalg::Prime;
use crate::subspace::Subspace;

/// Largest subspace lattice that [`enumerate_subspaces`] will produce.
pub const MAX_SUBSPACES: u128 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IdealError {
    #[error("{0} subspaces exceed the enumeration limit of {MAX_SUBSPACES}")]
    TooLarge(u128),
    #[error("brace has {got} elements, expected p^4 = {expected}")]
    WrongCardinality { expected: u64, got: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Ideal {
    pub space: Subspace,
}

/// Number of subspaces of F_p^n: the sum of the Gaussian binomials, saturating.
pub fn subspace_count(p: Prime, n: usize) -> u128 {
    let q = p.get() as u128;
    // row[k] = [m choose k]_q, built up by q-Pascal
    let mut row = vec![1u128];
    for m in 1..=n {
        let mut next = vec![1u128; m + 1];
        for (k, slot) in next.iter_mut().enumerate().take(m).skip(1) {
            let qk = q.checked_pow(k as u32).unwrap_or(u128::MAX);
            *slot = row[k - 1].saturating_add(qk.saturating_mul(row[k]));
        }
        row = next;
    }
    row.into_iter().fold(0u128, u128::saturating_add)
}

/// Every subspace of F_p^n exactly once, by dimension, then pivot set, then
/// the free RREF entries in base-p order.
pub fn enumerate_subspaces(p: Prime, n: usize) -> Result<Vec<Subspace>, IdealError> {
    let total = subspace_count(p, n);
    if total > MAX_SUBSPACES {
        return Err(IdealError::TooLarge(total));
    }
    let q = p.get() as usize;
    let mut out = Vec::with_capacity(total as usize);
    for k in 0..=n {
        for pivots in combinations(n, k) {
            let free: Vec<(usize, usize)> = pivots
                .iter()
                .enumerate()
                .flat_map(|(r, &pc)| {
                    let pivots = &pivots;
                    (pc + 1..n).filter(move |c| !pivots.contains(c)).map(move |c| (r, c))
                })
                .collect();
            let mut digits = vec![0usize; free.len()];
            loop {
                let mut basis = vec![vec![0u16; n]; k];
                for (r, &pc) in pivots.iter().enumerate() {
                    basis[r][pc] = 1;
                }
                for (&(r, c), &d) in free.iter().zip(&digits) {
                    basis[r][c] = d as u16;
                }
                out.push(Subspace::from_canonical(p, n, basis, pivots.clone()));
                if !increment(&mut digits, q) {
                    break;
                }
            }
        }
    }
    Ok(out)
}

/// Base-q odometer, least significant digit last; false once it wraps.
fn increment(digits: &mut [usize], q: usize) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < q {
            return true;
        }
        *d = 0;
    }
    false
}

/// Increasing `k`-subsets of `0..n` in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..=n - (k - cur.len()) {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

fn star_closed<B, I>(brace: &B, lefts: I, rights: &[Element], v: &Subspace) -> bool
where
    B: BraceOps,
    I: IntoIterator<Item = Element>,
{
    let coords = brace.coords();
    lefts.into_iter().all(|a| {
        rights.iter().all(|&b| {
            let d = coords.digits(brace.star(a, b));
            v.contains(&d[..coords.dim()])
        })
    })
}

/// `A*V ⊆ V` and `V*A ⊆ V`.
pub fn is_ideal<B: BraceOps>(brace: &B, v: &Subspace) -> bool {
    let coords = brace.coords();
    let basis_v: Vec<Element> = v.basis().iter().map(|r| coords.from_digits(r)).collect();
    let basis_a: Vec<Element> = (0..coords.dim()).map(|j| coords.basis(j)).collect();
    star_closed(brace, coords.elements(), &basis_v, v)
        && star_closed(brace, v.elements().map(|e| coords.from_digits(&e)), &basis_a, v)
}

/// All ideals, in [`enumerate_subspaces`] order.
pub fn all_ideals<B: BraceOps>(brace: &B, exec: Exec) -> Result<Vec<Ideal>, IdealError> {
    let subspaces = enumerate_subspaces(brace.prime(), brace.dim())?;
    let keep = exec.map(subspaces.len(), |i| is_ideal(brace, &subspaces[i]));
    Ok(subspaces.into_iter().zip(keep).filter_map(|(space, k)| k.then_some(Ideal { space })).collect())
}

/// Additive span of `{a*b : a ∈ I, b ∈ basis(J)}`.
pub fn ideal_product<B: BraceOps>(brace: &B, i: &Subspace, j: &Subspace) -> Subspace {
    star_span(brace, SpanSpec::Sub(i), j)
}

/// Every product of two nonzero ideals is nonzero.
pub fn is_prime<B: BraceOps>(brace: &B, exec: Exec) -> Result<bool, IdealError> {
    let nonzero: Vec<Ideal> = all_ideals(brace, exec)?.into_iter().filter(|i| !i.space.is_zero()).collect();
    let m = nonzero.len();
    let zero_product = exec.find_first(m * m, |t| {
        let (i, j) = (&nonzero[t / m].space, &nonzero[t % m].space);
        ideal_product(brace, i, j).is_zero().then_some(())
    });
    Ok(zero_product.is_none())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CircleCenter {
    pub elements: Vec<Element>,
    /// Present when the center is closed under addition and scaling.
    pub subspace: Option<Subspace>,
}

impl CircleCenter {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// `{c : c∘a = a∘c for all a}`.
pub fn circle_center<B: BraceOps>(brace: &B, exec: Exec) -> CircleCenter {
    let coords = brace.coords();
    let n = coords.order();
    let central = exec.map(n, |c| {
        let c = Element::from_index(c);
        coords.elements().all(|a| brace.circle(c, a) == brace.circle(a, c))
    });
    let elements: Vec<Element> =
        central.iter().enumerate().filter(|(_, &z)| z).map(|(i, _)| Element::from_index(i)).collect();
    let span = Subspace::span_rows(
        coords.prime(),
        coords.dim(),
        elements.iter().map(|&e| coords.digits(e)[..coords.dim()].to_vec()),
    );
    let subspace = (span.cardinality() == elements.len() as u64).then_some(span);
    CircleCenter { elements, subspace }
}

/// Circle groups of order p⁴ told apart by commutativity, exponent and center.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GroupClass {
    #[serde(rename = "abelian")]
    Abelian,
    #[serde(rename = "XIV")]
    Xiv,
    #[serde(rename = "XV")]
    Xv,
    #[serde(rename = "other")]
    Other,
}

/// Whether every element has circle order dividing `p`.
pub fn has_exponent_p<B: BraceOps>(brace: &B) -> bool {
    let p = brace.prime().get();
    brace.coords().elements().all(|a| {
        let mut x = a;
        for _ in 1..p {
            x = brace.circle(x, a);
        }
        x == Element::ZERO
    })
}

pub fn identify_group<B: BraceOps>(brace: &B, exec: Exec) -> Result<GroupClass, IdealError> {
    let p = brace.prime().get() as u64;
    let got = brace.order() as u64;
    if got != p.pow(4) {
        return Err(IdealError::WrongCardinality { expected: p.pow(4), got });
    }
    let center = circle_center(brace, exec);
    if center.len() as u64 == got {
        return Ok(GroupClass::Abelian);
    }
    if !has_exponent_p(brace) {
        return Ok(GroupClass::Other);
    }
    Ok(match center.len() as u64 {
        c if c == p * p => GroupClass::Xiv,
        c if c == p => GroupClass::Xv,
        _ => GroupClass::Other,
    })
}
