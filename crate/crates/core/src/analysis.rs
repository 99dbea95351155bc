//! The commutator identity for star products, brace isomorphism search and
//! cheap isomorphism invariants.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use serde::Serialize;
use thiserror::Error;

use crate::brace::{BraceOps, Element};
use crate::chains::{classify_nilpotency, left_chain, right_chain, strong_chain, ChainReport, Nilpotency};
use crate::exec::Exec;
use crate::ideals::is_prime as ideals_prime;
use crate::ideals::{all_ideals, circle_center, identify_group, GroupClass, IdealError};
use crate::report::{Check, Report};
use crate::subspace::Subspace;

/// Default cap on search nodes for [`brace_isomorphic`].
pub const DEFAULT_NODE_LIMIT: u64 = 50_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnalysisError {
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("isomorphism search exceeded {0} nodes")]
    TooLarge(u64),
}

/// Evaluates `(a⁻¹∘b⁻¹∘a∘b)*c` against the six-term expansion
/// `a*(b*c) − b*(a*c) + a*(b*(a*c)) + b*(b*(a*c)) − b*(a*(b*c)) − a*(a*(b*c))`,
/// which holds in braces with `A^5 = 0`.
pub struct CommutatorCheck<'a, B: BraceOps> {
    brace: &'a B,
}

impl<'a, B: BraceOps> CommutatorCheck<'a, B> {
    pub fn new(brace: &'a B) -> Result<Self, AnalysisError> {
        let chain = left_chain(brace);
        if !chain.term(5).is_zero() {
            return Err(AnalysisError::PreconditionViolated(format!(
                "left chain {:?} does not vanish by A^5",
                chain.dims
            )));
        }
        Ok(CommutatorCheck { brace })
    }

    pub fn commutator(&self, a: Element, b: Element) -> Element {
        let t = self.brace;
        let ai = t.circle_inv(a).expect("brace elements are invertible");
        let bi = t.circle_inv(b).expect("brace elements are invertible");
        t.circle(t.circle(t.circle(ai, bi), a), b)
    }

    pub fn lhs(&self, a: Element, b: Element, c: Element) -> Element {
        self.brace.star(self.commutator(a, b), c)
    }

    pub fn rhs(&self, a: Element, b: Element, c: Element) -> Element {
        let t = self.brace;
        let co = t.coords();
        let s = |x, y| t.star(x, y);
        let bc = s(b, c);
        let ac = s(a, c);
        let terms = [
            (s(a, bc), true),
            (s(b, ac), false),
            (s(a, s(b, ac)), true),
            (s(b, s(b, ac)), true),
            (s(b, s(a, bc)), false),
            (s(a, s(a, bc)), false),
        ];
        terms.into_iter().fold(Element::ZERO, |acc, (x, plus)| if plus { co.add(acc, x) } else { co.sub(acc, x) })
    }

    pub fn holds(&self, a: Element, b: Element, c: Element) -> bool {
        self.lhs(a, b, c) == self.rhs(a, b, c)
    }
}

pub fn commutator_star_check<B: BraceOps>(
    brace: &B,
    a: Element,
    b: Element,
    c: Element,
) -> Result<bool, AnalysisError> {
    Ok(CommutatorCheck::new(brace)?.holds(a, b, c))
}

/// A brace isomorphism `A → B`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsoWitness {
    /// Image coordinates of each basis element of `A`, keyed by its label.
    pub images: BTreeMap<String, Vec<u16>>,
    /// `full_map[a]` is the image of element index `a`.
    #[serde(skip)]
    pub full_map: Vec<Element>,
}

impl IsoWitness {
    pub fn apply(&self, a: Element) -> Element {
        self.full_map[a.index()]
    }

    pub fn inverse(&self) -> Vec<Element> {
        let mut inv = vec![Element::ZERO; self.full_map.len()];
        for (a, &b) in self.full_map.iter().enumerate() {
            inv[b.index()] = Element::from_index(a);
        }
        inv
    }
}

#[derive(Clone, Copy, Debug)]
pub struct IsoOptions {
    pub node_limit: u64,
    pub exec: Exec,
}

impl Default for IsoOptions {
    fn default() -> Self {
        IsoOptions { node_limit: DEFAULT_NODE_LIMIT, exec: Exec::default() }
    }
}

/// Checks bijectivity and that `map` preserves `+` and `∘` on all pairs.
pub fn verify_isomorphism<A: BraceOps, B: BraceOps>(a: &A, b: &B, map: &[Element], exec: Exec) -> Report {
    let ca = a.coords();
    let cb = b.coords();
    let n = ca.order();
    let mut seen = vec![false; cb.order()];
    let mut bijective = map.len() == n && n == cb.order();
    if bijective {
        for &x in map {
            if x.index() >= seen.len() || std::mem::replace(&mut seen[x.index()], true) {
                bijective = false;
                break;
            }
        }
    }
    if !bijective {
        return Report::new(vec![
            Check::fail("bijective", vec![]),
            Check::fail("additive", vec![]),
            Check::fail("circle", vec![]),
        ]);
    }
    let add = exec.find_first(n, |x| {
        let xe = Element::from_index(x);
        ca.elements()
            .find(|&y| map[ca.add(xe, y).index()] != cb.add(map[x], map[y.index()]))
            .map(|y| vec![x as u64, y.into()])
    });
    let circ = exec.find_first(n, |x| {
        let xe = Element::from_index(x);
        ca.elements()
            .find(|&y| map[a.circle(xe, y).index()] != b.circle(map[x], map[y.index()]))
            .map(|y| vec![x as u64, y.into()])
    });
    let mut r = Report::new(vec![
        Check::pass("bijective"),
        Check::from_witness("additive", add),
        Check::from_witness("circle", circ),
    ]);
    r.examined = 2 * (n as u64) * (n as u64);
    r
}

/// Level of each element in a chain: how many computed terms contain it.
fn chain_levels<B: BraceOps>(brace: &B, chain: &ChainReport) -> Vec<u8> {
    let co = brace.coords();
    co.elements()
        .map(|e| {
            let d = co.digits(e);
            chain.terms.iter().filter(|t| t.contains(&d[..co.dim()])).count() as u8
        })
        .collect()
}

/// A basis adapted to the left chain, deepest term first.
fn adapted_basis<B: BraceOps>(brace: &B, chain: &ChainReport) -> Vec<Element> {
    let co = brace.coords();
    let n = co.dim();
    let mut span = Subspace::zero(co.prime(), n);
    let mut out = Vec::with_capacity(n);
    for term in chain.terms.iter().rev() {
        for row in term.basis() {
            if span.insert(row) {
                out.push(co.from_digits(row));
            }
        }
    }
    for j in 0..n {
        let e = co.basis(j);
        if span.insert(&co.digits(e)[..n]) {
            out.push(e);
        }
    }
    out
}

struct Search<'s, A: BraceOps, B: BraceOps> {
    a: &'s A,
    b: &'s B,
    basis: Vec<Element>,
    /// Candidate images for each basis vector.
    candidates: Vec<Vec<Element>>,
    nodes: &'s AtomicU64,
    limit: u64,
    aborted: &'s AtomicBool,
}

/// Mutable state of one depth-first branch.
struct Branch {
    images: Vec<Element>,
    /// `phi[x]` for `x` in the current span, `u32::MAX` elsewhere.
    phi: Vec<u32>,
    /// Elements of the current span with their images, one layer per depth.
    layers: Vec<Vec<(Element, Element)>>,
    image_span: Vec<Subspace>,
}

const UNSET: u32 = u32::MAX;

impl<A: BraceOps, B: BraceOps> Search<'_, A, B> {
    fn new_branch(&self) -> Branch {
        let cb = self.b.coords();
        let mut phi = vec![UNSET; self.a.order()];
        phi[0] = 0;
        Branch {
            images: Vec::new(),
            phi,
            layers: vec![vec![(Element::ZERO, Element::ZERO)]],
            image_span: vec![Subspace::zero(cb.prime(), cb.dim())],
        }
    }

    /// Extends the branch by `φ(basis[j]) = u`; false if this contradicts a
    /// product already determined inside the span.
    fn push(&self, br: &mut Branch, u: Element) -> bool {
        let ca = self.a.coords();
        let cb = self.b.coords();
        let j = br.images.len();
        let mut span = br.image_span[j].clone();
        if !span.insert(&cb.digits(u)[..cb.dim()]) {
            return false;
        }
        let bj = self.basis[j];
        let prev = br.layers[j].clone();
        let mut layer = Vec::with_capacity(prev.len() * ca.prime().get() as usize);
        let mut x = Element::ZERO;
        let mut fx = Element::ZERO;
        for _ in 0..ca.prime().get() {
            for &(v, fv) in &prev {
                let e = ca.add(v, x);
                let fe = cb.add(fv, fx);
                br.phi[e.index()] = fe.index() as u32;
                layer.push((e, fe));
            }
            x = ca.add(x, bj);
            fx = cb.add(fx, u);
        }
        br.images.push(u);
        br.layers.push(layer);
        br.image_span.push(span);
        let ok = self.consistent(br, prev.len());
        if !ok {
            self.pop(br);
        }
        ok
    }

    fn pop(&self, br: &mut Branch) {
        let layer = br.layers.pop().expect("pop after push");
        let keep = br.layers.last().map_or(0, Vec::len);
        for &(e, _) in &layer[keep..] {
            br.phi[e.index()] = UNSET;
        }
        br.images.pop();
        br.image_span.pop();
    }

    /// `φ(λ_x(y)) = λ_{φx}(φy)` for pairs involving the newest basis vector
    /// whose product already lies in the span.
    fn consistent(&self, br: &Branch, old: usize) -> bool {
        let j = br.images.len() - 1;
        let layer = br.layers.last().expect("nonempty");
        for (idx, &(x, fx)) in layer.iter().enumerate() {
            let new_x = idx >= old;
            let ys = if new_x { 0..=j } else { j..=j };
            for k in ys {
                let z = self.a.lambda_apply(x, self.basis[k]);
                let fz = br.phi[z.index()];
                if fz != UNSET && fz as usize != self.b.lambda_apply(fx, br.images[k]).index() {
                    return false;
                }
            }
        }
        true
    }

    fn descend(&self, br: &mut Branch) -> Option<Vec<Element>> {
        if self.aborted.load(Ordering::Relaxed) {
            return None;
        }
        if self.nodes.fetch_add(1, Ordering::Relaxed) >= self.limit {
            self.aborted.store(true, Ordering::Relaxed);
            return None;
        }
        let j = br.images.len();
        if j == self.basis.len() {
            let map: Vec<Element> = (0..self.a.order()).map(|e| Element::from_index(br.phi[e] as usize)).collect();
            return Some(map);
        }
        for &u in &self.candidates[j] {
            if self.push(br, u) {
                if let Some(m) = self.descend(br) {
                    return Some(m);
                }
                self.pop(br);
            }
        }
        None
    }
}

fn same_tables<A: BraceOps, B: BraceOps>(a: &A, b: &B) -> bool {
    a.coords() == b.coords()
        && a.coords().elements().all(|x| a.coords().elements().all(|y| a.circle(x, y) == b.circle(x, y)))
}

fn witness_from_map<A: BraceOps>(a: &A, names: &[String], map: Vec<Element>) -> IsoWitness {
    let co = a.coords();
    let images = (0..co.dim())
        .map(|j| {
            let label = names.get(j).cloned().unwrap_or_else(|| format!("e{}", j + 1));
            (label, co.digits(map[co.basis(j).index()])[..co.dim()].to_vec())
        })
        .collect();
    IsoWitness { images, full_map: map }
}

/// Searches for a brace isomorphism `A → B`.
///
/// Cheap invariants reject most non-isomorphic pairs; otherwise images of a
/// left-chain adapted basis of `A` are assigned depth-first, each restricted
/// to elements of `B` at the same left- and right-chain levels, and pruned by
/// the λ-products already determined. The search is exhaustive within these
/// isomorphism-invariant constraints, and any map it returns is verified on
/// all pairs.
pub fn brace_isomorphic<A: BraceOps, B: BraceOps>(
    a: &A,
    b: &B,
    names: &[String],
    opts: IsoOptions,
) -> Result<Option<IsoWitness>, AnalysisError> {
    if a.coords() != b.coords() {
        return Ok(None);
    }
    if same_tables(a, b) {
        let map = a.coords().elements().collect();
        return Ok(Some(witness_from_map(a, names, map)));
    }
    let (la, lb) = (left_chain(a), left_chain(b));
    let (ra, rb) = (right_chain(a), right_chain(b));
    if la.dims != lb.dims
        || ra.dims != rb.dims
        || circle_center(a, opts.exec).len() != circle_center(b, opts.exec).len()
    {
        return Ok(None);
    }
    let levels_a: Vec<(u8, u8)> = chain_levels(a, &la).into_iter().zip(chain_levels(a, &ra)).collect();
    let levels_b: Vec<(u8, u8)> = chain_levels(b, &lb).into_iter().zip(chain_levels(b, &rb)).collect();
    let basis = adapted_basis(a, &la);
    let candidates: Vec<Vec<Element>> = basis
        .iter()
        .map(|&e| {
            let want = levels_a[e.index()];
            b.coords().elements().filter(|u| levels_b[u.index()] == want).collect()
        })
        .collect();
    let nodes = AtomicU64::new(0);
    let aborted = AtomicBool::new(false);
    let search = Search { a, b, basis, candidates, nodes: &nodes, limit: opts.node_limit, aborted: &aborted };
    let first = &search.candidates[0];
    let found = opts.exec.find_first(first.len(), |i| {
        let mut br = search.new_branch();
        if !search.push(&mut br, first[i]) {
            return None;
        }
        search.descend(&mut br)
    });
    if aborted.load(Ordering::Relaxed) && found.is_none() {
        return Err(AnalysisError::TooLarge(opts.node_limit));
    }
    let Some(map) = found else { return Ok(None) };
    assert!(verify_isomorphism(a, b, &map, opts.exec).all_passed(), "search produced a map that is not an isomorphism");
    Ok(Some(witness_from_map(a, names, map)))
}

/// Isomorphism invariants; equal fingerprints are necessary for isomorphism.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Fingerprint {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    pub strong: Vec<usize>,
    pub nilpotency: Nilpotency,
    /// `None` when the subspace lattice is too large to enumerate.
    pub prime: Option<bool>,
    /// `None` unless the order is p⁴.
    pub group: Option<GroupClass>,
    pub center_size: usize,
    /// Sorted dimensions of all ideals.
    pub ideal_dims: Option<Vec<usize>>,
}

pub fn invariant_fingerprint<B: BraceOps>(brace: &B, exec: Exec) -> Fingerprint {
    let ideal_dims = match all_ideals(brace, exec) {
        Ok(ideals) => {
            let mut d: Vec<usize> = ideals.iter().map(|i| i.space.dim()).collect();
            d.sort_unstable();
            Some(d)
        }
        Err(IdealError::TooLarge(_)) => None,
        Err(e) => unreachable!("all_ideals only fails on size: {e}"),
    };
    let prime = ideal_dims.as_ref().map(|_| ideals_prime(brace, exec).expect("lattice already enumerated"));
    Fingerprint {
        left: left_chain(brace).dims,
        right: right_chain(brace).dims,
        strong: strong_chain(brace).dims,
        nilpotency: classify_nilpotency(brace),
        prime,
        group: identify_group(brace, exec).ok(),
        center_size: circle_center(brace, exec).len(),
        ideal_dims,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brace::test_support::truncated_polynomial;
    use crate::brace::BraceTable;
    use crate::linalg::{FpMatrix, Prime};

    /// The brace transported along `γ`: `λ'_a = γ⁻¹ λ_{γa} γ`, isomorphic via `γ`.
    fn transport(t: &BraceTable, gamma: &FpMatrix) -> BraceTable {
        let gi = gamma.inverse().unwrap();
        BraceTable::from_lambda_fn(t.prime(), t.dim(), t.basis_names().to_vec(), |a| {
            let ga = t.from_vector(&gamma.mul_vec(a).unwrap());
            gi.matmul(&t.lambda(ga).matmul(gamma).unwrap()).unwrap()
        })
        .unwrap()
    }

    #[test]
    fn commutator_identity_on_ring_brace() {
        let t = truncated_polynomial(5, 4);
        let c = CommutatorCheck::new(&t).unwrap();
        for a in t.elements().step_by(37) {
            for b in t.elements().step_by(53) {
                assert!(c.holds(a, b, t.basis_element(0)));
                assert_eq!(c.commutator(a, b), Element::ZERO);
            }
        }
    }

    #[test]
    fn commutator_precondition() {
        let t = truncated_polynomial(3, 5);
        assert!(matches!(CommutatorCheck::new(&t), Err(AnalysisError::PreconditionViolated(_))));
    }

    #[test]
    fn identity_and_transported_witnesses() {
        let t = truncated_polynomial(3, 3);
        let names = t.basis_names().to_vec();
        let w = brace_isomorphic(&t, &t, &names, IsoOptions::default()).unwrap().unwrap();
        assert!(w.full_map.iter().enumerate().all(|(i, e)| e.index() == i));
        let p = Prime::new(3).unwrap();
        let gamma = FpMatrix::from_rows(p, &[vec![1, 1, 0], vec![0, 2, 1], vec![0, 0, 1]]).unwrap();
        let u = transport(&t, &gamma);
        assert_ne!(u, t);
        let w = brace_isomorphic(&u, &t, &names, IsoOptions::default()).unwrap().unwrap();
        assert!(verify_isomorphism(&u, &t, &w.full_map, Exec::Sequential).all_passed());
        let back = brace_isomorphic(&t, &u, &names, IsoOptions::default()).unwrap().unwrap();
        assert!(verify_isomorphism(&u, &t, &back.inverse(), Exec::Sequential).all_passed());
    }

    #[test]
    fn ring_brace_is_not_trivial() {
        let t = truncated_polynomial(3, 3);
        let z = BraceTable::trivial(Prime::new(3).unwrap(), 3).unwrap();
        let names = t.basis_names().to_vec();
        assert_eq!(brace_isomorphic(&t, &z, &names, IsoOptions::default()).unwrap(), None);
        assert_ne!(invariant_fingerprint(&t, Exec::Sequential), invariant_fingerprint(&z, Exec::Sequential));
    }

    #[test]
    fn tiny_node_limit_is_reported() {
        let t = truncated_polynomial(3, 3);
        let gamma =
            FpMatrix::from_rows(Prime::new(3).unwrap(), &[vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 1]]).unwrap();
        let u = transport(&t, &gamma);
        let opts = IsoOptions { node_limit: 1, exec: Exec::Sequential };
        let names = t.basis_names().to_vec();
        assert_eq!(brace_isomorphic(&u, &t, &names, opts), Err(AnalysisError::TooLarge(1)));
    }

    #[test]
    fn bad_maps_fail_verification() {
        let t = truncated_polynomial(3, 2);
        let mut map: Vec<Element> = t.elements().collect();
        map.swap(1, 2);
        let r = verify_isomorphism(&t, &t, &map, Exec::Sequential);
        assert!(r.get("bijective").unwrap().passed);
        assert!(!r.get("additive").unwrap().passed);
        map[1] = map[2];
        assert!(!verify_isomorphism(&t, &t, &map, Exec::Sequential).get("bijective").unwrap().passed);
    }
}
