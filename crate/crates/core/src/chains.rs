//! Left, right and strong radical chains.

use serde::Serialize;

use crate::brace::{BraceOps, Element};
use crate::subspace::Subspace;

/// Left factor of a star span.
#[derive(Clone, Copy, Debug)]
pub enum SpanSpec<'a> {
    Full,
    Sub(&'a Subspace),
}

/// Additive span of `{a*b : a ∈ left, b ∈ basis(right)}`.
///
/// `*` is additive in its right argument only, so `left` is enumerated
/// element by element while `right` contributes just its basis.
pub fn star_span<B: BraceOps>(brace: &B, left: SpanSpec<'_>, right: &Subspace) -> Subspace {
    let coords = brace.coords();
    let mut out = Subspace::zero(coords.prime(), coords.dim());
    if right.is_zero() {
        return out;
    }
    let rights: Vec<Element> = right.basis().iter().map(|r| coords.from_digits(r)).collect();
    let mut absorb = |a: Element| -> bool {
        for &b in &rights {
            let d = coords.digits(brace.star(a, b));
            out.insert(&d[..coords.dim()]);
            if out.is_full() {
                return true;
            }
        }
        false
    };
    match left {
        SpanSpec::Full => {
            for a in coords.elements() {
                if absorb(a) {
                    break;
                }
            }
        }
        SpanSpec::Sub(s) => {
            for v in s.elements() {
                if absorb(coords.from_digits(&v)) {
                    break;
                }
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ChainKind {
    Left,
    Right,
    Strong,
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainReport {
    pub kind: ChainKind,
    /// Dimensions from the first term until the chain hits zero or repeats.
    pub dims: Vec<usize>,
    pub stabilized_nonzero: bool,
    #[serde(skip)]
    pub terms: Vec<Subspace>,
}

impl ChainReport {
    fn from_terms(kind: ChainKind, terms: Vec<Subspace>) -> Self {
        let dims = terms.iter().map(Subspace::dim).collect();
        let stabilized_nonzero = terms.last().is_some_and(|t| !t.is_zero());
        ChainReport { kind, dims, stabilized_nonzero, terms }
    }

    pub fn reaches_zero(&self) -> bool {
        !self.stabilized_nonzero
    }

    /// The `i`-th term (1-based, as in `A^1 = A`); beyond the computed range
    /// the final term repeats.
    pub fn term(&self, i: usize) -> &Subspace {
        let idx = i.max(1) - 1;
        self.terms.get(idx).unwrap_or_else(|| self.terms.last().expect("chains are nonempty"))
    }
}

fn iterate<B, F>(brace: &B, kind: ChainKind, step: F) -> ChainReport
where
    B: BraceOps,
    F: Fn(&Subspace) -> Subspace,
{
    let mut terms = vec![Subspace::full(brace.prime(), brace.dim())];
    loop {
        let last = terms.last().expect("nonempty");
        if last.is_zero() {
            break;
        }
        let next = step(last);
        let repeated = next == *last;
        terms.push(next);
        if repeated {
            break;
        }
    }
    ChainReport::from_terms(kind, terms)
}

/// `A^{i+1} = A * A^i`.
pub fn left_chain<B: BraceOps>(brace: &B) -> ChainReport {
    iterate(brace, ChainKind::Left, |t| star_span(brace, SpanSpec::Full, t))
}

/// `A^{(i+1)} = A^{(i)} * A`.
pub fn right_chain<B: BraceOps>(brace: &B) -> ChainReport {
    let full = Subspace::full(brace.prime(), brace.dim());
    iterate(brace, ChainKind::Right, |t| star_span(brace, SpanSpec::Sub(t), &full))
}

/// `A^{[i+1]} = Σ_{j=1}^{i} A^{[j]} * A^{[i+1-j]}`.
///
/// A repeated term does not by itself fix the chain here, because every
/// earlier term feeds the next one; a plateau is accepted only after it
/// persists for `n + 1` further steps.
pub fn strong_chain<B: BraceOps>(brace: &B) -> ChainReport {
    let n = brace.dim();
    let mut terms = vec![Subspace::full(brace.prime(), n)];
    let next_term = |terms: &[Subspace]| {
        let i = terms.len();
        (1..=i).fold(Subspace::zero(brace.prime(), n), |acc, j| {
            acc.sum(&star_span(brace, SpanSpec::Sub(&terms[j - 1]), &terms[i - j]))
        })
    };
    loop {
        let last = terms.last().expect("nonempty").clone();
        if last.is_zero() {
            return ChainReport::from_terms(ChainKind::Strong, terms);
        }
        let next = next_term(&terms);
        if next != last {
            terms.push(next);
            continue;
        }
        terms.push(next);
        let plateau_start = terms.len();
        let mut probe = terms.clone();
        let mut dropped = false;
        for _ in 0..=n {
            let t = next_term(&probe);
            if t != last {
                dropped = true;
                break;
            }
            probe.push(t);
        }
        if !dropped {
            terms.truncate(plateau_start);
            return ChainReport::from_terms(ChainKind::Strong, terms);
        }
        terms = probe;
        let t = next_term(&terms);
        terms.push(t);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Nilpotency {
    pub left: bool,
    pub right: bool,
    pub strong: bool,
}

pub fn classify_nilpotency<B: BraceOps>(brace: &B) -> Nilpotency {
    Nilpotency {
        left: left_chain(brace).reaches_zero(),
        right: right_chain(brace).reaches_zero(),
        strong: strong_chain(brace).reaches_zero(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brace::test_support::truncated_polynomial;
    use crate::brace::BraceTable;
    use crate::linalg::Prime;

    #[test]
    fn trivial_brace_chains() {
        let t = BraceTable::trivial(Prime::new(5).unwrap(), 4).unwrap();
        for c in [left_chain(&t), right_chain(&t), strong_chain(&t)] {
            assert_eq!(c.dims, vec![4, 0]);
            assert!(!c.stabilized_nonzero);
        }
        assert_eq!(classify_nilpotency(&t), Nilpotency { left: true, right: true, strong: true });
    }

    #[test]
    fn commutative_ring_brace_is_nilpotent_both_ways() {
        // x F_5[x]/(x^3): abelian circle group
        let t = truncated_polynomial(5, 2);
        assert_eq!(left_chain(&t).dims, vec![2, 1, 0]);
        assert_eq!(right_chain(&t).dims, vec![2, 1, 0]);
        assert_eq!(classify_nilpotency(&t), Nilpotency { left: true, right: true, strong: true });
    }

    #[test]
    fn zero_right_factor_spans_zero() {
        let t = truncated_polynomial(5, 3);
        let z = Subspace::zero(t.prime(), 3);
        assert!(star_span(&t, SpanSpec::Full, &z).is_zero());
        let full = Subspace::full(t.prime(), 3);
        assert!(star_span(&t, SpanSpec::Sub(&z), &full).is_zero());
    }
}
