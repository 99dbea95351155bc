//! The involutive set-theoretic Yang–Baxter solution of a brace,
//! `r(x, y) = (λ_x(y), λ⁻¹_{λ_x(y)}(x))`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::brace::{BraceOps, BraceTable, Element};
use crate::exec::{Budget, Exec};
use crate::report::{Check, Mode, Report};

/// Orders up to this size get both components of `r` tabulated.
const MAX_TABULATED: usize = 4096;

pub fn r(brace: &BraceTable, x: Element, y: Element) -> (Element, Element) {
    let u = brace.lambda_apply(x, y);
    (u, brace.lambda_inv_apply(u, x))
}

pub struct Solution<'a> {
    brace: &'a BraceTable,
    order: usize,
    /// Row-major `(first, second)` components of `r`, when tabulated.
    table: Option<(Vec<u16>, Vec<u16>)>,
}

impl<'a> Solution<'a> {
    pub fn new(brace: &'a BraceTable, exec: Exec) -> Self {
        let order = brace.order();
        let table = (order <= MAX_TABULATED).then(|| {
            let rows = exec.map(order, |x| {
                let x = Element::from_index(x);
                brace
                    .elements()
                    .map(|y| {
                        let (u, v) = r(brace, x, y);
                        (u.index() as u16, v.index() as u16)
                    })
                    .unzip::<_, _, Vec<u16>, Vec<u16>>()
            });
            let mut first = Vec::with_capacity(order * order);
            let mut second = Vec::with_capacity(order * order);
            for (f, s) in rows {
                first.extend(f);
                second.extend(s);
            }
            (first, second)
        });
        Solution { brace, order, table }
    }

    pub fn brace(&self) -> &BraceTable {
        self.brace
    }

    #[inline]
    pub fn eval(&self, x: Element, y: Element) -> (Element, Element) {
        match &self.table {
            Some((f, s)) => {
                let i = x.index() * self.order + y.index();
                (Element::from_index(f[i] as usize), Element::from_index(s[i] as usize))
            }
            None => r(self.brace, x, y),
        }
    }

    /// `r₁₂ r₂₃ r₁₂` and `r₂₃ r₁₂ r₂₃` applied to `(x, y, z)`.
    pub fn braid_sides(&self, x: Element, y: Element, z: Element) -> ([Element; 3], [Element; 3]) {
        let (a, b) = self.eval(x, y);
        let (b, c) = self.eval(b, z);
        let (a, b) = self.eval(a, b);
        let (y1, z1) = self.eval(y, z);
        let (x2, y2) = self.eval(x, y1);
        let (y3, z3) = self.eval(y2, z1);
        ([a, b, c], [x2, y3, z3])
    }

    fn braid_holds(&self, x: Element, y: Element, z: Element) -> bool {
        let (l, r) = self.braid_sides(x, y, z);
        l == r
    }
}

/// `r(r(x, y)) = (x, y)` on all pairs.
pub fn verify_involutive(sol: &Solution<'_>, exec: Exec) -> Report {
    let n = sol.order;
    let w = exec.find_first(n, |x| {
        let xe = Element::from_index(x);
        (0..n).map(Element::from_index).find_map(|y| {
            let (u, v) = sol.eval(xe, y);
            (sol.eval(u, v) != (xe, y)).then(|| vec![x as u64, y.into()])
        })
    });
    let mut rep = Report::new(vec![Check::from_witness("involutive", w)]);
    rep.examined = (n * n) as u64;
    rep
}

/// `y ↦ λ_x(y)` is bijective for each `x`, and `x ↦ λ⁻¹_{λ_x(y)}(x)` is
/// bijective for each `y`.
pub fn verify_nondegenerate(sol: &Solution<'_>, exec: Exec) -> Report {
    let n = sol.order;
    let bijective = |f: &dyn Fn(Element) -> Element| {
        let mut seen = vec![false; n];
        (0..n).all(|i| !std::mem::replace(&mut seen[f(Element::from_index(i)).index()], true))
    };
    let left = exec.find_first(n, |x| (!bijective(&|y| sol.eval(Element::from_index(x), y).0)).then(|| vec![x as u64]));
    let right =
        exec.find_first(n, |y| (!bijective(&|x| sol.eval(x, Element::from_index(y)).1)).then(|| vec![y as u64]));
    Report::new(vec![
        Check::from_witness("left_nondegenerate", left),
        Check::from_witness("right_nondegenerate", right),
    ])
}

/// Braid relation `r₁₂ r₂₃ r₁₂ = r₂₃ r₁₂ r₂₃` on all or sampled triples.
pub fn verify_braid(sol: &Solution<'_>, mode: Mode, exec: Exec, budget: Budget) -> Report {
    let n = sol.order;
    let mut complete = true;
    let mut examined = 0u64;
    let witness = match mode {
        Mode::Full => {
            let per_x = exec.map(n, |x| {
                if budget.exceeded() {
                    return None;
                }
                let xe = Element::from_index(x);
                let found = (0..n * n).find_map(|t| {
                    let (y, z) = (Element::from_index(t / n), Element::from_index(t % n));
                    (!sol.braid_holds(xe, y, z)).then(|| vec![x as u64, y.into(), z.into()])
                });
                Some(found)
            });
            let mut first = None;
            for res in per_x {
                match res {
                    None => complete = false,
                    Some(w) => {
                        examined += (n * n) as u64;
                        first = first.or(w);
                    }
                }
            }
            first
        }
        Mode::Sampled { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut first = None;
            for i in 0..count {
                if i % 4096 == 0 && budget.exceeded() {
                    complete = false;
                    break;
                }
                let [x, y, z] = [(); 3].map(|_| Element::from_index(rng.gen_range(0..n)));
                examined += 1;
                if first.is_none() && !sol.braid_holds(x, y, z) {
                    first = Some(vec![x.into(), y.into(), z.into()]);
                }
            }
            first
        }
    };
    let mut check = Check::from_witness("braid", witness);
    if !complete {
        check.passed = false;
        check.detail = Some("time budget exhausted".into());
    }
    Report { checks: vec![check], examined, complete, seed: mode.seed() }
}
