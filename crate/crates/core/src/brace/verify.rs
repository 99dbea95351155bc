use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{BraceError, BraceOps, BraceTable, Coords, Element, MAX_DIM};
use crate::exec::{Budget, Exec};
use crate::report::{Check, Mode, Report};

/// Names of the brace axiom checks, in report order.
pub const AXIOMS: [&str; 7] = [
    "additive_group",
    "identity",
    "inverses",
    "associativity",
    "compatibility",
    "star_left_law",
    "star_right_additivity",
];

/// Largest cardinality for which full circle/star tables are materialized.
const MAX_TABLE_ORDER: usize = 4096;
/// SWAR addition packs one coordinate per 8-bit lane, or per 4-bit lane when
/// `n > 4`; a lane of width `w` works for `p ≤ 2^{w−1}`.
const MAX_PACKED_PRIME: u32 = 64;

/// Dense circle, star and addition tables plus byte-packed coordinates.
///
/// Packed values let the triple loops compare sums without converting back
/// to indices.
pub struct CayleyTables {
    order: usize,
    circle: Vec<u16>,
    star: Vec<u16>,
    add: Vec<u16>,
    /// Index of `λ_a(b) = a∘b − a`, row-major.
    lambda: Vec<u16>,
    /// Packed `λ_a(b)`.
    plambda: Vec<u32>,
    packed: Vec<u32>,
    /// `2^{w−1} − p` in every lane of width `w`.
    reduce_bias: u32,
    high_bits: u32,
    lane_shift: u32,
    p: u32,
}

impl CayleyTables {
    pub fn build<B: BraceOps>(brace: &B, exec: Exec) -> Result<Self, BraceError> {
        let coords = brace.coords();
        let order = coords.order();
        let p = coords.prime().get();
        let n = coords.dim();
        let width = if n <= 4 { 8 } else { 4 };
        if order > MAX_TABLE_ORDER || p > MAX_PACKED_PRIME || n * width > 32 || p > 1 << (width - 1) {
            return Err(BraceError::TooLarge(order as u64));
        }
        let rows = exec.map(order, |a| {
            let a = Element::from_index(a);
            let mut circle = Vec::with_capacity(order);
            let mut star = Vec::with_capacity(order);
            let mut add = Vec::with_capacity(order);
            let mut lambda = Vec::with_capacity(order);
            for b in coords.elements() {
                let ab = brace.circle(a, b);
                let lam = coords.sub(ab, a);
                circle.push(ab.index() as u16);
                star.push(coords.sub(lam, b).index() as u16);
                add.push(coords.add(a, b).index() as u16);
                lambda.push(lam.index() as u16);
            }
            (circle, star, add, lambda)
        });
        let mut t = CayleyTables {
            order,
            circle: Vec::with_capacity(order * order),
            star: Vec::with_capacity(order * order),
            add: Vec::with_capacity(order * order),
            lambda: Vec::with_capacity(order * order),
            plambda: Vec::new(),
            packed: coords.elements().map(|e| pack(coords, e, width)).collect(),
            reduce_bias: 0,
            high_bits: 0,
            lane_shift: width as u32 - 1,
            p,
        };
        for (c, s, a, l) in rows {
            t.circle.extend(c);
            t.star.extend(s);
            t.add.extend(a);
            t.lambda.extend(l);
        }
        let top = 1u32 << (width - 1);
        for lane in 0..n {
            t.reduce_bias |= (top - p) << (width * lane);
            t.high_bits |= top << (width * lane);
        }
        let neg: Vec<u32> = coords.elements().map(|e| t.packed[coords.neg(e).index()]).collect();
        t.plambda = (0..order * order).map(|ab| t.padd(t.packed[t.circle[ab] as usize], neg[ab / order])).collect();
        Ok(t)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    fn row<'a>(&self, table: &'a [u16], a: usize) -> &'a [u16] {
        &table[a * self.order..(a + 1) * self.order]
    }

    /// Coordinatewise sum of two packed vectors, reduced mod p per lane.
    #[inline(always)]
    fn padd(&self, x: u32, y: u32) -> u32 {
        let s = x + y;
        let over = ((s + self.reduce_bias) & self.high_bits) >> self.lane_shift;
        s - over * self.p
    }

    /// [`Self::padd`] with the lane width fixed at compile time.
    #[inline(always)]
    fn padd_w<const W: u32>(&self, x: u32, y: u32) -> u32 {
        let s = x + y;
        let high = if W == 8 { 0x8080_8080 } else { 0x8888_8888 };
        let over = ((s + self.reduce_bias) & high) >> (W - 1);
        s - over * self.p
    }

    pub fn circle(&self, a: usize, b: usize) -> usize {
        self.circle[a * self.order + b] as usize
    }

    /// Scans all `(b, c)` for a fixed `a`; returns the first failing `(b, c)`
    /// for each of associativity, compatibility, and the two star laws.
    ///
    /// The tables satisfy `x∘y = x + λ_x(y)` and `x*y = λ_x(y) − y` by
    /// construction, so each law is evaluated in an exactly equivalent
    /// λ-form:
    ///
    /// - `a*(b+c) = a*b + a*c` and `a∘(b+c) + a = a∘b + a∘c` both read
    ///   `λ_a(b+c) = λ_a(b) + λ_a(c)`, which is symmetric in `b, c`, so
    ///   `c ≥ b` suffices;
    /// - associativity reads `λ_{a∘b}(c) + λ_a(b) = λ_a(b + λ_b(c))`;
    /// - `(a+b+a*b)*c = a*c + b*c + a*(b*c)` reads
    ///   `λ_{a∘b}(c) = λ_a(c) + λ_a(λ_b(c) − c)`.
    ///
    /// Once the first law holds for every `(b, c)`, `λ_a` is additive and the
    /// other two both reduce to `λ_{a∘b}(c) = λ_a(λ_b(c))` triple by triple,
    /// which is compared on indices alone.
    fn scan(&self, a: usize) -> [Option<(usize, usize)>; 4] {
        if self.lane_shift == 7 {
            self.scan_w::<8>(a)
        } else {
            self.scan_w::<4>(a)
        }
    }

    fn scan_w<const W: u32>(&self, a: usize) -> [Option<(usize, usize)>; 4] {
        let n = self.order;
        let plam_a = &self.plambda[a * n..(a + 1) * n];
        // SAFETY: every table entry is an element index below `order`,
        // which is the length of every row.
        let hot = |i: u16| unsafe { *plam_a.get_unchecked(i as usize) };
        let additive = (0..n).all(|b| {
            let add_b = self.row(&self.add, b);
            let la_b = plam_a[b];
            let mut bad = false;
            for c in b..n {
                bad |= hot(add_b[c]) != self.padd_w::<W>(la_b, plam_a[c]);
            }
            !bad
        });
        if additive {
            self.scan_additive(a)
        } else {
            self.scan_general::<W>(a)
        }
    }

    fn scan_additive(&self, a: usize) -> [Option<(usize, usize)>; 4] {
        let mut found: [Option<(usize, usize)>; 4] = [None; 4];
        let n = self.order;
        let circ_a = self.row(&self.circle, a);
        let lam_a = self.row(&self.lambda, a);
        // SAFETY: as in `scan_w`.
        let hot = |i: u16| unsafe { *lam_a.get_unchecked(i as usize) };
        for b in 0..n {
            let lam_ab = self.row(&self.lambda, circ_a[b] as usize);
            let lam_b = self.row(&self.lambda, b);
            let mut bad = false;
            for c in 0..n {
                bad |= lam_ab[c] != hot(lam_b[c]);
            }
            if bad {
                self.locate(a, b, &mut found);
                if found.iter().all(Option::is_some) {
                    break;
                }
            }
        }
        found
    }

    fn scan_general<const W: u32>(&self, a: usize) -> [Option<(usize, usize)>; 4] {
        let mut found: [Option<(usize, usize)>; 4] = [None; 4];
        let n = self.order;
        let circ_a = self.row(&self.circle, a);
        let lam_a = &self.plambda[a * n..(a + 1) * n];
        // SAFETY: as in `scan_w`.
        let hot = |i: u16| unsafe { *lam_a.get_unchecked(i as usize) };
        for b in 0..n {
            let ab = circ_a[b] as usize;
            let circ_b = self.row(&self.circle, b);
            let star_b = self.row(&self.star, b);
            let add_b = self.row(&self.add, b);
            let lam_ab = &self.plambda[ab * n..(ab + 1) * n];
            let la_b = lam_a[b];
            let mut bad = false;
            for c in 0..n {
                let x = lam_ab[c];
                bad |= self.padd_w::<W>(x, la_b) != hot(circ_b[c]);
                bad |= x != self.padd_w::<W>(lam_a[c], hot(star_b[c]));
            }
            for c in b..n {
                bad |= hot(add_b[c]) != self.padd_w::<W>(la_b, lam_a[c]);
            }
            if bad {
                self.locate(a, b, &mut found);
                if found.iter().all(Option::is_some) {
                    break;
                }
            }
        }
        found
    }

    /// Slow rescan of one `(a, b)` row to record the lowest failing `c`.
    fn locate(&self, a: usize, b: usize, found: &mut [Option<(usize, usize)>; 4]) {
        let pk = &self.packed;
        let ab = self.circle(a, b);
        for c in 0..self.order {
            let bc = self.add[b * self.order + c] as usize;
            let sb = self.star[b * self.order + c] as usize;
            let st = |x: usize, y: usize| self.star[x * self.order + y] as usize;
            let ok = [
                self.circle(ab, c) == self.circle(a, self.circle(b, c)),
                self.padd(pk[self.circle(a, bc)], pk[a]) == self.padd(pk[ab], pk[self.circle(a, c)]),
                pk[st(ab, c)] == self.padd(self.padd(pk[st(a, c)], pk[sb]), pk[st(a, sb)]),
                pk[st(a, bc)] == self.padd(pk[st(a, b)], pk[st(a, c)]),
            ];
            for (slot, ok) in found.iter_mut().zip(ok) {
                if !ok && slot.is_none() {
                    *slot = Some((b, c));
                }
            }
        }
    }
}

fn pack(coords: &Coords, e: Element, width: usize) -> u32 {
    let d = coords.digits(e);
    d[..coords.dim()].iter().enumerate().fold(0u32, |acc, (j, &x)| acc | (x as u32) << (width * j))
}

fn triple_witness(a: Element, b: Element, c: Element) -> Vec<u64> {
    vec![a.into(), b.into(), c.into()]
}

/// Checks every brace axiom. `Mode::Full` iterates all `p^{3n}` triples
/// over dense tables; `Mode::Sampled` draws seeded uniform triples. The
/// identity and inverse checks are always exhaustive.
pub fn verify_brace_axioms<B: BraceOps>(
    brace: &B,
    mode: Mode,
    exec: Exec,
    budget: Budget,
) -> Result<Report, BraceError> {
    let coords = brace.coords();
    let order = coords.order();
    let structural = Check::pass("additive_group").with_detail(format!(
        "F_{}^{} coordinates: abelian of exponent p",
        coords.prime(),
        coords.dim()
    ));
    let identity = Check::from_witness(
        "identity",
        coords
            .elements()
            .find(|&a| brace.circle(Element::ZERO, a) != a || brace.circle(a, Element::ZERO) != a)
            .map(|a| vec![a.into()]),
    );
    let inverses = Check::from_witness(
        "inverses",
        coords
            .elements()
            .find(|&a| match brace.circle_inv(a) {
                Some(x) => brace.circle(a, x) != Element::ZERO || brace.circle(x, a) != Element::ZERO,
                None => true,
            })
            .map(|a| vec![a.into()]),
    );

    let mut witnesses: [Option<Vec<u64>>; 4] = Default::default();
    let mut examined = 0u64;
    let mut complete = true;
    match mode {
        Mode::Full => {
            let tables = CayleyTables::build(brace, exec)?;
            let per_a = exec.map(order, |a| if budget.exceeded() { None } else { Some(tables.scan(a)) });
            for (a, res) in per_a.into_iter().enumerate() {
                let Some(found) = res else {
                    complete = false;
                    continue;
                };
                examined += (order * order) as u64;
                for (slot, f) in witnesses.iter_mut().zip(found) {
                    if slot.is_none() {
                        *slot = f.map(|(b, c)| {
                            triple_witness(Element::from_index(a), Element::from_index(b), Element::from_index(c))
                        });
                    }
                }
            }
        }
        Mode::Sampled { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let c_ = coords;
            for i in 0..count {
                if i % 4096 == 0 && budget.exceeded() {
                    complete = false;
                    break;
                }
                let a = Element::from_index(rng.gen_range(0..order));
                let b = Element::from_index(rng.gen_range(0..order));
                let c = Element::from_index(rng.gen_range(0..order));
                examined += 1;
                let ab = brace.circle(a, b);
                let ok = [
                    brace.circle(ab, c) == brace.circle(a, brace.circle(b, c)),
                    c_.add(brace.circle(a, c_.add(b, c)), a) == c_.add(ab, brace.circle(a, c)),
                    brace.star(c_.add(c_.add(a, b), brace.star(a, b)), c)
                        == c_.add(c_.add(brace.star(a, c), brace.star(b, c)), brace.star(a, brace.star(b, c))),
                    brace.star(a, c_.add(b, c)) == c_.add(brace.star(a, b), brace.star(a, c)),
                ];
                for (slot, ok) in witnesses.iter_mut().zip(ok) {
                    if !ok && slot.is_none() {
                        *slot = Some(triple_witness(a, b, c));
                    }
                }
            }
        }
    }

    let mut checks = vec![structural, identity, inverses];
    for (name, w) in AXIOMS[3..].iter().zip(witnesses) {
        checks.push(Check::from_witness(*name, w));
    }
    Ok(Report { checks, examined, complete, seed: mode.seed() })
}

/// `a*(αb) = α(a*b)` for every element `a`, basis vector `b` and scalar `α`.
pub fn verify_fp_linearity<B: BraceOps>(brace: &B) -> Report {
    let coords = brace.coords();
    let p = coords.prime().get() as u16;
    let mut witness = None;
    'outer: for a in coords.elements() {
        for j in 0..coords.dim() {
            let b = coords.basis(j);
            let ab = brace.star(a, b);
            for alpha in 0..p {
                if brace.star(a, coords.scale(alpha, b)) != coords.scale(alpha, ab) {
                    witness = Some(vec![a.into(), b.into(), alpha as u64]);
                    break 'outer;
                }
            }
        }
    }
    let mut r = Report::new(vec![Check::from_witness("fp_homogeneity", witness)]);
    r.examined = (coords.order() * coords.dim() * p as usize) as u64;
    r
}

fn lambda_product_matches(brace: &BraceTable, a: Element, b: Element) -> bool {
    let ab = brace.circle(a, b);
    let n = brace.dim();
    let (la, lb, lab) = (brace.lambda(a), brace.lambda(b), brace.lambda(ab));
    let p = brace.prime().get();
    debug_assert!(n <= MAX_DIM);
    for r in 0..n {
        for c in 0..n {
            let acc: u32 = (0..n).map(|k| la.get(r, k) as u32 * lb.get(k, c) as u32).sum();
            if (acc % p) as u16 != lab.get(r, c) {
                return false;
            }
        }
    }
    true
}

/// `λ(a∘b) = λ(a)·λ(b)` over all pairs or a seeded sample of pairs.
pub fn verify_lambda_homomorphism(brace: &BraceTable, mode: Mode, exec: Exec, budget: Budget) -> Report {
    let order = brace.order();
    let mut complete = true;
    let mut examined = 0u64;
    let witness = match mode {
        Mode::Full => {
            let rows = exec.map(order, |a| {
                if budget.exceeded() {
                    return None;
                }
                let a = Element::from_index(a);
                Some(brace.elements().find(|&b| !lambda_product_matches(brace, a, b)).map(|b| (a, b)))
            });
            let mut first = None;
            for r in rows {
                match r {
                    None => complete = false,
                    Some(found) => {
                        examined += order as u64;
                        if first.is_none() {
                            first = found;
                        }
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
                let a = Element::from_index(rng.gen_range(0..order));
                let b = Element::from_index(rng.gen_range(0..order));
                examined += 1;
                if !lambda_product_matches(brace, a, b) {
                    first = Some((a, b));
                    break;
                }
            }
            first
        }
    };
    Report {
        checks: vec![Check::from_witness("lambda_homomorphism", witness.map(|(a, b)| vec![a.into(), b.into()]))],
        examined,
        complete,
        seed: mode.seed(),
    }
}
