//! The four-parameter family of F_p-braces of order p^4 with circle group XV.
//!
//! The circle group is generated by four 5×5 matrices acting on
//! `F_p·1 ⊕ B`, `B = F_p R′ + F_p Q′ + F_p P′ + F_p S′`. The map
//! `f(g) = M_g e₁ − e₁` is a bijective 1-cocycle onto `B`, and the brace is
//! obtained by transporting the group to `B` along `f`.

use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::brace::{default_basis_names, BraceError, BraceOps, BraceTable, Element};
use crate::chains::left_chain;
use crate::linalg::{FpMatrix, FpScalar, FpVector, LinalgError, Prime};
use crate::report::{Check, Report};
use crate::subspace::Subspace;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FamilyError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("relation failure: {0}")]
    RelationFailure(String),
    #[error("not a family brace: {0}")]
    NotFamily(String),
    #[error(transparent)]
    Brace(#[from] BraceError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// `(p, y, i, k)` with `p > 3` prime and `y ≠ 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FamilyParams {
    p: Prime,
    y: FpScalar,
    i: FpScalar,
    k: FpScalar,
}

impl Serialize for FamilyParams {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            p: u32,
            y: u16,
            i: u16,
            k: u16,
        }
        Repr { p: self.p.get(), y: self.y.value(), i: self.i.value(), k: self.k.value() }.serialize(s)
    }
}

impl fmt::Display for FamilyParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p={} y={} i={} k={}", self.p, self.y, self.i, self.k)
    }
}

impl FamilyParams {
    pub fn new(p: u32, y: i64, i: i64, k: i64) -> Result<Self, FamilyError> {
        let prime = match Prime::new(p) {
            Ok(q) if p > 3 => q,
            _ => return Err(FamilyError::InvalidParams("p must be prime > 3".into())),
        };
        let y = prime.scalar(y);
        if y.is_zero() {
            return Err(FamilyError::InvalidParams("y must be nonzero mod p".into()));
        }
        Ok(FamilyParams { p: prime, y, i: prime.scalar(i), k: prime.scalar(k) })
    }

    /// Every admissible triple at `p`, ordered by `(y, i, k)`.
    pub fn all(p: u32) -> Result<Vec<FamilyParams>, FamilyError> {
        FamilyParams::new(p, 1, 0, 0)?;
        let q = p as i64;
        let mut out = Vec::with_capacity(((q - 1) * q * q) as usize);
        for y in 1..q {
            for i in 0..q {
                for k in 0..q {
                    out.push(FamilyParams::new(p, y, i, k)?);
                }
            }
        }
        Ok(out)
    }

    pub fn p(&self) -> Prime {
        self.p
    }

    pub fn y(&self) -> FpScalar {
        self.y
    }

    pub fn i(&self) -> FpScalar {
        self.i
    }

    pub fn k(&self) -> FpScalar {
        self.k
    }

    /// `2^{-1} y`.
    pub fn half_y(&self) -> FpScalar {
        self.p.scalar(2).inv().expect("p is odd") * self.y
    }
}

/// Generators in normal-form order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Gen {
    R,
    Q,
    P,
    S,
}

impl Gen {
    pub const ALL: [Gen; 4] = [Gen::R, Gen::Q, Gen::P, Gen::S];

    /// Position in the `(R, Q, P, S)` basis.
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn label(self) -> &'static str {
        ["R", "Q", "P", "S"][self.index()]
    }
}

/// `M_P, M_Q, M_R, M_S` in the basis `e₁ = 1, e₂ = R′, e₃ = Q′, e₄ = P′, e₅ = S′`.
/// Column `j` of `M_g` is `λ_g(e_j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorMatrices {
    pub p: Prime,
    pub m_r: FpMatrix,
    pub m_q: FpMatrix,
    pub m_p: FpMatrix,
    pub m_s: FpMatrix,
}

impl GeneratorMatrices {
    pub fn get(&self, g: Gen) -> &FpMatrix {
        match g {
            Gen::R => &self.m_r,
            Gen::Q => &self.m_q,
            Gen::P => &self.m_p,
            Gen::S => &self.m_s,
        }
    }

    pub fn get_mut(&mut self, g: Gen) -> &mut FpMatrix {
        match g {
            Gen::R => &mut self.m_r,
            Gen::Q => &mut self.m_q,
            Gen::P => &mut self.m_p,
            Gen::S => &mut self.m_s,
        }
    }
}

pub fn generator_matrices(params: &FamilyParams) -> GeneratorMatrices {
    let p = params.p;
    let y = params.y.value() as i64;
    let hy = params.half_y().value() as i64;
    let (i, k) = (params.i.value() as i64, params.k.value() as i64);
    let m = |rows: [[i64; 5]; 5]| FpMatrix::from_rows(p, &rows).expect("5x5 literal");
    GeneratorMatrices {
        p,
        m_p: m([[1, 0, 0, 0, 0], [0, 1, 0, 0, 0], [0, 0, 1, 0, 0], [1, 0, 0, 1, 0], [0, y, 0, 0, 1]]),
        m_q: m([[1, 0, 0, 0, 0], [0, 1, 0, 0, 0], [1, 0, 1, 0, 0], [0, 0, 0, 1, 0], [0, hy, -y, 0, 1]]),
        m_r: m([[1, 0, 0, 0, 0], [1, 1, 0, 0, 0], [0, 0, 1, 0, 0], [0, i, 0, 1, 0], [0, k, hy, y, 1]]),
        m_s: m([[1, 0, 0, 0, 0], [0, 1, 0, 0, 0], [0, -1, 1, 0, 0], [0, 1, -1, 1, 0], [1, -hy, 0, 0, 1]]),
    }
}

/// Named matrix identities of the presentation, as `(name, lhs, rhs)` words.
const RELATIONS: [(&str, &[Gen], &[Gen]); 6] = [
    ("QS=SQP", &[Gen::Q, Gen::S], &[Gen::S, Gen::Q, Gen::P]),
    ("QR=RQ", &[Gen::Q, Gen::R], &[Gen::R, Gen::Q]),
    ("PS=SP", &[Gen::P, Gen::S], &[Gen::S, Gen::P]),
    ("PQ=QP", &[Gen::P, Gen::Q], &[Gen::Q, Gen::P]),
    ("PR=RP", &[Gen::P, Gen::R], &[Gen::R, Gen::P]),
    ("RS=SRQ", &[Gen::R, Gen::S], &[Gen::S, Gen::R, Gen::Q]),
];

fn word(mats: &GeneratorMatrices, w: &[Gen]) -> Result<FpMatrix, LinalgError> {
    FpMatrix::product(mats.p, 5, w.iter().map(|&g| mats.get(g)))
}

fn matrix_check(name: &str, ok: Result<bool, LinalgError>) -> Check {
    match ok {
        Ok(true) => Check::pass(name),
        Ok(false) => Check { name: name.into(), passed: false, witness: None, detail: None },
        Err(e) => Check { name: name.into(), passed: false, witness: None, detail: Some(e.to_string()) },
    }
}

/// The six commutation relations and the four `p`-th power identities.
pub fn verify_generator_relations(mats: &GeneratorMatrices, p: Prime) -> Report {
    let mut checks: Vec<Check> = RELATIONS
        .iter()
        .map(|(name, l, r)| matrix_check(name, word(mats, l).and_then(|a| Ok(a == word(mats, r)?))))
        .collect();
    for g in [Gen::P, Gen::Q, Gen::R, Gen::S] {
        let ok = mats.get(g).pow(p.get() as u64).map(|m| m.is_identity());
        checks.push(matrix_check(&format!("{}^p=Id", g.label()), ok));
    }
    Report::new(checks)
}

/// Exponents of `R^α ∘ Q^β ∘ P^γ ∘ S^ξ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct NormalForm {
    pub alpha: u16,
    pub beta: u16,
    pub gamma: u16,
    pub xi: u16,
}

impl NormalForm {
    pub const IDENTITY: NormalForm = NormalForm { alpha: 0, beta: 0, gamma: 0, xi: 0 };

    pub fn new(alpha: u16, beta: u16, gamma: u16, xi: u16) -> Self {
        NormalForm { alpha, beta, gamma, xi }
    }

    pub fn index(&self, p: Prime) -> usize {
        let p = p.get() as usize;
        ((self.alpha as usize * p + self.beta as usize) * p + self.gamma as usize) * p + self.xi as usize
    }

    pub fn from_index(p: Prime, idx: usize) -> Self {
        let q = p.get() as usize;
        NormalForm {
            alpha: (idx / (q * q * q) % q) as u16,
            beta: (idx / (q * q) % q) as u16,
            gamma: (idx / q % q) as u16,
            xi: (idx % q) as u16,
        }
    }

    pub fn exponents(&self) -> [u16; 4] {
        [self.alpha, self.beta, self.gamma, self.xi]
    }
}

type Mat5 = [u16; 25];

fn to_mat5(m: &FpMatrix) -> Mat5 {
    m.data().try_into().expect("generator matrices are 5x5")
}

#[inline]
fn mul5(p: u32, a: &Mat5, b: &Mat5) -> Mat5 {
    let mut out = [0u16; 25];
    for r in 0..5 {
        for c in 0..5 {
            let mut acc = 0u32;
            for t in 0..5 {
                acc += a[r * 5 + t] as u32 * b[t * 5 + c] as u32;
            }
            out[r * 5 + c] = (acc % p) as u16;
        }
    }
    out
}

/// `M e₁ − e₁` as `(R′, Q′, P′, S′)` coordinates.
#[inline]
fn f_of(m: &Mat5) -> [u16; 4] {
    [m[5], m[10], m[15], m[20]]
}

fn f_index(p: u32, v: &[u16; 4]) -> usize {
    v.iter().fold(0usize, |acc, &x| acc * p as usize + x as usize)
}

/// The `p^4` matrices `M_R^α M_Q^β M_P^γ M_S^ξ`, indexed by normal form.
#[derive(Clone, Debug)]
pub struct XvGroup {
    p: Prime,
    mats: Vec<Mat5>,
}

impl XvGroup {
    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn len(&self) -> usize {
        self.mats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mats.is_empty()
    }

    pub fn matrix(&self, nf: NormalForm) -> FpMatrix {
        let m = &self.mats[nf.index(self.p)];
        FpMatrix::from_flat(self.p, 5, 5, &m.iter().map(|&x| x as i64).collect::<Vec<_>>()).expect("5x5")
    }

    pub fn iter(&self) -> impl Iterator<Item = (NormalForm, FpMatrix)> + '_ {
        (0..self.len()).map(|idx| {
            let nf = NormalForm::from_index(self.p, idx);
            (nf, self.matrix(nf))
        })
    }

    /// Normal form of an enumerated matrix.
    pub fn locate(&self, m: &FpMatrix) -> Option<NormalForm> {
        let key = to_mat5(m);
        self.mats.iter().position(|x| *x == key).map(|idx| NormalForm::from_index(self.p, idx))
    }
}

fn powers(p: u32, m: &Mat5) -> Vec<Mat5> {
    let mut out = Vec::with_capacity(p as usize);
    let mut cur = to_mat5(&FpMatrix::identity(Prime::new(p).expect("prime"), 5));
    for _ in 0..p {
        out.push(cur);
        cur = mul5(p, &cur, m);
    }
    out
}

/// Enumerates the group and checks the `p^4` products are pairwise distinct.
pub fn enumerate_group(mats: &GeneratorMatrices) -> Result<XvGroup, FamilyError> {
    let p = mats.p.get();
    let pw: Vec<Vec<Mat5>> = Gen::ALL.iter().map(|&g| powers(p, &to_mat5(mats.get(g)))).collect();
    let q = p as usize;
    let mut out = Vec::with_capacity(q.pow(4));
    for a in 0..q {
        for b in 0..q {
            let rq = mul5(p, &pw[0][a], &pw[1][b]);
            for c in 0..q {
                let rqp = mul5(p, &rq, &pw[2][c]);
                for d in 0..q {
                    out.push(mul5(p, &rqp, &pw[3][d]));
                }
            }
        }
    }
    let mut sorted = out.clone();
    sorted.sort_unstable();
    if let Some(w) = sorted.windows(2).position(|w| w[0] == w[1]) {
        let dup = out.iter().position(|x| *x == sorted[w]).expect("present");
        return Err(FamilyError::RelationFailure(format!(
            "normal forms collide at {:?}",
            NormalForm::from_index(mats.p, dup)
        )));
    }
    Ok(XvGroup { p: mats.p, mats: out })
}

/// `f(g) = λ_g(1) − 1` in `(R′, Q′, P′, S′)` coordinates.
pub fn cocycle_f(mats: &GeneratorMatrices, nf: NormalForm) -> FpVector {
    let p = mats.p;
    let m = FpMatrix::product(
        p,
        5,
        [
            mats.m_r.pow(nf.alpha as u64).expect("square"),
            mats.m_q.pow(nf.beta as u64).expect("square"),
            mats.m_p.pow(nf.gamma as u64).expect("square"),
            mats.m_s.pow(nf.xi as u64).expect("square"),
        ]
        .iter(),
    )
    .expect("5x5");
    let c: Vec<i64> = (1..5).map(|r| m.get(r, 0) as i64).collect();
    FpVector::from_ints(p, &c)
}

/// Bijectivity of `f`, closure of the enumerated set, and
/// `f(g∘h) = f(g) + λ_g(f(h))` over all pairs.
///
/// Products are located in the enumeration through `f` itself, so a failure
/// of injectivity is reported before the pair loop runs.
pub fn verify_cocycle(mats: &GeneratorMatrices, p: Prime) -> Report {
    let fail =
        |name: &str, detail: String| Check { name: name.into(), passed: false, witness: None, detail: Some(detail) };
    let group = match enumerate_group(mats) {
        Ok(g) => g,
        Err(e) => {
            return Report::new(vec![fail("f_bijective", e.to_string()), fail("cocycle", "not evaluated".into())]);
        }
    };
    let q = p.get();
    let n = group.len();
    let mut by_f = vec![usize::MAX; n];
    let mut bij = Check::pass("f_bijective");
    for (idx, m) in group.mats.iter().enumerate() {
        let slot = &mut by_f[f_index(q, &f_of(m))];
        if *slot != usize::MAX {
            bij = Check::fail("f_bijective", vec![*slot as u64, idx as u64]);
            break;
        }
        *slot = idx;
    }
    if !bij.passed {
        return Report::new(vec![bij, fail("cocycle", "not evaluated".into())]);
    }
    let mut witness = None;
    'outer: for (gi, g) in group.mats.iter().enumerate() {
        for (hi, h) in group.mats.iter().enumerate() {
            let gh = mul5(q, g, h);
            let fgh = f_of(&gh);
            // closure: the product must be the enumerated element with that f-value
            if group.mats[by_f[f_index(q, &fgh)]] != gh {
                witness = Some(vec![gi as u64, hi as u64]);
                break 'outer;
            }
            let fh = f_of(h);
            for r in 0..4 {
                let mut acc = g[(r + 1) * 5] as u32;
                for c in 0..4 {
                    acc += g[(r + 1) * 5 + c + 1] as u32 * fh[c] as u32;
                }
                if (acc % q) as u16 != fgh[r] {
                    witness = Some(vec![gi as u64, hi as u64]);
                    break 'outer;
                }
            }
        }
    }
    let mut report = Report::new(vec![bij, Check::from_witness("cocycle", witness)]);
    report.examined = (n * n) as u64;
    report
}

/// Assembles the brace: the element with coordinates `f(g)` gets λ equal to
/// the lower-right 4×4 block of `M_g`.
pub fn build_brace(params: &FamilyParams) -> Result<BraceTable, FamilyError> {
    Ok(assemble_brace(&generator_matrices(params))?.with_meta(*params))
}

/// [`build_brace`] for arbitrary generator matrices, which must satisfy the
/// relations and give a bijective `f`.
pub fn assemble_brace(mats: &GeneratorMatrices) -> Result<BraceTable, FamilyError> {
    let p = mats.p;
    let rel = verify_generator_relations(mats, p);
    if let Some(c) = rel.first_failure() {
        return Err(FamilyError::RelationFailure(c.name.clone()));
    }
    let group = enumerate_group(mats)?;
    let q = p.get();
    let mut lambda: Vec<Option<FpMatrix>> = vec![None; group.len()];
    for m in &group.mats {
        let slot = &mut lambda[f_index(q, &f_of(m))];
        if slot.is_some() {
            return Err(FamilyError::RelationFailure("f is not injective".into()));
        }
        let block: Vec<i64> = (1..5).flat_map(|r| (1..5).map(move |c| m[r * 5 + c] as i64)).collect();
        *slot = Some(FpMatrix::from_flat(p, 4, 4, &block)?);
    }
    let lambda = lambda.into_iter().map(|m| m.expect("f is bijective")).collect();
    Ok(BraceTable::from_lambda(p, 4, default_basis_names(4), lambda)?)
}

fn gen_element(brace: &BraceTable, g: Gen) -> Element {
    brace.basis_element(g.index())
}

/// The sixteen generator products, as `(R, Q, P, S)` coordinates.
pub fn expected_star(params: &FamilyParams, a: Gen, b: Gen) -> [i64; 4] {
    let y = params.y.value() as i64;
    let hy = params.half_y().value() as i64;
    let (i, k) = (params.i.value() as i64, params.k.value() as i64);
    use Gen::*;
    match (a, b) {
        (P, R) | (R, P) => [0, 0, 0, y],
        (Q, Q) => [0, 0, 0, -y],
        (Q, R) | (R, Q) => [0, 0, 0, hy],
        (R, R) => [0, 0, i, k],
        (S, Q) => [0, 0, -1, 0],
        (S, R) => [0, -1, 1, -hy],
        _ => [0, 0, 0, 0],
    }
}

/// Compares every `g*h` for generators `g, h` against the symbolic table.
pub fn verify_multiplicative_table(brace: &BraceTable, params: &FamilyParams) -> Report {
    let mut checks = Vec::with_capacity(16);
    for a in Gen::ALL {
        for b in Gen::ALL {
            let name = format!("{}*{}", a.label(), b.label());
            let got = brace.star(gen_element(brace, a), gen_element(brace, b));
            let want = brace.from_ints(&expected_star(params, a, b));
            checks.push(if got == want { Check::pass(name) } else { Check::fail(name, vec![got.into(), want.into()]) });
        }
    }
    Report::new(checks)
}

/// Peels off the `R`, `Q`, `P` and `S` exponents in turn.
///
/// The `R`-coordinate is additive under ∘ because `A*A ⊆ span{Q, P, S}`; the
/// same holds one layer down for `Q`, `P` and `S`.
pub fn normal_form(brace: &BraceTable, a: Element) -> Result<NormalForm, FamilyError> {
    if brace.dim() != 4 {
        return Err(FamilyError::NotFamily(format!("dimension {}", brace.dim())));
    }
    let mut rest = a;
    let mut exps = [0u16; 4];
    for g in Gen::ALL {
        let e = brace.coords().digits(rest)[g.index()];
        exps[g.index()] = e;
        let inv = brace.circle_pow(gen_element(brace, g), -(e as i64));
        rest = brace.circle(inv, rest);
        if brace.coords().digits(rest)[..=g.index()].iter().any(|&x| x != 0) {
            return Err(FamilyError::NotFamily(format!("peeling {} left {:?}", g.label(), rest)));
        }
    }
    if rest != Element::ZERO {
        return Err(FamilyError::NotFamily("nonzero remainder".into()));
    }
    Ok(NormalForm::new(exps[0], exps[1], exps[2], exps[3]))
}

/// `R^α ∘ Q^β ∘ P^γ ∘ S^ξ`.
pub fn from_normal_form(brace: &BraceTable, nf: NormalForm) -> Element {
    Gen::ALL
        .iter()
        .zip(nf.exponents())
        .fold(Element::ZERO, |acc, (&g, e)| brace.circle(acc, brace.circle_pow(gen_element(brace, g), e as i64)))
}

/// `(S*Q) * ((−1/y) R) = S`, which keeps `S` in every right-chain term.
pub fn witness_not_right_nilpotent(brace: &BraceTable, params: &FamilyParams) -> bool {
    let [r, q, s] = [Gen::R, Gen::Q, Gen::S].map(|g| gen_element(brace, g));
    let coef = (-params.y.inv().expect("y is nonzero")).value();
    brace.star(brace.star(s, q), brace.scale(coef, r)) == s
}

fn word_name(w: &[Gen]) -> String {
    w.iter().map(|g| g.label()).collect::<Vec<_>>().join("∘")
}

fn circle_word(brace: &BraceTable, w: &[Gen]) -> Element {
    w.iter().fold(Element::ZERO, |acc, &g| brace.circle(acc, gen_element(brace, g)))
}

/// The group relations as brace identities, together with their consequences
/// `w₁ * a = w₂ * a` for every generator `a`.
pub fn verify_presentation_constraints(brace: &BraceTable) -> Report {
    let mut checks = Vec::new();
    let mut push = |name: String, lhs: Element, rhs: Element| {
        checks.push(if lhs == rhs {
            Check::pass(name.clone())
        } else {
            Check::fail(name.clone(), vec![lhs.into(), rhs.into()])
        });
        let mut bad = None;
        for a in Gen::ALL {
            let x = gen_element(brace, a);
            let (u, v) = (brace.star(lhs, x), brace.star(rhs, x));
            if u != v {
                bad = Some(vec![x.into(), u.into(), v.into()]);
                break;
            }
        }
        checks.push(Check::from_witness(format!("({name})*a"), bad));
    };
    for (_, l, r) in RELATIONS {
        push(format!("{} = {}", word_name(l), word_name(r)), circle_word(brace, l), circle_word(brace, r));
    }
    let p = brace.prime().get() as i64;
    for g in Gen::ALL {
        push(format!("{}^p = 0", g.label()), brace.circle_pow(gen_element(brace, g), p), Element::ZERO);
    }
    Report::new(checks)
}

/// `Q*A^i ⊆ A^{i+2}` and `P*A^i ⊆ A^{i+3}` for `i = 1, 2`.
pub fn verify_filtration_corollaries(brace: &BraceTable) -> Report {
    let chain = left_chain(brace);
    let coords = brace.coords();
    let mut checks = Vec::new();
    for (g, shift) in [(Gen::Q, 2), (Gen::P, 3)] {
        let x = gen_element(brace, g);
        for i in 1..=2 {
            // `x*·` is additive, so images of a basis span `x*A^i`
            let span = Subspace::span_rows(
                brace.prime(),
                4,
                chain.term(i).basis().iter().map(|b| coords.digits(brace.star(x, coords.from_digits(b)))[..4].to_vec()),
            );
            let name = format!("{}*A^{i} ⊆ A^{}", g.label(), i + shift);
            checks.push(if span.is_subspace_of(chain.term(i + shift)) {
                Check::pass(name)
            } else {
                Check { name, passed: false, witness: None, detail: Some(format!("{span:?}")) }
            });
        }
    }
    Report::new(checks)
}

fn unit_row(g: Gen) -> [u16; 4] {
    let mut r = [0u16; 4];
    r[g.index()] = 1;
    r
}

/// `a*Q ∈ F_p·P` for every `a ∈ A^4`.
pub fn verify_a4_star_q(brace: &BraceTable) -> Report {
    let chain = left_chain(brace);
    let target = Subspace::span_rows(brace.prime(), 4, [unit_row(Gen::P)]);
    let q = gen_element(brace, Gen::Q);
    let coords = brace.coords();
    let bad = chain.term(4).elements().find_map(|v| {
        let a = coords.from_digits(&v);
        let x = brace.star(a, q);
        (!target.contains(&coords.digits(x)[..4])).then(|| vec![a.into(), x.into()])
    });
    let mut r = Report::new(vec![Check::from_witness("A^4*Q ⊆ F_p P", bad)]);
    r.examined = chain.term(4).cardinality();
    r
}
