use braceforge::analysis::{invariant_fingerprint, CommutatorCheck};
use braceforge::brace::QuarticInverse;
use braceforge::family::{from_normal_form, normal_form, NormalForm};
use braceforge::hol::{conjugate_brace, random_invertible};
use braceforge::prelie::PreLieAlgebra;
use braceforge::ybe::r;
use braceforge::{build_brace, BraceOps, BraceTable, Exec, FamilyParams, FpMatrix, FpVector, Prime, Subspace};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn five() -> Prime {
    Prime::new(5).unwrap()
}

fn params() -> impl Strategy<Value = FamilyParams> {
    (1i64..5, 0i64..5, 0i64..5).prop_map(|(y, i, k)| FamilyParams::new(5, y, i, k).unwrap())
}

fn brace_of(fp: FamilyParams) -> BraceTable {
    build_brace(&fp).unwrap()
}

fn vector(n: usize) -> impl Strategy<Value = FpVector> {
    proptest::collection::vec(0i64..5, n).prop_map(|v| FpVector::from_ints(five(), &v))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn span_is_independent_of_generating_set(
        rows in proptest::collection::vec(proptest::collection::vec(0u16..5, 5), 0..6),
        seed in any::<u64>(),
    ) {
        let p = five();
        let s = Subspace::span_rows(p, 5, &rows);
        for row in &rows {
            prop_assert!(s.contains(row));
        }
        // mixing the rows by an invertible matrix gives the same canonical form
        if !rows.is_empty() {
            let k = rows.len();
            let g = random_invertible(p, k, &mut ChaCha8Rng::seed_from_u64(seed));
            let m = FpMatrix::from_rows(p, &rows.iter().map(|r| r.iter().map(|&x| x as i64).collect::<Vec<_>>()).collect::<Vec<_>>()).unwrap();
            let mixed = g.matmul(&m).unwrap();
            prop_assert_eq!(&Subspace::row_space(&mixed), &s);
            prop_assert_eq!(s.dim(), m.rank());
        }
        prop_assert_eq!(s.cardinality(), 5u64.pow(s.dim() as u32));
    }

    #[test]
    fn normal_form_round_trips(fp in params(), idx in 0u64..625) {
        let b = brace_of(fp);
        let a = b.element(idx).unwrap();
        let nf = normal_form(&b, a).unwrap();
        prop_assert_eq!(from_normal_form(&b, nf), a);
        prop_assert_eq!(from_normal_form(&b, NormalForm::IDENTITY), b.element(0).unwrap());
    }

    #[test]
    fn lambda_is_an_additive_homomorphism(fp in params(), x in 0u64..625, y in 0u64..625, z in 0u64..625) {
        let b = brace_of(fp);
        let [x, y, z] = [x, y, z].map(|i| b.element(i).unwrap());
        prop_assert_eq!(b.lambda_apply(x, b.add(y, z)), b.add(b.lambda_apply(x, y), b.lambda_apply(x, z)));
        prop_assert_eq!(b.lambda_apply(b.circle(x, y), z), b.lambda_apply(x, b.lambda_apply(y, z)));
        // a∘(b+c) + a = a∘b + a∘c
        prop_assert_eq!(b.add(b.circle(x, b.add(y, z)), x), b.add(b.circle(x, y), b.circle(x, z)));
    }

    #[test]
    fn commutator_identity_and_quartic_inverse(fp in params(), x in 0u64..625, y in 0u64..625, z in 0u64..625) {
        let b = brace_of(fp);
        let [x, y, z] = [x, y, z].map(|i| b.element(i).unwrap());
        prop_assert!(CommutatorCheck::new(&b).unwrap().holds(x, y, z));
        let q = QuarticInverse::new(&b).unwrap();
        prop_assert_eq!(b.lambda_apply(x, q.apply(x, y)), y);
    }

    #[test]
    fn yang_baxter_map_is_involutive(fp in params(), x in 0u64..625, y in 0u64..625) {
        let b = brace_of(fp);
        let (x, y) = (b.element(x).unwrap(), b.element(y).unwrap());
        let (u, v) = r(&b, x, y);
        prop_assert_eq!(r(&b, u, v), (x, y));
    }

    #[test]
    fn prelie_product_is_bilinear(
        j in 0i64..5, k in 0i64..5, y in 1i64..5,
        a in vector(4), a2 in vector(4), c in vector(4), s in 0u16..5,
    ) {
        let v = PreLieAlgebra::new(five(), j, k, y).unwrap();
        prop_assert_eq!(v.product(&a.add(&a2), &c), v.product(&a, &c).add(&v.product(&a2, &c)));
        prop_assert_eq!(v.product(&c, &a.add(&a2)), v.product(&c, &a).add(&v.product(&c, &a2)));
        prop_assert_eq!(v.product(&a.scale(s), &c), v.product(&a, &c).scale(s));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(4))]

    #[test]
    fn fingerprint_survives_conjugation(fp in params(), seed in any::<u64>()) {
        let b = brace_of(fp);
        let gamma = random_invertible(five(), 4, &mut ChaCha8Rng::seed_from_u64(seed));
        let c = conjugate_brace(&b, &gamma).unwrap();
        prop_assert_eq!(invariant_fingerprint(&b, Exec::default()), invariant_fingerprint(&c, Exec::default()));
    }

    #[test]
    fn conjugating_back_restores_the_table(fp in params(), seed in any::<u64>()) {
        let b = brace_of(fp);
        let gamma = random_invertible(five(), 4, &mut ChaCha8Rng::seed_from_u64(seed));
        let there = conjugate_brace(&b, &gamma).unwrap();
        let back = conjugate_brace(&there, &gamma.inverse().unwrap()).unwrap();
        prop_assert_eq!(back.lambdas(), b.lambdas());
    }
}
