use braceforge::prelie::{plproduct, prelie_chains, prelie_nilpotency, verify_prelie_identity, PreLieAlgebra};
use braceforge::{FpVector, Prime, Subspace};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn identity_holds_for_every_parameter_triple() {
    for p in [5u32, 7] {
        let prime = Prime::new(p).unwrap();
        let q = p as i64;
        for j in 0..q {
            for k in 0..q {
                for y in 1..q {
                    let v = PreLieAlgebra::new(prime, j, k, y).unwrap();
                    assert!(verify_prelie_identity(&v).passed(), "p={p} j={j} k={k} y={y}");
                    let n = prelie_nilpotency(&v);
                    assert!(n.left && !n.right);
                }
            }
        }
    }
}

#[test]
fn product_is_bilinear() {
    let p = Prime::new(7).unwrap();
    let v = PreLieAlgebra::new(p, 3, 5, 2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut rand_vec = || FpVector::from_ints(p, &[(); 4].map(|_| rng.gen_range(0..7)));
    for _ in 0..500 {
        let (a, b, c) = (rand_vec(), rand_vec(), rand_vec());
        assert_eq!(plproduct(&v, &a.add(&b), &c), plproduct(&v, &a, &c).add(&plproduct(&v, &b, &c)));
        assert_eq!(plproduct(&v, &a, &b.add(&c)), plproduct(&v, &a, &b).add(&plproduct(&v, &a, &c)));
    }
}

#[test]
fn basis_chains_match_elementwise_spans() {
    let p = Prime::new(5).unwrap();
    let v = PreLieAlgebra::new(p, 1, 2, 3).unwrap();
    let (left, right) = prelie_chains(&v);
    let full = Subspace::full(p, 4);
    let by_elements = |l: &Subspace, r: &Subspace| {
        let mut out = Subspace::zero(p, 4);
        for a in l.elements() {
            for b in r.elements() {
                let prod = plproduct(
                    &v,
                    &FpVector::from_ints(p, &a.iter().map(|&x| x as i64).collect::<Vec<_>>()),
                    &FpVector::from_ints(p, &b.iter().map(|&x| x as i64).collect::<Vec<_>>()),
                );
                out.insert(prod.coords());
            }
        }
        out
    };
    for w in left.windows(2) {
        assert_eq!(by_elements(&full, &w[0]), w[1]);
    }
    for w in right.windows(2) {
        assert_eq!(by_elements(&w[0], &full), w[1]);
    }
    assert_eq!(right.last().unwrap(), &Subspace::span_rows(p, 4, [[1u16, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1]]));
}
