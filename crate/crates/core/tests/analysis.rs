use std::time::Instant;

use braceforge::analysis::{brace_isomorphic, invariant_fingerprint, verify_isomorphism, CommutatorCheck, IsoOptions};
use braceforge::ideals::GroupClass;
use braceforge::{build_brace, BraceOps, BraceTable, Exec, FamilyParams, FpMatrix, Prime};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn family(p: u32, y: i64, i: i64, k: i64) -> BraceTable {
    build_brace(&FamilyParams::new(p, y, i, k).unwrap()).unwrap()
}

fn transport(t: &BraceTable, gamma: &FpMatrix) -> BraceTable {
    let gi = gamma.inverse().unwrap();
    BraceTable::from_lambda_fn(t.prime(), t.dim(), t.basis_names().to_vec(), |a| {
        let ga = t.from_vector(&gamma.mul_vec(a).unwrap());
        gi.matmul(&t.lambda(ga).matmul(gamma).unwrap()).unwrap()
    })
    .unwrap()
}

#[test]
fn commutator_of_r_and_s() {
    let a = family(5, 1, 0, 0);
    let c = CommutatorCheck::new(&a).unwrap();
    let (r, q, s) = (a.named("R").unwrap(), a.named("Q").unwrap(), a.named("S").unwrap());
    assert_eq!(c.commutator(r, s), q);
    assert_eq!(c.lhs(r, s, r), a.scale(3, s));
    assert!(c.holds(r, s, r));
    assert_eq!(c.lhs(r, r, s), a.from_ints(&[0, 0, 0, 0]));
    assert_eq!(c.rhs(r, r, s), a.from_ints(&[0, 0, 0, 0]));
}

#[test]
fn commutator_identity_on_random_triples() {
    for (n, (y, i, k)) in [(1, 0, 0), (2, 3, 4), (4, 1, 1), (3, 0, 2), (1, 4, 3)].into_iter().enumerate() {
        let a = family(5, y, i, k);
        let c = CommutatorCheck::new(&a).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(100 + n as u64);
        for _ in 0..10_000 {
            let [x, u, v] = [(); 3].map(|_| a.element(rng.gen_range(0..625)).unwrap());
            assert!(c.holds(x, u, v), "({y},{i},{k}) {x:?} {u:?} {v:?}");
        }
    }
}

#[test]
fn family_iso_against_transported_copy() {
    let a = family(5, 1, 0, 0);
    let p = Prime::new(5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..3 {
        let gamma = loop {
            let flat: Vec<i64> = (0..16).map(|_| rng.gen_range(0..5)).collect();
            let m = FpMatrix::from_flat(p, 4, 4, &flat).unwrap();
            if m.is_invertible() {
                break m;
            }
        };
        let b = transport(&a, &gamma);
        let t = Instant::now();
        let w = brace_isomorphic(&b, &a, a.basis_names(), IsoOptions::default()).unwrap().expect("isomorphic");
        eprintln!("transported iso: {:?}", t.elapsed());
        assert!(verify_isomorphism(&b, &a, &w.full_map, Exec::default()).all_passed());
        assert_eq!(w.images.len(), 4);
    }
}

#[test]
fn family_is_not_the_trivial_brace() {
    let a = family(5, 1, 0, 0);
    let z = BraceTable::trivial(a.prime(), 4).unwrap();
    assert_eq!(brace_isomorphic(&a, &z, a.basis_names(), IsoOptions::default()).unwrap(), None);
}

#[test]
fn family_fingerprint() {
    let a = family(5, 1, 0, 0);
    let f = invariant_fingerprint(&a, Exec::default());
    assert_eq!(f.left, vec![4, 3, 2, 1, 0]);
    assert_eq!(f.right, vec![4, 3, 3]);
    assert_eq!(f.group, Some(GroupClass::Xv));
    assert_eq!(f.prime, Some(true));
    assert_eq!(f.center_size, 5);
    assert_eq!(f.ideal_dims, Some(vec![0, 3, 4]));
    let z = invariant_fingerprint(&BraceTable::trivial(a.prime(), 4).unwrap(), Exec::default());
    assert_eq!((z.left.clone(), z.right.clone(), z.strong.clone()), (vec![4, 0], vec![4, 0], vec![4, 0]));
    assert_eq!(z.group, Some(GroupClass::Abelian));
    assert_eq!(z.prime, Some(false));
}

#[test]
fn cross_parameter_iso() {
    let a = family(5, 1, 0, 0);
    let b = family(5, 2, 3, 4);
    let t = Instant::now();
    let r = brace_isomorphic(&a, &b, a.basis_names(), IsoOptions::default()).unwrap();
    eprintln!("cross iso: {:?} found={}", t.elapsed(), r.is_some());
}

/// Existence of an isomorphism by brute force over all flag-preserving maps:
/// lower triangular matrices in the (R, Q, P, S) basis.
fn brute_force_iso(a: &BraceTable, b: &BraceTable) -> bool {
    let p = a.prime();
    let q = p.get() as i64;
    let basis: Vec<_> = (0..4).map(|j| a.basis_element(j)).collect();
    let slots = [(1, 0), (2, 0), (2, 1), (3, 0), (3, 1), (3, 2)];
    for diag in 0..(q - 1).pow(4) {
        for off in 0..q.pow(6) {
            let mut rows = [[0i64; 4]; 4];
            for (j, row) in rows.iter_mut().enumerate() {
                row[j] = diag / (q - 1).pow(j as u32) % (q - 1) + 1;
            }
            for (s, &(r, c)) in slots.iter().enumerate() {
                rows[r][c] = off / q.pow(s as u32) % q;
            }
            let m = FpMatrix::from_rows(p, &rows).unwrap();
            let phi = |e| b.from_vector(&m.mul_vec(&a.vector(e)).unwrap());
            let ok = basis.iter().all(|&x| basis.iter().all(|&y| phi(a.circle(x, y)) == b.circle(phi(x), phi(y))));
            if ok {
                let map: Vec<_> = a.elements().map(phi).collect();
                if verify_isomorphism(a, b, &map, Exec::default()).all_passed() {
                    return true;
                }
            }
        }
    }
    false
}

#[test]
fn search_agrees_with_brute_force() {
    let a = family(5, 1, 0, 0);
    for (y, i, k) in [(2, 3, 4), (4, 0, 0), (1, 1, 0), (1, 0, 1)] {
        let b = family(5, y, i, k);
        let found = brace_isomorphic(&a, &b, a.basis_names(), IsoOptions::default()).unwrap().is_some();
        assert_eq!(found, brute_force_iso(&a, &b), "({y},{i},{k})");
        eprintln!("(1,0,0) vs ({y},{i},{k}): {found}");
    }
}
