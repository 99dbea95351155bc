use braceforge::chains::left_chain;
use braceforge::ideals::{
    all_ideals, circle_center, enumerate_subspaces, ideal_product, identify_group, is_ideal, is_prime, GroupClass,
};
use braceforge::{build_brace, BraceOps, BraceTable, Exec, FamilyParams, Subspace};

fn family(p: u32, y: i64, i: i64, k: i64) -> BraceTable {
    build_brace(&FamilyParams::new(p, y, i, k).unwrap()).unwrap()
}

#[test]
fn family_ideal_lattice_is_zero_square_whole() {
    let a = family(5, 1, 0, 0);
    let chain = left_chain(&a);
    let a2 = chain.term(2).clone();
    let ideals = all_ideals(&a, Exec::default()).unwrap();
    let spaces: Vec<&Subspace> = ideals.iter().map(|i| &i.space).collect();
    assert_eq!(spaces.len(), 3);
    assert!(spaces[0].is_zero());
    assert_eq!(spaces[1], &a2);
    assert!(spaces[2].is_full());
    assert!(is_prime(&a, Exec::default()).unwrap());
}

#[test]
fn socle_line_is_not_an_ideal() {
    let a = family(5, 1, 0, 0);
    let s_line = Subspace::span_rows(a.prime(), 4, [[0u16, 0, 0, 1]]);
    assert!(!is_ideal(&a, &s_line));
    assert!(is_ideal(&a, &Subspace::zero(a.prime(), 4)));
    assert!(is_ideal(&a, &Subspace::full(a.prime(), 4)));
}

#[test]
fn square_products() {
    let a = family(5, 1, 0, 0);
    let a2 = left_chain(&a).term(2).clone();
    let sq = ideal_product(&a, &a2, &a2);
    assert!(!sq.is_zero());
    let q = a.named("Q").unwrap();
    assert_eq!(a.star(q, q), a.from_ints(&[0, 0, 0, -1]));
    assert!(sq.contains(&[0, 0, 0, 1]));
    // S ∈ A²*A² and S*Q = -P, so only the right-nested product vanishes
    let p_line = Subspace::span_rows(a.prime(), 4, [[0u16, 0, 1, 0]]);
    assert_eq!(ideal_product(&a, &sq, &a2), p_line);
    assert!(ideal_product(&a, &a2, &sq).is_zero());
    assert!(ideal_product(&a, &Subspace::zero(a.prime(), 4), &a2).is_zero());
}

#[test]
fn ideals_are_lambda_invariant_and_normal() {
    let a = family(5, 2, 1, 3);
    let coords = a.coords().clone();
    for ideal in all_ideals(&a, Exec::default()).unwrap() {
        let v = &ideal.space;
        for e in v.elements() {
            let e = coords.from_digits(&e);
            for x in a.elements() {
                let inv = a.circle_inv(x).unwrap();
                let lam = coords.digits(a.lambda_apply(x, e));
                let conj = coords.digits(a.circle(a.circle(x, e), inv));
                assert!(v.contains(&lam[..4]));
                assert!(v.contains(&conj[..4]));
            }
        }
        assert!(ideal.space.is_zero() || left_chain(&a).term(2).is_subspace_of(v));
    }
}

#[test]
fn center_is_the_p_line() {
    let a = family(5, 1, 0, 0);
    let center = circle_center(&a, Exec::default());
    assert_eq!(center.len(), 5);
    let p_line = Subspace::span_rows(a.prime(), 4, [[0u16, 0, 1, 0]]);
    assert_eq!(center.subspace, Some(p_line));
    assert_eq!(identify_group(&a, Exec::default()).unwrap(), GroupClass::Xv);
}

#[test]
fn center_has_p_elements_across_the_family() {
    for params in FamilyParams::all(5).unwrap() {
        let a = build_brace(&params).unwrap();
        assert_eq!(circle_center(&a, Exec::default()).len(), 5, "{params}");
    }
}

#[test]
fn family_is_prime_at_seven() {
    let a = family(7, 3, 2, 5);
    assert!(is_prime(&a, Exec::default()).unwrap());
    assert_eq!(enumerate_subspaces(a.prime(), 4).unwrap().len(), 1 + 400 + 2850 + 400 + 1);
}

#[test]
fn square_is_strongly_nilpotent() {
    let a = family(5, 1, 0, 0);
    let mut terms = vec![left_chain(&a).term(2).clone()];
    for _ in 0..8 {
        let i = terms.len();
        let next = (1..=i)
            .fold(Subspace::zero(a.prime(), 4), |acc, j| acc.sum(&ideal_product(&a, &terms[j - 1], &terms[i - j])));
        terms.push(next);
    }
    let dims: Vec<usize> = terms.iter().map(Subspace::dim).collect();
    assert_eq!(dims[..4], [3, 2, 1, 0], "{dims:?}");
}
