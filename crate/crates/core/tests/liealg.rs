mod common;

use multiloop_core::liealg::{
    check_commuting, is_central_simple, simultaneous_eigenspaces, CartanType, Family, LieAutomorphism, RootSystem,
    SplitSimpleLieAlgebra,
};
use multiloop_core::linalg::Matrix;
use multiloop_core::scalars::CyclotomicField;
use multiloop_core::Error;
use proptest::prelude::*;

fn q() -> CyclotomicField {
    CyclotomicField::rationals()
}

#[test]
fn positive_root_counts() {
    for (f, l, n) in [(Family::A, 3, 6), (Family::B, 2, 4), (Family::C, 3, 9), (Family::D, 4, 12), (Family::G, 2, 6), (Family::F, 4, 24), (Family::E, 6, 36)] {
        let rs = RootSystem::new(CartanType::new(f, l).unwrap()).unwrap();
        assert_eq!(rs.num_positive(), n, "{f:?}{l}");
        assert!(rs.verify_root_strings());
    }
}

#[test]
fn build_examples() {
    let a1 = common::algebra(Family::A, 1);
    assert_eq!(a1.dim(), 3);
    let k = q();
    let (e, h, f) = (a1.basis_vector(&k, a1.e_index(0)), a1.basis_vector(&k, a1.h_index(0)), a1.basis_vector(&k, a1.f_index(0)));
    let two_e: Vec<_> = e.iter().map(|x| x * &k.from_int(2)).collect();
    assert_eq!(a1.bracket(&h, &e).unwrap(), two_e);
    assert_eq!(a1.bracket(&e, &f).unwrap(), h);
    assert!(a1.bracket(&e, &e).unwrap().iter().all(|x| x.is_zero()));
    assert_eq!(a1.killing(&h, &h).unwrap(), k.from_int(8));
    assert!(a1.killing(&e, &e).unwrap().is_zero());
    assert_eq!(common::algebra(Family::A, 2).dim(), 8);
    assert_eq!(common::algebra(Family::G, 2).dim(), 14);
}

#[test]
fn structure_constant_dump() {
    let a1 = common::algebra(Family::A, 1);
    let sc = a1.structure_constants();
    assert!(sc.iter().any(|r| r.i == a1.e_index(0) && r.j == a1.f_index(0) && r.k == a1.h_index(0) && r.c == "1"));
    let json = serde_json::to_value(&sc).unwrap();
    assert!(json[0]["c"].is_string());
}

#[test]
fn build_integrity_small_types() {
    for (f, l) in [(Family::A, 1), (Family::A, 2), (Family::B, 2), (Family::G, 2)] {
        let g = SplitSimpleLieAlgebra::build(f, l).unwrap();
        assert!(g.verify_antisymmetry());
        assert!(g.verify_jacobi());
        assert!(g.killing_is_symmetric());
        assert!(g.verify_killing_invariance());
        assert!(g.killing_nondegenerate());
    }
}

#[test]
fn diagram_automorphisms() {
    let k2 = CyclotomicField::new(2).unwrap();
    let a2 = common::algebra(Family::A, 2);
    let s = LieAutomorphism::diagram(&a2, &k2, &[1, 0]).unwrap();
    assert_eq!(s.order(), 2);
    assert!(s.pow(2).matrix().is_identity());
    assert!(s.preserves_bracket(&a2));
    assert!(s.preserves_killing(&a2));
    let id = LieAutomorphism::diagram(&a2, &k2, &[0, 1]).unwrap();
    assert!(id.matrix().is_identity());
    assert_eq!(id.order(), 1);

    let k3 = CyclotomicField::new(3).unwrap();
    let d4 = common::algebra(Family::D, 4);
    let t = LieAutomorphism::diagram(&d4, &k3, &[2, 1, 3, 0]).unwrap();
    assert_eq!(t.order(), 3);
    assert!(t.preserves_killing(&d4));
    let e = simultaneous_eigenspaces(&d4, &k3, std::slice::from_ref(&t), &[3]).unwrap();
    assert_eq!(e.component_dim(&[0]), 14);

    // not a symmetry of the Dynkin diagram
    let b2 = common::algebra(Family::B, 2);
    assert!(LieAutomorphism::diagram(&b2, &k2, &[1, 0]).is_err());
}

#[test]
fn non_commuting_and_invalid_matrices() {
    let k6 = CyclotomicField::new(6).unwrap();
    let d4 = common::algebra(Family::D, 4);
    let t = LieAutomorphism::diagram(&d4, &k6, &[2, 1, 3, 0]).unwrap();
    let s = LieAutomorphism::diagram(&d4, &k6, &[0, 1, 3, 2]).unwrap();
    assert!(matches!(check_commuting(&[t, s]), Err(Error::NonCommuting)));

    // a diagonal matrix that does not preserve the bracket
    let a1 = common::algebra(Family::A, 1);
    let k = q();
    let mut m = Matrix::identity(&k, 3);
    m.set(0, 0, k.from_int(-1));
    assert!(LieAutomorphism::from_matrix(&a1, m, 2).is_err());
    // a valid inner involution: Ad(diag(1,-1)) scales e, f by -1
    let mut m = Matrix::identity(&k, 3);
    m.set(a1.e_index(0), a1.e_index(0), k.from_int(-1));
    m.set(a1.f_index(0), a1.f_index(0), k.from_int(-1));
    let inner = LieAutomorphism::from_matrix(&a1, m.clone(), 2).unwrap();
    assert_eq!(inner.order(), 2);
    // declared order must be minimal
    assert!(LieAutomorphism::from_matrix(&a1, m, 4).is_err());
}

#[test]
fn eigenspace_examples() {
    let k2 = CyclotomicField::new(2).unwrap();
    let a2 = common::algebra(Family::A, 2);
    let s = LieAutomorphism::diagram(&a2, &k2, &[1, 0]).unwrap();
    let e = simultaneous_eigenspaces(&a2, &k2, std::slice::from_ref(&s), &[2]).unwrap();
    assert_eq!(e.component_dim(&[0]), 3);
    assert_eq!(e.component_dim(&[1]), 5);
    assert!(e.verify_eigenvectors(&[s]).unwrap());
    assert!(e.verify_bracket_compatibility(&a2).unwrap());
    assert!(e.verify_killing_orthogonality(&a2).unwrap());
    let id = LieAutomorphism::identity(&a2, &q());
    let e = simultaneous_eigenspaces(&a2, &q(), &[id], &[1]).unwrap();
    assert_eq!(e.dims().len(), 1);
    assert_eq!(e.component_dim(&[0]), 8);
}

#[test]
fn central_simplicity_examples() {
    let k2 = CyclotomicField::new(2).unwrap();
    let ml = common::a2_twist();
    assert!(is_central_simple(ml.algebra(), &k2, &ml.g0().unwrap()).unwrap());
    let a1 = common::algebra(Family::A, 1);
    let h = vec![a1.basis_vector(&q(), a1.h_index(0))];
    assert!(!is_central_simple(&a1, &q(), &h).unwrap());
    let all: Vec<_> = (0..3).map(|i| a1.basis_vector(&q(), i)).collect();
    assert!(is_central_simple(&a1, &q(), &all).unwrap());
}

fn random_vector(k: &CyclotomicField, entries: &[i64]) -> Vec<multiloop_core::scalars::CyclotomicScalar> {
    entries.iter().map(|&x| k.from_int(x)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn jacobi_and_invariance_on_random_triples(
        x in prop::collection::vec(-3i64..=3, 8),
        y in prop::collection::vec(-3i64..=3, 8),
        z in prop::collection::vec(-3i64..=3, 8),
    ) {
        let g = SplitSimpleLieAlgebra::build(Family::A, 2).unwrap();
        let k = q();
        let (x, y, z) = (random_vector(&k, &x), random_vector(&k, &y), random_vector(&k, &z));
        let br = |a: &[_], b: &[_]| g.bracket(a, b).unwrap();
        let mut s = br(&x, &br(&y, &z));
        for (a, b) in s.iter_mut().zip(br(&y, &br(&z, &x))) { *a += &b; }
        for (a, b) in s.iter_mut().zip(br(&z, &br(&x, &y))) { *a += &b; }
        prop_assert!(s.iter().all(|c| c.is_zero()));
        prop_assert_eq!(g.killing(&br(&x, &y), &z).unwrap(), g.killing(&x, &br(&y, &z)).unwrap());
    }
}
