mod common;

use multiloop_core::laurent::{GaloisElement, Window};
use multiloop_core::loopdescent::{loop_bracket, subspace_contained, LoopElement};

#[test]
fn loop_bracket_examples() {
    let ml = common::a1(1);
    let (g, k, r) = (ml.algebra(), ml.field(), ml.ring());
    let e = LoopElement::pure(&g.basis_vector(k, g.e_index(0)), &r.t(0));
    let f = LoopElement::pure(&g.basis_vector(k, g.f_index(0)), &r.t_monomial(&[-1]));
    let h = LoopElement::pure(&g.basis_vector(k, g.h_index(0)), &r.one());
    assert_eq!(loop_bracket(g, &e, &f).unwrap(), h);
    assert!(loop_bracket(g, &e, &e).unwrap().is_zero());
    assert!(ml.is_in_descended(&e).unwrap());
}

#[test]
fn twisted_membership() {
    let ml = common::a2_twist();
    let r = ml.ring();
    let x0 = ml.eigen().component(&[0])[0].clone();
    let x1 = ml.eigen().component(&[1])[0].clone();
    assert!(ml.is_in_descended(&LoopElement::pure(&x0, &r.t(0))).unwrap());
    assert!(!ml.is_in_descended(&LoopElement::pure(&x1, &r.t(0))).unwrap());
    assert!(ml.is_in_descended(&LoopElement::pure(&x1, &(&r.s(0) * &r.t(0)))).unwrap());
}

#[test]
fn graded_components() {
    let ml = common::a2_twist();
    assert_eq!(ml.multiloop_component(&[0]).len(), 3);
    assert_eq!(ml.multiloop_component(&[1]).len(), 5);
    let un = common::a1(2);
    assert_eq!(un.multiloop_component(&[3, -1]).len(), 3);
    for alpha in Window::new(1, 3).degrees() {
        let class = ml.ring().class(&alpha);
        assert_eq!(ml.multiloop_component(&alpha).len(), ml.eigen().component_dim(&class));
        for x in ml.multiloop_component(&alpha) {
            assert!(ml.is_in_descended(&x).unwrap());
        }
    }
}

#[test]
fn g_a_examples() {
    let ml = common::a2_twist();
    let (r, k, dim) = (ml.ring(), ml.field(), ml.dim());
    let g0 = ml.g0().unwrap();
    assert_eq!(g0.len(), 3);
    let g1 = ml.g_a_subspace(&r.one()).unwrap();
    assert!(subspace_contained(k, dim, &g1, &g0) && subspace_contained(k, dim, &g0, &g1));
    let gs = ml.g_a_subspace(&r.s(0)).unwrap();
    assert_eq!(gs.len(), 5);
    let gs2 = ml.g_a_subspace(&r.s_monomial(&[2])).unwrap();
    let brackets: Vec<_> = gs.iter().flat_map(|x| gs.iter().map(|y| ml.algebra().bracket(x, y).unwrap())).collect();
    assert!(subspace_contained(k, dim, &brackets, &gs2));
    assert!(ml.g0_subalgebra().unwrap().is_central_simple().unwrap());
    // non-homogeneous a: intersection over the characters present
    assert!(ml.g_a_subspace(&(&r.one() + &r.s(0))).unwrap().is_empty());
}

#[test]
fn descent_cocycle_and_closure() {
    for (_, ml) in common::shipped() {
        assert!(ml.cocycle().verify_cocycle_law());
        let r = ml.ring();
        let x = ml.window_basis(Window::new(ml.nvars(), 1));
        let el: Vec<LoopElement> = x.elements().iter().map(|(a, k)| ml.basis_element(a, *k)).collect();
        for a in &el {
            for b in &el {
                assert!(ml.is_in_descended(&loop_bracket(ml.algebra(), a, b).unwrap()).unwrap());
            }
        }
        let id = GaloisElement::identity(r.nvars());
        assert!(ml.cocycle().value(&id).unwrap().is_identity());
    }
    {
        let (_, ml) = ("D4", common::d4_triality());
        assert!(ml.cocycle().verify_cocycle_law());
        assert_eq!(ml.eigen().component_dim(&[1]), 7);
    }
}

#[test]
fn record_roundtrip() {
    let ml = common::a2_twist();
    let x = ml.basis_element(&[1], ml.adapted().indices(&[1])[0]);
    let json = serde_json::to_string(&x.to_records()).unwrap();
    let back = LoopElement::from_records(ml.ring(), ml.dim(), &serde_json::from_str::<Vec<_>>(&json).unwrap()).unwrap();
    assert_eq!(back, x);
}
