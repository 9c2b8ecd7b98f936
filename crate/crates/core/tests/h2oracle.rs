mod common;

use multiloop_core::h2oracle::*;
use multiloop_core::laurent::Window;
use multiloop_core::linalg::Matrix;
use multiloop_core::scalars::CyclotomicField;
use multiloop_core::Error;

#[test]
fn graded_slices_a1() {
    let ml = common::a1(1);
    let w = Window::new(1, 3);
    let r = graded_cocycle_space(&ml, &w, &[0], 1).unwrap();
    assert_eq!((r.h2_dim, r.lower_bound, r.certified), (1, 1, true));
    assert_eq!(r.representatives.len(), 1);
    let r = graded_cocycle_space(&ml, &w, &[2], 1).unwrap();
    assert_eq!((r.h2_dim, r.lower_bound, r.certified), (0, 0, true));
    let r = graded_cocycle_space(&ml, &Window::new(1, 2), &[1], 1).unwrap();
    assert_eq!((r.h2_dim, r.lower_bound), (0, 0));
    // V = k^2 scales every dimension
    let r2 = graded_cocycle_space(&ml, &w, &[0], 2).unwrap();
    assert_eq!((r2.h2_dim, r2.lower_bound), (2, 2));
    assert!(matches!(graded_cocycle_space(&ml, &w, &[4], 1), Err(Error::DegenerateWindow(_))));
}

#[test]
fn graded_slice_a2_twist() {
    let r = graded_cocycle_space(&common::a2_twist(), &Window::new(1, 2), &[0], 1).unwrap();
    assert!(r.certified);
    assert_eq!(r.h2_dim, 1);
}

#[test]
fn kassel_slice_is_a_nonzero_class() {
    let ml = common::a1(1);
    let w = Window::new(1, 3);
    let k = kassel_cochain(&ml, w);
    assert!(k.cocycle_defects(&ml).is_empty());
    assert!(!k.slice(&[0]).is_zero());
    assert!(k.slice(&[1]).is_zero());
    assert!(graded_cocycle_space(&ml, &w, &[0], 1).unwrap().kassel_independent);
}

#[test]
fn invariantize_examples() {
    let ml = common::a1(1);
    let w = Window::new(1, 2);
    let k = kassel_cochain(&ml, w);
    let n = invariantize(&ml, &k).unwrap();
    assert!(n.tau.is_empty());
    assert_eq!(n.cochain, k);
    // P + d tau0 normalizes back to the Kassel cocycle
    let tau0 = random_tau(&ml, w, k.vdim(), 11);
    let p = k.try_add(&coboundary(&ml, w, k.vdim(), &tau0)).unwrap();
    assert_eq!(invariantize(&ml, &p).unwrap().cochain, k);
    // coboundaries normalize to zero
    let c = coboundary(&ml, w, 1, &random_tau(&ml, w, 1, 5));
    assert!(invariantize(&ml, &c).unwrap().cochain.is_zero());
}

#[test]
fn extract_phi_examples() {
    for ml in [common::a1(1), common::a2_twist(), common::a1(2)] {
        let w = Window::new(ml.nvars(), if ml.nvars() == 2 { 1 } else { 2 });
        let k = kassel_cochain(&ml, w);
        let phi = extract_phi(&ml, &k, 100, 0).unwrap();
        assert!(phi.matrix(ml.field(), &omega_coordinates(&ml, &w)).is_identity());
        let zero = WindowedCochain::zero(ml.field(), w, 1);
        let phi0 = extract_phi(&ml, &zero, 10, 0).unwrap();
        assert!(phi0.blocks.values().all(|m| m.columns().iter().flatten().all(|x| x.is_zero())));
    }
}

#[test]
fn extract_phi_detects_unnormalized_input() {
    let ml = common::a1(1);
    let w = Window::new(1, 2);
    let c = coboundary(&ml, w, 1, &random_tau(&ml, w, 1, 9));
    assert!(matches!(extract_phi(&ml, &c, 10, 0), Err(Error::ChoiceDependence(_))));
}

#[test]
fn universal_map_examples() {
    let ml = common::a1(1);
    let w = Window::new(1, 2);
    assert!(universal_map_check(&ml, &kassel_cochain(&ml, w), 10, 0).unwrap().pass);
    let p = random_kassel_extension(&ml, w, 2, 7).unwrap();
    let rep = universal_map_check(&ml, &p, 100, 7).unwrap();
    assert!(rep.pass, "{:?}", rep.violations);
    // a non-cocycle is reported
    let q = CyclotomicField::rationals();
    let bogus = WindowedCochain::new(
        &q,
        w,
        1,
        [
            ((vec![1], 0), (vec![0], 2), vec![q.one()]),
            ((vec![0], 2), (vec![1], 0), vec![q.from_int(-1)]),
        ],
    )
    .unwrap();
    assert!(!bogus.cocycle_defects(&ml).is_empty());
    // scaling by a matrix keeps the check passing
    let k = kassel_cochain(&ml, w);
    let m = Matrix::from_rows(&q, vec![vec![q.from_int(3)], vec![q.from_int(-2)]]).unwrap();
    assert!(universal_map_check(&ml, &k.apply_linear(&m).unwrap(), 10, 0).unwrap().pass);
}

#[test]
fn antisymmetry_is_enforced() {
    let q = CyclotomicField::rationals();
    let w = Window::new(1, 2);
    let x = (vec![0], 0usize);
    let y = (vec![1], 2usize);
    let bad = WindowedCochain::new(&q, w, 1, [(x.clone(), y.clone(), vec![q.one()])]);
    assert!(matches!(bad, Err(Error::NotAntisymmetric(_))));
    let diag = WindowedCochain::new(&q, w, 1, [(x.clone(), x, vec![q.one()])]);
    assert!(matches!(diag, Err(Error::NotAntisymmetric(_))));
}

#[test]
fn components_are_keyed_by_degree_pairs() {
    let ml = common::a1(1);
    let k = kassel_cochain(&ml, Window::new(1, 1));
    let comps = k.components();
    assert!(comps.contains_key(&(vec![1], vec![-1])));
    assert!(comps.contains_key(&(vec![-1], vec![1])));
    assert!(k.degrees().iter().all(|d| d == &vec![0]));
}
