use multiloop_core::kaehler::{
    differential, fixed_space_identification, graded_dim, invariant_classes, reduce, reduce_pair, CentralClass, DifferentialForm,
};
use multiloop_core::laurent::{GaloisElement, LaurentPoly, LaurentRing, Window};
use multiloop_core::scalars::CyclotomicField;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn ring(orders: &[u32]) -> LaurentRing {
    let m = orders.iter().fold(1u64, |a, &b| multiloop_core::scalars::lcm(a, b as u64)) as u32;
    LaurentRing::new(&CyclotomicField::new(m).unwrap(), orders).unwrap()
}

fn random_poly(r: &LaurentRing, seed: u64) -> LaurentPoly {
    r.random(&mut ChaCha8Rng::seed_from_u64(seed), 5, 4)
}

#[test]
fn ring_examples() {
    let r = ring(&[1]);
    let s = r.s(0);
    assert_eq!(&s * &r.s_monomial(&[-1]), r.one());
    assert_eq!(&(&s + &r.one()) * &(&s - &r.one()), &r.s_monomial(&[2]) - &r.one());
    let r23 = ring(&[2, 3]);
    assert_eq!(&r23.t(0) * &r23.t(1), r23.s_monomial(&[2, 3]));
    assert!(r23.s_monomial(&[2, -3]).in_base_ring());
    let r2 = ring(&[2]);
    assert!(r2.s_monomial(&[2]).in_base_ring());
    assert!(!r2.s(0).in_base_ring());
}

#[test]
fn galois_examples() {
    let r = ring(&[2]);
    let g = GaloisElement(vec![1]);
    assert_eq!(r.s(0).galois_act(&g).unwrap(), -&r.s(0));
    assert_eq!(r.t(0).galois_act(&g).unwrap(), r.t(0));
    let p = &r.s(0) + &r.s_monomial(&[2]);
    assert_eq!(p.galois_act(&g).unwrap(), &r.s_monomial(&[2]) - &r.s(0));
}

#[test]
fn kaehler_examples() {
    let r = ring(&[1]);
    let s = r.s(0);
    assert_eq!(differential(&r.s_monomial(&[2])), DifferentialForm::basic(&s.scale(&r.field().from_int(2)), 0));
    assert!(differential(&r.one()).is_zero());
    let r2 = ring(&[1, 1]);
    let d = differential(&r2.s_monomial(&[1, 1]));
    assert_eq!(d.coeffs()[0], r2.s(1));
    assert_eq!(d.coeffs()[1], r2.s(0));
    // reduce(t^3 dt) = 0, reduce(t^-1 dt) = degree-0 basis class
    assert!(reduce(&DifferentialForm::t_form(&r, &[3], 0)).is_zero());
    assert_eq!(reduce(&DifferentialForm::t_form(&r, &[-1], 0)), CentralClass::basis(&r, &[0], 0));
    // reduce(t2 dt1) = -class(t1 dt2)
    let lhs = reduce_pair(&r2.t(1), &r2.t(0));
    let rhs = reduce_pair(&r2.t(0), &r2.t(1)).neg();
    assert_eq!(lhs, rhs);
    assert!(!lhs.is_zero());
    assert_eq!(lhs.to_string(), "-1 * s1 ds2 (mod d)");
}

#[test]
fn central_class_galois_examples() {
    let r = ring(&[2]);
    let g = GaloisElement(vec![1]);
    let c0 = CentralClass::basis(&r, &[0], 0);
    assert_eq!(c0.galois_act(&g).unwrap(), c0);
    assert!(reduce(&DifferentialForm::basic(&r.one(), 0)).is_zero());
    let c = reduce(&DifferentialForm::basic(&r.s_monomial(&[-3]), 0));
    assert!(c.is_zero() || c.galois_act(&g).unwrap() == c);
    // class(s^-1 ds) = 1/2 class(t^-1 dt)
    let t = reduce(&DifferentialForm::t_form(&r, &[-1], 0));
    assert_eq!(c0, t.scale(&r.field().from_ratio(1, 2)));
}

#[test]
fn invariant_class_counts() {
    assert_eq!(invariant_classes(&ring(&[2]), &Window::new(1, 2)).len(), 1);
    assert_eq!(invariant_classes(&ring(&[1]), &Window::new(1, 3)).len(), 1);
    // n = 2: 2 at degree 0 and 1 per nonzero degree of the window
    assert_eq!(invariant_classes(&ring(&[1, 1]), &Window::new(2, 1)).len(), 2 + 8);
    assert_eq!(graded_dim(&[0, 0]), 2);
    assert_eq!(graded_dim(&[1, 0]), 1);
}

#[test]
fn fixed_space_identification_a2() {
    let rows = fixed_space_identification(&ring(&[2]), &Window::new(1, 4)).unwrap();
    assert!(rows.iter().all(|r| r.ok));
}

#[test]
fn serialization_roundtrip() {
    let r = ring(&[1, 1]);
    let c = reduce_pair(&random_poly(&r, 1), &random_poly(&r, 2));
    let json = serde_json::to_string(&c.to_records()).unwrap();
    let back = CentralClass::from_records(&r, &serde_json::from_str::<Vec<_>>(&json).unwrap()).unwrap();
    assert_eq!(back, c);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn ring_laws(a in 0u64..10_000, b in 0u64..10_000, c in 0u64..10_000, orders in prop::sample::select(vec![vec![1u32], vec![2], vec![3], vec![1, 1], vec![2, 3]])) {
        let r = ring(&orders);
        let (a, b, c) = (random_poly(&r, a), random_poly(&r, b), random_poly(&r, c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(r.parse(&a.to_string()).unwrap(), a.clone());
    }

    #[test]
    fn galois_laws(p in 0u64..10_000, orders in prop::sample::select(vec![vec![2u32], vec![3], vec![2, 3], vec![4]])) {
        let r = ring(&orders);
        let p = random_poly(&r, p);
        let group = r.galois_group();
        for g in &group {
            for h in &group {
                let lhs = p.galois_act(h).unwrap().galois_act(g).unwrap();
                prop_assert_eq!(lhs, p.galois_act(&g.compose(h, r.orders())).unwrap());
            }
        }
        let fixed = group.iter().all(|g| p.galois_act(g).unwrap() == p);
        prop_assert_eq!(fixed, p.in_base_ring());
        prop_assert!(p.average().in_base_ring());
        // G-equivariance of reduce
        let q = random_poly(&r, 1);
        for g in &group {
            let lhs = reduce_pair(&p, &q).galois_act(g).unwrap();
            let rhs = reduce_pair(&p.galois_act(g).unwrap(), &q.galois_act(g).unwrap());
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn quotient_relations(a in 0u64..10_000, b in 0u64..10_000, c in 0u64..10_000, orders in prop::sample::select(vec![vec![1u32], vec![2], vec![1, 1]])) {
        let r = ring(&orders);
        let (a, b, c) = (random_poly(&r, a), random_poly(&r, b), random_poly(&r, c));
        prop_assert!(reduce(&differential(&a)).is_zero());
        prop_assert!(reduce_pair(&a, &r.one()).is_zero());
        prop_assert_eq!(reduce_pair(&a, &b), reduce_pair(&b, &a).neg());
        let s = reduce_pair(&(&a * &b), &c).try_add(&reduce_pair(&(&b * &c), &a)).unwrap().try_add(&reduce_pair(&(&c * &a), &b)).unwrap();
        prop_assert!(s.is_zero());
    }
}
