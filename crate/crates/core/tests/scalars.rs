use multiloop_core::scalars::{root_of_unity, CyclotomicField, CyclotomicScalar};
use multiloop_core::Error;
use proptest::prelude::*;

fn field(m: u32) -> CyclotomicField {
    CyclotomicField::new(m).unwrap()
}

fn scalar(k: &CyclotomicField, coeffs: &[(i64, i64)]) -> CyclotomicScalar {
    let mut acc = k.zero();
    for (j, &(num, den)) in coeffs.iter().enumerate() {
        acc = &acc + &(&k.from_ratio(num, den) * &k.zeta_pow(j as i64));
    }
    acc
}

fn coeffs() -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((-9i64..=9, 1i64..=4), 1..6)
}

#[test]
fn spec_examples() {
    let k4 = field(4);
    let z = k4.zeta_pow(1);
    assert_eq!(&(&k4.one() + &z) * &(&k4.one() - &z), k4.from_int(2));
    let k3 = field(3);
    let w = k3.zeta_pow(1);
    assert!((&(&w * &w) + &w + k3.one()).is_zero());
    assert_eq!(root_of_unity(2, 1).unwrap(), CyclotomicField::new(2).unwrap().from_int(-1));
    assert!(root_of_unity(3, 1).unwrap().pow(3).is_one());
    assert_eq!(root_of_unity(4, 2).unwrap(), field(4).from_int(-1));
}

#[test]
fn exact_order_of_zeta() {
    for m in 1..=12u32 {
        let k = field(m);
        let z = k.zeta_pow(1);
        assert!(z.pow(m as u64).is_one());
        for j in 1..m {
            assert!(!z.pow(j as u64).is_one(), "zeta_{m}^{j} = 1");
        }
    }
}

#[test]
fn conductor_mixing_is_rejected() {
    let a = field(3).one();
    let b = field(4).one();
    assert!(matches!(a.try_add(&b), Err(Error::ConductorMismatch(3, 4))));
    assert!(matches!(field(3).zero().inverse(), Err(Error::DivisionByZero)));
}

#[test]
fn parse_display_roundtrip() {
    let k = field(12);
    let x = k.parse("1/2 - 3*z^2 + z^3").unwrap();
    assert_eq!(k.parse(&x.to_string()).unwrap(), x);
}

proptest! {
    #[test]
    fn field_axioms(a in coeffs(), b in coeffs(), c in coeffs(), m in prop::sample::select(vec![3u32, 4, 5, 6, 8, 12])) {
        let k = field(m);
        let (a, b, c) = (scalar(&k, &a), scalar(&k, &b), scalar(&k, &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        if !a.is_zero() {
            prop_assert!((&a * &a.inverse().unwrap()).is_one());
        }
        // canonical form: equality is coefficient-wise
        prop_assert_eq!(a == b, a.coeffs() == b.coeffs());
    }

    #[test]
    fn complex_embedding_is_a_homomorphism(a in coeffs(), b in coeffs(), m in prop::sample::select(vec![3u32, 4, 5, 7, 12])) {
        let k = field(m);
        let (a, b) = (scalar(&k, &a), scalar(&k, &b));
        let (ar, ai) = a.to_complex();
        let (br, bi) = b.to_complex();
        let (pr, pi) = (&a * &b).to_complex();
        prop_assert!((pr - (ar * br - ai * bi)).abs() < 1e-9 * (1.0 + pr.abs()));
        prop_assert!((pi - (ar * bi + ai * br)).abs() < 1e-9 * (1.0 + pi.abs()));
    }
}
