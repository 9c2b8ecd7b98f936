//! Shared configurations for the integration tests.
#![allow(dead_code)]

use std::sync::Arc;

use multiloop_core::liealg::{Family, LieAutomorphism, SplitSimpleLieAlgebra};
use multiloop_core::loopdescent::Multiloop;
use multiloop_core::scalars::CyclotomicField;

pub fn algebra(family: Family, rank: usize) -> Arc<SplitSimpleLieAlgebra> {
    Arc::new(SplitSimpleLieAlgebra::build(family, rank).unwrap())
}

/// Untwisted `A1` loop algebra in `n` variables.
pub fn a1(n: usize) -> Multiloop {
    Multiloop::untwisted(algebra(Family::A, 1), n).unwrap()
}

/// `A2` twisted by the diagram involution (`A2^(2)`).
pub fn a2_twist() -> Multiloop {
    let k = CyclotomicField::new(2).unwrap();
    let g = algebra(Family::A, 2);
    let s = LieAutomorphism::diagram(&g, &k, &[1, 0]).unwrap();
    Multiloop::new(g, &k, vec![s], &[2]).unwrap()
}

/// `D4` twisted by triality.
pub fn d4_triality() -> Multiloop {
    let k = CyclotomicField::new(3).unwrap();
    let g = algebra(Family::D, 4);
    let s = LieAutomorphism::diagram(&g, &k, &[2, 1, 3, 0]).unwrap();
    Multiloop::new(g, &k, vec![s], &[3]).unwrap()
}

/// The three configurations of the verification suites.
pub fn shipped() -> Vec<(&'static str, Multiloop)> {
    vec![("A1 n=1", a1(1)), ("A1 n=2", a1(2)), ("A2^(2)", a2_twist())]
}
