#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::Zero;
use pdbarv::linalg::{determinant, primitive_reduce};
use pdbarv::IntMatrix;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform entries in `[-bound, bound]`, redrawn until nonsingular.
pub fn random_matrix(rng: &mut impl Rng, d: usize, bound: i64) -> IntMatrix {
    loop {
        let cols: Vec<Vec<i64>> = (0..d).map(|_| (0..d).map(|_| rng.gen_range(-bound..=bound)).collect()).collect();
        let m = IntMatrix::from_i64_columns(&cols);
        if !determinant(&m).is_zero() {
            return m;
        }
    }
}

/// Nonsingular matrix with primitive columns.
pub fn random_primitive(rng: &mut impl Rng, d: usize, bound: i64) -> IntMatrix {
    primitive_reduce(&random_matrix(rng, d, bound)).expect("nonsingular")
}

pub fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// Proptest strategy: square nonsingular matrices with entries in
/// `[-bound, bound]` and dimension in `dims`.
pub fn nonsingular(
    dims: std::ops::RangeInclusive<usize>,
    bound: i64,
) -> impl proptest::strategy::Strategy<Value = IntMatrix> {
    use proptest::prelude::*;
    dims.prop_flat_map(move |d| {
        proptest::collection::vec(-bound..=bound, d * d)
            .prop_map(move |v| IntMatrix::from_i64_columns(&v.chunks(d).collect::<Vec<_>>()))
    })
    .prop_filter("nonsingular", |m| !determinant(m).is_zero())
}

/// As [`nonsingular`], with primitive columns.
pub fn primitive(
    dims: std::ops::RangeInclusive<usize>,
    bound: i64,
) -> impl proptest::strategy::Strategy<Value = IntMatrix> {
    use proptest::prelude::*;
    nonsingular(dims, bound).prop_map(|m| primitive_reduce(&m).expect("nonsingular"))
}
