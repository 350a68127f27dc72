//! Seeded random matrices following the experimental protocol: entries
//! uniform in [-100, 100] up to dimension 6 and in [-30, 30] from 7 on.

use num_bigint::BigInt;
use pdbarv::linalg::determinant;
use pdbarv::IntMatrix;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn default_entry_bound(dim: usize) -> i64 {
    if dim >= 7 {
        30
    } else {
        100
    }
}

/// First nonsingular draw from a ChaCha8 stream seeded with `seed`;
/// entries are drawn generator by generator.
pub fn matrix(dim: usize, bound: i64, seed: u64) -> IntMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let cols = (0..dim).map(|_| (0..dim).map(|_| BigInt::from(rng.gen_range(-bound..=bound))).collect()).collect();
        let m = IntMatrix::from_columns(cols).expect("square draw");
        if determinant(&m) != BigInt::from(0) {
            return m;
        }
    }
}

pub fn file_name(dim: usize, seed: u64) -> String {
    format!("rand-d{dim}-seed{seed}.mat")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_bounded() {
        let a = matrix(4, 100, 1);
        assert_eq!(a, matrix(4, 100, 1));
        assert_ne!(a, matrix(4, 100, 2));
        assert!(a.max_abs() <= BigInt::from(100));
        assert_ne!(determinant(&a), BigInt::from(0));
    }

    #[test]
    fn tiny_bound_rejects_singular_draws() {
        for seed in 0..20 {
            assert_ne!(determinant(&matrix(3, 1, seed)), BigInt::from(0));
        }
    }

    #[test]
    fn protocol_bounds() {
        assert_eq!(default_entry_bound(4), 100);
        assert_eq!(default_entry_bound(6), 100);
        assert_eq!(default_entry_bound(7), 30);
    }
}
