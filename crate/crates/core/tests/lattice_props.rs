mod common;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use pdbarv::lattice::{
    default_delta, lll_reduce, pick_beta, reduced_inverse_basis, round_adjust, CoefficientVector, Norm,
};
use pdbarv::linalg::{adjugate, determinant, gcd_all, make_gamma_bundle};
use pdbarv::IntMatrix;
use proptest::prelude::*;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Checks size reduction and the Lovasz condition with the given delta.
fn assert_lll_reduced(basis: &[Vec<BigRational>], delta: &BigRational) {
    let n = basis.len();
    let mut star: Vec<Vec<BigRational>> = Vec::new();
    let mut mu = vec![vec![BigRational::zero(); n]; n];
    for i in 0..n {
        let mut v = basis[i].clone();
        for j in 0..i {
            mu[i][j] = dot(&basis[i], &star[j]) / dot(&star[j], &star[j]);
            for (x, s) in v.iter_mut().zip(&star[j]) {
                *x -= &mu[i][j] * s;
            }
        }
        star.push(v);
    }
    let half = q(1, 2);
    for (i, row) in mu.iter().enumerate() {
        for (j, m) in row[..i].iter().enumerate() {
            assert!(m.abs() <= half, "size reduction fails at ({i},{j})");
        }
    }
    for k in 1..n {
        let lhs = dot(&star[k], &star[k]);
        let rhs = (delta - &mu[k][k - 1] * &mu[k][k - 1]) * dot(&star[k - 1], &star[k - 1]);
        assert!(lhs >= rhs, "Lovasz condition fails at {k}");
    }
}

fn rows_to_rational(m: &IntMatrix) -> Vec<Vec<BigRational>> {
    m.to_columns().into_iter().map(|c| c.into_iter().map(BigRational::from_integer).collect()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn lll_preserves_the_lattice(x in common::nonsingular(1..=5, 40)) {
        // basis vectors are the columns of x
        let basis = rows_to_rational(&x);
        let rb = lll_reduce(&basis, &default_delta()).unwrap();
        prop_assert!(rb.denom().is_one());
        let r = IntMatrix::from_columns(rb.numerators().to_vec()).unwrap();
        // R = X U with U = X^-1 R = adj(X) R / det(X) integral and unimodular
        let det = determinant(&x);
        let u_scaled = adjugate(&x).mul(&r).unwrap();
        for c in u_scaled.columns() {
            for v in c {
                prop_assert!((v % &det).is_zero());
            }
        }
        prop_assert_eq!(determinant(&r).abs(), det.abs());
        assert_lll_reduced(&rows_to_rational(&r), &default_delta());
    }

    #[test]
    fn lll_respects_other_deltas(x in common::nonsingular(2..=4, 30), num in 26i64..99) {
        let delta = q(num, 100);
        let rb = lll_reduce(&rows_to_rational(&x), &delta).unwrap();
        let r = IntMatrix::from_columns(rb.numerators().to_vec()).unwrap();
        assert_lll_reduced(&rows_to_rational(&r), &delta);
    }

    #[test]
    fn inverse_basis_spans_the_inverse_lattice(a in common::primitive(2..=5, 20)) {
        let b = make_gamma_bundle(&a).unwrap();
        prop_assume!(!b.index().is_one());
        let rb = reduced_inverse_basis(&b, &default_delta()).unwrap();
        // every vector v / den satisfies A (v / den) integral, and |det| of the
        // basis is 1 / ind
        let den = rb.denom().clone();
        let vecs = rb.numerators().to_vec();
        for v in &vecs {
            for x in a.mul_vec(v) {
                prop_assert!((x % &den).is_zero());
            }
        }
        let m = IntMatrix::from_columns(vecs).unwrap();
        let d = a.rows() as u32;
        prop_assert_eq!(determinant(&m).abs() * b.index(), den.pow(d));
    }

    #[test]
    fn adjusted_direction_is_admissible(a in common::primitive(2..=5, 20), linf in any::<bool>()) {
        let b = make_gamma_bundle(&a).unwrap();
        prop_assume!(!b.index().is_one());
        let norm = if linf { Norm::Infinity } else { Norm::One };
        let dir = pick_beta(&b, norm, true, &default_delta()).unwrap();
        let half = q(1, 2);
        prop_assert!(dir.beta.entries().iter().all(|k| k.abs() <= half));
        prop_assert!(!dir.beta.is_zero());
        prop_assert!(gcd_all(&dir.gamma).is_one());
        let scaled: Vec<BigInt> = dir.gamma.iter().map(|g| g * dir.beta.denom()).collect();
        prop_assert_eq!(a.mul_vec(dir.beta.numer()), scaled);
    }

    #[test]
    fn round_adjust_lands_in_half_interval(num in proptest::collection::vec(-50i64..50, 1..6), den in 1i64..12) {
        let beta = CoefficientVector::from_i64(&num, den);
        match round_adjust(&beta) {
            Ok(out) => {
                let half = q(1, 2);
                for (k, o) in beta.entries().iter().zip(out.entries()) {
                    prop_assert!(o.abs() <= half);
                    prop_assert!((k - &o).is_integer());
                }
            }
            Err(_) => prop_assert!(beta.is_integral()),
        }
    }
}

#[test]
fn round_adjust_ties() {
    // 3/2 rounds to 1 and -3/2 to -1
    let out = round_adjust(&CoefficientVector::from_i64(&[1, -1, 3, -3, 1], 2)).unwrap();
    assert_eq!(out, CoefficientVector::from_i64(&[1, -1, 1, -1, 1], 2));
}
