//! LLL reduction of `L(A^-1)` and the choice of the decomposition
//! direction `beta`.
//!
//! The reduction runs entirely over the integers (Cohen's integral LLL):
//! a rational basis is scaled by a common denominator first, which does
//! not change which vectors are short.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{gcd_all, GammaBundle, IntMatrix};

/// A rational vector `numer / denom` kept in lowest terms with a positive
/// common denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CoefficientVector {
    numer: Vec<BigInt>,
    denom: BigInt,
}

impl CoefficientVector {
    pub fn new(numer: Vec<BigInt>, denom: BigInt) -> Self {
        assert!(!denom.is_zero(), "zero denominator");
        let mut v = CoefficientVector { numer, denom };
        v.normalize();
        v
    }

    pub fn from_i64(numer: &[i64], denom: i64) -> Self {
        Self::new(numer.iter().map(|&x| BigInt::from(x)).collect(), BigInt::from(denom))
    }

    pub fn from_rationals(entries: &[BigRational]) -> Self {
        let denom = entries.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let numer = entries.iter().map(|q| q.numer() * (&denom / q.denom())).collect();
        Self::new(numer, denom)
    }

    fn normalize(&mut self) {
        if self.denom.is_negative() {
            self.denom = -std::mem::take(&mut self.denom);
            for x in &mut self.numer {
                *x = -std::mem::take(x);
            }
        }
        let g = gcd_all(self.numer.iter().chain(std::iter::once(&self.denom)));
        if !g.is_one() {
            self.denom /= &g;
            for x in &mut self.numer {
                *x /= &g;
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.numer.len()
    }

    pub fn numer(&self) -> &[BigInt] {
        &self.numer
    }

    pub fn denom(&self) -> &BigInt {
        &self.denom
    }

    pub fn entry(&self, i: usize) -> BigRational {
        BigRational::new(self.numer[i].clone(), self.denom.clone())
    }

    pub fn entries(&self) -> Vec<BigRational> {
        (0..self.dim()).map(|i| self.entry(i)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.numer.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.denom.is_one()
    }

    pub fn neg(&self) -> Self {
        CoefficientVector { numer: self.numer.iter().map(|x| -x).collect(), denom: self.denom.clone() }
    }

    /// `self / s` for a positive integer `s`.
    pub fn div_int(&self, s: &BigInt) -> Self {
        Self::new(self.numer.clone(), &self.denom * s)
    }

    pub fn norm(&self, norm: Norm) -> BigRational {
        BigRational::new(norm.of(&self.numer), self.denom.clone())
    }
}

impl fmt::Debug for CoefficientVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries().iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Norm {
    #[serde(rename = "l1")]
    One,
    #[serde(rename = "linf")]
    Infinity,
}

impl Norm {
    pub const ALL: [Norm; 2] = [Norm::One, Norm::Infinity];

    pub fn name(self) -> &'static str {
        match self {
            Norm::One => "l1",
            Norm::Infinity => "linf",
        }
    }

    fn of(self, v: &[BigInt]) -> BigInt {
        match self {
            Norm::One => v.iter().map(BigInt::abs).sum(),
            Norm::Infinity => v.iter().map(BigInt::abs).max().unwrap_or_default(),
        }
    }
}

/// A decomposition direction: `beta` together with `gamma = A * beta`,
/// where `gamma` is a primitive integer vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Direction {
    pub beta: CoefficientVector,
    pub gamma: Vec<BigInt>,
}

impl Direction {
    /// Computes `gamma = A * beta`, checks integrality, and rescales both
    /// by the gcd of `gamma` so that `gamma` is primitive.
    pub fn new(a: &IntMatrix, beta: CoefficientVector) -> Result<Self> {
        if beta.dim() != a.cols() {
            return Err(Error::DimensionMismatch { expected: a.cols(), found: beta.dim() });
        }
        if beta.is_zero() {
            return Err(Error::ZeroDirection);
        }
        let scaled = a.mul_vec(beta.numer());
        let mut gamma = Vec::with_capacity(scaled.len());
        for x in scaled {
            let (q, r) = x.div_rem(beta.denom());
            if !r.is_zero() {
                return Err(Error::NonIntegralDirection);
            }
            gamma.push(q);
        }
        let g = gcd_all(&gamma);
        if g.is_zero() {
            // A nonsingular and beta nonzero imply gamma nonzero
            return Err(Error::Singular);
        }
        if g.is_one() {
            return Ok(Direction { beta, gamma });
        }
        for x in &mut gamma {
            *x /= &g;
        }
        Ok(Direction { beta: beta.div_int(&g), gamma })
    }

    pub fn neg(&self) -> Direction {
        Direction { beta: self.beta.neg(), gamma: self.gamma.iter().map(|x| -x).collect() }
    }
}

/// An LLL-reduced basis `delta_1..delta_d`, stored as integer vectors over
/// a common positive denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedBasis {
    vectors: Vec<Vec<BigInt>>,
    denom: BigInt,
}

impl ReducedBasis {
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn vector(&self, i: usize) -> CoefficientVector {
        CoefficientVector::new(self.vectors[i].clone(), self.denom.clone())
    }

    /// Common positive denominator of the basis vectors.
    pub fn denom(&self) -> &BigInt {
        &self.denom
    }

    /// Numerators over [`ReducedBasis::denom`].
    pub fn numerators(&self) -> &[Vec<BigInt>] {
        &self.vectors
    }

    pub fn vectors(&self) -> Vec<CoefficientVector> {
        (0..self.dim()).map(|i| self.vector(i)).collect()
    }

    /// Basis vector indices ordered by increasing norm, ties by index.
    pub fn order_by(&self, norm: Norm) -> Vec<usize> {
        let norms: Vec<BigInt> = self.vectors.iter().map(|v| norm.of(v)).collect();
        let mut idx: Vec<usize> = (0..self.dim()).collect();
        idx.sort_by(|&i, &j| norms[i].cmp(&norms[j]).then(i.cmp(&j)));
        idx
    }
}

/// Default Lovász parameter `99/100`.
pub fn default_delta() -> BigRational {
    BigRational::new(BigInt::from(99), BigInt::from(100))
}

fn check_delta(delta: &BigRational) -> Result<()> {
    let quarter = BigRational::new(BigInt::one(), BigInt::from(4));
    if *delta <= quarter || *delta >= BigRational::one() {
        return Err(Error::InvalidDelta);
    }
    Ok(())
}

/// LLL-reduces the lattice spanned by `basis` (a list of vectors).
pub fn lll_reduce(basis: &[Vec<BigRational>], delta: &BigRational) -> Result<ReducedBasis> {
    check_delta(delta)?;
    let n = basis.len();
    if basis.iter().any(|v| v.len() != n) {
        return Err(Error::NotSquare { rows: basis.first().map_or(0, Vec::len), cols: n });
    }
    let denom = basis.iter().flatten().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let mut vectors: Vec<Vec<BigInt>> =
        basis.iter().map(|v| v.iter().map(|q| q.numer() * (&denom / q.denom())).collect()).collect();
    integral_lll(&mut vectors, delta)?;
    Ok(ReducedBasis { vectors, denom })
}

/// Cohen's integral LLL (Algorithm 2.6.7). Reduces `b` in place; fails
/// if the vectors are linearly dependent.
pub(crate) fn integral_lll(b: &mut [Vec<BigInt>], delta: &BigRational) -> Result<()> {
    let n = b.len();
    if n == 0 {
        return Ok(());
    }
    let (p, q) = (delta.numer(), delta.denom());
    let dot = |x: &[BigInt], y: &[BigInt]| -> BigInt { x.iter().zip(y).map(|(a, b)| a * b).sum() };

    // d[0] = 1; d[i + 1] is the Gram determinant of the first i + 1 vectors
    let mut d = vec![BigInt::zero(); n + 1];
    d[0] = BigInt::one();
    d[1] = dot(&b[0], &b[0]);
    if d[1].is_zero() {
        return Err(Error::Singular);
    }
    // lambda[k][j], j < k
    let mut lambda = vec![vec![BigInt::zero(); n]; n];
    let mut k = 1usize;
    let mut kmax = 0usize;

    while k < n {
        if k > kmax {
            kmax = k;
            for j in 0..=k {
                let mut u = dot(&b[k], &b[j]);
                for i in 0..j {
                    u = (&d[i + 1] * &u - &lambda[k][i] * &lambda[j][i]) / &d[i];
                }
                if j < k {
                    lambda[k][j] = u;
                } else {
                    if u.is_zero() {
                        return Err(Error::Singular);
                    }
                    d[k + 1] = u;
                }
            }
        }
        size_reduce(b, &mut lambda, &d, k, k - 1);
        // Lovasz: q * d_k * d_{k-2} < p * d_{k-1}^2 - q * lambda^2  =>  swap
        let lhs = q * &d[k + 1] * &d[k - 1];
        let rhs = p * &d[k] * &d[k] - q * &lambda[k][k - 1] * &lambda[k][k - 1];
        if lhs < rhs {
            swap(b, &mut lambda, &mut d, k, kmax);
            if k > 1 {
                k -= 1;
            }
        } else {
            for l in (0..k.saturating_sub(1)).rev() {
                size_reduce(b, &mut lambda, &d, k, l);
            }
            k += 1;
        }
    }
    Ok(())
}

fn size_reduce(b: &mut [Vec<BigInt>], lambda: &mut [Vec<BigInt>], d: &[BigInt], k: usize, l: usize) {
    let den = &d[l + 1];
    let twice: BigInt = &lambda[k][l] * 2;
    if twice.abs() <= *den {
        return;
    }
    // nearest integer to lambda / den
    let r = (&twice + den).div_floor(&(den * 2));
    let (head, tail) = b.split_at_mut(k);
    for (x, y) in tail[0].iter_mut().zip(&head[l]) {
        *x -= &r * y;
    }
    lambda[k][l] -= &r * den;
    let (head, tail) = lambda.split_at_mut(k);
    for (x, y) in tail[0][..l].iter_mut().zip(&head[l][..l]) {
        *x -= &r * y;
    }
}

fn swap(b: &mut [Vec<BigInt>], lambda: &mut [Vec<BigInt>], d: &mut [BigInt], k: usize, kmax: usize) {
    b.swap(k, k - 1);
    let (head, tail) = lambda.split_at_mut(k);
    let j_end = k.saturating_sub(1);
    for (x, y) in tail[0][..j_end].iter_mut().zip(&mut head[k - 1][..j_end]) {
        std::mem::swap(x, y);
    }
    let lam = lambda[k][k - 1].clone();
    let bb = (&d[k - 1] * &d[k + 1] + &lam * &lam) / &d[k];
    for row in &mut lambda[k + 1..=kmax] {
        let t = row[k].clone();
        row[k] = (&d[k + 1] * &row[k - 1] - &lam * &t) / &d[k];
        row[k - 1] = (&bb * &t + &lam * &row[k]) / &d[k + 1];
    }
    d[k] = bb;
}

/// The basis vector of smallest `norm`, ties broken by lowest index.
pub fn select_direction(rb: &ReducedBasis, norm: Norm) -> CoefficientVector {
    rb.vector(rb.order_by(norm)[0])
}

/// Replaces every entry `k` by `k - round(k)` (nearest integer, ties
/// toward zero), so all entries end up in `[-1/2, 1/2]`. Fails with
/// [`Error::ZeroDirection`] when the input was integral.
pub fn round_adjust(beta: &CoefficientVector) -> Result<CoefficientVector> {
    let den = beta.denom();
    let twice_den: BigInt = den * 2;
    let numer: Vec<BigInt> = beta
        .numer()
        .iter()
        .map(|n| {
            let (quot, r) = n.div_mod_floor(den);
            let twice_r: BigInt = &r * 2;
            match twice_r.cmp(den) {
                Ordering::Less => r,
                Ordering::Greater => r - den,
                // k = quot + 1/2: rounding toward zero keeps the sign of k
                Ordering::Equal if !quot.is_negative() => r,
                Ordering::Equal => r - den,
            }
        })
        .collect();
    debug_assert!(numer.iter().all(|x| (x * BigInt::from(2)).abs() <= twice_den));
    let out = CoefficientVector::new(numer, den.clone());
    if out.is_zero() {
        return Err(Error::ZeroDirection);
    }
    Ok(out)
}

/// LLL-reduced basis of `L(A^-1)` for the bundle's matrix, computed from
/// the integer basis `adj(A)` (columns), which spans `det(A) * L(A^-1)`.
pub fn reduced_inverse_basis(bundle: &GammaBundle, delta: &BigRational) -> Result<ReducedBasis> {
    check_delta(delta)?;
    let adj_t = bundle.adjugate_transpose();
    // columns of adj(A) are the columns of adj(A)^T read as rows
    let mut vectors: Vec<Vec<BigInt>> = (0..adj_t.rows()).map(|r| adj_t.row(r)).collect();
    integral_lll(&mut vectors, delta)?;
    let mut denom = bundle.det_a().clone();
    if denom.is_negative() {
        denom = -denom;
        for v in &mut vectors {
            for x in v.iter_mut() {
                *x = -std::mem::take(x);
            }
        }
    }
    Ok(ReducedBasis { vectors, denom })
}

/// The coefficient vector `pick_beta` starts from: reduce `L(A^-1)`, walk
/// the basis in `norm` order and take the first vector that survives the
/// (optional) rounding adjustment and is not integral. The result is not
/// yet scaled to make `A * beta` primitive.
pub fn select_beta(bundle: &GammaBundle, norm: Norm, adjust: bool, delta: &BigRational) -> Result<CoefficientVector> {
    if bundle.det_a().abs().is_one() {
        return Err(Error::AlreadyUnimodular);
    }
    let rb = reduced_inverse_basis(bundle, delta)?;
    for idx in rb.order_by(norm) {
        let cand = rb.vector(idx);
        if adjust {
            match round_adjust(&cand) {
                Ok(b) => return Ok(b),
                Err(Error::ZeroDirection) => continue,
                Err(e) => return Err(e),
            }
        } else if !cand.is_integral() {
            return Ok(cand);
        }
    }
    // A basis of a lattice strictly containing Z^d has a non-integral member.
    unreachable!("every reduced basis vector is integral although the index exceeds one")
}

/// Chooses the decomposition direction for a non-unimodular cone:
/// [`select_beta`] followed by rescaling so that `gamma` is primitive.
pub fn pick_beta(bundle: &GammaBundle, norm: Norm, adjust: bool, delta: &BigRational) -> Result<Direction> {
    let beta = select_beta(bundle, norm, adjust, delta)?;
    Direction::new(bundle.a(), beta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::make_gamma_bundle;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn rb(vectors: &[&[i64]], denom: i64) -> ReducedBasis {
        ReducedBasis {
            vectors: vectors.iter().map(|v| v.iter().map(|&x| BigInt::from(x)).collect()).collect(),
            denom: denom.into(),
        }
    }

    #[test]
    fn select_by_norm() {
        let basis = rb(&[&[3, 3, 0], &[4, 0, 0]], 6);
        assert_eq!(select_direction(&basis, Norm::Infinity), CoefficientVector::from_i64(&[1, 1, 0], 2));
        assert_eq!(select_direction(&basis, Norm::One), CoefficientVector::from_i64(&[2, 0, 0], 3));
        let id = rb(&[&[1, 0], &[0, 1]], 1);
        for n in [Norm::One, Norm::Infinity] {
            assert_eq!(select_direction(&id, n), CoefficientVector::from_i64(&[1, 0], 1));
        }
    }

    #[test]
    fn round_adjust_cases() {
        let r = round_adjust(&CoefficientVector::from_i64(&[2, -1], 3)).unwrap();
        assert_eq!(r, CoefficientVector::from_i64(&[-1, -1], 3));
        let same = CoefficientVector::from_i64(&[1, -1, 0], 3);
        assert_eq!(round_adjust(&same).unwrap(), same);
        assert!(matches!(round_adjust(&CoefficientVector::from_i64(&[1, 0], 1)), Err(Error::ZeroDirection)));
    }

    #[test]
    fn round_adjust_ties_go_toward_zero() {
        let r = round_adjust(&CoefficientVector::from_i64(&[1, 3, -3, -1], 2)).unwrap();
        assert_eq!(r, CoefficientVector::from_i64(&[1, 1, -1, -1], 2));
    }

    #[test]
    fn lll_of_identity_is_identity() {
        let basis = vec![vec![q(1, 1), q(0, 1)], vec![q(0, 1), q(1, 1)]];
        let r = lll_reduce(&basis, &default_delta()).unwrap();
        assert_eq!(r.vectors(), vec![CoefficientVector::from_i64(&[1, 0], 1), CoefficientVector::from_i64(&[0, 1], 1)]);
    }

    #[test]
    fn lll_rejects_bad_delta_and_dependence() {
        let basis = vec![vec![q(1, 1), q(0, 1)], vec![q(0, 1), q(1, 1)]];
        assert!(matches!(lll_reduce(&basis, &q(1, 4)), Err(Error::InvalidDelta)));
        assert!(matches!(lll_reduce(&basis, &q(1, 1)), Err(Error::InvalidDelta)));
        let dep = vec![vec![q(1, 2), q(1, 1)], vec![q(1, 1), q(2, 1)]];
        assert!(matches!(lll_reduce(&dep, &default_delta()), Err(Error::Singular)));
    }

    #[test]
    fn pick_beta_index_two() {
        let a = IntMatrix::from_i64_columns(&[[1, 0], [1, 2]]);
        let b = make_gamma_bundle(&a).unwrap();
        let dir = pick_beta(&b, Norm::One, true, &default_delta()).unwrap();
        assert!(dir.beta.numer().iter().all(|x| (x * BigInt::from(2)).abs() <= *dir.beta.denom()));
        // either (1,1) or (0,1) up to sign, depending on the reduced basis
        assert!(gcd_all(&dir.gamma).is_one());
        assert_eq!(a.mul_vec(dir.beta.numer()), dir.gamma.iter().map(|g| g * dir.beta.denom()).collect::<Vec<_>>());
        let unimodular = make_gamma_bundle(&IntMatrix::identity(2)).unwrap();
        assert!(matches!(pick_beta(&unimodular, Norm::One, true, &default_delta()), Err(Error::AlreadyUnimodular)));
    }

    #[test]
    fn direction_primitivizes_gamma() {
        let a = IntMatrix::identity(2);
        let dir = Direction::new(&a, CoefficientVector::from_i64(&[2, 4], 1)).unwrap();
        assert_eq!(dir.gamma, vec![BigInt::from(1), BigInt::from(2)]);
        assert_eq!(dir.beta, CoefficientVector::from_i64(&[1, 2], 1));
        let a2 = IntMatrix::from_i64_columns(&[[1, 0], [1, 2]]);
        assert!(matches!(
            Direction::new(&a2, CoefficientVector::from_i64(&[1, 0], 2)),
            Err(Error::NonIntegralDirection)
        ));
    }
}
