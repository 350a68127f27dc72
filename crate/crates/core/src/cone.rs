//! Signed and half-open simplicial cones and the single-step
//! decompositions built on them.

use std::collections::BTreeSet;
use std::ops::Mul;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{CoefficientVector, Direction};
use crate::linalg::{determinant, primitive_reduce, IntMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn of_parity(n: usize) -> Sign {
        if n.is_multiple_of(2) {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn from_i64(x: i64) -> Option<Sign> {
        match x {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignedCone {
    pub sign: Sign,
    pub generators: IntMatrix,
}

/// Simplicial cone at the origin whose facets listed in `open` (0-based
/// column positions) are strict. The generators may have fewer columns
/// than rows (lower-dimensional faces).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfOpenCone {
    generators: IntMatrix,
    open: BTreeSet<usize>,
}

impl HalfOpenCone {
    pub fn new(generators: IntMatrix, open: impl IntoIterator<Item = usize>) -> Result<Self> {
        let open: BTreeSet<usize> = open.into_iter().collect();
        if let Some(&bad) = open.iter().find(|&&i| i >= generators.cols()) {
            return Err(Error::OutOfRange { index: bad + 1, max: generators.cols() });
        }
        Ok(HalfOpenCone { generators, open })
    }

    pub fn closed(generators: IntMatrix) -> Self {
        HalfOpenCone { generators, open: BTreeSet::new() }
    }

    pub fn generators(&self) -> &IntMatrix {
        &self.generators
    }

    pub fn open_set(&self) -> &BTreeSet<usize> {
        &self.open
    }

    pub fn is_open(&self, i: usize) -> bool {
        self.open.contains(&i)
    }
}

/// One child of a single decomposition step, described relative to the
/// parent: replace column `column` by `gamma` (or `-gamma`) and negate the
/// columns in `negated`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct ChildPlan {
    pub sign: Sign,
    pub column: usize,
    pub negate_gamma: bool,
    pub negated: Vec<usize>,
}

/// Closed-form primal decomposition. Positive coefficients come first in
/// ascending index order, then negative ones; zero coefficients take no
/// part.
pub(crate) fn primal_plan(beta: &CoefficientVector) -> Vec<ChildPlan> {
    let pos: Vec<usize> = (0..beta.dim()).filter(|&i| beta.numer()[i].is_positive()).collect();
    let neg: Vec<usize> = (0..beta.dim()).filter(|&i| beta.numer()[i].is_negative()).collect();
    let mut plans = Vec::with_capacity(pos.len() + neg.len());
    for (t, &i) in pos.iter().enumerate() {
        plans.push(ChildPlan { sign: Sign::of_parity(t), column: i, negate_gamma: false, negated: pos[..t].to_vec() });
    }
    for (t, &j) in neg.iter().enumerate() {
        plans.push(ChildPlan { sign: Sign::of_parity(t), column: j, negate_gamma: true, negated: neg[..t].to_vec() });
    }
    plans
}

/// Lemma-2.5-style replacement: one child per nonzero coefficient, signed
/// by the coefficient.
pub(crate) fn dual_plan(beta: &CoefficientVector) -> Vec<ChildPlan> {
    (0..beta.dim())
        .filter(|&i| !beta.numer()[i].is_zero())
        .map(|i| ChildPlan {
            sign: if beta.numer()[i].is_positive() { Sign::Plus } else { Sign::Minus },
            column: i,
            negate_gamma: false,
            negated: Vec::new(),
        })
        .collect()
}

fn materialize(a: &IntMatrix, gamma: &[BigInt], plan: &ChildPlan) -> IntMatrix {
    let replacement: Vec<BigInt> = if plan.negate_gamma { gamma.iter().map(|x| -x).collect() } else { gamma.to_vec() };
    a.with_column(plan.column, &replacement).with_negated_columns(&plan.negated)
}

fn require_square(a: &IntMatrix) -> Result<()> {
    if !a.is_square() {
        return Err(Error::NotSquare { rows: a.rows(), cols: a.cols() });
    }
    Ok(())
}

/// `|det|` of the primitive reduction.
pub fn cone_index(a: &IntMatrix) -> Result<BigInt> {
    require_square(a)?;
    let det = determinant(&primitive_reduce(a)?);
    if det.is_zero() {
        return Err(Error::Singular);
    }
    Ok(det.abs())
}

/// Exact membership of an integer point in a (half-open) cone, by solving
/// `A x = m` with rational Gaussian elimination.
pub fn contains(c: &HalfOpenCone, m: &[BigInt]) -> bool {
    match solve_coordinates(c.generators(), m) {
        Some(x) => x.iter().enumerate().all(|(i, xi)| if c.is_open(i) { xi.is_positive() } else { !xi.is_negative() }),
        None => false,
    }
}

/// Unique `x` with `A x = m` for a full-column-rank `A`, or `None` if `m`
/// is outside the column span.
fn solve_coordinates(a: &IntMatrix, m: &[BigInt]) -> Option<Vec<BigRational>> {
    let rows = a.rows();
    let cols = a.cols();
    assert_eq!(m.len(), rows, "point dimension must match the ambient dimension");
    let mut aug: Vec<Vec<BigRational>> = (0..rows)
        .map(|r| {
            let mut row: Vec<BigRational> = (0..cols).map(|c| BigRational::from_integer(a.get(r, c).clone())).collect();
            row.push(BigRational::from_integer(m[r].clone()));
            row
        })
        .collect();
    for c in 0..cols {
        let pivot_row = c;
        let p = (pivot_row..rows).find(|&r| !aug[r][c].is_zero())?;
        aug.swap(pivot_row, p);
        let inv = aug[pivot_row][c].recip();
        for x in aug[pivot_row].iter_mut() {
            *x *= &inv;
        }
        for r in 0..rows {
            if r != pivot_row && !aug[r][c].is_zero() {
                let f = aug[r][c].clone();
                let (pivot, row) = if r < pivot_row {
                    let (head, tail) = aug.split_at_mut(pivot_row);
                    (&tail[0], &mut head[r])
                } else {
                    let (head, tail) = aug.split_at_mut(r);
                    (&head[pivot_row], &mut tail[0])
                };
                for (x, p) in row[c..].iter_mut().zip(&pivot[c..]) {
                    *x -= &f * p;
                }
            }
        }
    }
    if aug[cols..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    Some(aug[..cols].iter().map(|row| row[cols].clone()).collect())
}

/// Signed closed decomposition of `C(A)` along `gamma = A beta`; exact as
/// lattice-point generating functions.
pub fn primal_step(a: &IntMatrix, beta: &CoefficientVector) -> Result<Vec<SignedCone>> {
    require_square(a)?;
    let dir = Direction::new(a, beta.clone())?;
    Ok(primal_plan(&dir.beta)
        .iter()
        .map(|p| SignedCone { sign: p.sign, generators: materialize(a, &dir.gamma, p) })
        .collect())
}

/// Column-replacement decomposition valid modulo lower-dimensional cones.
/// `beta` needs at least one positive entry.
pub fn dual_step(a: &IntMatrix, beta: &CoefficientVector) -> Result<Vec<SignedCone>> {
    require_square(a)?;
    let dir = Direction::new(a, beta.clone())?;
    if !dir.beta.numer().iter().any(Signed::is_positive) {
        return Err(Error::NoPositiveCoefficient);
    }
    Ok(dual_plan(&dir.beta)
        .iter()
        .map(|p| SignedCone { sign: p.sign, generators: materialize(a, &dir.gamma, p) })
        .collect())
}

/// Rewrites a half-open cone as a signed closed cone by negating the open
/// generators.
pub fn half_open_to_closed(c: &HalfOpenCone) -> SignedCone {
    let open: Vec<usize> = c.open.iter().copied().collect();
    SignedCone { sign: Sign::of_parity(open.len()), generators: c.generators.with_negated_columns(&open) }
}

/// The half-open form of [`primal_step`]: every piece carries sign `+1`.
pub fn half_open_primal_step(a: &IntMatrix, beta: &CoefficientVector) -> Result<Vec<HalfOpenCone>> {
    require_square(a)?;
    let dir = Direction::new(a, beta.clone())?;
    let pos: Vec<usize> = (0..a.cols()).filter(|&i| dir.beta.numer()[i].is_positive()).collect();
    let neg: Vec<usize> = (0..a.cols()).filter(|&i| dir.beta.numer()[i].is_negative()).collect();
    let minus_gamma: Vec<BigInt> = dir.gamma.iter().map(|x| -x).collect();
    let mut out = Vec::with_capacity(pos.len() + neg.len());
    for (t, &i) in pos.iter().enumerate() {
        out.push(HalfOpenCone::new(a.with_column(i, &dir.gamma), pos[..t].iter().copied())?);
    }
    for (t, &j) in neg.iter().enumerate() {
        out.push(HalfOpenCone::new(a.with_column(j, &minus_gamma), neg[..t].iter().copied())?);
    }
    Ok(out)
}

/// Partition of `C(A)` by an interior ray `gamma = sum_{i<r} k_i alpha_i`
/// with all `k_i > 0`: piece `i` replaces `alpha_i` by `gamma` and opens the
/// facets `1..i-1`.
pub fn interior_partition(a: &IntMatrix, coeffs: &[BigRational]) -> Result<Vec<HalfOpenCone>> {
    require_square(a)?;
    let d = a.cols();
    if coeffs.is_empty() || coeffs.len() > d {
        return Err(Error::OutOfRange { index: coeffs.len(), max: d });
    }
    if let Some(bad) = coeffs.iter().position(|k| !k.is_positive()) {
        return Err(Error::NonPositiveCoefficient(bad));
    }
    let mut full = coeffs.to_vec();
    full.resize(d, BigRational::zero());
    // only the ray matters: clear denominators so that gamma is integral
    let ray = CoefficientVector::from_rationals(&full);
    let dir = Direction::new(a, CoefficientVector::new(ray.numer().to_vec(), BigInt::from(1)))?;
    (0..coeffs.len()).map(|i| HalfOpenCone::new(a.with_column(i, &dir.gamma), 0..i)).collect()
}

/// Splits `C(A)` into the faces `F_i = C^{[i-1]}(A[(i -> 0)])`,
/// `i = 1..r-1`, and the half-open cone `C^{[r-1]}(A)`. `r` is 1-based.
pub fn face_decomposition(a: &IntMatrix, r: usize) -> Result<(Vec<HalfOpenCone>, HalfOpenCone)> {
    require_square(a)?;
    let d = a.cols();
    if r == 0 || r > d {
        return Err(Error::OutOfRange { index: r, max: d });
    }
    let faces = (0..r - 1).map(|i| HalfOpenCone::new(a.without_column(i), 0..i)).collect::<Result<Vec<_>>>()?;
    Ok((faces, HalfOpenCone::new(a.clone(), 0..r - 1)?))
}
