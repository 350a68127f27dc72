//! Exact integer matrices and the kernels the decomposition consumes:
//! determinant, adjugate, primitive reduction, cone duality and the
//! cached [`GammaBundle`].
//!
//! Matrices are stored column-major because columns are cone generators.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::CoefficientVector;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m.data[i * dim + i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from its columns. All columns must have equal length.
    pub fn from_columns(columns: Vec<Vec<BigInt>>) -> Result<Self> {
        let cols = columns.len();
        let rows = columns.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows * cols);
        for c in columns {
            if c.len() != rows {
                return Err(Error::DimensionMismatch { expected: rows, found: c.len() });
            }
            data.extend(c);
        }
        Ok(IntMatrix { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        Ok(Self::from_columns(rows)?.transpose())
    }

    /// Convenience constructor for small literal matrices given by columns.
    pub fn from_i64_columns<C: AsRef<[i64]>>(columns: &[C]) -> Self {
        let cols = columns.iter().map(|c| c.as_ref().iter().map(|&x| BigInt::from(x)).collect()).collect();
        Self::from_columns(cols).expect("ragged literal matrix")
    }

    pub fn from_i64_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        Self::from_i64_columns(rows).transpose()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Dimension of a square matrix.
    pub fn dim(&self) -> usize {
        debug_assert!(self.is_square());
        self.cols
    }

    pub fn col(&self, j: usize) -> &[BigInt] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn col_mut(&mut self, j: usize) -> &mut [BigInt] {
        &mut self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn columns(&self) -> impl Iterator<Item = &[BigInt]> {
        (0..self.cols).map(move |j| self.col(j))
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[c * self.rows + r]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.data[c * self.rows + r] = v;
    }

    pub fn row(&self, r: usize) -> Vec<BigInt> {
        (0..self.cols).map(|c| self.get(r, c).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|r| self.row(r)).collect()
    }

    pub fn to_columns(&self) -> Vec<Vec<BigInt>> {
        self.columns().map(<[BigInt]>::to_vec).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for c in 0..self.cols {
            for r in 0..self.rows {
                t.data[r * self.cols + c] = self.get(r, c).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        let cols = other.columns().map(|c| self.mul_vec(c)).collect();
        IntMatrix::from_columns(cols).map(|mut m| {
            // zero-column products still need the right row count
            m.rows = self.rows;
            m
        })
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols, "vector length must match column count");
        let mut out = vec![BigInt::zero(); self.rows];
        for (c, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (o, a) in out.iter_mut().zip(self.col(c)) {
                *o += a * x;
            }
        }
        out
    }

    /// `self` with column `j` replaced by `v`.
    pub fn with_column(&self, j: usize, v: &[BigInt]) -> IntMatrix {
        let mut m = self.clone();
        m.col_mut(j).clone_from_slice(v);
        m
    }

    /// `self` with the listed columns negated.
    pub fn with_negated_columns(&self, which: &[usize]) -> IntMatrix {
        let mut m = self.clone();
        for &j in which {
            for x in m.col_mut(j) {
                *x = -std::mem::take(x);
            }
        }
        m
    }

    /// `self` with column `j` removed.
    pub fn without_column(&self, j: usize) -> IntMatrix {
        let cols = self.columns().enumerate().filter(|&(c, _)| c != j).map(|(_, c)| c.to_vec()).collect();
        let mut m = IntMatrix::from_columns(cols).expect("columns share a length");
        m.rows = self.rows;
        m
    }

    pub fn max_abs(&self) -> BigInt {
        self.data.iter().map(BigInt::abs).max().unwrap_or_default()
    }

    fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare { rows: self.rows, cols: self.cols })
        }
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.columns().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "(")?;
            for (k, x) in c.iter().enumerate() {
                if k > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, ")")?;
        }
        write!(f, "]")
    }
}

/// gcd of the absolute values; `gcd(0, x) = |x|`.
pub fn gcd_all<'a, I: IntoIterator<Item = &'a BigInt>>(xs: I) -> BigInt {
    let mut g = BigInt::zero();
    for x in xs {
        if !x.is_zero() {
            g = g.gcd(x);
            if g.is_one() {
                break;
            }
        }
    }
    g
}

/// Exact determinant: cofactor expansion for d <= 3, fraction-free
/// (Bareiss) elimination above that. Singular input yields zero.
///
/// Panics if the matrix is not square.
pub fn determinant(m: &IntMatrix) -> BigInt {
    let d = m.require_square().expect("determinant of a non-square matrix");
    match d {
        0 => BigInt::one(),
        1 => m.get(0, 0).clone(),
        2 => m.get(0, 0) * m.get(1, 1) - m.get(0, 1) * m.get(1, 0),
        3 => {
            let e = |r, c| m.get(r, c);
            e(0, 0) * (e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1)) - e(0, 1) * (e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0))
                + e(0, 2) * (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0))
        }
        _ => bareiss(m.to_rows()),
    }
}

fn bareiss(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        let (head, tail) = a.split_at_mut(k + 1);
        let pivot_row = &head[k];
        for row in tail.iter_mut() {
            let lead = std::mem::take(&mut row[k]);
            for j in k + 1..n {
                let v = &row[j] * &pivot_row[k] - &lead * &pivot_row[j];
                row[j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let det = std::mem::take(&mut a[n - 1][n - 1]);
    if negate {
        -det
    } else {
        det
    }
}

/// Classical adjugate (transposed cofactor matrix); defined for singular
/// input too.
pub fn adjugate(m: &IntMatrix) -> IntMatrix {
    let d = m.require_square().expect("adjugate of a non-square matrix");
    if d == 1 {
        return IntMatrix::identity(1);
    }
    let mut adj = IntMatrix::zeros(d, d);
    for r in 0..d {
        for c in 0..d {
            let minor: Vec<Vec<BigInt>> = (0..d)
                .filter(|&i| i != r)
                .map(|i| (0..d).filter(|&j| j != c).map(|j| m.get(i, j).clone()).collect())
                .collect();
            let cof = determinant(&IntMatrix::from_rows(minor).expect("square minor"));
            // adj[c][r] = (-1)^(r+c) * M_rc
            adj.set(c, r, if (r + c) % 2 == 0 { cof } else { -cof });
        }
    }
    adj
}

/// Scales every column to a primitive vector; the generated cone is
/// unchanged.
pub fn primitive_reduce(m: &IntMatrix) -> Result<IntMatrix> {
    let mut out = m.clone();
    for j in 0..m.cols() {
        let g = gcd_all(m.col(j));
        if g.is_zero() {
            return Err(Error::ZeroColumn(j));
        }
        if !g.is_one() {
            for x in out.col_mut(j) {
                *x /= &g;
            }
        }
    }
    Ok(out)
}

/// Whether every column is primitive.
pub fn is_primitive(m: &IntMatrix) -> bool {
    m.columns().all(|c| gcd_all(c).is_one())
}

/// Generators of the dual cone: the primitive reduction of `(A^-1)^T`,
/// computed as `sign(det A)` times the columnwise primitive reduction of
/// `adj(A)^T`. Columns follow the order of `adj(A)^T`.
pub fn dual(a: &IntMatrix) -> Result<IntMatrix> {
    a.require_square()?;
    let det = determinant(a);
    if det.is_zero() {
        return Err(Error::Singular);
    }
    let adj_t = adjugate(a).transpose();
    let mut out = primitive_reduce(&adj_t)?;
    if det.is_negative() {
        out = out.with_negated_columns(&(0..out.cols()).collect::<Vec<_>>());
    }
    Ok(out)
}

/// The cached tuple `(A, det A, A*, det A*, G)` with `A* * G = adj(A)^T`
/// and `G` diagonal. `g` stores the diagonal of `G`; its entries carry
/// the sign of `det A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaBundle {
    a: IntMatrix,
    det_a: BigInt,
    a_star: IntMatrix,
    det_a_star: BigInt,
    g: Vec<BigInt>,
}

impl GammaBundle {
    /// Builds the bundle from scratch. `a` must be square, nonsingular and
    /// primitive.
    pub fn new(a: IntMatrix) -> Result<Self> {
        a.require_square()?;
        if a.columns().any(|c| c.iter().all(Zero::is_zero)) {
            return Err(Error::Singular);
        }
        if let Some(j) = a.columns().position(|c| !gcd_all(c).is_one()) {
            return Err(Error::NotPrimitive(j));
        }
        let det_a = determinant(&a);
        if det_a.is_zero() {
            return Err(Error::Singular);
        }
        let adj_t = adjugate(&a).transpose();
        Ok(Self::from_adjugate_transpose(a, det_a, adj_t))
    }

    fn from_adjugate_transpose(a: IntMatrix, det_a: BigInt, mut adj_t: IntMatrix) -> Self {
        let d = a.dim();
        let negative = det_a.is_negative();
        let mut g = Vec::with_capacity(d);
        for j in 0..d {
            let mut gj = gcd_all(adj_t.col(j));
            if negative {
                gj = -gj;
            }
            for x in adj_t.col_mut(j) {
                *x /= &gj;
            }
            g.push(gj);
        }
        // det(adj A) = det(A)^(d-1) = det(A*) * prod(g)
        let prod_g: BigInt = g.iter().product();
        let (det_a_star, rem) = det_a.pow(d as u32 - 1).div_rem(&prod_g);
        debug_assert!(rem.is_zero());
        GammaBundle { a, det_a, a_star: adj_t, det_a_star, g }
    }

    pub fn a(&self) -> &IntMatrix {
        &self.a
    }

    pub fn det_a(&self) -> &BigInt {
        &self.det_a
    }

    pub fn a_star(&self) -> &IntMatrix {
        &self.a_star
    }

    pub fn det_a_star(&self) -> &BigInt {
        &self.det_a_star
    }

    /// Diagonal of `G`.
    pub fn g(&self) -> &[BigInt] {
        &self.g
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    /// Index of the cone generated by `a`.
    pub fn index(&self) -> BigInt {
        self.det_a.abs()
    }

    /// Index of the dual cone.
    pub fn dual_index(&self) -> BigInt {
        self.det_a_star.abs()
    }

    /// `adj(A)^T = A* * G`, recovered in O(d^2).
    pub fn adjugate_transpose(&self) -> IntMatrix {
        let mut m = self.a_star.clone();
        for (j, gj) in self.g.iter().enumerate() {
            for x in m.col_mut(j) {
                *x *= gj;
            }
        }
        m
    }

    /// `Gamma(A*)`, reusing the cached data: `G1 = G * det(A*) / det(A)`.
    pub fn dual(&self) -> GammaBundle {
        let g = self
            .g
            .iter()
            .map(|gj| {
                let (q, r) = (gj * &self.det_a_star).div_rem(&self.det_a);
                debug_assert!(r.is_zero(), "G1 must be integral");
                q
            })
            .collect();
        GammaBundle {
            a: self.a_star.clone(),
            det_a: self.det_a_star.clone(),
            a_star: self.a.clone(),
            det_a_star: self.det_a.clone(),
            g,
        }
    }

    /// Bundle of `A[(i -> gamma)]` where `gamma = A * beta`, via the
    /// rank-one adjugate update `adj(B) = k_i (e_1, .., xi, .., e_d) adj(A)`.
    ///
    /// `beta` is rescaled by a positive factor so that `gamma` is
    /// primitive; afterwards `det B = k_i det A`.
    pub fn update(&self, i: usize, beta: &CoefficientVector) -> Result<GammaBundle> {
        let d = self.dim();
        if i >= d {
            return Err(Error::OutOfRange { index: i + 1, max: d });
        }
        if beta.dim() != d {
            return Err(Error::DimensionMismatch { expected: d, found: beta.dim() });
        }
        let dir = crate::lattice::Direction::new(&self.a, beta.clone())?;
        if dir.beta.numer()[i].is_zero() {
            return Err(Error::ZeroCoefficient(i));
        }
        Ok(self.update_unchecked(i, &dir.beta, &dir.gamma))
    }

    /// As [`GammaBundle::update`], for a direction already known to be
    /// admissible with `gamma = A * beta` primitive.
    pub(crate) fn update_unchecked(&self, i: usize, beta: &CoefficientVector, gamma: &[BigInt]) -> GammaBundle {
        let d = self.dim();
        let n = beta.numer();
        let den = beta.denom();
        let adj_t = self.adjugate_transpose();
        // Column r of adj(B)^T is row r of adj(B).
        let pivot = adj_t.col(i).to_vec();
        let mut new_t = adj_t;
        for r in 0..d {
            if r == i {
                continue;
            }
            let col = new_t.col_mut(r);
            for (x, p) in col.iter_mut().zip(&pivot) {
                let v = &n[i] * &*x - &n[r] * p;
                let (q, rem) = v.div_rem(den);
                assert!(rem.is_zero(), "updated adjugate must be integral");
                *x = q;
            }
        }
        let (det_b, rem) = (&n[i] * &self.det_a).div_rem(den);
        assert!(rem.is_zero(), "updated determinant must be integral");
        let b = self.a.with_column(i, gamma);
        Self::from_adjugate_transpose(b, det_b, new_t)
    }

    /// Bundle of `A` with the listed columns negated.
    pub fn negate_columns(&self, which: &[usize]) -> GammaBundle {
        if which.is_empty() {
            return self.clone();
        }
        let flip = which.len() % 2 == 1;
        let neg = |x: &BigInt| if flip { -x } else { x.clone() };
        GammaBundle {
            a: self.a.with_negated_columns(which),
            det_a: neg(&self.det_a),
            a_star: self.a_star.with_negated_columns(which),
            det_a_star: neg(&self.det_a_star),
            g: self.g.iter().map(neg).collect(),
        }
    }
}

/// Builds `Gamma(a)` from scratch.
pub fn make_gamma_bundle(a: &IntMatrix) -> Result<GammaBundle> {
    GammaBundle::new(a.clone())
}

/// `Gamma(A*)` from `Gamma(A)` without recomputing an adjugate.
pub fn dual_gamma_bundle(b: &GammaBundle) -> GammaBundle {
    b.dual()
}

/// Bundle of `A[(i -> A*beta)]`; see [`GammaBundle::update`].
pub fn update_gamma_bundle(b: &GammaBundle, i: usize, beta: &CoefficientVector) -> Result<GammaBundle> {
    b.update(i, beta)
}
