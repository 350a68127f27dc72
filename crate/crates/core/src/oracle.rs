//! Brute-force ground truth over boxes of lattice points.
//!
//! Membership here is computed from adjugates (Cramer's rule) and shares
//! no code with [`crate::cone::contains`]. Signed sums of closed cones are
//! compared as generating functions: each cone is first rewritten in its
//! lexicographically forward half-open form, flipping every generator whose
//! first nonzero entry is negative (this toggles the facet open and the
//! sign). Two signed sums agree as rational functions exactly when their
//! forward forms agree at every lattice point.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::cone::{half_open_to_closed, HalfOpenCone, SignedCone};
use crate::error::{Error, Result};
use crate::linalg::{adjugate, determinant, IntMatrix};

/// Default scan radius for dimension `d`.
pub fn default_radius(d: usize) -> i64 {
    match d {
        0..=4 => 6,
        5 => 3,
        _ => 2,
    }
}

pub const DEFAULT_PARALLELEPIPED_BUDGET: u64 = 10_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub point: Vec<i64>,
    pub expected: i64,
    pub got: i64,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub context: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub passed: bool,
    pub box_radius: i64,
    pub points_checked: u64,
    #[serde(default)]
    pub points_exempted: u64,
    pub first_failure: Option<Failure>,
}

impl VerifyReport {
    fn new(box_radius: i64) -> Self {
        VerifyReport { passed: true, box_radius, points_checked: 0, points_exempted: 0, first_failure: None }
    }

    fn fail(&mut self, point: &[i64], expected: i64, got: i64, context: &str) {
        self.passed = false;
        if self.first_failure.is_none() {
            self.first_failure = Some(Failure { point: point.to_vec(), expected, got, context: context.to_string() });
        }
    }

    /// Combines two reports over the same box.
    pub fn merge(mut self, other: VerifyReport) -> VerifyReport {
        self.passed &= other.passed;
        self.points_checked += other.points_checked;
        self.points_exempted += other.points_exempted;
        if self.first_failure.is_none() {
            self.first_failure = other.first_failure;
        }
        self
    }
}

/// How a signed sum of cones is compared with its target.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Equivalence {
    /// Raw indicator functions at every point.
    Pointwise,
    /// Raw indicators, ignoring points on any facet hyperplane of any cone
    /// involved.
    ModuloLowerDimensional,
    /// Lattice-point generating functions as rational functions, i.e.
    /// modulo cones containing lines.
    GeneratingFunction,
}

/// One linear form evaluated on integer points, with an `i128` fast path.
#[derive(Clone, Debug)]
struct Form {
    big: Vec<BigInt>,
    fast: Option<Vec<i128>>,
}

impl Form {
    fn new(big: Vec<BigInt>) -> Self {
        let fast = big.iter().map(|x| x.to_i128().filter(|v| v.unsigned_abs() < 1 << 100)).collect();
        Form { big, fast }
    }

    fn sign(&self, m: &[i64]) -> Ordering {
        if let Some(f) = &self.fast {
            let mut acc: i128 = 0;
            let mut ok = true;
            for (a, &x) in f.iter().zip(m) {
                match a.checked_mul(x as i128).and_then(|p| acc.checked_add(p)) {
                    Some(v) => acc = v,
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                return acc.cmp(&0);
            }
        }
        self.value(m).sign_ordering()
    }

    fn value(&self, m: &[i64]) -> BigInt {
        self.big.iter().zip(m).map(|(a, &x)| a * x).sum()
    }
}

trait SignOrdering {
    fn sign_ordering(&self) -> Ordering;
}

impl SignOrdering for BigInt {
    fn sign_ordering(&self) -> Ordering {
        if self.is_positive() {
            Ordering::Greater
        } else if self.is_negative() {
            Ordering::Less
        } else {
            Ordering::Equal
        }
    }
}

/// Constraint on one coordinate of a point in a chart.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Coord {
    NonNeg,
    Pos,
    NonPos,
    Neg,
    Free,
}

impl Coord {
    fn admits(self, s: Ordering) -> bool {
        match self {
            Coord::NonNeg => s != Ordering::Less,
            Coord::Pos => s == Ordering::Greater,
            Coord::NonPos => s != Ordering::Greater,
            Coord::Neg => s == Ordering::Less,
            Coord::Free => true,
        }
    }
}

/// Coordinates of integer points with respect to a set of linearly
/// independent generators, up to a positive common factor.
#[derive(Clone, Debug)]
struct Chart {
    /// `y = coords * m`, with `y_j` a positive multiple of the j-th
    /// coordinate.
    coords: Vec<Form>,
    /// For lower-dimensional generators, `m` lies in the span iff
    /// `span_check[r] * m == 0` for all `r`.
    span_check: Vec<Form>,
}

impl Chart {
    fn new(a: &IntMatrix) -> Result<Chart> {
        if a.is_square() {
            let det = determinant(a);
            if det.is_zero() {
                return Err(Error::Singular);
            }
            let adj = adjugate(a);
            let flip = det.is_negative();
            let coords = (0..a.rows())
                .map(|r| Form::new(adj.row(r).into_iter().map(|x| if flip { -x } else { x }).collect()))
                .collect();
            return Ok(Chart { coords, span_check: Vec::new() });
        }
        // Normal equations: M = A^T A is positive definite for full column
        // rank, x = adj(M) A^T m / det(M), and m is in the span iff A x = m.
        let at = a.transpose();
        let gram = at.mul(a)?;
        let gdet = determinant(&gram);
        if gdet.is_zero() {
            return Err(Error::Singular);
        }
        let proj = adjugate(&gram).mul(&at)?; // n x d
        let coords = (0..proj.rows()).map(|r| Form::new(proj.row(r))).collect();
        // A * proj - det(M) * I must vanish on m
        let mut resid = a.mul(&proj)?;
        for r in 0..resid.rows() {
            let v = resid.get(r, r) - &gdet;
            resid.set(r, r, v);
        }
        let span_check = (0..resid.rows()).map(|r| Form::new(resid.row(r))).collect();
        Ok(Chart { coords, span_check })
    }

    fn forms(&self) -> impl Iterator<Item = &Form> {
        self.coords.iter().chain(&self.span_check)
    }

    fn admits(&self, id: usize, m: &[i64], constraints: &[Coord], t: &Tracker) -> bool {
        match t.values(id, self) {
            Some(y) => {
                let (coords, span) = y.split_at(self.coords.len());
                span.iter().all(|&v| v == 0) && constraints.iter().zip(coords).all(|(c, v)| c.admits(v.cmp(&0)))
            }
            None => {
                self.span_check.iter().all(|f| f.sign(m) == Ordering::Equal)
                    && self.coords.iter().zip(constraints).all(|(f, c)| c.admits(f.sign(m)))
            }
        }
    }

    fn on_facet_hyperplane(&self, id: usize, m: &[i64], t: &Tracker) -> bool {
        match t.values(id, self) {
            Some(y) => y[..self.coords.len()].contains(&0),
            None => self.coords.iter().any(|f| f.sign(m) == Ordering::Equal),
        }
    }
}

/// Values of the charts' forms at the current point of a box walk. Forms
/// whose values provably fit in `i64` over the box are updated by one
/// column per step; the rest are evaluated exactly at each point.
struct Tracker {
    offsets: Vec<Option<usize>>,
    /// `steps[k]` holds coefficient `k` of every tracked form.
    steps: Vec<Vec<i64>>,
    y: Vec<i64>,
}

impl Tracker {
    fn new(charts: &[Chart], dim: usize, radius: i64) -> Tracker {
        let limit = i128::from(i64::MAX / 4);
        let small = |f: &Form| -> Option<Vec<i64>> {
            let c: Vec<i64> = f.big.iter().map(ToPrimitive::to_i64).collect::<Option<_>>()?;
            let reach: i128 = c.iter().map(|&x| i128::from(x).abs() * i128::from(radius)).sum();
            (reach <= limit).then_some(c)
        };
        let mut offsets = Vec::with_capacity(charts.len());
        let mut steps = vec![Vec::new(); dim];
        let mut y = Vec::new();
        for chart in charts {
            match chart.forms().map(small).collect::<Option<Vec<_>>>() {
                Some(rows) => {
                    offsets.push(Some(y.len()));
                    for row in rows {
                        y.push(-radius * row.iter().sum::<i64>());
                        for (k, c) in row.into_iter().enumerate() {
                            steps[k].push(c);
                        }
                    }
                }
                None => offsets.push(None),
            }
        }
        Tracker { offsets, steps, y }
    }

    /// Evaluates every chart exactly at each point.
    fn exact(charts: usize) -> Tracker {
        Tracker { offsets: vec![None; charts], steps: Vec::new(), y: Vec::new() }
    }

    fn step(&mut self, k: usize, delta: i64) {
        for (y, c) in self.y.iter_mut().zip(&self.steps[k]) {
            *y += c * delta;
        }
    }

    fn values(&self, id: usize, chart: &Chart) -> Option<&[i64]> {
        let off = self.offsets[id]?;
        Some(&self.y[off..off + chart.coords.len() + chart.span_check.len()])
    }
}

/// A weighted region `weight * [m in chart with constraints]`.
#[derive(Clone, Debug)]
struct Region {
    chart: usize,
    constraints: Vec<Coord>,
    weight: i64,
}

#[derive(Default)]
struct RegionSet {
    charts: Vec<Chart>,
    regions: Vec<Region>,
}

impl RegionSet {
    fn add_chart(&mut self, a: &IntMatrix) -> Result<usize> {
        self.charts.push(Chart::new(a)?);
        Ok(self.charts.len() - 1)
    }

    fn add(&mut self, chart: usize, constraints: Vec<Coord>, weight: i64) {
        self.regions.push(Region { chart, constraints, weight });
    }

    /// Adds `weight * [C(a)]`, polarized to forward form when `polarize`.
    fn add_closed(&mut self, a: &IntMatrix, weight: i64, polarize: bool) -> Result<()> {
        let chart = self.add_chart(a)?;
        let mut w = weight;
        let constraints = a
            .columns()
            .map(|c| {
                if polarize && lex_negative(c) {
                    w = -w;
                    Coord::Neg
                } else {
                    Coord::NonNeg
                }
            })
            .collect();
        self.add(chart, constraints, w);
        Ok(())
    }

    fn tracker(&self, dim: usize, radius: i64) -> Tracker {
        Tracker::new(&self.charts, dim, radius)
    }

    /// Flattens the regions whose charts are tracked in `i64`: coordinate
    /// `y` satisfies its constraint iff `sign * y >= threshold`.
    fn compile(&self, t: &Tracker) -> Compiled {
        let mut c = Compiled::default();
        for (idx, r) in self.regions.iter().enumerate() {
            let chart = &self.charts[r.chart];
            let Some(y_off) = t.offsets[r.chart] else {
                c.exact.push(idx);
                continue;
            };
            c.fast.push(FastRegion {
                y_off,
                c_off: c.sign.len(),
                n: chart.coords.len(),
                span: chart.span_check.len(),
                weight: r.weight,
            });
            for k in &r.constraints {
                let (sg, th) = match k {
                    Coord::NonNeg => (1, 0),
                    Coord::Pos => (1, 1),
                    Coord::NonPos => (-1, 0),
                    Coord::Neg => (-1, 1),
                    Coord::Free => (0, 0),
                };
                c.sign.push(sg);
                c.threshold.push(th);
            }
        }
        c
    }

    fn value(&self, m: &[i64], t: &Tracker, c: &Compiled) -> i64 {
        let mut total = 0;
        for r in &c.fast {
            let y = &t.y[r.y_off..r.y_off + r.n];
            let sg = &c.sign[r.c_off..r.c_off + r.n];
            let th = &c.threshold[r.c_off..r.c_off + r.n];
            if y.iter().zip(sg).zip(th).all(|((y, s), t)| y * s >= *t)
                && t.y[r.y_off + r.n..r.y_off + r.n + r.span].iter().all(|&v| v == 0)
            {
                total += r.weight;
            }
        }
        for &idx in &c.exact {
            let r = &self.regions[idx];
            if self.charts[r.chart].admits(r.chart, m, &r.constraints, t) {
                total += r.weight;
            }
        }
        total
    }

    fn on_any_facet(&self, m: &[i64], t: &Tracker) -> bool {
        self.charts.iter().enumerate().any(|(id, c)| c.on_facet_hyperplane(id, m, t))
    }
}

struct FastRegion {
    y_off: usize,
    c_off: usize,
    n: usize,
    span: usize,
    weight: i64,
}

#[derive(Default)]
struct Compiled {
    fast: Vec<FastRegion>,
    sign: Vec<i64>,
    threshold: Vec<i64>,
    exact: Vec<usize>,
}

fn lex_negative(v: &[BigInt]) -> bool {
    v.iter().find(|x| !x.is_zero()).is_some_and(Signed::is_negative)
}

/// Visits every integer point with `|m|_inf <= radius` in lexicographic
/// order, keeping the trackers in step.
fn walk(dim: usize, radius: i64, trackers: &mut [Tracker], mut f: impl FnMut(&[i64], &[Tracker])) {
    let mut m = vec![-radius; dim];
    loop {
        f(&m, trackers);
        let mut k = dim;
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            if m[k] < radius {
                m[k] += 1;
                trackers.iter_mut().for_each(|t| t.step(k, 1));
                break;
            }
            m[k] = -radius;
            trackers.iter_mut().for_each(|t| t.step(k, -2 * radius));
        }
    }
}

fn scan(dim: usize, radius: i64, context: &str, lhs: &RegionSet, rhs: &RegionSet, skip_facets: bool) -> VerifyReport {
    let mut report = VerifyReport::new(radius);
    let mut trackers = [lhs.tracker(dim, radius), rhs.tracker(dim, radius)];
    let compiled = [lhs.compile(&trackers[0]), rhs.compile(&trackers[1])];
    walk(dim, radius, &mut trackers, |m, t| {
        if skip_facets && (lhs.on_any_facet(m, &t[0]) || rhs.on_any_facet(m, &t[1])) {
            report.points_exempted += 1;
            return;
        }
        report.points_checked += 1;
        let (e, g) = (lhs.value(m, &t[0], &compiled[0]), rhs.value(m, &t[1], &compiled[1]));
        if e != g {
            report.fail(m, e, g, context);
        }
    });
    report
}

fn require_dim(m: &IntMatrix, d: usize) -> Result<()> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    if m.rows() != d {
        return Err(Error::DimensionMismatch { expected: d, found: m.rows() });
    }
    Ok(())
}

/// Compares `[C(target)]` with `sum eps_i [C(B_i)]` on the box under the
/// chosen equivalence.
pub fn check_signed_sum(
    target: &IntMatrix,
    parts: &[SignedCone],
    box_radius: i64,
    equivalence: Equivalence,
) -> Result<VerifyReport> {
    let d = target.rows();
    require_dim(target, d)?;
    let polarize = equivalence == Equivalence::GeneratingFunction;
    let mut lhs = RegionSet::default();
    lhs.add_closed(target, 1, polarize)?;
    let mut rhs = RegionSet::default();
    for p in parts {
        require_dim(&p.generators, d)?;
        rhs.add_closed(&p.generators, p.sign.as_i64(), polarize)?;
    }
    Ok(scan(d, box_radius, "", &lhs, &rhs, equivalence == Equivalence::ModuloLowerDimensional))
}

/// Box check of a signed decomposition. With `skip_lower_dim` the raw
/// indicator identity is checked away from all facet hyperplanes (the
/// column-replacement identity); otherwise the exact generating-function
/// identity is checked at every point.
pub fn signed_indicator_check(
    target: &IntMatrix,
    parts: &[SignedCone],
    box_radius: i64,
    skip_lower_dim: bool,
) -> Result<VerifyReport> {
    let eq = if skip_lower_dim { Equivalence::ModuloLowerDimensional } else { Equivalence::GeneratingFunction };
    check_signed_sum(target, parts, box_radius, eq)
}

/// Every box point of `C(target)` lies in exactly one part; every other
/// box point lies in none.
pub fn partition_check(target: &IntMatrix, parts: &[HalfOpenCone], box_radius: i64) -> Result<VerifyReport> {
    let d = target.rows();
    require_dim(target, d)?;
    let mut lhs = RegionSet::default();
    lhs.add_closed(target, 1, false)?;
    let mut rhs = RegionSet::default();
    for p in parts {
        let g = p.generators();
        if g.rows() != d {
            return Err(Error::DimensionMismatch { expected: d, found: g.rows() });
        }
        let chart = rhs.add_chart(g)?;
        let constraints = (0..g.cols()).map(|j| if p.is_open(j) { Coord::Pos } else { Coord::NonNeg }).collect();
        rhs.add(chart, constraints, 1);
    }
    Ok(scan(d, box_radius, "", &lhs, &rhs, false))
}

/// Coefficientwise form of the half-open/closed conversions for column
/// `i` and open set `theta` (0-based), with the cones containing lines
/// written out:
///
/// * (i)   `[C^{i}(A)] + [C(A[i -> -1])] = [K_i]`
/// * (ii)  `[C^theta(A)] = s [C(closed)] + sum_{S < theta} (-1)^|S| [K_S]`,
///   with `(s, closed)` from [`half_open_to_closed`]
/// * (iii) `[C(A)] + [C(A[i -> -1])] = [K_i] + [C(A[i -> 0])]`
///
/// `K_i` lets coordinate `i` range over all reals; `K_S` has coordinates in
/// `S` nonpositive, in `theta \ S` free, and the rest nonnegative.
pub fn lemma33_check(a: &IntMatrix, i: usize, theta: &[usize], box_radius: i64) -> Result<VerifyReport> {
    let d = a.rows();
    require_dim(a, d)?;
    if i >= d {
        return Err(Error::OutOfRange { index: i + 1, max: d });
    }
    let cone = HalfOpenCone::new(a.clone(), theta.iter().copied())?;
    let theta: Vec<usize> = cone.open_set().iter().copied().collect();
    let nonneg = vec![Coord::NonNeg; d];
    let with = |base: &[Coord], idx: &[usize], c: Coord| {
        let mut v = base.to_vec();
        for &j in idx {
            v[j] = c;
        }
        v
    };
    let flipped = a.with_negated_columns(&[i]);

    // (i)
    let mut lhs = RegionSet::default();
    let ca = lhs.add_chart(a)?;
    lhs.add(ca, with(&nonneg, &[i], Coord::Pos), 1);
    lhs.add_closed(&flipped, 1, false)?;
    let mut rhs = RegionSet::default();
    let ca_r = rhs.add_chart(a)?;
    rhs.add(ca_r, with(&nonneg, &[i], Coord::Free), 1);
    let report = scan(d, box_radius, "clause (i)", &lhs, &rhs, false);

    // (ii)
    let mut lhs = RegionSet::default();
    let ca = lhs.add_chart(a)?;
    lhs.add(ca, with(&nonneg, &theta, Coord::Pos), 1);
    let mut rhs = RegionSet::default();
    let closed = half_open_to_closed(&cone);
    rhs.add_closed(&closed.generators, closed.sign.as_i64(), false)?;
    let ca_r = rhs.add_chart(a)?;
    for mask in 0u64..(1u64 << theta.len()) - 1 {
        let mut c = nonneg.clone();
        let mut size = 0;
        for (bit, &j) in theta.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                c[j] = Coord::NonPos;
                size += 1;
            } else {
                c[j] = Coord::Free;
            }
        }
        rhs.add(ca_r, c, if size % 2 == 0 { 1 } else { -1 });
    }
    let report = report.merge(scan(d, box_radius, "clause (ii)", &lhs, &rhs, false));

    // (iii)
    let mut lhs = RegionSet::default();
    lhs.add_closed(a, 1, false)?;
    lhs.add_closed(&flipped, 1, false)?;
    let mut rhs = RegionSet::default();
    let ca_r = rhs.add_chart(a)?;
    rhs.add(ca_r, with(&nonneg, &[i], Coord::Free), 1);
    let face = rhs.add_chart(&a.without_column(i))?;
    rhs.add(face, vec![Coord::NonNeg; d - 1], 1);
    Ok(report.merge(scan(d, box_radius, "clause (iii)", &lhs, &rhs, false)))
}

/// Lattice points of the half-open fundamental parallelepiped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParallelepipedSet {
    pub points: Vec<Vec<BigInt>>,
}

/// Enumerates `{m : A^-1 m in [0,1)^d}` over the bounding box of the
/// parallelepiped's vertices.
pub fn enumerate_parallelepiped(a: &IntMatrix, budget: u64) -> Result<ParallelepipedSet> {
    let d = a.rows();
    require_dim(a, d)?;
    let det = determinant(a);
    if det.is_zero() {
        return Err(Error::Singular);
    }
    let abs_det = det.abs();
    if abs_det > BigInt::from(budget) {
        return Err(Error::EnumerationBudget { det: abs_det.to_string(), budget });
    }
    let adj = adjugate(a);
    let flip = det.is_negative();
    let rows: Vec<Vec<BigInt>> =
        (0..d).map(|r| adj.row(r).into_iter().map(|x| if flip { -x } else { x }).collect()).collect();
    let mut lo = vec![BigInt::zero(); d];
    let mut hi = vec![BigInt::zero(); d];
    for c in a.columns() {
        for (r, x) in c.iter().enumerate() {
            if x.is_negative() {
                lo[r] += x;
            } else {
                hi[r] += x;
            }
        }
    }
    let lo: Vec<i64> = lo.iter().map(|x| x.to_i64().expect("bounding box fits in i64")).collect();
    let hi: Vec<i64> = hi.iter().map(|x| x.to_i64().expect("bounding box fits in i64")).collect();
    let mut points = Vec::new();
    let mut m = lo.clone();
    'outer: loop {
        let inside = rows.iter().all(|row| {
            let y: BigInt = row.iter().zip(&m).map(|(a, &x)| a * x).sum();
            !y.is_negative() && y < abs_det
        });
        if inside {
            points.push(m.iter().map(|&x| BigInt::from(x)).collect());
        }
        let mut k = d;
        loop {
            if k == 0 {
                break 'outer;
            }
            k -= 1;
            if m[k] < hi[k] {
                m[k] += 1;
                break;
            }
            m[k] = lo[k];
        }
    }
    Ok(ParallelepipedSet { points })
}

/// Number of box points in the closed cone `C(a)`.
pub fn brute_force_cone_box_count(a: &IntMatrix, box_radius: i64) -> Result<u64> {
    let mut set = RegionSet::default();
    set.add_closed(a, 1, false)?;
    let mut trackers = [set.tracker(a.rows(), box_radius)];
    let compiled = set.compile(&trackers[0]);
    let mut count = 0;
    walk(a.rows(), box_radius, &mut trackers, |m, t| count += set.value(m, &t[0], &compiled) as u64);
    Ok(count)
}

/// Signed box count of `sum eps_i [C(B_i)]`, without polarization.
pub fn signed_box_count(parts: &[SignedCone], box_radius: i64) -> Result<i64> {
    let Some(first) = parts.first() else { return Ok(0) };
    let d = first.generators.rows();
    let mut set = RegionSet::default();
    for p in parts {
        require_dim(&p.generators, d)?;
        set.add_closed(&p.generators, p.sign.as_i64(), false)?;
    }
    let mut trackers = [set.tracker(d, box_radius)];
    let compiled = set.compile(&trackers[0]);
    let mut total = 0;
    walk(d, box_radius, &mut trackers, |m, t| total += set.value(m, &t[0], &compiled));
    Ok(total)
}

/// Whether the lattice point lies in the forward form of `C(a)`; exposed
/// for tests that reason about polarization directly.
pub fn forward_weight(a: &IntMatrix, m: &[i64]) -> Result<i64> {
    let mut set = RegionSet::default();
    set.add_closed(a, 1, true)?;
    let t = Tracker::exact(set.charts.len());
    Ok(set.value(m, &t, &set.compile(&t)))
}

impl ParallelepipedSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains_origin(&self) -> bool {
        self.points.iter().any(|p| p.iter().all(Zero::is_zero))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::{primal_step, Sign};
    use crate::lattice::CoefficientVector;

    fn pts(v: &[&[i64]]) -> Vec<Vec<BigInt>> {
        v.iter().map(|p| p.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn box_counts() {
        assert_eq!(brute_force_cone_box_count(&IntMatrix::identity(2), 2).unwrap(), 9);
        assert_eq!(brute_force_cone_box_count(&IntMatrix::identity(1), 10).unwrap(), 11);
        // 0 <= y <= 2x over [-2,2]^2
        assert_eq!(brute_force_cone_box_count(&IntMatrix::from_i64_columns(&[[1, 0], [1, 2]]), 2).unwrap(), 7);
    }

    #[test]
    fn huge_entries_use_exact_path() {
        // x >= N y >= 0 with N far beyond i64: only the ray y = 0 is in the box
        let n: BigInt = BigInt::from(10).pow(30);
        let a = IntMatrix::from_columns(vec![vec![1.into(), 0.into()], vec![n, 1.into()]]).unwrap();
        assert_eq!(brute_force_cone_box_count(&a, 3).unwrap(), 4);
        let parts = vec![SignedCone { sign: Sign::Plus, generators: a.clone() }];
        assert!(signed_indicator_check(&a, &parts, 3, false).unwrap().passed);
    }

    #[test]
    fn parallelepiped_examples() {
        let id = enumerate_parallelepiped(&IntMatrix::identity(3), 100).unwrap();
        assert_eq!(id.points, pts(&[&[0, 0, 0]]));
        let two = enumerate_parallelepiped(&IntMatrix::from_i64_columns(&[[1, 0], [1, 2]]), 100).unwrap();
        assert_eq!(two.points, pts(&[&[0, 0], &[1, 1]]));
        let axis = enumerate_parallelepiped(&IntMatrix::from_i64_columns(&[[1, 0], [0, 4]]), 100).unwrap();
        assert_eq!(axis.points, pts(&[&[0, 0], &[0, 1], &[0, 2], &[0, 3]]));
        assert!(matches!(
            enumerate_parallelepiped(&IntMatrix::from_i64_columns(&[[1, 0], [0, 400]]), 100),
            Err(Error::EnumerationBudget { .. })
        ));
    }

    #[test]
    fn trivial_signed_check() {
        let parts = vec![SignedCone { sign: Sign::Plus, generators: IntMatrix::identity(2) }];
        let r = signed_indicator_check(&IntMatrix::identity(2), &parts, 4, false).unwrap();
        assert!(r.passed);
        assert_eq!(r.points_checked, 81);
    }

    #[test]
    fn index_two_primal_step_passes_and_literal_form_does_not() {
        let a = IntMatrix::from_i64_columns(&[[1, 0], [1, 2]]);
        let parts = primal_step(&a, &CoefficientVector::from_i64(&[1, 1], 2)).unwrap();
        let r = signed_indicator_check(&a, &parts, 6, false).unwrap();
        assert!(r.passed, "{r:?}");
        assert_eq!(r.points_checked, 169);
        let literal = check_signed_sum(&a, &parts, 6, Equivalence::Pointwise).unwrap();
        assert!(!literal.passed);
        assert_eq!(literal.first_failure.unwrap().point.len(), 2);
    }

    #[test]
    fn corrupted_sign_is_caught() {
        let a = IntMatrix::from_i64_columns(&[[1, 0], [1, 2]]);
        let mut parts = primal_step(&a, &CoefficientVector::from_i64(&[1, 1], 2)).unwrap();
        parts[1].sign = parts[1].sign.flip();
        let r = signed_indicator_check(&a, &parts, 6, false).unwrap();
        assert!(!r.passed);
        assert!(r.first_failure.is_some());
    }

    #[test]
    fn forward_form_of_a_backward_ray() {
        // C((-1)) polarizes to -[x > 0] in the forward direction
        let a = IntMatrix::from_i64_columns(&[[-1]]);
        assert_eq!(forward_weight(&a, &[0]).unwrap(), 0);
        assert_eq!(forward_weight(&a, &[3]).unwrap(), -1);
        assert_eq!(forward_weight(&a, &[-3]).unwrap(), 0);
    }

    #[test]
    fn one_dimensional_lemma33() {
        // [x >= 0] + [x <= 0] = [R] + [x = 0]; over [-5,5]: 6 + 6 = 11 + 1
        let a = IntMatrix::identity(1);
        assert_eq!(
            brute_force_cone_box_count(&a, 5).unwrap()
                + brute_force_cone_box_count(&IntMatrix::from_i64_columns(&[[-1]]), 5).unwrap(),
            12
        );
        let r = lemma33_check(&a, 0, &[0], 5).unwrap();
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn partition_mutation_detected() {
        let a = IntMatrix::identity(2);
        let good = vec![
            HalfOpenCone::closed(IntMatrix::from_i64_columns(&[[1, 1], [0, 1]])),
            HalfOpenCone::new(IntMatrix::from_i64_columns(&[[1, 0], [1, 1]]), [0]).unwrap(),
        ];
        assert!(partition_check(&a, &good, 6).unwrap().passed);
        let bad = vec![good[0].clone(), HalfOpenCone::closed(good[1].generators().clone())];
        let r = partition_check(&a, &bad, 6).unwrap();
        assert!(!r.passed);
        let f = r.first_failure.unwrap();
        assert_eq!((f.expected, f.got), (1, 2));
    }
}
