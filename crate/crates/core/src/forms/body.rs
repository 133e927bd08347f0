//! Convex bodies in `R^d`: integer boxes and H-polytopes `A x <= b` with
//! rational data. Membership, bounds and vertices are computed exactly.

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

/// Most `d`-subsets of facets examined during vertex enumeration.
const MAX_VERTEX_CANDIDATES: u64 = 2_000_000;

/// Cells of the volume surrogate grid.
const SURROGATE_CELLS: f64 = (1u64 << 22) as f64;

/// Axis-parallel box `prod [lo_i, hi_i]` with integer corners.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoxBody {
    lo: Vec<i64>,
    hi: Vec<i64>,
}

impl BoxBody {
    pub fn new(lo: Vec<i64>, hi: Vec<i64>) -> Result<Self> {
        if lo.is_empty() || lo.len() != hi.len() {
            return Err(Error::arg("box corners must have the same positive dimension"));
        }
        Ok(BoxBody { lo, hi })
    }

    pub fn lo(&self) -> &[i64] {
        &self.lo
    }

    pub fn hi(&self) -> &[i64] {
        &self.hi
    }

    fn is_empty(&self) -> bool {
        self.lo.iter().zip(&self.hi).any(|(a, b)| a > b)
    }
}

/// Bounded polyhedron `{x : A x <= b}`.
///
/// Rows are stored scaled to integers, so membership of integer points is
/// decided in exact 128-bit arithmetic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HPolytope {
    dim: usize,
    rows: Vec<Vec<i128>>,
    rhs: Vec<i128>,
    vertices: Vec<Vec<BigRational>>,
}

impl HPolytope {
    /// Polytope with integer data. Fails if the set is unbounded.
    pub fn from_integer_rows(dim: usize, rows: Vec<(Vec<i64>, i64)>) -> Result<Self> {
        let rows = rows
            .into_iter()
            .map(|(a, b)| (a.into_iter().map(i128::from).collect(), i128::from(b)))
            .collect();
        Self::from_scaled(dim, rows)
    }

    /// Polytope with rational data; each row is cleared of denominators.
    pub fn from_rational_rows(dim: usize, rows: Vec<(Vec<Ratio<i64>>, Ratio<i64>)>) -> Result<Self> {
        let mut scaled = Vec::with_capacity(rows.len());
        for (a, b) in rows {
            let lcm = a
                .iter()
                .chain(std::iter::once(&b))
                .fold(1i128, |l, r| lcm(l, i128::from(*r.denom())));
            let to_int = |r: &Ratio<i64>| i128::from(*r.numer()) * (lcm / i128::from(*r.denom()));
            scaled.push((a.iter().map(to_int).collect(), to_int(&b)));
        }
        Self::from_scaled(dim, scaled)
    }

    /// `{x : x_i >= lo for all i, x_1 + ... + x_d <= hi}`.
    pub fn simplex(dim: usize, lo: i64, hi: i64) -> Result<Self> {
        let mut rows: Vec<(Vec<i64>, i64)> = (0..dim)
            .map(|i| {
                let mut a = vec![0; dim];
                a[i] = -1;
                (a, -lo)
            })
            .collect();
        rows.push((vec![1; dim], hi));
        Self::from_integer_rows(dim, rows)
    }

    fn from_scaled(dim: usize, rows: Vec<(Vec<i128>, i128)>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::arg("polytope dimension must be positive"));
        }
        if let Some((a, _)) = rows.iter().find(|(a, _)| a.len() != dim) {
            return Err(Error::arg(format!(
                "constraint row of length {} in dimension {dim}",
                a.len()
            )));
        }
        let (rows, rhs): (Vec<_>, Vec<_>) = rows.into_iter().unzip();
        if !recession_cone_is_trivial(dim, &rows)? {
            return Err(Error::arg("polytope is unbounded"));
        }
        let a: Vec<Vec<BigRational>> = rows.iter().map(|r| r.iter().map(|&x| big(x)).collect()).collect();
        let b: Vec<BigRational> = rhs.iter().map(|&x| big(x)).collect();
        let vertices = enumerate_vertices(dim, &a, &b)?;
        Ok(HPolytope {
            dim,
            rows,
            rhs,
            vertices,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn facet_count(&self) -> usize {
        self.rows.len()
    }

    /// Vertices in lexicographic order; empty iff the polytope is empty.
    pub fn vertices(&self) -> &[Vec<BigRational>] {
        &self.vertices
    }

    /// Exact membership of an integer point.
    pub fn contains(&self, x: &[i64]) -> bool {
        self.rows.iter().zip(&self.rhs).all(|(a, &b)| {
            a.iter().zip(x).map(|(&c, &v)| c * v as i128).sum::<i128>() <= b
        })
    }

    fn contains_real(&self, x: &[f64]) -> bool {
        self.rows.iter().zip(&self.rhs).all(|(a, &b)| {
            a.iter().zip(x).map(|(&c, &v)| c as f64 * v).sum::<f64>() <= b as f64
        })
    }

    fn translated(&self, v: &[i64]) -> Self {
        let rhs = self
            .rows
            .iter()
            .zip(&self.rhs)
            .map(|(a, &b)| b + a.iter().zip(v).map(|(&c, &s)| c * s as i128).sum::<i128>())
            .collect();
        let vertices = self
            .vertices
            .iter()
            .map(|p| p.iter().zip(v).map(|(x, &s)| x + big(s as i128)).collect())
            .collect();
        HPolytope {
            dim: self.dim,
            rows: self.rows.clone(),
            rhs,
            vertices,
        }
    }

    /// Integer range of the last coordinate given the others, intersected
    /// with `bound`.
    fn last_coordinate_range(&self, prefix: &[i64], bound: (i64, i64)) -> (i64, i64) {
        let last = self.dim - 1;
        let mut lo = bound.0 as i128;
        let mut hi = bound.1 as i128;
        for (a, &b) in self.rows.iter().zip(&self.rhs) {
            let s = b - a[..last].iter().zip(prefix).map(|(&c, &x)| c * x as i128).sum::<i128>();
            let c = a[last];
            if c == 0 {
                if s < 0 {
                    return (1, 0);
                }
            } else if c > 0 {
                hi = hi.min(s.div_euclid(c));
            } else {
                lo = lo.max(-(s.div_euclid(-c)));
            }
            if lo > hi {
                return (1, 0);
            }
        }
        (lo as i64, hi as i64)
    }
}

/// A bounded convex body.
#[derive(Debug, Clone, PartialEq)]
pub enum ConvexBody {
    Box(BoxBody),
    Polytope(HPolytope),
}

/// Volume of a body, with a flag telling whether it is exact.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Volume {
    pub value: f64,
    pub exact: bool,
}

impl ConvexBody {
    pub fn boxed(lo: Vec<i64>, hi: Vec<i64>) -> Result<Self> {
        Ok(ConvexBody::Box(BoxBody::new(lo, hi)?))
    }

    pub fn simplex(dim: usize, lo: i64, hi: i64) -> Result<Self> {
        Ok(ConvexBody::Polytope(HPolytope::simplex(dim, lo, hi)?))
    }

    pub fn dim(&self) -> usize {
        match self {
            ConvexBody::Box(b) => b.lo.len(),
            ConvexBody::Polytope(p) => p.dim,
        }
    }

    pub fn is_empty(&self) -> bool {
        match self {
            ConvexBody::Box(b) => b.is_empty(),
            ConvexBody::Polytope(p) => p.vertices.is_empty(),
        }
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        match self {
            ConvexBody::Box(b) => x
                .iter()
                .zip(b.lo.iter().zip(&b.hi))
                .all(|(v, (lo, hi))| lo <= v && v <= hi),
            ConvexBody::Polytope(p) => p.contains(x),
        }
    }

    /// Membership of a real point; only used by approximate volume paths.
    pub fn contains_real(&self, x: &[f64]) -> bool {
        match self {
            ConvexBody::Box(b) => x
                .iter()
                .zip(b.lo.iter().zip(&b.hi))
                .all(|(&v, (&lo, &hi))| lo as f64 <= v && v <= hi as f64),
            ConvexBody::Polytope(p) => p.contains_real(x),
        }
    }

    /// Exact `(min, max)` of `<c, x>` over the body; `None` if empty.
    pub fn linear_range(&self, c: &[i64]) -> Option<(BigRational, BigRational)> {
        if self.is_empty() {
            return None;
        }
        match self {
            ConvexBody::Box(b) => {
                let (mut lo, mut hi) = (0i128, 0i128);
                for ((&ci, &l), &h) in c.iter().zip(&b.lo).zip(&b.hi) {
                    let (p, q) = (ci as i128 * l as i128, ci as i128 * h as i128);
                    lo += p.min(q);
                    hi += p.max(q);
                }
                Some((big(lo), big(hi)))
            }
            ConvexBody::Polytope(p) => {
                let values = p.vertices.iter().map(|v| {
                    v.iter()
                        .zip(c)
                        .fold(BigRational::zero(), |acc, (x, &ci)| acc + x * big(ci as i128))
                });
                let (mut lo, mut hi): (Option<BigRational>, Option<BigRational>) = (None, None);
                for v in values {
                    if lo.as_ref().is_none_or(|l| &v < l) {
                        lo = Some(v.clone());
                    }
                    if hi.as_ref().is_none_or(|h| &v > h) {
                        hi = Some(v);
                    }
                }
                Some((lo?, hi?))
            }
        }
    }

    /// Real bounding box `[(min x_i, max x_i)]`; `None` if empty.
    pub fn bounding_box(&self) -> Option<Vec<(BigRational, BigRational)>> {
        let d = self.dim();
        (0..d)
            .map(|i| {
                let mut e = vec![0; d];
                e[i] = 1;
                self.linear_range(&e)
            })
            .collect()
    }

    /// Smallest integer box containing every lattice point; `None` if the
    /// body has no lattice point along some axis.
    pub fn integer_bounding_box(&self) -> Option<Vec<(i64, i64)>> {
        let bb = self.bounding_box()?;
        let mut out = Vec::with_capacity(bb.len());
        for (lo, hi) in bb {
            let lo = lo.ceil().to_integer().to_i64()?;
            let hi = hi.floor().to_integer().to_i64()?;
            if lo > hi {
                return None;
            }
            out.push((lo, hi));
        }
        Some(out)
    }

    /// The body translated by the integer vector `v`.
    pub fn translated(&self, v: &[i64]) -> Self {
        match self {
            ConvexBody::Box(b) => ConvexBody::Box(BoxBody {
                lo: b.lo.iter().zip(v).map(|(a, s)| a + s).collect(),
                hi: b.hi.iter().zip(v).map(|(a, s)| a + s).collect(),
            }),
            ConvexBody::Polytope(p) => ConvexBody::Polytope(p.translated(v)),
        }
    }

    /// Exact for boxes and for simplices given by `d + 1` facets; otherwise
    /// a midpoint-grid surrogate flagged as approximate.
    pub fn volume(&self) -> Volume {
        if self.is_empty() {
            return Volume {
                value: 0.0,
                exact: true,
            };
        }
        match self {
            ConvexBody::Box(b) => Volume {
                value: b.lo.iter().zip(&b.hi).map(|(&l, &h)| (h - l) as f64).product(),
                exact: true,
            },
            ConvexBody::Polytope(p) if p.rows.len() == p.dim + 1 && p.vertices.len() == p.dim + 1 => {
                Volume {
                    value: simplex_volume(&p.vertices),
                    exact: true,
                }
            }
            ConvexBody::Polytope(_) => self.surrogate_volume(),
        }
    }

    fn surrogate_volume(&self) -> Volume {
        let d = self.dim();
        let bb: Vec<(f64, f64)> = self
            .bounding_box()
            .expect("nonempty body")
            .iter()
            .map(|(l, h)| (ratio_to_f64(l), ratio_to_f64(h)))
            .collect();
        let per_axis = SURROGATE_CELLS.powf(1.0 / d as f64).floor().max(1.0) as usize;
        let widths: Vec<f64> = bb.iter().map(|(l, h)| (h - l) / per_axis as f64).collect();
        if widths.iter().any(|&w| w == 0.0) {
            return Volume {
                value: 0.0,
                exact: false,
            };
        }
        let inside: u64 = (0..per_axis)
            .into_par_iter()
            .map(|i0| {
                let mut idx = vec![0usize; d];
                idx[0] = i0;
                let mut x = vec![0.0; d];
                let mut count = 0u64;
                loop {
                    for j in 0..d {
                        x[j] = bb[j].0 + (idx[j] as f64 + 0.5) * widths[j];
                    }
                    if self.contains_real(&x) {
                        count += 1;
                    }
                    // odometer over axes 1..d
                    let mut j = d;
                    loop {
                        if j == 1 {
                            return count;
                        }
                        j -= 1;
                        idx[j] += 1;
                        if idx[j] < per_axis {
                            break;
                        }
                        idx[j] = 0;
                    }
                }
            })
            .sum();
        Volume {
            value: inside as f64 * widths.iter().product::<f64>(),
            exact: false,
        }
    }

    /// Every integer point of the body, in row-major order (first
    /// coordinate outermost).
    pub fn lattice_points(&self) -> LatticePoints<'_> {
        LatticePoints::new(self, self.integer_bounding_box())
    }

    /// Integer points with first coordinate equal to `first`.
    pub fn slab_points(&self, first: i64) -> LatticePoints<'_> {
        let ranges = self.integer_bounding_box().and_then(|mut r| {
            if first < r[0].0 || first > r[0].1 {
                None
            } else {
                r[0] = (first, first);
                Some(r)
            }
        });
        LatticePoints::new(self, ranges)
    }

    /// Number of integer points, counted slab by slab in parallel.
    pub fn lattice_point_count(&self) -> u64 {
        match self.integer_bounding_box() {
            None => 0,
            Some(bb) => (bb[0].0..=bb[0].1)
                .into_par_iter()
                .map(|x0| self.slab_points(x0).count() as u64)
                .sum(),
        }
    }

    fn last_coordinate_range(&self, prefix: &[i64], bound: (i64, i64)) -> (i64, i64) {
        match self {
            ConvexBody::Box(_) => bound,
            ConvexBody::Polytope(p) => p.last_coordinate_range(prefix, bound),
        }
    }
}

/// Iterator over the integer points of a [`ConvexBody`].
#[derive(Debug, Clone)]
pub struct LatticePoints<'a> {
    body: &'a ConvexBody,
    ranges: Vec<(i64, i64)>,
    point: Vec<i64>,
    next_last: i64,
    last_hi: i64,
    done: bool,
}

impl<'a> LatticePoints<'a> {
    fn new(body: &'a ConvexBody, ranges: Option<Vec<(i64, i64)>>) -> Self {
        let d = body.dim();
        let mut it = LatticePoints {
            body,
            ranges: ranges.clone().unwrap_or_default(),
            point: vec![0; d],
            next_last: 1,
            last_hi: 0,
            done: ranges.is_none(),
        };
        if !it.done {
            for j in 0..d {
                it.point[j] = it.ranges[j].0;
            }
            it.refresh_last();
        }
        it
    }

    fn refresh_last(&mut self) {
        let d = self.point.len();
        let (lo, hi) = self
            .body
            .last_coordinate_range(&self.point[..d - 1], self.ranges[d - 1]);
        self.next_last = lo;
        self.last_hi = hi;
    }

    fn advance_prefix(&mut self) -> bool {
        let d = self.point.len();
        for j in (0..d - 1).rev() {
            if self.point[j] < self.ranges[j].1 {
                self.point[j] += 1;
                for k in j + 1..d - 1 {
                    self.point[k] = self.ranges[k].0;
                }
                return true;
            }
        }
        false
    }
}

impl Iterator for LatticePoints<'_> {
    type Item = Vec<i64>;

    fn next(&mut self) -> Option<Vec<i64>> {
        loop {
            if self.done {
                return None;
            }
            if self.next_last <= self.last_hi {
                let d = self.point.len();
                let mut p = self.point.clone();
                p[d - 1] = self.next_last;
                self.next_last += 1;
                return Some(p);
            }
            if !self.advance_prefix() {
                self.done = true;
                return None;
            }
            self.refresh_last();
        }
    }
}

fn big(x: i128) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn lcm(a: i128, b: i128) -> i128 {
    a / gcd(a, b) * b
}

pub(crate) fn ratio_to_f64(r: &BigRational) -> f64 {
    r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
}

/// Unique solution of the square system `a x = b`, if any.
fn solve(mut a: Vec<Vec<BigRational>>, mut b: Vec<BigRational>) -> Option<Vec<BigRational>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = &a[r][col] / &a[col][col];
                for c in col..n {
                    let delta = &f * &a[col][c];
                    a[r][c] -= delta;
                }
                let delta = &f * &b[col];
                b[r] -= delta;
            }
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

fn determinant(mut a: Vec<Vec<BigRational>>) -> BigRational {
    let n = a.len();
    let mut det = BigRational::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return BigRational::zero();
        };
        if pivot != col {
            a.swap(col, pivot);
            det = -det;
        }
        det *= a[col][col].clone();
        for r in col + 1..n {
            if !a[r][col].is_zero() {
                let f = &a[r][col] / &a[col][col];
                for c in col..n {
                    let delta = &f * &a[col][c];
                    a[r][c] -= delta;
                }
            }
        }
    }
    det
}

fn simplex_volume(vertices: &[Vec<BigRational>]) -> f64 {
    let d = vertices.len() - 1;
    let m: Vec<Vec<BigRational>> = vertices[1..]
        .iter()
        .map(|v| v.iter().zip(&vertices[0]).map(|(x, y)| x - y).collect())
        .collect();
    let factorial: i128 = (1..=d as i128).product();
    ratio_to_f64(&(determinant(m).abs() / big(factorial)))
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Vertices of `{x : a x <= b}` by solving every `d`-subset of facets.
fn enumerate_vertices(
    dim: usize,
    a: &[Vec<BigRational>],
    b: &[BigRational],
) -> Result<Vec<Vec<BigRational>>> {
    let m = a.len();
    if m < dim {
        return Ok(Vec::new());
    }
    if binomial(m as u64, dim as u64) > MAX_VERTEX_CANDIDATES {
        return Err(Error::resource(format!(
            "vertex enumeration over {m} facets in dimension {dim} is too large"
        )));
    }
    let feasible = |x: &[BigRational]| {
        a.iter().zip(b).all(|(row, rhs)| {
            row.iter().zip(x).fold(BigRational::zero(), |acc, (c, v)| acc + c * v) <= *rhs
        })
    };
    let mut out = Vec::new();
    let mut subset: Vec<usize> = (0..dim).collect();
    loop {
        let sa = subset.iter().map(|&i| a[i].clone()).collect();
        let sb = subset.iter().map(|&i| b[i].clone()).collect();
        if let Some(x) = solve(sa, sb) {
            if feasible(&x) {
                out.push(x);
            }
        }
        // next combination in lexicographic order
        let mut i = dim;
        loop {
            if i == 0 {
                out.sort();
                out.dedup();
                return Ok(out);
            }
            i -= 1;
            if subset[i] < m - dim + i {
                subset[i] += 1;
                for j in i + 1..dim {
                    subset[j] = subset[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// `{x : a x <= 0} = {0}`, decided through the vertices of its
/// intersection with the cube `[-1, 1]^d`.
fn recession_cone_is_trivial(dim: usize, rows: &[Vec<i128>]) -> Result<bool> {
    let mut a: Vec<Vec<BigRational>> = rows.iter().map(|r| r.iter().map(|&x| big(x)).collect()).collect();
    let mut b: Vec<BigRational> = vec![BigRational::zero(); rows.len()];
    for i in 0..dim {
        for s in [1i128, -1] {
            let mut e = vec![BigRational::zero(); dim];
            e[i] = big(s);
            a.push(e);
            b.push(BigRational::one());
        }
    }
    let vertices = enumerate_vertices(dim, &a, &b)?;
    Ok(vertices.iter().all(|v| v.iter().all(Zero::is_zero)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(body: &ConvexBody) -> Vec<Vec<i64>> {
        body.lattice_points().collect()
    }

    #[test]
    fn box_enumeration() {
        let b = ConvexBody::boxed(vec![0], vec![2]).unwrap();
        assert_eq!(pts(&b), vec![vec![0], vec![1], vec![2]]);
        let b = ConvexBody::boxed(vec![0, 5], vec![1, 6]).unwrap();
        assert_eq!(pts(&b), vec![vec![0, 5], vec![0, 6], vec![1, 5], vec![1, 6]]);
    }

    #[test]
    fn simplex_enumeration() {
        let s = ConvexBody::simplex(2, 1, 3).unwrap();
        assert_eq!(pts(&s), vec![vec![1, 1], vec![1, 2], vec![2, 1]]);
    }

    #[test]
    fn empty_polytope() {
        let p = HPolytope::from_integer_rows(1, vec![(vec![1], -1), (vec![-1], -1)]).unwrap();
        let body = ConvexBody::Polytope(p);
        assert!(body.is_empty());
        assert!(pts(&body).is_empty());
        assert_eq!(body.lattice_point_count(), 0);
        assert_eq!(body.volume().value, 0.0);
    }

    #[test]
    fn unbounded_rejected() {
        let r = HPolytope::from_integer_rows(2, vec![(vec![-1, 0], 0), (vec![0, -1], 0)]);
        assert!(matches!(r, Err(Error::Argument(_))));
        let r = HPolytope::from_integer_rows(2, vec![(vec![1, 1], 4), (vec![-1, -1], 0)]);
        assert!(matches!(r, Err(Error::Argument(_))));
    }

    #[test]
    fn exact_volumes() {
        let n = 1000;
        assert_eq!(ConvexBody::boxed(vec![0, 0], vec![n, n]).unwrap().volume().value, 1e6);
        let s = ConvexBody::simplex(2, 0, n).unwrap();
        let v = s.volume();
        assert!(v.exact);
        assert_eq!(v.value, 5e5);
        let s3 = ConvexBody::simplex(3, 0, 6).unwrap();
        assert_eq!(s3.volume().value, 36.0);
    }

    #[test]
    fn rational_rows_are_scaled() {
        let half = |n: i64| Ratio::new(n, 2);
        // 0 <= x <= 5/2
        let p = HPolytope::from_rational_rows(
            1,
            vec![(vec![half(2)], half(5)), (vec![half(-2)], half(0))],
        )
        .unwrap();
        let body = ConvexBody::Polytope(p);
        assert_eq!(pts(&body), vec![vec![0], vec![1], vec![2]]);
        let bb = body.bounding_box().unwrap();
        assert_eq!(bb[0].1, BigRational::new(5.into(), 2.into()));
    }

    #[test]
    fn linear_range_over_vertices() {
        let s = ConvexBody::simplex(2, 1, 10).unwrap();
        let (lo, hi) = s.linear_range(&[1, 1]).unwrap();
        assert_eq!((lo, hi), (big(2), big(10)));
        let (lo, hi) = s.linear_range(&[1, -1]).unwrap();
        assert_eq!((lo, hi), (big(-8), big(8)));
    }

    #[test]
    fn slabs_partition_points() {
        let s = ConvexBody::simplex(3, 0, 7).unwrap();
        let all: Vec<_> = pts(&s);
        let from_slabs: Vec<_> = (0..=7).flat_map(|x| s.slab_points(x).collect::<Vec<_>>()).collect();
        assert_eq!(all, from_slabs);
        assert_eq!(s.lattice_point_count() as usize, all.len());
        assert_eq!(all.len(), 120);
    }

    #[test]
    fn translation_moves_points() {
        let s = ConvexBody::simplex(2, 1, 6).unwrap();
        let t = s.translated(&[3, -2]);
        let moved: Vec<_> = pts(&s).into_iter().map(|p| vec![p[0] + 3, p[1] - 2]).collect();
        assert_eq!(pts(&t), moved);
    }
}
