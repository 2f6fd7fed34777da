//! Exact integer predicates, convex hull and general-position validation.
//!
//! Coordinates are `i32`. Orientation is evaluated in `i128`, which is exact
//! for every pair of `i32` points. The in-circle determinant needs up to
//! ~135 bits in the worst case, so it takes an `i128` fast path when the
//! coordinate spread allows it and falls back to arbitrary precision
//! otherwise.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A point with integer coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Point {
    pub x: i32,
    pub y: i32,
}

impl Point {
    pub const fn new(x: i32, y: i32) -> Self {
        Self { x, y }
    }
}

impl From<(i32, i32)> for Point {
    fn from((x, y): (i32, i32)) -> Self {
        Point::new(x, y)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("base points of the circle are collinear")]
    CollinearBase,
    #[error("a point set needs at least 4 points, got {0}")]
    TooFewPoints(usize),
    #[error("points {0} and {1} coincide")]
    DuplicatePoint(usize, usize),
    #[error("points {0}, {1}, {2} are collinear")]
    Collinear(usize, usize, usize),
    #[error("points {0}, {1}, {2}, {3} are cocircular")]
    Cocircular(usize, usize, usize, usize),
}

/// Sign of the orientation determinant of `(p, q, r)`.
///
/// `+1` iff `r` lies strictly left of the directed line `p -> q`.
#[inline]
pub fn orient(p: Point, q: Point, r: Point) -> i32 {
    let qx = q.x as i128 - p.x as i128;
    let qy = q.y as i128 - p.y as i128;
    let rx = r.x as i128 - p.x as i128;
    let ry = r.y as i128 - p.y as i128;
    (qx * ry - qy * rx).signum() as i32
}

/// `+1` iff `s` lies strictly inside the circle through `p, q, r`, `0` if on
/// it, `-1` if outside. Independent of the orientation of `(p, q, r)`.
pub fn in_circle(p: Point, q: Point, r: Point, s: Point) -> Result<i32, GeometryError> {
    let o = orient(p, q, r);
    if o == 0 {
        return Err(GeometryError::CollinearBase);
    }
    Ok(in_circle_raw(p, q, r, s) * o)
}

/// Largest coordinate spread for which [`Circle`] stays within `i128`.
const FAST_SPREAD: i64 = 1 << 30;

fn spread(points: &[Point]) -> i64 {
    let (mut lo_x, mut hi_x, mut lo_y, mut hi_y) = (i64::MAX, i64::MIN, i64::MAX, i64::MIN);
    for p in points {
        lo_x = lo_x.min(p.x as i64);
        hi_x = hi_x.max(p.x as i64);
        lo_y = lo_y.min(p.y as i64);
        hi_y = hi_y.max(p.y as i64);
    }
    (hi_x - lo_x).max(hi_y - lo_y)
}

/// Sign of the raw (orientation-dependent) lifted determinant.
fn in_circle_raw(p: Point, q: Point, r: Point, s: Point) -> i32 {
    if spread(&[p, q, r, s]) < FAST_SPREAD {
        Circle::new(p, q, r).side_raw(s)
    } else {
        in_circle_big(p, q, r, s)
    }
}

fn in_circle_big(p: Point, q: Point, r: Point, s: Point) -> i32 {
    let d = |a: Point| {
        let x = BigInt::from(a.x as i64 - p.x as i64);
        let y = BigInt::from(a.y as i64 - p.y as i64);
        let l = &x * &x + &y * &y;
        (x, y, l)
    };
    let (qx, qy, ql) = d(q);
    let (rx, ry, rl) = d(r);
    let (sx, sy, sl) = d(s);
    let det = &qx * (&ry * &sl - &rl * &sy) - &qy * (&rx * &sl - &rl * &sx)
        + &ql * (&rx * &sy - &ry * &sx);
    match det.sign() {
        num_bigint::Sign::Plus => -1,
        num_bigint::Sign::Minus => 1,
        num_bigint::Sign::NoSign => 0,
    }
}

/// Cofactors of the lifted determinant for a fixed base triple, so that the
/// side of many query points can be tested with three products each.
///
/// Only valid while all involved coordinates differ by less than 2^30.
#[derive(Clone, Copy, Debug)]
struct Circle {
    origin: Point,
    a: i128,
    b: i128,
    c: i128,
}

impl Circle {
    fn new(p: Point, q: Point, r: Point) -> Self {
        let qx = q.x as i128 - p.x as i128;
        let qy = q.y as i128 - p.y as i128;
        let rx = r.x as i128 - p.x as i128;
        let ry = r.y as i128 - p.y as i128;
        let ql = qx * qx + qy * qy;
        let rl = rx * rx + ry * ry;
        // -det [q; r; s] with rows (x, y, x^2 + y^2) relative to p, expanded
        // along s; positive inside a counter-clockwise circle.
        Circle {
            origin: p,
            a: ql * ry - qy * rl,
            b: qx * rl - ql * rx,
            c: qy * rx - qx * ry,
        }
    }

    #[inline]
    fn side_raw(&self, s: Point) -> i32 {
        let sx = s.x as i128 - self.origin.x as i128;
        let sy = s.y as i128 - self.origin.y as i128;
        (sx * self.a + sy * self.b + (sx * sx + sy * sy) * self.c).signum() as i32
    }
}

/// Batched in-circle tests against one base triple.
///
/// Picks the `i128` path once for a whole point set and only drops to
/// arbitrary precision when the set's spread demands it.
#[derive(Clone, Copy, Debug)]
pub(crate) struct CircleTest {
    p: Point,
    q: Point,
    r: Point,
    orientation: i32,
    fast: Option<Circle>,
}

impl CircleTest {
    /// `fast` must only be set when every point that will be queried lies
    /// within the spread bound together with `p, q, r`.
    pub(crate) fn new(p: Point, q: Point, r: Point, fast: bool) -> Option<Self> {
        let orientation = orient(p, q, r);
        if orientation == 0 {
            return None;
        }
        Some(CircleTest {
            p,
            q,
            r,
            orientation,
            fast: fast.then(|| Circle::new(p, q, r)),
        })
    }

    #[inline]
    pub(crate) fn side(&self, s: Point) -> i32 {
        let raw = match &self.fast {
            Some(c) => c.side_raw(s),
            None => in_circle_big(self.p, self.q, self.r, s),
        };
        raw * self.orientation
    }
}

/// A validated point set: at least four distinct points, no three collinear
/// and no four cocircular.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointSet {
    points: Vec<Point>,
    #[serde(skip)]
    fast_predicates: bool,
}

impl PointSet {
    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub(crate) fn circle_test(&self, i: usize, j: usize, k: usize) -> CircleTest {
        let p = &self.points;
        CircleTest::new(p[i], p[j], p[k], self.fast_predicates)
            .expect("validated point sets have no collinear triples")
    }
}

impl std::ops::Index<usize> for PointSet {
    type Output = Point;

    fn index(&self, i: usize) -> &Point {
        &self.points[i]
    }
}

/// Validates general position exhaustively.
///
/// Checks run in the order duplicates, collinear triples, cocircular
/// quadruples; the reported violation is the lexicographically smallest
/// offending index tuple of the first failing kind.
pub fn validate_general_position(points: Vec<Point>) -> Result<PointSet, GeometryError> {
    let n = points.len();
    if n < 4 {
        return Err(GeometryError::TooFewPoints(n));
    }
    for i in 0..n {
        for j in i + 1..n {
            if points[i] == points[j] {
                return Err(GeometryError::DuplicatePoint(i, j));
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if orient(points[i], points[j], points[k]) == 0 {
                    return Err(GeometryError::Collinear(i, j, k));
                }
            }
        }
    }
    let fast = spread(&points) < FAST_SPREAD;
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let circle = CircleTest::new(points[i], points[j], points[k], fast)
                    .expect("collinear triples were rejected above");
                if let Some(l) = (k + 1..n).find(|&l| circle.side(points[l]) == 0) {
                    return Err(GeometryError::Cocircular(i, j, k, l));
                }
            }
        }
    }
    Ok(PointSet {
        points,
        fast_predicates: fast,
    })
}

impl TryFrom<Vec<Point>> for PointSet {
    type Error = GeometryError;

    fn try_from(points: Vec<Point>) -> Result<Self, Self::Error> {
        validate_general_position(points)
    }
}

/// Indices of the convex hull vertices in counter-clockwise order, starting
/// from the lowest (then leftmost) point.
pub fn convex_hull(set: &PointSet) -> Vec<usize> {
    hull_of(set.points())
}

/// Monotone chain on arbitrary points; collinear boundary points are dropped.
pub(crate) fn hull_of(points: &[Point]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by_key(|&i| (points[i].x, points[i].y));
    order.dedup_by_key(|i| points[*i]);
    if order.len() < 3 {
        return order;
    }
    let mut hull: Vec<usize> = Vec::with_capacity(2 * order.len());
    for pass in [false, true] {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &usize>> = if pass {
            Box::new(order.iter().rev())
        } else {
            Box::new(order.iter())
        };
        for &i in iter {
            while hull.len() >= start + 2
                && orient(
                    points[hull[hull.len() - 2]],
                    points[hull[hull.len() - 1]],
                    points[i],
                ) <= 0
            {
                hull.pop();
            }
            hull.push(i);
        }
        hull.pop();
    }
    // Rotate so the lowest, then leftmost, vertex comes first.
    let first = (0..hull.len())
        .min_by_key(|&t| (points[hull[t]].y, points[hull[t]].x))
        .unwrap_or(0);
    hull.rotate_left(first);
    hull
}
