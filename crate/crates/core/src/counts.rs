//! Brute-force combinatorial counts of a point set.
//!
//! Everything here is exact integer enumeration: `O(n^4)` for circle depths
//! and convex quadrilaterals, `O(n^3)` for j-edges. Outer loops run on the
//! rayon pool; all reductions are integer sums so results do not depend on
//! the thread count.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::geometry::{convex_hull, orient, Point, PointSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CountsError {
    #[error("depth vector is inconsistent: sum k*c_k is below C(n,4)")]
    NegativeResult,
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
}

/// Binomial coefficient as an exact `i128`; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> i128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: i128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as i128 / (i + 1) as i128;
    }
    acc
}

/// All exact counts for one point set.
///
/// `v[i]` holds `v_{i+1}`: the Voronoi vertex counts are indexed from 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DepthProfile {
    pub n: usize,
    pub h: usize,
    pub c: Vec<u64>,
    pub e: Vec<u64>,
    pub e_cum: Vec<u64>,
    pub v: Vec<u64>,
    pub cr: u64,
}

impl DepthProfile {
    /// `(cr, C(n,4))`, the crossing ratio as an exact fraction.
    pub fn alpha_ratio(&self) -> (u64, u64) {
        (self.cr, binomial(self.n as u64, 4) as u64)
    }

    pub fn alpha(&self) -> f64 {
        let (num, den) = self.alpha_ratio();
        num as f64 / den as f64
    }

    pub fn is_convex_position(&self) -> bool {
        self.h == self.n
    }

    /// Re-checks every exact relation the counts must satisfy.
    pub fn check_invariants(&self) -> Result<(), CountsError> {
        let n = self.n;
        let nn = n as u64;
        let bad = |msg: String| Err(CountsError::InternalInconsistency(msg));
        if self.c.len() != n - 2 || self.e.len() != n - 1 {
            return bad("vector lengths".into());
        }
        if self.e_cum.len() != n - 2 || self.v.len() != n - 1 {
            return bad("vector lengths".into());
        }
        let sum = |v: &[u64]| v.iter().map(|&x| x as i128).sum::<i128>();
        if sum(&self.c) != binomial(nn, 3) {
            return bad("sum of c_k".into());
        }
        if sum(&self.e) != (n * (n - 1)) as i128 {
            return bad("sum of e_j".into());
        }
        if sum(&self.v) != 2 * binomial(nn, 3) {
            return bad("sum of v_k".into());
        }
        for k in 0..n - 2 {
            let pair = 2 * (k + 1) * (n - k - 2);
            if self.c[k] + self.c[n - k - 3] != pair as u64 {
                return bad(format!("c_k + c_(n-k-3) at k={k}"));
            }
            if self.c[k] + self.e_cum[k] != ((k + 1) * (2 * n - k - 2)) as u64 {
                return bad(format!("c_k + E_k at k={k}"));
            }
        }
        if voronoi_vertex_counts(&self.c) != self.v {
            return bad("v_k from c_k".into());
        }
        for j in 0..n - 1 {
            if self.e[j] != self.e[n - 2 - j] {
                return bad(format!("e_j symmetry at j={j}"));
            }
        }
        if self.e[0] != self.h as u64 || self.e_cum[0] != self.h as u64 {
            return bad("e_0 = h".into());
        }
        let c4 = binomial(nn, 4) as u64;
        if self.cr > c4 || ((self.cr == c4) != (self.h == n)) {
            return bad("crossing number range".into());
        }
        Ok(())
    }
}

/// `c[k]` = number of point triples whose circumcircle strictly encloses
/// exactly `k` other points, for `k` in `0..=n-3`.
pub fn circle_depths(set: &PointSet) -> Vec<u64> {
    let n = set.len();
    let pts = set.points();
    (0..n)
        .into_par_iter()
        .map(|i| {
            let mut local = vec![0u64; n - 2];
            for j in i + 1..n {
                for k in j + 1..n {
                    let circle = set.circle_test(i, j, k);
                    let inside = pts
                        .iter()
                        .enumerate()
                        .filter(|&(l, &s)| l != i && l != j && l != k && circle.side(s) > 0)
                        .count();
                    local[inside] += 1;
                }
            }
            local
        })
        .reduce(|| vec![0u64; n - 2], add_vectors)
}

fn add_vectors(mut a: Vec<u64>, b: Vec<u64>) -> Vec<u64> {
    a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
    a
}

/// `e[j]` = number of ordered pairs `(p, q)` with exactly `j` points strictly
/// right of the directed line `p -> q`, for `j` in `0..=n-2`.
pub fn j_edges(set: &PointSet) -> Vec<u64> {
    let n = set.len();
    let pts = set.points();
    (0..n)
        .into_par_iter()
        .map(|i| {
            let mut local = vec![0u64; n - 1];
            for j in 0..n {
                if i == j {
                    continue;
                }
                let right = pts
                    .iter()
                    .filter(|&&r| orient(pts[i], pts[j], r) < 0)
                    .count();
                local[right] += 1;
            }
            local
        })
        .reduce(|| vec![0u64; n - 1], add_vectors)
}

/// Prefix sums of `e`, dropping the last (always `n(n-1)`) entry.
pub fn cumulative_edges(e: &[u64]) -> Vec<u64> {
    let mut out: Vec<u64> = e
        .iter()
        .scan(0u64, |acc, &x| {
            *acc += x;
            Some(*acc)
        })
        .collect();
    out.pop();
    out
}

/// `v_k = c_{k-1} + c_{k-2}` for `k` in `1..=n-1`, with `c_{-1} = c_{n-2} = 0`.
pub fn voronoi_vertex_counts(c: &[u64]) -> Vec<u64> {
    let m = c.len();
    let at = |i: isize| -> u64 {
        if i < 0 || i as usize >= m {
            0
        } else {
            c[i as usize]
        }
    };
    (1..=m as isize + 1)
        .map(|k| at(k - 1) + at(k - 2))
        .collect()
}

fn in_convex_position(a: Point, b: Point, c: Point, d: Point) -> bool {
    // d inside abc, or one of a, b, c inside the triangle of the other three
    let inside = |p: Point, q: Point, r: Point, s: Point| {
        let o = orient(p, q, r);
        orient(p, q, s) == o && orient(q, r, s) == o && orient(r, p, s) == o
    };
    !(inside(a, b, c, d) || inside(a, b, d, c) || inside(a, c, d, b) || inside(b, c, d, a))
}

/// Number of 4-point subsets in convex position.
pub fn crossing_number_bruteforce(set: &PointSet) -> u64 {
    let n = set.len();
    let p = set.points();
    (0..n)
        .into_par_iter()
        .map(|i| {
            let mut count = 0u64;
            for j in i + 1..n {
                for k in j + 1..n {
                    for l in k + 1..n {
                        if in_convex_position(p[i], p[j], p[k], p[l]) {
                            count += 1;
                        }
                    }
                }
            }
            count
        })
        .sum()
}

/// `sum k*c_k - C(n,4)`, where `n = c.len() + 2`.
pub fn crossing_number_from_depths(c: &[u64]) -> Result<u64, CountsError> {
    let n = c.len() as u64 + 2;
    let moment: i128 = c
        .iter()
        .enumerate()
        .map(|(k, &ck)| k as i128 * ck as i128)
        .sum();
    let cr = moment - binomial(n, 4);
    if cr < 0 {
        return Err(CountsError::NegativeResult);
    }
    Ok(cr as u64)
}

/// Computes every count and cross-checks the two crossing-number routes.
pub fn depth_profile(set: &PointSet) -> Result<DepthProfile, CountsError> {
    let n = set.len();
    let c = circle_depths(set);
    let e = j_edges(set);
    let e_cum = cumulative_edges(&e);
    let v = voronoi_vertex_counts(&c);
    let h = convex_hull(set).len();
    let cr = crossing_number_bruteforce(set);
    let from_depths = crossing_number_from_depths(&c)
        .map_err(|_| CountsError::InternalInconsistency("negative crossing number".into()))?;
    if cr != from_depths {
        return Err(CountsError::InternalInconsistency(format!(
            "crossing number: quadruples give {cr}, depths give {from_depths}"
        )));
    }
    let profile = DepthProfile {
        n,
        h,
        c,
        e,
        e_cum,
        v,
        cr,
    };
    profile.check_invariants()?;
    Ok(profile)
}
