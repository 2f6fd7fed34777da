//! Seeded point-set generators.
//!
//! Randomness comes from SplitMix64 so that generated sets can be reproduced
//! bit for bit by any implementation: the state advances by
//! `0x9E3779B97F4A7C15` and each output is mixed with the multipliers
//! `0xBF58476D1CE4E5B9` and `0x94D049BB133111EB` (shifts 30, 27, 31).
//! Integer coordinates in `[0, 2^20)` are the top 20 bits of one output;
//! uniform reals in `[0, 1)` are the top 53 bits scaled by `2^-53`.

use std::f64::consts::PI;

use thiserror::Error;

use crate::geometry::{hull_of, orient, validate_general_position, CircleTest, Point, PointSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenerateError {
    #[error("n = {0} is outside the supported range")]
    InvalidSize(usize),
    #[error("no valid point set found after {0} attempts")]
    GenerationFailed(usize),
}

#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    fn next_coordinate(&mut self) -> i32 {
        (self.next_u64() >> 44) as i32
    }
}

const ATTEMPTS_PER_POINT: usize = 1000;

fn fits(points: &[Point], candidate: Point) -> bool {
    let m = points.len();
    if points.contains(&candidate) {
        return false;
    }
    for i in 0..m {
        for j in i + 1..m {
            if orient(points[i], points[j], candidate) == 0 {
                return false;
            }
        }
    }
    for i in 0..m {
        for j in i + 1..m {
            for k in j + 1..m {
                // coordinates are below 2^20, so the i128 path is exact
                let circle = CircleTest::new(points[i], points[j], points[k], true)
                    .expect("accepted points have no collinear triple");
                if circle.side(candidate) == 0 {
                    return false;
                }
            }
        }
    }
    true
}

/// `n` points uniform in `[0, 2^20)^2`, each resampled until it keeps the
/// set in general position.
pub fn generate_random(n: usize, seed: u64) -> Result<PointSet, GenerateError> {
    if n < 4 {
        return Err(GenerateError::InvalidSize(n));
    }
    let mut rng = SplitMix64::new(seed);
    let mut points = Vec::with_capacity(n);
    while points.len() < n {
        let mut placed = false;
        for _ in 0..ATTEMPTS_PER_POINT {
            let candidate = Point::new(rng.next_coordinate(), rng.next_coordinate());
            if fits(&points, candidate) {
                points.push(candidate);
                placed = true;
                break;
            }
        }
        if !placed {
            return Err(GenerateError::GenerationFailed(ATTEMPTS_PER_POINT));
        }
    }
    Ok(validate_general_position(points).expect("points were checked incrementally"))
}

const CONVEX_ATTEMPTS: usize = 100;

/// `n` points in strictly convex and general position, near an ellipse with
/// semi-axes about `2^20` and `0.75 * 2^20`.
///
/// Validation is exhaustive (`O(n^4)`), so large `n` is slow.
pub fn generate_convex(n: usize, seed: u64) -> Result<PointSet, GenerateError> {
    if !(4..=1000).contains(&n) {
        return Err(GenerateError::InvalidSize(n));
    }
    let mut rng = SplitMix64::new(seed);
    for _ in 0..CONVEX_ATTEMPTS {
        let a = (1 << 20) as f64 + (rng.next_u64() >> 48) as f64;
        let b = 786_432.0 + (rng.next_u64() >> 48) as f64;
        let phase = rng.next_f64() * 2.0 * PI;
        let points: Vec<Point> = (0..n)
            .map(|k| {
                let t = phase + 2.0 * PI * (k as f64 + 0.5 * rng.next_f64()) / n as f64;
                Point::new((a * t.cos()).round() as i32, (b * t.sin()).round() as i32)
            })
            .collect();
        if hull_of(&points).len() != n {
            continue;
        }
        if let Ok(set) = validate_general_position(points) {
            return Ok(set);
        }
    }
    Err(GenerateError::GenerationFailed(CONVEX_ATTEMPTS))
}
