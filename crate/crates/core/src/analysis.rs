//! Identity and bound checks tying the exact counts to the polynomials and
//! their roots.
//!
//! Integer identities are checked with zero tolerance. Identities involving
//! roots carry a relative tolerance; one-sided bounds add their slack in the
//! direction that makes a pass conservative, so a reported pass is never a
//! rounding artefact hiding a violation.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::counts::{binomial, voronoi_vertex_counts, DepthProfile};
use crate::generate::SplitMix64;
use crate::poly::{IntPolynomial, PolyKind, PolynomialSet};
use crate::roots::{matching_distance, roots_of_real_scaled_unity, roots_of_scaled_unity, RootSet};

/// Slack for one-sided bounds on root moduli, angles and distances.
pub const BOUND_SLACK: f64 = 1e-9;
/// Relative tolerance for sums over computed roots.
pub const ROOT_SUM_TOLERANCE: f64 = 1e-7;
/// Relative tolerance for the crossing number recovered from root-of-unity sums.
pub const CROSSING_FROM_ROOTS_TOLERANCE: f64 = 1e-6;
/// Relative tolerance for the generic root-of-unity derivative identity.
pub const SCALED_UNITY_IDENTITY_TOLERANCE: f64 = 1e-8;
/// Deviation of `|z|` from 1 still counted as "on the unit circle".
pub const UNIT_CIRCLE_TOLERANCE: f64 = 1e-8;
/// Matching distance for roots with a known closed form.
pub const CLOSED_FORM_ROOT_TOLERANCE: f64 = 1e-9;
/// Roots closer than this to 1 make the `1/(1-a)` sums meaningless.
pub const ROOT_AT_ONE_DISTANCE: f64 = 1e-12;
/// Relative agreement of the two routes to the depth mean and deviation.
pub const STATS_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("imaginary residue {imaginary:.3e} too large in the {which:?} root-of-unity sum")]
    ImaginaryResidueTooLarge { which: PolyKind, imaginary: f64 },
    #[error("polynomial of kind {0:?} is not supported here")]
    UnsupportedKind(PolyKind),
    #[error("a root lies within {distance:.3e} of 1")]
    RootAtOne { distance: f64 },
    #[error("root test says convex={by_roots} (max ||z|-1| = {max_deviation:.3e}) but hull says convex={by_hull}")]
    Disagreement {
        by_roots: bool,
        by_hull: bool,
        max_deviation: f64,
    },
    #[error("bound `{name}` violated: measured {measured}, bound {bound}")]
    BoundViolation {
        name: String,
        measured: f64,
        bound: f64,
    },
    #[error("depth statistics disagree: {0}")]
    StatsMismatch(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum CheckValue {
    Int(i128),
    Real(f64),
    Complex([f64; 2]),
}

impl CheckValue {
    fn as_complex(self) -> Complex64 {
        match self {
            CheckValue::Int(i) => Complex64::new(i as f64, 0.0),
            CheckValue::Real(r) => Complex64::new(r, 0.0),
            CheckValue::Complex([re, im]) => Complex64::new(re, im),
        }
    }
}

impl From<Complex64> for CheckValue {
    fn from(z: Complex64) -> Self {
        CheckValue::Complex([z.re, z.im])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Equal,
    AtLeast,
    AtMost,
    /// A measured value with nothing asserted; always passes.
    Reported,
}

/// One evaluated identity or bound.
///
/// For `Equal`, `passed` iff `|lhs - rhs| <= tolerance * max(1, |rhs|)`.
/// For `AtLeast` / `AtMost`, `tolerance` is an absolute slack on `rhs`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub relation: Relation,
    pub lhs: CheckValue,
    pub rhs: CheckValue,
    pub tolerance: f64,
    pub passed: bool,
}

impl IdentityCheck {
    pub fn exact(name: impl Into<String>, lhs: i128, rhs: i128) -> Self {
        IdentityCheck {
            name: name.into(),
            relation: Relation::Equal,
            lhs: CheckValue::Int(lhs),
            rhs: CheckValue::Int(rhs),
            tolerance: 0.0,
            passed: lhs == rhs,
        }
    }

    fn exact_order(name: impl Into<String>, lhs: i128, relation: Relation, rhs: i128) -> Self {
        let passed = match relation {
            Relation::Equal => lhs == rhs,
            Relation::AtLeast => lhs >= rhs,
            Relation::AtMost => lhs <= rhs,
            Relation::Reported => true,
        };
        IdentityCheck {
            name: name.into(),
            relation,
            lhs: CheckValue::Int(lhs),
            rhs: CheckValue::Int(rhs),
            tolerance: 0.0,
            passed,
        }
    }

    pub fn reported(name: impl Into<String>, value: i128) -> Self {
        IdentityCheck {
            name: name.into(),
            relation: Relation::Reported,
            lhs: CheckValue::Int(value),
            rhs: CheckValue::Int(value),
            tolerance: 0.0,
            passed: true,
        }
    }

    /// Approximate equality with relative tolerance.
    pub fn approx(
        name: impl Into<String>,
        lhs: impl Into<CheckValue>,
        rhs: impl Into<CheckValue>,
        tolerance: f64,
    ) -> Self {
        let (lhs, rhs) = (lhs.into(), rhs.into());
        let (l, r) = (lhs.as_complex(), rhs.as_complex());
        let passed = (l - r).norm() <= tolerance * r.norm().max(1.0);
        IdentityCheck {
            name: name.into(),
            relation: Relation::Equal,
            lhs,
            rhs,
            tolerance,
            passed,
        }
    }

    /// `measured >= bound - slack`.
    pub fn at_least(name: impl Into<String>, measured: f64, bound: f64, slack: f64) -> Self {
        IdentityCheck {
            name: name.into(),
            relation: Relation::AtLeast,
            lhs: CheckValue::Real(measured),
            rhs: CheckValue::Real(bound),
            tolerance: slack,
            passed: measured >= bound - slack,
        }
    }

    /// `measured <= bound + slack`.
    pub fn at_most(name: impl Into<String>, measured: f64, bound: f64, slack: f64) -> Self {
        IdentityCheck {
            name: name.into(),
            relation: Relation::AtMost,
            lhs: CheckValue::Real(measured),
            rhs: CheckValue::Real(bound),
            tolerance: slack,
            passed: measured <= bound + slack,
        }
    }
}

impl From<f64> for CheckValue {
    fn from(x: f64) -> Self {
        CheckValue::Real(x)
    }
}

fn sum_i128(terms: impl Iterator<Item = i128>) -> i128 {
    terms.sum()
}

/// Every exact integer identity between the counts and the polynomials.
///
/// Values at `z = -1` are asserted only for odd `n`; the closed forms for
/// convex position are added when `h = n`.
pub fn verify_structural_identities(
    profile: &DepthProfile,
    polys: &PolynomialSet,
) -> Vec<IdentityCheck> {
    let n = profile.n;
    let ni = n as i128;
    let nn = n as u64;
    let (c3, c4, c5) = (binomial(nn, 3), binomial(nn, 4), binomial(nn, 5));
    let cr = profile.cr as i128;
    let c = |k: usize| profile.c[k] as i128;
    let mut out = Vec::new();

    let v_expected = voronoi_vertex_counts(&profile.c);
    for k in 1..n {
        out.push(IdentityCheck::exact(
            format!("voronoi_from_circles[{k}]"),
            profile.v[k - 1] as i128,
            v_expected[k - 1] as i128,
        ));
    }
    for k in 0..n - 2 {
        let kk = k as i128;
        out.push(IdentityCheck::exact(
            format!("circle_pairs[{k}]"),
            c(k) + c(n - k - 3),
            2 * (kk + 1) * (ni - kk - 2),
        ));
        out.push(IdentityCheck::exact(
            format!("circles_plus_edges[{k}]"),
            c(k) + profile.e_cum[k] as i128,
            (kk + 1) * (2 * ni - kk - 2),
        ));
        if 2 * k <= n - 3 {
            let floor = (kk + 1) * (ni - kk - 2);
            out.push(IdentityCheck::exact_order(
                format!("circle_lower_bound[{k}]"),
                c(k),
                Relation::AtLeast,
                floor,
            ));
            out.push(IdentityCheck::exact_order(
                format!("circle_upper_bound[{}]", n - k - 3),
                c(n - k - 3),
                Relation::AtMost,
                floor,
            ));
        }
    }
    out.push(IdentityCheck::exact(
        "first_moment",
        sum_i128((0..n - 2).map(|k| k as i128 * c(k))),
        c4 + cr,
    ));
    out.push(IdentityCheck::exact(
        "second_moment",
        sum_i128((0..n - 2).map(|k| (k * k) as i128 * c(k))),
        c5 + c4 + (ni - 3) * cr,
    ));
    out.push(IdentityCheck::exact(
        "reverse_moment",
        sum_i128((0..n - 2).map(|k| (n - k - 3) as i128 * c(k))),
        3 * c4 - cr,
    ));

    let at = |p: &IntPolynomial, order: usize, z: i128| p.derivative(order).eval_int(z);
    let (pc, pv, pe, pj) = (&polys.circle, &polys.voronoi, &polys.e_leq, &polys.j_edge);
    out.push(IdentityCheck::exact("circle_at_1", at(pc, 0, 1), c3));
    out.push(IdentityCheck::exact(
        "circle_d1_at_1",
        at(pc, 1, 1),
        c4 + cr,
    ));
    out.push(IdentityCheck::exact(
        "circle_d2_at_1",
        at(pc, 2, 1),
        c5 + (ni - 4) * cr,
    ));
    out.push(IdentityCheck::exact("voronoi_at_1", at(pv, 0, 1), 2 * c3));
    out.push(IdentityCheck::exact(
        "voronoi_d1_at_1",
        at(pv, 1, 1),
        c3 + 2 * c4 + 2 * cr,
    ));
    out.push(IdentityCheck::exact(
        "voronoi_d2_at_1",
        at(pv, 2, 1),
        2 * c4 + 2 * c5 + 2 * (ni - 3) * cr,
    ));
    out.push(IdentityCheck::exact("voronoi_at_minus_1", at(pv, 0, -1), 0));
    out.push(IdentityCheck::exact("e_leq_at_1", at(pe, 0, 1), 3 * c3));
    out.push(IdentityCheck::exact(
        "e_leq_d1_at_1",
        at(pe, 1, 1),
        9 * c4 - cr,
    ));
    out.push(IdentityCheck::exact(
        "e_leq_d2_at_1",
        at(pe, 2, 1),
        35 * c5 - (ni - 4) * cr,
    ));
    if n % 2 == 1 {
        out.push(IdentityCheck::exact(
            "circle_at_minus_1",
            at(pc, 0, -1),
            (ni - 1) / 2,
        ));
        out.push(IdentityCheck::exact(
            "voronoi_d1_at_minus_1",
            at(pv, 1, -1),
            (ni - 1) / 2,
        ));
        out.push(IdentityCheck::exact(
            "e_leq_at_minus_1",
            at(pe, 0, -1),
            ni * (ni - 1) / 2,
        ));
    }
    let product = pc.times_one_plus_z();
    let mismatch = sum_i128((0..pv.coeffs().len().max(product.coeffs().len())).map(|k| {
        let a = pv.coeffs().get(k).copied().unwrap_or(0) as i128;
        let b = product.coeffs().get(k).copied().unwrap_or(0) as i128;
        (a - b).abs()
    }));
    out.push(IdentityCheck::exact("voronoi_factorization", mismatch, 0));
    out.push(IdentityCheck::exact(
        "j_edge_crossing",
        at(pj, 2, 1) - (ni - 3) * at(pj, 1, 1),
        2 * cr - 6 * c4,
    ));
    for j in 0..n - 1 {
        out.push(IdentityCheck::exact(
            format!("j_edge_symmetry[{j}]"),
            profile.e[j] as i128,
            profile.e[n - 2 - j] as i128,
        ));
    }
    out.push(IdentityCheck::exact(
        "hull_edges",
        profile.e[0] as i128,
        profile.h as i128,
    ));

    if profile.is_convex_position() {
        out.push(IdentityCheck::exact("convex_crossing", cr, c4));
        let padded = |k: isize| -> i128 {
            if k < 0 || k as usize >= n - 2 {
                0
            } else {
                c(k as usize)
            }
        };
        for k in 0..n - 2 {
            let kk = k as i128;
            out.push(IdentityCheck::exact(
                format!("convex_circles[{k}]"),
                c(k),
                (kk + 1) * (ni - kk - 2),
            ));
            let ki = k as isize;
            out.push(IdentityCheck::exact(
                format!("convex_concavity[{k}]"),
                2 * c(k),
                padded(ki - 1) + padded(ki + 1) + 2,
            ));
        }
        for k in 1..n {
            let kk = k as i128;
            out.push(IdentityCheck::exact(
                format!("convex_voronoi[{k}]"),
                profile.v[k - 1] as i128,
                (2 * kk - 1) * ni - 2 * kk * kk,
            ));
            out.push(IdentityCheck::exact(
                format!("convex_voronoi_palindrome[{k}]"),
                profile.v[k - 1] as i128,
                profile.v[n - k - 1] as i128,
            ));
        }
    }
    out
}

/// `p_C(-1)` and `p_E(-1)` for even `n`, recorded with no asserted value.
pub fn reported_values(polys: &PolynomialSet) -> Vec<IdentityCheck> {
    if polys.n % 2 == 1 {
        return Vec::new();
    }
    [
        ("circle_at_minus_1", &polys.circle),
        ("e_leq_at_minus_1", &polys.e_leq),
    ]
    .into_iter()
    .map(|(name, p)| IdentityCheck::reported(name, p.eval_int(-1)))
    .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CrossingFromRoots {
    pub which: PolyKind,
    pub value: f64,
    pub imaginary: f64,
}

/// `sum_k P(z_k) z_k / (z_k - 1)^2` over `zs`, nearest-to-1 terms first.
fn scaled_unity_sum(p: &IntPolynomial, mut zs: Vec<Complex64>, t: Complex64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    zs.sort_by(|a, b| (a - one).norm().total_cmp(&(b - one).norm()));
    zs.iter()
        .map(|&z| {
            let d = z - one;
            p.eval(t * z) * z / (d * d)
        })
        .sum()
}

/// Crossing number from a sum over roots of `z^N = -a`, for the circle
/// (`N = n-3`, `a = 3`), Voronoi (`N = n-1`, `a = 3`) or cumulative edge
/// (`N = n-3`, `a = 1/3`) polynomial.
pub fn cr_from_roots_of_scaled_unity(
    polys: &PolynomialSet,
    which: PolyKind,
) -> Result<CrossingFromRoots, AnalysisError> {
    let n = polys.n as f64;
    let (p, degree, a, scale) = match which {
        PolyKind::Circle => (&polys.circle, polys.n - 3, 3.0, 4.0 / (3.0 * (n - 3.0))),
        PolyKind::Voronoi => (&polys.voronoi, polys.n - 1, 3.0, 2.0 / (3.0 * (n - 1.0))),
        PolyKind::ELeq => (&polys.e_leq, polys.n - 3, 1.0 / 3.0, -4.0 / (n - 3.0)),
        other => return Err(AnalysisError::UnsupportedKind(other)),
    };
    let zs = roots_of_real_scaled_unity(degree, a);
    let sum = scale * scaled_unity_sum(p, zs, Complex64::new(1.0, 0.0));
    if sum.im.abs() > CROSSING_FROM_ROOTS_TOLERANCE * sum.re.abs().max(1.0) {
        return Err(AnalysisError::ImaginaryResidueTooLarge {
            which,
            imaginary: sum.im,
        });
    }
    Ok(CrossingFromRoots {
        which,
        value: sum.re,
        imaginary: sum.im,
    })
}

/// Checks `t P'(t) = N/(1+a) P(t) + (1+a)/(N a) sum P(t z_k) z_k/(z_k-1)^2`
/// over the roots of `z^N = -a`, with `N` the degree of `p`.
pub fn aziz_identity_check(p: &IntPolynomial, a: Complex64, t: Complex64) -> IdentityCheck {
    aziz_identity_check_with_degree(p, p.degree().unwrap_or(0).max(1), a, t)
}

/// As [`aziz_identity_check`] with an explicit degree bound `N >= deg p`.
pub fn aziz_identity_check_with_degree(
    p: &IntPolynomial,
    degree: usize,
    a: Complex64,
    t: Complex64,
) -> IdentityCheck {
    let one = Complex64::new(1.0, 0.0);
    let nf = degree as f64;
    let lhs = t * p.derivative(1).eval(t);
    let sum = scaled_unity_sum(p, roots_of_scaled_unity(degree, a), t);
    let rhs = nf / (one + a) * p.eval(t) + (one + a) / (nf * a) * sum;
    IdentityCheck::approx(
        "scaled_unity_derivative",
        lhs,
        rhs,
        SCALED_UNITY_IDENTITY_TOLERANCE,
    )
}

fn check_not_at_one(roots: &RootSet) -> Result<(), AnalysisError> {
    if roots.min_distance_to_one < ROOT_AT_ONE_DISTANCE {
        return Err(AnalysisError::RootAtOne {
            distance: roots.min_distance_to_one,
        });
    }
    Ok(())
}

fn inverse_distance_sum(roots: &[Complex64]) -> Complex64 {
    roots.iter().map(|&a| (1.0 - a).inv()).sum()
}

fn cayley_sum(roots: &[Complex64]) -> Complex64 {
    roots.iter().map(|&a| (1.0 + a) / (1.0 - a)).sum()
}

/// Sums of `1/(1-a)` and `(1+a)/(1-a)` over the roots of `p_C` against their
/// crossing-number closed forms; for convex sets also over the roots of `p_V`.
pub fn root_sum_identities(
    pc_roots: &RootSet,
    pv_roots: Option<&RootSet>,
    profile: &DepthProfile,
) -> Result<Vec<IdentityCheck>, AnalysisError> {
    check_not_at_one(pc_roots)?;
    let nn = profile.n as u64;
    let (c3, c4) = (binomial(nn, 3) as f64, binomial(nn, 4) as f64);
    let cr = profile.cr as f64;
    let mut out = vec![
        IdentityCheck::approx(
            "circle_inverse_distance_sum",
            inverse_distance_sum(&pc_roots.roots),
            (c4 + cr) / c3,
            ROOT_SUM_TOLERANCE,
        ),
        IdentityCheck::approx(
            "circle_cayley_sum",
            cayley_sum(&pc_roots.roots),
            (2.0 * cr - 2.0 * c4) / c3,
            ROOT_SUM_TOLERANCE,
        ),
    ];
    if let Some(pv) = pv_roots.filter(|_| profile.is_convex_position()) {
        check_not_at_one(pv)?;
        out.push(IdentityCheck::approx(
            "convex_voronoi_inverse_distance_sum",
            inverse_distance_sum(&pv.roots),
            (profile.n as f64 - 2.0) / 2.0,
            ROOT_SUM_TOLERANCE,
        ));
        out.push(IdentityCheck::approx(
            "convex_voronoi_cayley_sum",
            cayley_sum(&pv.roots),
            0.0,
            ROOT_SUM_TOLERANCE,
        ));
    }
    Ok(out)
}

/// `sum 1/(1-a) + sum 1/(1-b) = deg` for the roots `a` of `p` and `b` of its
/// reciprocal.
pub fn reciprocal_root_identity(
    roots: &RootSet,
    reciprocal_roots: &RootSet,
) -> Result<IdentityCheck, AnalysisError> {
    check_not_at_one(roots)?;
    check_not_at_one(reciprocal_roots)?;
    Ok(IdentityCheck::approx(
        "reciprocal_inverse_distance_sum",
        inverse_distance_sum(&roots.roots) + inverse_distance_sum(&reciprocal_roots.roots),
        roots.degree() as f64,
        ROOT_SUM_TOLERANCE,
    ))
}

/// Root sums for `p_E`: `sum 1/(1-a) = (9-alpha)(n-3)/12` and
/// `sum (1-|a|^2)/|1-a|^2 = (n-3)(3-alpha)/6`.
pub fn e_leq_root_identities(
    pe_roots: &RootSet,
    profile: &DepthProfile,
) -> Result<Vec<IdentityCheck>, AnalysisError> {
    check_not_at_one(pe_roots)?;
    let alpha = profile.alpha();
    let m = profile.n as f64 - 3.0;
    let weighted: f64 = pe_roots
        .roots
        .iter()
        .map(|a| (1.0 - a.norm_sqr()) / (1.0 - a).norm_sqr())
        .sum();
    Ok(vec![
        IdentityCheck::approx(
            "e_leq_inverse_distance_sum",
            inverse_distance_sum(&pe_roots.roots),
            (9.0 - alpha) * m / 12.0,
            ROOT_SUM_TOLERANCE,
        ),
        IdentityCheck::approx(
            "e_leq_modulus_weighted_sum",
            weighted,
            m * (3.0 - alpha) / 6.0,
            ROOT_SUM_TOLERANCE,
        ),
    ])
}

/// `P'(z)/P(z) = sum 1/(z - a_i)` at `samples` pseudo-random points of the
/// square `[-2, 2]^2` that keep a distance of at least 0.05 from every root.
pub fn log_derivative_checks(
    p: &IntPolynomial,
    roots: &RootSet,
    samples: usize,
    seed: u64,
) -> Vec<IdentityCheck> {
    let mut rng = SplitMix64::new(seed);
    let dp = p.derivative(1);
    let mut out = Vec::with_capacity(samples);
    while out.len() < samples {
        let z = Complex64::new(4.0 * rng.next_f64() - 2.0, 4.0 * rng.next_f64() - 2.0);
        if roots.roots.iter().any(|a| (z - a).norm() < 0.05) {
            continue;
        }
        let lhs = dp.eval(z) / p.eval(z);
        let rhs: Complex64 = roots.roots.iter().map(|a| (z - a).inv()).sum();
        out.push(IdentityCheck::approx(
            "log_derivative",
            lhs,
            rhs,
            ROOT_SUM_TOLERANCE,
        ));
    }
    out
}

/// For convex sets `p_e = n (1 + z + ... + z^(n-2))`, whose roots are the
/// `(n-1)`-th roots of unity other than 1.
pub fn convex_j_edge_roots_check(pj_roots: &RootSet, n: usize) -> IdentityCheck {
    let expected: Vec<Complex64> = (1..n - 1)
        .map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / (n - 1) as f64))
        .collect();
    IdentityCheck::at_most(
        "convex_j_edge_roots_of_unity",
        matching_distance(&pj_roots.roots, &expected),
        0.0,
        CLOSED_FORM_ROOT_TOLERANCE,
    )
}

/// Largest distance of a root to `1/conj(root)`'s nearest partner; zero for
/// root sets closed under `z -> 1/z`.
pub fn inversion_closure_error(roots: &RootSet) -> f64 {
    let inverted: Vec<Complex64> = roots.roots.iter().map(|z| z.inv()).collect();
    matching_distance(&roots.roots, &inverted)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConvexityEvidence {
    pub on_unit_circle: bool,
    pub max_deviation: f64,
    pub worst_root: [f64; 2],
}

/// Convex position test by roots: all roots of `p_V` on the unit circle.
/// Fails with [`AnalysisError::Disagreement`] when this contradicts the hull.
pub fn convexity_by_roots(
    pv_roots: &RootSet,
    profile: &DepthProfile,
) -> Result<ConvexityEvidence, AnalysisError> {
    let (max_deviation, worst) = pv_roots
        .roots
        .iter()
        .map(|z| ((z.norm() - 1.0).abs(), *z))
        .fold((0.0, Complex64::new(0.0, 0.0)), |acc, x| {
            if x.0 > acc.0 {
                x
            } else {
                acc
            }
        });
    let on_unit_circle = max_deviation <= UNIT_CIRCLE_TOLERANCE;
    if on_unit_circle != profile.is_convex_position() {
        return Err(AnalysisError::Disagreement {
            by_roots: on_unit_circle,
            by_hull: profile.is_convex_position(),
            max_deviation,
        });
    }
    Ok(ConvexityEvidence {
        on_unit_circle,
        max_deviation,
        worst_root: [worst.re, worst.im],
    })
}

/// Distance from the origin to where the boundary of the disk centred at
/// `(alpha-1)/(alpha+1)` with radius `2/(1+alpha)` meets the ray at angle
/// `pi/(2(n-3))`; `p_C` (hence `p_V`) has a root at least this far out.
pub fn voronoi_modulus_floor(n: usize, alpha: f64) -> f64 {
    assert!(n >= 4, "needs at least 4 points");
    let c = (PI / (2.0 * (n as f64 - 3.0))).cos();
    let am1 = alpha - 1.0;
    (am1 * c + (c * c * am1 * am1 - alpha * alpha + 2.0 * alpha + 3.0).sqrt()) / (1.0 + alpha)
}

/// Measured root locations next to every lower or upper bound that applies.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundsReport {
    pub alpha: f64,
    /// Closed-form floor on the largest root modulus of `p_C`.
    pub d_closed_form: f64,
    pub max_modulus_pc: f64,
    /// Smallest and largest consecutive quotient `E_k / E_{k+1}`.
    pub ek_annulus: (f64, f64),
    pub min_modulus_pe: f64,
    pub max_modulus_pe: f64,
    /// `(3 + alpha) / (9 - alpha)`.
    pub pe_floor_crossing: f64,
    /// `(3 C(n,3) / h)^(-1/(n-3))`.
    pub pe_floor_hull: f64,
    /// `pi / (2(n-3))`: no root of `p_C` has a smaller `|arg|`.
    pub sector_half_angle: f64,
    pub min_abs_arg_pc: f64,
    pub min_dist_to_one: f64,
    /// `sin(pi / (2(n-3)))`.
    pub dist_to_one_floor: f64,
    /// `ln(n) / n`, for context next to `min_dist_to_one`.
    pub log_n_over_n: f64,
    pub checks: Vec<IdentityCheck>,
}

impl BoundsReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Evaluates every root-location bound, recording rather than failing.
pub fn measure_bounds(
    profile: &DepthProfile,
    pc_roots: &RootSet,
    pe_roots: &RootSet,
) -> BoundsReport {
    let n = profile.n;
    let m = n as f64 - 3.0;
    let alpha = profile.alpha();
    let d = voronoi_modulus_floor(n, alpha);
    let quotients: Vec<f64> = profile
        .e_cum
        .windows(2)
        .map(|w| w[0] as f64 / w[1] as f64)
        .collect();
    let lo = quotients.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = quotients.iter().copied().fold(0.0, f64::max);
    let pe_floor_crossing = (3.0 + alpha) / (9.0 - alpha);
    let pe_floor_hull = (3.0 * binomial(n as u64, 3) as f64 / profile.h as f64).powf(-1.0 / m);
    let half_angle = PI / (2.0 * m);
    let min_abs_arg = pc_roots
        .roots
        .iter()
        .map(|z| z.arg().abs())
        .fold(f64::INFINITY, f64::min);
    let floor = half_angle.sin();
    let (min_pe, max_pe) = (pe_roots.min_modulus(), pe_roots.max_modulus);

    let checks = vec![
        IdentityCheck::at_least(
            "circle_max_modulus_floor",
            pc_roots.max_modulus,
            d,
            BOUND_SLACK,
        ),
        IdentityCheck::at_least("e_leq_annulus_inner", min_pe, lo, BOUND_SLACK),
        IdentityCheck::at_most("e_leq_annulus_outer", max_pe, hi, BOUND_SLACK),
        IdentityCheck::at_least(
            "e_leq_max_modulus_crossing_floor",
            max_pe,
            pe_floor_crossing,
            BOUND_SLACK,
        ),
        IdentityCheck::at_least(
            "e_leq_max_modulus_hull_floor",
            max_pe,
            pe_floor_hull,
            BOUND_SLACK,
        ),
        IdentityCheck::at_least(
            "circle_sector_exclusion",
            min_abs_arg,
            half_angle,
            BOUND_SLACK,
        ),
        IdentityCheck::at_least(
            "circle_distance_to_one_floor",
            pc_roots.min_distance_to_one,
            floor,
            BOUND_SLACK,
        ),
    ];
    BoundsReport {
        alpha,
        d_closed_form: d,
        max_modulus_pc: pc_roots.max_modulus,
        ek_annulus: (lo, hi),
        min_modulus_pe: min_pe,
        max_modulus_pe: max_pe,
        pe_floor_crossing,
        pe_floor_hull,
        sector_half_angle: half_angle,
        min_abs_arg_pc: min_abs_arg,
        min_dist_to_one: pc_roots.min_distance_to_one,
        dist_to_one_floor: floor,
        log_n_over_n: (n as f64).ln() / n as f64,
        checks,
    }
}

/// [`measure_bounds`], failing on the first violated bound.
pub fn check_modulus_bounds(
    profile: &DepthProfile,
    pc_roots: &RootSet,
    pe_roots: &RootSet,
) -> Result<BoundsReport, AnalysisError> {
    let report = measure_bounds(profile, pc_roots, pe_roots);
    if let Some(bad) = report.checks.iter().find(|c| !c.passed) {
        let re = |v: CheckValue| v.as_complex().re;
        return Err(AnalysisError::BoundViolation {
            name: bad.name.clone(),
            measured: re(bad.lhs),
            bound: re(bad.rhs),
        });
    }
    Ok(report)
}

/// Mean and standard deviation of the number of points inside the circle
/// through a uniformly random triple, computed from the depth moments and
/// from the crossing ratio.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DepthDistributionStats {
    pub mu: f64,
    pub sigma: f64,
}

struct DepthMoments {
    mu: f64,
    variance: f64,
    mu_closed: f64,
    variance_closed: f64,
}

fn depth_moments(profile: &DepthProfile) -> DepthMoments {
    let c3 = binomial(profile.n as u64, 3) as f64;
    let (m1, m2) = profile
        .c
        .iter()
        .enumerate()
        .fold((0i128, 0i128), |(a, b), (k, &ck)| {
            let k = k as i128;
            (a + k * ck as i128, b + k * k * ck as i128)
        });
    let mu = m1 as f64 / c3;
    let alpha = profile.alpha();
    let m = profile.n as f64 - 3.0;
    DepthMoments {
        mu,
        variance: m2 as f64 / c3 - mu * mu,
        mu_closed: (1.0 + alpha) * m / 4.0,
        variance_closed: m
            * m
            * (alpha / 8.0 - alpha * alpha / 16.0 - 1.0 / 80.0 + 1.0 / (5.0 * m)),
    }
}

/// The moment route against the closed forms in the crossing ratio.
pub fn depth_stats_checks(profile: &DepthProfile) -> Vec<IdentityCheck> {
    let m = depth_moments(profile);
    vec![
        IdentityCheck::approx("depth_mean", m.mu, m.mu_closed, STATS_TOLERANCE),
        IdentityCheck::approx(
            "depth_variance",
            m.variance,
            m.variance_closed,
            STATS_TOLERANCE,
        ),
        IdentityCheck::at_least(
            "depth_variance_nonnegative",
            m.variance_closed,
            0.0,
            STATS_TOLERANCE,
        ),
    ]
}

pub fn depth_distribution_stats(
    profile: &DepthProfile,
) -> Result<DepthDistributionStats, AnalysisError> {
    if let Some(bad) = depth_stats_checks(profile).into_iter().find(|c| !c.passed) {
        return Err(AnalysisError::StatsMismatch(format!(
            "{}: {:?} vs {:?}",
            bad.name, bad.lhs, bad.rhs
        )));
    }
    Ok(depth_moment_stats(profile))
}

/// μ and σ from the moments of the depth vector alone, unchecked.
pub fn depth_moment_stats(profile: &DepthProfile) -> DepthDistributionStats {
    let m = depth_moments(profile);
    DepthDistributionStats {
        mu: m.mu,
        sigma: m.variance.max(0.0).sqrt(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counts::{cumulative_edges, voronoi_vertex_counts};
    use crate::poly::build_polynomials;
    use crate::roots::find_roots;

    /// Profile assembled from a circle-depth vector alone, via the exact
    /// relations between the counts (the j-edge vector is not determined by
    /// `c`, so `e` is reconstructed from `E` and symmetry).
    fn profile_from_depths(c: &[u64], h: usize) -> DepthProfile {
        let n = c.len() + 2;
        let e_cum: Vec<u64> = (0..n - 2)
            .map(|k| ((k + 1) * (2 * n - k - 2)) as u64 - c[k])
            .collect();
        let mut e: Vec<u64> = std::iter::once(e_cum[0])
            .chain(e_cum.windows(2).map(|w| w[1] - w[0]))
            .collect();
        e.push(e[0]);
        assert_eq!(cumulative_edges(&e), e_cum);
        let cr = crate::counts::crossing_number_from_depths(c).unwrap();
        DepthProfile {
            n,
            h,
            c: c.to_vec(),
            e,
            e_cum,
            v: voronoi_vertex_counts(c),
            cr,
        }
    }

    fn convex_profile(n: usize) -> DepthProfile {
        let c: Vec<u64> = (0..n - 2).map(|k| ((k + 1) * (n - k - 2)) as u64).collect();
        profile_from_depths(&c, n)
    }

    #[test]
    fn structural_identities_eight_point_reference() {
        let p = profile_from_depths(&[10, 13, 14, 10, 7, 2], 4);
        assert_eq!(p.cr, 39);
        assert_eq!(p.e_cum, vec![4, 13, 22, 34, 43, 52]);
        p.check_invariants().unwrap();
        let polys = build_polynomials(&p).unwrap();
        let checks = verify_structural_identities(&p, &polys);
        for c in &checks {
            assert!(c.passed, "{c:?}");
        }
        assert!(!checks.iter().any(|c| c.name.starts_with("convex_")));
        assert!(checks.iter().all(|c| c.name != "circle_at_minus_1"));
    }

    #[test]
    fn structural_identities_convex_seven() {
        let p = convex_profile(7);
        let polys = build_polynomials(&p).unwrap();
        let checks = verify_structural_identities(&p, &polys);
        assert!(checks.iter().all(|c| c.passed));
        for name in [
            "convex_concavity[2]",
            "convex_voronoi[3]",
            "circle_at_minus_1",
        ] {
            assert!(checks.iter().any(|c| c.name == name), "{name} missing");
        }
    }

    #[test]
    fn reverse_moment_convex_five() {
        let p = convex_profile(5);
        let polys = build_polynomials(&p).unwrap();
        let check = verify_structural_identities(&p, &polys)
            .into_iter()
            .find(|c| c.name == "reverse_moment")
            .unwrap();
        assert_eq!(check.lhs, CheckValue::Int(10));
        assert_eq!(check.rhs, CheckValue::Int(10));
    }

    #[test]
    fn tampered_counts_fail() {
        let mut p = convex_profile(6);
        p.cr -= 1;
        let polys = build_polynomials(&p).unwrap();
        let failed: Vec<_> = verify_structural_identities(&p, &polys)
            .into_iter()
            .filter(|c| !c.passed)
            .map(|c| c.name)
            .collect();
        assert!(failed.contains(&"first_moment".to_string()));
        assert!(failed.contains(&"j_edge_crossing".to_string()));
    }

    #[test]
    fn crossing_from_roots_convex_five() {
        let p = convex_profile(5);
        let polys = build_polynomials(&p).unwrap();
        let circle = cr_from_roots_of_scaled_unity(&polys, PolyKind::Circle).unwrap();
        assert!((circle.value - 5.0).abs() < 1e-9, "{circle:?}");
        // the raw sum before scaling is 15/2
        let raw = scaled_unity_sum(
            &polys.circle,
            roots_of_real_scaled_unity(2, 3.0),
            Complex64::new(1.0, 0.0),
        );
        assert!((raw - 7.5).norm() < 1e-12);
        for which in [PolyKind::Voronoi, PolyKind::ELeq] {
            let r = cr_from_roots_of_scaled_unity(&polys, which).unwrap();
            assert!((r.value - 5.0).abs() < 1e-9, "{r:?}");
        }
        assert!(cr_from_roots_of_scaled_unity(&polys, PolyKind::JEdge).is_err());
    }

    #[test]
    fn crossing_from_roots_degree_one() {
        let p = convex_profile(4);
        let polys = build_polynomials(&p).unwrap();
        let r = cr_from_roots_of_scaled_unity(&polys, PolyKind::Circle).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn crossing_from_roots_eight_point_reference() {
        let p = profile_from_depths(&[10, 13, 14, 10, 7, 2], 4);
        let polys = build_polynomials(&p).unwrap();
        for which in [PolyKind::Circle, PolyKind::Voronoi, PolyKind::ELeq] {
            let r = cr_from_roots_of_scaled_unity(&polys, which).unwrap();
            assert!((r.value - 39.0).abs() <= 39.0 * 1e-6, "{r:?}");
        }
    }

    #[test]
    fn aziz_examples() {
        let p = IntPolynomial::generic(vec![3, 4, 3]);
        let one = Complex64::new(1.0, 0.0);
        let check = aziz_identity_check(&p, Complex64::new(3.0, 0.0), one);
        assert!(check.passed, "{check:?}");
        assert!((check.lhs.as_complex() - 10.0).norm() < 1e-12);
        assert!((check.rhs.as_complex() - 10.0).norm() < 1e-9);

        let zero = Complex64::new(0.0, 0.0);
        let check = aziz_identity_check(&IntPolynomial::generic(vec![5, 1, 4, 1]), one, zero);
        assert!(check.passed, "{check:?}");
        assert_eq!(check.lhs.as_complex(), zero);
    }

    #[test]
    fn root_sums_convex_five() {
        let p = convex_profile(5);
        let polys = build_polynomials(&p).unwrap();
        let pc = find_roots(&polys.circle).unwrap();
        let pv = find_roots(&polys.voronoi).unwrap();
        let checks = root_sum_identities(&pc, Some(&pv), &p).unwrap();
        assert_eq!(checks.len(), 4);
        assert!(checks.iter().all(|c| c.passed), "{checks:?}");
        let s = inverse_distance_sum(&pc.roots);
        assert!((s - 1.0).norm() < 1e-12);
        assert!(cayley_sum(&pc.roots).norm() < 1e-12);
    }

    #[test]
    fn root_sums_eight_point_reference() {
        let p = profile_from_depths(&[10, 13, 14, 10, 7, 2], 4);
        let polys = build_polynomials(&p).unwrap();
        let pc = find_roots(&polys.circle).unwrap();
        let checks = root_sum_identities(&pc, None, &p).unwrap();
        assert!(checks.iter().all(|c| c.passed), "{checks:?}");
        let s = inverse_distance_sum(&pc.roots);
        assert!((s.re - 109.0 / 56.0).abs() < 1e-9);
        let pcs = find_roots(&polys.circle.reciprocal()).unwrap();
        assert!(reciprocal_root_identity(&pc, &pcs).unwrap().passed);
        let pe = find_roots(&polys.e_leq).unwrap();
        assert!(e_leq_root_identities(&pe, &p)
            .unwrap()
            .iter()
            .all(|c| c.passed));
        for c in log_derivative_checks(&polys.voronoi, &find_roots(&polys.voronoi).unwrap(), 10, 1)
        {
            assert!(c.passed, "{c:?}");
        }
    }

    #[test]
    fn convexity_examples() {
        let p = convex_profile(10);
        let polys = build_polynomials(&p).unwrap();
        let pv = find_roots(&polys.voronoi).unwrap();
        assert!(convexity_by_roots(&pv, &p).unwrap().on_unit_circle);
        let pc = find_roots(&polys.circle).unwrap();
        assert!(inversion_closure_error(&pc) < 1e-9);
        assert!(inversion_closure_error(&pv) < 1e-9);
        let odd = convex_profile(11);
        let pv_odd = find_roots(&build_polynomials(&odd).unwrap().voronoi).unwrap();
        assert!(inversion_closure_error(&pv_odd) < 1e-9);
        let pj = find_roots(&polys.j_edge).unwrap();
        assert!(convex_j_edge_roots_check(&pj, 10).passed);

        let q = profile_from_depths(&[10, 13, 14, 10, 7, 2], 4);
        let polys = build_polynomials(&q).unwrap();
        let pv = find_roots(&polys.voronoi).unwrap();
        let ev = convexity_by_roots(&pv, &q).unwrap();
        assert!(!ev.on_unit_circle);
        assert!(pv.max_modulus > 1.0);

        let t = profile_from_depths(&[3, 1], 3);
        let pv = find_roots(&build_polynomials(&t).unwrap().voronoi).unwrap();
        assert!(!convexity_by_roots(&pv, &t).unwrap().on_unit_circle);

        // claiming convexity for non-convex roots is a disagreement
        let mut fake = q.clone();
        fake.h = fake.n;
        let pv = find_roots(&polys.voronoi).unwrap();
        assert!(matches!(
            convexity_by_roots(&pv, &fake),
            Err(AnalysisError::Disagreement { .. })
        ));
    }

    #[test]
    fn modulus_floor_values() {
        for n in [5, 9, 40] {
            assert!((voronoi_modulus_floor(n, 1.0) - 1.0).abs() < 1e-15);
        }
        let d = voronoi_modulus_floor(13, 0.0);
        assert!((d - 1.006185).abs() < 1e-6, "{d}");
        let taylor = 1.0 + PI * PI / 1600.0;
        assert!((d - taylor).abs() < 1e-4);
        let big = voronoi_modulus_floor(10_000, 0.0);
        assert!(big > 1.0 && big < 1.0 + 1e-7);
    }

    #[test]
    fn bounds_convex_five() {
        let p = convex_profile(5);
        let polys = build_polynomials(&p).unwrap();
        let pc = find_roots(&polys.circle).unwrap();
        let pe = find_roots(&polys.e_leq).unwrap();
        let b = check_modulus_bounds(&p, &pc, &pe).unwrap();
        assert!((b.max_modulus_pe - 1.0 / 3f64.sqrt()).abs() < 1e-12);
        assert!((b.pe_floor_crossing - 0.5).abs() < 1e-15);
        assert!((b.pe_floor_hull - 6f64.powf(-0.5)).abs() < 1e-15);
        assert!((b.ek_annulus.0 - 0.5).abs() < 1e-15);
        assert!((b.ek_annulus.1 - 2.0 / 3.0).abs() < 1e-15);
        assert!((b.dist_to_one_floor - (PI / 4.0).sin()).abs() < 1e-15);
    }

    #[test]
    fn stats_examples() {
        let s = depth_distribution_stats(&convex_profile(5)).unwrap();
        assert!((s.mu - 1.0).abs() < 1e-15);
        assert!((s.sigma * s.sigma - 0.6).abs() < 1e-12);
        let s = depth_distribution_stats(&profile_from_depths(&[10, 13, 14, 10, 7, 2], 4)).unwrap();
        assert!((s.mu - 109.0 / 56.0).abs() < 1e-14);
    }
}
