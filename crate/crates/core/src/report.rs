//! End-to-end analysis of one point set and its JSON report.
//!
//! Report schema, version 1 (top-level keys in this order):
//!
//! | key            | content                                                   |
//! |----------------|-----------------------------------------------------------|
//! | `version`      | `1`                                                       |
//! | `input`        | `{source, format, index, perturbed, points: [[x, y], ..]}` |
//! | `n`, `h`, `cr` | point count, hull size, crossing number                   |
//! | `alpha`        | `cr / C(n, 4)`                                            |
//! | `coefficients` | `{c, v, E, e}` integer vectors, lowest degree first       |
//! | `identities`   | `[{name, relation, lhs, rhs, tolerance, passed}, ..]`     |
//! | `bounds`       | measured root locations, their bounds and `checks`       |
//! | `roots`        | `{pC, pV, pE, pe}`, each a root set with residuals        |
//! | `stats`        | `{mu, sigma}`                                             |
//! | `timings`      | milliseconds per phase; `{}` when disabled                |
//!
//! Complex numbers are `[re, im]` pairs. Everything except `timings` is a
//! deterministic function of the input.

use std::collections::BTreeMap;
use std::time::Instant;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::analysis::{
    convex_j_edge_roots_check, convexity_by_roots, cr_from_roots_of_scaled_unity,
    depth_moment_stats, depth_stats_checks, e_leq_root_identities, inversion_closure_error,
    log_derivative_checks, measure_bounds, reciprocal_root_identity, reported_values,
    root_sum_identities, verify_structural_identities, AnalysisError, BoundsReport,
    DepthDistributionStats, IdentityCheck, CLOSED_FORM_ROOT_TOLERANCE,
    CROSSING_FROM_ROOTS_TOLERANCE, UNIT_CIRCLE_TOLERANCE,
};
use crate::counts::{depth_profile, CountsError, DepthProfile};
use crate::geometry::{Point, PointSet};
use crate::poly::{build_polynomials, IntPolynomial, PolyError, PolyKind};
use crate::roots::{find_roots_with, RootError, RootSet, SolverOptions};

pub const REPORT_VERSION: u32 = 1;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct InputDescriptor {
    /// File name or other label.
    pub source: String,
    /// `text`, `order_type_db`, `generated` or free-form.
    pub format: String,
    /// Record index for database input.
    pub index: Option<usize>,
    /// Whether the coordinates were perturbed into general position.
    pub perturbed: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AnalyzeOptions {
    pub input: InputDescriptor,
    pub solver: SolverOptions,
    /// Sample points per polynomial for the logarithmic-derivative check.
    pub log_derivative_samples: usize,
    pub record_timings: bool,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions {
            input: InputDescriptor::default(),
            solver: SolverOptions::default(),
            log_derivative_samples: 10,
            record_timings: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    Counting,
    Polynomials,
    Roots,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalyzeError {
    #[error("counting: {0}")]
    Counting(#[from] CountsError),
    #[error("polynomials: {0}")]
    Polynomials(#[from] PolyError),
    #[error("roots of {kind:?}: {source}")]
    Roots {
        kind: PolyKind,
        #[source]
        source: RootError,
    },
}

impl AnalyzeError {
    pub fn phase(&self) -> Phase {
        match self {
            AnalyzeError::Counting(_) => Phase::Counting,
            AnalyzeError::Polynomials(_) => Phase::Polynomials,
            AnalyzeError::Roots { .. } => Phase::Roots,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InputSummary {
    #[serde(flatten)]
    pub descriptor: InputDescriptor,
    pub points: Vec<[i32; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Coefficients {
    pub c: Vec<u64>,
    pub v: Vec<u64>,
    #[serde(rename = "E")]
    pub e_cum: Vec<u64>,
    pub e: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PolynomialRoots {
    #[serde(rename = "pC")]
    pub circle: RootSet,
    #[serde(rename = "pV")]
    pub voronoi: RootSet,
    #[serde(rename = "pE")]
    pub e_leq: RootSet,
    #[serde(rename = "pe")]
    pub j_edge: RootSet,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub version: u32,
    pub input: InputSummary,
    pub n: usize,
    pub h: usize,
    pub cr: u64,
    pub alpha: f64,
    pub coefficients: Coefficients,
    pub identities: Vec<IdentityCheck>,
    pub bounds: BoundsReport,
    pub roots: PolynomialRoots,
    pub stats: DepthDistributionStats,
    pub timings: BTreeMap<String, f64>,
}

impl AnalysisReport {
    /// Every identity and every bound passed.
    pub fn all_passed(&self) -> bool {
        self.failures().next().is_none()
    }

    pub fn failures(&self) -> impl Iterator<Item = &IdentityCheck> {
        self.identities
            .iter()
            .chain(&self.bounds.checks)
            .filter(|c| !c.passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// JSON with an empty `timings` object, identical across runs.
    pub fn to_json_without_timings(&self) -> String {
        let mut copy = self.clone();
        copy.timings.clear();
        copy.to_json()
    }
}

fn solve(p: &IntPolynomial, opts: &SolverOptions) -> Result<RootSet, AnalyzeError> {
    match find_roots_with(p, opts) {
        Ok(set) | Err(RootError::NotConverged(set)) => Ok(set),
        Err(source) => Err(AnalyzeError::Roots {
            kind: p.kind(),
            source,
        }),
    }
}

fn failed_check(name: &str, err: &AnalysisError) -> IdentityCheck {
    let mut check = IdentityCheck::reported(name, 0);
    check.name = format!("{name}: {err}");
    check.passed = false;
    check
}

fn root_checks(
    profile: &DepthProfile,
    roots: &PolynomialRoots,
    circle_reciprocal: &RootSet,
    polys: [&IntPolynomial; 4],
    opts: &AnalyzeOptions,
) -> Vec<IdentityCheck> {
    let mut out = Vec::new();
    let sets = [&roots.circle, &roots.voronoi, &roots.e_leq, &roots.j_edge];
    for (label, set) in ["pC", "pV", "pE", "pe"].iter().zip(sets) {
        out.push(IdentityCheck::at_most(
            format!("root_residuals[{label}]"),
            set.max_residual(),
            0.0,
            opts.solver.residual_tolerance,
        ));
    }
    for (k, (label, (p, set))) in ["pC", "pV", "pE", "pe"]
        .iter()
        .zip(polys.iter().zip(sets))
        .enumerate()
    {
        for mut c in log_derivative_checks(p, set, opts.log_derivative_samples, k as u64 + 1) {
            c.name = format!("log_derivative[{label}]");
            out.push(c);
        }
        if p.is_palindromic() {
            out.push(IdentityCheck::at_most(
                format!("palindromic_inversion_closure[{label}]"),
                inversion_closure_error(set),
                0.0,
                CLOSED_FORM_ROOT_TOLERANCE,
            ));
        }
    }
    match root_sum_identities(&roots.circle, Some(&roots.voronoi), profile) {
        Ok(checks) => out.extend(checks),
        Err(e) => out.push(failed_check("root_sums", &e)),
    }
    match reciprocal_root_identity(&roots.circle, circle_reciprocal) {
        Ok(check) => out.push(check),
        Err(e) => out.push(failed_check("reciprocal_inverse_distance_sum", &e)),
    }
    match e_leq_root_identities(&roots.e_leq, profile) {
        Ok(checks) => out.extend(checks),
        Err(e) => out.push(failed_check("e_leq_root_sums", &e)),
    }
    let deviation = match convexity_by_roots(&roots.voronoi, profile) {
        Ok(ev) => ev.max_deviation,
        Err(AnalysisError::Disagreement { max_deviation, .. }) => max_deviation,
        Err(e) => unreachable!("{e}"),
    };
    let on_circle = deviation <= UNIT_CIRCLE_TOLERANCE;
    let mut check = if profile.is_convex_position() {
        IdentityCheck::at_most("convexity_by_roots", deviation, 0.0, UNIT_CIRCLE_TOLERANCE)
    } else {
        IdentityCheck::at_least("convexity_by_roots", deviation, UNIT_CIRCLE_TOLERANCE, 0.0)
    };
    check.passed = on_circle == profile.is_convex_position();
    out.push(check);
    if profile.is_convex_position() {
        out.push(convex_j_edge_roots_check(&roots.j_edge, profile.n));
    }
    out
}

/// Counts, polynomials, roots, then every identity and bound.
///
/// Failed checks are recorded in the report; only failures that leave
/// nothing to check (inconsistent counts, unsolvable polynomials) are
/// returned as errors.
pub fn analyze(set: &PointSet, opts: &AnalyzeOptions) -> Result<AnalysisReport, AnalyzeError> {
    let mut timings = BTreeMap::new();
    let mut clock = Instant::now();
    let mut lap = |name: &str, timings: &mut BTreeMap<String, f64>| {
        if opts.record_timings {
            timings.insert(name.to_string(), clock.elapsed().as_secs_f64() * 1e3);
        }
        clock = Instant::now();
    };

    let profile = depth_profile(set)?;
    lap("counting", &mut timings);

    let polys = build_polynomials(&profile)?;
    lap("polynomials", &mut timings);

    let roots = PolynomialRoots {
        circle: solve(&polys.circle, &opts.solver)?,
        voronoi: solve(&polys.voronoi, &opts.solver)?,
        e_leq: solve(&polys.e_leq, &opts.solver)?,
        j_edge: solve(&polys.j_edge, &opts.solver)?,
    };
    let circle_reciprocal = solve(&polys.circle.reciprocal(), &opts.solver)?;
    lap("roots", &mut timings);

    let mut identities = verify_structural_identities(&profile, &polys);
    identities.extend(reported_values(&polys));
    for which in [PolyKind::Circle, PolyKind::Voronoi, PolyKind::ELeq] {
        let name = format!("crossing_from_roots[{}]", kind_label(which));
        identities.push(match cr_from_roots_of_scaled_unity(&polys, which) {
            Ok(r) => IdentityCheck::approx(
                name,
                Complex64::new(r.value, r.imaginary),
                profile.cr as f64,
                CROSSING_FROM_ROOTS_TOLERANCE,
            ),
            Err(e) => failed_check(&name, &e),
        });
    }
    lap("identities", &mut timings);

    identities.extend(root_checks(
        &profile,
        &roots,
        &circle_reciprocal,
        [&polys.circle, &polys.voronoi, &polys.e_leq, &polys.j_edge],
        opts,
    ));
    let bounds = measure_bounds(&profile, &roots.circle, &roots.e_leq);
    lap("root_checks", &mut timings);

    identities.extend(depth_stats_checks(&profile));
    // a mismatch is already recorded among the identities
    let stats = depth_moment_stats(&profile);
    lap("stats", &mut timings);

    Ok(AnalysisReport {
        version: REPORT_VERSION,
        input: InputSummary {
            descriptor: opts.input.clone(),
            points: set.points().iter().map(|&Point { x, y }| [x, y]).collect(),
        },
        n: profile.n,
        h: profile.h,
        cr: profile.cr,
        alpha: profile.alpha(),
        coefficients: Coefficients {
            c: profile.c.clone(),
            v: profile.v.clone(),
            e_cum: profile.e_cum.clone(),
            e: profile.e.clone(),
        },
        identities,
        bounds,
        roots,
        stats,
        timings,
    })
}

fn kind_label(kind: PolyKind) -> &'static str {
    match kind {
        PolyKind::Circle => "circle",
        PolyKind::Voronoi => "voronoi",
        PolyKind::ELeq => "e_leq",
        PolyKind::JEdge => "j_edge",
        PolyKind::Generic => "generic",
    }
}
