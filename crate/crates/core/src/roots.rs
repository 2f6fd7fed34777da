//! All complex roots of a real polynomial by Aberth–Ehrlich iteration.
//!
//! The iteration is seedless: starting points sit on a circle of radius
//! `1 + max |c_k / c_deg|` (a Cauchy bound), rotated by a fixed angle. Values
//! of `p` and `p'` at points outside the unit disk are computed on the
//! reversed coefficient vector so that degree-200 polynomials with large
//! coefficients never overflow.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::Serialize;
use thiserror::Error;

use crate::poly::IntPolynomial;
use crate::squarefree::squarefree_decomposition;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverOptions {
    /// Angle (radians) added to every initial guess.
    pub rotation: f64,
    pub max_iterations: usize,
    /// Stop once the largest update, relative to `max(1, |z|)`, is below this.
    pub update_tolerance: f64,
    /// A root is accepted when its normalized residual is at most this.
    pub residual_tolerance: f64,
    pub polish_steps: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            rotation: 0.4,
            max_iterations: 200,
            update_tolerance: 1e-13,
            residual_tolerance: 1e-10,
            polish_steps: 3,
        }
    }
}

/// Roots with per-root residuals `|p(z)| / sum |c_k| |z|^k`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RootSet {
    pub roots: Vec<Complex64>,
    pub residuals: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    pub max_modulus: f64,
    pub min_distance_to_one: f64,
}

impl RootSet {
    fn from_roots(mut roots: Vec<Complex64>, coeffs: &[f64], iterations: usize, tol: f64) -> Self {
        roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        let residuals: Vec<f64> = roots
            .iter()
            .map(|&z| evaluate(coeffs, z).residual)
            .collect();
        let converged = residuals.iter().all(|&r| r <= tol);
        let max_modulus = roots.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let min_distance_to_one = roots
            .iter()
            .map(|z| (Complex64::new(1.0, 0.0) - z).norm())
            .fold(f64::INFINITY, f64::min);
        RootSet {
            roots,
            residuals,
            iterations,
            converged,
            max_modulus,
            min_distance_to_one,
        }
    }

    pub fn degree(&self) -> usize {
        self.roots.len()
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }

    pub fn min_modulus(&self) -> f64 {
        self.roots
            .iter()
            .map(|z| z.norm())
            .fold(f64::INFINITY, f64::min)
    }

    /// Largest distance from a root's conjugate to the nearest root.
    pub fn conjugate_pairing_error(&self) -> f64 {
        self.roots
            .iter()
            .map(|z| {
                self.roots
                    .iter()
                    .map(|w| (z.conj() - w).norm())
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    }

    /// Relative error of `|prod roots|` against `|c_0 / c_deg|`, via logs.
    pub fn product_relation_error(&self, p: &IntPolynomial) -> f64 {
        let c = p.coeffs();
        let (Some(&lead), Some(&constant)) = (c.last(), c.first()) else {
            return f64::NAN;
        };
        if constant == 0 {
            return if self.roots.iter().any(|z| z.norm() == 0.0) {
                0.0
            } else {
                f64::INFINITY
            };
        }
        let log_prod: f64 = self.roots.iter().map(|z| z.norm().ln()).sum();
        let expected = (constant as f64).ln() - (lead as f64).ln();
        (log_prod - expected).exp_m1().abs()
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RootError {
    #[error("polynomial has degree {0:?}; at least 1 is required")]
    DegreeTooLow(Option<usize>),
    #[error("root finder did not reach the residual tolerance (max residual {:.3e})", .0.max_residual())]
    NotConverged(RootSet),
}

struct Evaluation {
    /// `p(z) / p'(z)`; zero at an exact root.
    newton: Complex64,
    residual: f64,
}

/// Horner for `p`, `p'` and `sum |c_k| |z|^k` on `coeffs` (lowest first).
fn horner(
    coeffs: impl DoubleEndedIterator<Item = f64>,
    z: Complex64,
) -> (Complex64, Complex64, f64) {
    let zero = Complex64::new(0.0, 0.0);
    let r = z.norm();
    coeffs.rev().fold((zero, zero, 0.0), |(p, dp, s), c| {
        (p * z + c, dp * z + p, s * r + c.abs())
    })
}

fn evaluate(coeffs: &[f64], z: Complex64) -> Evaluation {
    let n = coeffs.len() - 1;
    if z.norm() <= 1.0 {
        let (p, dp, s) = horner(coeffs.iter().copied(), z);
        let newton = if p == Complex64::new(0.0, 0.0) {
            p
        } else {
            p / dp
        };
        Evaluation {
            newton,
            residual: if s == 0.0 { 0.0 } else { p.norm() / s },
        }
    } else {
        // p(z) = z^n q(1/z), q with reversed coefficients
        let w = z.inv();
        let (q, dq, s) = horner(coeffs.iter().rev().copied(), w);
        let newton = if q == Complex64::new(0.0, 0.0) {
            q
        } else {
            (w * (n as f64 - w * dq / q)).inv()
        };
        Evaluation {
            newton,
            residual: if s == 0.0 { 0.0 } else { q.norm() / s },
        }
    }
}

fn solve_low_degree(c: &[f64]) -> Vec<Complex64> {
    match c.len() {
        2 => vec![Complex64::new(-c[0] / c[1], 0.0)],
        3 => {
            let (a, b, cc) = (c[2], c[1], c[0]);
            let disc = b * b - 4.0 * a * cc;
            if disc >= 0.0 {
                let q = -0.5 * (b + b.signum() * disc.sqrt());
                if q == 0.0 {
                    vec![Complex64::new(0.0, 0.0); 2]
                } else {
                    vec![Complex64::new(q / a, 0.0), Complex64::new(cc / q, 0.0)]
                }
            } else {
                let re = -b / (2.0 * a);
                let im = (-disc).sqrt() / (2.0 * a);
                vec![Complex64::new(re, im), Complex64::new(re, -im)]
            }
        }
        _ => unreachable!("only degrees 1 and 2 have closed forms here"),
    }
}

fn aberth(c: &[f64], opts: &SolverOptions) -> (Vec<Complex64>, usize) {
    let n = c.len() - 1;
    let lead = c[n].abs();
    let radius = 1.0 + c[..n].iter().map(|x| x.abs() / lead).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, 2.0 * PI * k as f64 / n as f64 + opts.rotation))
        .collect();
    let mut iterations = 0;
    while iterations < opts.max_iterations {
        iterations += 1;
        let mut max_update: f64 = 0.0;
        for i in 0..n {
            let ratio = evaluate(c, z[i]).newton;
            if ratio == Complex64::new(0.0, 0.0) {
                continue;
            }
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| (z[i] - z[j]).inv())
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if !step.is_finite() {
                continue;
            }
            z[i] -= step;
            max_update = max_update.max(step.norm() / z[i].norm().max(1.0));
        }
        if max_update < opts.update_tolerance {
            break;
        }
    }
    for zi in z.iter_mut() {
        for _ in 0..opts.polish_steps {
            let here = evaluate(c, *zi);
            let candidate = *zi - here.newton;
            if candidate.is_finite() && evaluate(c, candidate).residual < here.residual {
                *zi = candidate;
            } else {
                break;
            }
        }
    }
    (z, iterations)
}

/// All roots of a real polynomial given lowest-degree coefficient first.
pub fn find_roots_real(coeffs: &[f64], opts: &SolverOptions) -> Result<RootSet, RootError> {
    let mut c = coeffs.to_vec();
    while c.last() == Some(&0.0) {
        c.pop();
    }
    if c.len() < 2 {
        return Err(RootError::DegreeTooLow(c.len().checked_sub(1)));
    }
    let zeros = c.iter().take_while(|&&x| x == 0.0).count();
    let reduced = &c[zeros..];
    let mut roots = vec![Complex64::new(0.0, 0.0); zeros];
    let iterations = match reduced.len() {
        1 => 0,
        2 | 3 => {
            roots.extend(solve_low_degree(reduced));
            0
        }
        _ => {
            let (found, it) = aberth(reduced, opts);
            roots.extend(found);
            it
        }
    };
    let set = RootSet::from_roots(roots, &c, iterations, opts.residual_tolerance);
    if set.converged {
        Ok(set)
    } else {
        Err(RootError::NotConverged(set))
    }
}

pub fn find_roots_with(p: &IntPolynomial, opts: &SolverOptions) -> Result<RootSet, RootError> {
    if p.degree().unwrap_or(0) == 0 {
        return Err(RootError::DegreeTooLow(p.degree()));
    }
    let c: Vec<f64> = p.coeffs().iter().map(|&x| x as f64).collect();
    let factors = squarefree_decomposition(p.coeffs());
    if let [(_, 1)] = factors.as_slice() {
        return find_roots_real(&c, opts);
    }
    // multiple roots are solved once, on their squarefree factor
    let mut roots = Vec::with_capacity(c.len() - 1);
    let mut iterations = 0;
    for (factor, multiplicity) in &factors {
        let fc: Vec<f64> = factor
            .iter()
            .map(|x| x.to_f64().unwrap_or(f64::NAN))
            .collect();
        let part = match find_roots_real(&fc, opts) {
            Ok(set) | Err(RootError::NotConverged(set)) => set,
            Err(e) => return Err(e),
        };
        iterations = iterations.max(part.iterations);
        for _ in 0..*multiplicity {
            roots.extend_from_slice(&part.roots);
        }
    }
    let set = RootSet::from_roots(roots, &c, iterations, opts.residual_tolerance);
    if set.converged {
        Ok(set)
    } else {
        Err(RootError::NotConverged(set))
    }
}

/// [`find_roots_with`] using the default options.
pub fn find_roots(p: &IntPolynomial) -> Result<RootSet, RootError> {
    find_roots_with(p, &SolverOptions::default())
}

/// The `degree` solutions of `z^degree = -a`, in closed form.
pub fn roots_of_real_scaled_unity(degree: usize, a: f64) -> Vec<Complex64> {
    assert!(degree >= 1, "degree must be positive");
    let modulus = a.abs().powf(1.0 / degree as f64);
    let base = if a > 0.0 { PI } else { 0.0 };
    (0..degree)
        .map(|k| Complex64::from_polar(modulus, (base + 2.0 * PI * k as f64) / degree as f64))
        .collect()
}

/// The `degree` solutions of `z^degree = -a` for complex `a`.
pub fn roots_of_scaled_unity(degree: usize, a: Complex64) -> Vec<Complex64> {
    assert!(degree >= 1, "degree must be positive");
    let (r, theta) = (-a).to_polar();
    let modulus = r.powf(1.0 / degree as f64);
    (0..degree)
        .map(|k| Complex64::from_polar(modulus, (theta + 2.0 * PI * k as f64) / degree as f64))
        .collect()
}

/// Bottleneck distance of a greedy nearest-neighbour matching between two
/// root lists of equal length; `INFINITY` when the lengths differ.
pub fn matching_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for z in a {
        let (j, d) = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, w)| (j, (z - w).norm()))
            .min_by(|x, y| x.1.total_cmp(&y.1))
            .expect("lengths match");
        used[j] = true;
        worst = worst.max(d);
    }
    worst
}
