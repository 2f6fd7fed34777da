//! Dense nonnegative integer polynomials and the four point-set polynomials.

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::counts::{binomial, DepthProfile};

/// Complex argument or value.
pub type ComplexValue = Complex64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PolyKind {
    /// Circle-depth polynomial, coefficients `c_k`.
    Circle,
    /// Voronoi polynomial, coefficients `v_k` shifted to start at degree 0.
    Voronoi,
    /// Cumulative edge polynomial, coefficients `E_{<=k}`.
    ELeq,
    /// j-edge polynomial, coefficients `e_j`.
    JEdge,
    Generic,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("{kind:?} polynomial violates its invariant: {reason}")]
    Invariant { kind: PolyKind, reason: String },
}

/// Coefficients lowest degree first, trailing zeros trimmed. The empty
/// vector is the zero polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntPolynomial {
    coeffs: Vec<u64>,
    kind: PolyKind,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<u64>, kind: PolyKind) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        IntPolynomial { coeffs, kind }
    }

    pub fn generic(coeffs: Vec<u64>) -> Self {
        Self::new(coeffs, PolyKind::Generic)
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn kind(&self) -> PolyKind {
        self.kind
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Exact value at an integer argument.
    pub fn eval_int(&self, z: i128) -> i128 {
        self.coeffs
            .iter()
            .rev()
            .fold(0i128, |acc, &c| acc * z + c as i128)
    }

    /// Horner evaluation in double precision.
    pub fn eval(&self, z: ComplexValue) -> ComplexValue {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c as f64)
    }

    /// Formal derivative of order `order`.
    pub fn derivative(&self, order: usize) -> IntPolynomial {
        let mut coeffs = self.coeffs.clone();
        for _ in 0..order {
            coeffs = coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as u64)
                .collect();
        }
        IntPolynomial::new(coeffs, PolyKind::Generic)
    }

    /// Coefficient vector reversed, `z^deg p(1/z)`.
    pub fn reciprocal(&self) -> IntPolynomial {
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        IntPolynomial::new(coeffs, self.kind)
    }

    pub fn is_palindromic(&self) -> bool {
        self.coeffs.iter().eq(self.coeffs.iter().rev())
    }

    /// Product with `1 + z`.
    pub fn times_one_plus_z(&self) -> IntPolynomial {
        let mut out = vec![0u64; self.coeffs.len() + 1];
        for (k, &c) in self.coeffs.iter().enumerate() {
            out[k] += c;
            out[k + 1] += c;
        }
        IntPolynomial::new(out, PolyKind::Generic)
    }

    /// Checks the length and sum invariants of the named kinds for `n` points.
    pub fn check_kind(&self, n: usize) -> Result<(), PolyError> {
        let nn = n as u64;
        let sum: i128 = self.coeffs.iter().map(|&c| c as i128).sum();
        let fail = |reason: &str| {
            Err(PolyError::Invariant {
                kind: self.kind,
                reason: reason.to_string(),
            })
        };
        let (len, total) = match self.kind {
            PolyKind::Generic => return Ok(()),
            PolyKind::Circle => (n - 2, binomial(nn, 3)),
            PolyKind::Voronoi => (n - 1, 2 * binomial(nn, 3)),
            PolyKind::ELeq => (n - 2, 3 * binomial(nn, 3)),
            PolyKind::JEdge => (n - 1, (n * (n - 1)) as i128),
        };
        if self.coeffs.len() != len {
            return fail("length");
        }
        if sum != total {
            return fail("coefficient sum");
        }
        if self.kind == PolyKind::ELeq && self.coeffs.windows(2).any(|w| w[0] >= w[1]) {
            return fail("coefficients not strictly increasing");
        }
        Ok(())
    }
}

/// `p_C`, `p_V`, `p_E` and `p_e` of one point set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PolynomialSet {
    pub n: usize,
    pub circle: IntPolynomial,
    pub voronoi: IntPolynomial,
    pub e_leq: IntPolynomial,
    pub j_edge: IntPolynomial,
}

pub fn build_polynomials(profile: &DepthProfile) -> Result<PolynomialSet, PolyError> {
    let set = PolynomialSet {
        n: profile.n,
        circle: IntPolynomial::new(profile.c.clone(), PolyKind::Circle),
        voronoi: IntPolynomial::new(profile.v.clone(), PolyKind::Voronoi),
        e_leq: IntPolynomial::new(profile.e_cum.clone(), PolyKind::ELeq),
        j_edge: IntPolynomial::new(profile.e.clone(), PolyKind::JEdge),
    };
    for p in [&set.circle, &set.voronoi, &set.e_leq, &set.j_edge] {
        p.check_kind(profile.n)?;
    }
    if set.circle.times_one_plus_z().coeffs() != set.voronoi.coeffs() {
        return Err(PolyError::Invariant {
            kind: PolyKind::Voronoi,
            reason: "not equal to (1+z) times the circle polynomial".into(),
        });
    }
    Ok(set)
}
