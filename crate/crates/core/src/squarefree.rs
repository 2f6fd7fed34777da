//! Exact squarefree decomposition of integer polynomials (Yun's algorithm on
//! primitive polynomials over `Z`), with a modular screen so that the common
//! squarefree case never touches big integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

type Poly = Vec<BigInt>;

const PRIME: u64 = (1 << 61) - 1;

fn mul_mod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % PRIME as u128) as u64
}

fn inv_mod(a: u64) -> u64 {
    let (mut base, mut exp, mut acc) = (a, PRIME - 2, 1u64);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base);
        }
        base = mul_mod(base, base);
        exp >>= 1;
    }
    acc
}

fn trim_mod(p: &mut Vec<u64>) {
    while p.last() == Some(&0) {
        p.pop();
    }
}

/// Degree of `gcd(p, p')` modulo the prime; an upper bound for the degree
/// over `Q` when the prime does not divide the leading coefficient.
fn gcd_degree_mod(coeffs: &[u64]) -> usize {
    let mut a: Vec<u64> = coeffs.iter().map(|&c| c % PRIME).collect();
    let mut b: Vec<u64> = coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, &c)| mul_mod(c % PRIME, k as u64 % PRIME))
        .collect();
    trim_mod(&mut a);
    trim_mod(&mut b);
    while !b.is_empty() {
        let inv = inv_mod(*b.last().unwrap());
        while a.len() >= b.len() {
            let shift = a.len() - b.len();
            let f = mul_mod(*a.last().unwrap(), inv);
            for (k, &bk) in b.iter().enumerate() {
                a[k + shift] = (a[k + shift] + PRIME - mul_mod(f, bk)) % PRIME;
            }
            trim_mod(&mut a);
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len().saturating_sub(1)
}

fn trim(p: &mut Poly) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn derivative(p: &[BigInt]) -> Poly {
    let mut d: Poly = p.iter().enumerate().skip(1).map(|(k, c)| c * k).collect();
    trim(&mut d);
    d
}

/// Divides out the content and makes the leading coefficient positive.
fn primitive(mut p: Poly) -> Poly {
    trim(&mut p);
    let Some(lead) = p.last() else { return p };
    let mut g = p.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    if lead.is_negative() {
        g = -g;
    }
    p.iter().map(|c| c / &g).collect()
}

/// Remainder of `a` by `b` up to a nonzero scalar.
fn pseudo_remainder(a: &[BigInt], b: &[BigInt]) -> Poly {
    let lead_b = b.last().expect("nonzero divisor");
    let mut r = a.to_vec();
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let lead_r = r.last().unwrap().clone();
        for x in r.iter_mut() {
            *x *= lead_b;
        }
        for (k, bk) in b.iter().enumerate() {
            r[k + shift] -= &lead_r * bk;
        }
        r = primitive(r);
    }
    r
}

fn gcd(a: &[BigInt], b: &[BigInt]) -> Poly {
    let (mut a, mut b) = (primitive(a.to_vec()), primitive(b.to_vec()));
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_empty() {
        let r = pseudo_remainder(&a, &b);
        a = b;
        b = r;
    }
    a
}

/// `a / b` for a primitive `b` dividing `a` in `Q[x]`; the quotient is then
/// integral.
fn exact_div(a: &[BigInt], b: &[BigInt]) -> Poly {
    let lead_b = b.last().expect("nonzero divisor");
    if a.is_empty() {
        return Vec::new();
    }
    let mut r = a.to_vec();
    let mut q = vec![BigInt::zero(); a.len() + 1 - b.len()];
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let (f, rem) = r.last().unwrap().div_rem(lead_b);
        assert!(rem.is_zero(), "inexact polynomial division");
        for (k, bk) in b.iter().enumerate() {
            r[k + shift] -= &f * bk;
        }
        q[shift] = f;
        trim(&mut r);
    }
    assert!(r.is_empty(), "inexact polynomial division");
    q
}

fn sub(a: &[BigInt], b: &[BigInt]) -> Poly {
    let mut out: Poly = (0..a.len().max(b.len()))
        .map(|k| {
            let x = a.get(k).cloned().unwrap_or_default();
            x - b.get(k).cloned().unwrap_or_default()
        })
        .collect();
    trim(&mut out);
    out
}

/// Factors `p = const * prod f_i^{m_i}` with each `f_i` primitive,
/// squarefree and of positive degree, and the `f_i` pairwise coprime.
/// `p` must have positive degree.
pub(crate) fn squarefree_decomposition(coeffs: &[u64]) -> Vec<(Vec<BigInt>, usize)> {
    let f = primitive(coeffs.iter().map(|&c| BigInt::from(c)).collect());
    assert!(f.len() >= 2, "constant polynomial");
    let lead = *coeffs.iter().rev().find(|&&c| c != 0).unwrap();
    if lead % PRIME != 0 && gcd_degree_mod(coeffs) == 0 {
        return vec![(f, 1)];
    }
    let fp = derivative(&f);
    let a0 = gcd(&f, &fp);
    if a0.len() == 1 {
        return vec![(f, 1)];
    }
    let mut b = exact_div(&f, &a0);
    let c = exact_div(&fp, &a0);
    let mut d = sub(&c, &derivative(&b));
    let mut out = Vec::new();
    let mut multiplicity = 1;
    while b.len() > 1 {
        let a = gcd(&b, &d);
        if a.len() > 1 {
            out.push((a.clone(), multiplicity));
        }
        b = exact_div(&b, &a);
        let c = exact_div(&d, &a);
        d = sub(&c, &derivative(&b));
        multiplicity += 1;
    }
    out
}
