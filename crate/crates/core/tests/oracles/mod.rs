//! Independent numeric oracles shared by integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use frobenius_core::geometry::VectorField;
use frobenius_core::rational::{int, zero, Rational};
use frobenius_core::GradedSeries;

// Ungraded oracle: commutative polynomials and classical vector fields.
pub type Poly = BTreeMap<Vec<u32>, Rational>;
pub type Field = Vec<Poly>;

pub fn poly(s: &GradedSeries) -> Poly {
    s.terms()
        .map(|(m, c)| (m.exps().to_vec(), c.clone()))
        .collect()
}

pub fn add(a: &Poly, b: &Poly, sign: i64) -> Poly {
    let mut out = a.clone();
    for (e, c) in b {
        *out.entry(e.clone()).or_insert_with(zero) += c * int(sign);
    }
    out.retain(|_, c| *c != zero());
    out
}

pub fn mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            *out.entry(e).or_insert_with(zero) += ca * cb;
        }
    }
    out.retain(|_, c| *c != zero());
    out
}

pub fn diff(a: &Poly, i: usize) -> Poly {
    let mut out = Poly::new();
    for (e, c) in a {
        if e[i] > 0 {
            let mut f = e.clone();
            f[i] -= 1;
            *out.entry(f).or_insert_with(zero) += c * int(e[i] as i64);
        }
    }
    out
}

pub fn fadd(x: &Field, y: &Field, sign: i64) -> Field {
    x.iter().zip(y).map(|(a, b)| add(a, b, sign)).collect()
}

pub fn fbracket(x: &Field, y: &Field) -> Field {
    (0..x.len())
        .map(|b| {
            let mut acc = Poly::new();
            for a in 0..x.len() {
                acc = add(&acc, &mul(&x[a], &diff(&y[b], a)), 1);
                acc = add(&acc, &mul(&y[a], &diff(&x[b], a)), -1);
            }
            acc
        })
        .collect()
}

pub fn fcirc(x: &Field, y: &Field, c: &[Poly], n: usize) -> Field {
    (0..n)
        .map(|k| {
            let mut acc = Poly::new();
            for a in 0..n {
                for b in 0..n {
                    acc = add(&acc, &mul(&mul(&x[a], &y[b]), &c[(a * n + b) * n + k]), 1);
                }
            }
            acc
        })
        .collect()
}

pub fn fdev(x: &Field, z: &Field, w: &Field, c: &[Poly], n: usize) -> Field {
    let t1 = fbracket(x, &fcirc(z, w, c, n));
    let t2 = fcirc(&fbracket(x, z), w, c, n);
    let t3 = fcirc(z, &fbracket(x, w), c, n);
    fadd(&fadd(&t1, &t2, -1), &t3, -1)
}

pub fn field(v: &VectorField) -> Field {
    v.components().iter().map(poly).collect()
}

/// The nine-term F-identity residual of pure-even fields, expanded literally
/// in commutative polynomials.
pub fn nine_terms(x: &Field, y: &Field, z: &Field, w: &Field, c: &[Poly]) -> Field {
    let n = x.len();
    let o = |u: &Field, v: &Field| fcirc(u, v, c, n);
    let xy = o(x, y);
    let zw = o(z, w);
    let terms = [
        (fbracket(&xy, &zw), 1),
        (o(&fbracket(&xy, z), w), -1),
        (o(z, &fbracket(&xy, w)), -1),
        (o(x, &fbracket(y, &zw)), -1),
        (o(x, &o(&fbracket(y, z), w)), 1),
        (o(x, &o(z, &fbracket(y, w))), 1),
        (o(y, &fbracket(x, &zw)), -1),
        (o(y, &o(&fbracket(x, z), w)), 1),
        (o(y, &o(z, &fbracket(x, w))), 1),
    ];
    terms
        .iter()
        .fold(vec![Poly::new(); n], |acc, (t, s)| fadd(&acc, t, *s))
}

/// Levi-Civita derivative `∇ᵢ(Σ Dᵏ ∂ₖ)` for `g = Σ ηₖ (duᵏ)²` from
/// Christoffel symbols `Γᵏᵢⱼ = ½ gᵏᵏ (∂ᵢgₖⱼ + ∂ⱼgₖᵢ − ∂ₖgᵢⱼ)`, every
/// derivative taken by central differences of the plain value functions.
pub fn christoffel_covariant(
    eta: &dyn Fn(&[f64]) -> Vec<f64>,
    d: &dyn Fn(&[f64]) -> Vec<f64>,
    i: usize,
    u: &[f64],
    h: f64,
) -> Vec<f64> {
    let n = u.len();
    let shifted = |f: &dyn Fn(&[f64]) -> Vec<f64>, a: usize| -> Vec<f64> {
        let (mut p, mut m) = (u.to_vec(), u.to_vec());
        p[a] += h;
        m[a] -= h;
        f(&p)
            .iter()
            .zip(f(&m))
            .map(|(x, y)| (x - y) / (2.0 * h))
            .collect()
    };
    // deta[a][k] = ∂ₐ ηₖ
    let deta: Vec<Vec<f64>> = (0..n).map(|a| shifted(eta, a)).collect();
    let g = eta(u);
    let metric_d = |a: usize, k: usize, j: usize| if k == j { deta[a][k] } else { 0.0 };
    let christoffel = |k: usize, a: usize, j: usize| {
        0.5 / g[k] * (metric_d(a, k, j) + metric_d(j, k, a) - if a == j { deta[k][a] } else { 0.0 })
    };
    let dd = shifted(d, i);
    let dv = d(u);
    (0..n)
        .map(|k| dd[k] + (0..n).map(|j| christoffel(k, i, j) * dv[j]).sum::<f64>())
        .collect()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}
