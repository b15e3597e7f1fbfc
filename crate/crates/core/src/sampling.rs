//! Seeded random instances for sampled checks: polynomial functions and
//! fields of low degree with small integer coefficients, and arbitrary
//! (generally non-associative) supercommutative multiplication tensors.

use std::sync::Arc;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::geometry::{Chart, MultiplicationTensor, VectorField};
use crate::rational::int;
use crate::series::{koszul, GradedSeries, Monomial, Parity};

/// Deterministic generator used by every sampled check.
pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Shape of random polynomials.
#[derive(Debug, Clone, Copy)]
pub struct SampleShape {
    pub max_degree: u32,
    pub max_terms: usize,
    pub coeff_bound: i64,
}

impl Default for SampleShape {
    fn default() -> Self {
        Self {
            max_degree: 2,
            max_terms: 3,
            coeff_bound: 3,
        }
    }
}

fn random_monomial<R: Rng>(
    chart: &Chart,
    parity: Parity,
    max_degree: u32,
    rng: &mut R,
) -> Option<Monomial> {
    let odd = chart.odd_arity();
    let masks: Vec<u32> = (0..1u32 << odd)
        .filter(|m| Parity::from_bit(m.count_ones()) == parity)
        .collect();
    if masks.is_empty() {
        return None;
    }
    let mask = masks[rng.random_range(0..masks.len())];
    let n = chart.even_arity();
    let mut exps = vec![0u32; n];
    if n > 0 {
        let degree = rng.random_range(0..=max_degree);
        for _ in 0..degree {
            exps[rng.random_range(0..n)] += 1;
        }
    }
    Some(Monomial::new(exps, mask))
}

/// A homogeneous polynomial-coefficient function of the given parity; zero
/// when no monomial of that parity exists.
pub fn random_function<R: Rng>(
    chart: &Chart,
    parity: Parity,
    shape: SampleShape,
    rng: &mut R,
) -> GradedSeries {
    let terms = rng.random_range(1..=shape.max_terms.max(1));
    let mut out = chart.zero();
    for _ in 0..terms {
        let Some(m) = random_monomial(chart, parity, shape.max_degree, rng) else {
            return out;
        };
        let mut c = 0;
        while c == 0 {
            c = rng.random_range(-shape.coeff_bound..=shape.coeff_bound);
        }
        out.add_term(m, int(c));
    }
    out
}

pub fn random_field<R: Rng>(
    chart: &Arc<Chart>,
    parity: Parity,
    shape: SampleShape,
    rng: &mut R,
) -> VectorField {
    let comps = (0..chart.dim())
        .map(|a| random_function(chart, parity + chart.parity(a), shape, rng))
        .collect();
    VectorField::new(chart.clone(), comps, parity).expect("components built with matching parity")
}

/// Random parity; always even on a purely even chart.
pub fn random_parity<R: Rng>(chart: &Chart, rng: &mut R) -> Parity {
    if chart.is_pure_even() || rng.random_bool(0.5) {
        Parity::Even
    } else {
        Parity::Odd
    }
}

/// A random supercommutative tensor; associativity is not imposed.
pub fn random_tensor<R: Rng>(
    chart: &Arc<Chart>,
    shape: SampleShape,
    rng: &mut R,
) -> MultiplicationTensor {
    let n = chart.dim();
    let mut entries = vec![chart.zero(); n * n * n];
    for a in 0..n {
        for b in a..n {
            let sign = koszul(chart.parity(a), chart.parity(b));
            if a == b && sign {
                continue;
            }
            for c in 0..n {
                let p = chart.parity(a) + chart.parity(b) + chart.parity(c);
                let s = random_function(chart, p, shape, rng);
                entries[(b * n + a) * n + c] = s.clone().signed(sign);
                entries[(a * n + b) * n + c] = s;
            }
        }
    }
    MultiplicationTensor::new(chart.clone(), entries).expect("supercommutative by construction")
}

fn fmt_f(x: f64) -> String {
    format!("({x:.6})")
}

/// Random diagonal-metric entries `ηᵢ = ∂ψ/∂uⁱ` (so `∂ᵢηⱼ = ∂ⱼηᵢ`),
/// positive on the box `|uⁱ| <= 1/2` for `n <= 3`. With `admissible`, `ψ`
/// depends on the differences `uⁱ − uʲ` plus a linear part, so
/// `Σⱼ ∂ⱼηᵢ = 0`; otherwise diagonal quadratic terms are added.
pub fn random_potential_eta<R: Rng>(n: usize, admissible: bool, rng: &mut R) -> Vec<String> {
    let mut eta: Vec<String> = (0..n).map(|_| fmt_f(rng.random_range(2.0..5.0))).collect();
    for i in 0..n {
        for j in i + 1..n {
            let (b, a) = (rng.random_range(-0.5..0.5), rng.random_range(-0.5..0.5));
            let w = format!("(u{} - u{})", i + 1, j + 1);
            let d = format!("({}*{w} + {}*{w}^2/2)", fmt_f(b), fmt_f(a));
            eta[i] = format!("{} + {d}", eta[i]);
            eta[j] = format!("{} - {d}", eta[j]);
        }
    }
    if !admissible {
        for (i, e) in eta.iter_mut().enumerate() {
            let q = rng.random_range(-0.5..0.5);
            *e = format!("{e} + {}*u{}", fmt_f(q), i + 1);
        }
    }
    eta
}

/// A point of the box `|uⁱ| <= 1/2`.
pub fn random_box_point<R: Rng>(n: usize, rng: &mut R) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-0.5..0.5)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sampling_is_deterministic_and_graded() {
        let chart = Chart::new(vec![Parity::Even, Parity::Even, Parity::Odd, Parity::Odd]);
        let shape = SampleShape::default();
        let a = random_field(&chart, Parity::Odd, shape, &mut seeded(5));
        let b = random_field(&chart, Parity::Odd, shape, &mut seeded(5));
        assert_eq!(a, b);
        for comp in a.components() {
            assert!(comp.degree() <= 2);
        }
        let t = random_tensor(&chart, shape, &mut seeded(9));
        assert_eq!(t.dim(), 4);
    }

    #[test]
    fn potential_eta_is_positive_and_parses() {
        use crate::semisimple::{admissibility_residual, potentiality_residual, Expr, SharedFn};
        let mut rng = seeded(3);
        for admissible in [true, false] {
            let eta: Vec<SharedFn> = random_potential_eta(3, admissible, &mut rng)
                .iter()
                .map(|t| std::sync::Arc::new(Expr::parse(t).unwrap()) as SharedFn)
                .collect();
            let u = random_box_point(3, &mut rng);
            assert!(eta.iter().all(|f| f.value(&u) > 0.0));
            assert!(potentiality_residual(&eta, &u) < 1e-12);
            assert_eq!(admissibility_residual(&eta, &u) < 1e-12, admissible);
        }
    }
}
