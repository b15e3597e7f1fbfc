use std::collections::BTreeMap;

use super::residuals::poisson_deviation;
use super::{GeometryError, MultiplicationTensor, VectorField};
use crate::linalg::RatMatrix;
use crate::rational::Rational;
use crate::series::{GradedSeries, Monomial, Parity};

/// Polynomial fields `X` with `P_X ≡ 0`, found within a degree ansatz.
#[derive(Debug, Clone)]
pub struct KernelBasis {
    pub basis: Vec<VectorField>,
    pub degree_bound: u32,
    /// `X∘Y` stays in the kernel for all basis pairs.
    pub closed_under_product: bool,
    /// `[X, Y]` stays in the kernel for all basis pairs.
    pub closed_under_bracket: bool,
}

impl KernelBasis {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }
}

fn monomials(vars: usize, max_degree: u32) -> Vec<Vec<u32>> {
    fn rec(vars: usize, budget: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() == vars {
            out.push(prefix.clone());
            return;
        }
        for e in 0..=budget {
            prefix.push(e);
            rec(vars, budget - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(vars, max_degree, &mut Vec::new(), &mut out);
    out
}

/// True when `P_X(∂_b, ∂_c) = 0` for every pair of flat fields. `P_X` is
/// tensorial in its two arguments, so this is `P_X ≡ 0`.
pub fn in_poisson_kernel(x: &VectorField, c: &MultiplicationTensor) -> bool {
    let chart = c.chart();
    let n = c.dim();
    (0..n).all(|b| {
        (0..n).all(|d| {
            let db = VectorField::coordinate(chart.clone(), b);
            let dd = VectorField::coordinate(chart.clone(), d);
            poisson_deviation(x, &db, &dd, c).vanishes()
        })
    })
}

/// Basis of `{X : P_X ≡ 0}` among even fields with polynomial coefficients
/// of degree `<= degree_bound`, by an exact linear solve over the monomial
/// ansatz. Pure-even polynomial tensors only.
pub fn poisson_kernel_basis(
    c: &MultiplicationTensor,
    degree_bound: u32,
) -> Result<KernelBasis, GeometryError> {
    let chart = c.chart();
    if !chart.is_pure_even() {
        return Err(GeometryError::PureEvenRequired);
    }
    if c.validity().is_some() {
        return Err(GeometryError::PolynomialRequired);
    }
    let n = c.dim();
    let monos = monomials(n, degree_bound);
    let unknowns: Vec<(usize, &Vec<u32>)> = (0..n)
        .flat_map(|a| monos.iter().map(move |m| (a, m)))
        .collect();

    // Column j holds the coefficients of P_{m ∂_a}(∂_b, ∂_d), keyed by
    // (b, d, component, output monomial).
    let mut rows: BTreeMap<(usize, usize, usize, Monomial), usize> = BTreeMap::new();
    let mut columns: Vec<Vec<(usize, Rational)>> = Vec::with_capacity(unknowns.len());
    for &(a, exps) in &unknowns {
        let mut comps: Vec<GradedSeries> = (0..n).map(|_| chart.zero()).collect();
        comps[a] = GradedSeries::monomial(n, 0, exps, &[], crate::rational::one())?;
        let x = VectorField::new(chart.clone(), comps, Parity::Even)?;
        let mut col = Vec::new();
        for b in 0..n {
            for d in 0..n {
                let db = VectorField::coordinate(chart.clone(), b);
                let dd = VectorField::coordinate(chart.clone(), d);
                let p = poisson_deviation(&x, &db, &dd, c);
                for (k, comp) in p.components().iter().enumerate() {
                    for (m, coeff) in comp.terms() {
                        let next = rows.len();
                        let row = *rows.entry((b, d, k, m.clone())).or_insert(next);
                        col.push((row, coeff.clone()));
                    }
                }
            }
        }
        columns.push(col);
    }
    let mut system = RatMatrix::zeros(rows.len(), unknowns.len());
    for (j, col) in columns.into_iter().enumerate() {
        for (r, v) in col {
            system[(r, j)] = v;
        }
    }
    let null = system.nullspace();
    let basis: Vec<VectorField> = null
        .into_iter()
        .map(|v| {
            let mut comps: Vec<GradedSeries> = (0..n).map(|_| chart.zero()).collect();
            for (j, coeff) in v.iter().enumerate() {
                let (a, exps) = unknowns[j];
                if !num_traits::Zero::is_zero(coeff) {
                    comps[a] +=
                        &GradedSeries::monomial(n, 0, exps, &[], coeff.clone()).expect("arity");
                }
            }
            VectorField::new(chart.clone(), comps, Parity::Even).expect("even ansatz")
        })
        .collect();

    let mut closed_under_product = true;
    let mut closed_under_bracket = true;
    for (i, x) in basis.iter().enumerate() {
        for y in &basis[i..] {
            closed_under_product &= in_poisson_kernel(&c.circ(x, y), c);
            closed_under_bracket &= in_poisson_kernel(&x.bracket(y), c);
        }
    }
    Ok(KernelBasis {
        basis,
        degree_bound,
        closed_under_product,
        closed_under_bracket,
    })
}
