use super::{GeometryError, Metric, MultiplicationTensor, OneForm, VectorField};
use crate::series::{solve_left, GradedSeries, Parity, SeriesSolveError};

/// Solves `e ∘ ∂_a = ∂_a` for all `a` and checks that the solution is a
/// two-sided identity.
pub fn identity_field(c: &MultiplicationTensor) -> Result<VectorField, GeometryError> {
    let chart = c.chart();
    let n = c.dim();
    // unknown e^b; equation (a, k): Σ_b e^b C_ba^k = δ_ak
    let m: Vec<Vec<GradedSeries>> = (0..n)
        .map(|b| {
            (0..n)
                .flat_map(|a| (0..n).map(move |k| (a, k)))
                .map(|(a, k)| c.entry(b, a, k).clone())
                .collect()
        })
        .collect();
    let rhs: Vec<GradedSeries> = (0..n)
        .flat_map(|a| (0..n).map(move |k| (a, k)))
        .map(|(a, k)| if a == k { chart.one() } else { chart.zero() })
        .collect();
    let limit = c.max_degree().max(0) + chart.odd_arity() as i32 + 2;
    let comps = solve_left(&m, &rhs, limit).map_err(|e| match e {
        SeriesSolveError::NoSolution => GeometryError::NoIdentity,
        SeriesSolveError::NonUnique => GeometryError::IdentityNotUnique,
        SeriesSolveError::NoPolynomialSolution(d) => GeometryError::IdentityNotPolynomial(d),
        SeriesSolveError::Series(s) => GeometryError::Series(s),
    })?;
    let e = VectorField::new(chart.clone(), comps, Parity::Even)
        .map_err(|_| GeometryError::NoIdentity)?;
    for a in 0..n {
        let da = VectorField::coordinate(chart.clone(), a);
        let left = c.circ(&e, &da) - da.clone();
        let right = c.circ(&da, &e) - da.clone();
        if !left.vanishes() || !right.vanishes() {
            return Err(GeometryError::NoIdentity);
        }
    }
    Ok(e)
}

/// Coidentity `ε_a = g(e, ∂_a)`.
pub fn coidentity(metric: &Metric, e: &VectorField) -> OneForm {
    let chart = e.chart();
    OneForm {
        components: (0..chart.dim())
            .map(|a| metric.pair(e, &VectorField::coordinate(chart.clone(), a)))
            .collect(),
    }
}

/// Reconstructs `g(∂_a, ∂_b) = ε(∂_a ∘ ∂_b)` from a coidentity.
pub fn metric_from_coidentity(eps: &OneForm, c: &MultiplicationTensor) -> Vec<Vec<GradedSeries>> {
    let chart = c.chart();
    let n = c.dim();
    (0..n)
        .map(|a| {
            (0..n)
                .map(|b| {
                    let prod = c.circ(
                        &VectorField::coordinate(chart.clone(), a),
                        &VectorField::coordinate(chart.clone(), b),
                    );
                    eps.contract(&prod)
                })
                .collect()
        })
        .collect()
}

/// True when a reconstructed bilinear form equals the constant metric.
pub fn matches_metric(form: &[Vec<GradedSeries>], metric: &Metric) -> bool {
    let n = metric.matrix().rows();
    form.len() == n
        && form.iter().enumerate().all(|(a, row)| {
            row.len() == n
                && row.iter().enumerate().all(|(b, s)| {
                    s.terms().all(|(m, _)| m.is_one()) && s.constant_term() == *metric.entry(a, b)
                })
        })
}
