//! Linear systems with series coefficients.

use std::collections::BTreeMap;

use num_traits::Zero;
use thiserror::Error;

use super::{min_validity, GradedSeries, Monomial, SeriesError, Validity};
use crate::linalg::{LinalgError, RatMatrix};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesSolveError {
    #[error("system has no solution")]
    NoSolution,
    #[error("solution is not unique")]
    NonUnique,
    #[error("no polynomial solution found up to degree {0}")]
    NoPolynomialSolution(i32),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Solves `Σ_b u_b · m[b][k] = rhs[k]` for the series `u_b` (unknowns on the
/// left of the coefficients, so no Koszul signs arise).
///
/// The constant body of `m` must have full row rank as a map from unknowns to
/// equations; the remaining terms are absorbed order by order, where the order
/// of a term is its even degree plus its number of odd generators. For exact
/// polynomial inputs the iteration stops at order `poly_limit`.
pub fn solve_left(
    m: &[Vec<GradedSeries>],
    rhs: &[GradedSeries],
    poly_limit: i32,
) -> Result<Vec<GradedSeries>, SeriesSolveError> {
    let unknowns = m.len();
    let equations = rhs.len();
    let Some(proto) = rhs.first() else {
        return Ok(vec![]);
    };
    let (ea, oa) = (proto.even_arity(), proto.odd_arity());
    let mut validity: Validity = None;
    for row in m {
        if row.len() != equations {
            return Err(SeriesError::ImageCount {
                expected: equations,
                found: row.len(),
            }
            .into());
        }
        for s in row {
            proto.check_arity(s)?;
            validity = min_validity(validity, s.validity());
        }
    }
    for s in rhs {
        proto.check_arity(s)?;
        validity = min_validity(validity, s.validity());
    }

    // body[k][b]: equations × unknowns
    let one = Monomial::one(ea);
    let mut body = RatMatrix::zeros(equations, unknowns);
    for (b, row) in m.iter().enumerate() {
        for (k, s) in row.iter().enumerate() {
            body[(k, b)] = s.coeff(&one);
        }
    }
    if body.rank() < unknowns {
        let r0: Vec<Rational> = rhs.iter().map(|s| s.coeff(&one)).collect();
        return Err(match body.solve_any(&r0) {
            Ok(_) => SeriesSolveError::NonUnique,
            Err(_) => SeriesSolveError::NoSolution,
        });
    }

    let max_order = match validity {
        Some(d) => d + oa as i32,
        None => poly_limit,
    };
    let mut u: Vec<GradedSeries> = (0..unknowns)
        .map(|_| GradedSeries::zero(ea, oa).truncated(validity))
        .collect();
    loop {
        let residual: Vec<GradedSeries> = (0..equations)
            .map(|k| {
                let mut acc = rhs[k].clone().truncated(validity);
                for b in 0..unknowns {
                    if !u[b].is_zero() {
                        acc -= &(&u[b] * &m[b][k]);
                    }
                }
                acc
            })
            .collect();
        let Some(order) = residual.iter().filter_map(GradedSeries::order).min() else {
            return Ok(u);
        };
        if order > max_order {
            return match validity {
                Some(_) => Ok(u),
                None => Err(SeriesSolveError::NoPolynomialSolution(poly_limit)),
            };
        }
        let mut lowest: BTreeMap<Monomial, Vec<Rational>> = BTreeMap::new();
        for (k, s) in residual.iter().enumerate() {
            for (mono, c) in s.terms() {
                if mono.degree() + mono.odd_count() as i32 == order {
                    lowest
                        .entry(mono.clone())
                        .or_insert_with(|| vec![Rational::zero(); equations])[k] = c.clone();
                }
            }
        }
        for (mono, vals) in lowest {
            let x = body.solve(&vals).map_err(|e| match e {
                LinalgError::Inconsistent => SeriesSolveError::NoSolution,
                _ => SeriesSolveError::NonUnique,
            })?;
            for (b, c) in x.into_iter().enumerate() {
                if !c.is_zero() {
                    u[b] += &GradedSeries::from_terms(ea, oa, [(mono.clone(), c)], validity);
                }
            }
        }
    }
}
