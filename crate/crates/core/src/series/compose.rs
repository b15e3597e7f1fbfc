use std::collections::HashMap;

use num_traits::Zero;

use super::{min_validity, GradedSeries, Parity, SeriesError, Validity, Var};
use crate::linalg::RatMatrix;
use crate::rational::Rational;

impl GradedSeries {
    /// Substitutes `images[i]` for even variable `i` and
    /// `images[even_arity + j]` for odd generator `j`.
    ///
    /// Even images must be even with no degree-0 terms at all (so that the
    /// truncation of `self` stays meaningful); odd images must be odd. The
    /// result is truncated to the smallest validity degree involved.
    pub fn substitute(&self, images: &[GradedSeries]) -> Result<GradedSeries, SeriesError> {
        let expected = self.even_arity + self.odd_arity;
        if images.len() != expected {
            return Err(SeriesError::ImageCount {
                expected,
                found: images.len(),
            });
        }
        let Some(first) = images.first() else {
            return Ok(self.clone());
        };
        let (ea, oa) = (first.even_arity, first.odd_arity);
        let mut validity: Validity = self.validity;
        for (k, img) in images.iter().enumerate() {
            first.check_arity(img)?;
            let var = if k < self.even_arity {
                Var::Even(k)
            } else {
                Var::Odd(k - self.even_arity)
            };
            if !img.has_parity(var.parity()) {
                return Err(SeriesError::ImageParity { var });
            }
            if var.parity() == Parity::Even && img.terms.keys().any(|m| m.degree() == 0) {
                return Err(SeriesError::NonzeroConstantTerm(var));
            }
            validity = min_validity(validity, img.validity);
        }
        let images: Vec<GradedSeries> = images
            .iter()
            .map(|s| s.clone().truncated(validity))
            .collect();

        let mut powers: HashMap<(usize, u32), GradedSeries> = HashMap::new();
        let one = GradedSeries::one(ea, oa).truncated(validity);
        let mut out = GradedSeries::zero(ea, oa).truncated(validity);
        for (m, c) in &self.terms {
            if validity.is_some_and(|d| m.degree() > d) {
                continue;
            }
            let mut term = one.clone();
            for (i, &e) in m.exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let p = powers
                    .entry((i, e))
                    .or_insert_with(|| images[i].pow(e))
                    .clone();
                term = &term * &p;
                if term.is_zero() {
                    break;
                }
            }
            for j in m.odd_indices() {
                if term.is_zero() {
                    break;
                }
                term = &term * &images[self.even_arity + j];
            }
            out += &term.scale(c);
        }
        Ok(out)
    }
}

/// Compositional inverse of a pure-even coordinate change `x ↦ map(x)`.
///
/// Returns `g` with `map ∘ g = id` up to the validity degree of `map`. The
/// linear part must be invertible; the nonlinear part is removed by the
/// fixed-point iteration `g ← L⁻¹ (y − N(g))`, which fixes one more degree
/// per step. A polynomial map with no finite validity degree is accepted only
/// when it is linear.
pub fn invert_coordinates(map: &[GradedSeries]) -> Result<Vec<GradedSeries>, SeriesError> {
    let n = map.len();
    let mut validity: Validity = None;
    for (a, f) in map.iter().enumerate() {
        if f.odd_arity != 0 {
            return Err(SeriesError::OddGeneratorsUnsupported);
        }
        if f.even_arity != n {
            return Err(SeriesError::ArityMismatch(f.even_arity, 0, n, 0));
        }
        if !f.constant_term().is_zero() {
            return Err(SeriesError::NonzeroConstantTerm(Var::Even(a)));
        }
        validity = min_validity(validity, f.validity);
    }

    let vars: Vec<GradedSeries> = (0..n)
        .map(|i| GradedSeries::var(n, 0, Var::Even(i)).expect("in range"))
        .collect();
    let mut linear = RatMatrix::zeros(n, n);
    let mut nonlinear = Vec::with_capacity(n);
    for (a, f) in map.iter().enumerate() {
        let mut rest = f.clone();
        for (b, x) in vars.iter().enumerate() {
            let c = f.coeff(x.terms.keys().next().expect("variable term"));
            if !c.is_zero() {
                rest -= &x.scale(&c);
            }
            linear[(a, b)] = c;
        }
        nonlinear.push(rest);
    }
    let inv = linear
        .inverse()
        .map_err(|_| SeriesError::SingularLinearPart)?;
    let apply_inverse = |rhs: &[GradedSeries]| -> Vec<GradedSeries> {
        (0..n)
            .map(|a| {
                let mut acc = GradedSeries::zero(n, 0).truncated(validity);
                for b in 0..n {
                    let c: &Rational = &inv[(a, b)];
                    if !c.is_zero() {
                        acc += &rhs[b].scale(c);
                    }
                }
                acc
            })
            .collect()
    };

    let linear_only = nonlinear.iter().all(GradedSeries::is_zero);
    let steps = match validity {
        _ if linear_only => 0,
        None => return Err(SeriesError::NeedsTruncation),
        Some(d) => d.max(0) as usize,
    };
    let targets: Vec<GradedSeries> = vars.iter().map(|v| v.clone().truncated(validity)).collect();
    let mut g = apply_inverse(&targets);
    for _ in 0..steps {
        let rhs: Vec<GradedSeries> = (0..n)
            .map(|a| {
                let corr = nonlinear[a].substitute(&g)?;
                Ok(&targets[a] - &corr)
            })
            .collect::<Result<_, SeriesError>>()?;
        g = apply_inverse(&rhs);
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn x(n: usize, i: usize) -> GradedSeries {
        GradedSeries::var(n, 0, Var::Even(i)).unwrap()
    }

    #[test]
    fn substitute_square_of_sum() {
        let a = x(1, 0).pow(2);
        let img = x(2, 0) + x(2, 1);
        let r = a.substitute(&[img]).unwrap();
        let expected = x(2, 0).pow(2) + x(2, 1).pow(2) + (x(2, 0) * x(2, 1)).scale(&int(2));
        assert_eq!(r, expected);
    }

    #[test]
    fn substitute_zero_image() {
        let r = x(1, 0).substitute(&[GradedSeries::zero(1, 0)]).unwrap();
        assert!(r.is_zero());
    }

    #[test]
    fn geometric_series_under_square() {
        // 1/(1-x) to degree 3, then x ↦ x²: 1 + x² (x⁴ lies beyond validity).
        let geo = (0..=3).fold(GradedSeries::zero(1, 0), |acc, k| acc + x(1, 0).pow(k));
        let geo = geo.truncated(Some(3));
        let r = geo.substitute(&[x(1, 0).pow(2)]).unwrap();
        assert_eq!(
            r,
            (GradedSeries::one(1, 0) + x(1, 0).pow(2)).truncated(Some(3))
        );
    }

    #[test]
    fn substitute_rejects_constant_term() {
        let img = GradedSeries::one(1, 0) + x(1, 0);
        assert_eq!(
            x(1, 0).substitute(&[img]),
            Err(SeriesError::NonzeroConstantTerm(Var::Even(0)))
        );
    }

    #[test]
    fn substitute_rejects_parity_mismatch() {
        let t = GradedSeries::var(1, 1, Var::Odd(0)).unwrap();
        let s = GradedSeries::var(1, 1, Var::Even(0)).unwrap();
        // odd image for the even variable
        assert!(matches!(
            s.substitute(&[t.clone(), t.clone()]),
            Err(SeriesError::ImageParity { .. })
        ));
    }

    #[test]
    fn invert_x_plus_x_squared() {
        let f = (x(1, 0) + x(1, 0).pow(2)).truncated(Some(3));
        let g = invert_coordinates(&[f]).unwrap();
        let y = x(1, 0);
        let expected = (&y - &y.pow(2) + y.pow(3).scale(&int(2))).truncated(Some(3));
        assert_eq!(g[0], expected);
    }

    #[test]
    fn invert_linear_and_identity() {
        let g = invert_coordinates(&[x(1, 0).scale(&int(2))]).unwrap();
        assert_eq!(g[0], x(1, 0).scale(&ratio(1, 2)));
        let id = vec![x(2, 0), x(2, 1)];
        assert_eq!(invert_coordinates(&id).unwrap(), id);
    }

    #[test]
    fn invert_errors() {
        let sing = vec![x(2, 0), x(2, 0)];
        assert_eq!(
            invert_coordinates(&sing),
            Err(SeriesError::SingularLinearPart)
        );
        let poly = vec![x(1, 0) + x(1, 0).pow(2)];
        assert_eq!(invert_coordinates(&poly), Err(SeriesError::NeedsTruncation));
    }
}
