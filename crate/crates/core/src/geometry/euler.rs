use num_bigint::BigInt;

use super::residuals::poisson_deviation;
use super::{GeometryError, Metric, MultiplicationTensor, VectorField};
use crate::rational::Rational;
use crate::series::{GradedSeries, Parity};

/// Residuals of the weak Euler condition `P_E(∂_a, ∂_b) = d₀ ∂_a∘∂_b`, plus
/// `[e, E] − d₀ e` when an identity is supplied.
#[derive(Debug, Clone)]
pub struct EulerResidual {
    pub pairs: Vec<((usize, usize), VectorField)>,
    pub unit: Option<VectorField>,
}

impl EulerResidual {
    pub fn vanishes(&self) -> bool {
        self.pairs.iter().all(|(_, r)| r.vanishes())
            && self.unit.as_ref().is_none_or(VectorField::vanishes)
    }

    /// Largest absolute coefficient over all residuals.
    pub fn worst(&self) -> f64 {
        self.pairs
            .iter()
            .map(|(_, r)| r.max_abs_coeff())
            .chain(self.unit.iter().map(VectorField::max_abs_coeff))
            .fold(0.0, f64::max)
    }
}

pub fn euler_residual(
    euler: &VectorField,
    d0: &Rational,
    c: &MultiplicationTensor,
    identity: Option<&VectorField>,
) -> Result<EulerResidual, GeometryError> {
    if euler.parity() != Parity::Even {
        return Err(GeometryError::OddEuler);
    }
    let chart = c.chart();
    let n = c.dim();
    let mut pairs = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            let da = VectorField::coordinate(chart.clone(), a);
            let db = VectorField::coordinate(chart.clone(), b);
            let p = poisson_deviation(euler, &da, &db, c);
            pairs.push(((a, b), p - c.circ(&da, &db).scale(d0)));
        }
    }
    let unit = identity.map(|e| e.bracket(euler) - e.scale(d0));
    Ok(EulerResidual { pairs, unit })
}

/// `X^{∘n}`; `n = 0` returns the identity, which must then be supplied.
pub fn circ_power(
    x: &VectorField,
    n: u32,
    c: &MultiplicationTensor,
    identity: Option<&VectorField>,
) -> Result<VectorField, GeometryError> {
    let mut acc = match (n, identity) {
        (0, Some(e)) => return Ok(e.clone()),
        (0, None) => return Err(GeometryError::NoIdentity),
        _ => x.clone(),
    };
    for _ in 1..n {
        acc = c.circ(&acc, x);
    }
    Ok(acc)
}

fn int(k: i64) -> Rational {
    Rational::from_integer(BigInt::from(k))
}

/// Residuals of the power-bracket relations for an even field `X` on a
/// unital product:
/// - `unit`: `[X^n, e] − n X^{n−1}∘[X, e]` (vanishes on every F-manifold)
/// - `single`: `[X^n, X] − (1−n) X^n∘[e, X]`
/// - `pair`: `[X^n, X^m] − (m−n) X^{n+m−1}∘[e, X]`
#[derive(Debug, Clone)]
pub struct PowerBracketResiduals {
    pub unit: VectorField,
    pub single: VectorField,
    pub pair: VectorField,
}

impl PowerBracketResiduals {
    pub fn vanishes(&self) -> bool {
        self.unit.vanishes() && self.single.vanishes() && self.pair.vanishes()
    }
}

pub fn power_bracket_residuals(
    x: &VectorField,
    n: u32,
    m: u32,
    c: &MultiplicationTensor,
    e: &VectorField,
) -> Result<PowerBracketResiduals, GeometryError> {
    if x.parity() != Parity::Even {
        return Err(GeometryError::OddEuler);
    }
    let pow = |k: u32| circ_power(x, k, c, Some(e));
    let xn = pow(n)?;
    let x_e = x.bracket(e);
    let e_x = e.bracket(x);

    let unit = if n == 0 {
        xn.bracket(e)
    } else {
        xn.bracket(e) - c.circ(&pow(n - 1)?, &x_e).scale(&int(n as i64))
    };
    let single = xn.bracket(x) - c.circ(&xn, &e_x).scale(&int(1 - n as i64));
    let pair = {
        let lhs = xn.bracket(&pow(m)?);
        if n + m == 0 {
            lhs
        } else {
            lhs - c
                .circ(&pow(n + m - 1)?, &e_x)
                .scale(&int(m as i64 - n as i64))
        }
    };
    Ok(PowerBracketResiduals { unit, single, pair })
}

/// `[E^n, E^m] − d₀(m−n) E^{m+n−1}`.
pub fn virasoro_residual(
    euler: &VectorField,
    d0: &Rational,
    n: u32,
    m: u32,
    c: &MultiplicationTensor,
    e: &VectorField,
) -> Result<VectorField, GeometryError> {
    let pow = |k: u32| circ_power(euler, k, c, Some(e));
    let lhs = pow(n)?.bracket(&pow(m)?);
    if n + m == 0 {
        return Ok(lhs);
    }
    let coeff = d0 * int(m as i64 - n as i64);
    Ok(lhs - pow(n + m - 1)?.scale(&coeff))
}

/// `(Lie_E g)(∂_a, ∂_b) = −g([E, ∂_a], ∂_b) − g(∂_a, [E, ∂_b])` for a
/// constant metric and an even field `E`.
pub fn metric_lie_derivative(metric: &Metric, euler: &VectorField) -> Vec<Vec<GradedSeries>> {
    let chart = euler.chart();
    let n = chart.dim();
    let flat: Vec<VectorField> = (0..n)
        .map(|a| VectorField::coordinate(chart.clone(), a))
        .collect();
    let moved: Vec<VectorField> = flat.iter().map(|d| euler.bracket(d)).collect();
    (0..n)
        .map(|a| {
            (0..n)
                .map(|b| -(metric.pair(&moved[a], &flat[b]) + metric.pair(&flat[a], &moved[b])))
                .collect()
        })
        .collect()
}

/// `Lie_E g − D g`, entrywise.
pub fn conformal_residual(
    metric: &Metric,
    euler: &VectorField,
    weight: &Rational,
) -> Vec<Vec<GradedSeries>> {
    let chart = euler.chart();
    metric_lie_derivative(metric, euler)
        .into_iter()
        .enumerate()
        .map(|(a, row)| {
            row.into_iter()
                .enumerate()
                .map(|(b, s)| s - chart.constant(metric.entry(a, b) * weight))
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{structure_constants, Chart, Metric};
    use crate::rational::{one, ratio};

    fn a2() -> MultiplicationTensor {
        let chart = Chart::even(2);
        let (x1, x2) = (chart.coordinate(0), chart.coordinate(1));
        let phi = (x1.pow(2) * &x2).scale(&ratio(1, 2)) + x2.pow(3).scale(&ratio(1, 6));
        structure_constants(chart.clone(), &phi, &Metric::antidiagonal(&chart).unwrap()).unwrap()
    }

    #[test]
    fn euler_powers_on_a2() {
        let c = a2();
        let chart = c.chart().clone();
        let (x1, x2) = (chart.coordinate(0), chart.coordinate(1));
        let e = VectorField::coordinate(chart.clone(), 0);
        let euler =
            VectorField::new(chart.clone(), vec![x1.clone(), x2.clone()], Parity::Even).unwrap();
        let sq = circ_power(&euler, 2, &c, Some(&e)).unwrap();
        let expected = VectorField::new(
            chart.clone(),
            vec![x1.pow(2) + x2.pow(2), (&x1 * &x2).scale(&ratio(2, 1))],
            Parity::Even,
        )
        .unwrap();
        assert_eq!(sq, expected);
        assert_eq!(circ_power(&euler, 1, &c, None).unwrap(), euler);
        assert!(circ_power(&euler, 0, &c, None).is_err());
        let r = euler_residual(&euler, &one(), &c, Some(&e)).unwrap();
        assert!(r.vanishes());
        let g = Metric::antidiagonal(&chart).unwrap();
        let lie = metric_lie_derivative(&g, &euler);
        assert_eq!(lie[0][1], chart.constant(ratio(2, 1)));
        assert!(conformal_residual(&g, &euler, &ratio(2, 1))
            .iter()
            .flatten()
            .all(GradedSeries::is_zero));
    }

    #[test]
    fn equal_powers_have_zero_virasoro_residual() {
        let c = a2();
        let chart = c.chart().clone();
        let e = VectorField::coordinate(chart.clone(), 0);
        let euler = VectorField::new(
            chart.clone(),
            vec![chart.coordinate(0), chart.coordinate(1)],
            Parity::Even,
        )
        .unwrap();
        for n in 0..4 {
            assert!(virasoro_residual(&euler, &one(), n, n, &c, &e)
                .unwrap()
                .is_zero());
            assert!(power_bracket_residuals(&euler, n, n, &c, &e)
                .unwrap()
                .pair
                .is_zero());
        }
    }
}
