use num_bigint::BigInt;
use num_traits::Zero;

use super::TransformError;
use crate::geometry::{Chart, FrobeniusData, Metric, VectorField};
use crate::linalg::RatMatrix;
use crate::rational::Rational;
use crate::series::{
    invert_coordinates, min_validity, GradedSeries, Parity, SeriesError, Validity,
};

/// Truncation control for [`legendre_transform`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LegendreOptions {
    /// Degree cap applied to the potential. Falls back to the data's own cap,
    /// then to the potential's validity degree.
    pub cap: Option<i32>,
}

/// New flat coordinates of a Legendre-type transform, as series in the old
/// ones, normalized to vanish at the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct LegendreCoordinates {
    /// Constant coefficients of `∂` in the old flat basis.
    pub field: Vec<Rational>,
    /// `x̃^a`, with `offset` already subtracted.
    pub map: Vec<GradedSeries>,
    /// `J[a][b] = ∂_b x̃^a`, equal to the matrix of `∂∘`.
    pub jacobian: Vec<Vec<GradedSeries>>,
    /// Value of the raw `Σ_b g^{ab} ∂(∂_b Φ)` at the origin.
    pub offset: Vec<Rational>,
}

/// Outcome of the exact checks run by [`legendre_transform`].
#[derive(Debug, Clone, PartialEq)]
pub struct LegendreChecks {
    /// `∂̃_a∂̃_b Φ̃ = ∂_a∂_b Φ` up to the certified degree.
    pub hessian: bool,
    /// `g(∂⁻¹∘∂_a, ∂_b∘∂_c)` is symmetric in `(a, b)` for every triple.
    pub integrability: bool,
    /// Structure constants of `(Φ̃, g̃)` equal the pushforward of `∘`.
    pub pushforward: bool,
    /// Identity of the new product, when it has constant coefficients.
    pub identity: Option<Vec<Rational>>,
    /// The new identity is flat and equals the pushforward of `e`.
    pub identity_flat: bool,
}

impl LegendreChecks {
    pub fn all_pass(&self) -> bool {
        self.hessian && self.integrability && self.pushforward && self.identity_flat
    }
}

#[derive(Debug, Clone)]
pub struct LegendreTransform {
    pub coordinates: LegendreCoordinates,
    /// Old coordinates as series in the new ones.
    pub inverse: Vec<GradedSeries>,
    /// `∂x^c/∂x̃^a`, as series in the new coordinates.
    pub inverse_jacobian: Vec<Vec<GradedSeries>>,
    /// Transformed data in the new coordinates; carries the pushed Euler field
    /// when the input has one.
    pub data: FrobeniusData,
    /// Degree up to which the Hessian identity is certified.
    pub certified_degree: Validity,
    pub checks: LegendreChecks,
}

fn flat_coefficients(
    data: &FrobeniusData,
    field: &VectorField,
) -> Result<Vec<Rational>, TransformError> {
    if field.dim() != data.dim() {
        return Err(TransformError::FieldLength {
            expected: data.dim(),
            found: field.dim(),
        });
    }
    if field.parity() != Parity::Even {
        return Err(crate::geometry::GeometryError::OddEuler.into());
    }
    field.constant_coefficients().ok_or(TransformError::NotFlat)
}

fn require_even(data: &FrobeniusData) -> Result<(&GradedSeries, &Metric), TransformError> {
    if !data.chart().is_pure_even() {
        return Err(TransformError::PureEvenRequired);
    }
    let phi = data.potential().ok_or(TransformError::MissingPotential)?;
    let metric = data.metric().ok_or(TransformError::MissingMetric)?;
    Ok((phi, metric))
}

pub(super) fn is_constant(s: &GradedSeries) -> bool {
    s.terms().all(|(m, _)| m.is_one())
}

fn coordinates_from(
    chart: &Chart,
    phi: &GradedSeries,
    metric: &Metric,
    data: &FrobeniusData,
    field: &VectorField,
    coeffs: Vec<Rational>,
) -> Result<LegendreCoordinates, TransformError> {
    let n = chart.dim();
    let ginv = metric.inverse();
    let first: Vec<GradedSeries> = (0..n)
        .map(|b| field.apply(&chart.partial(b, phi)))
        .collect();
    let mut map = Vec::with_capacity(n);
    let mut offset = Vec::with_capacity(n);
    for a in 0..n {
        let mut acc = chart.zero().truncated(phi.validity());
        for (b, f) in first.iter().enumerate() {
            let c = &ginv[(a, b)];
            if !c.is_zero() {
                acc += &f.scale(c);
            }
        }
        let c0 = acc.constant_term();
        offset.push(c0.clone());
        map.push(acc - chart.constant(c0));
    }
    let jacobian: Vec<Vec<GradedSeries>> = map
        .iter()
        .map(|xa| (0..n).map(|b| chart.partial(b, xa)).collect())
        .collect();

    let op = data.multiplication().operator_matrix(field);
    for a in 0..n {
        for b in 0..n {
            let v = min_validity(jacobian[a][b].validity(), op[a][b].validity());
            if !(&jacobian[a][b] - &op[a][b]).vanishes_up_to(v) {
                return Err(TransformError::JacobianMismatch { row: a, col: b });
            }
        }
    }
    let mut at_origin = RatMatrix::zeros(n, n);
    for a in 0..n {
        for b in 0..n {
            at_origin[(a, b)] = jacobian[a][b].constant_term();
        }
    }
    if at_origin.determinant().map_or(true, |d| d.is_zero()) {
        return Err(TransformError::NotInvertible);
    }
    Ok(LegendreCoordinates {
        field: coeffs,
        map,
        jacobian,
        offset,
    })
}

/// `x̃^a = Σ_b g^{ab} ∂(∂_b Φ)` for a flat even field `∂`, with the check that
/// its Jacobian is the matrix of `∂∘` and is invertible at the origin.
pub fn legendre_coordinates(
    data: &FrobeniusData,
    field: &VectorField,
) -> Result<LegendreCoordinates, TransformError> {
    let (phi, metric) = require_even(data)?;
    let coeffs = flat_coefficients(data, field)?;
    coordinates_from(data.chart(), phi, metric, data, field, coeffs)
}

/// `Φ̃(y) = Σ_{a,b} y^a y^b ∫₀¹ (1−t) H_ab(t y) dt`, termwise. Reproduces a
/// function with zero value and gradient at the origin from its Hessian.
fn integrate_hessian(
    chart: &Chart,
    hessian: &[Vec<GradedSeries>],
) -> Result<GradedSeries, SeriesError> {
    let n = chart.dim();
    let mut validity: Validity = None;
    let mut out = chart.zero();
    for (a, row) in hessian.iter().enumerate() {
        for (b, h) in row.iter().enumerate() {
            validity = min_validity(validity, h.validity());
            for (m, c) in h.terms() {
                let mut exps = m.exps().to_vec();
                exps[a] += 1;
                exps[b] += 1;
                let k = i64::from(m.degree());
                let denom = Rational::from_integer(BigInt::from((k + 1) * (k + 2)));
                out += &GradedSeries::monomial(n, 0, &exps, &[], c / denom)?;
            }
        }
    }
    Ok(out.with_validity(validity.map(|d| d + 2)))
}

fn compose(f: &GradedSeries, inverse: &[GradedSeries]) -> Result<GradedSeries, SeriesError> {
    f.substitute(inverse)
}

/// Legendre-type transform by a flat `∘`-invertible field `∂`.
///
/// Inverts the coordinate change as a series, rebuilds the potential from
/// the transported Hessian by double integration (normalized to zero value
/// and gradient at the origin), keeps the metric matrix, and checks the
/// Hessian identity, the integrability symmetry, the pushforward of `∘` and
/// flatness of the new identity.
pub fn legendre_transform(
    data: &FrobeniusData,
    field: &VectorField,
    opts: LegendreOptions,
) -> Result<LegendreTransform, TransformError> {
    let (phi, metric) = require_even(data)?;
    let coeffs = flat_coefficients(data, field)?;
    let chart = data.chart().clone();
    let n = chart.dim();
    let cap = opts.cap.or(data.degree_cap()).or(phi.validity());
    if let Some(d) = cap.map(|c| c - 2) {
        if d < 1 {
            return Err(TransformError::InsufficientDegree(d));
        }
    }
    let phi = phi.clone().truncated(cap);
    let coordinates = coordinates_from(&chart, &phi, metric, data, field, coeffs)?;

    let inverse = invert_coordinates(&coordinates.map).map_err(|e| match e {
        SeriesError::SingularLinearPart => TransformError::NotInvertible,
        SeriesError::NeedsTruncation => TransformError::NeedsCap,
        other => other.into(),
    })?;
    let inverse_jacobian: Vec<Vec<GradedSeries>> = (0..n)
        .map(|c| (0..n).map(|a| chart.partial(a, &inverse[c])).collect())
        .collect();

    let hessian: Vec<Vec<GradedSeries>> = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| chart.partial(a, &chart.partial(b, &phi)))
                .collect()
        })
        .collect();
    let moved: Vec<Vec<GradedSeries>> = hessian
        .iter()
        .map(|row| {
            row.iter()
                .map(|h| compose(h, &inverse))
                .collect::<Result<_, _>>()
        })
        .collect::<Result<_, _>>()?;
    let certified = moved
        .iter()
        .flatten()
        .fold(None, |v, h| min_validity(v, h.validity()));
    if let Some(d) = certified {
        if d < 1 {
            return Err(TransformError::InsufficientDegree(d));
        }
    }
    let phi_tilde = integrate_hessian(&chart, &moved)?;

    let hessian_ok = (0..n).all(|a| {
        (0..n).all(|b| {
            let back = chart.partial(a, &chart.partial(b, &phi_tilde));
            (&back - &moved[a][b]).vanishes_up_to(certified)
        })
    });

    // g(∂⁻¹∘∂_a, ∂_b∘∂_c) = Σ_d (∂x^d/∂x̃^a) Φ_dbc, transported.
    let third: Vec<GradedSeries> = (0..n * n * n)
        .map(|k| {
            let (d, b, c) = (k / (n * n), (k / n) % n, k % n);
            compose(&chart.partial(d, &hessian[b][c]), &inverse)
        })
        .collect::<Result<_, _>>()?;
    let pairing = |a: usize, b: usize, c: usize| {
        let mut acc = chart.zero();
        for d in 0..n {
            acc += &(&inverse_jacobian[d][a] * &third[(d * n + b) * n + c]);
        }
        acc
    };
    let integrability = (0..n).all(|a| {
        (0..n).all(|b| {
            (0..n).all(|c| {
                let diff = pairing(a, b, c) - pairing(b, a, c);
                diff.vanishes_up_to(diff.validity())
            })
        })
    });

    let metric_tilde = Metric::new(&chart, metric.matrix().clone())?;
    let cap_tilde = phi_tilde.validity();
    let mut out = FrobeniusData::from_potential(chart.clone(), phi_tilde, metric_tilde, cap_tilde)?;

    // Pushforward: ∂̃_a∘∂̃_b = Σ K[c][a] K[d][b] C_cd^e J[f][e] ∂̃_f.
    let c_old = data
        .multiplication()
        .truncated(phi.validity().map(|d| d - 3));
    let moved_c: Vec<GradedSeries> = c_old
        .entries()
        .iter()
        .map(|s| compose(s, &inverse))
        .collect::<Result<_, _>>()?;
    let moved_j: Vec<Vec<GradedSeries>> = coordinates
        .jacobian
        .iter()
        .map(|row| {
            row.iter()
                .map(|s| compose(s, &inverse))
                .collect::<Result<_, _>>()
        })
        .collect::<Result<_, _>>()?;
    let c_new = out.multiplication();
    let mut pushforward = true;
    for a in 0..n {
        for b in 0..n {
            let mut old_basis: Vec<GradedSeries> = (0..n).map(|_| chart.zero()).collect();
            for c in 0..n {
                for d in 0..n {
                    let kk = &inverse_jacobian[c][a] * &inverse_jacobian[d][b];
                    for (e, slot) in old_basis.iter_mut().enumerate() {
                        *slot += &(&kk * &moved_c[(c * n + d) * n + e]);
                    }
                }
            }
            for f in 0..n {
                let mut acc = chart.zero();
                for (e, s) in old_basis.iter().enumerate() {
                    acc += &(&moved_j[f][e] * s);
                }
                let new = c_new.entry(a, b, f);
                let v = min_validity(acc.validity(), new.validity());
                pushforward &= (&acc - new).vanishes_up_to(v);
            }
        }
    }

    let (identity, identity_flat) = match out.identity() {
        Ok(e) => {
            let coeffs = e.constant_coefficients();
            let pushed = data
                .identity()
                .ok()
                .and_then(|e_old| pushforward_field(&e_old, &coordinates, &inverse).ok())
                .and_then(|f| f.constant_coefficients());
            let flat = coeffs.is_some() && coeffs == pushed;
            (coeffs, flat)
        }
        Err(_) => (None, false),
    };

    if let Some(euler) = data.euler() {
        let pushed = pushforward_field(&euler.field, &coordinates, &inverse)?;
        out = out.with_euler(pushed, euler.d0.clone())?;
    }

    Ok(LegendreTransform {
        coordinates,
        inverse,
        inverse_jacobian,
        data: out,
        certified_degree: certified,
        checks: LegendreChecks {
            hessian: hessian_ok,
            integrability,
            pushforward,
            identity,
            identity_flat,
        },
    })
}

/// `X̃^f(x̃) = X(x̃^f)` evaluated at `x = x(x̃)`.
pub(super) fn pushforward_field(
    x: &VectorField,
    coordinates: &LegendreCoordinates,
    inverse: &[GradedSeries],
) -> Result<VectorField, TransformError> {
    let comps = coordinates
        .map
        .iter()
        .map(|xf| compose(&x.apply(xf), inverse))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(VectorField::new(x.chart().clone(), comps, Parity::Even)?)
}

/// `∂⁻¹ = Σ e^a ∂̃_a`: the field undoing a transform has, in the new basis,
/// the coefficients of the flat identity `e` of the original data.
pub fn inverse_field(data: &FrobeniusData) -> Result<VectorField, TransformError> {
    let e = data.identity()?;
    if e.constant_coefficients().is_none() {
        return Err(TransformError::NotFlat);
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::builtin;
    use crate::rational::{int, ratio};

    /// Series with its degree <= 1 part removed.
    fn drop_affine(s: &GradedSeries) -> GradedSeries {
        let terms = s
            .terms()
            .filter(|(m, _)| m.degree() > 1)
            .map(|(m, c)| (m.clone(), c.clone()));
        GradedSeries::from_terms(s.even_arity(), s.odd_arity(), terms, s.validity())
    }

    fn a2_legendre() -> FrobeniusData {
        builtin("a2_legendre").unwrap().data
    }

    #[test]
    fn coordinates_for_second_field() {
        let data = a2_legendre();
        let chart = data.chart().clone();
        let (x1, x2) = (chart.coordinate(0), chart.coordinate(1));
        let lc = legendre_coordinates(&data, &VectorField::coordinate(chart.clone(), 1)).unwrap();
        assert_eq!(lc.map[0], &x2 + &x2.pow(2).scale(&ratio(1, 2)));
        assert_eq!(lc.map[1], x1);
        assert_eq!(lc.jacobian[0][1], chart.one() + x2.clone());
        assert_eq!(lc.jacobian[1][0], chart.one());
        assert!(lc.jacobian[0][0].is_zero() && lc.jacobian[1][1].is_zero());
    }

    #[test]
    fn identity_field_gives_identity_coordinates() {
        let data = a2_legendre();
        let chart = data.chart().clone();
        let lc = legendre_coordinates(&data, &VectorField::coordinate(chart.clone(), 0)).unwrap();
        assert_eq!(lc.map, vec![chart.coordinate(0), chart.coordinate(1)]);
    }

    #[test]
    fn degenerate_field_is_rejected_at_origin() {
        let data = builtin("a2_quartic").unwrap().data;
        let chart = data.chart().clone();
        let err = legendre_coordinates(&data, &VectorField::coordinate(chart, 1)).unwrap_err();
        assert_eq!(err, TransformError::NotInvertible);
    }

    #[test]
    fn non_flat_field_is_rejected() {
        let data = a2_legendre();
        let chart = data.chart().clone();
        let x = VectorField::new(
            chart.clone(),
            vec![chart.coordinate(0), chart.zero()],
            Parity::Even,
        )
        .unwrap();
        assert_eq!(
            legendre_coordinates(&data, &x).unwrap_err(),
            TransformError::NotFlat
        );
    }

    #[test]
    fn transform_by_second_field_passes_all_checks() {
        let data = a2_legendre();
        let chart = data.chart().clone();
        let t = legendre_transform(
            &data,
            &VectorField::coordinate(chart, 1),
            LegendreOptions { cap: Some(7) },
        )
        .unwrap();
        assert_eq!(t.certified_degree, Some(5));
        assert!(t.checks.all_pass(), "{:?}", t.checks);
        assert_eq!(t.checks.identity, Some(vec![int(0), int(1)]));
    }

    #[test]
    fn transform_needs_a_cap_when_nonlinear() {
        let data = a2_legendre();
        let chart = data.chart().clone();
        let err = legendre_transform(
            &data,
            &VectorField::coordinate(chart, 1),
            LegendreOptions::default(),
        );
        assert_eq!(err.unwrap_err(), TransformError::NeedsCap);
    }

    #[test]
    fn cap_too_low_is_rejected() {
        let data = a2_legendre();
        let chart = data.chart().clone();
        let err = legendre_transform(
            &data,
            &VectorField::coordinate(chart, 1),
            LegendreOptions { cap: Some(2) },
        );
        assert_eq!(err.unwrap_err(), TransformError::InsufficientDegree(0));
    }

    #[test]
    fn identity_transform_is_exact() {
        let data = a2_legendre();
        let chart = data.chart().clone();
        let t = legendre_transform(
            &data,
            &VectorField::coordinate(chart, 0),
            LegendreOptions::default(),
        )
        .unwrap();
        assert_eq!(t.certified_degree, None);
        assert!(t.checks.all_pass());
        assert_eq!(
            t.data.potential(),
            Some(&drop_affine(data.potential().unwrap()))
        );
        assert_eq!(t.data.multiplication(), data.multiplication());
    }

    #[test]
    fn integrate_hessian_recovers_normalized_potential() {
        let chart = Chart::even(2);
        let (x1, x2) = (chart.coordinate(0), chart.coordinate(1));
        let phi = (x1.pow(2) * &x2).scale(&ratio(1, 2)) + x2.pow(5);
        let h: Vec<Vec<GradedSeries>> = (0..2)
            .map(|a| {
                (0..2)
                    .map(|b| chart.partial(a, &chart.partial(b, &phi)))
                    .collect()
            })
            .collect();
        assert_eq!(integrate_hessian(&chart, &h).unwrap(), phi);
    }
}
