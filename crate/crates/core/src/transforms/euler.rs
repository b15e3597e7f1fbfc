use num_traits::Zero;

use super::legendre::{is_constant, pushforward_field};
use super::{legendre_transform, LegendreOptions, LegendreTransform, TransformError};
use crate::geometry::{
    conformal_residual, euler_residual, metric_lie_derivative, Chart, EulerResidual, FrobeniusData,
    Metric, MultiplicationTensor, VectorField,
};
use crate::linalg::RatMatrix;
use crate::rational::{format_rational, one, Rational};
use crate::series::{min_validity, GradedSeries, Parity, Validity};

/// A weak Euler field with its verified weights.
#[derive(Debug, Clone, PartialEq)]
pub struct EulerFieldData {
    pub field: VectorField,
    /// `[e, E] = d₀ e` and `Lie_E(∘) = d₀ ∘`.
    pub d0: Rational,
    /// `Lie_E(g) = D g`, when a metric is present and conformal.
    pub conformal: Option<Rational>,
    /// Diagonal of `−ad E` on flat fields, when that matrix is constant and
    /// triangular (so the diagonal is the spectrum).
    pub spectrum: Option<Vec<Rational>>,
    /// `d` with `[∂, E] = d ∂` for the flat field used in a transform.
    pub shift: Option<Rational>,
}

impl EulerFieldData {
    /// Checks the Euler condition exactly, then measures `D` and the flat
    /// spectrum where they exist.
    pub fn verify(
        data: &FrobeniusData,
        field: VectorField,
        d0: Rational,
    ) -> Result<Self, TransformError> {
        let c = data.multiplication();
        let identity = data.identity().ok();
        if !euler_residual(&field, &d0, c, identity.as_ref())?.vanishes() {
            return Err(TransformError::NotEuler(format_rational(&d0)));
        }
        let conformal = data.metric().and_then(|g| measure_conformal(g, &field));
        let spectrum = flat_spectrum(&field).and_then(|m| triangular_diagonal(&m));
        Ok(Self {
            field,
            d0,
            conformal,
            spectrum,
            shift: None,
        })
    }
}

/// `D` with `Lie_E g = D g` up to the validity of the Lie derivative, if any.
fn measure_conformal(metric: &Metric, field: &VectorField) -> Option<Rational> {
    let lie = metric_lie_derivative(metric, field);
    let n = lie.len();
    let (a, b) = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .find(|&(a, b)| !metric.entry(a, b).is_zero())?;
    if !is_constant(&lie[a][b]) {
        return None;
    }
    let weight = lie[a][b].constant_term() / metric.entry(a, b);
    conformal_residual(metric, field, &weight)
        .iter()
        .flatten()
        .all(|s| s.vanishes_up_to(s.validity()))
        .then_some(weight)
}

/// Matrix `M[b][a] = ∂_a E^b` of `−ad E` on the flat basis
/// (`[∂_a, E] = Σ_b M[b][a] ∂_b`), when every entry is constant.
pub fn flat_spectrum(field: &VectorField) -> Option<RatMatrix> {
    let chart = field.chart();
    let n = chart.dim();
    let mut m = RatMatrix::zeros(n, n);
    for a in 0..n {
        for b in 0..n {
            let s = chart.partial(a, field.component(b));
            if !is_constant(&s) {
                return None;
            }
            m[(b, a)] = s.constant_term();
        }
    }
    Some(m)
}

fn triangular_diagonal(m: &RatMatrix) -> Option<Vec<Rational>> {
    let n = m.rows();
    let upper = (0..n).all(|i| (0..i).all(|j| m[(i, j)].is_zero()));
    let lower = (0..n).all(|i| (i + 1..n).all(|j| m[(i, j)].is_zero()));
    (upper || lower).then(|| (0..n).map(|i| m[(i, i)].clone()).collect())
}

/// Claimed and measured Euler data after a Legendre-type transform.
#[derive(Debug, Clone)]
pub struct SpectrumShift {
    /// `[∂, E] = d ∂`.
    pub d: Rational,
    /// Pushed field with the claimed weights `D + 2d₀ − 2d` and spectrum
    /// `d_a + d₀ − d`.
    pub claimed: EulerFieldData,
    /// `Lie_Ẽ g̃ / g̃` measured on the transformed data.
    pub measured_conformal: Option<Rational>,
    /// `Lie_Ẽ g̃ − (D + 2d₀ − 2d) g̃` vanishes up to `certified_degree`.
    pub conformal_verified: bool,
    /// `M + (d₀ − d) I` for the flat matrix `M` of the original field.
    pub claimed_matrix: RatMatrix,
    /// Matrix of `−ad Ẽ` on the new flat basis `∂⁻¹∘∂_a`.
    pub measured_matrix: Option<RatMatrix>,
    pub spectrum_verified: bool,
    pub certified_degree: Validity,
    pub transform: LegendreTransform,
}

impl SpectrumShift {
    pub fn verified(&self) -> bool {
        self.conformal_verified && self.spectrum_verified
    }
}

/// Transforms by the flat field `∂`, states the shifted weights and checks
/// them against a direct computation on the transformed data.
pub fn euler_spectrum_shift(
    data: &FrobeniusData,
    euler: &EulerFieldData,
    field: &VectorField,
    stated_d: Option<&Rational>,
    opts: LegendreOptions,
) -> Result<SpectrumShift, TransformError> {
    let metric = data.metric().ok_or(TransformError::MissingMetric)?;
    let e = &euler.field;
    let c = data.multiplication();
    if !euler_residual(e, &euler.d0, c, data.identity().ok().as_ref())?.vanishes() {
        return Err(TransformError::NotEuler(format_rational(&euler.d0)));
    }
    let big_d = match &euler.conformal {
        Some(w)
            if conformal_residual(metric, e, w)
                .iter()
                .flatten()
                .all(GradedSeries::is_zero) =>
        {
            w.clone()
        }
        _ => return Err(TransformError::NotConformal),
    };
    let coeffs = field
        .constant_coefficients()
        .ok_or(TransformError::NotFlat)?;

    let bracket = field.bracket(e);
    let pivot = coeffs
        .iter()
        .position(|x| !x.is_zero())
        .ok_or(TransformError::NotInvertible)?;
    if !is_constant(bracket.component(pivot)) {
        return Err(TransformError::NotProportional);
    }
    let d = bracket.component(pivot).constant_term() / &coeffs[pivot];
    if !(bracket - field.scale(&d)).is_zero() {
        return Err(TransformError::NotProportional);
    }
    if let Some(s) = stated_d {
        if *s != d {
            return Err(TransformError::ShiftMismatch {
                stated: format_rational(s),
                found: format_rational(&d),
            });
        }
    }
    let m = flat_spectrum(e).ok_or(TransformError::NotProportional)?;

    let transform = legendre_transform(data, field, opts)?;
    let pushed = pushforward_field(e, &transform.coordinates, &transform.inverse)?;
    let g_new = transform.data.metric().expect("transform keeps a metric");
    let two = Rational::from_integer(2.into());
    let claimed_weight = &big_d + &two * &euler.d0 - &two * &d;
    let lie = metric_lie_derivative(g_new, &pushed);
    let certified = lie
        .iter()
        .flatten()
        .fold(None, |v, s| min_validity(v, s.validity()));
    if let Some(deg) = certified {
        if deg < 1 {
            return Err(TransformError::InsufficientDegree(deg));
        }
    }
    let measured_conformal = measure_conformal(g_new, &pushed);
    let conformal_verified = conformal_residual(g_new, &pushed, &claimed_weight)
        .iter()
        .flatten()
        .all(|s| s.vanishes_up_to(certified));

    let n = data.dim();
    let shift = &euler.d0 - &d;
    let mut claimed_matrix = m.clone();
    for a in 0..n {
        claimed_matrix[(a, a)] = &claimed_matrix[(a, a)] + &shift;
    }
    let measured_matrix = flat_spectrum(&pushed);
    let spectrum_verified = measured_matrix.as_ref() == Some(&claimed_matrix);

    Ok(SpectrumShift {
        d: d.clone(),
        claimed: EulerFieldData {
            field: pushed,
            d0: euler.d0.clone(),
            conformal: Some(claimed_weight),
            spectrum: triangular_diagonal(&claimed_matrix),
            shift: Some(d),
        },
        measured_conformal,
        conformal_verified,
        claimed_matrix,
        measured_matrix,
        spectrum_verified,
        certified_degree: certified,
        transform,
    })
}

/// Bidegrees `(p_a, q_a)` of a homogeneous basis and the coefficients `r^b`
/// of the anticanonical class, supported on classes with `p_b + q_b = 2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HodgeGradingData {
    bidegrees: Vec<(i32, i32)>,
    anticanonical: Vec<Rational>,
}

impl HodgeGradingData {
    pub fn new(
        bidegrees: Vec<(i32, i32)>,
        anticanonical: Vec<Rational>,
    ) -> Result<Self, TransformError> {
        if bidegrees.len() != anticanonical.len() {
            return Err(TransformError::GradingLength {
                bidegrees: bidegrees.len(),
                anticanonical: anticanonical.len(),
            });
        }
        if let Some(b) = (0..bidegrees.len())
            .find(|&b| !anticanonical[b].is_zero() && bidegrees[b].0 + bidegrees[b].1 != 2)
        {
            return Err(TransformError::GradingSupport(b));
        }
        Ok(Self {
            bidegrees,
            anticanonical,
        })
    }

    pub fn bidegrees(&self) -> &[(i32, i32)] {
        &self.bidegrees
    }

    pub fn anticanonical(&self) -> &[Rational] {
        &self.anticanonical
    }

    pub fn dim(&self) -> usize {
        self.bidegrees.len()
    }
}

/// `E₁ = Σ (1−p_a) x^a ∂_a + Σ r^b ∂_b` and `E₂` with `q_a` in place of `p_a`.
pub fn quantum_euler_fields(h: &HodgeGradingData) -> (VectorField, VectorField) {
    let chart = Chart::even(h.dim());
    let build = |pick: fn(&(i32, i32)) -> i32| {
        let comps = h
            .bidegrees
            .iter()
            .zip(&h.anticanonical)
            .enumerate()
            .map(|(a, (deg, r))| {
                let w = one() - Rational::from_integer(pick(deg).into());
                chart.coordinate(a).scale(&w) + chart.constant(r.clone())
            })
            .collect();
        VectorField::new(chart.clone(), comps, Parity::Even).expect("even components")
    };
    (build(|d| d.0), build(|d| d.1))
}

/// Euler residual of `[E₁, E₂]` with weight zero.
pub fn euler_commutator_check(
    e1: &VectorField,
    e2: &VectorField,
    c: &MultiplicationTensor,
    identity: Option<&VectorField>,
) -> Result<EulerResidual, TransformError> {
    Ok(euler_residual(
        &e1.bracket(e2),
        &Rational::zero(),
        c,
        identity,
    )?)
}
