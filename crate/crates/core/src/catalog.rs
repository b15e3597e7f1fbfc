//! Built-in manifolds. Every entry except the negative controls passes the
//! admission gauntlet (associativity, sampled F-identity, Euler and
//! conformal weights) each time it is served.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Zero};

use crate::geometry::{
    conformal_residual, euler_residual, f_identity_residual, identity_field, wdvv_residual, Chart,
    FrobeniusData, GeometryError, Metric, MultiplicationTensor, VectorField,
};
use crate::linalg::RatMatrix;
use crate::rational::{int, ratio, Rational};
use crate::sampling::{random_field, random_parity, seeded, SampleShape};
use crate::series::{GradedSeries, Parity};

/// Number of random quadruples checked at admission (flat quadruples are
/// always checked in addition).
pub const ADMISSION_SAMPLES: usize = 12;
pub const ADMISSION_SEED: u64 = 0x5eed;

/// Names accepted by [`builtin`]; `split_<n>` works for any `1 <= n <= 8`.
pub const NAMES: &[&str] = &[
    "dim1_cubic",
    "a2_poly",
    "a2_legendre",
    "a2_quartic",
    "a3_poly",
    "split_2",
    "split_3",
    "super_2x2",
    "p2_quantum_trunc",
    "wdvv_fail",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntryKind {
    /// Potential, metric and associative multiplication.
    Frobenius,
    /// Multiplication only; no metric.
    FManifold,
    /// Deliberately broken data, served unverified.
    NegativeControl,
}

/// What the admission gauntlet certified.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AdmissionStatus {
    pub verified: bool,
    pub associative: Option<bool>,
    pub f_identity_quadruples: usize,
    pub euler: Option<bool>,
    pub conformal: Option<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CatalogEntry {
    pub name: String,
    pub data: FrobeniusData,
    pub kind: EntryKind,
    /// Claimed `D` with `Lie_E g = D g`.
    pub conformal_weight: Option<Rational>,
    pub notes: String,
    pub status: AdmissionStatus,
}

impl CatalogEntry {
    pub fn new(name: impl Into<String>, data: FrobeniusData, notes: impl Into<String>) -> Self {
        let kind = if data.metric().is_some() {
            EntryKind::Frobenius
        } else {
            EntryKind::FManifold
        };
        Self {
            name: name.into(),
            data,
            kind,
            conformal_weight: None,
            notes: notes.into(),
            status: AdmissionStatus::default(),
        }
    }

    pub fn with_conformal_weight(mut self, weight: Rational) -> Self {
        self.conformal_weight = Some(weight);
        self
    }

    /// The same data viewed as an F-manifold (metric dropped).
    pub fn without_metric(mut self) -> Self {
        self.data = self.data.without_metric();
        self.kind = EntryKind::FManifold;
        self.conformal_weight = None;
        self.status = AdmissionStatus::default();
        self
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CatalogError {
    #[error("unknown catalog entry `{0}`")]
    UnknownName(String),
    #[error("entry `{name}` rejected by the {check} check: {residual}")]
    Rejected {
        name: String,
        check: &'static str,
        residual: String,
    },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

fn reject(entry: &CatalogEntry, check: &'static str, residual: String) -> CatalogError {
    CatalogError::Rejected {
        name: entry.name.clone(),
        check,
        residual,
    }
}

/// Runs the gauntlet and stamps the status; any nonvanishing residual
/// rejects the entry.
pub fn admit(mut entry: CatalogEntry) -> Result<CatalogEntry, CatalogError> {
    let c = entry.data.multiplication().clone();
    let chart = c.chart().clone();
    let mut status = AdmissionStatus::default();

    if entry.data.metric().is_some() {
        if let Some(a) = wdvv_residual(&c).into_iter().next() {
            let (i, j, k) = a.indices;
            return Err(reject(
                &entry,
                "associativity",
                format!("({i},{j},{k}): {}", a.residual),
            ));
        }
        status.associative = Some(true);
    }

    let n = chart.dim();
    let flat: Vec<VectorField> = (0..n)
        .map(|a| VectorField::coordinate(chart.clone(), a))
        .collect();
    let mut checked = 0;
    for a in 0..n {
        for b in 0..n {
            for d in 0..n {
                for f in 0..n {
                    let r = f_identity_residual(&flat[a], &flat[b], &flat[d], &flat[f], &c);
                    if !r.vanishes() {
                        return Err(reject(
                            &entry,
                            "F-identity",
                            format!("flat ({a},{b},{d},{f}): {r}"),
                        ));
                    }
                    checked += 1;
                }
            }
        }
    }
    let mut rng = seeded(ADMISSION_SEED);
    for _ in 0..ADMISSION_SAMPLES {
        let q: Vec<VectorField> = (0..4)
            .map(|_| {
                let p = random_parity(&chart, &mut rng);
                random_field(&chart, p, SampleShape::default(), &mut rng)
            })
            .collect();
        let r = f_identity_residual(&q[0], &q[1], &q[2], &q[3], &c);
        if !r.vanishes() {
            return Err(reject(&entry, "F-identity", r.to_string()));
        }
        checked += 1;
    }
    status.f_identity_quadruples = checked;

    if let Some(euler) = entry.data.euler() {
        let e = identity_field(&c).ok();
        let r = euler_residual(&euler.field, &euler.d0, &c, e.as_ref())?;
        if !r.vanishes() {
            let worst = r
                .pairs
                .iter()
                .find(|(_, v)| !v.vanishes())
                .map(|(ab, v)| format!("pair {ab:?}: {v}"))
                .or_else(|| r.unit.as_ref().map(|u| format!("[e,E] - d0 e = {u}")))
                .unwrap_or_default();
            return Err(reject(&entry, "Euler", worst));
        }
        status.euler = Some(true);
        if let (Some(weight), Some(metric)) = (&entry.conformal_weight, entry.data.metric()) {
            let res = conformal_residual(metric, &euler.field, weight);
            if let Some(bad) = res
                .iter()
                .flatten()
                .find(|s| !s.vanishes_up_to(s.validity()))
            {
                return Err(reject(&entry, "conformal weight", bad.to_string()));
            }
            status.conformal = Some(true);
        }
    }
    status.verified = true;
    entry.status = status;
    Ok(entry)
}

/// Looks up and re-verifies a built-in entry.
pub fn builtin(name: &str) -> Result<CatalogEntry, CatalogError> {
    let entry = match name {
        "dim1_cubic" => dim1_cubic(),
        "a2_poly" => a2_poly(),
        "a2_legendre" => a2_legendre(),
        "a2_quartic" => a2_quartic(),
        "a3_poly" => a3_poly(),
        "super_2x2" => super_2x2(),
        "p2_quantum_trunc" => p2_quantum_trunc(8),
        "wdvv_fail" => return Ok(wdvv_fail()),
        _ => match name
            .strip_prefix("split_")
            .and_then(|n| n.parse::<usize>().ok())
        {
            Some(n @ 1..=8) => split(n),
            _ => return Err(CatalogError::UnknownName(name.to_string())),
        },
    };
    admit(entry)
}

fn linear_field(chart: &Arc<Chart>, weights: &[Rational], shift: &[Rational]) -> VectorField {
    let comps = (0..chart.dim())
        .map(|a| chart.coordinate(a).scale(&weights[a]) + chart.constant(shift[a].clone()))
        .collect();
    VectorField::new(chart.clone(), comps, Parity::Even).expect("even linear field")
}

fn with_euler(
    data: FrobeniusData,
    weights: &[Rational],
    shift: &[Rational],
    d0: Rational,
) -> FrobeniusData {
    let field = linear_field(data.chart(), weights, shift);
    data.with_euler(field, d0)
        .expect("even field on the data chart")
}

fn zeros(n: usize) -> Vec<Rational> {
    vec![Rational::zero(); n]
}

fn potential_data(
    chart: Arc<Chart>,
    phi: GradedSeries,
    metric: Metric,
    cap: Option<i32>,
) -> FrobeniusData {
    FrobeniusData::from_potential(chart, phi, metric, cap).expect("valid built-in data")
}

fn dim1_cubic() -> CatalogEntry {
    let chart = Chart::even(1);
    let phi = chart.coordinate(0).pow(3).scale(&ratio(1, 6));
    let g = Metric::new(&chart, RatMatrix::identity(1)).expect("unit metric");
    let data = with_euler(
        potential_data(chart, phi, g, None),
        &[int(1)],
        &zeros(1),
        int(1),
    );
    CatalogEntry::new("dim1_cubic", data, "x^3/6 on the line, g = (1); E = x d/dx")
        .with_conformal_weight(int(2))
}

fn a2_potential(chart: &Chart, tail: GradedSeries) -> GradedSeries {
    let (x1, x2) = (chart.coordinate(0), chart.coordinate(1));
    (x1.pow(2) * &x2).scale(&ratio(1, 2)) + tail
}

fn a2_poly() -> CatalogEntry {
    let chart = Chart::even(2);
    let phi = a2_potential(&chart, chart.coordinate(1).pow(3).scale(&ratio(1, 6)));
    let g = Metric::antidiagonal(&chart).expect("antidiagonal");
    let data = with_euler(
        potential_data(chart, phi, g, None),
        &[int(1), int(1)],
        &zeros(2),
        int(1),
    );
    CatalogEntry::new(
        "a2_poly",
        data,
        "x1^2 x2/2 + x2^3/6, antidiagonal metric; constant structure constants, E = x1 d1 + x2 d2",
    )
    .with_conformal_weight(int(2))
}

fn a2_legendre() -> CatalogEntry {
    let chart = Chart::even(2);
    let x2 = chart.coordinate(1);
    let phi = a2_potential(
        &chart,
        x2.pow(3).scale(&ratio(1, 6)) + x2.pow(4).scale(&ratio(1, 24)),
    );
    let g = Metric::antidiagonal(&chart).expect("antidiagonal");
    let data = with_euler(
        potential_data(chart, phi, g, None),
        &[int(1), ratio(2, 3)],
        &[int(0), ratio(2, 3)],
        int(1),
    );
    CatalogEntry::new(
        "a2_legendre",
        data,
        "x1^2 x2/2 + x2^3/6 + x2^4/24; d2 is invertible at the origin. E = x1 d1 + (2/3)(1 + x2) d2",
    )
    .with_conformal_weight(ratio(5, 3))
}

fn a2_quartic() -> CatalogEntry {
    let chart = Chart::even(2);
    let phi = a2_potential(&chart, chart.coordinate(1).pow(4).scale(&ratio(1, 24)));
    let g = Metric::antidiagonal(&chart).expect("antidiagonal");
    let data = with_euler(
        potential_data(chart, phi, g, None),
        &[int(1), ratio(2, 3)],
        &zeros(2),
        int(1),
    );
    CatalogEntry::new(
        "a2_quartic",
        data,
        "x1^2 x2/2 + x2^4/24; semisimple for x2 > 0, nilpotent at x2 = 0",
    )
    .with_conformal_weight(ratio(5, 3))
}

/// Quasi-homogeneous ansatz `t1²t3/2 + t1t2²/2 + a t2²t3² + b t3⁵`;
/// associativity forces `b = 4a²/15`, here with `a = 1/4`.
fn a3_poly() -> CatalogEntry {
    let chart = Chart::even(3);
    let (t1, t2, t3) = (
        chart.coordinate(0),
        chart.coordinate(1),
        chart.coordinate(2),
    );
    let phi = (t1.pow(2) * &t3).scale(&ratio(1, 2))
        + (&t1 * &t2.pow(2)).scale(&ratio(1, 2))
        + (t2.pow(2) * t3.pow(2)).scale(&ratio(1, 4))
        + t3.pow(5).scale(&ratio(1, 60));
    let g = Metric::antidiagonal(&chart).expect("antidiagonal");
    let data = with_euler(
        potential_data(chart, phi, g, None),
        &[int(1), ratio(3, 4), ratio(1, 2)],
        &zeros(3),
        int(1),
    );
    CatalogEntry::new(
        "a3_poly",
        data,
        "t1^2 t3/2 + t1 t2^2/2 + t2^2 t3^2/4 + t3^5/60, antidiagonal metric; weights (1, 3/4, 1/2)",
    )
    .with_conformal_weight(ratio(3, 2))
}

fn split(n: usize) -> CatalogEntry {
    let chart = Chart::even(n);
    let mut phi = chart.zero();
    for a in 0..n {
        phi += &chart.coordinate(a).pow(3).scale(&ratio(1, 6));
    }
    let g = Metric::new(&chart, RatMatrix::identity(n)).expect("unit metric");
    let data = with_euler(
        potential_data(chart, phi, g, None),
        &vec![int(1); n],
        &zeros(n),
        int(1),
    );
    CatalogEntry::new(
        format!("split_{n}"),
        data,
        "sum of x_a^3/6 with the unit metric; the coordinate fields are the idempotents",
    )
    .with_conformal_weight(int(2))
}

/// Coordinates `(x1, x2 | θ1, θ2)` with `g(∂1, ∂2) = 1`, `g(∂θ1, ∂θ2) = 1`.
fn super_2x2() -> CatalogEntry {
    let chart = Chart::new(vec![Parity::Even, Parity::Even, Parity::Odd, Parity::Odd]);
    let (x1, x2, t1, t2) = (
        chart.coordinate(0),
        chart.coordinate(1),
        chart.coordinate(2),
        chart.coordinate(3),
    );
    let phi = (x1.pow(2) * &x2).scale(&ratio(1, 2)) + &x1 * &(&t2 * &t1);
    let m = RatMatrix::from_rows(vec![
        vec![int(0), int(1), int(0), int(0)],
        vec![int(1), int(0), int(0), int(0)],
        vec![int(0), int(0), int(0), int(1)],
        vec![int(0), int(0), int(-1), int(0)],
    ])
    .expect("square");
    let g = Metric::new(&chart, m).expect("even supersymmetric metric");
    let data = with_euler(
        potential_data(chart, phi, g, None),
        &vec![int(1); 4],
        &zeros(4),
        int(1),
    );
    CatalogEntry::new(
        "super_2x2",
        data,
        "x1^2 x2/2 + x1 t2 t1 on a 2|2 chart; e = d1, dt1 o dt2 = d2",
    )
    .with_conformal_weight(int(2))
}

/// `Σ_{j ≤ cap} (k x_var)^j / j!`, valid to degree `cap`.
pub fn exp_linear(chart: &Chart, var: usize, k: i64, cap: i32) -> GradedSeries {
    let x = chart.coordinate(var).scale(&int(k));
    let mut term = chart.one();
    let mut out = chart.one();
    for j in 1..=cap {
        term = (&term * &x).scale(&ratio(1, j as i64));
        out += &term;
    }
    out.with_validity(Some(cap))
}

/// Rational-curve counts of the plane by the associativity recursion,
/// indexed by degree (`counts[0]` unused).
pub fn plane_curve_counts(max_degree: usize) -> Vec<BigInt> {
    let mut n = vec![BigInt::zero(); max_degree + 1];
    if max_degree >= 1 {
        n[1] = BigInt::one();
    }
    for d in 2..=max_degree {
        let mut acc = BigInt::zero();
        for d1 in 1..d {
            let d2 = d - d1;
            let (a, b) = (BigInt::from(d1), BigInt::from(d2));
            let top = BigInt::from(3 * d - 4);
            let left = &a * &a * &b * &b * binomial(top.clone(), BigInt::from(3 * d1 - 2));
            let right = &a * &a * &a * &b * binomial(top, BigInt::from(3 * d1 - 1));
            acc += &n[d1] * &n[d2] * (left - right);
        }
        n[d] = acc;
    }
    n
}

/// Truncated potential of the plane's quantum product in coordinates
/// `(x0, x1, x2)` dual to `1, H, H²`.
fn p2_quantum_trunc(cap: i32) -> CatalogEntry {
    let chart = Chart::even(3);
    let (x0, x1, x2) = (
        chart.coordinate(0),
        chart.coordinate(1),
        chart.coordinate(2),
    );
    let max_d = ((cap + 1) / 3) as usize;
    let counts = plane_curve_counts(max_d);
    let mut phi = (x0.pow(2) * &x2).scale(&ratio(1, 2)) + (&x0 * &x1.pow(2)).scale(&ratio(1, 2));
    for (d, nd) in counts.iter().enumerate().skip(1) {
        let k = 3 * d as u32 - 1;
        let fact: BigInt = (1..=k).map(BigInt::from).product();
        let coeff = Rational::new(nd.clone(), fact);
        phi += &(x2.pow(k).scale(&coeff) * exp_linear(&chart, 1, d as i64, cap));
    }
    let phi = phi.truncated(Some(cap));
    let g = Metric::antidiagonal(&chart).expect("antidiagonal");
    let data = with_euler(
        potential_data(chart, phi, g, Some(cap)),
        &[int(1), int(0), int(-1)],
        &[int(0), int(3), int(0)],
        int(1),
    );
    CatalogEntry::new(
        "p2_quantum_trunc",
        data,
        format!("quantum product of the plane, series truncated at degree {cap}; E = x0 d0 + 3 d1 - x2 d2"),
    )
    .with_conformal_weight(int(0))
}

/// Negative control: the associated product is not associative and the
/// F-identity fails on flat fields.
pub fn wdvv_fail() -> CatalogEntry {
    let chart = Chart::even(3);
    let (x1, x2, x3) = (
        chart.coordinate(0),
        chart.coordinate(1),
        chart.coordinate(2),
    );
    let phi = (x1.pow(2) * &x3).scale(&ratio(1, 2))
        + (&x1 * &x2.pow(2)).scale(&ratio(1, 2))
        + x2.pow(3) * &x3;
    let g = Metric::antidiagonal(&chart).expect("antidiagonal");
    let mut entry = CatalogEntry::new(
        "wdvv_fail",
        potential_data(chart, phi, g, None),
        "x1^2 x3/2 + x1 x2^2/2 + x2^3 x3; violates associativity",
    );
    entry.kind = EntryKind::NegativeControl;
    entry
}

/// Negative control for the canonical-frame layer: a semisimple, associative
/// product whose idempotents `f1 = ∂1`, `f2 = ∂2 + t x1 ∂1` do not commute.
pub fn sheared_split(t: Rational) -> MultiplicationTensor {
    let chart = Chart::even(2);
    let x1 = chart.coordinate(0);
    let shear = x1.scale(&t);
    // frame[c][i]: coefficient of ∂_c in f_i; inverse has −shear.
    let frame = [[chart.one(), shear.clone()], [chart.zero(), chart.one()]];
    let inverse = [[chart.one(), -&shear], [chart.zero(), chart.one()]];
    MultiplicationTensor::from_fn(chart.clone(), |a, b, c| {
        let mut s = chart.zero();
        for i in 0..2 {
            s += &(&(&inverse[i][a] * &inverse[i][b]) * &frame[c][i]);
        }
        s
    })
    .expect("symmetric by construction")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curve_counts() {
        let n = plane_curve_counts(5);
        let expected: Vec<BigInt> = [0, 1, 1, 12, 620, 87304]
            .into_iter()
            .map(BigInt::from)
            .collect();
        assert_eq!(n, expected);
    }

    #[test]
    fn every_named_entry_is_served() {
        for name in NAMES {
            let entry = builtin(name).unwrap();
            assert_eq!(&entry.name, name);
            if entry.kind != EntryKind::NegativeControl {
                assert!(entry.status.verified, "{name}");
                assert_eq!(entry.status.euler, Some(true), "{name}");
                assert_eq!(entry.status.conformal, Some(true), "{name}");
            }
        }
        assert!(matches!(builtin("nope"), Err(CatalogError::UnknownName(_))));
        assert!(builtin("split_9").is_err());
    }

    #[test]
    fn negative_control_is_rejected() {
        let err = admit(wdvv_fail()).unwrap_err();
        assert!(matches!(
            err,
            CatalogError::Rejected {
                check: "associativity",
                ..
            }
        ));
    }

    #[test]
    fn metricless_view_is_admitted() {
        let entry = admit(a2_poly().without_metric()).unwrap();
        assert_eq!(entry.kind, EntryKind::FManifold);
        assert_eq!(entry.status.associative, None);
    }

    #[test]
    fn exponential_series() {
        let chart = Chart::even(1);
        let e = exp_linear(&chart, 0, 2, 3);
        assert_eq!(e.validity(), Some(3));
        assert_eq!(
            e.coeff(&crate::series::Monomial::new(vec![3], 0)),
            ratio(4, 3)
        );
    }

    #[test]
    fn sheared_product_is_associative() {
        assert!(wdvv_residual(&sheared_split(ratio(1, 10))).is_empty());
    }
}
