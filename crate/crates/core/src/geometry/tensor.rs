use std::sync::Arc;

use num_traits::Zero;

use super::{Chart, GeometryError, VectorField};
use crate::linalg::RatMatrix;
use crate::rational::Rational;
use crate::series::{koszul, min_validity, GradedSeries, Parity, Validity};

/// Constant flat metric `g_ab = g(∂_a, ∂_b)`: even, supersymmetric
/// (`g_ab = (−1)^{p_a p_b} g_ba`) and invertible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Metric {
    matrix: RatMatrix,
    inverse: RatMatrix,
}

impl Metric {
    pub fn new(chart: &Chart, matrix: RatMatrix) -> Result<Self, GeometryError> {
        let n = chart.dim();
        if matrix.rows() != n || matrix.cols() != n {
            return Err(GeometryError::Dimension {
                expected: n,
                found: matrix.rows(),
            });
        }
        for a in 0..n {
            for b in 0..n {
                let (pa, pb) = (chart.parity(a), chart.parity(b));
                if pa != pb && !matrix[(a, b)].is_zero() {
                    return Err(GeometryError::MetricNotEven);
                }
                let mirrored = if koszul(pa, pb) {
                    -matrix[(b, a)].clone()
                } else {
                    matrix[(b, a)].clone()
                };
                if matrix[(a, b)] != mirrored {
                    return Err(GeometryError::MetricNotSupersymmetric);
                }
            }
        }
        let inverse = matrix
            .inverse()
            .map_err(|_| GeometryError::SingularMetric)?;
        Ok(Self { matrix, inverse })
    }

    /// Ones on the antidiagonal (the usual pairing `x^a ↔ x^{n+1-a}`).
    pub fn antidiagonal(chart: &Chart) -> Result<Self, GeometryError> {
        let n = chart.dim();
        let mut m = RatMatrix::zeros(n, n);
        for a in 0..n {
            m[(a, n - 1 - a)] = crate::rational::one();
        }
        Self::new(chart, m)
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.matrix
    }

    pub fn inverse(&self) -> &RatMatrix {
        &self.inverse
    }

    pub fn entry(&self, a: usize, b: usize) -> &Rational {
        &self.matrix[(a, b)]
    }

    /// `g(X, Y) = Σ (−1)^{p_a(Ỹ + p_b)} X^a Y^b g_ab`.
    pub fn pair(&self, x: &VectorField, y: &VectorField) -> GradedSeries {
        let chart = x.chart();
        let mut acc = chart.zero();
        for a in 0..chart.dim() {
            if x.component(a).is_zero() {
                continue;
            }
            for b in 0..chart.dim() {
                let g = &self.matrix[(a, b)];
                if g.is_zero() || y.component(b).is_zero() {
                    continue;
                }
                let negate = koszul(chart.parity(a), y.parity() + chart.parity(b));
                let term = (x.component(a) * y.component(b)).scale(g);
                acc += &term.signed(negate);
            }
        }
        acc
    }
}

/// Structure constants `∂_a ∘ ∂_b = Σ_c C_ab^c ∂_c`.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiplicationTensor {
    chart: Arc<Chart>,
    entries: Vec<GradedSeries>,
}

impl MultiplicationTensor {
    /// Validates parities (`C_ab^c` has parity `p_a + p_b + p_c`) and
    /// supercommutativity `C_ab^c = (−1)^{p_a p_b} C_ba^c`.
    pub fn new(chart: Arc<Chart>, entries: Vec<GradedSeries>) -> Result<Self, GeometryError> {
        let n = chart.dim();
        if entries.len() != n * n * n {
            return Err(GeometryError::Dimension {
                expected: n * n * n,
                found: entries.len(),
            });
        }
        let t = Self { chart, entries };
        t.check()?;
        Ok(t)
    }

    pub fn from_fn(
        chart: Arc<Chart>,
        f: impl Fn(usize, usize, usize) -> GradedSeries,
    ) -> Result<Self, GeometryError> {
        let n = chart.dim();
        let mut entries = Vec::with_capacity(n * n * n);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    entries.push(f(a, b, c));
                }
            }
        }
        Self::new(chart, entries)
    }

    fn check(&self) -> Result<(), GeometryError> {
        let n = self.dim();
        let ch = &self.chart;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let e = self.entry(a, b, c);
                    if e.even_arity() != ch.even_arity() || e.odd_arity() != ch.odd_arity() {
                        return Err(GeometryError::Arity);
                    }
                    if !e.has_parity(ch.parity(a) + ch.parity(b) + ch.parity(c)) {
                        return Err(GeometryError::TensorParity { a, b, c });
                    }
                    let swapped = self
                        .entry(b, a, c)
                        .clone()
                        .signed(koszul(ch.parity(a), ch.parity(b)));
                    if !e.agrees_up_to(&swapped, min_validity(e.validity(), swapped.validity())) {
                        return Err(GeometryError::NotSupercommutative { a, b, c });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    pub fn entry(&self, a: usize, b: usize, c: usize) -> &GradedSeries {
        let n = self.dim();
        &self.entries[(a * n + b) * n + c]
    }

    pub fn entries(&self) -> &[GradedSeries] {
        &self.entries
    }

    pub fn validity(&self) -> Validity {
        self.entries
            .iter()
            .fold(None, |acc, e| min_validity(acc, e.validity()))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(GradedSeries::is_zero)
    }

    pub fn max_degree(&self) -> i32 {
        self.entries
            .iter()
            .map(GradedSeries::degree)
            .max()
            .unwrap_or(-1)
    }

    /// `X ∘ Y = Σ (−1)^{p_a(Ỹ + p_b)} X^a Y^b C_ab^c ∂_c`.
    pub fn circ(&self, x: &VectorField, y: &VectorField) -> VectorField {
        let ch = &self.chart;
        let n = self.dim();
        let mut out: Vec<GradedSeries> = (0..n).map(|_| ch.zero()).collect();
        for a in 0..n {
            let xa = x.component(a);
            if xa.is_zero() {
                continue;
            }
            for b in 0..n {
                let yb = y.component(b);
                if yb.is_zero() {
                    continue;
                }
                let coeff = (xa * yb).signed(koszul(ch.parity(a), y.parity() + ch.parity(b)));
                for (c, slot) in out.iter_mut().enumerate() {
                    let cabc = self.entry(a, b, c);
                    if !cabc.is_zero() {
                        *slot += &(&coeff * cabc);
                    }
                }
            }
        }
        VectorField::new(ch.clone(), out, x.parity() + y.parity())
            .expect("product of homogeneous fields is homogeneous")
    }

    /// Matrix of `X∘` in the flat basis: `X ∘ ∂_b = Σ_a M[a][b] ∂_a`.
    pub fn operator_matrix(&self, x: &VectorField) -> Vec<Vec<GradedSeries>> {
        let n = self.dim();
        let cols: Vec<VectorField> = (0..n)
            .map(|b| self.circ(x, &VectorField::coordinate(self.chart.clone(), b)))
            .collect();
        (0..n)
            .map(|a| (0..n).map(|b| cols[b].component(a).clone()).collect())
            .collect()
    }

    /// All entries evaluated at a real point (pure-even charts only).
    pub fn evaluate_f64(&self, point: &[f64]) -> Result<Vec<f64>, GeometryError> {
        if !self.chart.is_pure_even() {
            return Err(GeometryError::PureEvenRequired);
        }
        self.entries
            .iter()
            .map(|e| {
                e.evaluate_f64(point)
                    .map(|v| v.value)
                    .map_err(GeometryError::from)
            })
            .collect()
    }

    /// Truncates every entry to validity `v`.
    pub fn truncated(&self, v: Validity) -> Self {
        Self {
            chart: self.chart.clone(),
            entries: self
                .entries
                .iter()
                .map(|e| e.clone().truncated(v))
                .collect(),
        }
    }
}

/// `C_ab^c = Σ_e Φ_abe g^{ec}` with `Φ_abe = ∂_a ∂_b ∂_e Φ` (left derivatives,
/// innermost `e` applied first), so that `g(∂_a∘∂_b, ∂_c) = Φ_abc`.
pub fn structure_constants(
    chart: Arc<Chart>,
    potential: &GradedSeries,
    metric: &Metric,
) -> Result<MultiplicationTensor, GeometryError> {
    if !potential.has_parity(Parity::Even) {
        return Err(GeometryError::OddPotential);
    }
    if potential.even_arity() != chart.even_arity() || potential.odd_arity() != chart.odd_arity() {
        return Err(GeometryError::Arity);
    }
    let n = chart.dim();
    let mut first: Vec<GradedSeries> = Vec::with_capacity(n);
    for e in 0..n {
        first.push(chart.partial(e, potential));
    }
    let mut third = vec![chart.zero(); n * n * n];
    for b in 0..n {
        for e in 0..n {
            let be = chart.partial(b, &first[e]);
            for a in 0..n {
                third[(a * n + b) * n + e] = chart.partial(a, &be);
            }
        }
    }
    let ginv = metric.inverse();
    let validity = third
        .iter()
        .fold(potential.validity().map(|d| d - 3), |acc, s| {
            min_validity(acc, s.validity())
        });
    MultiplicationTensor::from_fn(chart.clone(), |a, b, c| {
        let mut acc = chart.zero().truncated(validity);
        for e in 0..n {
            let g = &ginv[(e, c)];
            if !g.is_zero() {
                acc += &third[(a * n + b) * n + e].scale(g);
            }
        }
        acc
    })
}
