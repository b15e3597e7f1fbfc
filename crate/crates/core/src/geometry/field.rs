use std::sync::Arc;

use super::{Chart, GeometryError};
use crate::rational::Rational;
use crate::series::{koszul, min_validity, GradedSeries, Parity, Validity};

/// A homogeneous vector field `X = Σ_a X^a ∂_a` with coefficients written on
/// the left of the coordinate fields.
///
/// Component `a` has parity `parity + p_a`. The zero field carries a nominal
/// parity and is compatible with either parity in sums.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    chart: Arc<Chart>,
    components: Vec<GradedSeries>,
    parity: Parity,
}

impl VectorField {
    pub fn new(
        chart: Arc<Chart>,
        components: Vec<GradedSeries>,
        parity: Parity,
    ) -> Result<Self, GeometryError> {
        if components.len() != chart.dim() {
            return Err(GeometryError::Dimension {
                expected: chart.dim(),
                found: components.len(),
            });
        }
        for (a, c) in components.iter().enumerate() {
            if c.even_arity() != chart.even_arity() || c.odd_arity() != chart.odd_arity() {
                return Err(GeometryError::Arity);
            }
            if !c.has_parity(parity + chart.parity(a)) {
                return Err(GeometryError::ComponentParity { component: a });
            }
        }
        Ok(Self {
            chart,
            components,
            parity,
        })
    }

    /// Infers the parity from the components; the zero field is even.
    pub fn from_components(
        chart: Arc<Chart>,
        components: Vec<GradedSeries>,
    ) -> Result<Self, GeometryError> {
        let mut parity = None;
        for (a, c) in components.iter().enumerate() {
            if let Some(p) = c
                .parity()
                .map_err(|_| GeometryError::ComponentParity { component: a })?
            {
                let fp = p + chart.parity(a);
                if parity.is_some_and(|q| q != fp) {
                    return Err(GeometryError::MixedParity);
                }
                parity = Some(fp);
            }
        }
        Self::new(chart, components, parity.unwrap_or(Parity::Even))
    }

    pub fn zero(chart: Arc<Chart>, parity: Parity) -> Self {
        let components = (0..chart.dim()).map(|_| chart.zero()).collect();
        Self {
            chart,
            components,
            parity,
        }
    }

    /// The flat coordinate field `∂_a`.
    pub fn coordinate(chart: Arc<Chart>, a: usize) -> Self {
        let mut components: Vec<GradedSeries> = (0..chart.dim()).map(|_| chart.zero()).collect();
        components[a] = chart.one();
        let parity = chart.parity(a);
        Self {
            chart,
            components,
            parity,
        }
    }

    /// `Σ_a v_a ∂_a` with constant coefficients (even field; odd slots must be zero).
    pub fn constant(chart: Arc<Chart>, coeffs: &[Rational]) -> Result<Self, GeometryError> {
        let comps = coeffs.iter().map(|c| chart.constant(c.clone())).collect();
        Self::new(chart, comps, Parity::Even)
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn components(&self) -> &[GradedSeries] {
        &self.components
    }

    pub fn component(&self, a: usize) -> &GradedSeries {
        &self.components[a]
    }

    pub fn into_components(self) -> Vec<GradedSeries> {
        self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(GradedSeries::is_zero)
    }

    pub fn validity(&self) -> Validity {
        self.components
            .iter()
            .fold(None, |acc, c| min_validity(acc, c.validity()))
    }

    /// Zero up to the validity degree of the components.
    pub fn vanishes(&self) -> bool {
        let v = self.validity();
        self.components.iter().all(|c| c.vanishes_up_to(v))
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.components
            .iter()
            .map(GradedSeries::max_abs_coeff)
            .fold(0.0, f64::max)
    }

    /// Constant coefficients when every component is constant.
    pub fn constant_coefficients(&self) -> Option<Vec<Rational>> {
        self.components
            .iter()
            .map(|c| {
                (c.degree() <= 0 && c.terms().all(|(m, _)| m.is_one())).then(|| c.constant_term())
            })
            .collect()
    }

    pub fn truncated(&self, v: Validity) -> Self {
        Self {
            chart: self.chart.clone(),
            components: self
                .components
                .iter()
                .map(|c| c.clone().truncated(v))
                .collect(),
            parity: self.parity,
        }
    }

    /// Directional derivative `X(f) = Σ_a X^a ∂_a f`.
    pub fn apply(&self, f: &GradedSeries) -> GradedSeries {
        let mut acc = self.chart.zero().truncated(f.validity());
        for (a, xa) in self.components.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            acc += &(xa * &self.chart.partial(a, f));
        }
        acc
    }

    /// Lie superbracket `[X, Y] = X(Y^b)∂_b − (−1)^{XY} Y(X^b)∂_b`.
    pub fn bracket(&self, other: &Self) -> Self {
        let negate = koszul(self.parity, other.parity);
        let components = (0..self.dim())
            .map(|b| {
                let xy = self.apply(&other.components[b]);
                let yx = other.apply(&self.components[b]);
                if negate {
                    xy + yx
                } else {
                    xy - yx
                }
            })
            .collect();
        Self {
            chart: self.chart.clone(),
            components,
            parity: self.parity + other.parity,
        }
    }

    /// `f · X` for a homogeneous function `f`.
    pub fn mul_function(&self, f: &GradedSeries) -> Result<Self, GeometryError> {
        let pf = f
            .parity()
            .map_err(|_| GeometryError::MixedParity)?
            .unwrap_or(Parity::Even);
        Ok(Self {
            chart: self.chart.clone(),
            components: self.components.iter().map(|c| f * c).collect(),
            parity: pf + self.parity,
        })
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self {
            chart: self.chart.clone(),
            components: self.components.iter().map(|s| s.scale(c)).collect(),
            parity: self.parity,
        }
    }

    pub fn signed(self, negate: bool) -> Self {
        if negate {
            -self
        } else {
            self
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, GeometryError> {
        let parity = match (self.is_zero(), other.is_zero()) {
            (true, false) => other.parity,
            (false, true) | (true, true) => self.parity,
            (false, false) if self.parity == other.parity => self.parity,
            _ => return Err(GeometryError::ParityMismatch),
        };
        Ok(Self {
            chart: self.chart.clone(),
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a + b)
                .collect(),
            parity,
        })
    }
}

impl std::ops::Neg for VectorField {
    type Output = VectorField;

    fn neg(mut self) -> VectorField {
        for c in &mut self.components {
            *c = -&*c;
        }
        self
    }
}

impl std::ops::Add for VectorField {
    type Output = VectorField;

    fn add(self, rhs: VectorField) -> VectorField {
        self.checked_add(&rhs)
            .expect("adding fields of different parity")
    }
}

impl std::ops::Sub for VectorField {
    type Output = VectorField;

    fn sub(self, rhs: VectorField) -> VectorField {
        self.checked_add(&-rhs)
            .expect("subtracting fields of different parity")
    }
}

impl std::fmt::Display for VectorField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .components
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(a, c)| format!("({c})*d{}", a + 1))
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// A 1-form `Σ_a ε_a dx^a`, paired with fields as `i_X ε = Σ_a X^a ε_a`.
#[derive(Debug, Clone, PartialEq)]
pub struct OneForm {
    pub components: Vec<GradedSeries>,
}

impl OneForm {
    pub fn contract(&self, x: &VectorField) -> GradedSeries {
        let chart = x.chart();
        let mut acc = chart.zero();
        for (xa, ea) in x.components().iter().zip(&self.components) {
            acc += &(xa * ea);
        }
        acc
    }
}
