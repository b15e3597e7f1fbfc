use std::sync::Arc;

use super::{
    identity_field, structure_constants, Chart, GeometryError, Metric, MultiplicationTensor,
    VectorField,
};
use crate::rational::Rational;
use crate::series::{GradedSeries, Parity};

/// An Euler field together with its weight `d₀` (`[e, E] = d₀ e`).
#[derive(Debug, Clone, PartialEq)]
pub struct EulerField {
    pub field: VectorField,
    pub d0: Rational,
}

/// Local data of an F-manifold, optionally with a flat metric.
///
/// With a metric, the multiplication is derived from the potential. Without
/// one, the object is F-manifold data only and the multiplication is given
/// directly; any potential is then informational.
#[derive(Debug, Clone, PartialEq)]
pub struct FrobeniusData {
    chart: Arc<Chart>,
    potential: Option<GradedSeries>,
    metric: Option<Metric>,
    multiplication: MultiplicationTensor,
    degree_cap: Option<i32>,
    euler: Option<EulerField>,
}

impl FrobeniusData {
    /// Frobenius data from a potential and a constant metric. A degree cap
    /// truncates the potential (and everything derived from it).
    pub fn from_potential(
        chart: Arc<Chart>,
        potential: GradedSeries,
        metric: Metric,
        degree_cap: Option<i32>,
    ) -> Result<Self, GeometryError> {
        let potential = match degree_cap {
            Some(d) => potential.truncated(Some(d)),
            None => potential,
        };
        let multiplication = structure_constants(chart.clone(), &potential, &metric)?;
        Ok(Self {
            chart,
            potential: Some(potential),
            metric: Some(metric),
            multiplication,
            degree_cap,
            euler: None,
        })
    }

    /// F-manifold data with an explicit multiplication and no metric.
    pub fn from_tensor(multiplication: MultiplicationTensor, degree_cap: Option<i32>) -> Self {
        Self {
            chart: multiplication.chart().clone(),
            potential: None,
            metric: None,
            multiplication,
            degree_cap,
            euler: None,
        }
    }

    pub fn with_euler(mut self, field: VectorField, d0: Rational) -> Result<Self, GeometryError> {
        if field.parity() != Parity::Even {
            return Err(GeometryError::OddEuler);
        }
        if field.chart() != &self.chart {
            return Err(GeometryError::Arity);
        }
        self.euler = Some(EulerField { field, d0 });
        Ok(self)
    }

    /// Drops the metric, keeping the multiplication (weak Frobenius view).
    pub fn without_metric(mut self) -> Self {
        self.metric = None;
        self
    }

    pub fn with_potential(mut self, potential: Option<GradedSeries>) -> Self {
        self.potential = potential;
        self
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    pub fn potential(&self) -> Option<&GradedSeries> {
        self.potential.as_ref()
    }

    pub fn metric(&self) -> Option<&Metric> {
        self.metric.as_ref()
    }

    pub fn multiplication(&self) -> &MultiplicationTensor {
        &self.multiplication
    }

    pub fn degree_cap(&self) -> Option<i32> {
        self.degree_cap
    }

    pub fn euler(&self) -> Option<&EulerField> {
        self.euler.as_ref()
    }

    pub fn identity(&self) -> Result<VectorField, GeometryError> {
        identity_field(&self.multiplication)
    }

    pub fn flat_field(&self, a: usize) -> VectorField {
        VectorField::coordinate(self.chart.clone(), a)
    }
}
