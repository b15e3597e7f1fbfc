//! Tangent fields, the multiplication `∘` derived from a potential, and the
//! residual operators certifying F-manifold and Frobenius identities.
//!
//! Coordinates `x^a` carry parities `p_a`; the chart lists even coordinates
//! first in the series arity but keeps the user-facing index order.

mod chart;
mod data;
mod euler;
mod field;
mod kernel;
mod residuals;
mod tensor;
mod unit;

pub use chart::Chart;
pub use data::{EulerField, FrobeniusData};
pub use euler::{
    circ_power, conformal_residual, euler_residual, metric_lie_derivative, power_bracket_residuals,
    virasoro_residual, EulerResidual, PowerBracketResiduals,
};
pub use field::{OneForm, VectorField};
pub use kernel::{in_poisson_kernel, poisson_kernel_basis, KernelBasis};
pub use residuals::{
    bracket_identity_residual, f_identity_residual, leibniz_form_residual, poisson_deviation,
    wdvv_residual, Associator,
};
pub use tensor::{structure_constants, Metric, MultiplicationTensor};
pub use unit::{coidentity, identity_field, matches_metric, metric_from_coidentity};

use crate::series::SeriesError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GeometryError {
    #[error("expected {expected} entries, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("series arity does not match the chart")]
    Arity,
    #[error("component {component} has the wrong parity")]
    ComponentParity { component: usize },
    #[error("components have mixed parity")]
    MixedParity,
    #[error("fields of different parity cannot be added")]
    ParityMismatch,
    #[error("metric pairs coordinates of different parity")]
    MetricNotEven,
    #[error("metric is not supersymmetric")]
    MetricNotSupersymmetric,
    #[error("metric is singular")]
    SingularMetric,
    #[error("entry C[{a}][{b}][{c}] has the wrong parity")]
    TensorParity { a: usize, b: usize, c: usize },
    #[error("multiplication is not supercommutative at ({a}, {b}; {c})")]
    NotSupercommutative { a: usize, b: usize, c: usize },
    #[error("operation requires a purely even chart")]
    PureEvenRequired,
    #[error("operation requires exact polynomial data")]
    PolynomialRequired,
    #[error("potential must be even")]
    OddPotential,
    #[error("multiplication has no identity")]
    NoIdentity,
    #[error("identity is not unique")]
    IdentityNotUnique,
    #[error("identity is not polynomial up to degree {0}")]
    IdentityNotPolynomial(i32),
    #[error("Euler field must be even")]
    OddEuler,
    #[error(transparent)]
    Series(#[from] SeriesError),
}
