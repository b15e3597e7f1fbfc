//! Pointwise floating-point layer for semisimple points: idempotent frames
//! of the multiplication, and diagonal metrics in canonical coordinates with
//! their rotation coefficients, square-root fields and covariant
//! derivatives.
//!
//! Throughout, `η_ij` denotes `∂ηⱼ/∂uⁱ`, and only real square roots are
//! taken.

mod diagonal;
mod expr;
mod idempotent;

pub use diagonal::{
    admissibility_residual, covariant_derivative_field, flatness_gamma_criterion,
    metric_transfer_residual, potentiality_residual, rotation_data, sqrt_fields, sqrt_ratio_fields,
    two_sum_form, DiagonalFrame, FlatnessVerdict, RotationData, SqrtField,
};
pub use expr::{Constant, Expr, ScalarFn, SharedFn, SqrtRatio};
pub use idempotent::{
    frame_commutativity_residual, idempotent_frame, FrameOptions, IdempotentFrame,
};

use crate::geometry::GeometryError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SemisimpleError {
    #[error("expected {expected} entries, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("eta_{index} = {value} is not positive")]
    NonPositiveEta { index: usize, value: f64 },
    #[error("eta_{index} vanishes")]
    ZeroEta { index: usize },
    #[error("ratio of metric entries {index} is {value}; no real square root")]
    NonPositiveRatio { index: usize, value: f64 },
    #[error("second metric required")]
    MissingSecondMetric,
    #[error("metric {metric} is not admissible here (residual {residual:e})")]
    Inadmissible { metric: &'static str, residual: f64 },
    #[error("point is not tame: eigenvalue gap {gap:e}")]
    NotTame { gap: f64 },
    #[error("multiplication operator has complex eigenvalues (imaginary part {imaginary:e})")]
    ComplexSpectrum { imaginary: f64 },
    #[error("eigenline is nilpotent")]
    Nilpotent,
    #[error("eigenvector computation failed")]
    Eigenvector,
    #[error("expression error: {0}")]
    Expression(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}
