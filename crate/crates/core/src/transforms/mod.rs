//! Legendre-type changes of flat structure and Euler-field bookkeeping.
//!
//! A flat `∘`-invertible field `∂` defines new flat coordinates
//! `x̃^a = Σ_b g^{ab} ∂(∂_b Φ)`; the metric `g̃(X, Y) = g(∂∘X, ∂∘Y)` has the
//! old coefficient matrix in the new coordinate basis `∂̃_a = ∂⁻¹∘∂_a`. All
//! operations here are exact over the rationals, truncated honestly.

mod euler;
mod legendre;

use thiserror::Error;

use crate::geometry::GeometryError;
use crate::series::SeriesError;

pub use euler::{
    euler_commutator_check, euler_spectrum_shift, flat_spectrum, quantum_euler_fields,
    EulerFieldData, HodgeGradingData, SpectrumShift,
};
pub use legendre::{
    inverse_field, legendre_coordinates, legendre_transform, LegendreChecks, LegendreCoordinates,
    LegendreOptions, LegendreTransform,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error("Legendre transforms are implemented for pure-even charts only")]
    PureEvenRequired,
    #[error("a potential is required")]
    MissingPotential,
    #[error("a flat metric is required")]
    MissingMetric,
    #[error("expected {expected} field coefficients, found {found}")]
    FieldLength { expected: usize, found: usize },
    #[error("field is not flat (non-constant coefficients)")]
    NotFlat,
    #[error("field is not invertible at the basepoint (singular Jacobian)")]
    NotInvertible,
    #[error("Jacobian of the new coordinates differs from the matrix of ∂∘ at ({row}, {col})")]
    JacobianMismatch { row: usize, col: usize },
    #[error("nonlinear coordinate change needs a finite degree cap")]
    NeedsCap,
    #[error("certified degree {0} is below 1")]
    InsufficientDegree(i32),
    #[error("field is not a weak Euler field of weight {0}")]
    NotEuler(String),
    #[error("metric is not conformal along the Euler field")]
    NotConformal,
    #[error("[∂, E] is not proportional to ∂")]
    NotProportional,
    #[error("stated shift {stated} differs from the bracket value {found}")]
    ShiftMismatch { stated: String, found: String },
    #[error(
        "bidegree list has {bidegrees} entries but {anticanonical} anticanonical coefficients"
    )]
    GradingLength {
        bidegrees: usize,
        anticanonical: usize,
    },
    #[error("anticanonical coefficient on class {0} with p + q != 2")]
    GradingSupport(usize),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}
