//! Verification toolkit for F-manifolds and Frobenius (super)manifolds.
//!
//! The symbolic layer works with exact rationals: [`series`] provides
//! truncated supercommutative power series, [`geometry`] builds the
//! multiplication of tangent fields from a potential and evaluates residuals
//! of the bracket/product identities, [`transforms`] implements
//! Legendre-type changes of metric and Euler-field bookkeeping. The
//! [`semisimple`] module is the floating-point layer for canonical
//! coordinates, and [`catalog`] serves verified example manifolds.

pub mod catalog;
pub mod geometry;
pub mod linalg;
pub mod rational;
pub mod sampling;
pub mod semisimple;
pub mod series;
pub mod transforms;

pub use rational::Rational;
pub use series::{GradedSeries, Monomial, Parity, Validity, Var};
