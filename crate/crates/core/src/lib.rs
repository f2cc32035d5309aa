//! Pseudo-Hermitian quantum mechanics on finite-dimensional Hilbert spaces.
//!
//! The numerical core is generic over [`scalar::Real`] (`f32` or `f64`);
//! the aliases below fix the scalar to `f64` or `f32`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod composite;
pub mod error;
pub mod evolution;
pub mod linalg;
pub mod metric;
pub mod qsystem;
pub mod random;
pub mod report;
pub mod runner;
pub mod scalar;
pub mod verify;

pub use error::{Error, Result};
pub use linalg::SquareMatrix;
pub use metric::{EquivalenceMap, MetricOperator};
pub use qsystem::{Observable, PhysicalConstants, QuantumSystem, Ray};
pub use report::ExperimentReport;
pub use scalar::{Real, C};

pub type Complex64 = C<f64>;
pub type Complex32 = C<f32>;
pub type Matrix64 = SquareMatrix<f64>;
pub type Matrix32 = SquareMatrix<f32>;
pub type Metric64 = MetricOperator<f64>;
pub type Metric32 = MetricOperator<f32>;
pub type System64 = QuantumSystem<f64>;
pub type System32 = QuantumSystem<f32>;
pub type Ray64 = Ray<f64>;
pub type Ray32 = Ray<f32>;
