//! Orlicz-Besov seminorms, Luxemburg norms and measure-density constants of
//! planar domains, with drivers that check the classical imbedding
//! inequalities numerically.

// `!(x > 0)` is used on purpose: it also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod geometry;
pub mod norms;
mod parse;
pub mod quadrature;
pub mod real;
pub mod verify;
pub mod young;

pub use error::{Error, Result};
pub use real::{Point, Real};

pub type YoungFunctionF64 = young::YoungFunction<f64>;
pub type YoungFunctionF32 = young::YoungFunction<f32>;
pub type DomainF64 = geometry::Domain<f64>;
pub type DomainF32 = geometry::Domain<f32>;
pub type ScalarFieldF64 = norms::ScalarField<f64>;
pub type ScalarFieldF32 = norms::ScalarField<f32>;
pub type QuadratureSpecF64 = quadrature::QuadratureSpec<f64>;
pub type QuadratureSpecF32 = quadrature::QuadratureSpec<f32>;
pub type ReportF64 = verify::VerificationReport<f64>;
pub type ReportF32 = verify::VerificationReport<f32>;
