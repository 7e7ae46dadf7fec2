//! Brown measures of `x0 + c_{α,β}`: a self-adjoint variable with law `μ`
//! plus a free elliptic element, computed directly from `μ`.
//!
//! The building blocks are the Poisson-kernel integrals of `μ`
//! ([`measure`]), the semicircular subordination flow ([`subordination`]),
//! the boundary map and planar density ([`brown_map`]), Hamilton–Jacobi
//! characteristics ([`hj`]), closed forms for a Cauchy input ([`cauchy`]) and a
//! random-matrix laboratory ([`rmt`]).

pub mod brown_map;
pub mod cauchy;
pub mod error;
pub mod exec;
pub mod hj;
pub mod measure;
pub mod quadrature;
pub mod rmt;
pub mod roots;
pub mod subordination;
pub mod svg;
pub mod validation;

pub use error::{Error, Result};
pub use exec::Exec;
pub use measure::{KernelBundle, Measure, MeasureKind, MeasureSpec};
pub use num_complex::Complex64;

/// Library version embedded in every output artifact.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
