//! Jacobi analysis on the weighted half-line `((0, ∞), A(x) dx)`.
//!
//! Jacobi functions and the c-function, the Jacobi transform and its
//! inversion, generalized convolution, the heat kernel and heat semigroup,
//! Lorentz norms with respect to `μ`, and the classification of the shifted
//! heat semigroup `e^{-t(Δ_p - θ)}`.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` also rejects NaN

pub mod dynamics;
pub mod error;
pub mod grid;
pub mod heat;
pub mod lorentz;
pub mod measure;
pub mod quadrature;
pub mod special;
pub mod transform;

pub use error::{Error, Result};
pub use grid::{GridSpec, RadialFunction, Spacing};
pub use lorentz::{LorentzIndex, LorentzNorm};
pub use num_complex::Complex64;
pub use special::JacobiParams;
pub use transform::{JacobiTransform, QuadratureConfig, SpectralFunction};
